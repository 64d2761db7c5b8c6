//! The `c` and `g` mappings between coinitial and general independence,
//! and backward determinism.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::axioms;
use crate::events::EventPartition;
use crate::model::{Ltsi, Tr};
use crate::verdict::{Verdict, Witness};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    /// `t` would become independent of itself because `a ∼ t ∼ b` and `a ι b`.
    #[error("extension along events relates {t:?} to itself via {a:?} ι {b:?}")]
    ReflexivityBreach { t: Tr, a: Tr, b: Tr },
    #[error("independence is not coinitially label-generated")]
    NotLabelGenerated,
}

/// Restricts independence to coinitial pairs.
pub fn map_c(l: &Ltsi) -> Ltsi {
    l.with_independence(l.ind_ordered().filter(|&(a, b)| l.coinitial(a, b)))
}

/// Extends independence along events: `t g(ι) u` iff `t ∼ t' ι u' ∼ u`.
pub fn map_g(l: &Ltsi, ev: &EventPartition) -> Result<Ltsi, MapError> {
    let classes: BTreeSet<(usize, usize)> =
        l.ind_ordered().map(|(a, b)| (ev.of(a), ev.of(b))).collect();
    if let Some(&(e, _)) = classes.iter().find(|(e, f)| e == f) {
        let (a, b) = l
            .ind_ordered()
            .find(|&(a, b)| ev.of(a) == e && ev.of(b) == e)
            .expect("class pair comes from ι");
        return Err(MapError::ReflexivityBreach { t: ev.rep(e), a, b });
    }
    let mut pairs = Vec::new();
    for &(e, f) in &classes {
        for &x in ev.members(e) {
            for &y in ev.members(f) {
                pairs.push((x, y));
            }
        }
    }
    Ok(l.with_independence(pairs))
}

/// Applies the coinitial label relation to every pair of transitions,
/// coinitial or not.
pub fn map_g_by_labels(l: &Ltsi) -> Result<Ltsi, MapError> {
    let (_, rel) = axioms::clg(l);
    let rel = rel.ok_or(MapError::NotLabelGenerated)?;
    let all: Vec<Tr> = l.all_directed().collect();
    let mut pairs = Vec::new();
    for &a in &all {
        for &b in &all {
            if rel.contains(&(l.label(a), l.label(b))) {
                pairs.push((a, b));
            }
        }
    }
    Ok(l.with_independence(pairs))
}

/// At most one incoming forward transition per state.
pub fn check_backward_determinism(l: &Ltsi) -> Verdict {
    let mut first: Vec<Option<Tr>> = vec![None; l.n_states()];
    for (i, t) in l.transitions().iter().enumerate() {
        match first[t.dst] {
            Some(o) => return Verdict::fails(Witness::Pair(o, Tr::fwd(i))),
            None => first[t.dst] = Some(Tr::fwd(i)),
        }
    }
    Verdict::holds()
}
