//! Exact decision procedures for the axioms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::events::{coind_relation, EventPartition};
use crate::model::{Ltsi, Tr};
use crate::verdict::{Verdict, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomId {
    SP,
    BTI,
    WF,
    PCI,
    IRE,
    CIRE,
    BFCIRE,
    IEC,
    IC,
    CLG,
    LG,
}

impl AxiomId {
    pub const ALL: [AxiomId; 11] = [
        AxiomId::SP,
        AxiomId::BTI,
        AxiomId::WF,
        AxiomId::PCI,
        AxiomId::IRE,
        AxiomId::CIRE,
        AxiomId::BFCIRE,
        AxiomId::IEC,
        AxiomId::IC,
        AxiomId::CLG,
        AxiomId::LG,
    ];

    pub fn needs_events(self) -> bool {
        matches!(
            self,
            AxiomId::IRE | AxiomId::CIRE | AxiomId::BFCIRE | AxiomId::IEC
        )
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for AxiomId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        AxiomId::ALL
            .into_iter()
            .find(|a| a.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown axiom `{s}`"))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AxiomError {
    #[error("axiom {0} needs an event partition")]
    EventsRequired(AxiomId),
}

pub fn check_axiom(
    l: &Ltsi,
    a: AxiomId,
    ev: Option<&EventPartition>,
) -> Result<Verdict, AxiomError> {
    let need = || ev.ok_or(AxiomError::EventsRequired(a));
    Ok(match a {
        AxiomId::SP => sp(l),
        AxiomId::BTI => bti(l),
        AxiomId::WF => wf(l),
        AxiomId::PCI => pci(l),
        AxiomId::IRE => ire(l, need()?),
        AxiomId::CIRE => cire(l, need()?),
        AxiomId::BFCIRE => bfcire(l, need()?),
        AxiomId::IEC => iec(l, need()?),
        AxiomId::IC => ic(l),
        AxiomId::CLG => clg(l).0,
        AxiomId::LG => lg(l).0,
    })
}

/// Square property: every coinitial ι pair has a cofinal completion.
pub fn sp(l: &Ltsi) -> Verdict {
    for (t, u) in l.ind_pairs() {
        if l.coinitial(t, u) && l.completions(t, u).is_empty() {
            return Verdict::fails(Witness::Pair(t, u));
        }
    }
    Verdict::holds()
}

/// Backward transitions independent: distinct coinitial backward
/// transitions are independent.
pub fn bti(l: &Ltsi) -> Verdict {
    let mut best: Option<(Tr, Tr)> = None;
    for s in 0..l.n_states() {
        let back: Vec<Tr> = l.out(s).iter().copied().filter(|t| !t.is_fwd()).collect();
        for (i, &a) in back.iter().enumerate() {
            for &b in &back[i + 1..] {
                if !l.independent(a, b) {
                    let p = if a < b { (a, b) } else { (b, a) };
                    best = Some(best.map_or(p, |q| q.min(p)));
                }
            }
        }
    }
    match best {
        Some((a, b)) => Verdict::fails(Witness::Pair(a, b)),
        None => Verdict::holds(),
    }
}

/// Well-foundedness, as acyclicity of the forward graph.
pub fn wf(l: &Ltsi) -> Verdict {
    match l.forward_cycle() {
        Some(c) => Verdict::fails(Witness::Cycle(c)),
        None => Verdict::holds(),
    }
}

/// Propagation of coinitial independence around every square.
pub fn pci(l: &Ltsi) -> Verdict {
    for (t, u) in l.ind_ordered() {
        if !l.coinitial(t, u) {
            continue;
        }
        for (u2, t2) in l.completions(t, u) {
            if !l.independent(u2, t.rev()) {
                return Verdict::fails(Witness::Square([t, u, u2, t2], Some((u2, t.rev()))));
            }
        }
    }
    Verdict::holds()
}

/// Independence respects events: `t ∼ t' ι u` implies `t ι u`.
pub fn ire(l: &Ltsi, ev: &EventPartition) -> Verdict {
    let mut best: Option<(Tr, Tr, Tr)> = None;
    for (t2, u) in l.ind_ordered() {
        for &t in ev.members(ev.of(t2)) {
            if t != t2 && !l.independent(t, u) {
                let c = (t, t2, u);
                best = Some(best.map_or(c, |b| b.min(c)));
            }
        }
    }
    match best {
        Some((t, t2, u)) => Verdict::fails(Witness::Triple(t, t2, u)),
        None => Verdict::holds(),
    }
}

/// Coinitial transitions whose events are coinitially independent are independent.
pub fn cire(l: &Ltsi, ev: &EventPartition) -> Verdict {
    cire_filtered(l, ev, |_, _| true)
}

/// CIRE for a backward and a forward transition.
pub fn bfcire(l: &Ltsi, ev: &EventPartition) -> Verdict {
    cire_filtered(l, ev, |a, b| !a.is_fwd() && b.is_fwd())
}

fn cire_filtered(l: &Ltsi, ev: &EventPartition, keep: impl Fn(Tr, Tr) -> bool) -> Verdict {
    let coind = coind_relation(l, ev);
    for s in 0..l.n_states() {
        let out = l.out(s);
        for &a in out {
            for &b in out {
                if a != b
                    && keep(a, b)
                    && coind.contains(&(ev.of(a), ev.of(b)))
                    && !l.independent(a, b)
                {
                    let (x, y) = if a < b { (a, b) } else { (b, a) };
                    return Verdict::fails(Witness::Pair(x, y));
                }
            }
        }
    }
    Verdict::holds()
}

/// Independence of events is coinitial: every ι pair has coinitially
/// independent events.
pub fn iec(l: &Ltsi, ev: &EventPartition) -> Verdict {
    let coind = coind_relation(l, ev);
    for (t, u) in l.ind_pairs() {
        if !coind.contains(&(ev.of(t), ev.of(u))) {
            return Verdict::fails(Witness::Pair(t, u));
        }
    }
    Verdict::holds()
}

/// Independence is coinitial.
pub fn ic(l: &Ltsi) -> Verdict {
    for (t, u) in l.ind_pairs() {
        if !l.coinitial(t, u) {
            return Verdict::fails(Witness::Pair(t, u));
        }
    }
    Verdict::holds()
}

/// A symmetric relation on underlying labels (by label index).
pub type LabelRel = BTreeSet<(usize, usize)>;

fn candidate(l: &Ltsi, coinitial_only: bool) -> LabelRel {
    l.ind_ordered()
        .filter(|&(t, u)| !coinitial_only || l.coinitial(t, u))
        .map(|(t, u)| (l.label(t), l.label(u)))
        .collect()
}

fn reflexive_witness(l: &Ltsi, rel: &LabelRel, coinitial_only: bool) -> Option<Verdict> {
    let x = rel.iter().find(|(a, b)| a == b)?.0;
    let (t, u) = l
        .ind_pairs()
        .find(|&(t, u)| {
            l.label(t) == x && l.label(u) == x && (!coinitial_only || l.coinitial(t, u))
        })
        .expect("candidate pairs come from ι");
    Some(
        Verdict::fails(Witness::Pair(t, u))
            .with_note(format!("label {} related to itself", l.label_name(x))),
    )
}

/// Coinitial label generation: ι is the set of coinitial pairs whose
/// underlying labels are related by an irreflexive `I`. Returns the
/// synthesised `I` on success.
pub fn clg(l: &Ltsi) -> (Verdict, Option<LabelRel>) {
    let rel = candidate(l, true);
    if let Some(v) = reflexive_witness(l, &rel, true) {
        return (v, None);
    }
    if let Some((t, u)) = l.ind_pairs().find(|&(t, u)| !l.coinitial(t, u)) {
        return (
            Verdict::fails(Witness::Pair(t, u)).with_note("independent pair is not coinitial"),
            None,
        );
    }
    for s in 0..l.n_states() {
        let out = l.out(s);
        for &a in out {
            for &b in out {
                if a < b && rel.contains(&(l.label(a), l.label(b))) && !l.independent(a, b) {
                    return (
                        Verdict::fails(Witness::Pair(a, b))
                            .with_note("labels related but pair not independent"),
                        None,
                    );
                }
            }
        }
    }
    (Verdict::holds(), Some(rel))
}

/// Label generation: ι is the set of all pairs whose underlying labels
/// are related by an irreflexive `I`.
pub fn lg(l: &Ltsi) -> (Verdict, Option<LabelRel>) {
    let rel = candidate(l, false);
    if let Some(v) = reflexive_witness(l, &rel, false) {
        return (v, None);
    }
    // With `I` irreflexive, every directed pair with related labels is
    // distinct, so ι is generated iff the per-label-pair counts match.
    let mut per_label = vec![0usize; l.labels().len()];
    for t in l.transitions() {
        per_label[t.label] += 2;
    }
    let mut got: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (t, u) in l.ind_ordered() {
        *got.entry((l.label(t), l.label(u))).or_default() += 1;
    }
    for &(x, y) in &rel {
        if got.get(&(x, y)).copied().unwrap_or(0) == per_label[x] * per_label[y] {
            continue;
        }
        let of = |lab: usize| l.all_directed().filter(move |&t| l.label(t) == lab);
        for a in of(x) {
            for b in of(y) {
                if !l.independent(a, b) {
                    let (p, q) = if a < b { (a, b) } else { (b, a) };
                    return (
                        Verdict::fails(Witness::Pair(p, q))
                            .with_note("labels related but pair not independent"),
                        None,
                    );
                }
            }
        }
    }
    (Verdict::holds(), Some(rel))
}

/// SP, BTI, WF and PCI together; the witness is the first failing axiom's.
pub fn is_pre_reversible(l: &Ltsi) -> Verdict {
    for (name, v) in [("SP", sp(l)), ("BTI", bti(l)), ("WF", wf(l)), ("PCI", pci(l))] {
        if v.status.fails() {
            return v.with_note(format!("{name} fails"));
        }
    }
    Verdict::holds()
}

pub fn render_label_rel(l: &Ltsi, rel: &LabelRel) -> String {
    let parts: Vec<String> = rel
        .iter()
        .filter(|(a, b)| a < b)
        .map(|&(a, b)| format!("({}, {})", l.label_name(a), l.label_name(b)))
        .collect();
    format!("{{{}}}", parts.join(", "))
}
