//! Derived properties: BLD, ID, NRE, RPI, ECh, and causal safety and
//! liveness in their three formulations.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::axioms;
use crate::events::{coind_relation, explore_rooted, node_path, EventPartition, EventRelations};
use crate::model::{Ltsi, Path, Tr};
use crate::verdict::{Offence, Verdict, Witness};

#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropertyId {
    BLD,
    ID,
    NRE,
    RPI,
    CS_i,
    CL_i,
    ECh,
    CS_ci,
    CL_ci,
    CS_ord,
    CL_ord,
}

impl PropertyId {
    pub const ALL: [PropertyId; 11] = [
        PropertyId::BLD,
        PropertyId::ID,
        PropertyId::NRE,
        PropertyId::RPI,
        PropertyId::CS_i,
        PropertyId::CL_i,
        PropertyId::ECh,
        PropertyId::CS_ci,
        PropertyId::CL_ci,
        PropertyId::CS_ord,
        PropertyId::CL_ord,
    ];

    pub fn cs_cl(self) -> Option<(Variant, Direction)> {
        use Direction::*;
        use Variant::*;
        Some(match self {
            PropertyId::CS_i => (I, Safety),
            PropertyId::CL_i => (I, Liveness),
            PropertyId::CS_ci => (Ci, Safety),
            PropertyId::CL_ci => (Ci, Liveness),
            PropertyId::CS_ord => (Ord, Safety),
            PropertyId::CL_ord => (Ord, Liveness),
            _ => return None,
        })
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for PropertyId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        PropertyId::ALL
            .into_iter()
            .find(|p| p.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown property `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Independence of transitions.
    I,
    /// Coinitial independence of events.
    Ci,
    /// Causal order on forward events.
    Ord,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Safety,
    Liveness,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PropError {
    #[error("the causal order is not available")]
    OrderUnavailable,
}

/// Backward label determinism.
pub fn check_bld(l: &Ltsi) -> Verdict {
    for s in 0..l.n_states() {
        let back: Vec<Tr> = l.out(s).iter().copied().filter(|t| !t.is_fwd()).collect();
        for (i, &a) in back.iter().enumerate() {
            if let Some(&b) = back[i + 1..].iter().find(|&&b| l.label(b) == l.label(a)) {
                return Verdict::fails(Witness::Pair(a, b));
            }
        }
    }
    Verdict::holds()
}

/// Independence of diamonds: the generating pair of every non-degenerate
/// diamond is independent.
pub fn check_id(l: &Ltsi) -> Verdict {
    for s in 0..l.n_states() {
        for &t in l.out(s) {
            for &u in l.out(s) {
                if t >= u || l.independent(t, u) {
                    continue;
                }
                for (u2, t2) in l.completions(t, u) {
                    if l.nondegenerate(t, u, u2) {
                        return Verdict::fails(Witness::Square([t, u, u2, t2], Some((t, u))));
                    }
                }
            }
        }
    }
    Verdict::holds()
}

/// Reversing preserves independence.
pub fn check_rpi(l: &Ltsi) -> Verdict {
    for (t, u) in l.ind_ordered() {
        if !l.independent(t.rev(), u) {
            return Verdict::fails(Witness::Pair(t, u)).with_note(format!(
                "{} not independent of {}",
                l.tr_name(t.rev()),
                l.tr_name(u)
            ));
        }
    }
    Verdict::holds()
}

/// Event coherence: transitions of one event are never independent.
pub fn check_ech(l: &Ltsi, ev: &EventPartition) -> Verdict {
    match l.ind_pairs().find(|&(t, u)| ev.same(t, u)) {
        Some((t, u)) => Verdict::fails(Witness::Pair(t, u)),
        None => Verdict::holds(),
    }
}

/// No repeated events on rooted paths.
pub fn check_nre(l: &Ltsi, ev: &EventPartition, bound: usize, use_theorems: bool) -> Verdict {
    if l.n_states() > 0 && l.irr().is_empty() {
        return Verdict::unknown("no irreversible state");
    }
    let prerev = axioms::is_pre_reversible(l).status.holds_exact();
    if use_theorems && prerev {
        return Verdict::derived("pre-reversible");
    }
    let repeated = |nodes: &[crate::events::Node]| {
        nodes.iter().enumerate().find_map(|(i, n)| {
            (0..ev.len())
                .find(|&e| ev.is_forward(e) && n.counts[e] > 1)
                .map(|e| Witness::PathEvent(node_path(l, nodes, i), e))
        })
    };
    let acyclic = l.longest_forward_path().is_some();
    if acyclic {
        if let Some(w) = repeated(&explore_rooted(l, ev, None)) {
            return Verdict::fails(w);
        }
        // Every rooted path is ≈ a forward-only one, and counts are
        // ≈-invariant, on pre-reversible systems.
        if prerev {
            return Verdict::holds();
        }
    }
    match repeated(&explore_rooted(l, ev, Some(bound))) {
        Some(w) => Verdict::fails(w),
        None => Verdict::bounded(bound),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CsClOptions {
    pub bound: usize,
    pub use_theorems: bool,
    /// Search nodes per starting transition before giving up.
    pub node_cap: usize,
}

impl CsClOptions {
    pub fn new(bound: usize) -> Self {
        CsClOptions {
            bound,
            use_theorems: true,
            node_cap: 400_000,
        }
    }
}

/// Causal safety or liveness in the given formulation. `rel` is needed
/// for the ordered variant.
pub fn check_cs_cl(
    l: &Ltsi,
    ev: &EventPartition,
    rel: Option<&EventRelations>,
    variant: Variant,
    dir: Direction,
    opts: CsClOptions,
) -> Result<Verdict, PropError> {
    if variant == Variant::Ord && rel.is_none() {
        return Err(PropError::OrderUnavailable);
    }
    if opts.use_theorems {
        if let Some(v) = by_theorem(l, ev, rel, variant, dir) {
            return Ok(v);
        }
    }
    Ok(search(l, ev, rel, variant, dir, opts))
}

fn by_theorem(
    l: &Ltsi,
    ev: &EventPartition,
    rel: Option<&EventRelations>,
    variant: Variant,
    dir: Direction,
) -> Option<Verdict> {
    if !axioms::is_pre_reversible(l).status.holds_exact() {
        return None;
    }
    match (variant, dir) {
        (Variant::Ci | Variant::Ord, Direction::Safety) => Some(Verdict::derived("pre-reversible")),
        (Variant::I, _) => axioms::ire(l, ev)
            .status
            .holds_exact()
            .then(|| Verdict::derived("pre-reversible+IRE")),
        (Variant::Ci | Variant::Ord, Direction::Liveness) => {
            let v = axioms::bfcire(l, ev);
            if v.status.holds_exact() {
                return Some(Verdict::derived("pre-reversible+BFCIRE"));
            }
            // A failing BFCIRE pair (rev t0, u) is a liveness instance
            // with r = u; confirm it before reporting.
            let Some(Witness::Pair(a, b)) = v.witness else {
                return None;
            };
            let (back, u) = if a.is_fwd() { (b, a) } else { (a, b) };
            let t0 = back.rev();
            let r = Path::new(l, l.dst(t0), vec![u]).ok()?;
            let e0 = ev.of(t0);
            let eu = ev.of(u);
            let hyp = match variant {
                Variant::Ci => coind_relation(l, ev).contains(&(ev.of(back), eu)),
                _ => !rel?.lt(e0, eu),
            };
            let undo = ev.members(e0).iter().any(|&m| l.dst(m) == l.dst(u));
            (ev.count(&r, e0) == 0 && hyp && !undo).then(|| {
                Verdict::fails(Witness::Instance {
                    t0,
                    r,
                    offence: Offence::NoUndo,
                })
            })
        }
    }
}

struct Node {
    state: usize,
    counts: Vec<i32>,
    /// Events of steps so far lacking independence with `rev t0` (variant I).
    bad: Vec<bool>,
    parent: Option<(usize, Tr)>,
}

fn search(
    l: &Ltsi,
    ev: &EventPartition,
    rel: Option<&EventRelations>,
    variant: Variant,
    dir: Direction,
    opts: CsClOptions,
) -> Verdict {
    let coind = coind_relation(l, ev);
    let n = ev.len();
    let mut capped = false;
    for t0 in l.all_directed().filter(|t| t.is_fwd()) {
        let e0 = ev.of(t0);
        let rt0 = ev.of(t0.rev());
        let mut nodes = vec![Node {
            state: l.dst(t0),
            counts: vec![0; n],
            bad: vec![false; n],
            parent: None,
        }];
        let mut seen: HashSet<(usize, Vec<i32>, Vec<bool>)> = HashSet::new();
        seen.insert((nodes[0].state, nodes[0].counts.clone(), nodes[0].bad.clone()));
        let mut q = VecDeque::from([(0usize, 0usize)]);
        while let Some((i, depth)) = q.pop_front() {
            let node = &nodes[i];
            if node.counts[e0] == 0 {
                let pos = |e: usize| node.counts[e] > 0;
                let offending: Option<usize> = match variant {
                    Variant::I => (0..n).find(|&e| pos(e) && node.bad[e]),
                    Variant::Ci => (0..n).find(|&e| pos(e) && !coind.contains(&(rt0, e))),
                    Variant::Ord => {
                        let rel = rel.expect("checked by caller");
                        (0..n).find(|&e| pos(e) && ev.is_forward(e) && rel.lt(e0, e))
                    }
                };
                let undo = ev.members(e0).iter().any(|&m| l.dst(m) == node.state);
                let fail = match dir {
                    Direction::Safety => undo && offending.is_some(),
                    Direction::Liveness => !undo && offending.is_none(),
                };
                if fail {
                    let r = path_to(l, &nodes, i);
                    let offence = match (dir, variant, offending) {
                        (Direction::Liveness, ..) => Offence::NoUndo,
                        (_, Variant::I, Some(e)) => Offence::Step(
                            *r.steps
                                .iter()
                                .find(|&&t| ev.of(t) == e && !l.independent(t0.rev(), t))
                                .expect("bad events come from steps"),
                        ),
                        (_, _, Some(e)) => Offence::Event(e),
                        _ => unreachable!(),
                    };
                    return Verdict::fails(Witness::Instance { t0, r, offence });
                }
            }
            if depth == opts.bound {
                continue;
            }
            if nodes.len() > opts.node_cap {
                capped = true;
                break;
            }
            let mut succ = Vec::new();
            for &t in l.out(node.state) {
                let c = ev.of(t);
                let mut counts = node.counts.clone();
                counts[c] += 1;
                counts[ev.rev(c)] -= 1;
                let mut bad = node.bad.clone();
                if variant == Variant::I && !l.independent(t0.rev(), t) {
                    bad[c] = true;
                }
                let key = (l.dst(t), counts, bad);
                if seen.contains(&key) {
                    continue;
                }
                seen.insert(key.clone());
                succ.push((key, t));
            }
            for ((state, counts, bad), t) in succ {
                nodes.push(Node {
                    state,
                    counts,
                    bad,
                    parent: Some((i, t)),
                });
                q.push_back((nodes.len() - 1, depth + 1));
            }
        }
    }
    if capped {
        Verdict::unknown(format!("search capped at {} nodes", opts.node_cap))
    } else {
        Verdict::bounded(opts.bound)
    }
}

fn path_to(l: &Ltsi, nodes: &[Node], mut i: usize) -> Path {
    let mut steps = Vec::new();
    while let Some((p, t)) = nodes[i].parent {
        steps.push(t);
        i = p;
    }
    steps.reverse();
    Path::new(l, nodes[i].state, steps).expect("search paths compose")
}

/// Re-checks a CS/CL failure witness against the definitions.
pub fn confirm_instance(
    l: &Ltsi,
    ev: &EventPartition,
    rel: Option<&EventRelations>,
    variant: Variant,
    dir: Direction,
    w: &Witness,
) -> bool {
    let Witness::Instance { t0, r, .. } = w else {
        return false;
    };
    let (t0, r) = (*t0, r);
    if !t0.is_fwd() || r.start != l.dst(t0) || Path::new(l, r.start, r.steps.clone()).is_err() {
        return false;
    }
    let e0 = ev.of(t0);
    if ev.count(r, e0) != 0 {
        return false;
    }
    let sig = ev.signature(r);
    let coind = coind_relation(l, ev);
    let ok_conclusion = match variant {
        Variant::I => r
            .steps
            .iter()
            .all(|&t| sig[ev.of(t)] <= 0 || l.independent(t0.rev(), t)),
        Variant::Ci => (0..ev.len()).all(|e| sig[e] <= 0 || coind.contains(&(ev.of(t0.rev()), e))),
        Variant::Ord => match rel {
            Some(rel) => (0..ev.len()).all(|e| sig[e] <= 0 || !ev.is_forward(e) || !rel.lt(e0, e)),
            None => return false,
        },
    };
    let undo = ev.members(e0).iter().any(|&m| l.dst(m) == r.end(l));
    match dir {
        Direction::Safety => undo && !ok_conclusion,
        Direction::Liveness => ok_conclusion && !undo,
    }
}
