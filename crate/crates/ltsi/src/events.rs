//! Events as classes of transitions identified across commuting squares,
//! signed occurrence counting, and the derived relations on events.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::model::{Ltsi, Path, Tr};
use crate::verdict::{Verdict, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventMode {
    /// Squares need independence at all four corners plus the side conditions.
    General,
    /// Squares need only their generating pair to be independent.
    Simplified,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EventsError {
    #[error("simplified events requested on a system that is not pre-reversible")]
    ModeUnsound,
    #[error("no irreversible state: rooted paths do not exist")]
    NoRoot,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // keep the smaller index as root so roots are class minima
        if ra < rb {
            self.parent[rb] = ra;
        } else {
            self.parent[ra] = rb;
        }
        true
    }
}

/// The partition of directed transitions into events.
#[derive(Clone, Debug)]
pub struct EventPartition {
    pub mode: EventMode,
    class_of: Vec<usize>,
    members: Vec<Vec<Tr>>,
    rev: Vec<usize>,
    /// `(a, b, step)`: `a ∼ b` by a square whose side `step` runs from
    /// the target of `a` to the target of `b`.
    ladder: Vec<(Tr, Tr, Tr)>,
}

/// Computes events without checking whether `mode` is sound for `l`.
pub fn compute_events(l: &Ltsi, mode: EventMode) -> EventPartition {
    let n = l.n_directed();
    let mut uf = UnionFind::new(n);
    let mut ladder = Vec::new();
    for (t, u) in l.ind_ordered() {
        if !l.coinitial(t, u) {
            continue;
        }
        for (u2, t2) in l.completions(t, u) {
            if mode == EventMode::General {
                let corners = l.independent(u.rev(), t2)
                    && l.independent(t2.rev(), u2.rev())
                    && l.independent(u2, t.rev());
                if !corners || !l.nondegenerate(t, u, u2) {
                    continue;
                }
            }
            uf.union(t.raw(), t2.raw());
            uf.union(t.rev().raw(), t2.rev().raw());
            ladder.push((t, t2, u2));
            ladder.push((t.rev(), t2.rev(), u));
        }
    }
    // classes are numbered by their least member
    let mut root_to_class: HashMap<usize, usize> = HashMap::new();
    let mut class_of = vec![0; n];
    let mut members: Vec<Vec<Tr>> = Vec::new();
    for x in 0..n {
        let r = uf.find(x);
        let c = *root_to_class.entry(r).or_insert_with(|| {
            members.push(Vec::new());
            members.len() - 1
        });
        class_of[x] = c;
        members[c].push(Tr::from_raw(x));
    }
    let rev = members
        .iter()
        .map(|m| class_of[m[0].rev().raw()])
        .collect();
    EventPartition {
        mode,
        class_of,
        members,
        rev,
        ladder,
    }
}

/// Simplified events on pre-reversible systems, general events otherwise.
pub fn default_events(l: &Ltsi) -> EventPartition {
    if crate::axioms::is_pre_reversible(l).status.holds_exact() {
        compute_events(l, EventMode::Simplified)
    } else {
        compute_events(l, EventMode::General)
    }
}

/// Like [`compute_events`] but refuses simplified mode on systems that are
/// not pre-reversible unless `force` is set.
pub fn compute_events_checked(
    l: &Ltsi,
    mode: EventMode,
    force: bool,
) -> Result<EventPartition, EventsError> {
    if mode == EventMode::Simplified
        && !force
        && !crate::axioms::is_pre_reversible(l).status.holds_exact()
    {
        return Err(EventsError::ModeUnsound);
    }
    Ok(compute_events(l, mode))
}

impl EventPartition {
    pub fn len(&self) -> usize {
        self.members.len()
    }
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
    pub fn of(&self, t: Tr) -> usize {
        self.class_of[t.raw()]
    }
    pub fn members(&self, e: usize) -> &[Tr] {
        &self.members[e]
    }
    pub fn rev(&self, e: usize) -> usize {
        self.rev[e]
    }
    pub fn is_forward(&self, e: usize) -> bool {
        self.members[e][0].is_fwd()
    }
    /// The least member, used as the event's identity.
    pub fn rep(&self, e: usize) -> Tr {
        self.members[e][0]
    }
    pub fn same(&self, a: Tr, b: Tr) -> bool {
        self.of(a) == self.of(b)
    }
    pub fn forward_events(&self) -> Vec<usize> {
        (0..self.len()).filter(|&e| self.is_forward(e)).collect()
    }
    pub fn name(&self, l: &Ltsi, e: usize) -> String {
        format!("[{}]", l.tr_name(self.rep(e)))
    }

    /// Signed count of `e` along `p`.
    pub fn count(&self, p: &Path, e: usize) -> i64 {
        let re = self.rev[e];
        p.steps
            .iter()
            .map(|&t| {
                let c = self.of(t);
                (c == e) as i64 - (c == re) as i64
            })
            .sum()
    }

    /// Signed counts of every event along `p`.
    pub fn signature(&self, p: &Path) -> Vec<i64> {
        let mut sig = vec![0i64; self.len()];
        for &t in &p.steps {
            let c = self.of(t);
            sig[c] += 1;
            sig[self.rev[c]] -= 1;
        }
        sig
    }

    /// A path from the target of `a` to the target of `b` made of the
    /// square sides that identified them, if `a ∼ b`.
    pub fn ladder(&self, l: &Ltsi, a: Tr, b: Tr) -> Option<Path> {
        if !self.same(a, b) {
            return None;
        }
        let mut adj: HashMap<Tr, Vec<(Tr, Tr)>> = HashMap::new();
        for &(x, y, s) in &self.ladder {
            adj.entry(x).or_default().push((y, s));
            adj.entry(y).or_default().push((x, s.rev()));
        }
        let mut prev: HashMap<Tr, (Tr, Tr)> = HashMap::new();
        let mut seen = HashSet::from([a]);
        let mut q = VecDeque::from([a]);
        while let Some(x) = q.pop_front() {
            if x == b {
                break;
            }
            for &(y, s) in adj.get(&x).map(|v| v.as_slice()).unwrap_or(&[]) {
                if seen.insert(y) {
                    prev.insert(y, (x, s));
                    q.push_back(y);
                }
            }
        }
        let mut steps = Vec::new();
        let mut x = b;
        while x != a {
            let (p, s) = *prev.get(&x)?;
            steps.push(s);
            x = p;
        }
        steps.reverse();
        Path::new(l, l.dst(a), steps).ok()
    }
}

/// `e ⌣ f` iff some coinitial `t ∈ e`, `u ∈ f` have `t ι u`. Symmetric.
pub fn coind_relation(l: &Ltsi, ev: &EventPartition) -> BTreeSet<(usize, usize)> {
    l.ind_ordered()
        .filter(|&(a, b)| l.coinitial(a, b))
        .map(|(a, b)| (ev.of(a), ev.of(b)))
        .collect()
}

/// Coinitial independence, causality and conflict on events.
#[derive(Clone, Debug)]
pub struct EventRelations {
    coind: BTreeSet<(usize, usize)>,
    /// `leq[e][f]`: every explored rooted path counting `f` positively also
    /// counts `e` positively.
    leq: Vec<Vec<bool>>,
    conflict: Vec<Vec<bool>>,
    /// `None` when ≤ and # are exact, otherwise the rooted-path bound used.
    pub bound: Option<usize>,
}

impl EventRelations {
    pub fn coind(&self, e: usize, f: usize) -> bool {
        self.coind.contains(&(e, f))
    }
    pub fn coind_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.coind.iter().copied()
    }
    pub fn leq(&self, e: usize, f: usize) -> bool {
        self.leq[e][f]
    }
    pub fn lt(&self, e: usize, f: usize) -> bool {
        e != f && self.leq[e][f]
    }
    pub fn conflict(&self, e: usize, f: usize) -> bool {
        self.conflict[e][f]
    }
}

/// A node of rooted-path exploration: state, signed counts, and how it was reached.
pub(crate) struct Node {
    pub state: usize,
    pub counts: Vec<i32>,
    pub parent: Option<(usize, Tr)>,
}

/// Breadth-first exploration of rooted paths, deduplicated on
/// `(state, counts)`. `bound = None` explores forward-only paths
/// exhaustively (the forward graph must be acyclic); otherwise all rooted
/// paths up to `bound` steps.
pub(crate) fn explore_rooted(l: &Ltsi, ev: &EventPartition, bound: Option<usize>) -> Vec<Node> {
    let mut nodes: Vec<Node> = Vec::new();
    let mut seen: HashSet<(usize, Vec<i32>)> = HashSet::new();
    let mut frontier = Vec::new();
    for s in l.irr() {
        let counts = vec![0; ev.len()];
        seen.insert((s, counts.clone()));
        nodes.push(Node {
            state: s,
            counts,
            parent: None,
        });
        frontier.push(nodes.len() - 1);
    }
    let mut depth = 0;
    while !frontier.is_empty() && bound.is_none_or(|b| depth < b) {
        let mut next = Vec::new();
        for i in frontier {
            let s = nodes[i].state;
            for &t in l.out(s) {
                if bound.is_none() && !t.is_fwd() {
                    continue;
                }
                let mut counts = nodes[i].counts.clone();
                let c = ev.of(t);
                counts[c] += 1;
                counts[ev.rev(c)] -= 1;
                let key = (l.dst(t), counts);
                if seen.contains(&key) {
                    continue;
                }
                seen.insert(key.clone());
                nodes.push(Node {
                    state: key.0,
                    counts: key.1,
                    parent: Some((i, t)),
                });
                next.push(nodes.len() - 1);
            }
        }
        frontier = next;
        depth += 1;
    }
    nodes
}

pub(crate) fn node_path(l: &Ltsi, nodes: &[Node], mut i: usize) -> Path {
    let mut steps = Vec::new();
    while let Some((p, t)) = nodes[i].parent {
        steps.push(t);
        i = p;
    }
    steps.reverse();
    Path::new(l, nodes[i].state, steps).expect("explored paths compose")
}

/// Computes ⌣, ≤ and #. Exact over forward-only rooted paths when
/// `exact_forward` (sound for pre-reversible systems), otherwise over all
/// rooted paths up to `bound`.
pub fn compute_relations(
    l: &Ltsi,
    ev: &EventPartition,
    exact_forward: bool,
    bound: usize,
) -> Result<EventRelations, EventsError> {
    if l.n_states() > 0 && l.irr().is_empty() {
        return Err(EventsError::NoRoot);
    }
    let coind = coind_relation(l, ev);
    let nodes = if exact_forward && l.longest_forward_path().is_some() {
        explore_rooted(l, ev, None)
    } else {
        explore_rooted(l, ev, Some(bound))
    };
    let exact = exact_forward && l.longest_forward_path().is_some();
    let n = ev.len();
    let mut configs: HashSet<Vec<bool>> = HashSet::new();
    for node in &nodes {
        configs.insert(node.counts.iter().map(|&c| c > 0).collect());
    }
    let mut leq = vec![vec![true; n]; n];
    let mut conflict = vec![vec![true; n]; n];
    for cfg in &configs {
        let pos: Vec<usize> = (0..n).filter(|&e| cfg[e]).collect();
        for &f in &pos {
            for e in 0..n {
                if !cfg[e] {
                    leq[e][f] = false;
                }
            }
            for &e in &pos {
                conflict[e][f] = false;
            }
        }
    }
    Ok(EventRelations {
        coind,
        leq,
        conflict,
        bound: if exact { None } else { Some(bound) },
    })
}

/// Exactly one of `=`, `<`, `>`, `#`, `⌣` for every pair of forward events.
pub fn check_polychotomy(
    ev: &EventPartition,
    rel: &EventRelations,
    pre_reversible: bool,
) -> Verdict {
    let fwd = ev.forward_events();
    for &e in &fwd {
        for &f in &fwd {
            let cells = [
                e == f,
                rel.lt(e, f),
                rel.lt(f, e),
                rel.conflict(e, f),
                rel.coind(e, f),
            ];
            let k = cells.iter().filter(|&&c| c).count();
            if k != 1 {
                let w = Witness::EventPair(e, f);
                if !pre_reversible {
                    let mut v = Verdict::unknown(format!(
                        "not pre-reversible; {k} relations hold for this pair"
                    ));
                    v.witness = Some(w);
                    return v;
                }
                return Verdict::fails(w).with_note(format!("{k} relations hold"));
            }
        }
    }
    if !pre_reversible {
        return Verdict::unknown("not pre-reversible");
    }
    match rel.bound {
        None => Verdict::holds(),
        Some(b) => Verdict::bounded(b),
    }
}
