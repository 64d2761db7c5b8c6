//! The LTSI data model: states, forward transitions, their synthesized
//! reverses, and the independence relation over directed transitions.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dir {
    Fwd,
    Bwd,
}

/// A directed transition of the combined system.
///
/// Encodes `(forward index, direction)`; the derived ordering is
/// `(index, direction)` with forward first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tr(u32);

impl Tr {
    pub fn new(idx: usize, dir: Dir) -> Tr {
        Tr((idx as u32) << 1 | (dir == Dir::Bwd) as u32)
    }
    pub fn fwd(idx: usize) -> Tr {
        Tr::new(idx, Dir::Fwd)
    }
    pub fn bwd(idx: usize) -> Tr {
        Tr::new(idx, Dir::Bwd)
    }
    pub fn from_raw(raw: usize) -> Tr {
        Tr(raw as u32)
    }
    pub fn raw(self) -> usize {
        self.0 as usize
    }
    pub fn idx(self) -> usize {
        (self.0 >> 1) as usize
    }
    pub fn dir(self) -> Dir {
        if self.0 & 1 == 0 {
            Dir::Fwd
        } else {
            Dir::Bwd
        }
    }
    pub fn is_fwd(self) -> bool {
        self.0 & 1 == 0
    }
    pub fn rev(self) -> Tr {
        Tr(self.0 ^ 1)
    }
    /// The forward member of `{self, rev self}`.
    pub fn base(self) -> Tr {
        Tr(self.0 & !1)
    }
}

impl fmt::Debug for Tr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_fwd() {
            write!(f, "T{}", self.idx())
        } else {
            write!(f, "~T{}", self.idx())
        }
    }
}

/// A forward transition `src -label-> dst`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub id: String,
    pub src: usize,
    pub label: usize,
    pub dst: usize,
}

/// Signed label: underlying label plus direction.
pub type SLabel = (usize, Dir);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("duplicate transition `{0}`: same source, label and target as `{1}`")]
    DuplicateTransition(String, String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("reflexive independence on `{0}`")]
    ReflexiveIndependence(String),
    #[error("unknown transition reference `{0}`")]
    UnknownTransitionRef(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateStateId(String),
    DuplicateTransitionId(String),
    DuplicateTransition(String, String),
    DanglingState(String),
    DanglingIndependence(Tr, Tr),
    ReflexiveIndependence(Tr),
    AsymmetricIndependence(Tr, Tr),
}

/// A finite labelled transition system with independence, stored as its
/// combined (forward plus reverse) system.
#[derive(Clone)]
pub struct Ltsi {
    states: Vec<String>,
    labels: Vec<String>,
    trans: Vec<Transition>,
    ind: BTreeSet<(Tr, Tr)>,
    out: Vec<Vec<Tr>>,
    partners: Vec<Vec<Tr>>,
    state_ix: HashMap<String, usize>,
    trans_ix: HashMap<String, usize>,
}

impl fmt::Debug for Ltsi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ltsi")
            .field("states", &self.states)
            .field("transitions", &self.trans.len())
            .field("independence", &self.ind.len())
            .finish()
    }
}

impl PartialEq for Ltsi {
    fn eq(&self, other: &Self) -> bool {
        self.states == other.states
            && self.labels == other.labels
            && self.trans == other.trans
            && self.ind == other.ind
    }
}

/// Collects declarations and builds a combined [`Ltsi`].
#[derive(Clone, Debug, Default)]
pub struct LtsiBuilder {
    states: Vec<String>,
    trans: Vec<(String, String, String, String)>,
    ind: Vec<(String, String)>,
}

impl LtsiBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn state(&mut self, id: impl Into<String>) -> &mut Self {
        self.states.push(id.into());
        self
    }

    pub fn states<I, S>(&mut self, ids: I) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        for s in ids {
            self.state(s);
        }
        self
    }

    pub fn transition(
        &mut self,
        id: impl Into<String>,
        src: impl Into<String>,
        label: impl Into<String>,
        dst: impl Into<String>,
    ) -> &mut Self {
        self.trans
            .push((id.into(), src.into(), label.into(), dst.into()));
        self
    }

    /// Declares `a ι b`; references are `tid` or `~tid`.
    pub fn independent(&mut self, a: impl Into<String>, b: impl Into<String>) -> &mut Self {
        self.ind.push((a.into(), b.into()));
        self
    }

    pub fn build(&self) -> Result<Ltsi, BuildError> {
        let mut states = self.states.clone();
        states.sort();
        for w in states.windows(2) {
            if w[0] == w[1] {
                return Err(BuildError::DuplicateId(w[0].clone()));
            }
        }
        let state_ix: HashMap<String, usize> = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();

        let mut decl = self.trans.clone();
        decl.sort();
        for w in decl.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(BuildError::DuplicateId(w[0].0.clone()));
            }
        }
        let mut labels: Vec<String> = decl.iter().map(|t| t.2.clone()).collect();
        labels.sort();
        labels.dedup();
        let label_ix: HashMap<&str, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();

        let mut trans = Vec::with_capacity(decl.len());
        let mut seen: HashMap<(usize, usize, usize), String> = HashMap::new();
        for (id, src, label, dst) in &decl {
            let s = *state_ix
                .get(src)
                .ok_or_else(|| BuildError::UnknownState(src.clone()))?;
            let d = *state_ix
                .get(dst)
                .ok_or_else(|| BuildError::UnknownState(dst.clone()))?;
            let l = label_ix[label.as_str()];
            if let Some(prev) = seen.insert((s, l, d), id.clone()) {
                return Err(BuildError::DuplicateTransition(id.clone(), prev));
            }
            trans.push(Transition {
                id: id.clone(),
                src: s,
                label: l,
                dst: d,
            });
        }
        let trans_ix: HashMap<String, usize> = trans
            .iter()
            .enumerate()
            .map(|(i, t)| (t.id.clone(), i))
            .collect();

        let mut ind = BTreeSet::new();
        for (a, b) in &self.ind {
            let ta = resolve_ref(&trans_ix, a)?;
            let tb = resolve_ref(&trans_ix, b)?;
            if ta == tb {
                return Err(BuildError::ReflexiveIndependence(a.clone()));
            }
            ind.insert((ta, tb));
            ind.insert((tb, ta));
        }
        Ok(Ltsi::assemble(states, labels, trans, ind))
    }
}

fn resolve_ref(ix: &HashMap<String, usize>, r: &str) -> Result<Tr, BuildError> {
    let (name, dir) = match r.strip_prefix('~') {
        Some(n) => (n, Dir::Bwd),
        None => (r, Dir::Fwd),
    };
    ix.get(name)
        .map(|&i| Tr::new(i, dir))
        .ok_or_else(|| BuildError::UnknownTransitionRef(r.to_string()))
}

impl Ltsi {
    fn assemble(
        states: Vec<String>,
        labels: Vec<String>,
        trans: Vec<Transition>,
        ind: BTreeSet<(Tr, Tr)>,
    ) -> Ltsi {
        let n = states.len();
        let mut out = vec![Vec::new(); n];
        for (i, t) in trans.iter().enumerate() {
            if t.src < n {
                out[t.src].push(Tr::fwd(i));
            }
            if t.dst < n {
                out[t.dst].push(Tr::bwd(i));
            }
        }
        for o in &mut out {
            o.sort();
        }
        let mut partners = vec![Vec::new(); 2 * trans.len()];
        for &(a, b) in &ind {
            if a.raw() < partners.len() {
                partners[a.raw()].push(b);
            }
        }
        let state_ix = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let trans_ix = trans
            .iter()
            .enumerate()
            .map(|(i, t)| (t.id.clone(), i))
            .collect();
        Ltsi {
            states,
            labels,
            trans,
            ind,
            out,
            partners,
            state_ix,
            trans_ix,
        }
    }

    /// Builds an LTSI from raw parts without any checking or symmetric
    /// closure. Intended for [`validate`] and tests.
    pub fn from_parts_unchecked(
        states: Vec<String>,
        labels: Vec<String>,
        trans: Vec<Transition>,
        ind: impl IntoIterator<Item = (Tr, Tr)>,
    ) -> Ltsi {
        Ltsi::assemble(states, labels, trans, ind.into_iter().collect())
    }

    /// Same system, independence replaced by the symmetric closure of `pairs`.
    /// Reflexive pairs are dropped.
    pub fn with_independence(&self, pairs: impl IntoIterator<Item = (Tr, Tr)>) -> Ltsi {
        let mut ind = BTreeSet::new();
        for (a, b) in pairs {
            if a != b {
                ind.insert((a, b));
                ind.insert((b, a));
            }
        }
        Ltsi::assemble(
            self.states.clone(),
            self.labels.clone(),
            self.trans.clone(),
            ind,
        )
    }

    pub fn empty() -> Ltsi {
        Ltsi::assemble(Vec::new(), Vec::new(), Vec::new(), BTreeSet::new())
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }
    pub fn n_forward(&self) -> usize {
        self.trans.len()
    }
    pub fn n_directed(&self) -> usize {
        2 * self.trans.len()
    }
    pub fn states(&self) -> &[String] {
        &self.states
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn transitions(&self) -> &[Transition] {
        &self.trans
    }
    pub fn state_name(&self, s: usize) -> &str {
        &self.states[s]
    }
    pub fn label_name(&self, l: usize) -> &str {
        &self.labels[l]
    }
    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.state_ix.get(name).copied()
    }
    pub fn transition_index(&self, id: &str) -> Option<usize> {
        self.trans_ix.get(id).copied()
    }

    /// Resolves `tid` or `~tid`.
    pub fn parse_ref(&self, r: &str) -> Option<Tr> {
        resolve_ref(&self.trans_ix, r).ok()
    }

    pub fn all_directed(&self) -> impl Iterator<Item = Tr> {
        (0..2 * self.trans.len()).map(Tr::from_raw)
    }

    pub fn src(&self, t: Tr) -> usize {
        let x = &self.trans[t.idx()];
        if t.is_fwd() {
            x.src
        } else {
            x.dst
        }
    }
    pub fn dst(&self, t: Tr) -> usize {
        let x = &self.trans[t.idx()];
        if t.is_fwd() {
            x.dst
        } else {
            x.src
        }
    }
    /// Underlying label `und(ℓ(t))`.
    pub fn label(&self, t: Tr) -> usize {
        self.trans[t.idx()].label
    }
    pub fn slabel(&self, t: Tr) -> SLabel {
        (self.label(t), t.dir())
    }

    /// `tid` or `~tid`.
    pub fn tr_name(&self, t: Tr) -> String {
        let id = &self.trans[t.idx()].id;
        if t.is_fwd() {
            id.clone()
        } else {
            format!("~{id}")
        }
    }

    /// Long form `(P,a,Q)` / `(Q,~a,P)`.
    pub fn tr_long(&self, t: Tr) -> String {
        let l = &self.labels[self.label(t)];
        let sign = if t.is_fwd() { "" } else { "~" };
        format!(
            "({},{}{},{})",
            self.states[self.src(t)],
            sign,
            l,
            self.states[self.dst(t)]
        )
    }

    /// Directed transitions leaving `s`, sorted.
    pub fn out(&self, s: usize) -> &[Tr] {
        &self.out[s]
    }

    pub fn independent(&self, a: Tr, b: Tr) -> bool {
        self.ind.contains(&(a, b))
    }

    /// Partners of `t` under ι, sorted.
    pub fn partners(&self, t: Tr) -> &[Tr] {
        &self.partners[t.raw()]
    }

    /// All ordered ι pairs (both orientations).
    pub fn ind_ordered(&self) -> impl Iterator<Item = (Tr, Tr)> + '_ {
        self.ind.iter().copied()
    }

    /// Each unordered ι pair once, as `(a, b)` with `a < b`.
    pub fn ind_pairs(&self) -> impl Iterator<Item = (Tr, Tr)> + '_ {
        self.ind.iter().copied().filter(|(a, b)| a < b)
    }

    pub fn ind_set(&self) -> &BTreeSet<(Tr, Tr)> {
        &self.ind
    }

    pub fn ind_is_empty(&self) -> bool {
        self.ind.is_empty()
    }

    pub fn coinitial(&self, a: Tr, b: Tr) -> bool {
        self.src(a) == self.src(b)
    }

    /// States with no incoming forward transition.
    pub fn irr(&self) -> Vec<usize> {
        (0..self.states.len())
            .filter(|&s| self.out[s].iter().all(|t| t.is_fwd()))
            .collect()
    }

    pub fn is_irr(&self, s: usize) -> bool {
        self.out[s].iter().all(|t| t.is_fwd())
    }

    /// Cofinal completions `(u', t')` of the coinitial pair `(t, u)`:
    /// `u': dst t -β-> S`, `t': dst u -α-> S`.
    pub fn completions(&self, t: Tr, u: Tr) -> Vec<(Tr, Tr)> {
        let mut res = Vec::new();
        let (la, lb) = (self.slabel(t), self.slabel(u));
        for &u2 in &self.out[self.dst(t)] {
            if self.slabel(u2) != lb {
                continue;
            }
            for &t2 in &self.out[self.dst(u)] {
                if self.slabel(t2) == la && self.dst(t2) == self.dst(u2) {
                    res.push((u2, t2));
                }
            }
        }
        res
    }

    /// Side condition on a square generated by `t`, `u` with completion `u2`:
    /// `Q ≠ R` for same-polarity generators, `P ≠ S` otherwise.
    pub fn nondegenerate(&self, t: Tr, u: Tr, u2: Tr) -> bool {
        if t.dir() == u.dir() {
            self.dst(t) != self.dst(u)
        } else {
            self.src(t) != self.dst(u2)
        }
    }

    /// A forward cycle, if any; the first one met by depth-first search in
    /// state and transition order.
    pub fn forward_cycle(&self) -> Option<Vec<Tr>> {
        let n = self.states.len();
        let mut colour = vec![0u8; n];
        for root in 0..n {
            if colour[root] != 0 {
                continue;
            }
            // frames: (state, next out index); trs[i] leads from frame i to i+1
            let mut frames: Vec<(usize, usize)> = vec![(root, 0)];
            let mut trs: Vec<Tr> = Vec::new();
            colour[root] = 1;
            while let Some(&(s, k)) = frames.last() {
                let next = self.out[s][k..].iter().position(|t| t.is_fwd());
                match next {
                    Some(off) => {
                        let t = self.out[s][k + off];
                        frames.last_mut().unwrap().1 = k + off + 1;
                        let d = self.dst(t);
                        if colour[d] == 1 {
                            let i = frames.iter().position(|f| f.0 == d).unwrap();
                            let mut cyc = trs[i..].to_vec();
                            cyc.push(t);
                            return Some(cyc);
                        }
                        if colour[d] == 0 {
                            colour[d] = 1;
                            trs.push(t);
                            frames.push((d, 0));
                        }
                    }
                    None => {
                        colour[s] = 2;
                        frames.pop();
                        trs.pop();
                    }
                }
            }
        }
        None
    }

    /// Length of the longest forward-only path, if the forward graph is acyclic.
    pub fn longest_forward_path(&self) -> Option<usize> {
        let order = self.topo_order()?;
        let mut best = vec![0usize; self.states.len()];
        for &s in order.iter().rev() {
            for &t in &self.out[s] {
                if t.is_fwd() {
                    best[s] = best[s].max(best[self.dst(t)] + 1);
                }
            }
        }
        Some(best.into_iter().max().unwrap_or(0))
    }

    /// Topological order of states along forward transitions.
    pub fn topo_order(&self) -> Option<Vec<usize>> {
        let n = self.states.len();
        let mut indeg = vec![0usize; n];
        for t in &self.trans {
            indeg[t.dst] += 1;
        }
        let mut ready: BTreeSet<usize> = (0..n).filter(|&s| indeg[s] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(s) = ready.pop_first() {
            order.push(s);
            for &t in &self.out[s] {
                if t.is_fwd() {
                    let d = self.dst(t);
                    indeg[d] -= 1;
                    if indeg[d] == 0 {
                        ready.insert(d);
                    }
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Longest simple forward path, computed by search when the forward graph
    /// has cycles.
    pub fn longest_simple_forward_path(&self) -> usize {
        if let Some(l) = self.longest_forward_path() {
            return l;
        }
        let n = self.states.len();
        let mut best = 0;
        let mut on = vec![false; n];
        fn go(l: &Ltsi, s: usize, depth: usize, on: &mut [bool], best: &mut usize) {
            *best = (*best).max(depth);
            on[s] = true;
            for &t in l.out(s) {
                if t.is_fwd() && !on[l.dst(t)] {
                    go(l, l.dst(t), depth + 1, on, best);
                }
            }
            on[s] = false;
        }
        for s in 0..n {
            go(self, s, 0, &mut on, &mut best);
        }
        best
    }
}

/// Checks the structural invariants of an LTSI.
pub fn validate(l: &Ltsi) -> Vec<Violation> {
    let mut v = Vec::new();
    let mut seen = BTreeSet::new();
    for s in &l.states {
        if !seen.insert(s) {
            v.push(Violation::DuplicateStateId(s.clone()));
        }
    }
    let mut ids = BTreeSet::new();
    let mut triples: HashMap<(usize, usize, usize), &str> = HashMap::new();
    for t in &l.trans {
        if !ids.insert(&t.id) {
            v.push(Violation::DuplicateTransitionId(t.id.clone()));
        }
        if t.src >= l.states.len() || t.dst >= l.states.len() {
            v.push(Violation::DanglingState(t.id.clone()));
        }
        if let Some(prev) = triples.insert((t.src, t.label, t.dst), &t.id) {
            v.push(Violation::DuplicateTransition(t.id.clone(), prev.to_string()));
        }
    }
    let n = 2 * l.trans.len();
    for &(a, b) in &l.ind {
        if a.raw() >= n || b.raw() >= n {
            v.push(Violation::DanglingIndependence(a, b));
            continue;
        }
        if a == b {
            v.push(Violation::ReflexiveIndependence(a));
        }
        if !l.ind.contains(&(b, a)) {
            v.push(Violation::AsymmetricIndependence(a, b));
        }
    }
    v
}

/// Least fixpoint adding all distinct coinitial backward pairs and
/// propagating independence around commuting squares.
///
/// A propagation step that would relate a transition to itself is skipped.
pub fn saturate_coinitial(l: &Ltsi) -> Ltsi {
    let mut ind: BTreeSet<(Tr, Tr)> = l.ind.clone();
    for s in 0..l.n_states() {
        let back: Vec<Tr> = l.out(s).iter().copied().filter(|t| !t.is_fwd()).collect();
        for &a in &back {
            for &b in &back {
                if a != b {
                    ind.insert((a, b));
                }
            }
        }
    }
    let mut frontier: Vec<(Tr, Tr)> = ind.iter().copied().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (t, u) in frontier {
            if !l.coinitial(t, u) {
                continue;
            }
            for (u2, _t2) in l.completions(t, u) {
                let p = (u2, t.rev());
                if p.0 != p.1 && !ind.contains(&p) {
                    ind.insert(p);
                    ind.insert((p.1, p.0));
                    next.push(p);
                    next.push((p.1, p.0));
                }
            }
        }
        frontier = next;
    }
    l.with_independence(ind)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UnionError {
    #[error("state `{0}` occurs in both systems")]
    StateClash(String),
    #[error("transition `{0}` occurs in both systems")]
    TransitionClash(String),
}

/// Componentwise union. With `namespaced`, ids are prefixed `1.` and `2.`.
pub fn disjoint_union(l1: &Ltsi, l2: &Ltsi, namespaced: bool) -> Result<Ltsi, UnionError> {
    let pre = |k: u8, s: &str| {
        if namespaced {
            format!("{k}.{s}")
        } else {
            s.to_string()
        }
    };
    let mut b = LtsiBuilder::new();
    let mut names = BTreeSet::new();
    for (k, l) in [(1u8, l1), (2u8, l2)] {
        for s in &l.states {
            let n = pre(k, s);
            if !names.insert(n.clone()) {
                return Err(UnionError::StateClash(n));
            }
            b.state(n);
        }
    }
    let mut tids = BTreeSet::new();
    for (k, l) in [(1u8, l1), (2u8, l2)] {
        for t in &l.trans {
            let id = pre(k, &t.id);
            if !tids.insert(id.clone()) {
                return Err(UnionError::TransitionClash(id));
            }
            b.transition(
                id,
                pre(k, &l.states[t.src]),
                l.labels[t.label].clone(),
                pre(k, &l.states[t.dst]),
            );
        }
        for (a, c) in l.ind_pairs() {
            let r = |t: Tr| {
                let id = pre(k, &l.trans[t.idx()].id);
                if t.is_fwd() {
                    id
                } else {
                    format!("~{id}")
                }
            };
            b.independent(r(a), r(c));
        }
    }
    Ok(b.build().expect("union of valid systems is valid"))
}

/// A composable sequence of directed transitions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub start: usize,
    pub steps: Vec<Tr>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("unknown transition `{0}`")]
    UnknownTransition(String),
    #[error("step {0} does not start where the previous one ends")]
    NotComposable(usize),
    #[error("empty path needs an explicit start state")]
    NoStart,
}

impl Path {
    pub fn empty(start: usize) -> Path {
        Path {
            start,
            steps: Vec::new(),
        }
    }

    pub fn new(l: &Ltsi, start: usize, steps: Vec<Tr>) -> Result<Path, PathError> {
        let mut at = start;
        for (i, &t) in steps.iter().enumerate() {
            if l.src(t) != at {
                return Err(PathError::NotComposable(i));
            }
            at = l.dst(t);
        }
        Ok(Path { start, steps })
    }

    /// Parses `t1 ~t2 t3`. An empty literal needs `start`.
    pub fn parse(l: &Ltsi, text: &str, start: Option<usize>) -> Result<Path, PathError> {
        let mut steps = Vec::new();
        for w in text.split_whitespace() {
            steps.push(
                l.parse_ref(w)
                    .ok_or_else(|| PathError::UnknownTransition(w.to_string()))?,
            );
        }
        let start = match (steps.first(), start) {
            (Some(&t), _) => l.src(t),
            (None, Some(s)) => s,
            (None, None) => return Err(PathError::NoStart),
        };
        Path::new(l, start, steps)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
    pub fn end(&self, l: &Ltsi) -> usize {
        self.steps.last().map_or(self.start, |&t| l.dst(t))
    }
    pub fn is_forward_only(&self) -> bool {
        self.steps.iter().all(|t| t.is_fwd())
    }
    pub fn is_backward_only(&self) -> bool {
        self.steps.iter().all(|t| !t.is_fwd())
    }
    pub fn is_rooted(&self, l: &Ltsi) -> bool {
        l.is_irr(self.start)
    }
    /// Backward-only prefix followed by forward-only suffix.
    pub fn is_parabolic(&self) -> bool {
        let k = self.steps.iter().take_while(|t| !t.is_fwd()).count();
        self.steps[k..].iter().all(|t| t.is_fwd())
    }

    pub fn reverse(&self, l: &Ltsi) -> Path {
        Path {
            start: self.end(l),
            steps: self.steps.iter().rev().map(|t| t.rev()).collect(),
        }
    }

    pub fn concat(&self, other: &Path) -> Path {
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        Path {
            start: self.start,
            steps,
        }
    }

    /// Space-separated refs; `ε` for the empty path.
    pub fn render(&self, l: &Ltsi) -> String {
        if self.steps.is_empty() {
            return "ε".to_string();
        }
        self.steps
            .iter()
            .map(|&t| l.tr_name(t))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Per-label signed counts (reverse steps count negatively).
    pub fn label_counts(&self, l: &Ltsi) -> Vec<i64> {
        let mut c = vec![0i64; l.labels().len()];
        for &t in &self.steps {
            c[l.label(t)] += if t.is_fwd() { 1 } else { -1 };
        }
        c
    }
}
