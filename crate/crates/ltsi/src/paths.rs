//! Path enumeration, causal equivalence by bounded rewriting, parabolic
//! normal forms, and the PL, CC and UT checks.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::axioms;
use crate::events::{compute_events, EventMode, EventPartition};
use crate::model::{Ltsi, Path, Tr};
use crate::verdict::{Verdict, Witness};

/// Every path from `from` (ending at `to` if given) with at most `max_len`
/// steps, ordered by length then steps.
pub fn enumerate_paths(l: &Ltsi, from: usize, to: Option<usize>, max_len: usize) -> Vec<Path> {
    let mut out = Vec::new();
    let mut steps = Vec::new();
    fn go(
        l: &Ltsi,
        s: usize,
        to: Option<usize>,
        left: usize,
        from: usize,
        steps: &mut Vec<Tr>,
        out: &mut Vec<Path>,
    ) {
        if to.is_none_or(|t| t == s) {
            out.push(Path {
                start: from,
                steps: steps.clone(),
            });
        }
        if left == 0 {
            return;
        }
        for &t in l.out(s) {
            steps.push(t);
            go(l, l.dst(t), to, left - 1, from, steps, out);
            steps.pop();
        }
    }
    go(l, from, to, max_len, from, &mut steps, &mut out);
    out.sort_by(|a, b| (a.len(), &a.steps).cmp(&(b.len(), &b.steps)));
    out
}

/// Backward-only then forward-only paths from `from` to `to` of at most
/// `max_len` steps, ordered by length then steps.
pub fn parabolic_paths(l: &Ltsi, from: usize, to: usize, max_len: usize) -> Vec<Path> {
    let mut out = Vec::new();
    fn fwd(l: &Ltsi, s: usize, to: usize, left: usize, steps: &mut Vec<Tr>, acc: &mut Vec<Vec<Tr>>) {
        if s == to {
            acc.push(steps.clone());
        }
        if left == 0 {
            return;
        }
        for &t in l.out(s).iter().filter(|t| t.is_fwd()) {
            steps.push(t);
            fwd(l, l.dst(t), to, left - 1, steps, acc);
            steps.pop();
        }
    }
    fn bwd(l: &Ltsi, s: usize, to: usize, left: usize, steps: &mut Vec<Tr>, acc: &mut Vec<Vec<Tr>>) {
        fwd(l, s, to, left, steps, acc);
        if left == 0 {
            return;
        }
        for &t in l.out(s).iter().filter(|t| !t.is_fwd()) {
            steps.push(t);
            bwd(l, l.dst(t), to, left - 1, steps, acc);
            steps.pop();
        }
    }
    let mut acc = Vec::new();
    bwd(l, from, to, max_len, &mut Vec::new(), &mut acc);
    for steps in acc {
        out.push(Path { start: from, steps });
    }
    out.sort_by(|a, b| (a.len(), &a.steps).cmp(&(b.len(), &b.steps)));
    out.dedup();
    out
}

/// One step of a rewrite trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rewrite {
    /// Replace `old` at positions `at, at+1` by `new`; the square's
    /// generating pair is `(old.0, new.0)`.
    Swap { at: usize, old: (Tr, Tr), new: (Tr, Tr) },
    /// Remove `t · rev t` at `at`.
    Cancel { at: usize, t: Tr },
    /// Insert `t · rev t` at `at`.
    Insert { at: usize, t: Tr },
}

impl Rewrite {
    pub fn inverse(self) -> Rewrite {
        match self {
            Rewrite::Swap { at, old, new } => Rewrite::Swap { at, old: new, new: old },
            Rewrite::Cancel { at, t } => Rewrite::Insert { at, t },
            Rewrite::Insert { at, t } => Rewrite::Cancel { at, t },
        }
    }
    pub fn render(&self, l: &Ltsi) -> String {
        match self {
            Rewrite::Swap { at, .. } => format!("swap@{at}"),
            Rewrite::Cancel { at, .. } => format!("cancel@{at}"),
            Rewrite::Insert { at, t } => format!("insert@{at}({})", l.tr_name(*t)),
        }
    }
}

pub fn invert_trace(trace: &[Rewrite]) -> Vec<Rewrite> {
    trace.iter().rev().map(|r| r.inverse()).collect()
}

pub fn render_trace(l: &Ltsi, trace: &[Rewrite]) -> String {
    let parts: Vec<String> = trace.iter().map(|r| r.render(l)).collect();
    format!("[{}]", parts.join(", "))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReplayError {
    #[error("step {0} does not apply")]
    Inapplicable(usize),
    #[error("replay ends at a different path")]
    WrongResult,
}

fn swap_legal(l: &Ltsi, old: (Tr, Tr), new: (Tr, Tr)) -> bool {
    let ((a, b), (c, d)) = (old, new);
    l.dst(a) == l.src(b)
        && l.dst(c) == l.src(d)
        && l.coinitial(a, c)
        && l.independent(a, c)
        && l.slabel(c) == l.slabel(b)
        && l.slabel(d) == l.slabel(a)
        && l.dst(b) == l.dst(d)
}

fn apply(l: &Ltsi, start: usize, steps: &mut Vec<Tr>, rw: Rewrite) -> bool {
    match rw {
        Rewrite::Swap { at, old, new } => {
            if at + 1 >= steps.len() || (steps[at], steps[at + 1]) != old || !swap_legal(l, old, new) {
                return false;
            }
            steps[at] = new.0;
            steps[at + 1] = new.1;
        }
        Rewrite::Cancel { at, t } => {
            if at + 1 >= steps.len() || steps[at] != t || steps[at + 1] != t.rev() {
                return false;
            }
            steps.drain(at..at + 2);
        }
        Rewrite::Insert { at, t } => {
            let here = if at == 0 { start } else { l.dst(steps[at - 1]) };
            if at > steps.len() || l.src(t) != here {
                return false;
            }
            steps.splice(at..at, [t, t.rev()]);
        }
    }
    true
}

/// Applies `trace` to `r`, checking every step.
pub fn replay(l: &Ltsi, r: &Path, trace: &[Rewrite]) -> Result<Path, ReplayError> {
    let mut steps = r.steps.clone();
    for (i, &rw) in trace.iter().enumerate() {
        if !apply(l, r.start, &mut steps, rw) {
            return Err(ReplayError::Inapplicable(i));
        }
    }
    Ok(Path { start: r.start, steps })
}

/// Why two paths cannot be causally equivalent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Endpoints,
    /// Signed count of an underlying label differs.
    LabelCount { label: usize, left: i64, right: i64 },
    /// Signed count of a swap class differs; the class is named by its least member.
    Signature { class: Tr, left: i64, right: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivDecision {
    Yes(Vec<Rewrite>),
    No(Certificate),
    Unknown,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EquivError {
    #[error("causal equivalence needs SP, which fails")]
    PreconditionSP,
}

/// Re-checks a negative certificate from scratch.
pub fn verify_certificate(l: &Ltsi, r: &Path, s: &Path, c: &Certificate) -> bool {
    match *c {
        Certificate::Endpoints => r.start != s.start || r.end(l) != s.end(l),
        Certificate::LabelCount { label, left, right } => {
            left != right && r.label_counts(l)[label] == left && s.label_counts(l)[label] == right
        }
        Certificate::Signature { class, left, right } => {
            let ev = compute_events(l, EventMode::Simplified);
            let e = ev.of(class);
            left != right && ev.count(r, e) == left && ev.count(s, e) == right
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NfError {
    #[error("no parabolic form found; stuck at {0:?} followed by the reverse of {1:?}")]
    Stuck(Tr, Tr),
}

/// Bounded decision procedure for ≈ on one system.
pub struct Equiv<'a> {
    l: &'a Ltsi,
    swap_classes: EventPartition,
    sp_bti: bool,
    pub slack: usize,
    pub node_cap: usize,
}

impl<'a> Equiv<'a> {
    pub fn new(l: &'a Ltsi, slack: usize) -> Result<Equiv<'a>, EquivError> {
        if axioms::sp(l).status.fails() {
            return Err(EquivError::PreconditionSP);
        }
        Ok(Equiv {
            l,
            // Swaps preserve counts over classes closed under every
            // ι-generated square, whatever the axioms.
            swap_classes: compute_events(l, EventMode::Simplified),
            sp_bti: !axioms::bti(l).status.fails(),
            slack,
            node_cap: 200_000,
        })
    }

    pub fn certificate(&self, r: &Path, s: &Path) -> Option<Certificate> {
        let l = self.l;
        if r.start != s.start || r.end(l) != s.end(l) {
            return Some(Certificate::Endpoints);
        }
        let (lr, ls) = (r.label_counts(l), s.label_counts(l));
        if let Some(i) = (0..lr.len()).find(|&i| lr[i] != ls[i]) {
            return Some(Certificate::LabelCount {
                label: i,
                left: lr[i],
                right: ls[i],
            });
        }
        let ev = &self.swap_classes;
        let (sr, ss) = (ev.signature(r), ev.signature(s));
        (0..sr.len()).find(|&e| sr[e] != ss[e]).map(|e| Certificate::Signature {
            class: ev.rep(e),
            left: sr[e],
            right: ss[e],
        })
    }

    pub fn decide(&self, r: &Path, s: &Path) -> EquivDecision {
        if let Some(c) = self.certificate(r, s) {
            return EquivDecision::No(c);
        }
        if r.steps == s.steps {
            return EquivDecision::Yes(Vec::new());
        }
        if self.sp_bti {
            if let (Ok((nr, tr)), Ok((ns, ts))) = (self.constructive_nf(r), self.constructive_nf(s)) {
                let mid = if nr.steps == ns.steps {
                    Some(Vec::new())
                } else {
                    self.search(&nr, &ns)
                };
                if let Some(mid) = mid {
                    let mut trace = tr;
                    trace.extend(mid);
                    trace.extend(invert_trace(&ts));
                    return EquivDecision::Yes(trace);
                }
                return EquivDecision::Unknown;
            }
        }
        match self.search(r, s) {
            Some(t) => EquivDecision::Yes(t),
            None => EquivDecision::Unknown,
        }
    }

    fn neighbours(&self, start: usize, p: &[Tr], limit: usize) -> Vec<(Rewrite, Vec<Tr>)> {
        let l = self.l;
        let mut res = Vec::new();
        for i in 0..p.len().saturating_sub(1) {
            let (a, b) = (p[i], p[i + 1]);
            if b == a.rev() {
                let mut q = p.to_vec();
                q.drain(i..i + 2);
                res.push((Rewrite::Cancel { at: i, t: a }, q));
            }
            for &c in l.partners(a) {
                if !l.coinitial(a, c) || l.slabel(c) != l.slabel(b) {
                    continue;
                }
                for &d in l.out(l.dst(c)) {
                    if l.slabel(d) == l.slabel(a) && l.dst(d) == l.dst(b) {
                        let mut q = p.to_vec();
                        q[i] = c;
                        q[i + 1] = d;
                        res.push((Rewrite::Swap { at: i, old: (a, b), new: (c, d) }, q));
                    }
                }
            }
        }
        if p.len() + 2 <= limit {
            for i in 0..=p.len() {
                let here = if i == 0 { start } else { l.dst(p[i - 1]) };
                for &t in l.out(here) {
                    let mut q = p.to_vec();
                    q.splice(i..i, [t, t.rev()]);
                    res.push((Rewrite::Insert { at: i, t }, q));
                }
            }
        }
        res
    }

    /// Bidirectional breadth-first search between `r` and `s`.
    fn search(&self, r: &Path, s: &Path) -> Option<Vec<Rewrite>> {
        if r.steps == s.steps {
            return Some(Vec::new());
        }
        let limit = r.len().max(s.len()) + 2 * self.slack;
        type Seen = HashMap<Vec<Tr>, Option<(Vec<Tr>, Rewrite)>>;
        let mut seen: [Seen; 2] = [HashMap::new(), HashMap::new()];
        let mut frontier: [VecDeque<Vec<Tr>>; 2] = [VecDeque::new(), VecDeque::new()];
        seen[0].insert(r.steps.clone(), None);
        seen[1].insert(s.steps.clone(), None);
        frontier[0].push_back(r.steps.clone());
        frontier[1].push_back(s.steps.clone());
        let mut meet = None;
        'outer: while !frontier[0].is_empty() && !frontier[1].is_empty() {
            if seen[0].len() + seen[1].len() > self.node_cap {
                return None;
            }
            let side = if frontier[0].len() <= frontier[1].len() { 0 } else { 1 };
            let layer: Vec<Vec<Tr>> = frontier[side].drain(..).collect();
            for p in layer {
                for (rw, q) in self.neighbours(r.start, &p, limit) {
                    if seen[side].contains_key(&q) {
                        continue;
                    }
                    seen[side].insert(q.clone(), Some((p.clone(), rw)));
                    if seen[1 - side].contains_key(&q) {
                        meet = Some(q);
                        break 'outer;
                    }
                    frontier[side].push_back(q);
                }
            }
        }
        let m = meet?;
        let chain = |side: usize| {
            let mut out = Vec::new();
            let mut cur = m.clone();
            while let Some(Some((prev, rw))) = seen[side].get(&cur) {
                out.push(*rw);
                cur = prev.clone();
            }
            out
        };
        let mut trace = chain(0);
        trace.reverse();
        trace.extend(chain(1).into_iter().map(|rw| rw.inverse()));
        Some(trace)
    }

    /// Rewrites forward-then-backward adjacencies away using cancellation
    /// and BTI squares, then cancels at the junction. Length never grows.
    fn constructive_nf(&self, r: &Path) -> Result<(Path, Vec<Rewrite>), NfError> {
        let l = self.l;
        let mut steps = r.steps.clone();
        let mut trace = Vec::new();
        while let Some(i) = (0..steps.len().saturating_sub(1)).find(|&i| steps[i].is_fwd() && !steps[i + 1].is_fwd()) {
            let (t, v) = (steps[i], steps[i + 1]);
            if v == t.rev() {
                trace.push(Rewrite::Cancel { at: i, t });
                steps.drain(i..i + 2);
                continue;
            }
            if !l.independent(v, t.rev()) {
                return Err(NfError::Stuck(t, v.rev()));
            }
            let Some(&(y, x)) = l.completions(v, t.rev()).first() else {
                return Err(NfError::Stuck(t, v.rev()));
            };
            let seq = [
                Rewrite::Insert { at: i + 2, t: y },
                Rewrite::Swap { at: i + 1, old: (v, y), new: (t.rev(), x) },
                Rewrite::Cancel { at: i, t },
            ];
            for rw in seq {
                let ok = apply(l, r.start, &mut steps, rw);
                debug_assert!(ok);
                trace.push(rw);
            }
        }
        while let Some(i) = (0..steps.len().saturating_sub(1)).find(|&i| steps[i + 1] == steps[i].rev()) {
            trace.push(Rewrite::Cancel { at: i, t: steps[i] });
            steps.drain(i..i + 2);
        }
        Ok((Path { start: r.start, steps }, trace))
    }

    /// A parabolic path ≈ `r` no longer than `r`: constructive rewriting
    /// first, then search among parabolic candidates.
    pub fn parabolic_form(&self, r: &Path) -> Result<(Path, Vec<Rewrite>), NfError> {
        let stuck = match self.constructive_nf(r) {
            Ok(res) => return Ok(res),
            Err(e) => e,
        };
        if r.is_parabolic() {
            return Ok((r.clone(), Vec::new()));
        }
        for c in parabolic_paths(self.l, r.start, r.end(self.l), r.len()) {
            if let EquivDecision::Yes(t) = self.decide(r, &c) {
                return Ok((c, t));
            }
        }
        Err(stuck)
    }
}

/// Decides `r ≈ s` within `slack`.
pub fn causally_equivalent(l: &Ltsi, r: &Path, s: &Path, slack: usize) -> Result<EquivDecision, EquivError> {
    Ok(Equiv::new(l, slack)?.decide(r, s))
}

pub fn parabolic_normal_form(l: &Ltsi, r: &Path, slack: usize) -> Result<Result<(Path, Vec<Rewrite>), NfError>, EquivError> {
    Ok(Equiv::new(l, slack)?.parabolic_form(r))
}

/// The default path bound: twice the longest simple forward path, plus two.
pub fn default_path_bound(l: &Ltsi) -> usize {
    2 * l.longest_simple_forward_path() + 2
}

/// Parabolic Lemma. Derived from SP and BTI when `use_theorems`; otherwise
/// every path of at most `bound` steps is reduced, by induction on length:
/// each representative is extended by one step and re-reduced.
pub fn check_pl(l: &Ltsi, bound: usize, slack: usize, use_theorems: bool) -> Verdict {
    let eq = match Equiv::new(l, slack) {
        Ok(e) => e,
        Err(_) => return Verdict::unknown("≈ is undefined: SP fails"),
    };
    if use_theorems && eq.sp_bti {
        return Verdict::derived("SP+BTI");
    }
    let longest = l.longest_forward_path();
    let mut seen: HashMap<Path, ()> = HashMap::new();
    let mut layer: Vec<Path> = (0..l.n_states()).map(Path::empty).collect();
    for p in &layer {
        seen.insert(p.clone(), ());
    }
    let mut undecided = false;
    for _ in 0..bound {
        let mut next = Vec::new();
        for p in &layer {
            for &t in l.out(p.end(l)) {
                let mut q = p.clone();
                q.steps.push(t);
                let rep = if q.is_parabolic() {
                    Some(q.clone())
                } else {
                    match eq.parabolic_form(&q) {
                        Ok((n, _)) => Some(n),
                        Err(_) => None,
                    }
                };
                let rep = match rep {
                    Some(r) => r,
                    None => {
                        // Exact failure needs every parabolic candidate refuted,
                        // which is a finite set when the forward graph is acyclic.
                        if let Some(d) = longest {
                            let all = parabolic_paths(l, q.start, q.end(l), 2 * d);
                            if all.iter().all(|c| eq.certificate(&q, c).is_some()) {
                                return Verdict::fails(Witness::Path(q));
                            }
                        }
                        undecided = true;
                        continue;
                    }
                };
                if seen.insert(rep.clone(), ()).is_none() {
                    next.push(rep);
                }
            }
        }
        next.sort_by(|a, b| (a.start, &a.steps).cmp(&(b.start, &b.steps)));
        layer = next;
    }
    if undecided {
        Verdict::unknown(format!("some paths up to {bound} have no parabolic form found within slack {slack}"))
    } else {
        Verdict::bounded(bound)
    }
}

/// Causal Consistency. Derived from WF and SP+BTI when `use_theorems`;
/// otherwise, by induction on length, each one-step extension of a group
/// representative is compared with the representative of its endpoints.
pub fn check_cc(l: &Ltsi, bound: usize, slack: usize, use_theorems: bool) -> Verdict {
    let eq = match Equiv::new(l, slack) {
        Ok(e) => e,
        Err(_) => return Verdict::unknown("≈ is undefined: SP fails"),
    };
    if use_theorems && eq.sp_bti && axioms::wf(l).status.holds_exact() {
        return Verdict::derived("WF+PL(SP+BTI)");
    }
    let mut reps: BTreeMap<(usize, usize), Path> = BTreeMap::new();
    let mut layer: Vec<Path> = (0..l.n_states()).map(Path::empty).collect();
    for p in &layer {
        reps.insert((p.start, p.start), p.clone());
    }
    let mut undecided = false;
    for _ in 0..bound {
        let mut cands = Vec::new();
        for p in &layer {
            for &t in l.out(p.end(l)) {
                let mut q = p.clone();
                q.steps.push(t);
                cands.push(q);
            }
        }
        cands.sort_by(|a, b| (&a.steps, a.start).cmp(&(&b.steps, b.start)));
        let mut next = Vec::new();
        for q in cands {
            let key = (q.start, q.end(l));
            match reps.get(&key) {
                None => {
                    reps.insert(key, q.clone());
                    next.push(q);
                }
                Some(rep) => match eq.decide(rep, &q) {
                    EquivDecision::Yes(_) => {}
                    EquivDecision::No(_) => return Verdict::fails(Witness::Paths(rep.clone(), q)),
                    EquivDecision::Unknown => undecided = true,
                },
            }
        }
        layer = next;
    }
    if undecided {
        Verdict::unknown(format!("some path pairs up to {bound} undecided within slack {slack}"))
    } else {
        Verdict::bounded(bound)
    }
}

/// Unique Transition: parallel forward transitions carry the same label.
pub fn check_ut(l: &Ltsi) -> Verdict {
    let mut by_ends: BTreeMap<(usize, usize), Tr> = BTreeMap::new();
    for (i, t) in l.transitions().iter().enumerate() {
        match by_ends.get(&(t.src, t.dst)) {
            Some(&o) if l.label(o) != t.label => {
                return Verdict::fails(Witness::Pair(o, Tr::fwd(i)));
            }
            Some(_) => {}
            None => {
                by_ends.insert((t.src, t.dst), Tr::fwd(i));
            }
        }
    }
    Verdict::holds()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("no irreversible state is backward reachable")]
    NoRoot,
    #[error("several irreversible states are backward reachable")]
    NonUniqueRoot(Vec<usize>),
}

/// The irreversible state backward reachable from `p`, with a forward-only
/// path from it to `p`.
pub fn irreversible_root(l: &Ltsi, p: usize) -> Result<(usize, Path), RootError> {
    let mut prev: HashMap<usize, Tr> = HashMap::new();
    let mut seen = vec![false; l.n_states()];
    seen[p] = true;
    let mut q = VecDeque::from([p]);
    let mut roots = Vec::new();
    while let Some(s) = q.pop_front() {
        if l.is_irr(s) {
            roots.push(s);
        }
        for &t in l.out(s).iter().filter(|t| !t.is_fwd()) {
            let d = l.dst(t);
            if !seen[d] {
                seen[d] = true;
                prev.insert(d, t);
                q.push_back(d);
            }
        }
    }
    roots.sort();
    match roots.as_slice() {
        [] => Err(RootError::NoRoot),
        [r] => {
            let mut steps = Vec::new();
            let mut s = *r;
            while s != p {
                let t = prev[&s];
                steps.push(t.rev());
                s = l.src(t);
            }
            Ok((*r, Path { start: *r, steps }))
        }
        _ => Err(RootError::NonUniqueRoot(roots)),
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Endpoints => write!(f, "endpoints"),
            Certificate::LabelCount { label, left, right } => {
                write!(f, "label-count(#{label}: {left} vs {right})")
            }
            Certificate::Signature { class, left, right } => {
                write!(f, "signature({class:?}: {left} vs {right})")
            }
        }
    }
}

pub fn render_certificate(l: &Ltsi, c: &Certificate) -> String {
    match c {
        Certificate::Endpoints => "endpoints".into(),
        Certificate::LabelCount { label, left, right } => {
            format!("label-count({}: {left} vs {right})", l.label_name(*label))
        }
        Certificate::Signature { class, left, right } => {
            format!("event-count([{}]: {left} vs {right})", l.tr_name(*class))
        }
    }
}
