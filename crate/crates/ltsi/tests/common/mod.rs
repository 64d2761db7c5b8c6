//! Shared helpers for the integration tests: fixture loading, a seeded
//! generator of small systems, and brute-force oracles written directly
//! from the definitions, without reusing library logic beyond accessors.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};
use std::path::PathBuf;

use ltsi::format::parse_ltsi;
use ltsi::model::{saturate_coinitial, Ltsi, LtsiBuilder, Path, Tr};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// Fixture names, sorted, without extension.
pub fn fixture_names() -> Vec<String> {
    let mut v: Vec<String> = std::fs::read_dir(fixture_dir())
        .expect("fixture directory")
        .filter_map(|e| {
            let p = e.ok()?.path();
            (p.extension()? == "ltsi").then(|| p.file_stem()?.to_str().map(String::from))?
        })
        .collect();
    v.sort();
    v
}

pub fn fixture(name: &str) -> Ltsi {
    let text = std::fs::read_to_string(fixture_dir().join(format!("{name}.ltsi")))
        .unwrap_or_else(|e| panic!("{name}: {e}"));
    parse_ltsi(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

// ---------------------------------------------------------------------------
// Generator
// ---------------------------------------------------------------------------

/// How a random instance was built; reported alongside violations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// Arbitrary graph with arbitrary independence.
    Graph,
    /// Down-closed family of subsets of a small cube, independence saturated.
    Downset,
    /// A downset with one extra transition or one independence pair toggled.
    Perturbed,
}

/// A system with at most 8 states and 12 forward transitions.
pub fn random_ltsi(seed: u64) -> (Shape, Ltsi) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match seed % 3 {
        0 => (Shape::Graph, random_graph(&mut rng)),
        1 => (Shape::Downset, random_downset(&mut rng)),
        _ => {
            let base = random_downset(&mut rng);
            (Shape::Perturbed, perturb(&mut rng, base))
        }
    }
}

fn random_graph(rng: &mut ChaCha8Rng) -> Ltsi {
    let n = rng.gen_range(2..=6usize);
    let m = rng.gen_range(1..=10usize);
    let labels = ["a", "b", "c"];
    let mut b = LtsiBuilder::new();
    b.states((0..n).map(|i| format!("s{i}")));
    let mut seen = HashSet::new();
    let mut k = 0;
    for _ in 0..m {
        let src = rng.gen_range(0..n);
        // mostly acyclic, occasionally a back edge
        let dst = if rng.gen_bool(0.85) && src + 1 < n {
            rng.gen_range(src + 1..n)
        } else {
            rng.gen_range(0..n)
        };
        let lab = *labels.choose(rng).unwrap();
        if seen.insert((src, lab, dst)) {
            b.transition(format!("t{k}"), format!("s{src}"), lab, format!("s{dst}"));
            k += 1;
        }
    }
    let l = b.build().expect("generated system is valid");
    let dirs: Vec<Tr> = l.all_directed().collect();
    let mut pairs = Vec::new();
    for (i, &x) in dirs.iter().enumerate() {
        for &y in &dirs[i + 1..] {
            if x.base() == y.base() {
                continue;
            }
            let p = if l.coinitial(x, y) { 0.4 } else { 0.03 };
            if rng.gen_bool(p) {
                pairs.push((x, y));
            }
        }
    }
    let l = l.with_independence(pairs);
    if rng.gen_bool(0.5) {
        saturate_coinitial(&l)
    } else {
        l
    }
}

fn random_downset(rng: &mut ChaCha8Rng) -> Ltsi {
    let dims = rng.gen_range(2..=4usize);
    let mut family: BTreeSet<u32> = BTreeSet::new();
    family.insert(0);
    for _ in 0..rng.gen_range(1..=4) {
        let top: u32 = rng.gen_range(0..(1u32 << dims));
        let below: Vec<u32> = (0..(1u32 << dims)).filter(|s| s & !top == 0).collect();
        let mut next = family.clone();
        next.extend(below);
        let edges = edge_count(&next, dims);
        if next.len() <= 8 && edges <= 12 {
            family = next;
        }
    }
    // merging dimensions into shared labels gives repeated labels
    let alphabet = rng.gen_range(1..=dims);
    let label_of: Vec<String> = (0..dims)
        .map(|d| {
            let k = if d < alphabet { d } else { rng.gen_range(0..alphabet) };
            ((b'a' + k as u8) as char).to_string()
        })
        .collect();
    let name = |s: u32| format!("x{s:0w$b}", w = dims);
    let mut b = LtsiBuilder::new();
    b.states(family.iter().map(|&s| name(s)));
    for &s in &family {
        for d in 0..dims {
            let t = s | (1 << d);
            if t != s && family.contains(&t) {
                b.transition(format!("{}{}", label_of[d], &name(s)[1..]), name(s), &label_of[d], name(t));
            }
        }
    }
    let l = match b.build() {
        Ok(l) => l,
        // two dimensions sharing a label and an id; fall back to plain names
        Err(_) => {
            let mut b = LtsiBuilder::new();
            b.states(family.iter().map(|&s| name(s)));
            let mut k = 0;
            for &s in &family {
                for d in 0..dims {
                    let t = s | (1 << d);
                    if t != s && family.contains(&t) {
                        b.transition(format!("t{k}"), name(s), &label_of[d], name(t));
                        k += 1;
                    }
                }
            }
            b.build().expect("downset system is valid")
        }
    };
    // generate independence at the root corners, then saturate
    let mut pairs = Vec::new();
    for s in 0..l.n_states() {
        let fwd: Vec<Tr> = l.out(s).iter().copied().filter(|t| t.is_fwd()).collect();
        for (i, &x) in fwd.iter().enumerate() {
            for &y in &fwd[i + 1..] {
                if !l.completions(x, y).is_empty() && rng.gen_bool(0.9) {
                    pairs.push((x, y));
                }
            }
        }
    }
    saturate_coinitial(&l.with_independence(pairs))
}

fn edge_count(family: &BTreeSet<u32>, dims: usize) -> usize {
    family
        .iter()
        .map(|&s| (0..dims).filter(|d| s & (1 << d) == 0 && family.contains(&(s | (1 << d)))).count())
        .sum()
}

fn perturb(rng: &mut ChaCha8Rng, l: Ltsi) -> Ltsi {
    let dirs: Vec<Tr> = l.all_directed().collect();
    match rng.gen_range(0..3) {
        0 if l.n_forward() < 12 && l.n_states() >= 2 => {
            let mut b = LtsiBuilder::new();
            b.states(l.states().iter().cloned());
            for t in l.transitions() {
                b.transition(t.id.clone(), l.state_name(t.src), l.label_name(t.label), l.state_name(t.dst));
            }
            let src = rng.gen_range(0..l.n_states());
            let dst = rng.gen_range(0..l.n_states());
            let lab = ["a", "b", "c"].choose(rng).unwrap();
            b.transition("extra", l.state_name(src), *lab, l.state_name(dst));
            let refs = |t: Tr| l.tr_name(t);
            for (x, y) in l.ind_pairs() {
                b.independent(refs(x), refs(y));
            }
            match b.build() {
                Ok(m) => {
                    if rng.gen_bool(0.5) {
                        saturate_coinitial(&m)
                    } else {
                        m
                    }
                }
                Err(_) => l,
            }
        }
        1 if !l.ind_is_empty() => {
            let pairs: Vec<(Tr, Tr)> = l.ind_pairs().collect();
            let drop = *pairs.choose(rng).unwrap();
            l.with_independence(pairs.into_iter().filter(|&p| p != drop))
        }
        _ if dirs.len() >= 2 => {
            let x = *dirs.choose(rng).unwrap();
            let y = *dirs.choose(rng).unwrap();
            if x.base() == y.base() {
                return l;
            }
            l.with_independence(l.ind_ordered().chain([(x, y)]).collect::<Vec<_>>())
        }
        _ => l,
    }
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

/// All directed transitions leaving `s`, found by scanning the forward list.
pub fn leaving(l: &Ltsi, s: usize) -> Vec<Tr> {
    let mut v = Vec::new();
    for (i, t) in l.transitions().iter().enumerate() {
        if t.src == s {
            v.push(Tr::fwd(i));
        }
        if t.dst == s {
            v.push(Tr::bwd(i));
        }
    }
    v
}

fn same_slabel(l: &Ltsi, a: Tr, b: Tr) -> bool {
    l.label(a) == l.label(b) && a.is_fwd() == b.is_fwd()
}

/// Diamonds on a coinitial pair: `(u2, t2)` with `u2` leaving the target of
/// `t` like `u`, and `t2` leaving the target of `u` like `t`, cofinal.
pub fn diamonds(l: &Ltsi, t: Tr, u: Tr) -> Vec<(Tr, Tr)> {
    let mut v = Vec::new();
    for u2 in leaving(l, l.dst(t)) {
        for t2 in leaving(l, l.dst(u)) {
            if same_slabel(l, u2, u) && same_slabel(l, t2, t) && l.dst(u2) == l.dst(t2) {
                v.push((u2, t2));
            }
        }
    }
    v
}

fn ind_pairs(l: &Ltsi) -> Vec<(Tr, Tr)> {
    let d: Vec<Tr> = l.all_directed().collect();
    let mut v = Vec::new();
    for &a in &d {
        for &b in &d {
            if l.independent(a, b) {
                v.push((a, b));
            }
        }
    }
    v
}

pub fn o_sp(l: &Ltsi) -> bool {
    ind_pairs(l)
        .into_iter()
        .filter(|&(t, u)| l.src(t) == l.src(u))
        .all(|(t, u)| !diamonds(l, t, u).is_empty())
}

pub fn o_bti(l: &Ltsi) -> bool {
    (0..l.n_states()).all(|s| {
        let back: Vec<Tr> = leaving(l, s).into_iter().filter(|t| !t.is_fwd()).collect();
        back.iter().all(|&a| back.iter().all(|&b| a == b || l.independent(a, b)))
    })
}

pub fn o_wf(l: &Ltsi) -> bool {
    // Kahn: acyclic iff every state can be removed
    let n = l.n_states();
    let mut indeg = vec![0usize; n];
    for t in l.transitions() {
        indeg[t.dst] += 1;
    }
    let mut queue: Vec<usize> = (0..n).filter(|&s| indeg[s] == 0).collect();
    let mut seen = 0;
    while let Some(s) = queue.pop() {
        seen += 1;
        for t in l.transitions() {
            if t.src == s {
                indeg[t.dst] -= 1;
                if indeg[t.dst] == 0 {
                    queue.push(t.dst);
                }
            }
        }
    }
    seen == n
}

pub fn o_pci(l: &Ltsi) -> bool {
    ind_pairs(l)
        .into_iter()
        .filter(|&(t, u)| l.src(t) == l.src(u))
        .all(|(t, u)| diamonds(l, t, u).into_iter().all(|(u2, _)| l.independent(u2, t.rev())))
}

pub fn o_pre_reversible(l: &Ltsi) -> bool {
    o_sp(l) && o_bti(l) && o_wf(l) && o_pci(l)
}

/// Event classes as a vector `class[t.raw()]`, closed over every square
/// generated by a coinitial independent pair (general mode adds the corner
/// and non-degeneracy conditions).
pub fn o_events(l: &Ltsi, general: bool) -> Vec<usize> {
    let n = l.n_directed();
    let mut class: Vec<usize> = (0..n).collect();
    loop {
        let mut changed = false;
        for (t, u) in ind_pairs(l) {
            if l.src(t) != l.src(u) {
                continue;
            }
            for (u2, t2) in diamonds(l, t, u) {
                if general {
                    let corners = l.independent(u.rev(), t2)
                        && l.independent(t2.rev(), u2.rev())
                        && l.independent(u2, t.rev());
                    let same = t.is_fwd() == u.is_fwd();
                    let nondeg = if same { l.dst(t) != l.dst(u) } else { l.src(t) != l.dst(u2) };
                    if !(corners && nondeg) {
                        continue;
                    }
                }
                for (x, y) in [(t, t2), (t.rev(), t2.rev())] {
                    let (cx, cy) = (class[x.raw()], class[y.raw()]);
                    if cx != cy {
                        let (keep, gone) = (cx.min(cy), cx.max(cy));
                        for c in class.iter_mut() {
                            if *c == gone {
                                *c = keep;
                            }
                        }
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return class;
        }
    }
}

pub fn o_count(class: &[usize], r: &Path, e: usize) -> i64 {
    let rev_e = |x: Tr| class[x.rev().raw()];
    r.steps
        .iter()
        .map(|&t| {
            if class[t.raw()] == e {
                1
            } else if rev_e(t) == e {
                -1
            } else {
                0
            }
        })
        .sum()
}

pub fn o_coind(l: &Ltsi, class: &[usize]) -> BTreeSet<(usize, usize)> {
    ind_pairs(l)
        .into_iter()
        .filter(|&(t, u)| l.src(t) == l.src(u))
        .map(|(t, u)| (class[t.raw()], class[u.raw()]))
        .collect()
}

pub fn o_ire(l: &Ltsi, class: &[usize]) -> bool {
    let d: Vec<Tr> = l.all_directed().collect();
    ind_pairs(l).into_iter().all(|(t, u)| {
        d.iter()
            .filter(|&&t2| class[t2.raw()] == class[t.raw()])
            .all(|&t2| l.independent(t2, u))
    })
}

fn o_cire_filtered(l: &Ltsi, class: &[usize], keep: impl Fn(Tr, Tr) -> bool) -> bool {
    let co = o_coind(l, class);
    (0..l.n_states()).all(|s| {
        let out = leaving(l, s);
        out.iter().all(|&t| {
            out.iter().all(|&u| {
                t == u
                    || !keep(t, u)
                    || !co.contains(&(class[t.raw()], class[u.raw()]))
                    || l.independent(t, u)
            })
        })
    })
}

pub fn o_cire(l: &Ltsi, class: &[usize]) -> bool {
    o_cire_filtered(l, class, |_, _| true)
}

pub fn o_bfcire(l: &Ltsi, class: &[usize]) -> bool {
    o_cire_filtered(l, class, |t, u| t.is_fwd() != u.is_fwd())
}

pub fn o_iec(l: &Ltsi, class: &[usize]) -> bool {
    let co = o_coind(l, class);
    ind_pairs(l)
        .into_iter()
        .all(|(t, u)| co.contains(&(class[t.raw()], class[u.raw()])))
}

pub fn o_ic(l: &Ltsi) -> bool {
    ind_pairs(l).into_iter().all(|(t, u)| l.src(t) == l.src(u))
}

pub fn o_rpi(l: &Ltsi) -> bool {
    ind_pairs(l).into_iter().all(|(t, u)| l.independent(t.rev(), u))
}

pub fn o_ech(l: &Ltsi, class: &[usize]) -> bool {
    ind_pairs(l).into_iter().all(|(t, u)| class[t.raw()] != class[u.raw()])
}

pub fn o_bld(l: &Ltsi) -> bool {
    (0..l.n_states()).all(|s| {
        let back: Vec<Tr> = leaving(l, s).into_iter().filter(|t| !t.is_fwd()).collect();
        back.iter()
            .all(|&a| back.iter().all(|&b| a == b || l.label(a) != l.label(b)))
    })
}

/// Every path of length at most `max` from `s`, by depth-first search.
pub fn o_paths_from(l: &Ltsi, s: usize, max: usize) -> Vec<Path> {
    let mut out = vec![Path::empty(s)];
    let mut i = 0;
    while i < out.len() {
        let p = out[i].clone();
        i += 1;
        if p.len() == max {
            continue;
        }
        for t in leaving(l, p.end(l)) {
            let mut q = p.clone();
            q.steps.push(t);
            out.push(q);
        }
    }
    out
}

pub fn o_irr(l: &Ltsi) -> Vec<usize> {
    (0..l.n_states())
        .filter(|&s| l.transitions().iter().all(|t| t.dst != s))
        .collect()
}

/// NRE over rooted paths up to `max`: no forward event counted twice.
pub fn o_nre(l: &Ltsi, class: &[usize], max: usize) -> bool {
    let fwd_events: BTreeSet<usize> = (0..l.n_forward()).map(|i| class[Tr::fwd(i).raw()]).collect();
    o_irr(l).into_iter().all(|s| {
        o_paths_from(l, s, max)
            .iter()
            .all(|r| fwd_events.iter().all(|&e| o_count(class, r, e) <= 1))
    })
}

/// Which CS/CL formulation an oracle instance follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OVariant {
    I,
    Ci,
}

/// Brute-force search for a CS (`safety`) or CL counterexample with
/// `|r| ≤ max`; returns the offending `(t0, r)`.
pub fn o_cs_cl(l: &Ltsi, class: &[usize], v: OVariant, safety: bool, max: usize) -> Option<(Tr, Path)> {
    let co = o_coind(l, class);
    let d: Vec<Tr> = l.all_directed().collect();
    for i in 0..l.n_forward() {
        let t0 = Tr::fwd(i);
        let e0 = class[t0.raw()];
        for r in o_paths_from(l, l.dst(t0), max) {
            if o_count(class, &r, e0) != 0 {
                continue;
            }
            let end = r.end(l);
            let undo = d
                .iter()
                .any(|&x| x.is_fwd() && class[x.raw()] == e0 && l.dst(x) == end);
            let cond = match v {
                OVariant::I => r
                    .steps
                    .iter()
                    .all(|&t| o_count(class, &r, class[t.raw()]) <= 0 || l.independent(t0.rev(), t)),
                OVariant::Ci => {
                    let evs: BTreeSet<usize> = class.iter().copied().collect();
                    evs.into_iter()
                        .all(|e| o_count(class, &r, e) <= 0 || co.contains(&(class[t0.rev().raw()], e)))
                }
            };
            let bad = if safety { undo && !cond } else { cond && !undo };
            if bad {
                return Some((t0, r));
            }
        }
    }
    None
}
