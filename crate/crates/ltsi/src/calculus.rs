//! A small reversible process calculus in the style of CCSK: prefix,
//! choice and parallel composition without communication. Executed
//! prefixes stay in the term, marked with a key, so a state is the set of
//! executed prefix occurrences.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{Ltsi, LtsiBuilder};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Nil,
    Pre(String, Box<Term>),
    Sum(Box<Term>, Box<Term>),
    Par(Box<Term>, Box<Term>),
}

impl Term {
    pub fn pre(a: &str, t: Term) -> Term {
        Term::Pre(a.to_string(), Box::new(t))
    }
    pub fn sum(a: Term, b: Term) -> Term {
        Term::Sum(Box::new(a), Box::new(b))
    }
    pub fn par(a: Term, b: Term) -> Term {
        Term::Par(Box::new(a), Box::new(b))
    }
    pub fn prefixes(&self) -> usize {
        match self {
            Term::Nil => 0,
            Term::Pre(_, t) => 1 + t.prefixes(),
            Term::Sum(a, b) | Term::Par(a, b) => a.prefixes() + b.prefixes(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self, None, &mut 0)
    }
}

/// Prints with `+` and `|` parenthesised under tighter operators; executed
/// prefixes print as `a[k]` when `keys` is given.
fn write_term(
    f: &mut fmt::Formatter<'_>,
    t: &Term,
    keys: Option<&BTreeSet<usize>>,
    next: &mut usize,
) -> fmt::Result {
    let prec = |t: &Term| match t {
        Term::Par(..) => 0,
        Term::Sum(..) => 1,
        _ => 2,
    };
    let sub = |f: &mut fmt::Formatter<'_>, t: &Term, min: u8, next: &mut usize| {
        if prec(t) < min {
            write!(f, "(")?;
            write_term(f, t, keys, next)?;
            write!(f, ")")
        } else {
            write_term(f, t, keys, next)
        }
    };
    match t {
        Term::Nil => write!(f, "0"),
        Term::Pre(a, k) => {
            let me = *next;
            *next += 1;
            match keys {
                Some(ks) if ks.contains(&me) => write!(f, "{a}[{me}].")?,
                _ => write!(f, "{a}.")?,
            }
            sub(f, k, 2, next)
        }
        Term::Sum(a, b) => {
            sub(f, a, 1, next)?;
            write!(f, "+")?;
            sub(f, b, 2, next)
        }
        Term::Par(a, b) => {
            sub(f, a, 0, next)?;
            write!(f, "|")?;
            sub(f, b, 1, next)
        }
    }
}

struct Keyed<'a>(&'a Term, &'a BTreeSet<usize>);

impl fmt::Display for Keyed<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self.0, Some(self.1), &mut 0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at {pos}: {msg}")]
pub struct SyntaxError {
    pub pos: usize,
    pub msg: String,
}

/// Parses `0 | a.T | T+T | T|T` with prefix binding tighter than `+`,
/// and `+` tighter than `|`.
pub fn parse_term(text: &str) -> Result<Term, SyntaxError> {
    let mut p = Parser {
        s: text.as_bytes(),
        i: 0,
    };
    let t = p.par()?;
    p.ws();
    if p.i < p.s.len() {
        return Err(p.err("unexpected input"));
    }
    Ok(t)
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl Parser<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }
    fn err(&self, msg: &str) -> SyntaxError {
        SyntaxError {
            pos: self.i,
            msg: msg.into(),
        }
    }
    fn eat(&mut self, c: u8) -> bool {
        self.ws();
        if self.s.get(self.i) == Some(&c) {
            self.i += 1;
            true
        } else {
            false
        }
    }
    fn par(&mut self) -> Result<Term, SyntaxError> {
        let mut t = self.sum()?;
        while self.eat(b'|') {
            t = Term::par(t, self.sum()?);
        }
        Ok(t)
    }
    fn sum(&mut self) -> Result<Term, SyntaxError> {
        let mut t = self.pre()?;
        while self.eat(b'+') {
            t = Term::sum(t, self.pre()?);
        }
        Ok(t)
    }
    fn pre(&mut self) -> Result<Term, SyntaxError> {
        self.ws();
        match self.s.get(self.i) {
            Some(b'0') => {
                self.i += 1;
                Ok(Term::Nil)
            }
            Some(b'(') => {
                self.i += 1;
                let t = self.par()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(t)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.i;
                while self
                    .s
                    .get(self.i)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
                {
                    self.i += 1;
                }
                let a = std::str::from_utf8(&self.s[start..self.i]).expect("ascii").to_string();
                if !self.eat(b'.') {
                    return Err(self.err("expected `.` after action"));
                }
                Ok(Term::pre(&a, self.pre()?))
            }
            Some(_) => Err(self.err("expected a term")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// A prefix occurrence: action, enclosing prefixes, enclosing choices, and
/// its position as a path of `p`/`q` (parallel), `s`/`t` (choice) and `d`
/// (under a prefix).
#[derive(Clone, Debug)]
struct Occ {
    action: String,
    guards: Vec<usize>,
    /// For each enclosing choice, the prefix occurrences of the other branch.
    rivals: Vec<Vec<usize>>,
    path: String,
}

fn collect(t: &Term, guards: &mut Vec<usize>, rivals: &mut Vec<Vec<usize>>, path: &mut String, out: &mut Vec<Occ>) {
    match t {
        Term::Nil => {}
        Term::Pre(a, k) => {
            let me = out.len();
            out.push(Occ {
                action: a.clone(),
                guards: guards.clone(),
                rivals: rivals.clone(),
                path: path.clone(),
            });
            guards.push(me);
            path.push('d');
            collect(k, guards, rivals, path, out);
            path.pop();
            guards.pop();
        }
        Term::Sum(a, b) | Term::Par(a, b) => {
            let is_sum = matches!(t, Term::Sum(..));
            let (la, lb) = if is_sum { ('s', 't') } else { ('p', 'q') };
            let first = out.len();
            let na = a.prefixes();
            let nb = b.prefixes();
            let right: Vec<usize> = (first + na..first + na + nb).collect();
            let left: Vec<usize> = (first..first + na).collect();
            if is_sum {
                rivals.push(right);
            }
            path.push(la);
            collect(a, guards, rivals, path, out);
            path.pop();
            if is_sum {
                rivals.pop();
                rivals.push(left);
            }
            path.push(lb);
            collect(b, guards, rivals, path, out);
            path.pop();
            if is_sum {
                rivals.pop();
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompileError {
    #[error("more than {0} distinct actions")]
    AlphabetTooLarge(usize),
    #[error("more than {0} states")]
    StateBudgetExceeded(usize),
}

#[derive(Clone, Copy, Debug)]
pub struct CompileOptions {
    pub max_states: usize,
    pub max_actions: usize,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            max_states: 10_000,
            max_actions: 64,
        }
    }
}

/// A compiled term: the system and, per state, the keyed term it denotes.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub ltsi: Ltsi,
    pub state_terms: Vec<String>,
}

/// Two positions are independent iff they part ways at a parallel operator.
fn diverge_at_par(a: &str, b: &str) -> bool {
    a.bytes()
        .zip(b.bytes())
        .find(|(x, y)| x != y)
        .is_some_and(|(x, y)| matches!((x, y), (b'p', b'q') | (b'q', b'p')))
}

pub fn compile(t: &Term) -> Result<Compiled, CompileError> {
    compile_with(t, CompileOptions::default())
}

pub fn compile_with(t: &Term, opts: CompileOptions) -> Result<Compiled, CompileError> {
    let mut occs = Vec::new();
    collect(t, &mut Vec::new(), &mut Vec::new(), &mut String::new(), &mut occs);
    let actions: BTreeSet<&str> = occs.iter().map(|o| o.action.as_str()).collect();
    if actions.len() > opts.max_actions {
        return Err(CompileError::AlphabetTooLarge(opts.max_actions));
    }
    let label = |k: usize| {
        let o = &occs[k];
        let p = if o.path.is_empty() { "e" } else { &o.path };
        format!("{}_{}_{}", o.action, k, p)
    };
    let enabled = |s: &BTreeSet<usize>, k: usize| {
        let o = &occs[k];
        !s.contains(&k)
            && o.guards.iter().all(|g| s.contains(g))
            && o.rivals.iter().all(|r| r.iter().all(|x| !s.contains(x)))
    };

    let init: BTreeSet<usize> = BTreeSet::new();
    let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::from([(init.clone(), 0)]);
    let mut states = vec![init];
    let mut trans: Vec<(usize, usize, usize)> = Vec::new();
    let mut q = VecDeque::from([0usize]);
    while let Some(i) = q.pop_front() {
        for k in 0..occs.len() {
            if !enabled(&states[i], k) {
                continue;
            }
            let mut next = states[i].clone();
            next.insert(k);
            let j = match index.get(&next) {
                Some(&j) => j,
                None => {
                    if states.len() >= opts.max_states {
                        return Err(CompileError::StateBudgetExceeded(opts.max_states));
                    }
                    states.push(next.clone());
                    index.insert(next, states.len() - 1);
                    q.push_back(states.len() - 1);
                    states.len() - 1
                }
            };
            trans.push((i, k, j));
        }
    }

    let name = |i: usize| format!("s{i}");
    let mut b = LtsiBuilder::new();
    b.states((0..states.len()).map(name));
    for (n, &(i, k, j)) in trans.iter().enumerate() {
        b.transition(format!("t{n}"), name(i), label(k), name(j));
    }
    // Directed transitions out of each state, with their prefix occurrence.
    let mut out: Vec<Vec<(String, usize)>> = vec![Vec::new(); states.len()];
    for (n, &(i, k, j)) in trans.iter().enumerate() {
        out[i].push((format!("t{n}"), k));
        out[j].push((format!("~t{n}"), k));
    }
    for o in &out {
        for (x, (ra, ka)) in o.iter().enumerate() {
            for (rb, kb) in &o[x + 1..] {
                if diverge_at_par(&occs[*ka].path, &occs[*kb].path) {
                    b.independent(ra.clone(), rb.clone());
                }
            }
        }
    }
    let ltsi = b.build().expect("compiled systems are well formed");
    let state_terms = states.iter().map(|s| Keyed(t, s).to_string()).collect();
    Ok(Compiled { ltsi, state_terms })
}

/// Fixed regression terms, always at the front of the corpus.
pub const REGRESSION: [&str; 10] = [
    "a.0|b.0",
    "a.0+b.0",
    "a.b.0",
    "a.(b.0+c.0)",
    "a.0|b.0|c.0",
    "(a.0+b.0)|c.0",
    "a.b.0|c.d.0",
    "a.(b.0|c.0)",
    "a.0|a.0",
    "0",
];

/// `n` terms: the regression terms first, then pseudo-random terms with at
/// most three parallel components and six prefixes, determined by `seed`.
pub fn corpus(seed: u64, n: usize) -> Vec<Term> {
    let mut out: Vec<Term> = REGRESSION
        .iter()
        .take(n)
        .map(|s| parse_term(s).expect("regression terms parse"))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < n {
        let comps = rng.gen_range(1..=3);
        let mut budget = rng.gen_range(comps..=6);
        let mut t: Option<Term> = None;
        for c in 0..comps {
            let share = if c + 1 == comps {
                budget
            } else {
                rng.gen_range(1..=budget - (comps - c - 1))
            };
            budget -= share;
            let comp = random_seq(&mut rng, share);
            t = Some(match t {
                None => comp,
                Some(prev) => Term::par(prev, comp),
            });
        }
        out.push(t.unwrap_or(Term::Nil));
    }
    out
}

/// A sequential term with exactly `k` prefixes, possibly with choices.
fn random_seq(rng: &mut ChaCha8Rng, k: usize) -> Term {
    const ACTIONS: [&str; 4] = ["a", "b", "c", "d"];
    if k == 0 {
        return Term::Nil;
    }
    if k >= 2 && rng.gen_bool(0.3) {
        let left = rng.gen_range(1..k);
        return Term::sum(random_seq(rng, left), random_seq(rng, k - left));
    }
    let a = ACTIONS[rng.gen_range(0..ACTIONS.len())];
    if k >= 3 && rng.gen_bool(0.2) {
        let left = rng.gen_range(1..k - 1);
        let inner = Term::par(random_seq(rng, left), random_seq(rng, k - 1 - left));
        return Term::pre(a, inner);
    }
    Term::pre(a, random_seq(rng, k - 1))
}
