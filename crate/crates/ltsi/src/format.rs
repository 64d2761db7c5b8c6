//! The `ltsi-v1` text format.
//!
//! ```text
//! ltsi-v1
//! # comment
//! state P
//! state Q
//! trans t P a Q
//! ind t ~u
//! ```

use std::collections::HashMap;

use thiserror::Error;

use crate::model::{BuildError, Ltsi, LtsiBuilder};

pub const HEADER: &str = "ltsi-v1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatErrorKind {
    #[error("missing `{HEADER}` header")]
    MissingHeader,
    #[error("malformed line")]
    Malformed,
    #[error("invalid identifier `{0}`")]
    BadId(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown transition `{0}`")]
    UnknownTransitionRef(String),
    #[error("transition `{0}` declared independent of itself")]
    ReflexiveIndependence(String),
    #[error("transition `{0}` repeats the source, label and target of `{1}`")]
    DuplicateTransition(String, String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct FormatError {
    pub line: usize,
    pub kind: FormatErrorKind,
}

fn valid_id(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '\'' | '-'))
}

pub fn parse_ltsi(text: &str) -> Result<Ltsi, FormatError> {
    let err = |line, kind| FormatError { line, kind };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, HEADER)) => {}
        Some((n, _)) => return Err(err(n, FormatErrorKind::MissingHeader)),
        None => return Err(err(1, FormatErrorKind::MissingHeader)),
    }
    let mut states: HashMap<String, usize> = HashMap::new();
    let mut trans: Vec<(usize, [String; 4])> = Vec::new();
    let mut trans_line: HashMap<String, usize> = HashMap::new();
    let mut inds: Vec<(usize, String, String)> = Vec::new();
    let check = |n: usize, ids: &[&str]| -> Result<(), FormatError> {
        match ids.iter().find(|s| !valid_id(s)) {
            Some(bad) => Err(err(n, FormatErrorKind::BadId(bad.to_string()))),
            None => Ok(()),
        }
    };
    for (n, line) in lines {
        let w: Vec<&str> = line.split_whitespace().collect();
        match w.as_slice() {
            ["state", id] => {
                check(n, &[id])?;
                if states.insert(id.to_string(), n).is_some() {
                    return Err(err(n, FormatErrorKind::DuplicateId(id.to_string())));
                }
            }
            ["trans", id, src, lab, dst] => {
                check(n, &[id, src, lab, dst])?;
                if trans_line.insert(id.to_string(), n).is_some() {
                    return Err(err(n, FormatErrorKind::DuplicateId(id.to_string())));
                }
                trans.push((n, [id, src, lab, dst].map(|s| s.to_string())));
            }
            ["ind", a, b] => {
                check(n, &[a.trim_start_matches('~'), b.trim_start_matches('~')])?;
                inds.push((n, a.to_string(), b.to_string()));
            }
            _ => return Err(err(n, FormatErrorKind::Malformed)),
        }
    }
    let mut b = LtsiBuilder::new();
    let mut names: Vec<(&String, &usize)> = states.iter().collect();
    names.sort_by_key(|(_, n)| **n);
    b.states(names.into_iter().map(|(s, _)| s.clone()));
    let mut triples: HashMap<(&str, &str, &str), &str> = HashMap::new();
    for (n, [id, src, lab, dst]) in &trans {
        for s in [src, dst] {
            if !states.contains_key(s) {
                return Err(err(*n, FormatErrorKind::UnknownState(s.clone())));
            }
        }
        if let Some(prev) = triples.insert((src, lab, dst), id) {
            return Err(err(
                *n,
                FormatErrorKind::DuplicateTransition(id.clone(), prev.to_string()),
            ));
        }
        b.transition(id.clone(), src.clone(), lab.clone(), dst.clone());
    }
    for (n, x, y) in &inds {
        for r in [x, y] {
            if !trans_line.contains_key(r.trim_start_matches('~')) {
                return Err(err(*n, FormatErrorKind::UnknownTransitionRef(r.clone())));
            }
        }
        if x == y {
            return Err(err(*n, FormatErrorKind::ReflexiveIndependence(x.clone())));
        }
        b.independent(x.clone(), y.clone());
    }
    b.build().map_err(|e| {
        // Reached only for conditions not pre-checked above.
        let kind = match e {
            BuildError::DuplicateId(s) => FormatErrorKind::DuplicateId(s),
            BuildError::DuplicateTransition(a, b) => FormatErrorKind::DuplicateTransition(a, b),
            BuildError::UnknownState(s) => FormatErrorKind::UnknownState(s),
            BuildError::ReflexiveIndependence(s) => FormatErrorKind::ReflexiveIndependence(s),
            BuildError::UnknownTransitionRef(s) => FormatErrorKind::UnknownTransitionRef(s),
        };
        err(0, kind)
    })
}

/// Canonical text: states, transitions and independence pairs sorted,
/// each pair once. `state_comments`, if given, annotate states by index.
pub fn emit_ltsi(l: &Ltsi, header_comments: &[String], state_comments: Option<&[String]>) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for c in header_comments {
        out.push_str(&format!("# {c}\n"));
    }
    for (i, s) in l.states().iter().enumerate() {
        match state_comments.and_then(|c| c.get(i)) {
            Some(c) => out.push_str(&format!("state {s}  # {c}\n")),
            None => out.push_str(&format!("state {s}\n")),
        }
    }
    for t in l.transitions() {
        out.push_str(&format!(
            "trans {} {} {} {}\n",
            t.id,
            l.state_name(t.src),
            l.label_name(t.label),
            l.state_name(t.dst)
        ));
    }
    for (a, b) in l.ind_pairs() {
        out.push_str(&format!("ind {} {}\n", l.tr_name(a), l.tr_name(b)));
    }
    out
}
