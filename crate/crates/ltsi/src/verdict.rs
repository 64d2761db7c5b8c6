//! Check results and their witnesses.

use std::fmt;

use crate::events::EventPartition;
use crate::model::{Ltsi, Path, Tr};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Holds,
    /// Holds by a theorem whose hypotheses were checked exactly.
    Derived(String),
    /// No violation among instances up to the given bound.
    Bounded(usize),
    Fails,
    Unknown,
}

impl Status {
    pub fn holds(&self) -> bool {
        matches!(self, Status::Holds | Status::Derived(_) | Status::Bounded(_))
    }
    /// Holds exactly or by theorem.
    pub fn holds_exact(&self) -> bool {
        matches!(self, Status::Holds | Status::Derived(_))
    }
    pub fn fails(&self) -> bool {
        matches!(self, Status::Fails)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Holds => write!(f, "HOLDS"),
            Status::Derived(c) => write!(f, "HOLDS-DERIVED({c})"),
            Status::Bounded(b) => write!(f, "HOLDS-BOUNDED({b})"),
            Status::Fails => write!(f, "FAILS"),
            Status::Unknown => write!(f, "UNKNOWN"),
        }
    }
}

/// What a causal safety/liveness instance got wrong.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Offence {
    /// A positively counted step lacking the required independence.
    Step(Tr),
    /// A positively counted event lacking the required relation.
    Event(usize),
    /// No transition of `[t0]` ends at the final state.
    NoUndo,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Pair(Tr, Tr),
    /// `t ∼ t2 ι u` but not `t ι u`.
    Triple(Tr, Tr, Tr),
    /// A square `t, u, u2, t2` and the pair it needed.
    Square([Tr; 4], Option<(Tr, Tr)>),
    Cycle(Vec<Tr>),
    Path(Path),
    Paths(Path, Path),
    PathEvent(Path, usize),
    Instance { t0: Tr, r: Path, offence: Offence },
    EventPair(usize, usize),
    States(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<Witness>,
    pub note: Option<String>,
}

impl Verdict {
    pub fn holds() -> Verdict {
        Verdict {
            status: Status::Holds,
            witness: None,
            note: None,
        }
    }
    pub fn derived(chain: impl Into<String>) -> Verdict {
        Verdict {
            status: Status::Derived(chain.into()),
            witness: None,
            note: None,
        }
    }
    pub fn bounded(bound: usize) -> Verdict {
        Verdict {
            status: Status::Bounded(bound),
            witness: None,
            note: None,
        }
    }
    pub fn fails(w: Witness) -> Verdict {
        Verdict {
            status: Status::Fails,
            witness: Some(w),
            note: None,
        }
    }
    pub fn unknown(note: impl Into<String>) -> Verdict {
        Verdict {
            status: Status::Unknown,
            witness: None,
            note: Some(note.into()),
        }
    }
    pub fn with_note(mut self, note: impl Into<String>) -> Verdict {
        self.note = Some(note.into());
        self
    }
    /// Holds exactly (`true`), fails (`false`), or neither.
    pub fn exact(&self) -> Option<bool> {
        match self.status {
            Status::Holds | Status::Derived(_) => Some(true),
            Status::Fails => Some(false),
            _ => None,
        }
    }
}

/// Renders a witness with transition ids; events print as `[t]`.
pub fn render_witness(l: &Ltsi, ev: Option<&EventPartition>, w: &Witness) -> String {
    let n = |t: Tr| l.tr_name(t);
    let e = |i: usize| match ev {
        Some(ev) => ev.name(l, i),
        None => format!("e{i}"),
    };
    match w {
        Witness::Pair(a, b) => format!("({}, {})", n(*a), n(*b)),
        Witness::Triple(t, t2, u) => {
            format!("({} ~ {} ι {}; {} not ι {})", n(*t), n(*t2), n(*u), n(*t), n(*u))
        }
        Witness::Square(sq, missing) => {
            let s = format!("square({} {} {} {})", n(sq[0]), n(sq[1]), n(sq[2]), n(sq[3]));
            match missing {
                Some((a, b)) => format!("{s} missing=({}, {})", n(*a), n(*b)),
                None => s,
            }
        }
        Witness::Cycle(c) | Witness::Path(Path { steps: c, .. }) if c.is_empty() => {
            "(ε)".to_string()
        }
        Witness::Cycle(c) => format!(
            "cycle({})",
            c.iter().map(|&t| n(t)).collect::<Vec<_>>().join(" ")
        ),
        Witness::Path(p) => format!("({})", p.render(l)),
        Witness::Paths(a, b) => format!("({} | {})", a.render(l), b.render(l)),
        Witness::PathEvent(p, i) => format!("({}) event={}", p.render(l), e(*i)),
        Witness::Instance { t0, r, offence } => {
            let off = match offence {
                Offence::Step(t) => format!("step={}", n(*t)),
                Offence::Event(i) => format!("event={}", e(*i)),
                Offence::NoUndo => "no-undo".to_string(),
            };
            format!("t0={} r=({}) {}", n(*t0), r.render(l), off)
        }
        Witness::EventPair(a, b) => format!("({}, {})", e(*a), e(*b)),
        Witness::States(s) => format!(
            "{{{}}}",
            s.iter()
                .map(|&x| l.state_name(x).to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ),
    }
}
