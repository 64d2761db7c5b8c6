//! Runs the checks in table order and renders the results.

use std::fmt;
use std::str::FromStr;

use crate::axioms::{self, AxiomId};
use crate::events::{
    check_polychotomy, compute_events, compute_relations, EventMode, EventPartition, EventRelations,
};
use crate::model::{saturate_coinitial, Ltsi};
use crate::paths;
use crate::properties::{self, CsClOptions, PropertyId};
use crate::structural;
use crate::verdict::{render_witness, Status, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckId {
    Axiom(AxiomId),
    PL,
    CC,
    UT,
    Prop(PropertyId),
    /// Polychotomy of forward events.
    Poly,
    /// Backward determinism.
    Bd,
    PreRev,
}

impl CheckId {
    /// Every check, in report order.
    pub fn all() -> Vec<CheckId> {
        use AxiomId::*;
        let mut v: Vec<CheckId> = [SP, BTI, WF, PCI, IRE, CIRE, BFCIRE, IEC, CLG, LG, IC]
            .into_iter()
            .map(CheckId::Axiom)
            .collect();
        v.extend([CheckId::PL, CheckId::CC, CheckId::UT]);
        v.extend(PropertyId::ALL.into_iter().map(CheckId::Prop));
        v.extend([CheckId::Poly, CheckId::Bd, CheckId::PreRev]);
        v
    }

    pub fn is_axiom(self) -> bool {
        matches!(self, CheckId::Axiom(_))
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckId::Axiom(a) => write!(f, "{a}"),
            CheckId::Prop(p) => write!(f, "{p}"),
            CheckId::PL => write!(f, "PL"),
            CheckId::CC => write!(f, "CC"),
            CheckId::UT => write!(f, "UT"),
            CheckId::Poly => write!(f, "POLY"),
            CheckId::Bd => write!(f, "BD"),
            CheckId::PreRev => write!(f, "PREREV"),
        }
    }
}

impl FromStr for CheckId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        CheckId::all()
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown check `{s}`"))
    }
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    /// Bound on rooted paths and on `r` in CS/CL; default `2·forward + 2`.
    pub bound: Option<usize>,
    /// Bound for PL and CC; default `2·longest forward path + 2`.
    pub path_bound: Option<usize>,
    pub slack: usize,
    pub saturate: bool,
    /// Checks to run; all when `None`.
    pub only: Option<Vec<CheckId>>,
    pub use_theorems: bool,
    pub event_mode: Option<EventMode>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            bound: None,
            path_bound: None,
            slack: 2,
            saturate: false,
            only: None,
            use_theorems: true,
            event_mode: None,
        }
    }
}

pub struct Analysis {
    pub ltsi: Ltsi,
    pub events: EventPartition,
    pub relations: Option<EventRelations>,
    pub pre_reversible: bool,
    pub bound: usize,
    pub path_bound: usize,
    pub results: Vec<(CheckId, Verdict)>,
    pub info: Vec<String>,
}

impl Analysis {
    pub fn any_fails(&self) -> bool {
        self.results.iter().any(|(_, v)| v.status.fails())
    }
    pub fn get(&self, c: CheckId) -> Option<&Verdict> {
        self.results.iter().find(|(x, _)| *x == c).map(|(_, v)| v)
    }
    pub fn status(&self, name: &str) -> Option<&Status> {
        let c: CheckId = name.parse().ok()?;
        self.get(c).map(|v| &v.status)
    }
}

pub fn default_bound(l: &Ltsi) -> usize {
    2 * l.n_forward() + 2
}

pub fn run_checks(input: &Ltsi, opts: &CheckOptions) -> Analysis {
    let l = if opts.saturate {
        saturate_coinitial(input)
    } else {
        input.clone()
    };
    let prerev = axioms::is_pre_reversible(&l).status.holds_exact();
    let mode = opts.event_mode.unwrap_or(if prerev {
        EventMode::Simplified
    } else {
        EventMode::General
    });
    let ev = compute_events(&l, mode);
    let bound = opts.bound.unwrap_or_else(|| default_bound(&l));
    let path_bound = opts.path_bound.unwrap_or_else(|| paths::default_path_bound(&l));
    let rel = compute_relations(&l, &ev, prerev, bound).ok();

    let mut info = vec![format!(
        "states={} transitions={} ind-pairs={} events={} mode={}",
        l.n_states(),
        l.n_forward(),
        l.ind_pairs().count(),
        ev.forward_events().len(),
        match mode {
            EventMode::Simplified => "simplified",
            EventMode::General => "general",
        }
    )];
    if opts.saturate {
        info.push("independence saturated before checking".into());
    }
    if !prerev && mode == EventMode::General {
        info.push("not pre-reversible: events use the general definition".into());
    }

    let wanted = |c: CheckId| opts.only.as_ref().is_none_or(|o| o.contains(&c));
    let cs_opts = CsClOptions {
        use_theorems: opts.use_theorems,
        ..CsClOptions::new(bound)
    };
    let run = |c: CheckId| -> Verdict {
        match c {
            CheckId::Axiom(AxiomId::CLG) => with_generator(&l, axioms::clg(&l)),
            CheckId::Axiom(AxiomId::LG) => with_generator(&l, axioms::lg(&l)),
            CheckId::Axiom(a) => axioms::check_axiom(&l, a, Some(&ev)).expect("events supplied"),
            CheckId::PL => paths::check_pl(&l, path_bound, opts.slack, opts.use_theorems),
            CheckId::CC => paths::check_cc(&l, path_bound, opts.slack, opts.use_theorems),
            CheckId::UT => paths::check_ut(&l),
            CheckId::Prop(p) => match p {
                PropertyId::BLD => properties::check_bld(&l),
                PropertyId::ID => properties::check_id(&l),
                PropertyId::NRE => properties::check_nre(&l, &ev, bound, opts.use_theorems),
                PropertyId::RPI => properties::check_rpi(&l),
                PropertyId::ECh => properties::check_ech(&l, &ev),
                _ => {
                    let (variant, dir) = p.cs_cl().expect("remaining properties are CS/CL");
                    properties::check_cs_cl(&l, &ev, rel.as_ref(), variant, dir, cs_opts)
                        .unwrap_or_else(|e| Verdict::unknown(e.to_string()))
                }
            },
            CheckId::Poly => match &rel {
                Some(rel) => check_polychotomy(&ev, rel, prerev),
                None => Verdict::unknown("no irreversible state"),
            },
            CheckId::Bd => structural::check_backward_determinism(&l),
            CheckId::PreRev => axioms::is_pre_reversible(&l),
        }
    };
    let checks: Vec<CheckId> = CheckId::all().into_iter().filter(|&c| wanted(c)).collect();
    // Checks are pure; run them side by side and keep table order.
    let results: Vec<(CheckId, Verdict)> = std::thread::scope(|s| {
        let handles: Vec<_> = checks
            .iter()
            .map(|&c| (c, s.spawn(move || run(c))))
            .collect();
        handles
            .into_iter()
            .map(|(c, h)| (c, h.join().expect("check panicked")))
            .collect()
    });

    Analysis {
        ltsi: l,
        events: ev,
        relations: rel,
        pre_reversible: prerev,
        bound,
        path_bound,
        results,
        info,
    }
}

fn with_generator(l: &Ltsi, (v, rel): (Verdict, Option<axioms::LabelRel>)) -> Verdict {
    match rel {
        Some(rel) => v.with_note(format!("I={}", axioms::render_label_rel(l, &rel))),
        None => v,
    }
}

fn witness_text(a: &Analysis, v: &Verdict) -> Option<String> {
    v.witness
        .as_ref()
        .map(|w| render_witness(&a.ltsi, Some(&a.events), w))
}

/// `RESULT` lines followed by an aligned table.
pub fn render_text(a: &Analysis) -> String {
    let mut out = String::new();
    for i in &a.info {
        out.push_str(&format!("INFO {i}\n"));
    }
    for (c, v) in &a.results {
        out.push_str(&format!("RESULT {c} {}", v.status));
        if let Some(w) = witness_text(a, v) {
            out.push_str(&format!(" witness={w}"));
        }
        if let Some(n) = &v.note {
            out.push_str(&format!(" note=\"{n}\""));
        }
        out.push('\n');
    }
    out.push('\n');
    let rows: Vec<(String, String, String)> = a
        .results
        .iter()
        .map(|(c, v)| (c.to_string(), v.status.to_string(), witness_text(a, v).unwrap_or_default()))
        .collect();
    let w0 = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max(5);
    let w1 = rows.iter().map(|r| r.1.len()).max().unwrap_or(0).max(6);
    out.push_str(&format!("{:<w0$}  {:<w1$}  witness\n", "check", "status"));
    for (c, s, w) in rows {
        out.push_str(format!("{c:<w0$}  {s:<w1$}  {w}").trim_end());
        out.push('\n');
    }
    out
}

/// One tab-separated `RESULT` line per check: name, status, witness, note.
pub fn render_tsv(a: &Analysis) -> String {
    let mut out = String::new();
    for (c, v) in &a.results {
        out.push_str(&format!(
            "RESULT\t{c}\t{}\t{}\t{}\n",
            v.status,
            witness_text(a, v).unwrap_or_default(),
            v.note.clone().unwrap_or_default()
        ));
    }
    out
}

/// `EVENT` lines, then `COIND`, `CAUSE` and `CONFLICT` lines over forward events.
pub fn render_events(l: &Ltsi, ev: &EventPartition, rel: Option<&EventRelations>) -> String {
    let mut out = format!(
        "INFO mode={}\n",
        match ev.mode {
            EventMode::Simplified => "simplified",
            EventMode::General => "general",
        }
    );
    for e in 0..ev.len() {
        let members: Vec<String> = ev.members(e).iter().map(|&t| l.tr_name(t)).collect();
        out.push_str(&format!(
            "EVENT {} {} label={} rev={} members={}\n",
            ev.name(l, e),
            if ev.is_forward(e) { "fwd" } else { "bwd" },
            l.label_name(l.label(ev.rep(e))),
            ev.name(l, ev.rev(e)),
            members.join(",")
        ));
    }
    let Some(rel) = rel else {
        out.push_str("INFO relations unavailable: no irreversible state\n");
        return out;
    };
    match rel.bound {
        None => out.push_str("INFO order and conflict exact\n"),
        Some(b) => out.push_str(&format!("INFO order and conflict over rooted paths up to {b}\n")),
    }
    for (e, f) in rel.coind_pairs() {
        if e < f {
            out.push_str(&format!("COIND {} {}\n", ev.name(l, e), ev.name(l, f)));
        }
    }
    let fwd = ev.forward_events();
    for &e in &fwd {
        for &f in &fwd {
            if rel.lt(e, f) {
                out.push_str(&format!("CAUSE {} {}\n", ev.name(l, e), ev.name(l, f)));
            }
        }
    }
    for &e in &fwd {
        for &f in &fwd {
            if e < f && rel.conflict(e, f) {
                out.push_str(&format!("CONFLICT {} {}\n", ev.name(l, e), ev.name(l, f)));
            }
        }
    }
    out
}
