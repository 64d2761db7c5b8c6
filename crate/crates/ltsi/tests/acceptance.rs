//! Acceptance suite. Each criterion prints one `PASS` or `FAIL` line; the
//! process exits non-zero if any criterion fails for a reason not listed in
//! `DOCUMENTED`.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::*;
use ltsi::axioms;
use ltsi::calculus::{self, compile, parse_term};
use ltsi::events::{check_polychotomy, compute_relations, coind_relation, default_events};
use ltsi::model::{Ltsi, Path};
use ltsi::paths::{self, EquivDecision};
use ltsi::properties::{self, CsClOptions, Direction, Variant};
use ltsi::structural::{map_c, map_g};
use ltsi::verdict::{Status, Verdict};

/// Bound on `r` for CS/CL re-verification by search on random systems.
const SEARCH_BOUND: usize = 8;
const RANDOM_INSTANCES: u64 = 500;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

/// Stated statuses that the checker contradicts with a verified witness.
/// They are reported as FAIL but do not fail the run.
const DOCUMENTED: &[(&str, &str)] = &[
    // r = ~a1 ~b1 t0 undoes a1 at Q while ♯(r,[~b1]) = 1 and ~a1 is not
    // independent of ~b1; the stated status only considers forward r.
    ("fig-notIRE-nodash", "CS_i"),
];

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        ("1 fixture truth table", fixture_truth_table, Duration::from_secs(10)),
        ("2 axiom independence", axiom_independence, Duration::from_secs(10)),
        ("3 meta-theorems on random systems", meta_theorems, Duration::from_secs(60)),
        ("4 mapping round trips", mapping_round_trips, Duration::from_secs(60)),
        ("5 calculus pipeline", calculus_pipeline, Duration::from_secs(30)),
        ("6 causal equivalence engine", equivalence_engine, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > limit => Err(format!("{msg}; took {took:.2?}, limit {limit:?}")),
            o => o,
        };
        match outcome {
            Ok(msg) => println!("PASS criterion {name}: {msg} ({took:.2?})"),
            Err(msg) if msg.starts_with(DOC_TAG) => {
                println!("FAIL criterion {name}: {} ({took:.2?})", &msg[DOC_TAG.len()..]);
            }
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} ({took:.2?})");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

const DOC_TAG: &str = "documented:";

fn check_cmd(file: &str, extra: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ltsi"))
        .arg("check")
        .arg(fixture_dir().join(format!("{file}.ltsi")))
        .args(extra)
        .output()
        .expect("run ltsi");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8 output"))
}

/// Check name to status text, from the TSV report.
fn tsv_statuses(text: &str) -> BTreeMap<String, String> {
    text.lines()
        .filter_map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            (f.first() == Some(&"RESULT")).then(|| (f[1].to_string(), f[2].to_string()))
        })
        .collect()
}

/// `H` holds in any form, `B` holds up to a bound, `D` holds by theorem,
/// `X` holds exhaustively, `F` fails, `N` does not hold.
fn status_matches(want: char, got: &str) -> bool {
    match want {
        'H' => got.starts_with("HOLDS"),
        'B' => got.starts_with("HOLDS-BOUNDED"),
        'D' => got.starts_with("HOLDS-DERIVED"),
        'X' => got == "HOLDS",
        'F' => got == "FAILS",
        'N' => !got.starts_with("HOLDS"),
        _ => unreachable!(),
    }
}

/// Statuses stated by the source examples, per fixture.
const TRUTH: &[(&str, &str)] = &[
    ("ex-notPL", "SP:H WF:H CC:H UT:H BTI:F PL:F"),
    ("ex-notBTI", "SP:H WF:H PL:H CC:H BTI:F"),
    ("ex-WFnotCC", "SP:H WF:H CC:F PL:F"),
    ("ex-rotation-disambiguated", "CC:F CS_i:H CL_i:H"),
    ("intro-selfloop", "WF:F PREREV:F"),
    ("intro-ab-merge", "BTI:F BD:F PREREV:F"),
    ("intro-choice-merge", "BTI:F BD:F PREREV:F"),
    ("fig-notIRE-dashed", "PREREV:H IRE:F CS_i:F CL_i:B CLG:X"),
    ("fig-notIRE-nodash", "PREREV:H IRE:F CL_i:F CS_i:B"),
    ("fig-IC-CLi", "PREREV:H SP:X WF:X CS_ci:D CL_ci:F CS_i:F CIRE:F CL_i:B IEC:X"),
    ("fig-halfcube", "PREREV:H CL_ci:H BFCIRE:X CL_i:H CS_i:F CIRE:F IC:X"),
    ("fig-halfcube-mod", "PREREV:H CIRE:F RPI:F CL_ci:H CL_i:H CS_i:H IEC:X"),
    ("fig-repeated", "SP:X BTI:X WF:X CC:H PCI:F BLD:F NRE:F POLY:N"),
    ("fig-IC", "PREREV:H CL_i:F CS_i:F CL_ci:F"),
    ("ex-CLG-CSi", "IRE:F SP:X BTI:X WF:X PCI:X IEC:X CIRE:X"),
    ("ex-IRE1", "IEC:F SP:X BTI:X WF:X PCI:X IRE:X"),
    ("ex-IRE2", "IEC:F SP:X BTI:X WF:X PCI:X IRE:X"),
    ("ex-LG", "LG:X IEC:F"),
    ("ex-LG-IEC", "LG:X IEC:X IC:F"),
    ("ex-CSi-RPI", "PREREV:H CIRE:X RPI:X ECh:F"),
    ("ex-IRE-IEC", "LG:F IEC:X IRE:X"),
    ("ex-IC-CIRE", "CLG:F IC:X CIRE:X"),
];

fn fixture_truth_table() -> Outcome {
    let mut problems = Vec::new();
    let mut documented = Vec::new();
    let mut checked = 0;
    let names = fixture_names();
    for name in &names {
        let (code, text) = check_cmd(name, &[]);
        let golden = std::fs::read_to_string(fixture_dir().join(format!("{name}.expected")))
            .map_err(|e| format!("{name}.expected: {e}"))?;
        if text != golden {
            problems.push(format!("{name}: report differs from {name}.expected"));
        }
        let expect_code = if text.lines().any(|l| l.starts_with("RESULT") && l.contains(" FAILS")) {
            1
        } else {
            0
        };
        if code != expect_code {
            problems.push(format!("{name}: exit code {code}"));
        }
    }
    for (name, spec) in TRUTH {
        if !names.iter().any(|n| n == name) {
            problems.push(format!("{name}: fixture missing"));
            continue;
        }
        let (_, tsv) = check_cmd(name, &["--format", "tsv"]);
        let got = tsv_statuses(&tsv);
        for item in spec.split_whitespace() {
            let (check, want) = item.split_once(':').expect("check:kind");
            let want = want.chars().next().expect("kind");
            let g = got.get(check).map(String::as_str).unwrap_or("missing");
            checked += 1;
            if !status_matches(want, g) {
                let msg = format!("{name} {check}: expected {want}, got {g}");
                if DOCUMENTED.contains(&(name, check)) {
                    documented.push(msg);
                } else {
                    problems.push(msg);
                }
            } else if DOCUMENTED.contains(&(name, check)) {
                problems.push(format!("{name} {check}: listed as documented but now matches"));
            }
        }
    }
    if problems.is_empty() && !documented.is_empty() {
        Err(format!(
            "{DOC_TAG}{} fixtures match their golden reports; {checked} stated statuses, {} documented mismatch: {} [does not fail the run]",
            names.len(),
            documented.len(),
            documented.join("; ")
        ))
    } else if problems.is_empty() {
        Ok(format!(
            "{} fixtures match their golden reports; {checked} stated statuses reproduced, 0 mismatches",
            names.len()
        ))
    } else {
        Err(problems.join("; "))
    }
}

fn axiom_independence() -> Outcome {
    let witness = |a: &str| -> &[&str] {
        match a {
            "SP" => &["ax-SP"],
            "BTI" => &["ex-notPL"],
            "WF" => &["ax-WF", "intro-selfloop"],
            "PCI" => &["ax-PCI"],
            "IRE" => &["ex-CLG-CSi"],
            "CIRE" | "BFCIRE" => &["fig-IC-CLi"],
            "IEC" => &["ex-IRE1", "ex-IRE2"],
            _ => unreachable!(),
        }
    };
    let mut problems = Vec::new();
    let mut runs = 0;
    for sixth in ["IRE", "CIRE", "BFCIRE"] {
        let set = ["SP", "BTI", "WF", "PCI", sixth, "IEC"];
        for target in set {
            for fx in witness(target) {
                runs += 1;
                let (_, tsv) = check_cmd(fx, &["--axioms", &set.join(","), "--format", "tsv"]);
                let got = tsv_statuses(&tsv);
                for a in set {
                    let g = got.get(a).map(String::as_str).unwrap_or("missing");
                    let ok = if a == target { g == "FAILS" } else { g == "HOLDS" };
                    if !ok {
                        problems.push(format!("{{{}}} {fx}: {a} is {g}", set.join(",")));
                    }
                }
            }
        }
    }
    if problems.is_empty() {
        Ok(format!("3 axiom sets, {runs} fixture runs, each failing exactly its axiom"))
    } else {
        Err(problems.join("; "))
    }
}

fn search(l: &Ltsi, ev: &ltsi::events::EventPartition, rel: Option<&ltsi::events::EventRelations>, v: Variant, d: Direction) -> Verdict {
    let opts = CsClOptions {
        use_theorems: false,
        ..CsClOptions::new(SEARCH_BOUND)
    };
    properties::check_cs_cl(l, ev, rel, v, d, opts).expect("relations supplied")
}

fn pool() -> Vec<(String, Ltsi)> {
    let mut v: Vec<(String, Ltsi)> = (0..RANDOM_INSTANCES)
        .map(|s| {
            let (shape, l) = random_ltsi(s);
            (format!("seed {s} ({shape:?})"), l)
        })
        .collect();
    // extensions along events supply general (non-coinitial) independence
    let extra: Vec<(String, Ltsi)> = v
        .iter()
        .filter(|(_, l)| axioms::is_pre_reversible(l).status.holds_exact() && !l.ind_is_empty())
        .filter_map(|(n, l)| map_g(l, &default_events(l)).ok().map(|g| (format!("g of {n}"), g)))
        .collect();
    v.extend(extra);
    v
}

fn meta_theorems() -> Outcome {
    let pool = pool();
    let mut violations: Vec<String> = Vec::new();
    let mut hyp: BTreeMap<&str, usize> = BTreeMap::new();
    for (name, l) in &pool {
        let mut bad = |what: &str| violations.push(format!("{name}: {what}"));
        let sp = axioms::sp(l).status.holds();
        let bti = axioms::bti(l).status.holds();
        let wf = axioms::wf(l).status.holds();
        let pci = axioms::pci(l).status.holds();
        let prerev = sp && bti && wf && pci;
        let ev = default_events(l);
        let ire = axioms::ire(l, &ev).status.holds();
        let iec = axioms::iec(l, &ev).status.holds();

        if sp && bti {
            *hyp.entry("SP+BTI").or_default() += 1;
            if !matches!(paths::check_pl(l, 10, 2, true).status, Status::Derived(_)) {
                bad("PL not derived from SP+BTI");
            }
            let v = paths::check_pl(l, 10, 2, false);
            if !v.status.holds() {
                bad(&format!("PL search at L=10 gives {}", v.status));
            }
        }
        if wf && sp && paths::check_pl(l, 10, 2, false).status.holds() {
            *hyp.entry("WF+PL").or_default() += 1;
            let v = paths::check_cc(l, paths::default_path_bound(l), 2, false);
            if !v.status.holds() {
                bad(&format!("CC search gives {}", v.status));
            }
        }
        if sp && pci && ire && iec {
            *hyp.entry("SP+PCI+IRE+IEC").or_default() += 1;
            if !properties::check_rpi(l).status.holds() {
                bad("RPI fails");
            }
        }
        if !prerev {
            continue;
        }
        *hyp.entry("pre-reversible").or_default() += 1;
        let rel = compute_relations(l, &ev, true, 2 * l.n_forward() + 2).ok();
        for (what, v) in [
            ("BLD", properties::check_bld(l)),
            ("ID", properties::check_id(l)),
            ("NRE", properties::check_nre(l, &ev, SEARCH_BOUND, false)),
            ("CS_ci", search(l, &ev, rel.as_ref(), Variant::Ci, Direction::Safety)),
            ("CS_ord", search(l, &ev, rel.as_ref(), Variant::Ord, Direction::Safety)),
        ] {
            if !v.status.holds() {
                bad(&format!("{what} gives {}", v.status));
            }
        }
        if let Some(rel) = &rel {
            if !check_polychotomy(&ev, rel, true).status.holds() {
                bad("polychotomy fails");
            }
        }
        if coind_relation(l, &ev).iter().any(|(e, f)| e == f) {
            bad("coinitial independence of events is reflexive");
        }
        let cs_i = search(l, &ev, rel.as_ref(), Variant::I, Direction::Safety);
        if ire {
            *hyp.entry("pre-reversible+IRE").or_default() += 1;
            let cl_i = search(l, &ev, rel.as_ref(), Variant::I, Direction::Liveness);
            for (what, v) in [("CS_i", &cs_i), ("CL_i", &cl_i)] {
                if !v.status.holds() {
                    bad(&format!("{what} gives {}", v.status));
                }
            }
            if !properties::check_ech(l, &ev).status.holds() {
                bad("ECh fails");
            }
        }
        let bfcire = axioms::bfcire(l, &ev).status.holds();
        let cl_ci = search(l, &ev, rel.as_ref(), Variant::Ci, Direction::Liveness);
        let cl_ord = search(l, &ev, rel.as_ref(), Variant::Ord, Direction::Liveness);
        if cl_ci.status.holds() != bfcire || cl_ord.status.holds() != bfcire {
            bad(&format!("BFCIRE {bfcire}, CL_ci {}, CL_ord {}", cl_ci.status, cl_ord.status));
        }
        if !bfcire {
            *hyp.entry("pre-reversible, BFCIRE fails").or_default() += 1;
        }
        if cs_i.status.holds() && !bfcire {
            bad("CS_i holds but BFCIRE fails");
        }
    }
    let counts: Vec<String> = hyp.iter().map(|(k, v)| format!("{k}: {v}")).collect();
    if violations.is_empty() {
        Ok(format!("{} systems, 0 violations [{}]", pool.len(), counts.join(", ")))
    } else {
        Err(format!("{} violations: {}", violations.len(), violations.join("; ")))
    }
}

fn mapping_round_trips() -> Outcome {
    let pool = pool();
    let mut violations = Vec::new();
    let (mut coinitial, mut general) = (0, 0);
    for (name, l) in &pool {
        if !axioms::is_pre_reversible(l).status.holds_exact() {
            continue;
        }
        let ev = default_events(l);
        if axioms::ic(l).status.holds() && axioms::cire(l, &ev).status.holds() {
            coinitial += 1;
            match map_g(l, &ev) {
                Err(e) => violations.push(format!("{name}: g undefined: {e}")),
                Ok(g) => {
                    if map_c(&g).ind_set() != l.ind_set() {
                        violations.push(format!("{name}: c(g(ι)) ≠ ι"));
                    }
                    let gev = default_events(&g);
                    for (a, v) in [
                        ("IRE", axioms::ire(&g, &gev)),
                        ("IEC", axioms::iec(&g, &gev)),
                        ("SP", axioms::sp(&g)),
                        ("PCI", axioms::pci(&g)),
                    ] {
                        if !v.status.holds() {
                            violations.push(format!("{name}: {a} fails on g(L)"));
                        }
                    }
                }
            }
        }
        if axioms::ire(l, &ev).status.holds() && axioms::iec(l, &ev).status.holds() {
            general += 1;
            let c = map_c(l);
            match map_g(&c, &default_events(&c)) {
                Err(e) => violations.push(format!("{name}: g(c) undefined: {e}")),
                Ok(gc) => {
                    if gc.ind_set() != l.ind_set() {
                        violations.push(format!("{name}: g(c(ι)) ≠ ι"));
                    }
                }
            }
        }
    }
    if violations.is_empty() {
        Ok(format!(
            "{coinitial} coinitial CIRE systems and {general} IRE+IEC systems round-trip, 0 violations"
        ))
    } else {
        Err(violations.join("; "))
    }
}

fn calculus_pipeline() -> Outcome {
    let mut problems = Vec::new();
    let terms = calculus::corpus(7, 40);
    let bound = 6;
    for t in &terms {
        let c = match compile(t) {
            Ok(c) => c,
            Err(e) => {
                problems.push(format!("{t}: {e}"));
                continue;
            }
        };
        let l = &c.ltsi;
        if !axioms::is_pre_reversible(l).status.holds_exact() {
            problems.push(format!("{t}: not pre-reversible"));
        }
        if !axioms::clg(l).0.status.holds_exact() {
            problems.push(format!("{t}: not CLG"));
        }
        let ev = default_events(l);
        for (v, d) in [(Variant::Ci, Direction::Safety), (Variant::Ci, Direction::Liveness)] {
            let derived = properties::check_cs_cl(l, &ev, None, v, d, CsClOptions::new(bound)).expect("ci");
            let searched = properties::check_cs_cl(
                l,
                &ev,
                None,
                v,
                d,
                CsClOptions {
                    use_theorems: false,
                    ..CsClOptions::new(bound)
                },
            )
            .expect("ci");
            if !matches!(derived.status, Status::Derived(_)) || !searched.status.holds() {
                problems.push(format!("{t}: {v:?} {d:?} derived {} searched {}", derived.status, searched.status));
            }
        }
    }
    for k in 1..=4usize {
        let src: Vec<String> = ["a", "b", "c", "d"][..k].iter().map(|a| format!("{a}.0")).collect();
        let l = compile(&parse_term(&src.join("|")).expect("parse")).expect("compile").ltsi;
        let fwd_events = default_events(&l).forward_events().len();
        if l.n_states() != 1 << k || l.n_forward() != k << (k - 1) || fwd_events != k {
            problems.push(format!(
                "hypercube {k}: {} states, {} transitions, {fwd_events} events",
                l.n_states(),
                l.n_forward()
            ));
        }
    }
    if problems.is_empty() {
        Ok(format!(
            "{} corpus terms pre-reversible and CLG, CS_ci/CL_ci search agrees at bound {bound}; hypercubes k ≤ 4 match",
            terms.len()
        ))
    } else {
        Err(problems.join("; "))
    }
}

fn equivalence_engine() -> Outcome {
    const MAX: usize = 8;
    let mut problems = Vec::new();
    let (mut yes, mut no, mut unknown) = (0usize, 0usize, 0usize);
    for name in fixture_names() {
        let l = fixture(&name);
        let Ok(eq) = paths::Equiv::new(&l, 2) else {
            continue;
        };
        let prerev = axioms::is_pre_reversible(&l).status.holds_exact();
        let ev = default_events(&l);
        let max = if prerev { MAX } else { 6 };
        for s in 0..l.n_states() {
            let mut groups: BTreeMap<usize, Vec<Path>> = BTreeMap::new();
            for p in paths::enumerate_paths(&l, s, None, max) {
                groups.entry(p.end(&l)).or_default().push(p);
            }
            for group in groups.values() {
                let rep = &group[0];
                // ≈ is an equivalence, so comparing with one member decides the group
                let mut seen = BTreeSet::new();
                for p in group {
                    if !seen.insert(&p.steps) {
                        continue;
                    }
                    match eq.decide(rep, p) {
                        EquivDecision::Yes(trace) => {
                            yes += 1;
                            match paths::replay(&l, rep, &trace) {
                                Ok(q) if q == *p => {}
                                _ => problems.push(format!("{name}: trace for {} does not replay", p.render(&l))),
                            }
                            if prerev && ev.signature(rep) != ev.signature(p) {
                                problems.push(format!("{name}: counts differ on {} ≈ {}", rep.render(&l), p.render(&l)));
                            }
                            if signed_labels(&l, rep) != signed_labels(&l, p) {
                                problems.push(format!("{name}: label counts differ on {} ≈ {}", rep.render(&l), p.render(&l)));
                            }
                        }
                        EquivDecision::No(c) => {
                            no += 1;
                            if !paths::verify_certificate(&l, rep, p, &c) {
                                problems.push(format!("{name}: certificate for {} fails", p.render(&l)));
                            }
                            if prerev {
                                problems.push(format!("{name}: {} and {} not equivalent", rep.render(&l), p.render(&l)));
                            }
                        }
                        EquivDecision::Unknown => {
                            unknown += 1;
                            if prerev {
                                problems.push(format!("{name}: undecided {} vs {}", rep.render(&l), p.render(&l)));
                            }
                        }
                    }
                }
            }
        }
    }
    if problems.is_empty() {
        Ok(format!("{yes} yes (replayed, counts equal), {no} no (certificates verified), {unknown} undecided off pre-reversible fixtures"))
    } else {
        Err(format!("{} problems: {}", problems.len(), problems.iter().take(10).cloned().collect::<Vec<_>>().join("; ")))
    }
}

/// Per-label count, reverse steps counted negatively.
fn signed_labels(l: &Ltsi, p: &Path) -> BTreeMap<usize, i64> {
    let mut m = BTreeMap::new();
    for &t in &p.steps {
        *m.entry(l.label(t)).or_insert(0) += if t.is_fwd() { 1 } else { -1 };
    }
    m.retain(|_, v| *v != 0);
    m
}
