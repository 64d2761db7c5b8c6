use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ltsi::axioms::AxiomId;
use ltsi::calculus;
use ltsi::events::{compute_events_checked, compute_relations, default_events, EventMode};
use ltsi::format::{emit_ltsi, parse_ltsi};
use ltsi::model::{saturate_coinitial, Ltsi, Path};
use ltsi::paths::{self, EquivDecision};
use ltsi::properties::PropertyId;
use ltsi::report::{self, CheckId, CheckOptions};
use ltsi::structural;

#[derive(Parser)]
#[command(name = "ltsi", version, about = "Check transition systems with independence for causal reversibility")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Tsv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    General,
    Simplified,
}

impl From<Mode> for EventMode {
    fn from(m: Mode) -> EventMode {
        match m {
            Mode::General => EventMode::General,
            Mode::Simplified => EventMode::Simplified,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Run axiom and property checks.
    Check {
        file: PathBuf,
        /// Bound on rooted paths and on CS/CL continuations.
        #[arg(long)]
        bound: Option<usize>,
        /// Bound on paths for PL and CC.
        #[arg(long)]
        path_bound: Option<usize>,
        #[arg(long, default_value_t = 2)]
        slack: usize,
        /// Close independence under BTI and square propagation first.
        #[arg(long)]
        saturate: bool,
        /// Comma-separated axioms to check.
        #[arg(long, value_delimiter = ',')]
        axioms: Option<Vec<String>>,
        /// Comma-separated properties to check (PL, CC, UT, BLD, ..., POLY, BD, PREREV).
        #[arg(long, value_delimiter = ',')]
        props: Option<Vec<String>>,
        /// Decide everything by enumeration, without theorem shortcuts.
        #[arg(long)]
        no_theorems: bool,
        #[arg(long, value_enum)]
        events: Option<Mode>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List events and their relations.
    Events {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// Allow simplified events on systems that are not pre-reversible.
        #[arg(long)]
        force: bool,
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Decide causal equivalence of two coinitial paths.
    Equiv {
        file: PathBuf,
        /// Path as transition ids, `~id` for reverse; give twice.
        #[arg(long = "path", num_args = 1, required = true)]
        paths: Vec<String>,
        /// Start state, needed when both paths are empty.
        #[arg(long)]
        start: Option<String>,
        #[arg(long, default_value_t = 2)]
        slack: usize,
    },
    /// Compile a process term to a system.
    Gen {
        #[arg(long)]
        term: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Apply the coinitial restriction or the extension along events.
    Map {
        file: PathBuf,
        #[arg(long, conflicts_with = "g", required_unless_present = "g")]
        c: bool,
        #[arg(long)]
        g: bool,
        /// With --g: extend by the label relation instead of by events.
        #[arg(long, requires = "g")]
        by_labels: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Close independence under BTI and square propagation.
    Saturate {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn load(file: &PathBuf) -> Result<Ltsi, String> {
    let text = fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))?;
    parse_ltsi(&text).map_err(|e| format!("{}: {e}", file.display()))
}

fn write_out(output: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => fail(e),
    }
}

fn run(cmd: Cmd) -> Result<ExitCode, String> {
    match cmd {
        Cmd::Check {
            file,
            bound,
            path_bound,
            slack,
            saturate,
            axioms,
            props,
            no_theorems,
            events,
            format,
        } => {
            let l = load(&file)?;
            let mut only: Option<Vec<CheckId>> = None;
            if let Some(a) = axioms {
                let ids = a
                    .iter()
                    .map(|s| s.parse::<AxiomId>().map(CheckId::Axiom))
                    .collect::<Result<Vec<_>, _>>()?;
                only.get_or_insert_with(Vec::new).extend(ids);
            }
            if let Some(p) = props {
                let ids = p
                    .iter()
                    .map(|s| match s.parse::<PropertyId>() {
                        Ok(p) => Ok(CheckId::Prop(p)),
                        Err(_) => s.parse::<CheckId>().and_then(|c| {
                            if c.is_axiom() {
                                Err(format!("`{s}` is an axiom; use --axioms"))
                            } else {
                                Ok(c)
                            }
                        }),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                only.get_or_insert_with(Vec::new).extend(ids);
            }
            let opts = CheckOptions {
                bound,
                path_bound,
                slack,
                saturate,
                only,
                use_theorems: !no_theorems,
                event_mode: events.map(Into::into),
            };
            let a = report::run_checks(&l, &opts);
            match format {
                Format::Text => print!("{}", report::render_text(&a)),
                Format::Tsv => print!("{}", report::render_tsv(&a)),
            }
            Ok(ExitCode::from(if a.any_fails() { 1 } else { 0 }))
        }
        Cmd::Events { file, mode, force, bound } => {
            let l = load(&file)?;
            let ev = match mode {
                Some(m) => compute_events_checked(&l, m.into(), force).map_err(|e| e.to_string())?,
                None => default_events(&l),
            };
            let prerev = ltsi::axioms::is_pre_reversible(&l).status.holds_exact();
            let bound = bound.unwrap_or_else(|| report::default_bound(&l));
            let rel = compute_relations(&l, &ev, prerev, bound).ok();
            print!("{}", report::render_events(&l, &ev, rel.as_ref()));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Equiv { file, paths: ps, start, slack } => {
            let l = load(&file)?;
            if ps.len() != 2 {
                return Err("give exactly two --path arguments".into());
            }
            let start = match start {
                Some(s) => Some(l.state_index(&s).ok_or(format!("unknown state `{s}`"))?),
                None => None,
            };
            // An empty path takes its start from the other one.
            let first = |p: &str| -> Option<usize> {
                let t = p.split_whitespace().next()?;
                l.parse_ref(t).map(|t| l.src(t))
            };
            let start = start.or_else(|| first(&ps[0])).or_else(|| first(&ps[1]));
            let parse = |p: &str| Path::parse(&l, p, start).map_err(|e| format!("path `{p}`: {e}"));
            let (r, s) = (parse(&ps[0])?, parse(&ps[1])?);
            let d = paths::causally_equivalent(&l, &r, &s, slack).map_err(|e| e.to_string())?;
            match d {
                EquivDecision::Yes(tr) => println!("EQUIV YES trace={}", paths::render_trace(&l, &tr)),
                EquivDecision::No(c) => {
                    println!("EQUIV NO certificate={}", paths::render_certificate(&l, &c))
                }
                EquivDecision::Unknown => println!("EQUIV UNKNOWN slack={slack}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Gen { term, output } => {
            let t = calculus::parse_term(&term).map_err(|e| e.to_string())?;
            let c = calculus::compile(&t).map_err(|e| e.to_string())?;
            let text = emit_ltsi(&c.ltsi, &[format!("compiled from {t}")], Some(&c.state_terms));
            write_out(&output, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Map { file, c, g: _, by_labels, output } => {
            let l = load(&file)?;
            let (m, what) = if c {
                (structural::map_c(&l), "c")
            } else if by_labels {
                (structural::map_g_by_labels(&l).map_err(|e| e.to_string())?, "g by labels")
            } else {
                let ev = default_events(&l);
                (structural::map_g(&l, &ev).map_err(|e| e.to_string())?, "g")
            };
            write_out(&output, &emit_ltsi(&m, &[format!("{what} of {}", file.display())], None))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Saturate { file, output } => {
            let l = load(&file)?;
            let s = saturate_coinitial(&l);
            write_out(&output, &emit_ltsi(&s, &[format!("saturation of {}", file.display())], None))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
