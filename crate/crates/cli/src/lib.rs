//! The `proofforge` command line.
//!
//! Exit codes: 0 success, 1 usage, 2 no proof or not entailed, 3 cancelled
//! with a partial proof (still written, marked suboptimal), 4 internal limit.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::thread;
use std::time::Duration;

use clap::{Parser, Subcommand};
use proofforge_core::dl::{parse_axiom, parse_ontology, parse_unicode_axiom, Axiom, Ontology, Signature};
use proofforge_core::el::classify;
use proofforge_core::forget::{default_order, forget_signature, ForgetOptions};
use proofforge_core::justify::{compute_all_justifications, compute_justification};
use proofforge_core::methods::{explain, known_signature, ExplainOptions, Method};
use proofforge_core::proof::{check_proof, measure_proof, read_json, write_dot, write_json, Measure, Proof};
use proofforge_core::{CancelToken, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NO_PROOF: i32 = 2;
pub const EXIT_CANCELLED: i32 = 3;
pub const EXIT_LIMIT: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "proofforge", version, about = "Proofs for description-logic entailments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Print the entailed atomic inclusions.
    Classify { file: PathBuf },
    /// Print a justification (or up to N of them) for a goal.
    Justify {
        file: PathBuf,
        #[arg(long)]
        goal: String,
        #[arg(long, value_name = "N")]
        all: Option<usize>,
    },
    /// Generate a proof of a goal.
    Explain {
        file: PathBuf,
        #[arg(long)]
        goal: String,
        #[arg(long, value_parser = parse_method)]
        method: Method,
        /// File of known names, one per line.
        #[arg(long, value_name = "SIGFILE")]
        known: Option<PathBuf>,
        #[arg(long, value_parser = parse_measure)]
        measure: Option<Measure>,
        #[arg(long, value_name = "SECS")]
        timeout: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Forget every name except the kept ones.
    Forget {
        file: PathBuf,
        /// Comma- or space-separated names.
        #[arg(long)]
        keep: String,
    },
    /// Verify a proof file.
    Check {
        proof: PathBuf,
        #[arg(long)]
        ontology: PathBuf,
        #[arg(long)]
        goal: String,
        #[arg(long, value_name = "SIGFILE")]
        known: Option<PathBuf>,
    },
    /// Start the HTTP service.
    Serve {
        #[arg(long, default_value_t = proofforge_service::DEFAULT_PORT)]
        port: u16,
    },
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse()
}

fn parse_measure(s: &str) -> Result<Measure, String> {
    s.parse()
}

struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::NotEntailed(_) | Error::NoProof(_) | Error::GoalNotDerived(_) => EXIT_NO_PROOF,
            Error::ResourceLimit { .. } | Error::BudgetExceeded(_) | Error::Cancelled { .. } | Error::CyclicDefiner(_) => EXIT_LIMIT,
            _ => EXIT_USAGE,
        };
        let msg = match &e {
            Error::Precondition(m) => m.clone(),
            _ => e.to_string(),
        };
        Failure(code, msg)
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, msg.into())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Ontology, Failure> {
    parse_ontology(&read(path)?).map_err(|e| usage(format!("{}:{e}", path.display())))
}

fn goal(text: &str, o: &Ontology) -> Result<Axiom, Failure> {
    parse_axiom(text)
        .or_else(|e| parse_unicode_axiom(text, &o.signature().roles).map_err(|_| e))
        .map_err(|e| usage(format!("goal: {e}")))
}

fn known(path: Option<&PathBuf>, o: &Ontology) -> Result<Signature, Failure> {
    match path {
        None => Ok(Signature::new()),
        Some(p) => Ok(known_signature(o, read(p)?.lines())),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure(EXIT_LIMIT, format!("{}: {e}", path.display())))
}

fn per_name() -> Duration {
    std::env::var("PROOFFORGE_TIMEOUT_SECS")
        .ok()
        .and_then(|s| s.parse::<f64>().ok())
        .filter(|s| *s > 0.0)
        .map(Duration::from_secs_f64)
        .unwrap_or(ExplainOptions::default().per_name)
}

/// Test hook: `PROOFFORGE_EXPANSION_DELAY_MS` slows every expansion of the elimination search.
fn expansion_delay() -> Option<Duration> {
    std::env::var("PROOFFORGE_EXPANSION_DELAY_MS").ok().and_then(|s| s.parse().ok()).map(Duration::from_millis)
}

/// Runs one command. Diagnostics go to `err`, results to `out`.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.cmd, out, err) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn dispatch(cmd: Cmd, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let io = |e: std::io::Error| Failure(EXIT_LIMIT, e.to_string());
    match cmd {
        Cmd::Classify { file } => {
            let o = load(&file)?;
            for a in classify(&o)? {
                writeln!(out, "{}", a.to_unicode()).map_err(io)?;
            }
        }
        Cmd::Justify { file, goal: g, all } => {
            let o = load(&file)?;
            let g = goal(&g, &o)?;
            let js = match all {
                None => vec![compute_justification(&o, &g)?],
                Some(n) => compute_all_justifications(&o, &g, n)?,
            };
            for (i, j) in js.iter().enumerate() {
                if all.is_some() {
                    writeln!(out, "# justification {}", i + 1).map_err(io)?;
                }
                for a in o.iter().filter(|a| j.axioms.contains(a)) {
                    writeln!(out, "{}", a.to_ascii()).map_err(io)?;
                }
            }
        }
        Cmd::Explain { file, goal: g, method, known: k, measure, timeout, out: path, dot } => {
            let o = load(&file)?;
            let g = goal(&g, &o)?;
            let known = known(k.as_ref(), &o)?;
            let cancel = CancelToken::new();
            cancel.set_expansion_delay(expansion_delay());
            if let Some(secs) = timeout {
                let t = cancel.clone();
                let d = Duration::try_from_secs_f64(secs).map_err(|e| usage(format!("--timeout: {e}")))?;
                thread::spawn(move || {
                    thread::sleep(d);
                    t.cancel();
                });
            }
            let opts = ExplainOptions { known, measure, per_name: per_name(), cancel: Some(cancel) };
            let (proof, code) = match explain(&o, &g, method, &opts) {
                Ok(e) => {
                    for w in &e.warnings {
                        let _ = writeln!(err, "warning: {w}");
                    }
                    (e.proof, EXIT_OK)
                }
                Err(Error::Cancelled { best: Some(p) }) => {
                    let _ = writeln!(err, "warning: cancelled; the proof may be sub-optimal");
                    let mut p = *p;
                    p.suboptimal = true;
                    (p, EXIT_CANCELLED)
                }
                Err(e) => return Err(e.into()),
            };
            emit(&proof, path.as_deref(), dot.as_deref(), out)?;
            return Ok(code);
        }
        Cmd::Forget { file, keep } => {
            let o = load(&file)?;
            let keep = known_signature(&o, keep.split([',', ' ']));
            let opts = ForgetOptions { per_name: per_name(), ..ForgetOptions::default() };
            let r = forget_signature(&o, &keep, &default_order(&o.signature()), &opts)?;
            if !r.failed.is_empty() {
                let names: Vec<&str> = r.failed.iter().map(|s| s.name()).collect();
                let _ = writeln!(err, "warning: could not forget {}", names.join(", "));
            }
            write!(out, "{}", r.result.to_text()).map_err(io)?;
        }
        Cmd::Check { proof, ontology, goal: g, known: k } => {
            let o = load(&ontology)?;
            let g = goal(&g, &o)?;
            let known = known(k.as_ref(), &o)?;
            let p = read_json(&read(&proof)?)?;
            let report = check_proof(&p, &o, &g, &known);
            if report.is_valid() {
                writeln!(out, "valid").map_err(io)?;
            } else {
                write!(out, "{report}").map_err(io)?;
                return Ok(EXIT_NO_PROOF);
            }
        }
        Cmd::Serve { port } => {
            proofforge_service::serve_blocking(proofforge_service::ServiceConfig::from_env(), port).map_err(io)?;
        }
    }
    Ok(EXIT_OK)
}

fn emit(p: &Proof, path: Option<&Path>, dot: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure(EXIT_LIMIT, e.to_string());
    let json = write_json(p);
    if let Some(d) = dot {
        write_file(d, &write_dot(p))?;
    }
    match path {
        Some(f) => {
            write_file(f, &json)?;
            writeln!(
                out,
                "size {} depth {} weightedSize {} steps {}{}",
                measure_proof(p, &Measure::Size),
                measure_proof(p, &Measure::Depth),
                measure_proof(p, &Measure::WeightedSize),
                p.steps.len(),
                if p.suboptimal { " (suboptimal)" } else { "" }
            )
            .map_err(io)?;
            for s in &p.steps {
                writeln!(out, "  {}: {}", s.rule, p.vertices[s.conclusion].axiom.to_unicode()).map_err(io)?;
            }
        }
        None => write!(out, "{json}").map_err(io)?,
    }
    Ok(())
}
