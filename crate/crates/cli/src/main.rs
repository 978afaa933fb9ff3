use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use windbraid::garside::{inf_sup, left_normal_form, DEFAULT_TAU_BUDGET};
use windbraid::harness::{conjecture_experiment, render_word, run_cross_validation};
use windbraid::labels::{extreme_labels, label_trace};
use windbraid::relax::geodesic_factorization;
use windbraid::sigma::{is_sigma_definite, sigma_report};
use windbraid::{BraidWord, CurveDiagram, Scope};

const DEFAULT_SEED: u64 = 2024;

#[derive(Parser)]
#[command(name = "windbraid", version, about = "Braid normal forms, curve diagrams and winding-number labels")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    Full,
    Restricted,
}

#[derive(Subcommand)]
enum Command {
    /// Left normal form, inf, sup and Garside length.
    Nf {
        word: String,
        #[arg(long)]
        strands: Option<usize>,
    },
    /// Winding-number labels of the curve diagram.
    Labels {
        word: String,
        #[arg(long)]
        strands: Option<usize>,
        #[arg(long, value_enum, default_value_t = ScopeArg::Restricted)]
        scope: ScopeArg,
    },
    /// Garside length from normal forms and from labels.
    Len {
        word: String,
        #[arg(long)]
        strands: Option<usize>,
    },
    /// Geodesic factorization by relaxation.
    Relax {
        word: String,
        #[arg(long)]
        strands: Option<usize>,
    },
    /// σ-definite equivalent word with accounting.
    Sigmadef {
        word: String,
        #[arg(long)]
        strands: Option<usize>,
    },
    /// Draw the labelled curve diagram as SVG.
    Render {
        word: String,
        #[arg(long)]
        strands: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cross-validate the geometric and algebraic pipelines.
    Check {
        #[arg(long)]
        strands: usize,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// τ-length experiment on tangled round disks (experimental).
    Conjecture {
        #[arg(long, default_value_t = 3)]
        strands: usize,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_TAU_BUDGET)]
        budget: usize,
    },
}

/// Explicit flag, then `WINDBRAID_SEED`, then the built-in default.
fn seed(flag: Option<u64>) -> Result<u64, String> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("WINDBRAID_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| format!("WINDBRAID_SEED is not an integer: {v}")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// Parses `text`; without `--strands` the word gets one strand more than its
/// highest generator (at least two).
fn word(text: &str, strands: Option<usize>) -> Result<BraidWord, String> {
    if let Some(n) = strands {
        return BraidWord::parse(text, n).map_err(|e| e.to_string());
    }
    let loose = BraidWord::parse(text, usize::MAX / 2).map_err(|e| e.to_string())?;
    let n = loose.letters().iter().map(|l| l.index + 1).max().unwrap_or(2).max(2);
    BraidWord::new(n, loose.letters().to_vec()).map_err(|e| e.to_string())
}

fn emit(format: Format, value: Value, text: String) {
    let out = match format {
        Format::Json => serde_json::to_string_pretty(&value).expect("json"),
        Format::Text => text,
    };
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = writeln!(std::io::stdout(), "{out}");
}

fn run(cli: Cli) -> Result<bool, String> {
    let f = cli.format;
    match cli.command {
        Command::Nf { word: w, strands } => {
            let w = word(&w, strands)?;
            let nf = left_normal_form(&w);
            let (inf, sup, len) = inf_sup(&w);
            let factors: Vec<String> = nf.factors.iter().map(|p| p.to_word().to_string()).collect();
            emit(
                f,
                json!({ "strands": w.strands(), "inf": inf, "sup": sup, "length": len, "factors": factors }),
                format!("Δ^{inf} · {}\ninf {inf}  sup {sup}  length {len}", if factors.is_empty() { "1".into() } else { factors.join(" · ") }),
            );
        }
        Command::Labels { word: w, strands, scope } => {
            let w = word(&w, strands)?;
            let scope = match scope {
                ScopeArg::Full => Scope::Full,
                ScopeArg::Restricted => Scope::Restricted,
            };
            let d = CurveDiagram::from_word(&w);
            let tr = label_trace(&d);
            let labels: Vec<i64> = tr.scoped_segments(scope).map(|s| s.label).collect();
            let (ll, sl) = extreme_labels(&d, scope);
            let text = labels.iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
            emit(f, json!({ "labels": labels, "ll": ll, "sl": sl }), format!("{text}\nLL {ll}  SL {sl}"));
        }
        Command::Len { word: w, strands } => {
            let w = word(&w, strands)?;
            let (_, _, algebraic) = inf_sup(&w);
            let (ll, sl) = extreme_labels(&CurveDiagram::from_word(&w), Scope::Restricted);
            let geometric = ll.max(0) - sl.min(0);
            let agree = algebraic == geometric;
            emit(
                f,
                json!({ "garside": algebraic, "labels": geometric, "agree": agree }),
                format!("garside {algebraic}  labels {geometric}  agree {agree}"),
            );
            return Ok(agree);
        }
        Command::Relax { word: w, strands } => {
            let w = word(&w, strands)?;
            let fac = geodesic_factorization(&w).map_err(|e| e.to_string())?;
            let factors: Vec<String> = fac
                .factors
                .iter()
                .map(|x| {
                    let s = x.simple.to_word();
                    if x.inverse { format!("({s})^-1") } else { format!("({s})") }
                })
                .collect();
            emit(f, json!({ "factors": factors, "count": factors.len() }), factors.join(" · "));
        }
        Command::Sigmadef { word: w, strands } => {
            let w = word(&w, strands)?;
            let r = sigma_report(&w).map_err(|e| e.to_string())?;
            let text = format!(
                "{}\nσ1 count {}  sup {}  length {} -> {}  C {:.3}  definite {}",
                r.output_word,
                r.sigma1_count,
                r.sup,
                r.length_in,
                r.length_out,
                r.c_effective,
                is_sigma_definite(&r.output_word)
            );
            let mut v = serde_json::to_value(&r).expect("json");
            v["output"] = json!(r.output_word.to_string());
            emit(f, v, text);
        }
        Command::Render { word: w, strands, out } => {
            let w = word(&w, strands)?;
            std::fs::write(&out, render_word(&w)).map_err(|e| format!("{}: {e}", out.display()))?;
            emit(f, json!({ "written": out.display().to_string() }), format!("wrote {}", out.display()));
        }
        Command::Check { strands, count, max_len, seed: s } => {
            if strands < 2 {
                return Err("--strands must be at least 2".into());
            }
            let r = run_cross_validation(strands, count, max_len, seed(s)?);
            let mut text = format!(
                "{}: {} cases, {} failures, {} extremal-arc observations ({} ms)",
                r.suite,
                r.cases,
                r.failures.len(),
                r.observations.len(),
                r.elapsed_ms
            );
            for x in r.failures.iter().take(20) {
                text += &format!("\n  FAIL {} [{}] B{} seed {}: expected {} got {}", x.check, x.word, x.strands, x.seed, x.expected, x.actual);
            }
            let ok = r.passed();
            emit(f, serde_json::to_value(&r).expect("json"), text);
            return Ok(ok);
        }
        Command::Conjecture { strands, count, seed: s, budget } => {
            if strands < 2 {
                return Err("--strands must be at least 2".into());
            }
            let r = conjecture_experiment(strands, count, seed(s)?, budget);
            let mut text = format!(
                "EXPERIMENTAL: {} braids, {} skipped, {} supporting, {} budget-exhausted, {} candidates",
                r.braids,
                r.skipped,
                r.supporting,
                r.budget_exhausted,
                r.candidates.len()
            );
            for c in r.candidates.iter().take(20) {
                text += &format!(
                    "\n  candidate [{}] disk {:?} step {}: τ {:?} -> {:?}",
                    c.word, c.disk, c.step, c.tau_before, c.tau_after
                );
            }
            emit(f, serde_json::to_value(&r).expect("json"), text);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
