//! Command-line front end: experiment selection, parameter plumbing, and
//! report emission.
//!
//! Exit codes: 0 on success, 2 when a precondition or argument is
//! violated, 1 on internal numerical failure.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::experiments::{self, EprVersion, SteeringMode};
use crate::ledger;
use crate::report::ExperimentReport;

/// Environment variable naming the default output directory; when set and
/// no `--output` is given, reports are written there instead of stdout.
pub const OUTPUT_DIR_ENV: &str = "MACROSPIN_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Report format.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EprVersionArg {
    TwoSpin,
    ThreeSpin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SteeringModeArg {
    Qubit,
    Cat,
}

#[derive(Debug, Parser)]
#[command(name = "macrospin", version, about = "Exact gedanken-experiment simulations of macroscopic spins, cat states, and executable hidden-variable ledgers", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spin-1/2 EPR-Bohm steering run (two-spin Bell or three-spin GHZ).
    EprBohm {
        #[arg(long, value_enum, default_value = "two-spin")]
        version: EprVersionArg,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Continuous-variable EPR-Bohm run on the entangled cat state.
    EprBohmCat {
        /// Coherent amplitude of mode A (radians-free, in [0.5, 4]).
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        /// Coherent amplitude of mode B.
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// GHZ moments, the deterministic-assignment search, and ledger replay.
    Ghz {
        #[arg(long, default_value_t = 1)]
        qubits_per_site: usize,
        #[arg(long, default_value_t = 2000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Four-correlator Bell quantity on the singlet.
    Chsh {
        /// Four xz-plane angles θ,θ',φ,φ' in radians, comma-separated.
        #[arg(long, default_value = "0,1.5707963267948966,0.7853981633974483,2.356194490192345")]
        angles: String,
        #[arg(long, default_value_t = 2000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Entangled state vs its one-rotation-equivalent separable mixture.
    SingleRotation {
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Readout-timing invariance across interleavings of remote unitaries.
    Timing {
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Inference-plus-misclassification steering criterion.
    Steering {
        #[arg(long, value_enum, default_value = "qubit")]
        mode: SteeringModeArg,
        /// Coherent amplitude for cat mode.
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// NOON-qubit rotations and the Hamiltonian gate-fidelity scan.
    Noon {
        #[arg(long, default_value_t = 2)]
        photons: usize,
        /// Number of κ/g ratios scanned.
        #[arg(long, default_value_t = 24)]
        ratios: usize,
        /// Evolution times tried per ratio.
        #[arg(long, default_value_t = 40)]
        times_per_ratio: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Replay a scripted scenario through the hidden-variable ledger.
    LedgerReplay {
        /// Scenario script file.
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value_t = 1)]
        qubits_per_site: usize,
        #[arg(long, default_value_t = 2000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exhaustive search for deterministic ±1 assignments.
    DmrSearch {
        /// Constraint preset (currently only `ghz`).
        #[arg(long, default_value = "ghz")]
        preset: String,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn parse_angles(text: &str) -> crate::error::Result<(f64, f64, f64, f64)> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(Error::invalid(format!(
            "expected four comma-separated angles in radians, got {}",
            parts.len()
        )));
    }
    let mut vals = [0.0f64; 4];
    for (v, p) in vals.iter_mut().zip(&parts) {
        *v = p
            .parse::<f64>()
            .map_err(|_| Error::invalid(format!("not a number: `{p}`")))?;
    }
    Ok((vals[0], vals[1], vals[2], vals[3]))
}

fn dmr_report(preset: &str) -> crate::error::Result<ExperimentReport> {
    let constraints = match preset {
        "ghz" => ledger::ghz_constraints(),
        other => return Err(Error::invalid(format!("unknown preset `{other}`"))),
    };
    let mut r = ExperimentReport::new("dmr-search");
    let solutions = ledger::dmr_search(&constraints)?;
    r.moments.insert("constraints".into(), constraints.len() as f64);
    r.moments.insert("satisfying_assignments".into(), solutions.len() as f64);
    Ok(r)
}

fn run_report(cmd: &Command) -> crate::error::Result<(ExperimentReport, Format, Option<PathBuf>)> {
    let (report, out) = match cmd {
        Command::EprBohm { version, out } => {
            let v = match version {
                EprVersionArg::TwoSpin => EprVersion::TwoSpin,
                EprVersionArg::ThreeSpin => EprVersion::ThreeSpin,
            };
            (experiments::run_epr_bohm_qubit(v)?, out)
        }
        Command::EprBohmCat { alpha, beta, out } => {
            (experiments::run_epr_bohm_cat(*alpha, *beta)?, out)
        }
        Command::Ghz { qubits_per_site, trials, seed, out } => {
            (experiments::run_ghz(*qubits_per_site, *trials, *seed)?, out)
        }
        Command::Chsh { angles, trials, seed, out } => {
            let (t, tp, p, pp) = parse_angles(angles)?;
            (experiments::run_chsh(t, tp, p, pp, *trials, *seed)?, out)
        }
        Command::SingleRotation { out } => {
            (experiments::run_single_rotation_equivalence()?, out)
        }
        Command::Timing { out } => (experiments::run_timing_invariance()?, out),
        Command::Steering { mode, alpha, out } => {
            let m = match mode {
                SteeringModeArg::Qubit => SteeringMode::Qubit,
                SteeringModeArg::Cat => SteeringMode::Cat { alpha: *alpha },
            };
            (experiments::run_wlr_steering(m)?, out)
        }
        Command::Noon { photons, ratios, times_per_ratio, out } => {
            (experiments::run_noon(*photons, *ratios, *times_per_ratio)?, out)
        }
        Command::LedgerReplay { scenario, qubits_per_site, trials, seed, out } => {
            let script = crate::scenario::parse_scenario(scenario)?;
            (experiments::run_scenario_replay(&script, *qubits_per_site, *trials, *seed)?, out)
        }
        Command::DmrSearch { preset, out } => (dmr_report(preset)?, out),
    };
    Ok((report, out.format, out.output.clone()))
}

fn render(report: &ExperimentReport, format: Format) -> crate::error::Result<String> {
    Ok(match format {
        Format::Json => report.to_json()?,
        Format::Csv => report.to_csv(),
        Format::Text => report.to_text(),
    })
}

fn default_output_path(report: &ExperimentReport, format: Format) -> Option<PathBuf> {
    let dir = std::env::var_os(OUTPUT_DIR_ENV)?;
    let ext = match format {
        Format::Json => "json",
        Format::Csv => "csv",
        Format::Text => "txt",
    };
    Some(PathBuf::from(dir).join(format!("{}.{ext}", report.experiment)))
}

fn precondition_error(err: &Error) -> bool {
    matches!(
        err,
        Error::CutoffInadequate { .. }
            | Error::RegisterTooLarge { .. }
            | Error::VariableBudgetExceeded { .. }
            | Error::TooFewTrials { .. }
            | Error::ScenarioParse { .. }
            | Error::UnsupportedSetting { .. }
            | Error::PhotonBoundExceeded { .. }
            | Error::InvalidInput(_)
            | Error::Io(_)
    )
}

/// Run the CLI on explicit arguments (the first being the program name);
/// returns the process exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // help/version requests are successful exits; argument errors
            // are precondition failures
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run_report(&cli.command) {
        Ok((report, format, output)) => {
            let text = match render(&report, format) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {e}");
                    return 1;
                }
            };
            let target = output.or_else(|| default_output_path(&report, format));
            match target {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, &text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return 2;
                    }
                }
                None => print!("{text}"),
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            if precondition_error(&e) {
                2
            } else {
                1
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_parsing() {
        let (a, b, c, d) = parse_angles("0, 1.5, 0.75,2.25").unwrap();
        assert_eq!((a, b, c, d), (0.0, 1.5, 0.75, 2.25));
        assert!(parse_angles("1,2,3").is_err());
        assert!(parse_angles("1,2,3,four").is_err());
    }

    #[test]
    fn dmr_preset_reports_zero_assignments() {
        let r = dmr_report("ghz").unwrap();
        assert_eq!(r.moments["satisfying_assignments"], 0.0);
        assert!(dmr_report("bogus").is_err());
    }

    #[test]
    fn unknown_subcommand_is_a_usage_error() {
        assert_eq!(run(["macrospin", "frobnicate"]), 2);
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(run(["macrospin", "--help"]), 0);
    }

    #[test]
    fn precondition_violation_exits_two() {
        assert_eq!(run(["macrospin", "epr-bohm-cat", "--alpha", "9"]), 2);
        assert_eq!(run(["macrospin", "ghz", "--trials", "10"]), 2);
    }

    #[test]
    fn ghz_run_exits_zero_and_writes_the_report() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ghz.json");
        let code = run([
            "macrospin",
            "ghz",
            "--trials",
            "200",
            "--format",
            "json",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let text = std::fs::read_to_string(&path).unwrap();
        let report = ExperimentReport::from_json(&text).unwrap();
        assert!((report.moments["xxx"] + 1.0).abs() < 1e-10);
    }
}
