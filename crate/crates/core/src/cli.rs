//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when `verify` reports a failed check, 2 on
//! domain errors (bad `n`, `k`, `--kvec`, cut, format combination).

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::circuit::{build_circuit_with, depth, simulate, AncillaShift};
use crate::dicke::{dicke_state, qudit_dicke_state, spin_dicke_state};
use crate::error::{DickeError, Result};
use crate::mps::{canonicity_residuals, qubit_chain, qubit_chain_strict, qudit_chain, spin_chain, ti_chain};
use crate::schmidt::schmidt_spectrum;
use crate::state::{DenseState, OccupationVector};
use crate::verify::{verify_qubit, verify_qudit, verify_spin, Check};
use crate::{AMPLITUDE_TOL, RANK_TOL};

#[derive(Debug, Parser)]
#[command(
    name = "dicke-mps",
    version,
    about = "Exact MPS and preparation circuits for Dicke states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dense amplitudes of a Dicke state.
    State(CommonArgs),
    /// MPS tensors (JSON) with per-site canonicity residuals.
    Mps {
        #[command(flatten)]
        common: CommonArgs,
        /// Use the strictly canonical qubit tensors.
        #[arg(long)]
        strict: bool,
        /// Use the translation-invariant (non-canonical) tensors.
        #[arg(long, conflicts_with = "strict")]
        ti: bool,
    },
    /// Schmidt spectrum across one cut.
    Schmidt {
        #[command(flatten)]
        common: CommonArgs,
        /// Sites `1..=cut` on one side; defaults to floor(n/2).
        #[arg(long)]
        cut: Option<usize>,
    },
    /// Preparation circuit for a qubit Dicke state.
    Circuit {
        #[command(flatten)]
        common: CommonArgs,
        /// Simulate the circuit and report the fidelity against the target.
        #[arg(long)]
        simulate: bool,
        /// Use two-level ancilla swaps instead of cyclic increment/decrement.
        #[arg(long)]
        swap_ancilla: bool,
        /// Write the final system state (ancilla projected on |k>) here.
        #[arg(long, requires = "simulate")]
        state_output: Option<PathBuf>,
    },
    /// Run every invariant check for one instance.
    Verify(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Number of sites.
    #[arg(long)]
    pub n: usize,
    /// Number of excitations (qubit and spin families).
    #[arg(long)]
    pub k: Option<usize>,
    /// Twice the spin, 2s (spin family; local dimension 2s+1).
    #[arg(long = "two-s")]
    pub two_s: Option<usize>,
    /// Comma-separated occupation numbers k_0,...,k_{d-1} (qudit family).
    #[arg(long)]
    pub kvec: Option<String>,
    /// Amplitude tolerance used by `verify`.
    #[arg(long, default_value_t = AMPLITUDE_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Which Dicke family an invocation targets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Qubit { k: usize },
    Spin { k: usize, two_s: usize },
    Qudit { kvec: OccupationVector },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    State,
    Mps { strict: bool, ti: bool },
    Schmidt { cut: Option<usize> },
    Circuit { simulate: bool, swap_ancilla: bool },
    Verify,
}

/// Validated invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub n: usize,
    pub family: Family,
    pub tol: f64,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub state_output: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let (command, common, state_output) = match cli.command {
            Command::State(c) => (CommandKind::State, c, None),
            Command::Mps { common, strict, ti } => (CommandKind::Mps { strict, ti }, common, None),
            Command::Schmidt { common, cut } => (CommandKind::Schmidt { cut }, common, None),
            Command::Circuit {
                common,
                simulate,
                swap_ancilla,
                state_output,
            } => (
                CommandKind::Circuit {
                    simulate,
                    swap_ancilla,
                },
                common,
                state_output,
            ),
            Command::Verify(c) => (CommandKind::Verify, c, None),
        };
        let family = match (common.k, common.two_s, &common.kvec) {
            (Some(k), None, None) => Family::Qubit { k },
            (Some(k), Some(two_s), None) => Family::Spin { k, two_s },
            (None, None, Some(kvec)) => Family::Qudit { kvec: kvec.parse()? },
            _ => {
                return Err(DickeError::domain(
                    "give exactly one of --k, --k with --two-s, or --kvec",
                ))
            }
        };
        Ok(Self {
            command,
            n: common.n,
            family,
            tol: common.tol,
            format: common.format,
            output: common.output,
            state_output,
        })
    }
}

/// Result of a successful run.
#[derive(Debug)]
pub struct Outcome {
    /// Serialized artifact.
    pub artifact: String,
    /// False when `verify` found a failing check.
    pub passed: bool,
    /// Human-readable per-check lines, for the error stream.
    pub report: Option<String>,
}

fn target_state(n: usize, family: &Family) -> Result<DenseState> {
    match family {
        Family::Qubit { k } => dicke_state(n, *k),
        Family::Spin { k, two_s } => spin_dicke_state(n, *k, *two_s),
        Family::Qudit { kvec } => qudit_dicke_state(n, kvec),
    }
}

fn serialize_state(state: &DenseState, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(state.to_json()? + "\n"),
        Format::Csv => Ok(state.to_csv()),
    }
}

fn require_json(format: Format, what: &str) -> Result<()> {
    if format == Format::Csv {
        return Err(DickeError::domain(format!("{what} output is JSON only")));
    }
    Ok(())
}

/// Executes `config`, returning the artifact text without writing it.
pub fn execute(config: &RunConfig) -> Result<Outcome> {
    let n = config.n;
    let artifact = match config.command {
        CommandKind::State => serialize_state(&target_state(n, &config.family)?, config.format)?,
        CommandKind::Mps { strict, ti } => {
            require_json(config.format, "mps")?;
            let chain = match (&config.family, strict, ti) {
                (Family::Qubit { k }, false, false) => qubit_chain(n, *k)?,
                (Family::Qubit { k }, true, _) => qubit_chain_strict(n, *k)?,
                (Family::Qubit { k }, _, true) => ti_chain(n, *k, 1)?,
                (Family::Spin { k, two_s }, false, false) => spin_chain(n, *k, *two_s)?,
                (Family::Spin { k, two_s }, _, true) => ti_chain(n, *k, *two_s)?,
                (Family::Qudit { kvec }, false, false) => qudit_chain(n, kvec)?,
                _ => {
                    return Err(DickeError::domain(
                        "--strict applies to qubit states and --ti to qubit/spin states",
                    ))
                }
            };
            let chain_json: serde_json::Value = serde_json::from_str(&chain.to_json()?)?;
            let report = json!({
                "chain": chain_json,
                "canonicity_residuals": canonicity_residuals(&chain),
            });
            serde_json::to_string(&report)? + "\n"
        }
        CommandKind::Schmidt { cut } => {
            let state = target_state(n, &config.family)?;
            let spectrum = schmidt_spectrum(&state, cut.unwrap_or(n / 2), RANK_TOL)?;
            match config.format {
                Format::Json => spectrum.to_json()? + "\n",
                Format::Csv => spectrum.to_csv(),
            }
        }
        CommandKind::Circuit {
            simulate: run_sim,
            swap_ancilla,
        } => {
            require_json(config.format, "circuit")?;
            let Family::Qubit { k } = config.family else {
                return Err(DickeError::domain(
                    "preparation circuits exist for qubit Dicke states only",
                ));
            };
            let shift = if swap_ancilla {
                AncillaShift::TwoLevelSwap
            } else {
                AncillaShift::Cyclic
            };
            let circuit = build_circuit_with(n, k, shift)?;
            if run_sim {
                let out = simulate(&circuit)?;
                let target = dicke_state(n, k)?;
                let fidelity = out.fidelity(k, &target)?;
                if let Some(path) = &config.state_output {
                    let projected = out.project_ancilla(k)?;
                    let text = match path.extension().and_then(|e| e.to_str()) {
                        Some("csv") => projected.to_csv(),
                        _ => projected.to_json()? + "\n",
                    };
                    fs::write(path, text)?;
                }
                let circuit_json: serde_json::Value = serde_json::from_str(&circuit.to_json()?)?;
                let report = json!({
                    "n": n,
                    "k": k,
                    "chi": circuit.chi,
                    "gates": circuit.gate_count(),
                    "depth": depth(&circuit),
                    "fidelity": fidelity,
                    "norm_drift": (out.norm() - 1.0).abs(),
                    "circuit": circuit_json,
                });
                serde_json::to_string(&report)? + "\n"
            } else {
                circuit.to_json()? + "\n"
            }
        }
        CommandKind::Verify => {
            let checks = match &config.family {
                Family::Qubit { k } => verify_qubit(n, *k, config.tol)?,
                Family::Spin { k, two_s } => verify_spin(n, *k, *two_s, config.tol)?,
                Family::Qudit { kvec } => verify_qudit(n, kvec, config.tol)?,
            };
            let passed = checks.iter().all(|c| c.passed);
            let report: String = checks.iter().map(|c| format!("{c}\n")).collect();
            return Ok(Outcome {
                artifact: render_checks(&checks, config.format)?,
                passed,
                report: Some(report),
            });
        }
    };
    Ok(Outcome {
        artifact,
        passed: true,
        report: None,
    })
}

fn render_checks(checks: &[Check], format: Format) -> Result<String> {
    Ok(match format {
        Format::Csv => {
            let mut out = String::from("check,passed,detail\n");
            for c in checks {
                out.push_str(&format!("{},{},{}\n", c.name, c.passed, c.detail));
            }
            out
        }
        Format::Json => {
            let rows: Vec<_> = checks
                .iter()
                .map(|c| json!({"check": c.name, "passed": c.passed, "detail": c.detail}))
                .collect();
            serde_json::to_string(&json!({"passed": checks.iter().all(|c| c.passed), "checks": rows}))? + "\n"
        }
    })
}

/// Runs the CLI, writing the artifact to the configured output. Returns the
/// process exit code.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = RunConfig::from_cli(cli).and_then(|config| {
        let outcome = execute(&config)?;
        if let Some(report) = &outcome.report {
            stderr.write_all(report.as_bytes())?;
        }
        match &config.output {
            Some(path) => fs::write(path, &outcome.artifact)?,
            None => stdout.write_all(outcome.artifact.as_bytes())?,
        }
        Ok(outcome.passed)
    });
    match result {
        Ok(true) => 0,
        Ok(false) => {
            let _ = writeln!(stderr, "verification failed");
            1
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                DickeError::Io(_) => 1,
                _ => 2,
            }
        }
    }
}
