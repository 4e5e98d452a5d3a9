use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use quiver_edmonds::oracle::span_test;
use quiver_edmonds::{
    build_block_matrices, decide_capacity, orbit_membership, saturation_probe, BlockMatrixFamily, CapacityParams, ErpStatus,
    OracleMode, QuiverDatum, RandomizedParams, ScalingStatus, SymbolicLimits,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::document::{FamilyDocument, InstanceDocument};
use crate::{CapacityArgs, Cli, CliError, Command, MethodChoice, OracleArgs};

/// Wall-clock figures, kept apart so the rest of a report is reproducible.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub command: String,
    pub input: String,
    /// Effective options of the command.
    pub flags: Value,
    pub input_sha256: String,
    pub seed: u64,
    pub version: String,
    pub result: Value,
    pub timing: Timing,
}

#[derive(Debug)]
pub struct Outcome {
    pub report: ReportDocument,
    pub exit_code: i32,
    /// One-line summary for stderr.
    pub note: Option<String>,
}

impl Outcome {
    pub fn render(&self) -> String {
        serde_json::to_string_pretty(&self.report).expect("reports serialize")
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn flags(cli: &Cli) -> Value {
    match &cli.command {
        Command::BuildDatum { emit, .. } => json!({ "inexact": cli.inexact, "emit": emit }),
        Command::Edmonds { family, oracle, .. } => json!({ "inexact": cli.inexact, "family": family, "oracle": oracle }),
        Command::Capacity { family, capacity, .. } => json!({ "inexact": cli.inexact, "family": family, "capacity": capacity }),
        Command::Membership { oracle, capacity, .. } => {
            json!({ "inexact": cli.inexact, "oracle": oracle, "capacity": capacity })
        }
        Command::Saturate {
            n_max, oracle, capacity, ..
        } => json!({ "inexact": cli.inexact, "n_max": n_max, "oracle": oracle, "capacity": capacity }),
    }
}

fn oracle_mode(args: &OracleArgs, seed: u64, inexact: bool) -> Result<OracleMode, CliError> {
    let params = RandomizedParams {
        trials: args.trials,
        sample_bound: args.sample_bound,
        seed,
    };
    let limits = SymbolicLimits {
        max_size: args.max_size,
        max_members: args.max_members,
    };
    Ok(match (args.method, inexact) {
        (MethodChoice::Symbolic, true) => {
            return Err(CliError::Input("--method symbolic needs exact input; drop --inexact".into()));
        }
        (MethodChoice::Randomized, _) | (MethodChoice::Auto, true) => OracleMode::Randomized(params),
        (MethodChoice::Symbolic, false) => OracleMode::Symbolic(limits),
        (MethodChoice::Auto, false) => OracleMode::Auto(limits, params),
    })
}

fn capacity_params(args: &CapacityArgs) -> Result<CapacityParams, CliError> {
    if let Some(t) = args.threshold {
        if !t.is_finite() || t <= 0.0 {
            return Err(CliError::Input(format!("--threshold must be positive, got {t}")));
        }
    }
    Ok(CapacityParams {
        max_iters: args.max_iters,
        threshold: args.threshold,
        ..CapacityParams::default()
    })
}

fn load_datum(text: &str, inexact: bool) -> Result<QuiverDatum, CliError> {
    let d = InstanceDocument::from_json(text)?.to_datum(inexact)?;
    if !d.quiver().is_connected() {
        eprintln!("warning: quiver is not connected");
    }
    Ok(d)
}

fn load_family(text: &str, is_family: bool, inexact: bool) -> Result<BlockMatrixFamily, CliError> {
    if is_family {
        FamilyDocument::from_json(text)?.to_family()
    } else {
        Ok(build_block_matrices(&load_datum(text, inexact)?)?)
    }
}

fn write_json<T: Serialize>(path: &Path, x: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(x).expect("documents serialize");
    fs::write(path, text + "\n").map_err(|e| CliError::Output(format!("{}: {e}", path.display())))
}

fn execute(cli: &Cli, text: &str, emit: Option<&Path>) -> Result<(Value, i32, Option<String>), CliError> {
    match &cli.command {
        Command::BuildDatum { .. } => {
            let d = load_datum(text, cli.inexact)?;
            let family = build_block_matrices(&d)?;
            let doc = FamilyDocument::from_family(&family, Some(&d));
            if let Some(path) = emit {
                write_json(path, &doc)?;
            }
            let note = format!("N = {}, {} matrices", family.size(), family.len());
            Ok((to_value(&doc), 0, Some(note)))
        }
        Command::Edmonds { family, oracle, .. } => {
            let f = load_family(text, *family, cli.inexact)?;
            let decision = span_test(&f, oracle_mode(oracle, cli.seed, cli.inexact)?)?;
            let note = match &decision.certificate {
                Some(c) => format!("YES, certificate {:?}", c.coefficients),
                None => "NO".to_string(),
            };
            Ok((to_value(&decision), 0, Some(note)))
        }
        Command::Capacity { family, capacity, .. } => {
            let f = load_family(text, *family, cli.inexact)?;
            let report = decide_capacity(&f, capacity_params(capacity)?);
            let code = if report.decision == ScalingStatus::Inconclusive { 3 } else { 0 };
            let note = format!("{:?} after {} iterations", report.decision, report.iterations);
            Ok((to_value(&report), code, Some(note)))
        }
        Command::Membership { oracle, capacity, .. } => {
            let d = load_datum(text, cli.inexact)?;
            let report = orbit_membership(&d, oracle_mode(oracle, cli.seed, cli.inexact)?, capacity_params(capacity)?)?;
            let code = if report.semistable.decision == ScalingStatus::Inconclusive { 3 } else { 0 };
            let note = format!(
                "sigma in S: {:?}, capacity: {:?}, weight semigroup: {:?}",
                report.sigma_in_s.answer, report.semistable.decision, report.in_weight_semigroup.answer
            );
            Ok((to_value(&report), code, Some(note)))
        }
        Command::Saturate {
            n_max, oracle, capacity, ..
        } => {
            if *n_max == 0 {
                return Err(CliError::Input("--n-max must be at least 1".into()));
            }
            let d = load_datum(text, cli.inexact)?;
            let report = saturation_probe(&d, *n_max, oracle_mode(oracle, cli.seed, cli.inexact)?, capacity_params(capacity)?)?;
            let code = if report.erp_status == ErpStatus::Inconclusive { 3 } else { 0 };
            let note = format!("{:?}, witness {:?}", report.erp_status, report.witness);
            Ok((to_value(&report), code, Some(note)))
        }
    }
}

/// Runs the command on one instance file.
pub fn run_file(cli: &Cli, path: &Path, emit: Option<PathBuf>) -> Result<Outcome, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes).map_err(|e| CliError::Input(format!("{}: not UTF-8: {e}", path.display())))?;
    let start = Instant::now();
    let (result, exit_code, note) = execute(cli, text, emit.as_deref())?;
    let report = ReportDocument {
        command: cli.command.name().to_string(),
        input: path.display().to_string(),
        flags: flags(cli),
        input_sha256: hex::encode(Sha256::digest(&bytes)),
        seed: cli.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        result,
        timing: Timing {
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        },
    };
    Ok(Outcome { report, exit_code, note })
}

#[derive(Debug, Serialize)]
struct BatchEntry {
    file: String,
    exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<ReportDocument>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

/// Runs the command on every `*.json` file of the input directory, in name
/// order, on `--jobs` workers. Returns the rendered array and the largest exit code.
pub fn run_batch(cli: &Cli) -> Result<(String, i32), CliError> {
    let dir = cli.command.input();
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let emit_dir = match &cli.command {
        Command::BuildDatum { emit: Some(dir), .. } => {
            fs::create_dir_all(dir).map_err(|e| CliError::Output(format!("{}: {e}", dir.display())))?;
            Some(dir.clone())
        }
        _ => None,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.max(1))
        .build()
        .map_err(|e| CliError::Input(format!("cannot start {} workers: {e}", cli.jobs)))?;
    let entries: Vec<BatchEntry> = pool.install(|| {
        files
            .par_iter()
            .map(|file| {
                let emit = emit_dir.as_ref().map(|d| {
                    let stem = file.file_stem().unwrap_or_default().to_string_lossy();
                    d.join(format!("{stem}.family.json"))
                });
                let name = file.display().to_string();
                match run_file(cli, file, emit) {
                    Ok(o) => BatchEntry {
                        file: name,
                        exit_code: o.exit_code,
                        report: Some(o.report),
                        error: None,
                    },
                    Err(e) => BatchEntry {
                        file: name,
                        exit_code: e.exit_code(),
                        report: None,
                        error: Some(e.to_string()),
                    },
                }
            })
            .collect()
    });
    for e in &entries {
        if let Some(msg) = &e.error {
            eprintln!("{}: {msg}", e.file);
        }
    }
    let code = entries.iter().map(|e| e.exit_code).max().unwrap_or(0);
    Ok((serde_json::to_string_pretty(&entries).expect("reports serialize"), code))
}
