//! `posmap`: generate, certify, decompose and explore positive maps on M₂(ℂ).
//!
//! Exit codes: 0 when every certificate passes, 1 when one fails, 2 on a
//! usage or input error.

mod commands;
mod parse;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use report::{render_text, RunReport};

#[derive(Debug, Parser)]
#[command(name = "posmap", version, about = "Positive maps on 2x2 matrices: generate, certify, decompose, explore")]
struct Cli {
    /// Numerical tolerance; each command falls back to its library default.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for random instances and sampling.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Emit the report as compact JSON.
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    /// Emit the report as indented JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Write the output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a canonical extremal unital positive map.
    Generate(GenerateArgs),
    /// Certify positivity classes of a Choi matrix.
    Certify(CertifyArgs),
    /// Split an extremal map into CP and co-CP parts.
    Decompose(DecomposeArgs),
    /// Search for alternative CP + co-CP splits.
    Explore(ExploreArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum DegenerateKind {
    UZero,
    YZero,
    ZZero,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Member of the example family, 0 < s < 1.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["u", "degenerate", "params"])]
    pub example_s: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires_all = ["y", "z"], conflicts_with_all = ["degenerate", "params"])]
    pub u: Option<f64>,
    /// Complex entry such as `0.3+0.4i`.
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// Branch of t: `+` (principal root) or `-`.
    #[arg(long, default_value = "+", value_parser = ["+", "-"])]
    pub t_branch: String,
    /// Degenerate boundary case; `y_zero` takes `--z`, `z_zero` takes `--y`.
    #[arg(long, value_enum, conflicts_with = "params")]
    pub degenerate: Option<DegenerateKind>,
    /// JSON file `{"u": .., "y": [re, im], "z": [re, im], "t_branch": "+"}`.
    #[arg(long, value_name = "FILE")]
    pub params: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    /// Matrix JSON file (`-` for stdin).
    pub matrix: PathBuf,
    /// Positivity via block-positivity of the Choi matrix.
    #[arg(long)]
    pub positive: bool,
    /// Complete positivity (Choi matrix PSD).
    #[arg(long)]
    pub cp: bool,
    /// Complete copositivity (partial transpose PSD).
    #[arg(long)]
    pub ccp: bool,
    /// Membership in the face F(xi, eta).
    #[arg(long)]
    pub face: bool,
    /// Face vector xi as two comma-separated complex entries.
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    pub xi: String,
    #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
    pub eta: String,
    /// Minor conditions (A1)-(A5) for canonical-form input.
    #[arg(long)]
    pub canonical_cp: bool,
    /// Minor conditions (B1)-(B5) for canonical-form input.
    #[arg(long)]
    pub canonical_ccp: bool,
    /// Necessary inequalities for canonical-form positive maps.
    #[arg(long)]
    pub face_form: bool,
    /// Extremality relations of the canonical form.
    #[arg(long)]
    pub extremal: bool,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// Matrix JSON file (`-` for stdin); without it a random instance is drawn from `--seed`.
    pub matrix: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExploreArgs {
    /// Matrix JSON file (`-` for stdin).
    pub matrix: PathBuf,
    #[arg(long, default_value_t = 0.2, allow_hyphen_values = true)]
    pub radius: f64,
    #[arg(long, default_value_t = 1e-2, allow_hyphen_values = true)]
    pub resolution: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
    /// Size of the perturbation used for degenerate inputs.
    #[arg(long, default_value_t = 0.01, allow_hyphen_values = true)]
    pub eps: f64,
    /// Maximum number of alternates listed.
    #[arg(long, default_value_t = 32)]
    pub max_listed: usize,
}

/// What a command produces before it is wrapped into a [`RunReport`].
pub struct Outcome {
    pub result: Value,
    pub pass: bool,
    pub tol: f64,
    pub input_sha256: Option<String>,
    pub seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (name, outcome) = match &cli.command {
        Command::Generate(a) => ("generate", commands::generate(a, cli.tol)),
        Command::Certify(a) => ("certify", commands::certify(a, cli.tol)),
        Command::Decompose(a) => ("decompose", commands::decompose(a, cli.tol, cli.seed)),
        Command::Explore(a) => ("explore", commands::explore(a, cli.tol, cli.seed)),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let report = RunReport {
        tool: RunReport::tool(),
        command: name.to_string(),
        args: std::env::args().skip(1).collect(),
        input_sha256: outcome.input_sha256,
        seed: outcome.seed,
        tol: outcome.tol,
        verdict: if outcome.pass { "PASS" } else { "FAIL" },
        result: outcome.result,
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    let value = match serde_json::to_value(&report) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = if cli.pretty {
        serde_json::to_string_pretty(&value).map(|s| s + "\n")
    } else if cli.json {
        serde_json::to_string(&value).map(|s| s + "\n")
    } else {
        Ok(render_text(&value))
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(if outcome.pass { 0 } else { 1 })
}
