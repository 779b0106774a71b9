use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use hcburger_cli::{Command, ExperimentConfig};

#[derive(Parser)]
#[command(name = "hcburger", version, about = "Experiments on the critical hamburger-cheeseburger model")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Sample paths of S and D rescaled by sqrt(N).
    Fig1(Flags),
    /// Monte Carlo hitting law against the exact pmf.
    HittingLaw(Flags),
    /// Var(S_n) and log^2 n/n Var(D_n) across n.
    VarianceScan(Flags),
    /// Tails of loop length, cluster perimeter and envelope boundary.
    Observables(Flags),
    /// The exponential martingale and the rescaled (eta, xi) cloud.
    Martingale(Flags),
    /// Future blocks: Laplace transform, two-sampler check, tightness.
    FutureStats(Flags),
    /// Closed-form values with error estimates.
    ExactEval(Flags),
    /// Exhaustive checks against the enumeration oracle.
    OracleVerify(Flags),
}

#[derive(Args)]
struct Flags {
    /// Flat key=value file applied before the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Bias p; a comma list where the command scans several.
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    replicas: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    /// Any other key, as KEY=VALUE. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let (cmd, f) = match cli.command {
        Sub::Fig1(f) => (Command::Fig1, f),
        Sub::HittingLaw(f) => (Command::HittingLaw, f),
        Sub::VarianceScan(f) => (Command::VarianceScan, f),
        Sub::Observables(f) => (Command::Observables, f),
        Sub::Martingale(f) => (Command::Martingale, f),
        Sub::FutureStats(f) => (Command::FutureStats, f),
        Sub::ExactEval(f) => (Command::ExactEval, f),
        Sub::OracleVerify(f) => (Command::OracleVerify, f),
    };
    let mut cfg = ExperimentConfig::new(cmd);
    if let Some(path) = &f.config {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        cfg.merge_file_text(&text).with_context(|| format!("in {}", path.display()))?;
    }
    let named = [("p", &f.p), ("n", &f.n), ("replicas", &f.replicas), ("seed", &f.seed), ("out", &f.out), ("tol", &f.tol)];
    for (k, v) in named {
        if let Some(v) = v {
            cfg.set(k, v)?;
        }
    }
    for kv in &f.set {
        let (k, v) = kv.split_once('=').with_context(|| format!("--set {kv}: expected KEY=VALUE"))?;
        cfg.set(k, v)?;
    }
    let m = hcburger_cli::run(&cfg)?;
    println!("{}", serde_json::to_string_pretty(&m.summary)?);
    Ok(())
}
