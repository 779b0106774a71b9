//! Experiments on the critical hamburger-cheeseburger model.
//!
//! Each command takes an [`ExperimentConfig`], writes CSV (and for `fig1`
//! SVG) files under `out`, and records the run in `<out>/<command>.manifest.json`.
//! The sampling functions behind the commands are public so tests can call
//! them with their own sizes.

pub mod commands;
pub mod output;
pub mod par;
pub mod settings;

use std::time::Instant;

use anyhow::Result;

pub use output::{Outcome, RunManifest, SeedScheme};
pub use settings::{Command, ExperimentConfig};

/// Run a command and write its manifest next to its outputs.
pub fn run(cfg: &ExperimentConfig) -> Result<RunManifest> {
    let start = Instant::now();
    let outcome = match cfg.command {
        Command::Fig1 => commands::fig1::run(cfg),
        Command::HittingLaw => commands::hitting::run(cfg),
        Command::VarianceScan => commands::variance::run(cfg),
        Command::Observables => commands::observables::run(cfg),
        Command::Martingale => commands::martingale::run(cfg),
        Command::FutureStats => commands::future::run(cfg),
        Command::ExactEval => commands::exact::run(cfg),
        Command::OracleVerify => commands::oracle::run(cfg),
    }?;
    let values = cfg.values();
    let seeds = SeedScheme {
        seed: values.get("seed").and_then(|s| s.parse().ok()).unwrap_or(0),
        derivation: "ChaCha8 keyed by seed, stream replica*8+lane; lanes 0 forward, 1 past, 2 second past, 3 auxiliary; \
                     sample-level commands use one replica per chunk of 10000 samples"
            .into(),
        replicas: values.get("replicas").and_then(|s| s.parse().ok()).unwrap_or(0),
    };
    let manifest = RunManifest {
        command: cfg.command.name().into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: values.clone(),
        seeds,
        wall_clock_secs: start.elapsed().as_secs_f64(),
        outputs: outcome.outputs.iter().map(|p| p.display().to_string()).collect(),
        summary: outcome.summary,
    };
    manifest.write(&cfg.path("out").join(format!("{}.manifest.json", cfg.command.name())))?;
    Ok(manifest)
}
