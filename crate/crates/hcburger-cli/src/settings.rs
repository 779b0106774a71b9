//! Experiment configuration.
//!
//! Values are layered: command defaults, then a flat `key=value` file, then
//! command-line flags. Each command accepts a fixed set of keys; anything else
//! is rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Command {
    Fig1,
    HittingLaw,
    VarianceScan,
    Observables,
    Martingale,
    FutureStats,
    ExactEval,
    OracleVerify,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Fig1,
        Command::HittingLaw,
        Command::VarianceScan,
        Command::Observables,
        Command::Martingale,
        Command::FutureStats,
        Command::ExactEval,
        Command::OracleVerify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Fig1 => "fig1",
            Command::HittingLaw => "hitting-law",
            Command::VarianceScan => "variance-scan",
            Command::Observables => "observables",
            Command::Martingale => "martingale",
            Command::FutureStats => "future-stats",
            Command::ExactEval => "exact-eval",
            Command::OracleVerify => "oracle-verify",
        }
    }

    pub fn from_name(s: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Accepted keys with their default values.
    pub fn defaults(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Command::Fig1 => &[
                ("p", "0.3,0.5,0.7"),
                ("n", "1000000"),
                ("seed", "1"),
                ("out", "out"),
                ("tol", "0.25"),
                ("cap_factor", "1024"),
                ("stride", "1"),
            ],
            Command::HittingLaw => &[
                ("replicas", "1000000"),
                ("seed", "1"),
                ("out", "out"),
                ("tol", "4"),
                ("ell_max", "20"),
                ("letter_cap", "10000000"),
            ],
            Command::VarianceScan => &[
                ("p", "0.5"),
                ("ns", "10000,100000,1000000"),
                ("replicas", "1000"),
                ("seed", "1"),
                ("out", "out"),
                ("tol", "3"),
                ("cap_factor", "64"),
                ("bootstrap", "500"),
            ],
            Command::Observables => &[
                ("replicas", "1000000"),
                ("seed", "1"),
                ("out", "out"),
                ("tol", "0.5"),
                ("letter_cap", "1000000"),
            ],
            Command::Martingale => &[
                ("ts", "0,0.01,0.1,1"),
                ("replicas", "10000000"),
                ("seed", "1"),
                ("out", "out"),
                ("tol", "3"),
                ("letter_cap", "4000"),
                ("n", "1000000"),
                ("cloud_replicas", "20"),
                ("cloud_cap", "100000000"),
            ],
            Command::FutureStats => &[
                ("lambdas", "0.1,0.5,1"),
                ("replicas", "1000000"),
                ("seed", "1"),
                ("out", "out"),
                ("tol", "3"),
                ("block_cap", "100000"),
                ("letter_cap", "10000000"),
                ("mean_r_replicas", "10000000"),
                ("ns", "10000,100000,1000000"),
                ("tight_replicas", "200"),
                ("quad_abs_tol", "1e-8"),
            ],
            Command::ExactEval => &[("out", "out"), ("tol", "1e-10"), ("quad_abs_tol", "1e-10")],
            Command::OracleVerify => &[("out", "out"), ("k", "4"), ("max_len", "14")],
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A validated configuration: every key is known to the command and parses.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    values: BTreeMap<String, String>,
}

enum Kind {
    Positive,
    Count,
    Seed,
    Counts,
    NonNegatives,
    Probs,
    Path,
}

fn kind(key: &str) -> Kind {
    match key {
        "tol" | "quad_abs_tol" => Kind::Positive,
        "seed" => Kind::Seed,
        "ns" => Kind::Counts,
        "ts" | "lambdas" => Kind::NonNegatives,
        "p" => Kind::Probs,
        "out" => Kind::Path,
        _ => Kind::Count,
    }
}

fn parse_list<T: std::str::FromStr>(v: &str) -> Option<Vec<T>> {
    let out: Option<Vec<T>> = v.split(',').map(|x| x.trim().parse().ok()).collect();
    out.filter(|o| !o.is_empty())
}

fn check(key: &str, v: &str) -> Result<()> {
    let bad = || anyhow!("invalid value {v:?} for {key}");
    let prob = |x: f64| (0.0..=1.0).contains(&x);
    match kind(key) {
        Kind::Positive => v.parse::<f64>().ok().filter(|&x| x > 0.0).map(|_| ()).ok_or_else(bad),
        Kind::Count => v.parse::<u64>().ok().filter(|&x| x > 0).map(|_| ()).ok_or_else(bad),
        Kind::Seed => v.parse::<u64>().map(|_| ()).map_err(|_| bad()),
        Kind::Counts => parse_list::<u64>(v).filter(|l| l.iter().all(|&x| x > 0)).map(|_| ()).ok_or_else(bad),
        Kind::NonNegatives => {
            parse_list::<f64>(v).filter(|l| l.iter().all(|&x| x >= 0.0)).map(|_| ()).ok_or_else(bad)
        }
        Kind::Probs => parse_list::<f64>(v).filter(|l| l.iter().all(|&x| prob(x))).map(|_| ()).ok_or_else(bad),
        Kind::Path => (!v.is_empty()).then_some(()).ok_or_else(bad),
    }
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        let values = command.defaults().iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        ExperimentConfig { command, values }
    }

    /// Set one key, rejecting keys the command does not know.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        if !self.values.contains_key(&key) {
            bail!("unknown key {key:?} for {}", self.command);
        }
        check(&key, value)?;
        self.values.insert(key, value.to_string());
        Ok(())
    }

    /// Apply a flat `key=value` file; `#` starts a comment.
    pub fn merge_file_text(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| anyhow!("line {}: expected key=value", i + 1))?;
            self.set(k, v).with_context(|| format!("line {}", i + 1))?;
        }
        Ok(())
    }

    pub fn values(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    fn raw(&self, key: &str) -> &str {
        self.values.get(key).unwrap_or_else(|| panic!("{} has no key {key}", self.command))
    }

    pub fn f64(&self, key: &str) -> f64 {
        self.raw(key).parse().unwrap()
    }

    pub fn u64(&self, key: &str) -> u64 {
        self.raw(key).parse().unwrap()
    }

    pub fn usize(&self, key: &str) -> usize {
        self.raw(key).parse().unwrap()
    }

    pub fn u64s(&self, key: &str) -> Vec<u64> {
        parse_list(self.raw(key)).unwrap()
    }

    pub fn f64s(&self, key: &str) -> Vec<f64> {
        parse_list(self.raw(key)).unwrap()
    }

    pub fn path(&self, key: &str) -> PathBuf {
        PathBuf::from(self.raw(key))
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Result<Self> {
        self.set(key, &value.to_string())?;
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layering_and_rejection() {
        let mut c = ExperimentConfig::new(Command::Fig1);
        c.merge_file_text("# run\nn = 100\nseed=7\n").unwrap();
        c.set("seed", "9").unwrap();
        assert_eq!((c.u64("n"), c.u64("seed")), (100, 9));
        assert!(c.set("replicas", "3").is_err());
        assert!(c.set("p", "1.5").is_err());
        assert!(c.set("n", "0").is_err());
        assert!(c.merge_file_text("n 100").is_err());
        c.set("cap-factor", "8").unwrap();
        assert_eq!(c.u64("cap_factor"), 8);
    }

    #[test]
    fn every_default_parses() {
        for cmd in Command::ALL {
            let c = ExperimentConfig::new(cmd);
            for (k, v) in c.values() {
                check(k, v).unwrap();
            }
            assert_eq!(Command::from_name(cmd.name()), Some(cmd));
        }
    }
}
