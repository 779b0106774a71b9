//! Monte Carlo hitting law of the reduced walk against the exact pmf.

use anyhow::Result;
use hcburger::analytics::hitting_pmf;
use hcburger::exploration::StepSampler;
use hcburger::rng::{lane, Stream};
use serde::Serialize;

use crate::output::{write_rows, Outcome};
use crate::par::{chunked, CHUNK};
use crate::settings::ExperimentConfig;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HittingRow {
    /// `τ^h = ℓ + 1`.
    pub ell: u64,
    pub mc_prob: f64,
    pub mc_se: f64,
    pub exact_prob: f64,
    pub z_score: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HittingLaw {
    pub rows: Vec<HittingRow>,
    pub replicas: u64,
    /// Runs cut by the letter cap inside one step.
    pub truncated: u64,
    /// Runs still above -1 after `ell_max + 1` steps.
    pub beyond: u64,
}

impl HittingLaw {
    pub fn max_abs_z(&self) -> f64 {
        self.rows.iter().map(|r| r.z_score.abs()).fold(0.0, f64::max)
    }
}

/// `replicas` runs of `τ^h`, in chunks of [`CHUNK`] sharing one stream each.
pub fn hitting_law(replicas: u64, ell_max: u64, seed: u64, letter_cap: u64) -> Result<HittingLaw> {
    let m = ell_max as usize + 1;
    let parts = chunked(replicas, CHUNK, |c, range| {
        let mut s = StepSampler::new(Stream::replica(seed, c, lane::PAST), letter_cap);
        let (mut counts, mut trunc, mut beyond) = (vec![0u64; m], 0u64, 0u64);
        for _ in range {
            match s.tau_ham(m as u64) {
                Ok(Some(t)) => counts[t as usize - 1] += 1,
                Ok(None) => beyond += 1,
                Err(_) => trunc += 1,
            }
        }
        (counts, trunc, beyond)
    });
    let mut counts = vec![0u64; m];
    let (mut truncated, mut beyond) = (0, 0);
    for (c, t, b) in parts {
        counts.iter_mut().zip(&c).for_each(|(a, x)| *a += x);
        truncated += t;
        beyond += b;
    }
    let nr = replicas as f64;
    let rows = (0..m as u64)
        .map(|ell| {
            let exact = hitting_pmf(ell)?.value;
            let q = counts[ell as usize] as f64 / nr;
            let se = (q * (1.0 - q) / nr).sqrt();
            // z against the exact variance, so an empty cell still scores.
            let z = (q - exact) / (exact * (1.0 - exact) / nr).sqrt();
            Ok(HittingRow { ell, mc_prob: q, mc_se: se, exact_prob: exact, z_score: z })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HittingLaw { rows, replicas, truncated, beyond })
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    let replicas = cfg.u64("replicas");
    anyhow::ensure!(replicas >= 10_000, "hitting-law needs at least 10^4 replicas");
    let h = hitting_law(replicas, cfg.u64("ell_max"), cfg.u64("seed"), cfg.u64("letter_cap"))?;
    let mut o = Outcome::default();
    let path = cfg.path("out").join("hitting_law.csv");
    write_rows(&path, &h.rows)?;
    o.outputs.push(path);
    let z = h.max_abs_z();
    o.put("max_abs_z", z);
    o.put("truncated", h.truncated);
    o.put("beyond_ell_max", h.beyond);
    o.put("pass", z < cfg.f64("tol"));
    Ok(o)
}
