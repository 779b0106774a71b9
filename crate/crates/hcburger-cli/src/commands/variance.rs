//! `Var(S_n)` and `Var(D_n)` across a grid of `n`.

use anyhow::Result;
use hcburger::analytics::constants::{VARIANCE_HIGH, VARIANCE_LOW};
use hcburger::rng::{lane, Stream};
use hcburger::stats::{bootstrap_variance_ci, Moments};
use hcburger::trajectory::endpoint;
use hcburger::WeightTable;
use serde::Serialize;

use crate::output::{write_rows, Outcome};
use crate::par::per_replica;
use crate::settings::ExperimentConfig;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VariancePoint {
    pub p: f64,
    pub n: u64,
    pub replicas: u64,
    /// Replicas whose window resolved every `F` within the cap.
    pub defined: u64,
    pub broken: u64,
    /// Mean of `S_n²/n`, which estimates `Var(S_n)/n` since `E[S_n] = 0`.
    pub var_s_over_n: f64,
    pub var_s_se: f64,
    pub mean_d: f64,
    pub mean_d_se: f64,
    pub var_d: f64,
    /// `log²n/n · Var(D_n)` with a percentile bootstrap interval.
    pub scaled: f64,
    pub scaled_lo: f64,
    pub scaled_hi: f64,
    pub mean_past_over_n: f64,
}

/// Replica `r` of every grid point reads the streams of replica `r`, so the
/// points are coupled through common random numbers.
pub fn variance_point(p: f64, n: u64, replicas: u64, seed: u64, cap_factor: u64, bootstrap: usize) -> Result<VariancePoint> {
    let wt = WeightTable::new(p).map_err(|e| anyhow::anyhow!("p = {}", e.0))?;
    let ends = per_replica(replicas, |r| endpoint(wt, n as usize, seed, r, cap_factor.saturating_mul(n)));
    let nf = n as f64;
    let s2: Moments = ends.iter().map(|e| (e.s * e.s) as f64 / nf).collect();
    let ds: Vec<f64> = ends.iter().filter_map(|e| e.d()).map(|d| d as f64).collect();
    let dm: Moments = ds.iter().copied().collect();
    let past: Moments = ends.iter().map(|e| e.past_letters as f64 / nf).collect();
    let scale = nf.ln().powi(2) / nf;
    let mut aux = Stream::new(seed, u64::MAX - lane::AUX);
    let (lo, hi) = if ds.len() >= 2 && bootstrap > 0 {
        bootstrap_variance_ci(&ds, bootstrap, 0.95, &mut |k| aux.uniform_1_to(k as u64) as usize - 1)
    } else {
        (f64::NAN, f64::NAN)
    };
    Ok(VariancePoint {
        p,
        n,
        replicas,
        defined: ds.len() as u64,
        broken: replicas - ds.len() as u64,
        var_s_over_n: s2.mean,
        var_s_se: s2.se(),
        mean_d: dm.mean,
        mean_d_se: dm.se(),
        var_d: dm.variance(),
        scaled: scale * dm.variance(),
        scaled_lo: scale * lo,
        scaled_hi: scale * hi,
        mean_past_over_n: past.mean,
    })
}

/// Whether the scaled variance grows along the grid, and where the last point
/// sits relative to the asymptotic bracket.
pub fn trend_report(points: &[VariancePoint]) -> serde_json::Value {
    let increasing = points.windows(2).all(|w| w[1].scaled > w[0].scaled);
    let last = points.last().map(|p| p.scaled).unwrap_or(f64::NAN);
    serde_json::json!({
        "increasing": increasing,
        "last_scaled": last,
        "bracket": [VARIANCE_LOW, VARIANCE_HIGH],
        "last_in_bracket": (VARIANCE_LOW..=VARIANCE_HIGH).contains(&last),
        "last_below_bracket": last < VARIANCE_LOW,
    })
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (replicas, seed) = (cfg.u64("replicas"), cfg.u64("seed"));
    let (cap, boot, tol) = (cfg.u64("cap_factor"), cfg.usize("bootstrap"), cfg.f64("tol"));
    let mut o = Outcome::default();
    let mut all = Vec::new();
    for p in cfg.f64s("p") {
        let pts = cfg
            .u64s("ns")
            .into_iter()
            .map(|n| variance_point(p, n, replicas, seed, cap, boot))
            .collect::<Result<Vec<_>>>()?;
        let controls = pts.iter().all(|v| {
            ((v.var_s_over_n - 1.0) / v.var_s_se).abs() < tol && (v.mean_d / v.mean_d_se).abs() < tol
        });
        o.put(&format!("p{p}"), serde_json::json!({ "trend": trend_report(&pts), "controls_pass": controls }));
        all.extend(pts);
    }
    let path = cfg.path("out").join("variance_scan.csv");
    write_rows(&path, &all)?;
    o.outputs.push(path);
    Ok(o)
}
