//! The exponential martingale of the pooled past steps, and the rescaled
//! sums of `(ξ, η)`.

use std::f64::consts::PI;

use anyhow::Result;
use hcburger::analytics::f_helper;
use hcburger::exploration::StepSampler;
use hcburger::rng::{lane, Stream};
use hcburger::stats::Moments;
use serde::Serialize;

use crate::output::{write_rows, Outcome};
use crate::par::{chunked, per_replica, CHUNK};
use crate::settings::ExperimentConfig;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MartingaleRow {
    pub t: f64,
    pub samples: u64,
    pub mean: f64,
    pub se: f64,
    pub z: f64,
    /// Steps cut by the letter cap. They enter at `e^{-t·cap}`, the top of
    /// their possible range `[0, e^{-t·cap}]`.
    pub truncated: u64,
    /// Largest shift of `mean` the truncated steps could account for.
    pub censor_width: f64,
}

/// `E[exp(-tη - f(t)ξ)]` for each `t`, from the same `samples` steps.
pub fn martingale_identity(ts: &[f64], samples: u64, seed: u64, letter_cap: u64) -> Vec<MartingaleRow> {
    let fs: Vec<f64> = ts.iter().map(|&t| f_helper(t)).collect();
    let parts = chunked(samples, CHUNK, |c, range| {
        let mut s = StepSampler::new(Stream::replica(seed, c, lane::PAST), letter_cap);
        let mut m = vec![Moments::new(); ts.len()];
        let mut trunc = 0u64;
        for _ in range {
            match s.pooled() {
                Ok(st) => {
                    for (i, &t) in ts.iter().enumerate() {
                        m[i].push((-t * st.eta as f64 - fs[i] * st.xi as f64).exp());
                    }
                }
                Err(_) => {
                    trunc += 1;
                    for (i, &t) in ts.iter().enumerate() {
                        m[i].push((-t * letter_cap as f64).exp());
                    }
                }
            }
        }
        (m, trunc)
    });
    let mut m = vec![Moments::new(); ts.len()];
    let mut truncated = 0;
    for (pm, t) in &parts {
        m.iter_mut().zip(pm).for_each(|(a, b)| a.merge(b));
        truncated += t;
    }
    ts.iter()
        .zip(&m)
        .map(|(&t, m)| {
            let se = m.se();
            let z = if se > 0.0 { (m.mean - 1.0) / se } else if m.mean == 1.0 { 0.0 } else { f64::INFINITY };
            MartingaleRow {
                t,
                samples,
                mean: m.mean,
                se,
                z,
                truncated,
                censor_width: truncated as f64 / samples as f64 * (-t * letter_cap as f64).exp(),
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CloudPoint {
    pub replica: u64,
    /// `Σ η_i / (n²/log⁴n)`.
    pub eta_scaled: f64,
    /// `Σ ξ_i / (n/log²n)`.
    pub xi_scaled: f64,
    pub truncated: bool,
}

/// One point per replica from `n` pooled steps. Reads the `PAST_PRIME` lane,
/// so it does not share letters with [`martingale_identity`].
pub fn martingale_cloud(n: u64, replicas: u64, seed: u64, step_cap: u64) -> Vec<CloudPoint> {
    let l2 = (n as f64).ln().powi(2);
    per_replica(replicas, |r| {
        let mut s = StepSampler::new(Stream::replica(seed, r, lane::PAST_PRIME), step_cap);
        let (mut xi, mut eta, mut truncated) = (0i64, 0u64, false);
        for _ in 0..n {
            match s.pooled() {
                Ok(st) => {
                    xi += st.xi;
                    eta += st.eta;
                }
                Err(_) => {
                    truncated = true;
                    break;
                }
            }
        }
        let nf = n as f64;
        CloudPoint { replica: r, eta_scaled: eta as f64 / (nf * nf / (l2 * l2)), xi_scaled: xi as f64 / (nf / l2), truncated }
    })
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    let seed = cfg.u64("seed");
    let rows = martingale_identity(&cfg.f64s("ts"), cfg.u64("replicas"), seed, cfg.u64("letter_cap"));
    let cloud = martingale_cloud(cfg.u64("n"), cfg.u64("cloud_replicas"), seed, cfg.u64("cloud_cap"));
    let mut o = Outcome::default();
    let out = cfg.path("out");
    let (a, b) = (out.join("martingale.csv"), out.join("martingale_cloud.csv"));
    write_rows(&a, &rows)?;
    write_rows(&b, &cloud)?;
    o.outputs.extend([a, b]);
    let tol = cfg.f64("tol");
    o.put("max_abs_z", rows.iter().map(|r| r.z.abs()).fold(0.0, f64::max));
    o.put("pass", rows.iter().all(|r| r.z.abs() < tol));
    let mut xs: Vec<f64> = cloud.iter().filter(|c| !c.truncated).map(|c| c.xi_scaled).collect();
    if !xs.is_empty() {
        let med = hcburger::stats::median(&mut xs);
        o.put("cloud_xi_median", med);
        o.put("cloud_xi_target", -PI * PI / 2.0);
    }
    o.put("cloud_truncated", cloud.iter().filter(|c| c.truncated).count());
    Ok(o)
}
