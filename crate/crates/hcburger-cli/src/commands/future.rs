//! Future blocks: their Laplace transform, their law seen from the past, the
//! mean excursion step count and the number of unmatched `F`s.

use std::collections::BTreeMap;

use anyhow::Result;
use hcburger::analytics::laplace_hpf;
use hcburger::exploration::{future_exploration, next_future_block, RunStack, StepSampler};
use hcburger::quad::QuadratureSpec;
use hcburger::rng::{lane, Stream};
use hcburger::stats::{median, quantile, Moments, DEFAULT_BLOCKS};
use hcburger::word::RandomLetters;
use hcburger::WeightTable;
use serde::Serialize;

use crate::output::{write_rows, Outcome};
use crate::par::{chunked, per_replica, CHUNK};
use crate::settings::ExperimentConfig;

/// Blocks read forward from X(1).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ForwardBlocks {
    pub samples: u64,
    pub truncated: u64,
    pub len: BTreeMap<u64, u64>,
    pub hstar: BTreeMap<u64, u64>,
    /// `e^{-λH*}` per λ; a truncated block enters with `H*` reached so far.
    pub laplace: Vec<Moments>,
    /// Sum of those upper values over truncated blocks, per λ.
    pub censored: Vec<f64>,
}

fn add<K: Ord + Copy>(a: &mut BTreeMap<K, u64>, b: &BTreeMap<K, u64>) {
    for (k, v) in b {
        *a.entry(*k).or_default() += v;
    }
}

/// `samples` consecutive blocks per chunk stream, each cut at `block_cap`
/// letters.
pub fn forward_blocks(samples: u64, seed: u64, block_cap: u64, lambdas: &[f64]) -> ForwardBlocks {
    let parts = chunked(samples, CHUNK, |c, range| {
        let mut src = RandomLetters::new(WeightTable::critical(), Stream::replica(seed, c, lane::FORWARD));
        let mut stack = RunStack::default();
        let mut f = ForwardBlocks {
            laplace: vec![Moments::new(); lambdas.len()],
            censored: vec![0.0; lambdas.len()],
            ..Default::default()
        };
        for _ in range {
            f.samples += 1;
            let h = match next_future_block(&mut src, block_cap, false, &mut stack) {
                Ok(Some(b)) => {
                    *f.len.entry(b.tau_f).or_default() += 1;
                    *f.hstar.entry(b.hstar).or_default() += 1;
                    b.hstar
                }
                Ok(None) => unreachable!("random letters never run dry"),
                Err(t) => {
                    f.truncated += 1;
                    for (i, &l) in lambdas.iter().enumerate() {
                        f.censored[i] += (-l * t.hstar as f64).exp();
                    }
                    t.hstar
                }
            };
            for (i, &l) in lambdas.iter().enumerate() {
                f.laplace[i].push((-l * h as f64).exp());
            }
        }
        f
    });
    let mut f =
        ForwardBlocks { laplace: vec![Moments::new(); lambdas.len()], censored: vec![0.0; lambdas.len()], ..Default::default() };
    for p in &parts {
        f.samples += p.samples;
        f.truncated += p.truncated;
        add(&mut f.len, &p.len);
        add(&mut f.hstar, &p.hstar);
        f.laplace.iter_mut().zip(&p.laplace).for_each(|(a, b)| a.merge(b));
        f.censored.iter_mut().zip(&p.censored).for_each(|(a, b)| *a += b);
    }
    f
}

/// Per-atom sums for a ratio estimator `Σ N_i / Σ r_i` over excursions `i`,
/// where `N_i` counts the windows of excursion `i` taking the value.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AtomSums {
    pub n: f64,
    pub n2: f64,
    pub nr: f64,
}

/// Every window `Y(u-1)...Y(1)X(0)`, `u = 1..=r`, of each excursion, with the
/// excursion weighted by its step count `r`. This is the size-biased law with
/// a uniform cut, without rejection.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PastWindows {
    pub excursions: u64,
    pub truncated: u64,
    pub sum_r: f64,
    pub sum_r2: f64,
    pub len: BTreeMap<u64, AtomSums>,
    pub hstar: BTreeMap<u64, AtomSums>,
    /// `Σ_u e^{-λH*_u}` in place of a window count, per λ.
    pub laplace: Vec<AtomSums>,
}

impl AtomSums {
    fn push(&mut self, n: f64, r: f64) {
        self.n += n;
        self.n2 += n * n;
        self.nr += n * r;
    }

    fn merge(&mut self, o: &AtomSums) {
        self.n += o.n;
        self.n2 += o.n2;
        self.nr += o.nr;
    }
}

impl PastWindows {
    /// Estimate and delta-method standard error for one atom.
    pub fn estimate(&self, atoms: &BTreeMap<u64, AtomSums>, k: u64) -> (f64, f64) {
        self.ratio(atoms.get(&k).copied().unwrap_or_default())
    }

    /// `Σ N_i / Σ r_i` and its delta-method standard error.
    pub fn ratio(&self, s: AtomSums) -> (f64, f64) {
        let p = s.n / self.sum_r;
        let var = s.n2 - 2.0 * p * s.nr + p * p * self.sum_r2;
        (p, var.max(0.0).sqrt() / self.sum_r)
    }
}

fn tally(values: &mut [u64], r: f64, atoms: &mut BTreeMap<u64, AtomSums>) {
    values.sort_unstable();
    for run in values.chunk_by(|a, b| a == b) {
        atoms.entry(run[0]).or_default().push(run.len() as f64, r);
    }
}

pub fn past_windows(excursions: u64, seed: u64, letter_cap: u64, lambdas: &[f64]) -> PastWindows {
    let parts = chunked(excursions, CHUNK, |c, range| {
        let mut s = StepSampler::new(Stream::replica(seed, c, lane::PAST), letter_cap);
        let mut w = PastWindows { laplace: vec![AtomSums::default(); lambdas.len()], ..Default::default() };
        let (mut lens, mut hs) = (Vec::new(), Vec::new());
        for _ in range {
            w.excursions += 1;
            let Ok(e) = s.excursion(true) else {
                w.truncated += 1;
                continue;
            };
            lens.clear();
            hs.clear();
            for (len, h, _) in e.windows() {
                lens.push(len);
                hs.push(h);
            }
            let r = e.steps as f64;
            w.sum_r += r;
            w.sum_r2 += r * r;
            for (i, &l) in lambdas.iter().enumerate() {
                w.laplace[i].push(hs.iter().map(|&h| (-l * h as f64).exp()).sum(), r);
            }
            tally(&mut lens, r, &mut w.len);
            tally(&mut hs, r, &mut w.hstar);
        }
        w
    });
    let mut w = PastWindows { laplace: vec![AtomSums::default(); lambdas.len()], ..Default::default() };
    for p in &parts {
        w.excursions += p.excursions;
        w.truncated += p.truncated;
        w.sum_r += p.sum_r;
        w.sum_r2 += p.sum_r2;
        w.laplace.iter_mut().zip(&p.laplace).for_each(|(a, b)| a.merge(b));
        for (dst, src) in [(&mut w.len, &p.len), (&mut w.hstar, &p.hstar)] {
            for (k, a) in src {
                dst.entry(*k).or_default().merge(a);
            }
        }
    }
    w
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivalenceRow {
    pub variable: &'static str,
    pub value: u64,
    pub p_forward: f64,
    pub se_forward: f64,
    pub p_past: f64,
    pub se_past: f64,
    pub z: f64,
}

/// Atoms where either estimate is at least `min_prob`.
pub fn equivalence(f: &ForwardBlocks, w: &PastWindows, min_prob: f64) -> Vec<EquivalenceRow> {
    let nf = f.samples as f64;
    let mut rows = Vec::new();
    for (variable, fwd, past) in [("block_len", &f.len, &w.len), ("hstar", &f.hstar, &w.hstar)] {
        let mut keys: Vec<u64> = fwd.keys().chain(past.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        for k in keys {
            let pf = fwd.get(&k).copied().unwrap_or(0) as f64 / nf;
            let (pp, sp) = w.estimate(past, k);
            if pf.max(pp) < min_prob {
                continue;
            }
            let sf = (pf * (1.0 - pf) / nf).sqrt();
            let z = (pf - pp) / (sf * sf + sp * sp).sqrt();
            rows.push(EquivalenceRow { variable, value: k, p_forward: pf, se_forward: sf, p_past: pp, se_past: sp, z });
        }
    }
    rows
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LaplaceRow {
    pub lambda: f64,
    pub exact: f64,
    pub exact_err: f64,
    /// From the past-side windows, which are exact up to rare truncated
    /// excursions.
    pub past_mean: f64,
    pub past_se: f64,
    pub z: f64,
    /// From forward blocks. Truncated blocks enter at their upper value, so
    /// the truth lies in `[forward_mean - censor_width, forward_mean]` up to
    /// noise.
    pub forward_mean: f64,
    pub forward_se: f64,
    pub censor_width: f64,
}

impl LaplaceRow {
    /// Whether `exact` lies in the forward bracket widened by `k` standard
    /// errors.
    pub fn in_forward_bracket(&self, k: f64) -> bool {
        let lo = self.forward_mean - self.censor_width - k * self.forward_se;
        let hi = self.forward_mean + k * self.forward_se;
        (lo..=hi).contains(&self.exact)
    }
}

pub fn laplace_rows(f: &ForwardBlocks, w: &PastWindows, lambdas: &[f64], spec: QuadratureSpec) -> Result<Vec<LaplaceRow>> {
    lambdas
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            let m = &f.laplace[i];
            let ex = laplace_hpf(l, spec)?;
            let (pm, ps) = w.ratio(w.laplace[i]);
            Ok(LaplaceRow {
                lambda: l,
                exact: ex.value,
                exact_err: ex.err,
                past_mean: pm,
                past_se: ps,
                z: (pm - ex.value) / (ps * ps + ex.err * ex.err).sqrt(),
                forward_mean: m.mean,
                forward_se: m.se(),
                censor_width: f.censored[i] / f.samples as f64,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeanSteps {
    pub samples: u64,
    pub truncated: u64,
    pub median_of_means: f64,
    pub mean: f64,
    pub se: f64,
    pub blocks: usize,
}

/// `E[r(E) | X(0) = F]` from `samples` explorations; truncated ones are
/// dropped. Blocks are runs of consecutive chunks. Reads the `PAST_PRIME`
/// lane, away from [`past_windows`].
pub fn mean_steps(samples: u64, seed: u64, letter_cap: u64, blocks: usize) -> MeanSteps {
    let parts = chunked(samples, CHUNK, |c, range| {
        let mut s = StepSampler::new(Stream::replica(seed, c, lane::PAST_PRIME), letter_cap);
        let mut m = Moments::new();
        let mut trunc = 0u64;
        for _ in range {
            match s.excursion(false) {
                Ok(e) => m.push(e.steps as f64),
                Err(_) => trunc += 1,
            }
        }
        (m, trunc)
    });
    let blocks = blocks.min(parts.len()).max(1);
    let mut all = Moments::new();
    let mut means = Vec::with_capacity(blocks);
    let per = parts.len() / blocks;
    for b in 0..blocks {
        let end = if b + 1 == blocks { parts.len() } else { (b + 1) * per };
        let mut m = Moments::new();
        parts[b * per..end].iter().for_each(|(x, _)| m.merge(x));
        means.push(m.mean);
        all.merge(&m);
    }
    MeanSteps {
        samples,
        truncated: parts.iter().map(|p| p.1).sum(),
        median_of_means: median(&mut means),
        mean: all.mean,
        se: all.se(),
        blocks,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TightnessRow {
    pub n: u64,
    pub replicas: u64,
    /// Quantiles of `N_n/(√n/log²n)`.
    pub q50: f64,
    pub q95: f64,
    /// Fraction of windows with at least one unmatched `F`.
    pub frac_positive: f64,
}

pub fn tightness(ns: &[u64], replicas: u64, seed: u64) -> Vec<TightnessRow> {
    ns.iter()
        .map(|&n| {
            let nf = n as f64;
            let scale = nf.sqrt() / nf.ln().powi(2);
            let counts = per_replica(replicas, |r| {
                let mut src = RandomLetters::new(WeightTable::critical(), Stream::replica(seed, r, lane::FORWARD));
                future_exploration(&mut src, n).unmatched_f()
            });
            let mut xs: Vec<f64> = counts.iter().map(|&c| c as f64 / scale).collect();
            TightnessRow {
                n,
                replicas,
                q50: quantile(&mut xs, 0.5),
                q95: quantile(&mut xs, 0.95),
                frac_positive: counts.iter().filter(|&&c| c > 0).count() as f64 / replicas as f64,
            }
        })
        .collect()
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (replicas, seed, tol) = (cfg.u64("replicas"), cfg.u64("seed"), cfg.f64("tol"));
    let lambdas = cfg.f64s("lambdas");
    let spec = QuadratureSpec::with_abs(cfg.f64("quad_abs_tol"));
    let fwd = forward_blocks(replicas, seed, cfg.u64("block_cap"), &lambdas);
    let past = past_windows(replicas, seed, cfg.u64("letter_cap"), &lambdas);
    let lap = laplace_rows(&fwd, &past, &lambdas, spec)?;
    let eq = equivalence(&fwd, &past, 1e-3);
    let ms = mean_steps(cfg.u64("mean_r_replicas"), seed, cfg.u64("letter_cap"), DEFAULT_BLOCKS);
    let tight = tightness(&cfg.u64s("ns"), cfg.u64("tight_replicas"), seed);

    let out = cfg.path("out");
    let mut o = Outcome::default();
    let files = [
        out.join("future_laplace.csv"),
        out.join("future_equivalence.csv"),
        out.join("future_tightness.csv"),
    ];
    write_rows(&files[0], &lap)?;
    write_rows(&files[1], &eq)?;
    write_rows(&files[2], &tight)?;
    o.outputs.extend(files);
    o.put("forward_truncated", fwd.truncated);
    o.put("past_truncated", past.truncated);
    o.put("laplace_pass", lap.iter().all(|r| r.z.abs() < tol));
    o.put("laplace_forward_bracket", lap.iter().all(|r| r.in_forward_bracket(tol)));
    o.put("equivalence_max_abs_z", eq.iter().map(|r| r.z.abs()).fold(0.0, f64::max));
    o.put("equivalence_atoms", eq.len());
    o.put("mean_steps", serde_json::to_value(&ms)?);
    o.put("q95_non_increasing", tight.windows(2).all(|w| w[1].q95 <= w[0].q95));
    Ok(o)
}
