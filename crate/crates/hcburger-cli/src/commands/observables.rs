//! Tails of the loop length, cluster perimeter and envelope boundary.

use anyhow::Result;
use hcburger::analytics::constants::{CLUSTER_TAIL, ENVELOPE_TAIL, LOOP_TAIL};
use hcburger::exploration::{ObservableSample, StepSampler};
use hcburger::rng::{lane, Stream};
use serde::Serialize;

use crate::output::{write_rows, Outcome};
use crate::par::{chunked, CHUNK};
use crate::settings::ExperimentConfig;

/// Dyadic bins `[2^j, 2^{j+1})`; index 64 holds zero.
const BINS: usize = 65;

fn bin(v: u64) -> usize {
    if v == 0 {
        64
    } else {
        63 - v.leading_zeros() as usize
    }
}

#[derive(Clone, Debug, Default)]
struct Hist {
    loops: Vec<u64>,
    cluster: Vec<u64>,
    envelope: Vec<u64>,
    samples: u64,
    truncated: u64,
    /// Samples breaking `1 <= |∂c| + 1 <= |L|`.
    violations: u64,
}

impl Hist {
    fn new() -> Self {
        Hist { loops: vec![0; BINS], cluster: vec![0; BINS], envelope: vec![0; BINS], ..Default::default() }
    }

    fn merge(&mut self, o: &Hist) {
        for (a, b) in [(&mut self.loops, &o.loops), (&mut self.cluster, &o.cluster), (&mut self.envelope, &o.envelope)] {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
        self.samples += o.samples;
        self.truncated += o.truncated;
        self.violations += o.violations;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObservableRow {
    pub observable: &'static str,
    /// `pmf` rows hold `P(lo <= X < hi)`; `ccdf` rows hold `P(X >= lo)`.
    pub kind: &'static str,
    pub lo: u64,
    pub hi: u64,
    pub count: u64,
    pub empirical: f64,
    pub se: f64,
    pub theory: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Observables {
    pub rows: Vec<ObservableRow>,
    pub samples: u64,
    pub truncated: u64,
    pub violations: u64,
}

impl Observables {
    /// Rows of one observable with `lo` in `[from, to)`.
    pub fn window(&self, observable: &str, from: u64, to: u64) -> Vec<&ObservableRow> {
        self.rows.iter().filter(|r| r.observable == observable && r.lo >= from && r.lo < to).collect()
    }
}

/// `Σ_{k=lo}^{hi-1} c log²k/k³`.
fn pmf_tail_mass(c: f64, lo: u64, hi: u64) -> f64 {
    (lo.max(2)..hi).map(|k| {
        let k = k as f64;
        c * k.ln().powi(2) / (k * k * k)
    })
    .sum()
}

/// `replicas` explorations from a fresh past, binned dyadically.
pub fn observables(replicas: u64, seed: u64, letter_cap: u64) -> Observables {
    let parts = chunked(replicas, CHUNK, |c, range| {
        let mut s = StepSampler::new(Stream::replica(seed, c, lane::PAST), letter_cap);
        let mut h = Hist::new();
        for _ in range {
            let Ok(e) = s.excursion(false) else {
                h.truncated += 1;
                continue;
            };
            let o = ObservableSample::from(&e);
            h.samples += 1;
            if o.loop_len < 1 || o.cluster_perimeter >= o.loop_len {
                h.violations += 1;
            }
            h.loops[bin(o.loop_len)] += 1;
            h.cluster[bin(o.cluster_perimeter)] += 1;
            h.envelope[bin(o.envelope_boundary)] += 1;
        }
        h
    });
    let mut h = Hist::new();
    for p in &parts {
        h.merge(p);
    }
    let n = replicas as f64;
    let mut rows = Vec::new();
    let mut push = |observable, kind, lo: u64, hi: u64, count: u64, theory: f64| {
        let q = count as f64 / n;
        rows.push(ObservableRow {
            observable,
            kind,
            lo,
            hi,
            count,
            empirical: q,
            se: (q * (1.0 - q) / n).sqrt(),
            theory,
            ratio: q / theory,
        });
    };
    for j in 1..63 {
        let (lo, hi) = (1u64 << j, 1u64 << (j + 1));
        if h.loops[j..64].iter().sum::<u64>() == 0 {
            break;
        }
        push("loop", "pmf", lo, hi, h.loops[j], pmf_tail_mass(LOOP_TAIL, lo, hi));
        push("cluster", "pmf", lo, hi, h.cluster[j], pmf_tail_mass(CLUSTER_TAIL, lo, hi));
        let l = lo as f64;
        let above: u64 = h.envelope[j..64].iter().sum();
        push("envelope", "ccdf", lo, u64::MAX, above, ENVELOPE_TAIL / (l * l.ln().powi(3)));
    }
    Observables { rows, samples: h.samples, truncated: h.truncated, violations: h.violations }
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    let replicas = cfg.u64("replicas");
    let obs = observables(replicas, cfg.u64("seed"), cfg.u64("letter_cap"));
    let mut o = Outcome::default();
    let path = cfg.path("out").join("observables.csv");
    write_rows(&path, &obs.rows)?;
    o.outputs.push(path);
    o.put("samples", obs.samples);
    o.put("truncated", obs.truncated);
    o.put("pathwise_violations", obs.violations);
    let tol = cfg.f64("tol");
    for name in ["loop", "cluster", "envelope"] {
        let w = obs.window(name, 128, 1024);
        let ok = !w.is_empty() && w.iter().all(|r| (r.ratio - 1.0).abs() < tol);
        o.put(&format!("{name}_ratios_128_1024"), w.iter().map(|r| r.ratio).collect::<Vec<_>>());
        o.put(&format!("{name}_within_tol"), ok);
    }
    Ok(o)
}
