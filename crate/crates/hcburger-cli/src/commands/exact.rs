//! Table of the closed-form quantities with their error estimates.

use anyhow::Result;
use hcburger::analytics::constants::{CUT_B, C0, HITTING_TAIL, PARTITION_TAIL};
use hcburger::analytics::*;
use hcburger::quad::{ExactValue, QuadratureSpec};
use serde::Serialize;

use crate::output::{write_rows, Outcome};
use crate::settings::ExperimentConfig;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactRow {
    pub name: String,
    pub argument: f64,
    pub value: f64,
    pub err_estimate: f64,
}

impl ExactRow {
    fn of(name: &str, argument: f64, v: ExactValue) -> Self {
        ExactRow { name: name.to_string(), argument, value: v.value, err_estimate: v.err }
    }
}

/// A certification: `value` within `tol` of `target`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub name: &'static str,
    pub value: f64,
    pub target: f64,
    pub tol: f64,
    pub pass: bool,
}

fn cert(name: &'static str, value: f64, target: f64, tol: f64) -> Certificate {
    Certificate { name, value, target, tol, pass: (value - target).abs() <= tol }
}

/// The closed forms at a fixed set of arguments.
pub fn exact_table(spec: QuadratureSpec) -> Result<Vec<ExactRow>> {
    let mut rows = Vec::new();
    for l in 0..=20u64 {
        let f = partition_f(l, spec)?;
        rows.push(ExactRow::of("partition_f", l as f64, f.exact()));
    }
    for l in 0..=20u64 {
        rows.push(ExactRow::of("hitting_pmf", l as f64, hitting_pmf_spec(l, spec)?));
    }
    rows.push(ExactRow::of("hitting_tail", 200.0, hitting_tail(200)?));
    rows.push(ExactRow::of("spectral_mass", 0.0, spectral_mass(spec)?));
    for z in [CUT_B + 1e-6, 3.0, 4.0, 8.0] {
        rows.push(ExactRow::of("resolvent", z, resolvent(z)?));
    }
    for d in [1e-3, 1e-5, 1e-7] {
        rows.push(ExactRow::of("resolvent_gap", d, resolvent_gap(d)?));
    }
    for l in [0.01, 0.1, 0.5, 1.0] {
        rows.push(ExactRow::of("laplace_xi", l, laplace_xi(l)?));
    }
    for l in [0.0, 0.1, 0.5, 1.0] {
        rows.push(ExactRow::of("laplace_hpf", l, laplace_hpf(l, spec)?));
    }
    for t in [0.01, 0.1, 1.0] {
        rows.push(ExactRow { name: "f_helper".into(), argument: t, value: f_helper(t), err_estimate: 0.0 });
    }
    rows.push(ExactRow::of("log_integral_limit", 0.0, log_integral_limit()?));
    Ok(rows)
}

/// Quadrature certifications and the exact-side asymptotic ratios.
pub fn certificates(spec: QuadratureSpec) -> Result<Vec<Certificate>> {
    let f0 = partition_f(0, spec)?.value();
    let l = 200u64;
    let mut sum = 0.0;
    for k in 0..l {
        sum += hitting_pmf_spec(k, spec)?.value;
    }
    let tail = hitting_tail(l)?.value;
    let mass = spectral_mass(QuadratureSpec { abs_tol: 1e-12, rel_tol: 1e-13, max_subdiv: 4000 })?.value;
    let hpf0 = laplace_hpf(0.0, QuadratureSpec::with_abs(1e-8))?.value;
    let w = resolvent(CUT_B + 1e-6)?.value;
    let big = 100_000u64;
    let lf = big as f64;
    let h_ratio = hitting_pmf(big)?.value * lf * lf / lf.ln();
    let f_ratio = partition_f(big, spec)?.mantissa * lf * lf / lf.ln();
    Ok(vec![
        cert("F_0", f0, 1.0, 1e-10),
        cert("hitting_pmf_sum_plus_tail", sum + tail, 1.0, 1e-3),
        cert("spectral_mass", mass, 0.5, 1e-8),
        cert("laplace_hpf_0", hpf0, 1.0, 1e-6),
        cert("resolvent_at_edge", w, C0, 1e-3),
        cert("hitting_ratio_1e5", h_ratio / HITTING_TAIL, 1.0, 0.1),
        cert("partition_ratio_1e5", f_ratio / PARTITION_TAIL, 1.0, 0.1),
    ])
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    let spec = QuadratureSpec::with_abs(cfg.f64("quad_abs_tol"));
    let rows = exact_table(spec)?;
    let certs = certificates(spec)?;
    let out = cfg.path("out");
    let (a, b) = (out.join("exact_eval.csv"), out.join("exact_certificates.csv"));
    write_rows(&a, &rows)?;
    write_rows(&b, &certs)?;
    let mut o = Outcome::default();
    o.outputs.extend([a, b]);
    let tol = cfg.f64("tol");
    o.put("max_err_estimate", rows.iter().map(|r| r.err_estimate).fold(0.0, f64::max));
    o.put("all_within_tol", rows.iter().all(|r| r.err_estimate <= tol.max(r.value.abs() * 1e-9)));
    o.put("certificates_pass", certs.iter().all(|c| c.pass));
    Ok(o)
}
