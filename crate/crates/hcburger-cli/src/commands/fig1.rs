//! Sample paths of the burger count and the discrepancy.

use std::f64::consts::PI;
use std::path::Path;

use anyhow::Result;
use hcburger::trajectory::trajectory_with;
use hcburger::WeightTable;

use crate::output::{line_plot, opt, thin, write_atomic, Outcome, Series, Table};
use crate::settings::ExperimentConfig;

#[derive(Clone, Debug, PartialEq)]
pub struct Fig1Run {
    pub p: f64,
    pub n: usize,
    /// Range of `S/√N` over the whole path.
    pub s_range: f64,
    /// Range of `D/√N` over the prefix where `D` is defined.
    pub d_range: f64,
    pub defined: usize,
    pub unresolved_at: Option<usize>,
    pub past_letters: u64,
}

fn range(xs: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = xs.fold((0.0f64, 0.0f64), |(lo, hi), x| (lo.min(x), hi.max(x)));
    hi - lo
}

/// File stem for one value of `p`, e.g. `fig1_p0.5`.
pub fn stem(p: f64) -> String {
    format!("fig1_p{p}")
}

/// One path at bias `p`, written as `<out>/fig1_p<p>.csv` and `.svg`.
pub fn fig1_path(p: f64, n: usize, seed: u64, cap_factor: u64, stride: usize, out: &Path) -> Result<(Fig1Run, Outcome)> {
    let wt = WeightTable::new(p).map_err(|e| anyhow::anyhow!("p = {}", e.0))?;
    let t = trajectory_with(wt, n, seed, 0, cap_factor.saturating_mul(n as u64));
    let sq = (n as f64).sqrt();
    let critical = wt.is_critical();
    let mut header = vec!["step", "S", "D", "S_over_sqrtN", "D_over_sqrtN"];
    if critical {
        header.push("D_logN_over_2pi_sqrtN");
    }
    let log_scale = (n as f64).ln() / (2.0 * PI * sq);
    let mut table = Table::new(&header)?;
    let mut s_pts = Vec::new();
    let mut d_pts = Vec::new();
    for k in (1..=n).filter(|&k| k % stride == 0 || k == n) {
        let s = t.s[k - 1];
        let d = t.d(k);
        let mut row = vec![
            k.to_string(),
            s.to_string(),
            opt(d),
            (s as f64 / sq).to_string(),
            opt(d.map(|d| d as f64 / sq)),
        ];
        if critical {
            row.push(opt(d.map(|d| d as f64 * log_scale)));
        }
        table.row(&row)?;
        let x = k as f64 / n as f64;
        s_pts.push((x, s as f64 / sq));
        if let Some(d) = d {
            d_pts.push((x, d as f64 / sq));
        }
    }
    let run = Fig1Run {
        p,
        n,
        s_range: range((1..=n).map(|k| t.s[k - 1] as f64 / sq)),
        d_range: range((1..=t.defined).map(|k| t.d(k).unwrap() as f64 / sq)),
        defined: t.defined,
        unresolved_at: t.unresolved_at,
        past_letters: t.past_letters,
    };

    let mut o = Outcome::default();
    let csv = out.join(format!("{}.csv", stem(p)));
    table.write(&csv)?;
    let svg = out.join(format!("{}.svg", stem(p)));
    let plot = line_plot(
        &format!("p = {p}, N = {n}"),
        &[
            Series { label: "S/sqrt(N)", colour: "#1f77b4", points: thin(&s_pts, 4000) },
            Series { label: "D/sqrt(N)", colour: "#d62728", points: thin(&d_pts, 4000) },
        ],
    );
    write_atomic(&svg, plot.as_bytes())?;
    o.outputs.extend([csv, svg]);
    Ok((run, o))
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    let out = cfg.path("out");
    let (n, seed) = (cfg.usize("n"), cfg.u64("seed"));
    let (cap, stride) = (cfg.u64("cap_factor"), cfg.usize("stride"));
    let mut total = Outcome::default();
    let mut runs = Vec::new();
    for p in cfg.f64s("p") {
        let (r, o) = fig1_path(p, n, seed, cap, stride, &out)?;
        total.outputs.extend(o.outputs);
        total.put(
            &stem(p),
            serde_json::json!({
                "p": p,
                "s_range": r.s_range,
                "d_range": r.d_range,
                "defined": r.defined,
                "unresolved_at": r.unresolved_at,
                "past_letters": r.past_letters,
            }),
        );
        runs.push(r);
    }
    // The caption's collapse: D/√N at the largest p against the smallest.
    if runs.len() >= 2 {
        let lo = runs.iter().min_by(|a, b| a.p.total_cmp(&b.p)).unwrap();
        let hi = runs.iter().max_by(|a, b| a.p.total_cmp(&b.p)).unwrap();
        let ratio = hi.d_range / lo.d_range;
        total.put("collapse_ratio", ratio);
        total.put("collapse_pass", ratio < cfg.f64("tol"));
    }
    Ok(total)
}
