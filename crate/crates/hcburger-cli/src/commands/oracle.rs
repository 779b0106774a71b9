//! Exhaustive checks against the enumeration oracle.

use anyhow::Result;
use hcburger::analytics::hitting_pmf;
use hcburger::bijection::{triangulation_to_word, word_to_triangulation};
use hcburger::oracle::{excursion_pmf, exact_tau_pmf, verify_bijection, Mass};
use hcburger::word::word;
use serde::Serialize;

use crate::output::{write_atomic, write_rows, Outcome};
use crate::settings::ExperimentConfig;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleRow {
    pub check: String,
    pub argument: String,
    pub value: String,
    pub expected: String,
    pub pass: bool,
}

fn row(check: &str, argument: impl ToString, value: impl ToString, expected: impl ToString, pass: bool) -> OracleRow {
    OracleRow {
        check: check.into(),
        argument: argument.to_string(),
        value: value.to_string(),
        expected: expected.to_string(),
        pass,
    }
}

/// Word counts with empty reduction, `k = 1..=5`.
pub const CLOSED_WORDS: [u64; 5] = [4, 36, 432, 6048, 93312];

/// The word of the worked example: 18 triangles, 3 loops.
pub const FIGURE_WORD: &str = "hcHhhcHcHCFhhhHCHF";

pub fn oracle_checks(k: usize, max_len: usize) -> Result<(Vec<OracleRow>, Vec<String>)> {
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for j in 1..=k {
        let r = verify_bijection(j)?;
        rows.push(row("bijection_words", j, r.words, CLOSED_WORDS[j - 1], r.words == CLOSED_WORDS[j - 1]));
        reports.push(r.to_text());
    }
    let w = word(FIGURE_WORD);
    let t = word_to_triangulation(&w)?;
    let back = triangulation_to_word(&t)?;
    let got = format!("{} triangles, {} loops", t.triangle_count(), t.loop_count);
    rows.push(row(
        "figure_word",
        FIGURE_WORD,
        &got,
        "18 triangles, 3 loops",
        t.triangle_count() == 18 && t.loop_count == 3 && back == w,
    ));

    let p = excursion_pmf(max_len)?;
    let mass = p.enumerated().as_f64();
    rows.push(row("excursion_mass", max_len, mass, 1.0 - p.residual.as_f64(), p.residual.as_f64() >= 0.0));

    let tau = exact_tau_pmf(max_len, 6)?;
    for m in 1..=6usize {
        let (lo, hi) = tau.bounds(m);
        let q = hitting_pmf(m as u64 - 1)?;
        let ok = lo - q.err <= q.value && q.value <= hi + q.err;
        rows.push(row("tau_bounds", m, format!("[{lo}, {hi}]"), q.value, ok));
    }
    Ok((rows, reports))
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    let k = cfg.usize("k");
    anyhow::ensure!(k <= 5, "k is at most 5");
    let (rows, reports) = oracle_checks(k, cfg.usize("max_len"))?;
    let out = cfg.path("out");
    let (a, b) = (out.join("oracle_verify.csv"), out.join("oracle_bijection.txt"));
    write_rows(&a, &rows)?;
    write_atomic(&b, reports.join("\n").as_bytes())?;
    let mut o = Outcome::default();
    o.outputs.extend([a, b]);
    o.put("checks", rows.len());
    o.put("pass", rows.iter().all(|r| r.pass));
    Ok(o)
}
