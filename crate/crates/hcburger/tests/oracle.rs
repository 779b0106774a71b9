use std::collections::BTreeMap;

use hcburger::analytics::{hitting_pmf, partition_f};
use hcburger::exploration::{StepKind, StepSampler};
use hcburger::oracle::*;
use hcburger::quad::QuadratureSpec;
use hcburger::rng::Stream;
use hcburger::word::{reduce, word};
use hcburger::WeightTable;
use num_rational::Ratio;

fn r(n: i128, d: i128) -> Dyadic {
    Ratio::new(n, d)
}

#[test]
fn product_measure_is_complete() {
    let w = critical_weights();
    for n in 1..=10 {
        let e = enumerate_words(n, &Predicate::Any, &w, false).unwrap();
        assert_eq!(e.total(), r(1, 1), "n = {n}");
    }
    let f = float_weights(&WeightTable::new(0.3).unwrap());
    let e = enumerate_words(6, &Predicate::Any, &f, false).unwrap();
    assert!((e.total() - 1.0).abs() < 1e-12);
}

#[test]
fn reduction_dp_matches_brute_force() {
    let w = critical_weights();
    let target = reduce(&word("hcHFcH"));
    let preds = [Predicate::EmptyReduction, Predicate::ReducesTo(target), Predicate::FExcursion];
    for p in &preds {
        for n in 1..=8 {
            let dp = enumerate_words(n, p, &w, false).unwrap();
            let bf = enumerate_words(n, p, &w, true).unwrap();
            assert_eq!(dp.by_length[n], bf.total(), "{} n = {n}", p.describe());
            let listed = bf.words.iter().fold(r(0, 1), |a, (_, m)| a + *m);
            assert_eq!(listed, bf.total());
        }
    }
    let e = enumerate_words(2, &Predicate::EmptyReduction, &w, false).unwrap();
    assert_eq!(e.total(), r(3, 16));
    assert_eq!(w.word(&word("hcHFcH")), r(1, 1 << 14));
}

#[test]
fn size_caps() {
    let w = critical_weights();
    assert!(enumerate_words(17, &Predicate::EmptyReduction, &w, false).is_err());
    assert!(enumerate_words(11, &Predicate::Any, &w, false).is_err());
    assert!(excursion_pmf(17).is_err());
    assert!(exact_tau_pmf(15, 4).is_err());
    assert!(verify_bijection(6).is_err());
}

#[test]
fn excursion_pmf_values() {
    let p = excursion_pmf(14).unwrap();
    assert!(p.atoms.iter().all(|(_, m)| *m >= r(0, 1)));
    assert_eq!(p.enumerated() + p.residual, r(1, 1));
    let eta = |k: u64| p.atoms.iter().filter(|(s, _)| s.eta == k).fold(r(0, 1), |a, (_, m)| a + *m);
    assert_eq!(eta(1), r(3, 4));
    assert_eq!(eta(2), r(1, 8));
    let f2 = p
        .atoms
        .iter()
        .filter(|(s, _)| s.eta == 2 && matches!(s.kind, StepKind::Excursion(_)))
        .fold(r(0, 1), |a, (_, m)| a + *m);
    assert_eq!(f2, r(1, 8));
    // Frozen from the exact run; the η tail is too heavy for 0.99 at 14.
    assert!((p.enumerated().as_f64() - 0.962_412_25).abs() < 1e-8);
    // Every longer step has at least as much mass left.
    let q = excursion_pmf(12).unwrap();
    assert!(q.residual > p.residual);
}

#[test]
fn excursion_pmf_matches_monte_carlo() {
    let p = excursion_pmf(10).unwrap();
    let n = 1_000_000u64;
    let mut s = StepSampler::new(Stream::new(99, 1), 1 << 40);
    let mut counts: BTreeMap<(String, i64, u64), u64> = BTreeMap::new();
    for _ in 0..n {
        let st = s.pooled().unwrap();
        *counts.entry((format!("{:?}", st.kind), st.xi, st.eta)).or_default() += 1;
    }
    let mut checked = 0;
    for (st, m) in &p.atoms {
        let q = m.as_f64();
        if q < 1e-4 {
            continue;
        }
        let c = counts.get(&(format!("{:?}", st.kind), st.xi, st.eta)).copied().unwrap_or(0);
        let se = (q * (1.0 - q) / n as f64).sqrt();
        let z = (c as f64 / n as f64 - q) / se;
        assert!(z.abs() < 3.0, "{st:?}: z = {z}");
        checked += 1;
    }
    assert!(checked > 20);
}

#[test]
fn tau_pmf_against_quadrature() {
    let t = exact_tau_pmf(14, 6).unwrap();
    assert_eq!(t.bounds(1), (0.5, 0.5));
    let mut total = 0.0;
    for m in 1..=6 {
        let (lo, hi) = t.bounds(m);
        let q = hitting_pmf(m as u64 - 1).unwrap();
        assert!(lo - q.err <= q.value && q.value <= hi + q.err, "τ = {m}: {lo} {} {hi}", q.value);
        total += lo;
    }
    assert!(total <= 1.0);
    // P(τ = 2) = √2 (2√2)^{-2} F_1.
    let f1 = partition_f(1, QuadratureSpec::default()).unwrap().value();
    let (lo, hi) = t.bounds(2);
    let v = 2f64.sqrt() / 8.0 * f1;
    assert!(lo <= v && v <= hi);
}

#[test]
fn bijection_counts() {
    let r3 = verify_bijection(3).unwrap();
    assert_eq!(r3.words, 432);
    let want: BTreeMap<usize, u64> = [(1, 70), (2, 176), (3, 146), (4, 40)].into_iter().collect();
    assert_eq!(r3.by_loops, want);
    let r5 = verify_bijection(5).unwrap();
    assert_eq!(r5.words, 93312);
    assert_eq!(r5.by_loops.get(&6), Some(&1344));
}

#[test]
fn f_excursion_predicate() {
    assert!(is_f_excursion(&word("hF")));
    assert!(is_f_excursion(&word("cHF")));
    assert!(!is_f_excursion(&word("hcF")));
    assert!(!is_f_excursion(&word("F")));
}
