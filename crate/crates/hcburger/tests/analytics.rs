use std::f64::consts::{E, FRAC_1_SQRT_2, PI, SQRT_2};

use hcburger::analytics::constants::*;
use hcburger::analytics::*;
use hcburger::quad::QuadratureSpec;

#[test]
fn f0_is_one() {
    let f = partition_f(0, QuadratureSpec::with_abs(1e-12)).unwrap();
    assert!((f.value() - 1.0).abs() < 1e-10, "{f:?}");
    assert!((hitting_pmf(0).unwrap().value - 0.5).abs() < 1e-10);
}

#[test]
fn hitting_law_sums_to_one() {
    let l = 200;
    let mut s = 0.0;
    for k in 0..l {
        let p = hitting_pmf(k).unwrap().value;
        assert!((0.0..=1.0).contains(&p));
        s += p;
        assert!(s <= 1.0 + 1e-9);
    }
    let t = hitting_tail(l).unwrap().value;
    assert!((s + t - 1.0).abs() < 1e-3, "{s} + {t}");
    // The same sum through the partition function.
    let mut g = 0.0;
    for k in 0..l {
        let f = partition_f(k, QuadratureSpec::default()).unwrap();
        g += SQRT_2 * f.mantissa / (2.0 * SQRT_2);
    }
    assert!((g - s).abs() < 1e-9);
}

#[test]
fn asymptotic_ratios_at_1e5() {
    let l = 100_000u64;
    let lf = l as f64;
    let h = hitting_pmf(l - 1).unwrap().value * lf * lf / lf.ln() / HITTING_TAIL;
    assert!((h - 1.0).abs() < 0.1, "{h}");
    let f = partition_f(l, QuadratureSpec::default()).unwrap();
    let r = f.mantissa * lf * lf / lf.ln() / PARTITION_TAIL;
    assert!((r - 1.0).abs() < 0.1, "{r}");
    assert!(f.value().is_infinite() && f.ln().is_finite());
}

#[test]
fn spectral_density_mass_and_edges() {
    let m = spectral_mass(QuadratureSpec { abs_tol: 1e-12, rel_tol: 1e-13, max_subdiv: 4000 }).unwrap();
    assert!((m.value - 0.5).abs() < 1e-8, "{m:?}");
    assert!(spectral_density(1e-12).unwrap().value < 1e-9);
    assert!(spectral_density(A_TILDE * (1.0 - 1e-12)).unwrap().value < 1e-5);
    assert!(spectral_density(0.0).is_err());
    assert!(spectral_density(A_TILDE).is_err());
}

#[test]
fn resolvent_values() {
    let w = resolvent(CUT_B + 1e-6).unwrap().value;
    assert!((w - C0).abs() < 1e-3, "{w}");
    assert!((1e6 * resolvent(1e6).unwrap().value - 1.0).abs() < 1e-4);
    let a = resolvent(4.0).unwrap();
    let b = resolvent_series(4.0, 150).unwrap();
    // Terms decay like (2√2/4)^ℓ, so the cut-off tail is far below 1e-12.
    assert!((a.value - b.value).abs() < a.err + b.err + 1e-12, "{a:?} {b:?}");
    assert!(resolvent(CUT_B).is_err());
    let mut prev = f64::INFINITY;
    for z in [3.0, 4.0, 8.0, 20.0] {
        let v = resolvent(z).unwrap().value;
        assert!(v > 0.0 && v < prev);
        prev = v;
    }
}

#[test]
fn resolvent_gap_trend() {
    // (c₀ - W(2√2 + z))/(z log² z) approaches 1/(2π²) from above.
    let mut prev = f64::INFINITY;
    for k in 3..=8 {
        let z = 10f64.powi(-k);
        let r = resolvent_gap(z).unwrap().value / (z * z.ln().powi(2)) * 2.0 * PI * PI;
        assert!(r > 1.0 && r < prev, "z = {z}: {r}");
        prev = r;
    }
    assert!(prev < 1.3);
    let g = resolvent_gap(1e-3).unwrap().value;
    assert!((C0 - resolvent(CUT_B + 1e-3).unwrap().value - g).abs() < 1e-10);
}

#[test]
fn laplace_xi_small_lambda() {
    assert!((laplace_xi(1e-12).unwrap().value - 1.0).abs() < 1e-9);
    let mut prev = 0.0;
    for k in [2, 4, 6, 8] {
        let l = 10f64.powi(-k);
        let f = laplace_xi(l).unwrap().value;
        assert!(f >= 1.0);
        let lead = (f - 1.0) * A1 * l.ln().powi(2) / l;
        assert!(lead > prev && lead < 1.0, "{lead}");
        prev = lead;
        // Against the two-term inverse of a₁t log²t - a₂t log t = λ.
        let g = |t: f64| A1 * t * t.ln().powi(2) - a2() * t * t.ln() - l;
        let (mut lo, mut hi) = (l * 1e-3, l);
        for _ in 0..200 {
            let mid = (lo * hi).sqrt();
            if g(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let two = (f - 1.0) / lo;
        if k >= 6 {
            assert!((two - 1.0).abs() < 0.02, "λ = {l}: {two}");
        }
    }
}

#[test]
fn f_helper_values() {
    assert_eq!(f_helper(0.0), 0.0);
    assert!((f_helper(1e-8) / (2e-8f64).sqrt() - 1.0).abs() < 1e-3);
    let direct = -((-1.0f64).exp() / (1.0 + (1.0 - (-2.0f64).exp()).sqrt())).ln();
    assert!((f_helper(1.0) - direct).abs() < 1e-14);
    let mut prev = 0.0;
    for t in [0.01, 0.1, 1.0, 10.0] {
        assert!(f_helper(t) > prev);
        prev = f_helper(t);
    }
}

#[test]
fn laplace_hpf_normalised_and_decreasing() {
    let spec = QuadratureSpec::with_abs(1e-8);
    let v0 = laplace_hpf(0.0, spec).unwrap();
    assert!((v0.value - 1.0).abs() < 1e-6, "{v0:?}");
    let mut prev = v0.value;
    for l in [0.1, 0.5, 1.0] {
        let v = laplace_hpf(l, spec).unwrap().value;
        assert!(v > 0.0 && v < prev);
        prev = v;
    }
}

#[test]
fn stable_limits() {
    assert_eq!(stable_limit_laplace(1.0), (1.0, 1.0));
    let (z, _) = stable_limit_laplace(E);
    assert!((z / (PI * PI * E).exp() - 1.0).abs() < 1e-12);
}

#[test]
fn log_integral_remainder_converges() {
    let c = log_integral_limit().unwrap().value;
    assert!((c - 1.473927).abs() < 1e-6);
    let mut prev = f64::INFINITY;
    for k in [2, 4, 6, 8] {
        let r = log_integral_remainder(10f64.powi(-k)).unwrap().value;
        let drift = (r - c).abs();
        assert!(drift < prev.max(1e-9), "ε = 1e-{k}: {drift}");
        prev = drift;
    }
    assert!(prev < 1e-8);
}

#[test]
fn constants_are_consistent() {
    assert!((X_C - 1.0 / (8.0f64 * 4.0).sqrt()).abs() < 1e-15);
    assert!((c0() - FRAC_1_SQRT_2).abs() < 1e-15);
    assert!((CUT_B - CUT_A - 2.0 * A_TILDE).abs() < 1e-12);
    assert!((PARTITION_TAIL - 2.0 * HITTING_TAIL).abs() < 1e-15);
}
