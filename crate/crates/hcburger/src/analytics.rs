//! Closed forms of the critical loop-O(2) model and the laws derived from them.
//!
//! Most quantities reduce to one-dimensional integrals against
//! `L(u) = ln((1 + √(1 - u²))/u)`, which has a log singularity at 0 and a
//! square-root edge at 1.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2, PI, SQRT_2};

use crate::quad::{integrate, ExactValue, QuadError, QuadratureSpec};

/// Fixed constants of the model at `n = 2`.
pub mod constants {
    use std::f64::consts::{PI, SQRT_2};

    pub const N: f64 = 2.0;
    /// `x_c = 1/(4√2)`.
    pub const X_C: f64 = 0.25 / SQRT_2;
    /// Left end of the cut, `(2 - π)√2`.
    pub const CUT_A: f64 = (2.0 - PI) * SQRT_2;
    /// Right end of the cut, `2√2`.
    pub const CUT_B: f64 = 2.0 * SQRT_2;
    /// Half-width of the rescaled cut, `π/√2`.
    pub const A_TILDE: f64 = PI / SQRT_2;
    /// `W(2√2) = 1/√2`.
    pub const C0: f64 = std::f64::consts::FRAC_1_SQRT_2;
    /// Tail constant of the hitting time `τ^h`.
    pub const HITTING_TAIL: f64 = 4.0 / (PI * PI);
    /// Tail constant of the partition function.
    pub const PARTITION_TAIL: f64 = 8.0 / (PI * PI);
    pub const LOOP_TAIL: f64 = 256.0 / (PI * PI * PI * PI);
    pub const CLUSTER_TAIL: f64 = 32.0 / (PI * PI * PI * PI);
    pub const ENVELOPE_TAIL: f64 = PI * PI;
    /// Conjectured and proved brackets for `log²n/n · Var(D_n)`.
    pub const VARIANCE_LOW: f64 = 4.0 * PI * PI;
    pub const VARIANCE_HIGH: f64 = 8.0 * PI * PI;
    /// Coefficients of `1 - r(s) = a₁(1-s)log²(1-s) - a₂(1-s)log(1-s) + ...`.
    pub const A1: f64 = 2.0 / (PI * PI);
    pub fn a2() -> f64 {
        4.0 / (PI * PI) * PI.ln()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, thiserror::Error)]
pub enum AnalyticsError {
    #[error("argument {0} outside the domain")]
    Domain(f64),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error("root bracket collapsed without meeting the target")]
    Root,
}

/// `ln((1 + √(1 - u²))/u)`, the inverse hyperbolic secant.
#[inline]
pub fn arcsech(u: f64) -> f64 {
    if u <= 0.0 {
        return f64::INFINITY;
    }
    (1.0 + ((1.0 - u) * (1.0 + u)).sqrt()).ln() - u.ln()
}

/// `(1 - πu/2)^ℓ`, computed through `ln_1p` on `[0, 2/π)`.
#[inline]
fn decay(u: f64, l: u64) -> f64 {
    let x = 1.0 - PI * u / 2.0;
    if l == 0 {
        return 1.0;
    }
    if x > 0.0 {
        (l as f64 * (-PI * u / 2.0).ln_1p()).exp()
    } else {
        let m = (l as f64 * (-x).ln()).exp();
        if l % 2 == 0 {
            m
        } else {
            -m
        }
    }
}

/// Breakpoints on `[0, 1]`: decades down to `1e-14` around `scale`, plus 2/π.
fn points(scale: f64) -> Vec<f64> {
    let mut p = vec![0.0, 1.0, 2.0 / PI];
    for k in -3..=6 {
        let x = scale * 10f64.powi(k) / 4.0;
        if x > 1e-300 && x < 1.0 {
            p.push(x);
            if 4.0 * x < 1.0 {
                p.push(4.0 * x);
            }
        }
    }
    p.sort_by(f64::total_cmp);
    p.dedup();
    p
}

/// `I_ℓ = ∫₀¹ u (1 - πu/2)^ℓ L(u) du`, which equals `P(τ^h = ℓ + 1)`.
pub fn hitting_pmf_spec(l: u64, spec: QuadratureSpec) -> Result<ExactValue, AnalyticsError> {
    let scale = 1.0 / (l as f64 + 1.0);
    // The value decays like log ℓ/ℓ², so tighten the absolute tolerance with ℓ.
    let spec = QuadratureSpec { abs_tol: spec.abs_tol * scale * scale, ..spec };
    let (v, e) = integrate(|u| if u > 0.0 { u * decay(u, l) * arcsech(u) } else { 0.0 }, &points(scale), spec)?;
    Ok(ExactValue::new(v, e, "hitting_pmf"))
}

/// `P(τ^h = ℓ + 1)`.
pub fn hitting_pmf(l: u64) -> Result<ExactValue, AnalyticsError> {
    hitting_pmf_spec(l, QuadratureSpec::default())
}

/// `P(τ^h > ℓ) = Σ_{k≥ℓ} I_k = (2/π) ∫₀¹ (1 - πu/2)^ℓ L(u) du`.
pub fn hitting_tail(l: u64) -> Result<ExactValue, AnalyticsError> {
    let scale = 1.0 / (l as f64 + 1.0);
    let spec = QuadratureSpec { abs_tol: 1e-13 * scale, rel_tol: 1e-12, max_subdiv: 4000 };
    let (v, e) = integrate(|u| if u > 0.0 { decay(u, l) * arcsech(u) } else { 0.0 }, &points(scale), spec)?;
    Ok(ExactValue::new(2.0 / PI * v, 2.0 / PI * e, "hitting_tail"))
}

/// `F_ℓ = mantissa · (2√2)^ℓ`, kept split so large `ℓ` does not overflow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PartitionValue {
    pub l: u64,
    pub mantissa: f64,
    pub mantissa_err: f64,
}

impl PartitionValue {
    pub fn ln(&self) -> f64 {
        self.mantissa.ln() + self.l as f64 * (2.0 * SQRT_2).ln()
    }

    /// `F_ℓ` itself; infinite once it leaves the `f64` range.
    pub fn value(&self) -> f64 {
        self.mantissa * (2.0 * SQRT_2).powf(self.l as f64)
    }

    pub fn exact(&self) -> ExactValue {
        let scale = (2.0 * SQRT_2).powf(self.l as f64);
        ExactValue::new(self.mantissa * scale, self.mantissa_err * scale, "partition_F")
    }
}

/// The loop-O(2) partition function with boundary length `ℓ`.
pub fn partition_f(l: u64, spec: QuadratureSpec) -> Result<PartitionValue, AnalyticsError> {
    let i = hitting_pmf_spec(l, spec)?;
    Ok(PartitionValue { l, mantissa: 2.0 * i.value, mantissa_err: 2.0 * i.err })
}

/// Rescaled spectral density on `(0, π/√2)`.
pub fn spectral_density(v: f64) -> Result<ExactValue, AnalyticsError> {
    let a = constants::A_TILDE;
    if !(v > 0.0 && v < a) {
        return Err(AnalyticsError::Domain(v));
    }
    let value = v / (a * a) * arcsech(v / a);
    Ok(ExactValue::new(value, 4.0 * f64::EPSILON * value, "spectral_density"))
}

fn rho(v: f64) -> f64 {
    let a = constants::A_TILDE;
    v / (a * a) * arcsech(v / a)
}

fn cut_points(scale: f64) -> Vec<f64> {
    points(scale / constants::A_TILDE).into_iter().map(|x| x * constants::A_TILDE).collect()
}

/// `∫₀^{π/√2} ρ̃(v) dv`.
pub fn spectral_mass(spec: QuadratureSpec) -> Result<ExactValue, AnalyticsError> {
    let (v, e) = integrate(rho, &cut_points(1.0), spec)?;
    Ok(ExactValue::new(v, e, "spectral_mass"))
}

/// `W(z) = ∫ 2ρ̃(v)/(z - 2√2 + 2v) dv` for `z > 2√2`.
pub fn resolvent(z: f64) -> Result<ExactValue, AnalyticsError> {
    let d = z - constants::CUT_B;
    if !(d > 0.0) || !z.is_finite() {
        return Err(AnalyticsError::Domain(z));
    }
    let spec = QuadratureSpec { abs_tol: 1e-13 / (1.0 + d), rel_tol: 1e-13, max_subdiv: 4000 };
    let (v, e) = integrate(|v| 2.0 * rho(v) / (d + 2.0 * v), &cut_points(d.min(1.0)), spec)?;
    Ok(ExactValue::new(v, e, "resolvent"))
}

/// `c₀ - W(2√2 + d) = d ∫ ρ̃(v)/(v(d + 2v)) dv`, without cancellation.
pub fn resolvent_gap(d: f64) -> Result<ExactValue, AnalyticsError> {
    if !(d > 0.0) {
        return Err(AnalyticsError::Domain(d));
    }
    let a = constants::A_TILDE;
    let spec = QuadratureSpec { abs_tol: 1e-15, rel_tol: 1e-12, max_subdiv: 4000 };
    let (v, e) = integrate(
        |v| arcsech(v / a) / (a * a) / (d + 2.0 * v),
        &cut_points(d.min(1.0)),
        spec,
    )?;
    Ok(ExactValue::new(d * v, d * e, "resolvent_gap"))
}

/// `Σ_{ℓ<terms} F_ℓ z^{-ℓ-1}`; used to cross-check [`resolvent`].
pub fn resolvent_series(z: f64, terms: u64) -> Result<ExactValue, AnalyticsError> {
    let mut s = 0.0;
    let mut e = 0.0;
    for l in 0..terms {
        let f = partition_f(l, QuadratureSpec::with_abs(1e-13))?;
        let w = ((l as f64) * (2.0 * SQRT_2 / z).ln()).exp() / z;
        s += f.mantissa * w;
        e += f.mantissa_err * w;
    }
    Ok(ExactValue::new(s, e, "resolvent_series"))
}

/// `1 - E[s^{τ^h}]`, written with `t = 1 - s` to stay accurate as `s → 1`:
/// `(2/π) t ∫ L(u)/(t + π(1-t)u/2) du`.
pub fn hitting_gf_complement(t: f64) -> Result<ExactValue, AnalyticsError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(AnalyticsError::Domain(t));
    }
    if t == 0.0 {
        return Ok(ExactValue::new(0.0, 0.0, "hitting_gf_complement"));
    }
    let s = 1.0 - t;
    let spec = QuadratureSpec { abs_tol: 1e-15, rel_tol: 1e-13, max_subdiv: 4000 };
    let (v, e) = integrate(|u| arcsech(u) / (t + PI * s * u / 2.0), &points(t), spec)?;
    let k = 2.0 / PI * t;
    Ok(ExactValue::new(k * v, k * e, "hitting_gf_complement"))
}

/// `r(s) = E[s^{τ^h}]`, the closed-form sum of `Σ s^{ℓ+1} P(τ^h = ℓ+1)`.
pub fn hitting_gf(s: f64) -> Result<ExactValue, AnalyticsError> {
    let c = hitting_gf_complement(1.0 - s)?;
    Ok(ExactValue::new(1.0 - c.value, c.err, "hitting_gf"))
}

/// `F_ξ(λ) = E[e^{-λξ}]` for the one-sided step `ξ`, from `G(r(s)) = 1/s`:
/// find `s*` with `r(s*) = e^{-λ}` and return `1/s*`.
pub fn laplace_xi(lambda: f64) -> Result<ExactValue, AnalyticsError> {
    if !(lambda > 0.0) {
        return if lambda == 0.0 {
            Ok(ExactValue::new(1.0, 0.0, "laplace_xi"))
        } else {
            Err(AnalyticsError::Domain(lambda))
        };
    }
    let target = -(-lambda).exp_m1();
    // 1 - r(1 - t) increases from 0 to 1 in t; bisect in log t.
    let (mut lo, mut hi) = (1e-300f64, 1.0f64);
    let mut err = 0.0;
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        let g = hitting_gf_complement(mid)?;
        err = g.err;
        if g.value < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo - 1.0 < 1e-13 {
            break;
        }
    }
    if hi / lo - 1.0 >= 1e-12 {
        return Err(AnalyticsError::Root);
    }
    let t = (lo * hi).sqrt();
    let value = 1.0 / (1.0 - t);
    // Width of the bracket plus the quadrature error pushed through dt/dg.
    let slope = hitting_gf_complement(t)?.value / t;
    let dt = (hi - lo) + err / slope.max(f64::MIN_POSITIVE);
    Ok(ExactValue::new(value, dt * value * value, "laplace_xi"))
}

/// `f(t)` with `e^{-f(t)} = e^{-t}/(1 + √(1 - e^{-2t}))`.
pub fn f_helper(t: f64) -> f64 {
    t + (-(-2.0 * t).exp_m1()).sqrt().ln_1p()
}

/// `E[e^{-λ H*}]` for a future block:
/// `(4/π³) e^λ ∫∫ L(u) L(v) u/(u + ε) du dv/(u + v)`, `ε = (2/π)(F_ξ(λ) - 1)`.
pub fn laplace_hpf(lambda: f64, spec: QuadratureSpec) -> Result<ExactValue, AnalyticsError> {
    if !(lambda >= 0.0) {
        return Err(AnalyticsError::Domain(lambda));
    }
    let fx = laplace_xi(lambda)?;
    let eps = 2.0 / PI * (fx.value - 1.0);
    let inner_spec = QuadratureSpec { abs_tol: spec.abs_tol * 1e-2, rel_tol: 1e-12, max_subdiv: 2000 };
    let mut inner_err = 0.0f64;
    let mut failure = None;
    let mut outer_pts = points(1.0);
    if eps > 0.0 {
        outer_pts.extend(points(eps));
        outer_pts.sort_by(f64::total_cmp);
        outer_pts.dedup();
    }
    let (v, e) = integrate(
        |u| {
            if u == 0.0 {
                return 0.0;
            }
            match integrate(|v| arcsech(v) / (u + v), &points(u), inner_spec) {
                Ok((j, je)) => {
                    inner_err = inner_err.max(je);
                    arcsech(u) * u / (u + eps) * j
                }
                Err(q) => {
                    failure = Some(q);
                    0.0
                }
            }
        },
        &outer_pts,
        spec,
    )?;
    if let Some(q) = failure {
        return Err(q.into());
    }
    let k = 4.0 / (PI * PI * PI) * lambda.exp();
    // The inner error enters through ∫ L(u) du = π/2.
    let err = k * (e + inner_err * PI / 2.0) + fx.err;
    Ok(ExactValue::new(k * v, err, "laplace_HPF"))
}

/// Laplace transforms of the two stable limits: `exp(π² λ ln λ)` and
/// `exp(-λ ln λ)`.
pub fn stable_limit_laplace(lambda: f64) -> (f64, f64) {
    let x = lambda * lambda.ln();
    ((PI * PI * x).exp(), (-x).exp())
}

/// `∫₀¹ L(u)/(ε + u) du - [½ln²(1/ε) + ln2·ln(1/ε)]`, which tends to a
/// constant as `ε → 0`.
pub fn log_integral_remainder(eps: f64) -> Result<ExactValue, AnalyticsError> {
    if !(eps > 0.0) {
        return Err(AnalyticsError::Domain(eps));
    }
    let spec = QuadratureSpec { abs_tol: 1e-12, rel_tol: 1e-13, max_subdiv: 4000 };
    let (v, e) = integrate(|u| arcsech(u) / (eps + u), &points(eps), spec)?;
    let l = -eps.ln();
    Ok(ExactValue::new(v - 0.5 * l * l - LN_2 * l, e, "log_integral_remainder"))
}

/// The limit of [`log_integral_remainder`]:
/// `∫₀¹ ln((1 + √(1-u²))/2) du/u + π²/6`.
pub fn log_integral_limit() -> Result<ExactValue, AnalyticsError> {
    let (v, e) = integrate(
        |u| if u == 0.0 { 0.0 } else { (0.5 * (1.0 + ((1.0 - u) * (1.0 + u)).sqrt())).ln() / u },
        &[0.0, 0.5, 1.0],
        QuadratureSpec::default(),
    )?;
    Ok(ExactValue::new(v + PI * PI / 6.0, e, "log_integral_limit"))
}

/// `1/√2`, the value of `W` at the right end of the cut.
pub fn c0() -> f64 {
    FRAC_1_SQRT_2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arcsech_values() {
        assert!((arcsech(1.0)).abs() < 1e-15);
        assert!((arcsech(0.5) - (2.0 + 3f64.sqrt()).ln()).abs() < 1e-14);
    }

    #[test]
    fn decay_sign() {
        assert!(decay(0.9, 3) < 0.0);
        assert!(decay(0.9, 4) > 0.0);
        assert!((decay(0.1, 5) - (1.0 - PI * 0.05).powi(5)).abs() < 1e-15);
    }

    #[test]
    fn stable_forms() {
        assert_eq!(stable_limit_laplace(1.0), (1.0, 1.0));
        let e = std::f64::consts::E;
        assert!((stable_limit_laplace(e).0 - (PI * PI * e).exp()).abs() < 1e-6 * (PI * PI * e).exp());
    }
}
