//! Kernels on the logarithmically weighted Korenblum space.
//!
//! Throughout, `rc = 1 − r`, `tc = 1 − t` and `D = 1 − (1 − t) r = rc + r t`,
//! so that `1 − φ_t(r)² = rc · tc · (D + t) / D²` keeps full relative
//! precision as `r → 1`.

use serde::Serialize;

use super::{sup_over_complement, FormulaId, SupOptions, SupSearchResult};
use crate::error::{domain, Error, Result};
use crate::optimize::extrapolate_to_zero;
use crate::quadrature::{Backend, Integrator, Node, Segment, SingularIntegrand};
use crate::special::reflection;

/// Complements `1 − r` used to extrapolate `r → 1` limits. The expansion in
/// `s = 1/ln(1/(1−r))` has coefficients growing like `(1−α)^(−k)`, so a
/// degree-8 fit over `s ∈ [1/690, 1/138]` is needed near `α = 1`.
pub const DEEP_COMPLEMENTS: [f64; 9] = [1e-60, 1e-90, 1e-120, 1e-150, 1e-180, 1e-210, 1e-240, 1e-270, 1e-300];

fn integrator() -> Integrator {
    Integrator::default().with_backend(Backend::Auto)
}

fn check_unit(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("α must lie in (0, 1), got {alpha}"));
    }
    Ok(())
}

fn check_complement(rc: f64) -> Result<()> {
    if !(rc > 0.0 && rc <= 1.0) {
        return domain(format!("1 − r must lie in (0, 1], got {rc}"));
    }
    Ok(())
}

/// Segments resolving the scale `t ≈ 1 − r` where `D` turns over.
pub(crate) fn radial_segments(rc: f64) -> Vec<Segment> {
    if rc < 0.25 {
        vec![
            Segment::linear(0.0, rc),
            Segment::logarithmic(rc, 0.5),
            Segment::linear(0.5, 1.0),
        ]
    } else {
        vec![Segment::linear(0.0, 1.0)]
    }
}

/// `log(2 e^{1/α} / (1 − φ_t(r)²))`.
fn composed_log(alpha: f64, rc: f64, n: Node, d: f64) -> f64 {
    1.0 / alpha + std::f64::consts::LN_2 - rc.ln() - n.tc.ln() - (d + n.t).ln() + 2.0 * d.ln()
}

/// The sup-integral kernel without its `(1 − t)^(−α)` factor.
fn th31_smooth(alpha: f64, rc: f64, n: Node) -> f64 {
    let r = 1.0 - rc;
    let d = rc + r * n.t;
    let l = composed_log(alpha, rc, n, d);
    (alpha * (1.0 + r).ln() + (2.0 * alpha - 1.0) * d.ln() - alpha * (d + n.t).ln()).exp() / l
}

/// Integrand of the sup expression for the norm H∞_{α,log} → H∞_α:
///
/// `(1+r)^α D^(2α−1) / ((1−t)^α (D+t)^α log(2e^{1/α} / (1 − φ_t(r)²)))`.
pub fn th31_kernel(alpha: f64, r: f64, t: f64) -> Result<f64> {
    check_unit(alpha)?;
    if !(0.0..1.0).contains(&r) {
        return domain(format!("r must lie in [0, 1), got {r}"));
    }
    if !(t > 0.0 && t < 1.0) {
        return domain(format!("t must lie in (0, 1), got {t}"));
    }
    let n = Node::new(t);
    Ok(th31_smooth(alpha, 1.0 - r, n) * n.tc.powf(-alpha))
}

/// `∫₀¹` of [`th31_kernel`] at `r = 1 − rc`.
pub fn th31_at_complement(alpha: f64, rc: f64) -> Result<f64> {
    check_unit(alpha)?;
    check_complement(rc)?;
    let integrand = SingularIntegrand::new(|n: Node| th31_smooth(alpha, rc, n), 0.0, -alpha);
    Ok(integrator().integrate_segments(&integrand, &radial_segments(rc))?.value)
}

/// The `r = 0` value `∫₀¹ dt / ((1−t²)^α log(2e^{1/α}/(1−t²)))`.
pub fn th31_lower(alpha: f64) -> Result<f64> {
    check_unit(alpha)?;
    let integrand = SingularIntegrand::new(|n: Node| (1.0 + n.t).powf(-alpha), 0.0, -alpha);
    let log = |n: Node| {
        1.0 / alpha + std::f64::consts::LN_2 - n.tc.ln() - (1.0 + n.t).ln()
    };
    Ok(integrator().integrate_with_log(&integrand, log)?.value)
}

/// Limit of `value(rc)` as `rc → 0`, from polynomial extrapolation in
/// `s = 1 / log(1/rc)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extrapolation {
    pub value: f64,
    pub error: f64,
    pub complements: Vec<f64>,
    pub samples: Vec<f64>,
}

fn extrapolate_log<F>(f: F, complements: &[f64]) -> Result<Extrapolation>
where
    F: Fn(f64) -> Result<f64>,
{
    let samples = complements.iter().map(|&rc| f(rc)).collect::<Result<Vec<_>>>()?;
    let s: Vec<f64> = complements.iter().map(|rc| -1.0 / rc.ln()).collect();
    let (value, error) = extrapolate_to_zero(&s, &samples)?;
    Ok(Extrapolation {
        value,
        error,
        complements: complements.to_vec(),
        samples,
    })
}

fn sup_with_limit<F>(f: F, opts: &SupOptions, limit: Extrapolation) -> Result<SupSearchResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let (value, rc, samples) = sup_over_complement(f, opts)?;
    let tail = 10f64.powf(-opts.u_max);
    let samples_used = samples + limit.samples.len();
    if limit.value > value {
        return Ok(SupSearchResult {
            value: limit.value,
            arg_r: 1.0,
            arg_complement: 0.0,
            boundary_attained: true,
            samples_used,
            limit: Some(limit.value),
        });
    }
    Ok(SupSearchResult {
        value,
        arg_r: 1.0 - rc,
        arg_complement: rc,
        boundary_attained: rc <= tail * 1.000_001,
        samples_used,
        limit: Some(limit.value),
    })
}

/// Sup over `r` of [`th31_at_complement`], searched in `u = −log₁₀(1 − r)`
/// together with an extrapolated `r → 1` limit.
pub fn th31_norm(alpha: f64) -> Result<SupSearchResult> {
    th31_norm_with(alpha, &SupOptions::default())
}

pub fn th31_norm_with(alpha: f64, opts: &SupOptions) -> Result<SupSearchResult> {
    FormulaId::Th31Exact.check(alpha)?;
    let limit = extrapolate_log(|rc| th31_at_complement(alpha, rc), &DEEP_COMPLEMENTS)?;
    sup_with_limit(|rc| th31_at_complement(alpha, rc), opts, limit)
}

/// `(3α − 2) / (4α − 2)`, the `t` below which the critical-point branch
/// applies when `α > ⅔`.
pub fn threshold(alpha: f64) -> Result<f64> {
    if !(alpha > 0.5 && alpha < 1.0) {
        return domain(format!("threshold requires ½ < α < 1, got {alpha}"));
    }
    Ok((3.0 * alpha - 2.0) / (4.0 * alpha - 2.0))
}

fn check_pair(alpha: f64, t: f64) -> Result<()> {
    if !(t > 0.0 && t < 1.0) {
        return domain(format!("t must lie in (0, 1), got {t}"));
    }
    check_unit(alpha)
}

fn discriminant(alpha: f64, t: f64) -> Result<f64> {
    let d = (1.0 - alpha).powi(2) + 2.0 * alpha * t * (2.0 * alpha - 1.0);
    if d >= 0.0 {
        Ok(d)
    } else if d >= -1e-14 {
        Ok(0.0)
    } else {
        Err(Error::Internal(format!(
            "negative discriminant {d} at α = {alpha}, t = {t}"
        )))
    }
}

/// Critical point `x₀ = (α + 2αt − t − √Δ)/(2α − 1)` with
/// `Δ = 4α²t − 2αt + α² − 2α + 1`.
pub fn critical_point(alpha: f64, t: f64) -> Result<f64> {
    check_pair(alpha, t)?;
    if !(alpha > 0.5) {
        return domain(format!("critical point requires α > ½, got {alpha}"));
    }
    let sq = discriminant(alpha, t)?.sqrt();
    Ok((alpha + 2.0 * alpha * t - t - sq) / (2.0 * alpha - 1.0))
}

/// `m = 1 − x₀`, rationalised so it keeps relative precision as `t → 0`.
fn critical_gap(alpha: f64, t: f64) -> Result<f64> {
    let sq = discriminant(alpha, t)?.sqrt();
    Ok(t * (2.0 * alpha / (sq + 1.0 - alpha) - 1.0))
}

fn ln_first_branch(alpha: f64, n: Node) -> f64 {
    (alpha - 1.0) * n.t.ln() - alpha * n.tc.ln()
}

fn ln_critical_branch(alpha: f64, n: Node) -> Result<f64> {
    let m = critical_gap(alpha, n.t)?;
    let inner = (2.0 - n.t - m).ln() - 2.0 * n.tc.ln() - (m + n.t).ln();
    Ok((2.0 * alpha - 1.0) * m.ln() + alpha * inner)
}

/// Value of the supremum expression at the critical point `x₀`.
pub fn le32_g(alpha: f64, t: f64) -> Result<f64> {
    check_pair(alpha, t)?;
    if !(alpha > 0.5) {
        return domain(format!("critical branch requires α > ½, got {alpha}"));
    }
    Ok(ln_critical_branch(alpha, Node::new(t))?.exp())
}

fn uses_critical_branch(alpha: f64, t: f64) -> bool {
    alpha > 2.0 / 3.0 && t < (3.0 * alpha - 2.0) / (4.0 * alpha - 2.0)
}

fn ln_branch(alpha: f64, n: Node) -> Result<f64> {
    if uses_critical_branch(alpha, n.t) {
        ln_critical_branch(alpha, n)
    } else {
        Ok(ln_first_branch(alpha, n))
    }
}

/// `sup_z |1−(1−t)z|^(2α−1) ((1−|z|²)/(|1−(1−t)z|² − t²))^α`, piecewise in
/// `t` around [`threshold`].
pub fn le32_sup(alpha: f64, t: f64) -> Result<f64> {
    FormulaId::Le32Sup.check(alpha)?;
    check_pair(alpha, t)?;
    Ok(ln_branch(alpha, Node::new(t))?.exp())
}

/// `log((2−t)² e^{1/α} / (2 − 2t))`.
pub fn le33_log_factor(alpha: f64, t: f64) -> Result<f64> {
    check_pair(alpha, t)?;
    Ok(log_factor(alpha, Node::new(t)))
}

fn log_factor(alpha: f64, n: Node) -> f64 {
    1.0 / alpha + 2.0 * (1.0 + n.tc).ln() - std::f64::consts::LN_2 - n.tc.ln()
}

/// Bound on the weighted composition `T_t` from H∞_{α,log} to H∞_α. For
/// `α ≤ ½` the first branch is used.
pub fn le33_tt_bound(alpha: f64, t: f64) -> Result<f64> {
    check_pair(alpha, t)?;
    let n = Node::new(t);
    Ok(ln_branch(alpha, n)?.exp() / log_factor(alpha, n))
}

/// `∫₀¹` of [`le33_tt_bound`], split at the threshold when `α > ⅔`.
pub fn th34_upper(alpha: f64) -> Result<f64> {
    FormulaId::Th34Upper.check(alpha)?;
    let smooth = |n: Node| -> Result<f64> {
        let ln = ln_branch(alpha, n)? - ln_first_branch(alpha, n);
        Ok(ln.exp() / log_factor(alpha, n))
    };
    let segments = if alpha > 2.0 / 3.0 {
        let ts = threshold(alpha)?;
        vec![Segment::linear(0.0, ts), Segment::linear(ts, 1.0)]
    } else {
        vec![Segment::linear(0.0, 1.0)]
    };
    Ok(integrator()
        .integrate_dyn(&smooth, alpha - 1.0, -alpha, &segments)?
        .value)
}

/// `log(2e^{1/α}/(1 − r²))`.
fn radial_log(alpha: f64, rc: f64) -> f64 {
    1.0 / alpha + std::f64::consts::LN_2 - rc.ln() - (2.0 - rc).ln()
}

/// Sup-integral kernel for H∞_{α,log} → H∞_{α,log} at `r = 1 − rc`: the
/// H∞_α kernel integral times the radial log weight.
pub fn th41_at_complement(alpha: f64, rc: f64) -> Result<f64> {
    Ok(th31_at_complement(alpha, rc)? * radial_log(alpha, rc))
}

/// `π / sin(απ)`, the `r → 1` limit of [`th41_at_complement`].
pub fn th41_lower(alpha: f64) -> Result<f64> {
    FormulaId::Th41Lower.check(alpha)?;
    Ok(reflection(alpha)?.value)
}

/// Extrapolated `r → 1` limit of [`th41_at_complement`] from the given
/// complements (at least two).
pub fn th41_limit(alpha: f64, complements: &[f64]) -> Result<Extrapolation> {
    check_unit(alpha)?;
    if complements.len() < 2 {
        return domain("limit extrapolation needs at least two radii");
    }
    for &rc in complements {
        check_complement(rc)?;
    }
    extrapolate_log(|rc| th41_at_complement(alpha, rc), complements)
}

pub fn th41_norm(alpha: f64) -> Result<SupSearchResult> {
    th41_norm_with(alpha, &SupOptions::default())
}

pub fn th41_norm_with(alpha: f64, opts: &SupOptions) -> Result<SupSearchResult> {
    FormulaId::Th41Exact.check(alpha)?;
    let limit = th41_limit(alpha, &DEEP_COMPLEMENTS)?;
    sup_with_limit(|rc| th41_at_complement(alpha, rc), opts, limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{Backend, DEFAULT_TOL_ABS, DEFAULT_TOL_REL};
    use std::f64::consts::PI;

    #[test]
    fn kernel_at_origin_matches_lower_integrand() {
        let v = th31_kernel(0.5, 0.0, 0.5).unwrap();
        let expect = 1.0 / (0.75f64.sqrt() * (2.0 * 2f64.exp() / 0.75).ln());
        assert!((v - expect).abs() < 1e-15);
        for &(a, t) in &[(0.2, 0.1), (0.7, 0.9), (0.95, 0.999)] {
            let v = th31_kernel(a, 0.0, t).unwrap();
            let w = 1.0 / ((1.0 - t * t).powf(a) * (2.0 * (1.0 / a).exp() / (1.0 - t * t)).ln());
            assert!((v - w).abs() < 1e-12 * w);
        }
        assert!(th31_kernel(0.5, 1.0, 0.3).is_err());
        assert!(th31_kernel(0.5, 0.3, 1.0).is_err());
    }

    #[test]
    fn lower_value_and_origin_agree() {
        let lo = th31_lower(0.5).unwrap();
        assert!(lo < PI / 2.0);
        assert!((th31_at_complement(0.5, 1.0).unwrap() - lo).abs() < 1e-10);
        // frozen from scipy quad on the logit-transformed integrand
        assert!((lo - 0.435_85).abs() < 1e-5, "{lo}");
    }

    #[test]
    fn lower_value_agrees_across_backends() {
        let integrand = SingularIntegrand::new(|n: Node| (1.0 + n.t).powf(-0.5), 0.0, -0.5);
        let log = |n: Node| 2.0 + std::f64::consts::LN_2 - n.tc.ln() - (1.0 + n.t).ln();
        let de = Integrator::with_tolerances(DEFAULT_TOL_ABS, DEFAULT_TOL_REL)
            .integrate_with_log(&integrand, log)
            .unwrap()
            .value;
        let gj = Integrator::with_tolerances(DEFAULT_TOL_ABS, DEFAULT_TOL_REL)
            .with_backend(Backend::GaussJacobi)
            .integrate_with_log(&integrand, log)
            .unwrap()
            .value;
        assert!((de - gj).abs() < 1e-9);
    }

    #[test]
    fn kernel_integral_agrees_across_backends_near_boundary() {
        for &rc in &[0.3, 1e-3, 1e-40] {
            let integrand = SingularIntegrand::new(|n: Node| th31_smooth(0.7, rc, n), 0.0, -0.7);
            let de = integrator()
                .integrate_segments(&integrand, &radial_segments(rc))
                .unwrap()
                .value;
            let gj = integrator()
                .with_backend(Backend::GaussJacobi)
                .integrate_segments(&integrand, &radial_segments(rc))
                .unwrap()
                .value;
            assert!((de - gj).abs() < 1e-9 * de, "rc={rc}: {de} vs {gj}");
        }
    }

    #[test]
    fn threshold_and_critical_point() {
        assert!((threshold(0.8).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let x0 = critical_point(0.8, 0.2).unwrap();
        let expect = (0.8 + 0.32 - 0.2 - 0.232f64.sqrt()) / 0.6;
        assert!((x0 - expect).abs() < 1e-14);
        assert!((critical_gap(0.8, 0.2).unwrap() - (1.0 - x0)).abs() < 1e-14);
        assert!(threshold(0.5).is_err());
    }

    #[test]
    fn first_branch_below_two_thirds() {
        for &t in &[0.01, 0.3, 0.77, 0.999] {
            let v = le32_sup(0.6, t).unwrap();
            let w = t.powf(-0.4) / (1.0 - t).powf(0.6);
            assert!((v - w).abs() < 1e-12 * w);
        }
        assert!(le32_sup(0.5, 0.3).is_err());
    }

    #[test]
    fn critical_branch_matches_direct_formula() {
        let (a, t) = (0.8, 0.2);
        let x0 = critical_point(a, t).unwrap();
        let direct = (1.0 - x0).powf(2.0 * a - 1.0)
            * ((1.0 - (x0 / (1.0 - t)).powi(2)) / ((1.0 - x0).powi(2) - t * t)).powf(a);
        let v = le32_sup(a, t).unwrap();
        assert!((v - direct).abs() < 1e-12 * v);
        assert!((le32_g(a, t).unwrap() - v).abs() < 1e-15 * v);
    }

    #[test]
    fn branches_meet_at_threshold() {
        for &a in &[0.7, 0.8, 0.9, 0.97] {
            let ts = threshold(a).unwrap();
            let n = Node::new(ts);
            let g = ln_critical_branch(a, n).unwrap().exp();
            let f = ln_first_branch(a, n).exp();
            assert!((g - f).abs() < 1e-8, "α={a}: {g} vs {f}");
            let below = le33_tt_bound(a, ts * (1.0 - 1e-12)).unwrap();
            let above = le33_tt_bound(a, ts).unwrap();
            assert!((below - above).abs() < 1e-8);
        }
    }

    #[test]
    fn tt_bound_examples() {
        let v = le33_tt_bound(0.5, 0.5).unwrap();
        assert!((v - 2.0 / (2.0 + 2.25f64.ln())).abs() < 1e-14);
        assert!((v - 0.711_508_236_121_248_6).abs() < 1e-15);
        let second = le33_tt_bound(0.8, 0.2).unwrap();
        let expect = le32_sup(0.8, 0.2).unwrap() / (1.8f64.powi(2) * 1.25f64.exp() / 1.6).ln();
        assert!((second - expect).abs() < 1e-14 * expect);
        assert!((le33_log_factor(0.5, 0.5).unwrap() - (2.0 + 2.25f64.ln())).abs() < 1e-14);
    }

    #[test]
    fn upper_bound_matches_oracle_values() {
        // frozen from 30-digit mpmath after substituting t = s^20 at both ends
        for &(a, v) in &[
            (0.3, 0.918_815_261_600_670_0),
            (0.5, 0.998_667_514_917_518_4),
            (0.7, 1.249_897_587_246_922_5),
            (0.9, 2.094_118_826_470_703_7),
            (0.95, 2.719_090_847_055_995_3),
        ] {
            let u = th34_upper(a).unwrap();
            assert!((u - v).abs() < 1e-10 * v, "α={a}: {u}");
        }
    }

    #[test]
    fn upper_bound_is_continuous_at_two_thirds() {
        let single = th34_upper(2.0 / 3.0).unwrap();
        let split = th34_upper(2.0 / 3.0 + 1e-9).unwrap();
        assert!((single - split).abs() < 1e-5);
    }

    #[test]
    fn log_weighted_lower_bound() {
        assert!((th41_lower(0.5).unwrap() - PI).abs() < 1e-15);
        assert!(th41_lower(1.0).is_err());
    }

    #[test]
    fn deep_extrapolation_reaches_reflection_limit() {
        for &a in &[0.1, 0.3, 0.5, 0.7, 0.9] {
            let lim = th41_limit(a, &DEEP_COMPLEMENTS).unwrap();
            let target = PI / (a * PI).sin();
            assert!((lim.value - target).abs() < 1e-7 * target, "α={a}: {lim:?}");
        }
    }
}
