//! Bloch-type targets: bounds on B^α → B^α, the exact norm H∞ → B and the
//! norm H∞_α → B^{α+1}.

use serde::Serialize;

use super::{sup_over_complement, FormulaId, SupOptions, SupSearchResult};
use crate::error::{domain, Result};
use crate::quadrature::{Backend, Integrator, Node, Segment, SingularIntegrand};
use crate::special::reflection;

fn integrator() -> Integrator {
    Integrator::default().with_backend(Backend::Auto)
}

/// `(∫₀¹ (1−t²)^(1−α) dt − 1) / (2(α−1)) + π / sin((α−1)π)`.
pub fn th52_lower(alpha: f64) -> Result<f64> {
    FormulaId::Th52Lower.check(alpha)?;
    let e = 1.0 - alpha;
    let integrand = SingularIntegrand::new(|n: Node| (1.0 + n.t).powf(e), 0.0, e);
    let i = integrator().integrate(&integrand)?.value;
    Ok((i - 1.0) / (2.0 * (alpha - 1.0)) + reflection(alpha - 1.0)?.value)
}

/// `2^α π / sin((α−1)π) + 1/(2−α)`.
pub fn th53_upper(alpha: f64) -> Result<f64> {
    FormulaId::Th53Upper.check(alpha)?;
    Ok(2f64.powf(alpha) * reflection(alpha - 1.0)?.value + 1.0 / (2.0 - alpha))
}

pub fn th61_value() -> f64 {
    3.0
}

fn segments_toward_one(rc: f64) -> Vec<Segment> {
    if rc < 0.25 {
        vec![
            Segment::linear(0.0, 0.5),
            Segment::log_complement(0.5, rc),
            Segment::linear_complement(rc, 0.0),
        ]
    } else {
        vec![Segment::linear(0.0, 1.0)]
    }
}

/// `1 + (1 − r²) ∫₀¹ (1 − tr)^(−2) dt` at `r = 1 − rc`, by quadrature.
pub fn th61_upper_quantity(rc: f64) -> Result<f64> {
    if !(rc > 0.0 && rc <= 1.0) {
        return domain(format!("1 − r must lie in (0, 1], got {rc}"));
    }
    let r = 1.0 - rc;
    // 1 − tr = rc + r(1 − t)
    let integrand = SingularIntegrand::new(|n: Node| (rc + r * n.tc).powi(-2), 0.0, 0.0);
    let i = integrator().integrate_segments(&integrand, &segments_toward_one(rc))?;
    Ok(1.0 + rc * (2.0 - rc) * i.value)
}

/// `1 + (1+r)/r − ((1−r²)/r²) log(1/(1−r))`, the value for `f = 1`.
pub fn th61_lower_quantity(rc: f64) -> Result<f64> {
    if !(rc > 0.0 && rc < 1.0) {
        return domain(format!("1 − r must lie in (0, 1), got {rc}"));
    }
    let r = 1.0 - rc;
    Ok(1.0 + (1.0 + r) / r - rc * (2.0 - rc) / (r * r) * (-rc.ln()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Th61Certificate {
    pub value: f64,
    pub upper_sup: SupSearchResult,
    pub lower_probe_r: f64,
    pub lower_probe: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Numerical confirmation of the exact value 3: the upper quantity is
/// maximised over `1 − r = 10^(−u)`, `u ∈ [0, 12]`, and the `f = 1`
/// quantity is evaluated at `r = 1 − 10⁻⁶`.
pub fn th61_certificate(tol: f64) -> Result<Th61Certificate> {
    let opts = SupOptions {
        nodes: 32,
        u_max: 12.0,
        refine: true,
        local_maxima: 1,
    };
    let (value, rc, samples_used) = sup_over_complement(th61_upper_quantity, &opts)?;
    let upper_sup = SupSearchResult {
        value,
        arg_r: 1.0 - rc,
        arg_complement: rc,
        boundary_attained: rc <= 1.000_001e-12,
        samples_used,
        limit: Some(3.0),
    };
    let probe_rc = 1e-6;
    let lower_probe = th61_lower_quantity(probe_rc)?;
    let passed = (value - 3.0).abs() <= tol && lower_probe >= 3.0 - 1e-3 && lower_probe <= 3.0 + tol;
    Ok(Th61Certificate {
        value: th61_value(),
        upper_sup,
        lower_probe_r: 1.0 - probe_rc,
        lower_probe,
        tolerance: tol,
        passed,
    })
}

/// Value of a norm formula in one of three regimes.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BoundReport {
    Exact { value: f64 },
    Bracket { lower: f64, upper: f64 },
    Unbounded { regime: String },
}

/// `∫₀¹ (1 − t²)^(−α) dt`.
pub fn th71_first_term(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("α must lie in (0, 1), got {alpha}"));
    }
    let integrand = SingularIntegrand::new(|n: Node| (1.0 + n.t).powf(-alpha), 0.0, -alpha);
    Ok(integrator().integrate(&integrand)?.value)
}

/// Norm of H∞_α → B^{α+1}: exact for `α ≤ ⅔`, a bracket for `⅔ < α < 1`,
/// unbounded for `α ≥ 1`.
pub fn th71_value(alpha: f64) -> Result<BoundReport> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return domain(format!("α must be positive, got {alpha}"));
    }
    if alpha >= 1.0 {
        return Ok(BoundReport::Unbounded {
            regime: format!("α ≥ 1 for H∞_α → B^(α+1) (α = {alpha})"),
        });
    }
    let first = th71_first_term(alpha)?;
    let two_term = first + 2.0 * alpha * reflection(alpha)?.value;
    if alpha <= 2.0 / 3.0 {
        return Ok(BoundReport::Exact { value: two_term });
    }
    let integrand = SingularIntegrand::new(|_: Node| 1.0, -alpha, 1.0 - alpha);
    let tail = integrator().integrate(&integrand)?.value;
    Ok(BoundReport::Bracket {
        lower: two_term,
        upper: first + 2.0 * tail,
    })
}

/// `(1+r)^(α+1) ∫₀¹ (1−t)(1−rt)^(2α−1) / (t^α (2−(1+r)t)^α) dt` at
/// `r = 1 − rc`; increases to `2B(1−α, 1+α) = 2απ/sin(απ)` as `r → 1`.
pub fn th71_radial_integral(alpha: f64, rc: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("α must lie in (0, 1), got {alpha}"));
    }
    if !(rc >= 0.0 && rc <= 1.0) {
        return domain(format!("1 − r must lie in [0, 1], got {rc}"));
    }
    let r = 1.0 - rc;
    let smooth = |n: Node| {
        let a = rc + r * n.tc;
        let b = 2.0 * n.tc + rc * n.t;
        n.tc * a.powf(2.0 * alpha - 1.0) * b.powf(-alpha)
    };
    let segments = if rc > 0.0 {
        segments_toward_one(rc)
    } else {
        vec![Segment::linear(0.0, 1.0)]
    };
    let integrand = SingularIntegrand::new(smooth, -alpha, 0.0);
    let i = integrator().integrate_segments(&integrand, &segments)?;
    Ok((2.0 - rc).powf(alpha + 1.0) * i.value)
}

/// `∂/∂r` of `(1−rt)^(2α−1) / (2−(1+r)t)^α`.
pub fn th71_premise_slope(alpha: f64, r: f64, t: f64) -> f64 {
    let a = 1.0 - r * t;
    let b = 2.0 - (1.0 + r) * t;
    t * a.powf(2.0 * alpha - 2.0)
        * b.powf(-alpha - 1.0)
        * ((1.0 - alpha) * a + (1.0 - 2.0 * alpha) * (1.0 - t))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PremiseCheck {
    pub alpha: f64,
    pub grid: usize,
    pub min_slope: f64,
    pub at_r: f64,
    pub at_t: f64,
    pub passed: bool,
}

/// Minimum of [`th71_premise_slope`] over the interior grid
/// `(i/(n+1), j/(n+1))`, `1 ≤ i, j ≤ n`; passes when it is `≥ −1e−10`.
pub fn th71_premise_min_slope(alpha: f64, grid: usize) -> PremiseCheck {
    let h = 1.0 / (grid + 1) as f64;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 1..=grid {
        for j in 1..=grid {
            let (r, t) = (i as f64 * h, j as f64 * h);
            let s = th71_premise_slope(alpha, r, t);
            if s < best.0 {
                best = (s, r, t);
            }
        }
    }
    PremiseCheck {
        alpha,
        grid,
        min_slope: best.0,
        at_r: best.1,
        at_t: best.2,
        passed: best.0 >= -1e-10,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::beta;
    use std::f64::consts::PI;

    #[test]
    fn bloch_alpha_bounds_at_three_halves() {
        let lo = th52_lower(1.5).unwrap();
        assert!((lo - (1.5 * PI - 1.0)).abs() < 1e-10, "{lo}");
        let up = th53_upper(1.5).unwrap();
        assert!((up - (2.0 * 2f64.sqrt() * PI + 2.0)).abs() < 1e-12);
        assert!((up - 10.8858).abs() < 1e-4);
        assert!(th52_lower(1.0).is_err() && th53_upper(2.0).is_err());
    }

    #[test]
    fn bloch_alpha_bounds_blow_up_at_ends() {
        assert!(th52_lower(1.0 + 1e-6).unwrap() > 1e5);
        assert!(th52_lower(2.0 - 1e-3).unwrap() > 1e3);
        assert!(th53_upper(1.0 + 1e-6).unwrap() > 1e5);
    }

    #[test]
    fn hardy_to_bloch_quantities() {
        for &rc in &[1.0, 0.5, 1e-3, 1e-9] {
            let q = th61_upper_quantity(rc).unwrap();
            assert!((q - (3.0 - rc)).abs() < 1e-10, "rc={rc}: {q}");
        }
        let lower = th61_lower_quantity(1e-6).unwrap();
        assert!(lower >= 3.0 - 1e-3 && lower < 3.0);
        let c = th61_certificate(1e-8).unwrap();
        assert!(c.passed, "{c:?}");
        assert!(c.upper_sup.boundary_attained);
    }

    #[test]
    fn korenblum_to_bloch_regimes() {
        match th71_value(0.5).unwrap() {
            BoundReport::Exact { value } => assert!((value - 1.5 * PI).abs() < 1e-10),
            other => panic!("{other:?}"),
        }
        match th71_value(0.8).unwrap() {
            BoundReport::Bracket { lower, upper } => assert!(lower < upper),
            other => panic!("{other:?}"),
        }
        assert!(matches!(th71_value(1.0).unwrap(), BoundReport::Unbounded { .. }));
        assert!(th71_value(0.0).is_err());
    }

    #[test]
    fn bracket_upper_exceeds_exact_at_two_thirds() {
        let exact = match th71_value(2.0 / 3.0).unwrap() {
            BoundReport::Exact { value } => value,
            other => panic!("{other:?}"),
        };
        match th71_value(2.0 / 3.0 + 1e-9).unwrap() {
            BoundReport::Bracket { upper, .. } => assert!(upper >= exact),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn radial_integral_increases_to_beta_limit() {
        for &a in &[0.3, 0.5, 2.0 / 3.0] {
            let limit = 2.0 * beta(1.0 - a, 1.0 + a).unwrap().value;
            assert!((limit - 2.0 * a * PI / (a * PI).sin()).abs() < 1e-12);
            let at_one = th71_radial_integral(a, 0.0).unwrap();
            assert!((at_one - limit).abs() < 1e-9, "α={a}: {at_one} vs {limit}");
            let mut prev = 0.0;
            for k in 0..=8 {
                let v = th71_radial_integral(a, 10f64.powi(-k)).unwrap();
                assert!(v >= prev - 1e-12 && v <= limit + 1e-9);
                prev = v;
            }
            assert!((prev - limit).abs() < 1e-6);
        }
    }

    #[test]
    fn premise_holds_up_to_two_thirds() {
        for &a in &[0.3, 0.6, 2.0 / 3.0] {
            let c = th71_premise_min_slope(a, 100);
            assert!(c.passed, "{c:?}");
        }
        assert!(!th71_premise_min_slope(0.9, 100).passed);
    }
}
