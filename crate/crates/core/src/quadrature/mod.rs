//! Integration over `[0, 1]` of integrands with algebraic endpoint
//! singularities, `g(t) · t^a · (1−t)^b` with `a, b > −1`, where `g` may
//! carry further logarithmic endpoint behaviour.
//!
//! Callers state the exponents `a` and `b` explicitly; nothing is inferred
//! from samples. The smooth part receives a [`Node`] carrying both `t` and
//! `1 − t`, each computed without cancellation, so evaluators can stay
//! accurate when `t` is within `1e−300` of either endpoint.
//!
//! Two independent backends are provided:
//!
//! * [`Backend::DoubleExponential`] (default): tanh–sinh substitution with
//!   level-by-level step halving.
//! * [`Backend::GaussJacobi`]: composite Gauss rules on a mesh graded
//!   geometrically towards both endpoints, with Jacobi-weighted end panels.

mod gauss_jacobi;
mod tanh_sinh;

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};

pub use gauss_jacobi::{gauss_jacobi_rule, GaussRule};

/// Default absolute tolerance.
pub const DEFAULT_TOL_ABS: f64 = 1e-12;
/// Default relative tolerance.
pub const DEFAULT_TOL_REL: f64 = 1e-10;
/// Default evaluation budget per integral.
pub const DEFAULT_MAX_EVALUATIONS: usize = 2_000_000;

/// A quadrature abscissa: `t` and its complement `tc = 1 − t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub t: f64,
    pub tc: f64,
}

impl Node {
    pub fn new(t: f64) -> Self {
        Node { t, tc: 1.0 - t }
    }
}

/// Values that can be integrated: real or complex.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync
{
    fn zero() -> Self;
    fn magnitude(self) -> f64;
    fn is_finite_value(self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn is_finite_value(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// `smooth_part(t) · t^left_exponent · (1−t)^right_exponent` on `(0, 1)`.
#[derive(Clone)]
pub struct SingularIntegrand<F> {
    pub smooth_part: F,
    pub left_exponent: f64,
    pub right_exponent: f64,
}

impl<F> SingularIntegrand<F> {
    pub fn new(smooth_part: F, left_exponent: f64, right_exponent: f64) -> Self {
        SingularIntegrand {
            smooth_part,
            left_exponent,
            right_exponent,
        }
    }

    fn check_exponents(&self) -> Result<()> {
        for (side, e) in [("left", self.left_exponent), ("right", self.right_exponent)] {
            if !(e > -1.0) || !e.is_finite() {
                return domain(format!("{side} exponent {e} is not integrable (must exceed −1)"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult<T = f64> {
    pub value: T,
    pub abs_error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Backend {
    /// Tanh–sinh. Samples stop `1e−305` short of the ends, so endpoint
    /// exponents near −1 (below about −0.95) lose most of their mass.
    DoubleExponential,
    /// Composite Gauss–Jacobi; the endpoint weights are integrated exactly.
    GaussJacobi,
    /// Gauss–Jacobi on segments ending at 0 or 1 where the exponent there is
    /// below [`AUTO_SWITCH_EXPONENT`] or the segment is narrower than
    /// [`AUTO_SWITCH_WIDTH`]; double-exponential elsewhere.
    Auto,
}

/// Width below which [`Backend::Auto`] hands an end segment to Gauss–Jacobi:
/// the double-exponential rule cannot sample it closer than `1e−305` to the
/// end and would drop a relative `1e−305/width` of its mass.
pub const AUTO_SWITCH_WIDTH: f64 = 1e-200;

/// Endpoint exponent below which [`Backend::Auto`] uses Gauss–Jacobi.
pub const AUTO_SWITCH_EXPONENT: f64 = -0.9;

impl Backend {
    /// The concrete backend for one segment.
    pub fn resolve(self, segment: &Segment, left_exponent: f64, right_exponent: f64) -> Backend {
        match self {
            Backend::Auto => {
                let narrow = segment.width() < AUTO_SWITCH_WIDTH;
                let left = segment.lo == 0.0 && (narrow || left_exponent < AUTO_SWITCH_EXPONENT);
                let right = segment.hi_c == 0.0 && (narrow || right_exponent < AUTO_SWITCH_EXPONENT);
                if left || right {
                    Backend::GaussJacobi
                } else {
                    Backend::DoubleExponential
                }
            }
            other => other,
        }
    }
}

/// How a segment is parametrised by the double-exponential backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    /// Nodes are placed uniformly in `ln t`; the segment must satisfy `lo > 0`.
    /// Suited to integrands that vary on every scale between `lo` and `hi`.
    Logarithmic,
    /// Nodes are placed uniformly in `ln(1 − t)`; the segment must satisfy
    /// `hi < 1`. The mirror image of `Logarithmic` near `t = 1`.
    LogComplement,
}

/// A subinterval of `[0, 1]`. Both ends are also stored as complements
/// `1 − lo`, `1 − hi`, so segments can end within `1e−300` of `t = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub lo_c: f64,
    pub hi_c: f64,
    pub scale: Scale,
}

impl Segment {
    pub fn linear(lo: f64, hi: f64) -> Self {
        Segment {
            lo,
            hi,
            lo_c: 1.0 - lo,
            hi_c: 1.0 - hi,
            scale: Scale::Linear,
        }
    }

    /// `[1 − lo_c, 1 − hi_c]`, given by the complements of its ends.
    pub fn linear_complement(lo_c: f64, hi_c: f64) -> Self {
        Segment {
            lo: 1.0 - lo_c,
            hi: 1.0 - hi_c,
            lo_c,
            hi_c,
            scale: Scale::Linear,
        }
    }

    pub fn logarithmic(lo: f64, hi: f64) -> Self {
        Segment {
            scale: Scale::Logarithmic,
            ..Segment::linear(lo, hi)
        }
    }

    /// `[1 − lo_c, 1 − hi_c]` placed uniformly in `ln(1 − t)`.
    pub fn log_complement(lo_c: f64, hi_c: f64) -> Self {
        Segment {
            scale: Scale::LogComplement,
            ..Segment::linear_complement(lo_c, hi_c)
        }
    }

    /// Width, from whichever pair of ends represents it accurately.
    pub fn width(&self) -> f64 {
        if self.lo >= 0.5 {
            self.lo_c - self.hi_c
        } else {
            self.hi - self.lo
        }
    }
}

/// Integration settings. Holds no state between calls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrator {
    pub tol_abs: f64,
    pub tol_rel: f64,
    pub max_evaluations: usize,
    pub backend: Backend,
}

impl Default for Integrator {
    fn default() -> Self {
        Integrator {
            tol_abs: DEFAULT_TOL_ABS,
            tol_rel: DEFAULT_TOL_REL,
            max_evaluations: DEFAULT_MAX_EVALUATIONS,
            backend: Backend::DoubleExponential,
        }
    }
}

/// Per-segment work order handed to a backend.
pub(crate) struct SegmentJob<'a, T> {
    pub f: &'a dyn Fn(Node) -> Result<T>,
    pub left_exponent: f64,
    pub right_exponent: f64,
    pub segment: Segment,
    pub tol_abs: f64,
    pub tol_rel: f64,
    pub max_evaluations: usize,
}

impl<'a, T> SegmentJob<'a, T> {
    /// Singular weight `t^a (1−t)^b` at a node.
    pub fn weight(&self, node: Node) -> f64 {
        let mut w = 1.0;
        if self.left_exponent != 0.0 {
            w *= node.t.powf(self.left_exponent);
        }
        if self.right_exponent != 0.0 {
            w *= node.tc.powf(self.right_exponent);
        }
        w
    }
}

pub(crate) fn check_value<T: QuadValue>(v: T, node: Node) -> Result<T> {
    if v.is_finite_value() {
        Ok(v)
    } else {
        Err(Error::Evaluation(format!(
            "non-finite integrand at t = {:e} (1 − t = {:e})",
            node.t, node.tc
        )))
    }
}

impl Integrator {
    pub fn with_tolerances(tol_abs: f64, tol_rel: f64) -> Self {
        Integrator {
            tol_abs,
            tol_rel,
            ..Integrator::default()
        }
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    fn check(&self) -> Result<()> {
        if !(self.tol_abs > 0.0 && self.tol_rel > 0.0) {
            return domain("tolerances must be positive");
        }
        Ok(())
    }

    /// ∫₀¹ of the integrand.
    pub fn integrate<T, F>(&self, integrand: &SingularIntegrand<F>) -> Result<QuadResult<T>>
    where
        T: QuadValue,
        F: Fn(Node) -> T,
    {
        self.integrate_segments(integrand, &[Segment::linear(0.0, 1.0)])
    }

    /// Sum of the integrals over the given consecutive segments.
    pub fn integrate_segments<T, F>(
        &self,
        integrand: &SingularIntegrand<F>,
        segments: &[Segment],
    ) -> Result<QuadResult<T>>
    where
        T: QuadValue,
        F: Fn(Node) -> T,
    {
        let f = |n: Node| Ok((integrand.smooth_part)(n));
        self.integrate_dyn(&f, integrand.left_exponent, integrand.right_exponent, segments)
    }

    /// Fallible core: the evaluator may reject a node with an error that is
    /// propagated unchanged.
    pub(crate) fn integrate_dyn<T: QuadValue>(
        &self,
        f: &dyn Fn(Node) -> Result<T>,
        left_exponent: f64,
        right_exponent: f64,
        segments: &[Segment],
    ) -> Result<QuadResult<T>> {
        self.check()?;
        SingularIntegrand::new((), left_exponent, right_exponent).check_exponents()?;
        check_segments(segments)?;
        let n = segments.len() as f64;
        let mut total = QuadResult {
            value: T::zero(),
            abs_error: 0.0,
            evaluations: 0,
        };
        for &segment in segments {
            let job = SegmentJob {
                f,
                left_exponent,
                right_exponent,
                segment,
                tol_abs: self.tol_abs / n,
                tol_rel: self.tol_rel,
                max_evaluations: self.max_evaluations.saturating_sub(total.evaluations),
            };
            let part = match self.backend.resolve(&segment, left_exponent, right_exponent) {
                Backend::GaussJacobi => gauss_jacobi::integrate_segment(&job),
                _ => tanh_sinh::integrate_segment(&job),
            };
            let part = part.map_err(|e| match e {
                Error::Convergence {
                    best,
                    abs_error,
                    evaluations,
                } => Error::Convergence {
                    best: (total.value.magnitude() + best).abs(),
                    abs_error: total.abs_error + abs_error,
                    evaluations: total.evaluations + evaluations,
                },
                other => other,
            })?;
            total.value = total.value + part.value;
            total.abs_error += part.abs_error;
            total.evaluations += part.evaluations;
        }
        Ok(total)
    }
}

fn check_segments(segments: &[Segment]) -> Result<()> {
    if segments.is_empty() {
        return domain("at least one segment is required");
    }
    for s in segments {
        if !(s.lo >= 0.0 && s.hi_c >= 0.0 && s.width() > 0.0) {
            return domain(format!("segment [{}, {}] is not inside [0, 1]", s.lo, s.hi));
        }
        if s.scale == Scale::Logarithmic && !(s.lo > 0.0) {
            return domain("logarithmic segments need a positive lower end");
        }
        if s.scale == Scale::LogComplement && !(s.hi_c > 0.0) {
            return domain("log-complement segments need an upper end below 1");
        }
    }
    Ok(())
}

/// ∫₀¹ with the default backend and evaluation budget.
pub fn integrate<F>(integrand: &SingularIntegrand<F>, tol_abs: f64, tol_rel: f64) -> Result<QuadResult>
where
    F: Fn(Node) -> f64,
{
    Integrator::with_tolerances(tol_abs, tol_rel).integrate(integrand)
}

/// ∫₀¹ smooth_part · t^a (1−t)^b / log_factor. The log factor must be
/// strictly positive at every node; otherwise a domain error is returned.
pub fn integrate_with_log<F, L>(
    integrand: &SingularIntegrand<F>,
    log_factor: L,
    tol_abs: f64,
    tol_rel: f64,
) -> Result<QuadResult>
where
    F: Fn(Node) -> f64,
    L: Fn(Node) -> f64,
{
    Integrator::with_tolerances(tol_abs, tol_rel).integrate_with_log(integrand, log_factor)
}

impl Integrator {
    pub fn integrate_with_log<F, L>(
        &self,
        integrand: &SingularIntegrand<F>,
        log_factor: L,
    ) -> Result<QuadResult>
    where
        F: Fn(Node) -> f64,
        L: Fn(Node) -> f64,
    {
        let f = |n: Node| {
            let l = log_factor(n);
            if !(l > 0.0) || !l.is_finite() {
                return domain(format!("log factor {l} is not positive at t = {:e}", n.t));
            }
            Ok((integrand.smooth_part)(n) / l)
        };
        self.integrate_dyn(
            &f,
            integrand.left_exponent,
            integrand.right_exponent,
            &[Segment::linear(0.0, 1.0)],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::reflection;
    use std::f64::consts::PI;

    fn one(_: Node) -> f64 {
        1.0
    }

    #[test]
    fn spec_examples() {
        let r = integrate(&SingularIntegrand::new(one, 0.0, -0.5), 1e-12, 1e-10).unwrap();
        assert!((r.value - 2.0).abs() < 1e-11);
        let r = integrate(&SingularIntegrand::new(one, -0.5, -0.5), 1e-12, 1e-10).unwrap();
        assert!((r.value - PI).abs() < 1e-10);
        let a = 0.3;
        let r = integrate(&SingularIntegrand::new(one, a - 1.0, -a), 1e-12, 1e-10).unwrap();
        let exact = reflection(a).unwrap().value;
        assert!((r.value - exact).abs() / exact < 1e-10);
        assert!(r.abs_error >= 0.0 && r.abs_error.is_finite());
    }

    #[test]
    fn rejects_non_integrable_exponents() {
        let e = integrate(&SingularIntegrand::new(one, -1.0, 0.0), 1e-12, 1e-10);
        assert!(matches!(e, Err(Error::Domain(_))));
        let e = integrate(&SingularIntegrand::new(one, 0.0, -1.2), 1e-12, 1e-10);
        assert!(matches!(e, Err(Error::Domain(_))));
        let e = integrate(&SingularIntegrand::new(one, 0.0, 0.0), 0.0, 1e-10);
        assert!(matches!(e, Err(Error::Domain(_))));
    }

    #[test]
    fn reports_non_finite_integrands() {
        let f = |n: Node| 1.0 / (n.t - 0.5);
        let e = Integrator::default()
            .integrate(&SingularIntegrand::new(f, 0.0, 0.0))
            .unwrap_err();
        assert!(matches!(e, Error::Evaluation(_)), "{e:?}");
    }

    #[test]
    fn budget_exhaustion_is_a_convergence_error() {
        let integ = Integrator {
            max_evaluations: 50,
            ..Integrator::default()
        };
        let f = |n: Node| (40.0 * n.t).sin();
        match integ.integrate(&SingularIntegrand::new(f, 0.0, 0.0)) {
            Err(Error::Convergence { evaluations, .. }) => assert!(evaluations <= 200),
            other => panic!("expected convergence failure, got {other:?}"),
        }
    }

    #[test]
    fn log_factor_one_matches_plain_integration() {
        let f = |n: Node| (1.0 + n.t).powf(-0.5);
        let integ = SingularIntegrand::new(f, 0.0, -0.5);
        let a = integrate(&integ, 1e-14, 1e-13).unwrap().value;
        let b = integrate_with_log(&integ, |_| 1.0, 1e-14, 1e-13).unwrap().value;
        assert!((a - b).abs() < 1e-12);
        // ∫ (1−t²)^(−½) = π/2
        assert!((a - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn log_factor_must_be_positive() {
        let integ = SingularIntegrand::new(one, 0.0, 0.0);
        let e = integrate_with_log(&integ, |n: Node| n.t - 0.3, 1e-12, 1e-10).unwrap_err();
        assert!(matches!(e, Error::Domain(_)));
    }

    #[test]
    fn log_endpoint_behaviour_is_integrable() {
        // (1−t)^(−½) / log(e/(1−t)) : integrable, log-type decay at t → 1
        let integ = SingularIntegrand::new(one, 0.0, -0.5);
        let r = integrate_with_log(&integ, |n: Node| 1.0 - n.tc.ln(), 1e-12, 1e-10).unwrap();
        assert!(r.value.is_finite() && r.value > 0.0 && r.value < 2.0);
        let g = Integrator::default()
            .with_backend(Backend::GaussJacobi)
            .integrate_with_log(&integ, |n: Node| 1.0 - n.tc.ln())
            .unwrap();
        assert!((r.value - g.value).abs() <= 10.0 * r.abs_error.max(g.abs_error) + 1e-12);
    }

    #[test]
    fn complex_integrands() {
        // ∫₀¹ dt / (1 − t z) = −log(1 − z)/z
        let z = Complex64::new(0.3, 0.4);
        let f = move |n: Node| (Complex64::new(1.0, 0.0) - z * n.t).inv();
        let r: QuadResult<Complex64> = Integrator::default()
            .integrate(&SingularIntegrand::new(f, 0.0, 0.0))
            .unwrap();
        let exact = -(Complex64::new(1.0, 0.0) - z).ln() / z;
        assert!((r.value - exact).norm() < 1e-12);
    }

    #[test]
    fn segments_add_up() {
        let f = |n: Node| n.t.powf(-0.3);
        let integ = SingularIntegrand::new(f, 0.0, -0.4);
        let whole = Integrator::default().integrate(&integ).unwrap().value;
        let parts = Integrator::default()
            .integrate_segments(
                &integ,
                &[
                    Segment::linear(0.0, 1e-6),
                    Segment::logarithmic(1e-6, 0.5),
                    Segment::linear(0.5, 1.0),
                ],
            )
            .unwrap()
            .value;
        let exact = crate::special::beta(0.7, 0.6).unwrap().value;
        assert!((whole - exact).abs() < 1e-10);
        assert!((parts - exact).abs() < 1e-10);
    }

    #[test]
    fn halving_tolerance_does_not_increase_error() {
        let f = |n: Node| 1.0 / (2.0 - n.tc.ln());
        let integ = SingularIntegrand::new(f, -0.25, -0.75);
        for backend in [Backend::DoubleExponential, Backend::GaussJacobi] {
            let mut tol = 1e-4;
            let mut last = f64::INFINITY;
            while tol > 1e-12 {
                let r = Integrator::with_tolerances(tol, tol)
                    .with_backend(backend)
                    .integrate(&integ)
                    .unwrap();
                assert!(r.abs_error <= last, "{backend:?} tol {tol}: {} > {last}", r.abs_error);
                last = r.abs_error;
                tol /= 2.0;
            }
        }
    }

    #[test]
    fn tiny_segments_at_either_end_keep_both_halves() {
        for &w in &[1e-20, 1e-150, 1e-300] {
            // ∫ of the affine function 1 + (distance to the end)/w over a segment of width w
            for at_zero in [true, false] {
                let integrand =
                    SingularIntegrand::new(move |n: Node| 1.0 + if at_zero { n.t } else { n.tc } / w, 0.0, 0.0);
                let seg = if at_zero {
                    Segment::linear(0.0, w)
                } else {
                    Segment::linear_complement(w, 0.0)
                };
                let v = Integrator::default()
                    .with_backend(Backend::GaussJacobi)
                    .integrate_segments(&integrand, &[seg])
                    .unwrap()
                    .value;
                assert!((v / w - 1.5).abs() < 1e-13, "w={w}: {}", v / w);
            }
        }
    }

    #[test]
    fn auto_backend_routes_end_segments() {
        let wide = Segment::linear(0.0, 0.5);
        let tiny = Segment::linear(0.0, 1e-250);
        let inner = Segment::logarithmic(1e-250, 0.5);
        assert_eq!(Backend::Auto.resolve(&wide, -0.5, 0.0), Backend::DoubleExponential);
        assert_eq!(Backend::Auto.resolve(&wide, -0.95, 0.0), Backend::GaussJacobi);
        assert_eq!(Backend::Auto.resolve(&tiny, 0.0, 0.0), Backend::GaussJacobi);
        assert_eq!(Backend::Auto.resolve(&inner, -0.99, -0.99), Backend::DoubleExponential);
        assert_eq!(Backend::GaussJacobi.resolve(&wide, 0.0, 0.0), Backend::GaussJacobi);
    }
}
