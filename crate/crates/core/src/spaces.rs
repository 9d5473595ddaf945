//! Weighted sup-norm spaces of analytic functions on the unit disk, named
//! test functions and numerical norm estimation.
//!
//! Radii near 1 are handled through their complement `1 − r`: weights,
//! evaluators and sample grids all accept it directly, so the sampling can
//! reach `1 − r = 1e−8` (and beyond) without cancellation.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::optimize::{chebyshev_nodes, golden_max};

/// A function space on the disk, with its weight parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "alpha")]
pub enum SpaceSpec {
    HardyInf,
    Korenblum(f64),
    LogKorenblum(f64),
    BlochAlpha(f64),
}

impl SpaceSpec {
    pub fn hardy_inf() -> Self {
        SpaceSpec::HardyInf
    }

    pub fn korenblum(alpha: f64) -> Result<Self> {
        check_unit_alpha(alpha, "Korenblum")?;
        Ok(SpaceSpec::Korenblum(alpha))
    }

    pub fn log_korenblum(alpha: f64) -> Result<Self> {
        check_unit_alpha(alpha, "log-Korenblum")?;
        Ok(SpaceSpec::LogKorenblum(alpha))
    }

    pub fn bloch(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return domain(format!("Bloch-type spaces need α > 0, got {alpha}"));
        }
        Ok(SpaceSpec::BlochAlpha(alpha))
    }

    pub fn alpha(&self) -> Option<f64> {
        match *self {
            SpaceSpec::HardyInf => None,
            SpaceSpec::Korenblum(a) | SpaceSpec::LogKorenblum(a) | SpaceSpec::BlochAlpha(a) => Some(a),
        }
    }

    /// Checks the parameter of a value built without the constructors.
    pub fn validate(&self) -> Result<()> {
        match *self {
            SpaceSpec::HardyInf => Ok(()),
            SpaceSpec::Korenblum(a) => SpaceSpec::korenblum(a).map(|_| ()),
            SpaceSpec::LogKorenblum(a) => SpaceSpec::log_korenblum(a).map(|_| ()),
            SpaceSpec::BlochAlpha(a) => SpaceSpec::bloch(a).map(|_| ()),
        }
    }

    pub fn is_bloch(&self) -> bool {
        matches!(self, SpaceSpec::BlochAlpha(_))
    }

    /// Weight at radius `r ∈ [0, 1)`.
    pub fn weight(&self, r: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&r) {
            return domain(format!("radius {r} is outside [0, 1)"));
        }
        Ok(self.weight_at_complement(1.0 - r))
    }

    /// Weight at radius `1 − rc`, for `rc ∈ (0, 1]`.
    pub fn weight_at_complement(&self, rc: f64) -> f64 {
        // 1 − r² = rc (2 − rc)
        let ln_s = rc.ln() + (2.0 - rc).ln();
        match *self {
            SpaceSpec::HardyInf => 1.0,
            SpaceSpec::Korenblum(a) | SpaceSpec::BlochAlpha(a) => (a * ln_s).exp(),
            SpaceSpec::LogKorenblum(a) => (a * ln_s).exp() * (1.0 / a + 2f64.ln() - ln_s),
        }
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SpaceSpec::HardyInf => write!(f, "H∞"),
            SpaceSpec::Korenblum(a) => write!(f, "H∞_{a}"),
            SpaceSpec::LogKorenblum(a) => write!(f, "H∞_{a},log"),
            SpaceSpec::BlochAlpha(a) => write!(f, "B^{a}"),
        }
    }
}

fn check_unit_alpha(alpha: f64, name: &str) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("{name} spaces need 0 < α < 1, got {alpha}"));
    }
    Ok(())
}

/// Weight of `space` at radius `r`.
pub fn weight(space: SpaceSpec, r: f64) -> Result<f64> {
    space.weight(r)
}

/// `x^α log(2e^(1/α)/x)` for `0 < x ≤ 2` (the value at 2 is the boundary
/// limit), nondecreasing in `x`.
pub fn g_aux(alpha: f64, x: f64) -> Result<f64> {
    check_unit_alpha(alpha, "g_aux")?;
    if !(x > 0.0 && x <= 2.0) {
        return domain(format!("g_aux needs 0 < x ≤ 2, got {x}"));
    }
    Ok(x.powf(alpha) * (1.0 / alpha + (2.0 / x).ln()))
}

/// A point of the disk together with `1 − z`, which evaluators should use
/// in place of forming `1 − z` themselves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub z: Complex64,
    pub zc: Complex64,
}

impl Point {
    pub fn new(z: Complex64) -> Self {
        Point {
            z,
            zc: Complex64::new(1.0, 0.0) - z,
        }
    }

    pub fn real(x: f64) -> Self {
        Point::new(Complex64::new(x, 0.0))
    }

    /// The real point `1 − rc`.
    pub fn from_complement(rc: f64) -> Self {
        Point {
            z: Complex64::new(1.0 - rc, 0.0),
            zc: Complex64::new(rc, 0.0),
        }
    }

    /// `(1 − rc) e^(iθ)`.
    pub fn polar(rc: f64, theta: f64) -> Self {
        if theta == 0.0 {
            return Point::from_complement(rc);
        }
        let r = 1.0 - rc;
        let (s, c) = theta.sin_cos();
        let half = (0.5 * theta).sin();
        Point {
            z: Complex64::new(r * c, r * s),
            zc: Complex64::new(2.0 * half * half + rc * c, -r * s),
        }
    }

    /// `1 − z²`, formed as `(1 − z)(1 + z)`.
    pub fn one_minus_square(&self) -> Complex64 {
        self.zc * (Complex64::new(2.0, 0.0) - self.zc)
    }
}

pub type Evaluator = Arc<dyn Fn(Point) -> Complex64 + Send + Sync>;

/// An analytic function on the disk: closed-form evaluator, optional
/// closed-form derivative and optional Taylor coefficients.
#[derive(Clone)]
pub struct FunctionHandle {
    pub name: String,
    evaluator: Evaluator,
    derivative: Option<Evaluator>,
    pub taylor: Option<Vec<f64>>,
    /// `|f|` is maximised on `[0, 1)` among each circle, so radial sampling
    /// suffices.
    pub radial_profile_known: bool,
    /// Real on the real axis; enables complex-step differentiation.
    pub real_on_real: bool,
    /// `e` with `|f(t)| ≲ (1 − t)^e` as `t → 1⁻` (0 for bounded functions).
    pub edge_exponent: f64,
}

impl fmt::Debug for FunctionHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionHandle")
            .field("name", &self.name)
            .field("taylor", &self.taylor)
            .field("radial_profile_known", &self.radial_profile_known)
            .field("edge_exponent", &self.edge_exponent)
            .finish_non_exhaustive()
    }
}

impl FunctionHandle {
    pub fn new<F>(name: impl Into<String>, evaluator: F) -> Self
    where
        F: Fn(Point) -> Complex64 + Send + Sync + 'static,
    {
        FunctionHandle {
            name: name.into(),
            evaluator: Arc::new(evaluator),
            derivative: None,
            taylor: None,
            radial_profile_known: false,
            real_on_real: false,
            edge_exponent: 0.0,
        }
    }

    pub fn with_derivative<F>(mut self, derivative: F) -> Self
    where
        F: Fn(Point) -> Complex64 + Send + Sync + 'static,
    {
        self.derivative = Some(Arc::new(derivative));
        self
    }

    pub fn with_radial_profile(mut self, known: bool) -> Self {
        self.radial_profile_known = known;
        self
    }

    pub fn with_real_on_real(mut self, real: bool) -> Self {
        self.real_on_real = real;
        self
    }

    pub fn with_edge_exponent(mut self, e: f64) -> Self {
        self.edge_exponent = e;
        self
    }

    /// Polynomial `Σ a_k z^k`.
    pub fn polynomial(name: impl Into<String>, coefficients: Vec<f64>) -> Self {
        let c = coefficients.clone();
        let d = coefficients.clone();
        let radial = coefficients.iter().all(|&a| a >= 0.0);
        let mut h = FunctionHandle::new(name, move |p| horner(&c, p.z))
            .with_derivative(move |p| horner_derivative(&d, p.z))
            .with_radial_profile(radial)
            .with_real_on_real(true);
        h.taylor = Some(coefficients);
        h
    }

    pub fn eval(&self, p: Point) -> Result<Complex64> {
        let v = (self.evaluator)(p);
        finite(v, &self.name, p)
    }

    pub fn eval_at(&self, z: Complex64) -> Result<Complex64> {
        self.eval(Point::new(z))
    }

    pub fn has_closed_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    /// `f′` at a point: closed form if supplied, else termwise from Taylor
    /// coefficients, else complex step (real points of real functions), else
    /// central differences with Richardson extrapolation.
    pub fn derivative(&self, p: Point) -> Result<Complex64> {
        let (v, _) = self.derivative_with_method(p)?;
        Ok(v)
    }

    fn derivative_with_method(&self, p: Point) -> Result<(Complex64, DerivativeMethod)> {
        if let Some(d) = &self.derivative {
            return Ok((finite(d(p), &self.name, p)?, DerivativeMethod::ClosedForm));
        }
        if let Some(c) = &self.taylor {
            return Ok((horner_derivative(c, p.z), DerivativeMethod::Termwise));
        }
        if self.real_on_real && p.z.im == 0.0 {
            let h = 1e-20;
            let shifted = Point {
                z: p.z + Complex64::new(0.0, h),
                zc: p.zc - Complex64::new(0.0, h),
            };
            let v = self.eval(shifted)?;
            return Ok((Complex64::new(v.im / h, 0.0), DerivativeMethod::ComplexStep));
        }
        let scale = f64::EPSILON.cbrt();
        let h0 = scale.min(0.1 * p.zc.norm());
        let central = |h: f64| -> Result<Complex64> {
            let step = Complex64::new(h, 0.0);
            let plus = self.eval(Point { z: p.z + step, zc: p.zc - step })?;
            let minus = self.eval(Point { z: p.z - step, zc: p.zc + step })?;
            Ok((plus - minus) / (2.0 * h))
        };
        let d1 = central(h0)?;
        let d2 = central(0.5 * h0)?;
        let d3 = central(0.25 * h0)?;
        let r1 = (d2 * 4.0 - d1) / 3.0;
        let r2 = (d3 * 4.0 - d2) / 3.0;
        Ok(((r2 * 16.0 - r1) / 15.0, DerivativeMethod::Richardson))
    }

    /// `c · f`.
    pub fn scaled(&self, c: f64) -> FunctionHandle {
        let e = self.evaluator.clone();
        let mut out = self.clone();
        out.name = format!("{}*{}", c, self.name);
        out.evaluator = Arc::new(move |p| e(p) * c);
        out.derivative = self.derivative.clone().map(|d| -> Evaluator { Arc::new(move |p| d(p) * c) });
        out.taylor = self.taylor.as_ref().map(|t| t.iter().map(|a| a * c).collect());
        out
    }
}

fn finite(v: Complex64, name: &str, p: Point) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Evaluation(format!("{name} is not finite at z = {}", p.z)))
    }
}

pub(crate) fn horner(c: &[f64], z: Complex64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

pub(crate) fn horner_derivative(c: &[f64], z: Complex64) -> Complex64 {
    c.iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, (k, &a)| acc * z + a * k as f64)
}

fn cpow(w: Complex64, p: f64) -> Complex64 {
    (w.ln() * p).exp()
}

/// Identifiers understood by [`registry`].
pub const REGISTRY_IDS: [&str; 7] = [
    "const",
    "monomial:k",
    "poly:[a0,a1,...]",
    "f_alpha",
    "f_alpha_plain",
    "h_alpha",
    "h_one",
];

/// Named test functions. `alpha` is required by the α-dependent entries.
///
/// * `const`: 1
/// * `monomial:k`: z^k
/// * `poly:[a0,a1,...]`: Σ a_k z^k
/// * `f_alpha`: 1/((1−z²)^α log(2e^(1/α)/(1−z²))), 0 < α < 1
/// * `f_alpha_plain`: (1−z²)^(−α), α > 0
/// * `h_alpha`: ((1−z²)^(1−α) − 1)/(2(α−1)), α ≠ 1
/// * `h_one`: log(1/(1−z))
pub fn registry(id: &str, alpha: Option<f64>) -> Result<FunctionHandle> {
    let need_alpha = || {
        alpha.ok_or_else(|| Error::Domain(format!("function {id} needs a value of α")))
    };
    let id = id.trim();
    if id == "const" {
        return Ok(FunctionHandle::polynomial("const", vec![1.0]));
    }
    if let Some(k) = id.strip_prefix("monomial:") {
        let k: usize = k
            .trim()
            .parse()
            .map_err(|_| Error::Domain(format!("bad monomial degree in {id}")))?;
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        return Ok(FunctionHandle::polynomial(id, c));
    }
    if let Some(list) = id.strip_prefix("poly:") {
        let inner = list.trim().trim_start_matches('[').trim_end_matches(']');
        let c = inner
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|_| Error::Domain(format!("bad coefficient list in {id}")))?;
        if c.is_empty() || c.iter().any(|a| !a.is_finite()) {
            return domain(format!("bad coefficient list in {id}"));
        }
        return Ok(FunctionHandle::polynomial(id, c));
    }
    match id {
        "f_alpha" => f_alpha(need_alpha()?),
        "f_alpha_plain" => f_alpha_plain(need_alpha()?),
        "h_alpha" => h_alpha(need_alpha()?),
        "h_one" => Ok(h_one()),
        _ => domain(format!(
            "unknown function {id}; known: {}",
            REGISTRY_IDS.join(", ")
        )),
    }
}

/// `1/((1−z²)^α log(2e^(1/α)/(1−z²)))`, of unit log-Korenblum norm.
pub fn f_alpha(alpha: f64) -> Result<FunctionHandle> {
    check_unit_alpha(alpha, "f_alpha")?;
    let c = 1.0 / alpha + 2f64.ln();
    let log_factor = move |w: Complex64| Complex64::new(c, 0.0) - w.ln();
    let f = move |p: Point| {
        let w = p.one_minus_square();
        (cpow(w, alpha) * log_factor(w)).inv()
    };
    let df = move |p: Point| {
        // 2z(αL − 1) / ((1−z²)^(α+1) L²)
        let w = p.one_minus_square();
        let l = log_factor(w);
        p.z * 2.0 * (l * alpha - 1.0) / (cpow(w, alpha + 1.0) * l * l)
    };
    Ok(FunctionHandle::new("f_alpha", f)
        .with_derivative(df)
        .with_radial_profile(true)
        .with_real_on_real(true)
        .with_edge_exponent(-alpha))
}

/// `(1−z²)^(−α)`.
pub fn f_alpha_plain(alpha: f64) -> Result<FunctionHandle> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return domain(format!("f_alpha_plain needs α > 0, got {alpha}"));
    }
    let f = move |p: Point| cpow(p.one_minus_square(), -alpha);
    let df = move |p: Point| p.z * (2.0 * alpha) * cpow(p.one_minus_square(), -alpha - 1.0);
    Ok(FunctionHandle::new("f_alpha_plain", f)
        .with_derivative(df)
        .with_radial_profile(true)
        .with_real_on_real(true)
        .with_edge_exponent(-alpha))
}

/// `((1−z²)^(1−α) − 1)/(2(α−1))`, whose derivative is `z(1−z²)^(−α)`.
pub fn h_alpha(alpha: f64) -> Result<FunctionHandle> {
    if !(alpha > 0.0) || !alpha.is_finite() || alpha == 1.0 {
        return domain(format!("h_alpha needs α > 0, α ≠ 1 (use h_one), got {alpha}"));
    }
    let k = 1.0 / (2.0 * (alpha - 1.0));
    let f = move |p: Point| {
        let w = p.one_minus_square();
        // (w^(1−α) − 1) = expm1((1−α) ln w), kept accurate near z = 0
        let e = w.ln() * (1.0 - alpha);
        let em1 = if e.norm() < 1e-3 {
            e + e * e / 2.0 + e * e * e / 6.0 + e * e * e * e / 24.0
        } else {
            e.exp() - 1.0
        };
        em1 * k
    };
    let df = move |p: Point| p.z * cpow(p.one_minus_square(), -alpha);
    Ok(FunctionHandle::new("h_alpha", f)
        .with_derivative(df)
        .with_radial_profile(true)
        .with_real_on_real(true)
        .with_edge_exponent((1.0 - alpha).min(0.0)))
}

/// `log(1/(1−z))`.
pub fn h_one() -> FunctionHandle {
    FunctionHandle::new("h_one", |p: Point| -p.zc.ln())
        .with_derivative(|p: Point| p.zc.inv())
        .with_radial_profile(true)
        .with_real_on_real(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DerivativeMethod {
    None,
    ClosedForm,
    Termwise,
    ComplexStep,
    Richardson,
}

/// How a norm estimate was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormMethod {
    pub radial_samples: usize,
    pub angles: usize,
    pub min_complement: f64,
    pub refined: bool,
    pub derivative: DerivativeMethod,
}

/// Location of the supremum: radius (with its complement) and angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArgSup {
    pub r: f64,
    pub r_complement: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub method: NormMethod,
    pub argsup: ArgSup,
    pub boundary_attained: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormOptions {
    /// Number of radii, Chebyshev-clustered in `u` with `1 − r = min_complement^u`.
    pub radial_samples: usize,
    /// Golden-section refinement around the best samples.
    pub refine: bool,
    /// Number of equispaced angles; `None` means radial only when the
    /// handle's profile is known and 64 otherwise.
    pub angles: Option<usize>,
    /// Smallest sampled `1 − r`.
    pub min_complement: f64,
    /// How many local maxima of the grid are refined.
    pub local_maxima: usize,
}

impl Default for NormOptions {
    fn default() -> Self {
        NormOptions {
            radial_samples: 512,
            refine: true,
            angles: None,
            min_complement: 1e-8,
            local_maxima: 3,
        }
    }
}

/// Numerical norm of `f` in `space`: the supremum over the sample grid of
/// `weight · |f|`, or `|f(0)| + sup weight · |f′|` for Bloch-type spaces.
pub fn norm_estimate(
    space: SpaceSpec,
    f: &FunctionHandle,
    radial_samples: usize,
    refine: bool,
) -> Result<NormEstimate> {
    norm_estimate_with(
        space,
        f,
        &NormOptions {
            radial_samples,
            refine,
            ..NormOptions::default()
        },
    )
}

pub fn norm_estimate_with(space: SpaceSpec, f: &FunctionHandle, opts: &NormOptions) -> Result<NormEstimate> {
    space.validate()?;
    if opts.radial_samples < 2 {
        return domain("at least two radial samples are needed");
    }
    if !(opts.min_complement > 0.0 && opts.min_complement < 1.0) {
        return domain("min_complement must lie in (0, 1)");
    }
    let angles = opts
        .angles
        .unwrap_or(if f.radial_profile_known { 1 } else { 64 })
        .max(1);
    let ln_min = opts.min_complement.ln();
    let bloch = space.is_bloch();

    let mut derivative = DerivativeMethod::None;
    if bloch {
        let (_, m) = f.derivative_with_method(Point::real(0.5))?;
        derivative = m;
    }
    let sample = |u: f64, theta: f64| -> Result<f64> {
        let rc = (u * ln_min).exp();
        let p = Point::polar(rc, theta);
        let v = if bloch { f.derivative(p)? } else { f.eval(p)? };
        Ok(space.weight_at_complement(rc) * v.norm())
    };

    // u = 0 is the origin, u = 1 the outermost circle
    let mut us = vec![0.0];
    us.extend(chebyshev_nodes(opts.radial_samples - 2, 0.0, 1.0));
    us.push(1.0);
    let thetas: Vec<f64> = (0..angles).map(|j| 2.0 * PI * j as f64 / angles as f64).collect();
    let grid: Vec<(usize, usize)> = (0..thetas.len())
        .flat_map(|a| (0..us.len()).map(move |i| (a, i)))
        .collect();
    let values = grid
        .par_iter()
        .map(|&(a, i)| sample(us[i], thetas[a]))
        .collect::<Result<Vec<f64>>>()?;
    let at = |a: usize, i: usize| values[a * us.len() + i];

    // local maxima over the (angle, radius) grid, angles periodic
    let mut peaks: Vec<(usize, usize)> = grid
        .iter()
        .copied()
        .filter(|&(a, i)| {
            let v = at(a, i);
            let radial = (i == 0 || v >= at(a, i - 1)) && (i + 1 == us.len() || v >= at(a, i + 1));
            let angular = angles < 3 || {
                let prev = (a + angles - 1) % angles;
                let next = (a + 1) % angles;
                v >= at(prev, i) && v >= at(next, i)
            };
            radial && angular
        })
        .collect();
    peaks.sort_by(|x, y| at(y.0, y.1).total_cmp(&at(x.0, x.1)));
    if peaks.is_empty() {
        peaks.push((0, 0));
    }
    let (a0, i0) = peaks[0];
    let mut best_value = at(a0, i0);
    let mut best_u = us[i0];
    let mut best_theta = thetas[a0];

    if opts.refine {
        let dtheta = 2.0 * PI / angles as f64;
        for &(a, i) in peaks.iter().take(opts.local_maxima.max(1)) {
            let lo = us[i.saturating_sub(1)];
            let hi = us[(i + 1).min(us.len() - 1)];
            let theta = thetas[a];
            let m = golden_max(|u| sample(u, theta), lo, hi, 1e-12)?;
            let (mut u, mut v, mut th) = (m.x, m.value, theta);
            if angles > 1 {
                let mt = golden_max(|t| sample(u, t), theta - dtheta, theta + dtheta, 1e-12)?;
                if mt.value > v {
                    th = mt.x;
                    v = mt.value;
                    let mu = golden_max(|s| sample(s, th), lo, hi, 1e-12)?;
                    if mu.value > v {
                        u = mu.x;
                        v = mu.value;
                    }
                }
            }
            if v > best_value {
                best_value = v;
                best_u = u;
                best_theta = th;
            }
        }
    }

    let rc = (best_u * ln_min).exp();
    let boundary_attained = rc <= opts.min_complement + 1e-6;
    let mut value = best_value;
    if bloch {
        value += f.eval(Point::real(0.0))?.norm();
    }
    Ok(NormEstimate {
        value,
        method: NormMethod {
            radial_samples: opts.radial_samples,
            angles,
            min_complement: opts.min_complement,
            refined: opts.refine,
            derivative,
        },
        argsup: ArgSup {
            r: 1.0 - rc,
            r_complement: rc,
            theta: best_theta.rem_euclid(2.0 * PI),
        },
        boundary_attained,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_examples() {
        let k = SpaceSpec::korenblum(0.5).unwrap();
        assert!((k.weight(0.0).unwrap() - 1.0).abs() < 1e-15);
        let l = SpaceSpec::log_korenblum(0.5).unwrap();
        assert!((l.weight(0.0).unwrap() - (2f64.ln() + 2.0)).abs() < 1e-14);
        let b = SpaceSpec::bloch(1.5).unwrap();
        assert!((b.weight(0.6).unwrap() - 0.512).abs() < 1e-14);
        assert_eq!(SpaceSpec::HardyInf.weight(0.99).unwrap(), 1.0);
        assert!(k.weight(1.0).is_err());
        assert!(k.weight(-0.1).is_err());
    }

    #[test]
    fn space_parameters_are_validated() {
        assert!(SpaceSpec::korenblum(1.0).is_err());
        assert!(SpaceSpec::log_korenblum(0.0).is_err());
        assert!(SpaceSpec::bloch(-1.0).is_err());
        assert!(SpaceSpec::bloch(2.5).is_ok());
        assert!(SpaceSpec::Korenblum(1.5).validate().is_err());
    }

    #[test]
    fn g_aux_examples() {
        assert!((g_aux(0.5, 2.0).unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-14);
        assert!((g_aux(0.5, 1.0).unwrap() - (2f64.ln() + 2.0)).abs() < 1e-14);
        assert!(g_aux(0.3, 1e-300).unwrap() < 1e-80);
        assert!(g_aux(0.5, 0.0).is_err());
        assert!(g_aux(0.5, 2.5).is_err());
    }

    #[test]
    fn f_alpha_has_unit_log_norm() {
        for &a in &[0.2, 0.5, 0.8] {
            let f = f_alpha(a).unwrap();
            let n = norm_estimate(SpaceSpec::log_korenblum(a).unwrap(), &f, 512, true).unwrap();
            assert!((n.value - 1.0).abs() < 1e-6, "α = {a}: {}", n.value);
        }
    }

    #[test]
    fn h_alpha_has_unit_bloch_norm() {
        let f = h_alpha(1.5).unwrap();
        let n = norm_estimate(SpaceSpec::bloch(1.5).unwrap(), &f, 512, true).unwrap();
        assert!((n.value - 1.0).abs() < 1e-6, "{}", n.value);
        assert!(n.boundary_attained);
    }

    #[test]
    fn constant_has_unit_hardy_norm() {
        let f = registry("const", None).unwrap();
        let n = norm_estimate(SpaceSpec::HardyInf, &f, 64, true).unwrap();
        assert_eq!(n.value, 1.0);
    }

    #[test]
    fn registry_parses_and_rejects() {
        let m = registry("monomial:3", None).unwrap();
        assert_eq!(m.taylor.as_deref(), Some(&[0.0, 0.0, 0.0, 1.0][..]));
        let p = registry("poly:[1, -2, 0.5]", None).unwrap();
        let v = p.eval_at(Complex64::new(2.0, 0.0)).unwrap();
        assert!((v.re - (1.0 - 4.0 + 2.0)).abs() < 1e-15);
        assert!(!p.radial_profile_known);
        assert!(registry("f_alpha", None).is_err());
        assert!(registry("nope", None).is_err());
        assert!(registry("poly:[a]", None).is_err());
        assert!(registry("h_alpha", Some(1.0)).is_err());
    }

    #[test]
    fn closed_derivatives_match_complex_step() {
        let x = 0.63;
        for (id, a) in [("f_alpha", 0.4), ("f_alpha_plain", 0.7), ("h_alpha", 1.5), ("h_alpha", 0.5), ("h_one", 0.0)] {
            let f = registry(id, Some(a)).unwrap();
            let closed = f.derivative(Point::real(x)).unwrap();
            let mut bare = f.clone();
            bare.derivative = None;
            let (cs, m) = bare.derivative_with_method(Point::real(x)).unwrap();
            assert_eq!(m, DerivativeMethod::ComplexStep);
            assert!((closed - cs).norm() < 1e-12 * closed.norm().max(1.0), "{id}");
            bare.real_on_real = false;
            let z = Point::new(Complex64::new(0.3, -0.4));
            let (rich, m) = bare.derivative_with_method(z).unwrap();
            assert_eq!(m, DerivativeMethod::Richardson);
            let closed = f.derivative(z).unwrap();
            assert!((closed - rich).norm() < 1e-8 * closed.norm().max(1.0), "{id}");
        }
    }

    #[test]
    fn taylor_agrees_with_evaluator_for_polynomials() {
        let f = registry("poly:[0.3,-1.2,0.7,2.0]", None).unwrap();
        for &z in &[Complex64::new(0.1, 0.2), Complex64::new(-0.4, 0.1)] {
            let v = f.eval_at(z).unwrap();
            assert!((v - horner(f.taylor.as_ref().unwrap(), z)).norm() < 1e-15);
        }
    }

    #[test]
    fn polar_points_keep_complement() {
        let p = Point::polar(1e-12, 0.3);
        let direct = Complex64::new(1.0, 0.0) - p.z;
        assert!((p.zc - direct).norm() < 1e-15);
        assert_eq!(Point::polar(1e-12, 0.0).zc.re, 1e-12);
    }

    #[test]
    fn korenblum_weight_below_log_weight() {
        for k in 0..1000 {
            let r = k as f64 / 1000.0;
            for &a in &[0.1, 0.5, 0.9] {
                let wk = SpaceSpec::Korenblum(a).weight(r).unwrap();
                let wl = SpaceSpec::LogKorenblum(a).weight(r).unwrap();
                assert!(wk <= wl);
            }
        }
    }
}
