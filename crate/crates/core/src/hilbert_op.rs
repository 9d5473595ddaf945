//! The Hilbert matrix operator in its three realisations:
//!
//! * matrix action on Taylor coefficients, `b_n = Σ_k a_k/(n+k+1)`;
//! * kernel integral `Hf(z) = ∫₀¹ f(t)/(1−tz) dt`;
//! * average of weighted composition operators, `Hf(z) = ∫₀¹ w_t(z) f(φ_t(z)) dt`
//!   with `w_t(z) = 1/(1−(1−t)z)` and `φ_t(z) = t/(1−(1−t)z)`;
//!
//! plus the derivative in kernel form `∫₀¹ t f(t)/(1−tz)² dt` and composed
//! form `∫₀¹ t f(φ_t(z)) / (((t−1)z+1)(1−z)) dt`.
//!
//! For polynomials the image has the closed form
//! `Hf = Σ_k a_k G_k` with `G_k(z) = Σ_n z^n/(n+k+1)`, see [`PolynomialImage`].

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::quadrature::{Integrator, Node, Segment};
use crate::spaces::{FunctionHandle, Point};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `T_t f = w_t · (f ∘ φ_t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedComposition {
    pub t: f64,
    /// `1 − t`
    pub tc: f64,
}

impl WeightedComposition {
    pub fn new(t: f64) -> Result<Self> {
        if !(t > 0.0 && t < 1.0) {
            return domain(format!("t = {t} is outside (0, 1)"));
        }
        Ok(WeightedComposition { t, tc: 1.0 - t })
    }

    pub(crate) fn from_node(n: Node) -> Self {
        WeightedComposition { t: n.t, tc: n.tc }
    }

    /// `1 − (1−t)z`, formed as `(1 − z) + t z`.
    fn denominator(&self, p: Point) -> Complex64 {
        p.zc + p.z * self.t
    }

    /// `w_t(z) = 1/(1 − (1−t)z)`.
    pub fn w(&self, z: Complex64) -> Complex64 {
        self.denominator(Point::new(z)).inv()
    }

    /// `φ_t(z) = t/(1 − (1−t)z)`.
    pub fn phi(&self, z: Complex64) -> Complex64 {
        self.phi_point(Point::new(z)).z
    }

    /// `φ_t(z)` with its complement `1 − φ_t(z) = (1−t)(1−z)/(1−(1−t)z)`.
    pub fn phi_point(&self, p: Point) -> Point {
        let d = self.denominator(p);
        Point {
            z: Complex64::new(self.t, 0.0) / d,
            zc: p.zc * self.tc / d,
        }
    }

    /// `T_t f(z)`.
    pub fn apply(&self, f: &FunctionHandle, z: Complex64) -> Result<Complex64> {
        let p = Point::new(z);
        Ok(f.eval(self.phi_point(p))? / self.denominator(p))
    }
}

fn check_disk(z: Complex64) -> Result<Point> {
    if !(z.norm() < 1.0) {
        return domain(format!("z = {z} is not in the open unit disk"));
    }
    Ok(Point::new(z))
}

fn check_integrable(f: &FunctionHandle) -> Result<()> {
    if !(f.edge_exponent > -1.0) {
        return domain(format!(
            "{} grows like (1−t)^({}) at t = 1; the integral defining Hf does not converge",
            f.name, f.edge_exponent
        ));
    }
    Ok(())
}

fn integrator(tol: f64) -> Result<Integrator> {
    if !(tol > 0.0) {
        return domain("tolerance must be positive");
    }
    Ok(Integrator::with_tolerances(tol, tol))
}

/// Segments for an integrand that also varies on the scale `|1 − z|` near
/// `t = 1`.
fn segments_for(p: Point) -> Vec<Segment> {
    let d = p.zc.norm();
    if d < 0.05 {
        vec![
            Segment::linear(0.0, 0.5),
            Segment::log_complement(0.5, d),
            Segment::linear_complement(d, 0.0),
        ]
    } else {
        vec![Segment::linear(0.0, 1.0)]
    }
}

/// Runtime guard for the principal branch: `Re(1 − tz) > 0` and
/// `Re(1 − (1−t)z) > 0` hold for `|z| < 1`.
fn positive_real_part(w: Complex64, what: &str) -> Result<()> {
    if w.re > 0.0 {
        Ok(())
    } else {
        Err(Error::Internal(format!("Re({what}) = {} is not positive", w.re)))
    }
}

fn kernel_denominator(n: Node, p: Point) -> Complex64 {
    // 1 − tz = (1 − t) + t(1 − z)
    p.zc * n.t + n.tc
}

/// `Hf(z) = ∫₀¹ f(t)/(1−tz) dt`.
pub fn apply_integral(f: &FunctionHandle, z: Complex64, tol: f64) -> Result<Complex64> {
    let p = check_disk(z)?;
    check_integrable(f)?;
    let e = f.edge_exponent;
    let integrand = |n: Node| -> Result<Complex64> {
        let k = kernel_denominator(n, p);
        positive_real_part(k, "1 − tz")?;
        Ok(f.eval(Point::from_complement(n.tc))? * n.tc.powf(-e) / k)
    };
    let r = integrator(tol)?.integrate_dyn(&integrand, 0.0, e, &segments_for(p))?;
    Ok(r.value)
}

/// `Hf(z) = ∫₀¹ w_t(z) f(φ_t(z)) dt`.
pub fn apply_weighted_composition(f: &FunctionHandle, z: Complex64, tol: f64) -> Result<Complex64> {
    let p = check_disk(z)?;
    check_integrable(f)?;
    let e = f.edge_exponent;
    let integrand = |n: Node| -> Result<Complex64> {
        let op = WeightedComposition::from_node(n);
        let d = op.denominator(p);
        positive_real_part(d, "1 − (1−t)z")?;
        Ok(f.eval(op.phi_point(p))? / d * n.tc.powf(-e))
    };
    let r = integrator(tol)?.integrate_dyn(&integrand, 0.0, e, &segments_for(p))?;
    Ok(r.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DerivativeForm {
    Kernel,
    Composed,
}

/// `(Hf)′(z)` by the kernel form `∫ t f(t)/(1−tz)² dt` or the composed form
/// `∫ t f(φ_t(z)) / (((t−1)z+1)(1−z)) dt`.
pub fn derivative(f: &FunctionHandle, z: Complex64, tol: f64, form: DerivativeForm) -> Result<Complex64> {
    if form == DerivativeForm::Composed && z == ONE {
        return domain("the composed form has a factor 1/(1−z) and is undefined at z = 1");
    }
    let p = check_disk(z)?;
    check_integrable(f)?;
    let e = f.edge_exponent;
    let integ = integrator(tol)?;
    let r = match form {
        DerivativeForm::Kernel => {
            let integrand = |n: Node| -> Result<Complex64> {
                let k = kernel_denominator(n, p);
                positive_real_part(k, "1 − tz")?;
                Ok(f.eval(Point::from_complement(n.tc))? * (n.t * n.tc.powf(-e)) / (k * k))
            };
            integ.integrate_dyn(&integrand, 0.0, e, &segments_for(p))?
        }
        DerivativeForm::Composed => {
            let integrand = |n: Node| -> Result<Complex64> {
                let op = WeightedComposition::from_node(n);
                let d = op.denominator(p);
                positive_real_part(d, "1 − (1−t)z")?;
                Ok(f.eval(op.phi_point(p))? * (n.t * n.tc.powf(-e)) / (d * p.zc))
            };
            integ.integrate_dyn(&integrand, 0.0, e, &segments_for(p))?
        }
    };
    Ok(r.value)
}

/// Matrix action truncated to `terms` output coefficients, with a bound on
/// the neglected tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatrixAction {
    pub value: Complex64,
    pub tail_bound: f64,
    pub terms: usize,
}

/// First `terms` Taylor coefficients of `Hf`: `b_n = Σ_k a_k/(n+k+1)`.
pub fn matrix_coefficients(taylor: &[f64], terms: usize) -> Vec<f64> {
    (0..terms)
        .map(|n| {
            taylor
                .iter()
                .enumerate()
                .map(|(k, a)| a / (n + k + 1) as f64)
                .sum()
        })
        .collect()
}

fn taylor_of(f: &FunctionHandle) -> Result<&[f64]> {
    f.taylor
        .as_deref()
        .ok_or_else(|| Error::Domain(format!("{} has no Taylor coefficients", f.name)))
}

/// `Σ_{n<terms} b_n z^n`. The tail is bounded by `A ρ^N / ((N+1)(1−ρ))` with
/// `A = Σ|a_k|`, `ρ = |z|`, `N = terms`.
pub fn apply_matrix(f: &FunctionHandle, z: Complex64, terms: usize) -> Result<MatrixAction> {
    check_disk(z)?;
    let a = taylor_of(f)?;
    let b = matrix_coefficients(a, terms);
    let value = b
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
    let rho = z.norm();
    let mass: f64 = a.iter().map(|c| c.abs()).sum();
    let tail_bound = mass * rho.powi(terms as i32) / ((terms + 1) as f64 * (1.0 - rho));
    Ok(MatrixAction {
        value,
        tail_bound,
        terms,
    })
}

/// Matrix action with the number of terms chosen so that the tail bound is
/// below `tol / 2`.
pub fn apply_matrix_adaptive(f: &FunctionHandle, z: Complex64, tol: f64) -> Result<MatrixAction> {
    check_disk(z)?;
    if !(tol > 0.0) {
        return domain("tolerance must be positive");
    }
    let a = taylor_of(f)?;
    let rho = z.norm();
    let mass: f64 = a.iter().map(|c| c.abs()).sum();
    let mut n = 1usize;
    while mass * rho.powi(n as i32) / ((n + 1) as f64 * (1.0 - rho)) > 0.5 * tol {
        n += 1;
        if n > 10_000_000 {
            return domain(format!("|z| = {rho} is too close to 1 for the matrix form"));
        }
    }
    apply_matrix(f, z, n)
}

/// Closed form of `Hp` for a polynomial `p = Σ a_k z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialImage {
    pub coefficients: Vec<f64>,
}

/// Below this modulus `G_K` is summed as a series and the recurrence is run
/// downwards; above it `G_0` is taken in closed form and the recurrence is
/// run upwards.
const SERIES_RADIUS: f64 = 0.9;

impl PolynomialImage {
    pub fn new(coefficients: Vec<f64>) -> Self {
        PolynomialImage { coefficients }
    }

    /// `(G_k(z), G_k′(z))` for `k = 0..=K`.
    fn basis(&self, p: Point) -> Vec<(Complex64, Complex64)> {
        let kmax = self.coefficients.len().saturating_sub(1);
        let z = p.z;
        let mut out = vec![(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); kmax + 1];
        if z.norm() < SERIES_RADIUS {
            // G_K and G_K′ by series
            let mut g = Complex64::new(0.0, 0.0);
            let mut dg = Complex64::new(0.0, 0.0);
            let mut zn = ONE;
            let mut zn1 = Complex64::new(0.0, 0.0);
            let rho = z.norm();
            let mut n = 0usize;
            loop {
                let c = 1.0 / (n + kmax + 1) as f64;
                g += zn * c;
                dg += zn1 * (n as f64 * c);
                zn1 = zn;
                zn *= z;
                n += 1;
                if (n as f64 + 1.0) * rho.powi(n as i32 - 1) < 1e-18 || n > 2000 {
                    break;
                }
            }
            out[kmax] = (g, dg);
            // G_{k−1} = z G_k + 1/k, G_{k−1}′ = G_k + z G_k′
            for k in (1..=kmax).rev() {
                let (g, dg) = out[k];
                out[k - 1] = (z * g + 1.0 / k as f64, g + z * dg);
            }
        } else {
            let log = p.zc.ln();
            let g0 = -log / z;
            let dg0 = (z * p.zc).inv() + log / (z * z);
            out[0] = (g0, dg0);
            // G_k = (G_{k−1} − 1/k)/z, G_k′ = (G_{k−1}′ − G_k)/z
            for k in 1..=kmax {
                let (g, dg) = out[k - 1];
                let gk = (g - 1.0 / k as f64) / z;
                out[k] = (gk, (dg - gk) / z);
            }
        }
        out
    }

    pub fn value(&self, p: Point) -> Complex64 {
        self.basis(p)
            .iter()
            .zip(&self.coefficients)
            .map(|(g, a)| g.0 * *a)
            .sum()
    }

    pub fn derivative(&self, p: Point) -> Complex64 {
        self.basis(p)
            .iter()
            .zip(&self.coefficients)
            .map(|(g, a)| g.1 * *a)
            .sum()
    }

    /// `(Hp(z), (Hp)′(z))` from one pass.
    pub fn value_and_derivative(&self, p: Point) -> (Complex64, Complex64) {
        self.basis(p)
            .iter()
            .zip(&self.coefficients)
            .fold(
                (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
                |(v, d), (g, a)| (v + g.0 * *a, d + g.1 * *a),
            )
    }

    /// The image as a function handle. With nonnegative coefficients the
    /// image has nonnegative Taylor coefficients, so its modulus and that of
    /// its derivative peak on the positive radius.
    pub fn to_handle(&self, name: impl Into<String>) -> FunctionHandle {
        let a = self.clone();
        let b = self.clone();
        let radial = self.coefficients.iter().all(|&c| c >= 0.0);
        FunctionHandle::new(name, move |p| a.value(p))
            .with_derivative(move |p| b.derivative(p))
            .with_radial_profile(radial)
            .with_real_on_real(true)
    }
}

/// `Hf` as a function handle evaluated by quadrature (kernel form for the
/// value and the derivative). Quadrature failures surface as non-finite
/// values and hence as evaluation errors.
pub fn image_by_quadrature(f: &FunctionHandle, tol: f64) -> Result<FunctionHandle> {
    check_integrable(f)?;
    integrator(tol)?;
    let a = f.clone();
    let b = f.clone();
    let value = move |p: Point| {
        integral_at(&a, p, tol, false).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    };
    let deriv = move |p: Point| {
        integral_at(&b, p, tol, true).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    };
    Ok(FunctionHandle::new(format!("H[{}]", f.name), value)
        .with_derivative(deriv)
        .with_radial_profile(f.radial_profile_known)
        .with_real_on_real(f.real_on_real))
}

/// Kernel-form value or derivative at a point given with its complement.
fn integral_at(f: &FunctionHandle, p: Point, tol: f64, derivative: bool) -> Result<Complex64> {
    if !(p.z.norm() < 1.0) {
        return domain("point outside the disk");
    }
    let e = f.edge_exponent;
    let integrand = |n: Node| -> Result<Complex64> {
        let k = kernel_denominator(n, p);
        positive_real_part(k, "1 − tz")?;
        let v = f.eval(Point::from_complement(n.tc))? * n.tc.powf(-e);
        Ok(if derivative { v * n.t / (k * k) } else { v / k })
    };
    Ok(integrator(tol)?.integrate_dyn(&integrand, 0.0, e, &segments_for(p))?.value)
}
