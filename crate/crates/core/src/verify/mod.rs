//! Independent checks of the norm formulas: random-polynomial bound
//! certificates, agreement of the three realisations of the operator,
//! the disk-to-radius reduction, brute-force suprema and the values reached
//! by the extremal test functions.

mod lemma;
mod rng;
mod suites;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::hilbert_op::{
    apply_integral, apply_matrix_adaptive, apply_weighted_composition, derivative, image_by_quadrature,
    DerivativeForm, PolynomialImage,
};
use crate::norm_formulas::{
    th31_lower, th34_upper, th41_norm, th53_upper, th61_lower_quantity, th71_first_term, th71_value,
    BoundReport, DivergenceCase, Extrapolation,
};
use crate::optimize::{chebyshev_nodes, extrapolate_to_zero};
use crate::spaces::{
    f_alpha, f_alpha_plain, h_alpha, norm_estimate_with, FunctionHandle, NormOptions, Point, SpaceSpec,
};
use crate::Complex64;

pub use lemma::{lemma_bruteforce, lemma_cases, LemmaBranch, LemmaCase, LemmaCheck, LEMMA_TOLERANCE};
pub use rng::{random_polynomial, CounterRng, MAX_DEGREE};
pub use suites::{run_suite, CheckLine, SuiteReport, SUITES};

/// Relative and absolute slack allowed above a claimed bound.
pub const CERTIFICATE_SLACK: f64 = 1e-9;

/// An operator setting the paper proves bounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "setting", content = "alpha", rename_all = "snake_case")]
pub enum BoundedSetting {
    HardyToBloch,
    LogKorenblumToKorenblum(f64),
    LogKorenblumToLogKorenblum(f64),
    KorenblumToBlochPlusOne(f64),
    BlochToBloch(f64),
}

impl BoundedSetting {
    /// Classifies `(source, target)`. Settings proved unbounded give a
    /// domain error naming the matching divergence probe.
    pub fn classify(source: SpaceSpec, target: SpaceSpec) -> Result<BoundedSetting> {
        source.validate()?;
        target.validate()?;
        use SpaceSpec::*;
        let same = |a: f64, b: f64| (a - b).abs() <= 1e-12;
        match (source, target) {
            (HardyInf, BlochAlpha(b)) if same(b, 1.0) => Ok(BoundedSetting::HardyToBloch),
            (LogKorenblum(a), Korenblum(b)) if same(a, b) => Ok(BoundedSetting::LogKorenblumToKorenblum(a)),
            (LogKorenblum(a), LogKorenblum(b)) if same(a, b) => {
                Ok(BoundedSetting::LogKorenblumToLogKorenblum(a))
            }
            (Korenblum(a), BlochAlpha(b)) if same(a + 1.0, b) => Ok(BoundedSetting::KorenblumToBlochPlusOne(a)),
            (BlochAlpha(a), BlochAlpha(b)) if same(a, b) => match DivergenceCase::for_bloch(a) {
                None => Ok(BoundedSetting::BlochToBloch(a)),
                Some(case) => domain(format!(
                    "H is unbounded on B^{a}; use unboundedness_probe({case}, {a})"
                )),
            },
            _ => domain(format!("no bound is established for {source} → {target}")),
        }
    }

    pub fn source(&self) -> SpaceSpec {
        match *self {
            BoundedSetting::HardyToBloch => SpaceSpec::HardyInf,
            BoundedSetting::LogKorenblumToKorenblum(a) | BoundedSetting::LogKorenblumToLogKorenblum(a) => {
                SpaceSpec::LogKorenblum(a)
            }
            BoundedSetting::KorenblumToBlochPlusOne(a) => SpaceSpec::Korenblum(a),
            BoundedSetting::BlochToBloch(a) => SpaceSpec::BlochAlpha(a),
        }
    }

    pub fn target(&self) -> SpaceSpec {
        match *self {
            BoundedSetting::HardyToBloch => SpaceSpec::BlochAlpha(1.0),
            BoundedSetting::LogKorenblumToKorenblum(a) => SpaceSpec::Korenblum(a),
            BoundedSetting::LogKorenblumToLogKorenblum(a) => SpaceSpec::LogKorenblum(a),
            BoundedSetting::KorenblumToBlochPlusOne(a) => SpaceSpec::BlochAlpha(a + 1.0),
            BoundedSetting::BlochToBloch(a) => SpaceSpec::BlochAlpha(a),
        }
    }

    /// The exact value or upper bound the formulas give for this setting.
    pub fn claimed_bound(&self) -> Result<f64> {
        match *self {
            BoundedSetting::HardyToBloch => Ok(3.0),
            BoundedSetting::LogKorenblumToKorenblum(a) => th34_upper(a),
            BoundedSetting::LogKorenblumToLogKorenblum(a) => Ok(th41_norm(a)?.value),
            BoundedSetting::KorenblumToBlochPlusOne(a) => match th71_value(a)? {
                BoundReport::Exact { value } => Ok(value),
                BoundReport::Bracket { upper, .. } => Ok(upper),
                BoundReport::Unbounded { regime } => domain(format!("unbounded: {regime}")),
            },
            BoundedSetting::BlochToBloch(a) => th53_upper(a),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCertificate {
    pub source: SpaceSpec,
    pub target: SpaceSpec,
    pub claimed: f64,
    pub trials: usize,
    pub seed: u64,
    pub worst_ratio: f64,
    pub worst_function: String,
    pub passed: bool,
}

fn within_claim(ratio: f64, claimed: f64) -> bool {
    ratio <= claimed * (1.0 + CERTIFICATE_SLACK) + CERTIFICATE_SLACK
}

/// `‖Hf‖_target / ‖f‖_source` with both norms estimated numerically;
/// `None` for the zero function.
fn norm_ratio(source: SpaceSpec, target: SpaceSpec, f: &FunctionHandle, image: &FunctionHandle, opts: &NormOptions) -> Result<Option<f64>> {
    let s = norm_estimate_with(source, f, opts)?.value;
    if s == 0.0 {
        return Ok(None);
    }
    let t = norm_estimate_with(target, image, opts)?.value;
    Ok(Some(t / s))
}

/// Worst `‖Hp‖/‖p‖` over `trials` random polynomials (see [`CounterRng`]).
/// The image of each polynomial is taken in closed form.
pub fn bound_certificate(
    source: SpaceSpec,
    target: SpaceSpec,
    claimed: f64,
    trials: usize,
    seed: u64,
) -> Result<BoundCertificate> {
    BoundedSetting::classify(source, target)?;
    if !(claimed > 0.0) || !claimed.is_finite() {
        return domain(format!("claimed bound must be positive, got {claimed}"));
    }
    let rng = CounterRng::new(seed);
    let opts = NormOptions::default();
    let ratios = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let coefficients = random_polynomial(&rng, trial);
            let f = FunctionHandle::polynomial(format!("trial {trial}"), coefficients.clone());
            let image = PolynomialImage::new(coefficients).to_handle(format!("H[trial {trial}]"));
            norm_ratio(source, target, &f, &image, &opts)
        })
        .collect::<Result<Vec<Option<f64>>>>()?;
    let mut worst = (0.0, String::from("none"));
    for (trial, r) in ratios.iter().enumerate() {
        if let Some(r) = *r {
            if r > worst.0 {
                worst = (r, format!("seed {seed} trial {trial}"));
            }
        }
    }
    Ok(BoundCertificate {
        source,
        target,
        claimed,
        trials,
        seed,
        worst_ratio: worst.0,
        worst_function: worst.1,
        passed: within_claim(worst.0, claimed),
    })
}

/// Single-trial certificate for a named function whose image is computed
/// by quadrature with tolerance `tol`.
pub fn function_certificate(
    source: SpaceSpec,
    target: SpaceSpec,
    claimed: f64,
    f: &FunctionHandle,
    tol: f64,
) -> Result<BoundCertificate> {
    BoundedSetting::classify(source, target)?;
    let image = image_by_quadrature(f, tol)?;
    let opts = NormOptions {
        radial_samples: 128,
        ..NormOptions::default()
    };
    let ratio = norm_ratio(source, target, f, &image, &opts)?
        .ok_or_else(|| Error::Domain(format!("{} has zero norm", f.name)))?;
    Ok(BoundCertificate {
        source,
        target,
        claimed,
        trials: 1,
        seed: 0,
        worst_ratio: ratio,
        worst_function: f.name.clone(),
        passed: within_claim(ratio, claimed),
    })
}

/// Certificate of `f_α` on H∞_{α,log} → H∞_α against [`th34_upper`];
/// the ratio also bounds [`th31_lower`] from above.
pub fn f_alpha_certificate(alpha: f64) -> Result<(BoundCertificate, f64)> {
    let f = f_alpha(alpha)?;
    let c = function_certificate(
        SpaceSpec::log_korenblum(alpha)?,
        SpaceSpec::korenblum(alpha)?,
        th34_upper(alpha)?,
        &f,
        1e-11,
    )?;
    Ok((c, th31_lower(alpha)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossCheckReport {
    pub degree: usize,
    pub samples: usize,
    pub seed: u64,
    pub max_deviation: f64,
    pub worst_pair: &'static str,
    pub worst_z: Complex64,
}

/// Largest pairwise difference among the matrix, kernel-integral and
/// weighted-composition values of `Hp` for random polynomials of the given
/// degree at random points with `|z| ≤ 0.9`. Sample `i` uses stream `i` of
/// the generator: normals `1..=degree+1` are the coefficients, uniforms at
/// indices `1000, 1001` place the point.
pub fn crosscheck_representations(degree: usize, samples: usize, seed: u64) -> Result<CrossCheckReport> {
    if degree > 50 {
        return domain(format!("degree must be at most 50, got {degree}"));
    }
    let rng = CounterRng::new(seed);
    let tol = 1e-13;
    let deviations = (0..samples as u64)
        .into_par_iter()
        .map(|i| -> Result<(f64, &'static str, Complex64)> {
            let coefficients: Vec<f64> = (0..=degree as u64).map(|k| rng.normal(i, 1 + k)).collect();
            let f = FunctionHandle::polynomial("p", coefficients);
            let rho = 0.9 * rng.uniform(i, 1000).sqrt();
            let theta = 2.0 * std::f64::consts::PI * rng.uniform(i, 1001);
            let z = Complex64::from_polar(rho, theta);
            let m = apply_matrix_adaptive(&f, z, tol)?.value;
            let k = apply_integral(&f, z, tol)?;
            let w = apply_weighted_composition(&f, z, tol)?;
            let pairs = [
                ("matrix/kernel", (m - k).norm()),
                ("matrix/composition", (m - w).norm()),
                ("kernel/composition", (k - w).norm()),
            ];
            let (name, d) = pairs
                .into_iter()
                .fold(("none", 0.0), |acc, p| if p.1 > acc.1 { p } else { acc });
            Ok((d, name, z))
        })
        .collect::<Result<Vec<_>>>()?;
    let worst = deviations
        .into_iter()
        .fold((0.0, "none", Complex64::new(0.0, 0.0)), |acc, d| if d.0 > acc.0 { d } else { acc });
    Ok(CrossCheckReport {
        degree,
        samples,
        seed,
        max_deviation: worst.0,
        worst_pair: worst.1,
        worst_z: worst.2,
    })
}

/// Pre-restriction quantities for the disk-to-radius audit.
pub const AUDIT_KERNELS: [&str; 3] = ["th31", "th41", "const"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub kernel: String,
    pub alpha: f64,
    pub angles: usize,
    pub radii: usize,
    pub radial_sup: f64,
    pub polar_sup: f64,
    /// `polar_sup − radial_sup`; positive means an off-axis point beats
    /// every sampled radius.
    pub gap: f64,
    pub arg_complement: f64,
    pub arg_theta: f64,
}

const AUDIT_RADII: usize = 64;

/// Compares the supremum over an `angles × 64` polar grid of the weighted
/// modulus of `Hf` with the supremum over the positive radius (angle 0),
/// for `f_α` under the H∞_α weight (`th31`), the H∞_{α,log} weight (`th41`)
/// or the constant 1 under the H∞_α weight (`const`). Radii are
/// `1 − r = 10^(−u)` with `u` Chebyshev-clustered in `[0, 8]`.
pub fn radial_reduction_audit(kernel_id: &str, alpha: f64, angles: usize) -> Result<AuditReport> {
    if angles == 0 {
        return domain("at least one angle is needed");
    }
    let (space, quantity): (SpaceSpec, Box<dyn Fn(Point) -> Result<f64> + Sync>) = match kernel_id {
        "th31" | "th41" => {
            let space = if kernel_id == "th31" {
                SpaceSpec::korenblum(alpha)?
            } else {
                SpaceSpec::log_korenblum(alpha)?
            };
            let image = image_by_quadrature(&f_alpha(alpha)?, 1e-11)?;
            (space, Box::new(move |p: Point| Ok(image.eval(p)?.norm())))
        }
        "const" => (SpaceSpec::korenblum(alpha)?, Box::new(|_: Point| Ok(1.0))),
        other => {
            return domain(format!(
                "unknown audit kernel {other}; known: {}",
                AUDIT_KERNELS.join(", ")
            ))
        }
    };
    let mut us = vec![0.0];
    us.extend(chebyshev_nodes(AUDIT_RADII - 2, 0.0, 8.0));
    us.push(8.0);
    let grid: Vec<(usize, usize)> = (0..angles)
        .flat_map(|a| (0..us.len()).map(move |i| (a, i)))
        .collect();
    let values = grid
        .par_iter()
        .map(|&(a, i)| {
            let rc = 10f64.powf(-us[i]);
            let theta = 2.0 * std::f64::consts::PI * a as f64 / angles as f64;
            Ok(space.weight_at_complement(rc) * quantity(Point::polar(rc, theta))?)
        })
        .collect::<Result<Vec<f64>>>()?;
    let radial_sup = values[..us.len()].iter().copied().fold(f64::MIN, f64::max);
    let (best, &polar_sup) = values
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1).then(y.0.cmp(&x.0)))
        .expect("grid is not empty");
    let (a, i) = grid[best];
    Ok(AuditReport {
        kernel: kernel_id.to_string(),
        alpha,
        angles,
        radii: us.len(),
        radial_sup,
        polar_sup,
        gap: polar_sup - radial_sup,
        arg_complement: 10f64.powf(-us[i]),
        arg_theta: 2.0 * std::f64::consts::PI * a as f64 / angles as f64,
    })
}

/// Extremal-function lower-bound quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Attainment {
    /// `f = 1` on H∞ → B.
    Th61,
    /// `f = (1−z²)^(−α)` on H∞_α → B^{α+1}.
    Th71,
    /// `h_α` on B^α → B^α.
    Th52,
}

impl Attainment {
    pub fn parse(s: &str) -> Result<Attainment> {
        match s.trim().to_ascii_uppercase().as_str() {
            "TH61" => Ok(Attainment::Th61),
            "TH71" => Ok(Attainment::Th71),
            "TH52" => Ok(Attainment::Th52),
            other => domain(format!("unknown theorem id {other}; known: TH61, TH71, TH52")),
        }
    }

    /// Complements `1 − r` sampled for the `r → 1` extrapolation.
    pub fn probe_complements(&self) -> [f64; 3] {
        match self {
            Attainment::Th61 => [1e-6, 1e-7, 1e-8],
            Attainment::Th71 => [1e-5, 1e-6, 1e-7],
            Attainment::Th52 => [1e-6, 1e-7, 1e-8],
        }
    }

    /// Extrapolation variable: `1 − r`, except for `h_α`, whose quantity
    /// approaches its limit like `√(1 − r)`.
    pub fn extrapolation_variable(&self, rc: f64) -> f64 {
        match self {
            Attainment::Th52 => rc.sqrt(),
            _ => rc,
        }
    }
}

const ATTAINMENT_TOL: f64 = 1e-12;

/// The lower-bound quantity of `theorem` at `r = 1 − rc`: the target-space
/// weight times `|(Hf)′(r)|`, plus `|Hf(0)|`.
pub fn attainment_at_complement(theorem: Attainment, alpha: f64, rc: f64) -> Result<f64> {
    if !(rc > 0.0 && rc <= 1.0) {
        return domain(format!("1 − r must lie in (0, 1], got {rc}"));
    }
    let r = 1.0 - rc;
    let z = Complex64::new(r, 0.0);
    let one_minus_r2 = rc * (2.0 - rc);
    match theorem {
        Attainment::Th61 => th61_lower_quantity(rc),
        Attainment::Th71 => {
            if !(alpha > 0.0 && alpha < 1.0) {
                return domain(format!("TH71 needs 0 < α < 1, got {alpha}"));
            }
            let f = f_alpha_plain(alpha)?;
            let d = derivative(&f, z, ATTAINMENT_TOL, DerivativeForm::Kernel)?;
            Ok(th71_first_term(alpha)? + one_minus_r2.powf(alpha + 1.0) * d.norm())
        }
        Attainment::Th52 => {
            if !(alpha > 1.0 && alpha < 2.0) {
                return domain(format!("TH52 needs 1 < α < 2, got {alpha}"));
            }
            let h = h_alpha(alpha)?;
            let at_zero = apply_integral(&h, Complex64::new(0.0, 0.0), ATTAINMENT_TOL)?;
            let d = derivative(&h, z, ATTAINMENT_TOL, DerivativeForm::Kernel)?;
            Ok(at_zero.norm() + one_minus_r2.powf(alpha) * d.norm())
        }
    }
}

/// [`attainment_at_complement`] at `r = r_probe`.
pub fn attainment_ratio(theorem: &str, alpha: f64, r_probe: f64) -> Result<f64> {
    let id = Attainment::parse(theorem)?;
    if !(0.0..1.0).contains(&r_probe) {
        return domain(format!("r_probe must lie in [0, 1), got {r_probe}"));
    }
    attainment_at_complement(id, alpha, 1.0 - r_probe)
}

/// `r → 1` limit of the attainment quantity by polynomial extrapolation in
/// [`Attainment::extrapolation_variable`] over [`Attainment::probe_complements`].
pub fn attainment_limit(theorem: Attainment, alpha: f64) -> Result<Extrapolation> {
    let complements = theorem.probe_complements();
    let samples = complements
        .iter()
        .map(|&rc| attainment_at_complement(theorem, alpha, rc))
        .collect::<Result<Vec<f64>>>()?;
    let s: Vec<f64> = complements.iter().map(|&rc| theorem.extrapolation_variable(rc)).collect();
    let (value, error) = extrapolate_to_zero(&s, &samples)?;
    Ok(Extrapolation {
        value,
        error,
        complements: complements.to_vec(),
        samples,
    })
}
