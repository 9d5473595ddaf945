//! Named groups of checks, each reducing to pass/fail lines.

use serde::Serialize;

use super::{
    attainment_limit, bound_certificate, crosscheck_representations, f_alpha_certificate, lemma_bruteforce,
    lemma_cases, Attainment, BoundedSetting,
};
use crate::error::{domain, Result};
use crate::norm_formulas::{
    th31_lower, th31_norm, th34_upper, th52_lower, th53_upper, th61_certificate, th71_premise_min_slope,
    unboundedness_probe, DivergenceCase,
};
use crate::quadrature::{Integrator, Node, SingularIntegrand};
use crate::spaces::{g_aux, SpaceSpec};
use crate::special::reflection;

pub const SUITES: [&str; 9] = [
    "representations",
    "certificates",
    "lemma",
    "monotonicity",
    "reflection",
    "attainment",
    "sandwich",
    "divergence",
    "exact",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub bound: f64,
    pub detail: String,
}

impl CheckLine {
    fn new(name: impl Into<String>, passed: bool, value: f64, bound: f64, detail: impl Into<String>) -> Self {
        CheckLine {
            name: name.into(),
            passed,
            value,
            bound,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckLine>,
    pub passed: bool,
}

/// Runs one suite of [`SUITES`], or all of them for `"all"`.
pub fn run_suite(name: &str, seed: u64, trials: usize) -> Result<Vec<SuiteReport>> {
    if name == "all" {
        return SUITES.iter().map(|s| run_one(s, seed, trials)).collect();
    }
    Ok(vec![run_one(name, seed, trials)?])
}

fn run_one(name: &str, seed: u64, trials: usize) -> Result<SuiteReport> {
    let checks = match name {
        "representations" => representations(seed)?,
        "certificates" => certificates(seed, trials)?,
        "lemma" => lemma(seed)?,
        "monotonicity" => monotonicity()?,
        "reflection" => reflection_identity()?,
        "attainment" => attainment()?,
        "sandwich" => sandwich()?,
        "divergence" => divergence()?,
        "exact" => exact()?,
        other => {
            return domain(format!(
                "unknown suite {other}; known: all, {}",
                SUITES.join(", ")
            ))
        }
    };
    let passed = checks.iter().all(|c| c.passed);
    Ok(SuiteReport {
        suite: name.to_string(),
        seed,
        checks,
        passed,
    })
}

fn representations(seed: u64) -> Result<Vec<CheckLine>> {
    let mut out = Vec::new();
    for (degree, samples, bound) in [(0, 10, 1e-10), (20, 50, 1e-8)] {
        let r = crosscheck_representations(degree, samples, seed)?;
        out.push(CheckLine::new(
            format!("degree {degree}, {samples} points"),
            r.max_deviation <= bound,
            r.max_deviation,
            bound,
            format!("worst pair {} at z = {}", r.worst_pair, r.worst_z),
        ));
    }
    Ok(out)
}

/// The four bounded settings exercised by the certificates, all at α = ½.
pub fn certificate_settings() -> Result<Vec<BoundedSetting>> {
    Ok(vec![
        BoundedSetting::HardyToBloch,
        BoundedSetting::LogKorenblumToKorenblum(0.5),
        BoundedSetting::LogKorenblumToLogKorenblum(0.5),
        BoundedSetting::KorenblumToBlochPlusOne(0.5),
    ])
}

fn certificates(seed: u64, trials: usize) -> Result<Vec<CheckLine>> {
    let mut out = Vec::new();
    for s in certificate_settings()? {
        let claimed = s.claimed_bound()?;
        let c = bound_certificate(s.source(), s.target(), claimed, trials, seed)?;
        out.push(CheckLine::new(
            format!("{} → {}", c.source, c.target),
            c.passed,
            c.worst_ratio,
            claimed,
            format!("{} trials, worst {}", c.trials, c.worst_function),
        ));
    }
    let (c, lower) = f_alpha_certificate(0.5)?;
    out.push(CheckLine::new(
        "f_alpha on H∞_{0.5,log} → H∞_0.5",
        c.passed && c.worst_ratio >= lower - 1e-6,
        c.worst_ratio,
        c.claimed,
        format!("lower bound {lower}"),
    ));
    Ok(out)
}

fn lemma(seed: u64) -> Result<Vec<CheckLine>> {
    lemma_cases(seed, 20, 5)?
        .into_iter()
        .map(|case| {
            let c = lemma_bruteforce(case.alpha, case.t)?;
            Ok(CheckLine::new(
                format!(
                    "α = {:.6}, t = {:.6} ({:?}{})",
                    case.alpha,
                    case.t,
                    c.branch,
                    if case.near_threshold { ", near threshold" } else { "" }
                ),
                c.passed,
                c.deviation,
                super::LEMMA_TOLERANCE,
                format!("formula {} brute force {} polar {}", c.formula, c.real_axis_max, c.polar_max),
            ))
        })
        .collect()
}

/// Smallest forward-difference slope of `g_aux(α, ·)` on `n` equispaced
/// points of `(0, 2)`.
pub fn g_aux_min_slope(alpha: f64, n: usize) -> Result<f64> {
    let h = 2.0 / (n + 1) as f64;
    let mut prev = g_aux(alpha, h)?;
    let mut min = f64::INFINITY;
    for i in 2..=n {
        let v = g_aux(alpha, i as f64 * h)?;
        min = min.min((v - prev) / h);
        prev = v;
    }
    Ok(min)
}

pub const G_AUX_ALPHAS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
pub const PREMISE_ALPHAS: [f64; 3] = [0.3, 0.5, 2.0 / 3.0];

fn monotonicity() -> Result<Vec<CheckLine>> {
    let mut out = Vec::new();
    for a in G_AUX_ALPHAS {
        let s = g_aux_min_slope(a, 10_000)?;
        out.push(CheckLine::new(
            format!("g_aux slope, α = {a}"),
            s >= -1e-12,
            s,
            -1e-12,
            "10⁴ points on (0, 2)",
        ));
    }
    for a in PREMISE_ALPHAS {
        let c = th71_premise_min_slope(a, 100);
        out.push(CheckLine::new(
            format!("∂g/∂r, α = {a:.6}"),
            c.passed,
            c.min_slope,
            -1e-10,
            format!("100×100 grid, min at r = {:.4}, t = {:.4}", c.at_r, c.at_t),
        ));
    }
    Ok(out)
}

/// `∫₀¹ t^(α−1)(1−t)^(−α) dt` by quadrature.
pub fn reflection_integral(alpha: f64) -> Result<f64> {
    let integrand = SingularIntegrand::new(|_: Node| 1.0, alpha - 1.0, -alpha);
    Ok(Integrator::default().integrate(&integrand)?.value)
}

fn reflection_identity() -> Result<Vec<CheckLine>> {
    (0..17)
        .map(|k| {
            let a = 0.1 + 0.05 * k as f64;
            let q = reflection_integral(a)?;
            let exact = reflection(a)?.value;
            let rel = (q - exact).abs() / exact;
            Ok(CheckLine::new(format!("α = {a:.2}"), rel <= 1e-8, rel, 1e-8, format!("{q} vs {exact}")))
        })
        .collect()
}

fn attainment() -> Result<Vec<CheckLine>> {
    use std::f64::consts::PI;
    let th61 = super::attainment_ratio("TH61", 0.0, 1.0 - 1e-6)?;
    let th71 = attainment_limit(Attainment::Th71, 0.5)?;
    let th52 = attainment_limit(Attainment::Th52, 1.5)?;
    Ok(vec![
        CheckLine::new("f = 1 on H∞ → B at r = 1 − 10⁻⁶", (th61 - 3.0).abs() <= 1e-3, th61, 3.0, ""),
        CheckLine::new(
            "(1−z²)^(−½) on H∞_½ → B^(3/2), r → 1",
            (th71.value - 1.5 * PI).abs() <= 1e-4,
            th71.value,
            1.5 * PI,
            format!("extrapolated from {:?}", th71.samples),
        ),
        CheckLine::new(
            "h_(3/2) on B^(3/2), r → 1",
            (th52.value - (1.5 * PI - 1.0)).abs() <= 1e-3,
            th52.value,
            1.5 * PI - 1.0,
            format!("extrapolated from {:?}", th52.samples),
        ),
    ])
}

/// 17 interior points of `(lo, hi)`.
pub fn alpha_grid_17(lo: f64, hi: f64) -> Vec<f64> {
    (1..=17).map(|k| lo + (hi - lo) * k as f64 / 18.0).collect()
}

fn sandwich() -> Result<Vec<CheckLine>> {
    let mut out = Vec::new();
    for a in alpha_grid_17(0.0, 1.0) {
        let lo = th31_lower(a)?;
        let n = th31_norm(a)?.value;
        let up = th34_upper(a)?;
        out.push(CheckLine::new(
            format!("H∞_(α,log) → H∞_α, α = {a:.4}"),
            lo <= n && n <= up + 1e-7,
            n,
            up,
            format!("lower {lo}"),
        ));
    }
    for a in alpha_grid_17(1.0, 2.0) {
        let lo = th52_lower(a)?;
        let up = th53_upper(a)?;
        out.push(CheckLine::new(format!("B^α → B^α, α = {a:.4}"), lo <= up, lo, up, ""));
    }
    Ok(out)
}

/// Sequences must increase; the growth verdict is reported alongside.
fn divergence() -> Result<Vec<CheckLine>> {
    let cases = [
        (DivergenceCase::BlochAlphaLe1, 0.5),
        (DivergenceCase::BlochAlphaEq1, 1.0),
        (DivergenceCase::BlochAlphaGe2, 2.0),
        (DivergenceCase::BlochAlphaGe2, 2.5),
        (DivergenceCase::KorenblumToBlochAlphaGe1, 1.0),
    ];
    cases
        .into_iter()
        .map(|(case, a)| {
            let r = unboundedness_probe(case, a)?;
            Ok(CheckLine::new(
                format!("{case}, α = {a}"),
                r.strictly_increasing,
                r.growth_ratio,
                super::super::norm_formulas::DIVERGENCE_FACTOR,
                format!("verdict {:?} ({:?})", r.verdict, r.basis),
            ))
        })
        .collect()
}

fn exact() -> Result<Vec<CheckLine>> {
    use crate::norm_formulas::{th71_value, BoundReport};
    use std::f64::consts::PI;
    let c = th61_certificate(1e-8)?;
    let th71 = match th71_value(0.5)? {
        BoundReport::Exact { value } => value,
        _ => f64::NAN,
    };
    let k = SpaceSpec::korenblum(0.5)?;
    Ok(vec![
        CheckLine::new("H∞ → B upper sup", c.passed, c.upper_sup.value, 3.0, format!("f = 1 probe {}", c.lower_probe)),
        CheckLine::new(
            format!("{k} → B^(3/2)"),
            (th71 - 1.5 * PI).abs() <= 1e-8,
            th71,
            1.5 * PI,
            "",
        ),
    ])
}
