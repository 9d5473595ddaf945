//! The five commands, each producing a [`Report`] and an exit status.

use hilbert_core::hilbert_op::{
    apply_integral, apply_matrix_adaptive, apply_weighted_composition, derivative, DerivativeForm,
};
use hilbert_core::norm_formulas::{
    th31_lower, th31_norm, th34_upper, th41_lower, th41_norm, th52_lower, th53_upper, th61_certificate, th61_value,
    th71_value, unboundedness_probe, BoundReport, DivergenceCase, FormulaId, SupSearchResult, Verdict,
};
use hilbert_core::spaces::{registry, SpaceSpec};
use hilbert_core::verify::run_suite;
use rayon::prelude::*;

use crate::config::{parse_grid, Command, FormArg, RunConfig, SpaceSelector};
use crate::report::{Cell, Report};
use crate::CliError;

pub const STATUS_OK: i32 = 0;
pub const STATUS_VERIFY_FAILED: i32 = 1;
pub const STATUS_UNBOUNDED: i32 = 3;

pub struct Outcome {
    pub report: Report,
    pub status: i32,
    /// Printed on stderr.
    pub message: Option<String>,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Outcome {
            report,
            status: STATUS_OK,
            message: None,
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    for &a in &cfg.alphas {
        if a < 0.01 || (a > 0.99 && a < 1.0) {
            eprintln!("warning: α = {a} is close to an end of (0, 1); values there grow without bound");
        }
    }
    match cfg.command {
        Command::Norm => norm(cfg),
        Command::Bounds => bounds(cfg),
        Command::Eval => eval(cfg),
        Command::Verify => verify(cfg),
        Command::Table => table(cfg),
    }
}

/// The operator settings covered by a norm result.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Setting {
    HardyToBloch,
    LogToKorenblum(f64),
    LogToLog(f64),
    KorenblumToBlochPlusOne(f64),
    BlochToBloch(f64),
}

const SUPPORTED: &str = "hardy-inf → bloch, log-korenblum → korenblum, log-korenblum → log-korenblum, \
                         korenblum → bloch-plus-one, bloch-alpha → bloch-alpha";

fn selector_name(s: SpaceSelector) -> &'static str {
    match s {
        SpaceSelector::HardyInf => "hardy-inf",
        SpaceSelector::Korenblum => "korenblum",
        SpaceSelector::LogKorenblum => "log-korenblum",
        SpaceSelector::Bloch => "bloch",
        SpaceSelector::BlochAlpha => "bloch-alpha",
        SpaceSelector::BlochPlusOne => "bloch-plus-one",
    }
}

fn setting(cfg: &RunConfig) -> Result<Setting, CliError> {
    use SpaceSelector::*;
    let (from, to) = match (cfg.from, cfg.to) {
        (Some(f), Some(t)) => (f, t),
        _ => return Err(CliError::Config("--from and --to are required".into())),
    };
    if cfg.alphas.len() > 1 {
        return Err(CliError::Config(format!("{} takes a single --alpha", cfg.command.name())));
    }
    let need_alpha = || {
        let a = cfg
            .alpha()
            .ok_or_else(|| CliError::Config(format!("{} → {} needs --alpha", selector_name(from), selector_name(to))))?;
        if !(a > 0.0) {
            return Err(CliError::Config(format!("α must be positive, got {a}")));
        }
        Ok(a)
    };
    let unit = |a: f64| -> Result<f64, CliError> {
        FormulaId::Th31Exact.check(a)?;
        Ok(a)
    };
    Ok(match (from, to) {
        (HardyInf, Bloch) => Setting::HardyToBloch,
        (HardyInf, BlochAlpha) if need_alpha()? == 1.0 => Setting::HardyToBloch,
        (LogKorenblum, Korenblum) => Setting::LogToKorenblum(unit(need_alpha()?)?),
        (LogKorenblum, LogKorenblum) => Setting::LogToLog(unit(need_alpha()?)?),
        (Korenblum, BlochPlusOne) => Setting::KorenblumToBlochPlusOne(need_alpha()?),
        (Bloch, Bloch) => Setting::BlochToBloch(1.0),
        (Bloch, BlochAlpha) | (BlochAlpha, Bloch) if need_alpha()? == 1.0 => Setting::BlochToBloch(1.0),
        (BlochAlpha, BlochAlpha) => Setting::BlochToBloch(need_alpha()?),
        _ => {
            return Err(CliError::Config(format!(
                "no result covers {} → {}; supported: {SUPPORTED}",
                selector_name(from),
                selector_name(to)
            )))
        }
    })
}

fn describe(s: Setting) -> String {
    let (from, to) = match s {
        Setting::HardyToBloch => (SpaceSpec::HardyInf, SpaceSpec::BlochAlpha(1.0)),
        Setting::LogToKorenblum(a) => (SpaceSpec::LogKorenblum(a), SpaceSpec::Korenblum(a)),
        Setting::LogToLog(a) => (SpaceSpec::LogKorenblum(a), SpaceSpec::LogKorenblum(a)),
        Setting::KorenblumToBlochPlusOne(a) => (SpaceSpec::Korenblum(a), SpaceSpec::BlochAlpha(a + 1.0)),
        Setting::BlochToBloch(a) => (SpaceSpec::BlochAlpha(a), SpaceSpec::BlochAlpha(a)),
    };
    format!("{from} → {to}")
}

fn alpha_of(s: Setting) -> Option<f64> {
    match s {
        Setting::HardyToBloch => None,
        Setting::LogToKorenblum(a)
        | Setting::LogToLog(a)
        | Setting::KorenblumToBlochPlusOne(a)
        | Setting::BlochToBloch(a) => Some(a),
    }
}

fn bloch_regime(case: DivergenceCase, alpha: f64) -> String {
    match case {
        DivergenceCase::BlochAlphaEq1 => "α = 1 for B → B".to_string(),
        DivergenceCase::BlochAlphaLe1 => format!("0 < α ≤ 1 for B^α → B^α (α = {alpha})"),
        DivergenceCase::BlochAlphaGe2 => format!("α ≥ 2 for B^α → B^α (α = {alpha})"),
        DivergenceCase::KorenblumToBlochAlphaGe1 => format!("α ≥ 1 for H∞_α → B^(α+1) (α = {alpha})"),
    }
}

/// Regime message plus the probe verdict, when `s` is an unbounded regime.
fn unbounded(s: Setting) -> Result<Option<(DivergenceCase, String)>, CliError> {
    let (case, alpha, regime) = match s {
        Setting::KorenblumToBlochPlusOne(a) => match th71_value(a)? {
            BoundReport::Unbounded { regime } => (DivergenceCase::KorenblumToBlochAlphaGe1, a, regime),
            _ => return Ok(None),
        },
        Setting::BlochToBloch(a) => match DivergenceCase::for_bloch(a) {
            Some(c) => (c, a, bloch_regime(c, a)),
            None => return Ok(None),
        },
        _ => return Ok(None),
    };
    let probe = unboundedness_probe(case, alpha)?;
    let verdict = match probe.verdict {
        Verdict::Diverges => "diverges",
        Verdict::Inconclusive => "inconclusive",
    };
    Ok(Some((
        case,
        format!(
            "the operator is unbounded: {regime}; probe {case} along 1 − r = 1e-1 … 1e-6 grows by a factor {} ({verdict})",
            crate::report::format_number(probe.growth_ratio)
        ),
    )))
}

fn norm(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let s = setting(cfg)?;
    let mut report = Report::new(
        "norm",
        vec!["setting", "alpha", "theorem", "kind", "value", "lower_theorem", "lower", "upper_theorem", "upper"],
    );
    let head = |report: &mut Report, theorem: &str, kind: &str, rest: Vec<Cell>| {
        let mut row = vec![
            Cell::text(describe(s)),
            Cell::opt(alpha_of(s)),
            Cell::text(theorem),
            Cell::text(kind),
        ];
        row.extend(rest);
        report.push(row);
    };
    if let Some((case, message)) = unbounded(s)? {
        head(&mut report, case.code(), "unbounded", vec![Cell::Blank; 5]);
        return Ok(Outcome {
            report,
            status: STATUS_UNBOUNDED,
            message: Some(message),
        });
    }
    match s {
        Setting::HardyToBloch => head(&mut report, "TH61_EXACT", "exact", exact(th61_value())),
        Setting::LogToKorenblum(a) => head(
            &mut report,
            "TH31_EXACT",
            "exact",
            vec![
                Cell::Num(th31_norm(a)?.value),
                Cell::text("TH31_LOWER"),
                Cell::Num(th31_lower(a)?),
                Cell::text("TH34_UPPER"),
                Cell::Num(th34_upper(a)?),
            ],
        ),
        Setting::LogToLog(a) => head(
            &mut report,
            "TH41_EXACT",
            "exact",
            vec![
                Cell::Num(th41_norm(a)?.value),
                Cell::text("TH41_LOWER"),
                Cell::Num(th41_lower(a)?),
                Cell::Blank,
                Cell::Blank,
            ],
        ),
        Setting::KorenblumToBlochPlusOne(a) => match th71_value(a)? {
            BoundReport::Exact { value } => head(&mut report, "TH71_EXACT", "exact", exact(value)),
            BoundReport::Bracket { lower, upper } => {
                head(&mut report, "TH71_LOWER+TH71_UPPER", "bracket", bracket("TH71", lower, upper))
            }
            BoundReport::Unbounded { .. } => unreachable!("handled above"),
        },
        Setting::BlochToBloch(a) => head(
            &mut report,
            "TH52_LOWER+TH53_UPPER",
            "bracket",
            vec![
                Cell::Blank,
                Cell::text("TH52_LOWER"),
                Cell::Num(th52_lower(a)?),
                Cell::text("TH53_UPPER"),
                Cell::Num(th53_upper(a)?),
            ],
        ),
    }
    Ok(Outcome::ok(report))
}

fn exact(value: f64) -> Vec<Cell> {
    vec![Cell::Num(value), Cell::Blank, Cell::Blank, Cell::Blank, Cell::Blank]
}

fn bracket(prefix: &str, lower: f64, upper: f64) -> Vec<Cell> {
    vec![
        Cell::Blank,
        Cell::text(format!("{prefix}_LOWER")),
        Cell::Num(lower),
        Cell::text(format!("{prefix}_UPPER")),
        Cell::Num(upper),
    ]
}

fn sup_cells(theorem: &str, r: &SupSearchResult) -> Vec<Cell> {
    vec![
        Cell::text(theorem),
        Cell::Num(r.value),
        Cell::Num(r.arg_r),
        Cell::Num(r.arg_complement),
        Cell::Bool(r.boundary_attained),
        Cell::Int(r.samples_used as u64),
    ]
}

fn bounds(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let s = setting(cfg)?;
    let mut report = Report::new(
        "bounds",
        vec![
            "setting",
            "alpha",
            "lower_theorem",
            "lower",
            "upper_theorem",
            "upper",
            "sup_theorem",
            "sup",
            "arg_r",
            "arg_complement",
            "boundary_attained",
            "samples_used",
        ],
    );
    if let Some((case, message)) = unbounded(s)? {
        let mut row = vec![Cell::text(describe(s)), Cell::opt(alpha_of(s)), Cell::text(case.code())];
        row.extend(vec![Cell::Blank; 9]);
        report.push(row);
        return Ok(Outcome {
            report,
            status: STATUS_UNBOUNDED,
            message: Some(message),
        });
    }
    let no_sup = || vec![Cell::Blank; 6];
    let (lower, upper, sup) = match s {
        Setting::HardyToBloch => {
            let c = th61_certificate(cfg.tol.max(1e-8))?;
            (
                ("TH61_EXACT", Cell::Num(c.lower_probe)),
                ("TH61_EXACT", Cell::Num(c.value)),
                sup_cells("TH61_EXACT", &c.upper_sup),
            )
        }
        Setting::LogToKorenblum(a) => (
            ("TH31_LOWER", Cell::Num(th31_lower(a)?)),
            ("TH34_UPPER", Cell::Num(th34_upper(a)?)),
            sup_cells("TH31_EXACT", &th31_norm(a)?),
        ),
        Setting::LogToLog(a) => (
            ("TH41_LOWER", Cell::Num(th41_lower(a)?)),
            ("", Cell::Blank),
            sup_cells("TH41_EXACT", &th41_norm(a)?),
        ),
        Setting::KorenblumToBlochPlusOne(a) => match th71_value(a)? {
            BoundReport::Exact { value } => (
                ("TH71_EXACT", Cell::Num(value)),
                ("TH71_EXACT", Cell::Num(value)),
                no_sup(),
            ),
            BoundReport::Bracket { lower, upper } => (
                ("TH71_LOWER", Cell::Num(lower)),
                ("TH71_UPPER", Cell::Num(upper)),
                no_sup(),
            ),
            BoundReport::Unbounded { .. } => unreachable!("handled above"),
        },
        Setting::BlochToBloch(a) => (
            ("TH52_LOWER", Cell::Num(th52_lower(a)?)),
            ("TH53_UPPER", Cell::Num(th53_upper(a)?)),
            no_sup(),
        ),
    };
    let id = |s: &str| if s.is_empty() { Cell::Blank } else { Cell::text(s) };
    let mut row = vec![
        Cell::text(describe(s)),
        Cell::opt(alpha_of(s)),
        id(lower.0),
        lower.1,
        id(upper.0),
        upper.1,
    ];
    row.extend(sup);
    report.push(row);
    Ok(Outcome::ok(report))
}

fn eval(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let id = cfg
        .function
        .as_deref()
        .ok_or_else(|| CliError::Config("eval needs --function".into()))?;
    let f = registry(id, cfg.alpha())?;
    let z = cfg.z;
    let (quantity, form, value) = if cfg.derivative {
        let form = cfg.form.unwrap_or(FormArg::Kernel);
        let d = match form {
            FormArg::Kernel => DerivativeForm::Kernel,
            FormArg::Composed => DerivativeForm::Composed,
            other => {
                return Err(CliError::Config(format!(
                    "--derivative takes --form kernel or composed, not {other:?}"
                )))
            }
        };
        ("Hf'", form, derivative(&f, z, cfg.tol, d)?)
    } else {
        let form = cfg.form.unwrap_or(FormArg::Integral);
        let v = match form {
            FormArg::Integral => apply_integral(&f, z, cfg.tol)?,
            FormArg::Composition => apply_weighted_composition(&f, z, cfg.tol)?,
            FormArg::Matrix => apply_matrix_adaptive(&f, z, cfg.tol)?.value,
            other => {
                return Err(CliError::Config(format!(
                    "values take --form integral, composition or matrix, not {other:?}; add --derivative for {other:?}"
                )))
            }
        };
        ("Hf", form, v)
    };
    let mut report = Report::new(
        "eval",
        vec!["function", "alpha", "z_re", "z_im", "quantity", "form", "re", "im", "abs"],
    );
    report.push(vec![
        Cell::text(&f.name),
        Cell::opt(cfg.alpha()),
        Cell::Num(z.re),
        Cell::Num(z.im),
        Cell::text(quantity),
        Cell::text(format!("{form:?}").to_lowercase()),
        Cell::Num(value.re),
        Cell::Num(value.im),
        Cell::Num(value.norm()),
    ]);
    Ok(Outcome::ok(report))
}

fn verify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let suites = run_suite(&cfg.suite, cfg.seed, cfg.trials)?;
    let mut report = Report::new("verify", vec!["suite", "check", "passed", "value", "bound", "detail"]);
    let mut failed = Vec::new();
    for s in &suites {
        if !s.passed {
            failed.push(s.suite.clone());
        }
        for c in &s.checks {
            report.push(vec![
                Cell::text(&s.suite),
                Cell::text(&c.name),
                Cell::Bool(c.passed),
                Cell::Num(c.value),
                Cell::Num(c.bound),
                Cell::text(&c.detail),
            ]);
        }
    }
    let summary = format!(
        "{} of {} suites passed (seed {})",
        suites.len() - failed.len(),
        suites.len(),
        cfg.seed
    );
    Ok(if failed.is_empty() {
        Outcome {
            report,
            status: STATUS_OK,
            message: Some(summary),
        }
    } else {
        Outcome {
            report,
            status: STATUS_VERIFY_FAILED,
            message: Some(format!("{summary}; failed: {}", failed.join(", "))),
        }
    })
}

pub const TABLE_COLUMNS: [&str; 12] = [
    "alpha",
    "th31_lower",
    "th31_norm",
    "th34_upper",
    "th41_lower",
    "th41_norm",
    "th52_lower",
    "th53_upper",
    "th61",
    "th71_lower",
    "th71_exact_or_upper",
    "verdicts",
];

pub const DEFAULT_TABLE_GRID: &str = "0.1:0.9:0.1";

/// Divergence verdicts of the unbounded regimes containing `alpha`.
fn verdicts(alpha: f64) -> Result<String, CliError> {
    let mut cases = Vec::new();
    if let Some(c) = DivergenceCase::for_bloch(alpha) {
        cases.push(c);
    }
    if alpha >= 1.0 {
        cases.push(DivergenceCase::KorenblumToBlochAlphaGe1);
    }
    let parts = cases
        .into_iter()
        .map(|c| {
            let v = match unboundedness_probe(c, alpha)?.verdict {
                Verdict::Diverges => "diverges",
                Verdict::Inconclusive => "inconclusive",
            };
            Ok(format!("{c}={v}"))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(parts.join(";"))
}

fn table_row(alpha: f64) -> Result<Vec<Cell>, CliError> {
    if !(alpha > 0.0) {
        return Err(CliError::Config(format!("table needs α > 0, got {alpha}")));
    }
    let unit = alpha < 1.0;
    let bloch = alpha > 1.0 && alpha < 2.0;
    let when = |ok: bool, f: &dyn Fn() -> hilbert_core::Result<f64>| -> Result<Cell, CliError> {
        Ok(if ok { Cell::Num(f()?) } else { Cell::Blank })
    };
    let (th71_lo, th71_hi) = if unit {
        match th71_value(alpha)? {
            BoundReport::Exact { value } => (Cell::Num(value), Cell::Num(value)),
            BoundReport::Bracket { lower, upper } => (Cell::Num(lower), Cell::Num(upper)),
            BoundReport::Unbounded { .. } => (Cell::Blank, Cell::Blank),
        }
    } else {
        (Cell::Blank, Cell::Blank)
    };
    let v = verdicts(alpha)?;
    Ok(vec![
        Cell::Num(alpha),
        when(unit, &|| th31_lower(alpha))?,
        when(unit, &|| th31_norm(alpha).map(|r| r.value))?,
        when(unit, &|| th34_upper(alpha))?,
        when(unit, &|| th41_lower(alpha))?,
        when(unit, &|| th41_norm(alpha).map(|r| r.value))?,
        when(bloch, &|| th52_lower(alpha))?,
        when(bloch, &|| th53_upper(alpha))?,
        Cell::Num(th61_value()),
        th71_lo,
        th71_hi,
        if v.is_empty() { Cell::Blank } else { Cell::Text(v) },
    ])
}

fn table(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let alphas = if cfg.alphas.is_empty() {
        parse_grid(DEFAULT_TABLE_GRID)?
    } else {
        cfg.alphas.clone()
    };
    let rows = alphas
        .par_iter()
        .map(|&a| table_row(a))
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut report = Report::new("table", TABLE_COLUMNS.to_vec());
    for r in rows {
        report.push(r);
    }
    Ok(Outcome::ok(report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{resolve, Cli};
    use std::f64::consts::PI;
    use clap::Parser;

    fn cfg(args: &[&str]) -> RunConfig {
        let mut v = vec!["hilbert-norms"];
        v.extend_from_slice(args);
        resolve(Cli::parse_from(v)).unwrap()
    }

    fn value(o: &Outcome, col: &str) -> f64 {
        let j = o.report.columns.iter().position(|c| *c == col).unwrap();
        match o.report.rows[0][j] {
            Cell::Num(x) => x,
            ref other => panic!("{col} is {other:?}"),
        }
    }

    #[test]
    fn hardy_to_bloch_is_three() {
        let o = run(&cfg(&["norm", "--from", "hardy-inf", "--to", "bloch"])).unwrap();
        assert_eq!(value(&o, "value"), 3.0);
    }

    #[test]
    fn korenblum_to_bloch_plus_one() {
        let o = run(&cfg(&["norm", "--from", "korenblum", "--to", "bloch-plus-one", "--alpha", "0.5"])).unwrap();
        assert!((value(&o, "value") - 1.5 * PI).abs() < 1e-10);
        let o = run(&cfg(&["norm", "--from", "korenblum", "--to", "bloch-plus-one", "--alpha", "1"])).unwrap();
        assert_eq!(o.status, STATUS_UNBOUNDED);
        assert!(o.message.unwrap().contains("α ≥ 1 for H∞_α → B^(α+1)"));
    }

    #[test]
    fn unsupported_pairs_are_config_errors() {
        let e = run(&cfg(&["norm", "--from", "bloch", "--to", "korenblum", "--alpha", "0.5"])).err().unwrap();
        assert_eq!(e.code(), 2);
        let e = run(&cfg(&["norm", "--from", "log-korenblum", "--to", "korenblum", "--alpha", "1.5"]))
            .err()
            .unwrap();
        assert_eq!(e.code(), 2);
    }

    #[test]
    fn eval_constant_at_origin() {
        let o = run(&cfg(&["eval", "--function", "const", "--z", "0"])).unwrap();
        assert!((value(&o, "re") - 1.0).abs() < 1e-14);
        let e = run(&cfg(&["eval", "--function", "const", "--form", "kernel"])).err().unwrap();
        assert_eq!(e.code(), 2);
    }

    #[test]
    fn table_blanks_cells_outside_hypotheses() {
        let row = table_row(1.5).unwrap();
        assert_eq!(row[1], Cell::Blank);
        assert!(matches!(row[6], Cell::Num(_)));
        let row = table_row(0.5).unwrap();
        assert_eq!(row[6], Cell::Blank);
        assert_eq!(row[11], Cell::text("bloch_alpha_le1=diverges"));
    }
}
