//! Command-line flags, the optional `key = value` config file and their merge
//! into a validated [`RunConfig`].

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hilbert_core::Complex64;

use crate::report::Format;
use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "hilbert-norms",
    version,
    about = "Norms and norm bounds of the Hilbert matrix operator on Korenblum, log-Korenblum, H∞ and Bloch-type spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Norm of H between two spaces, naming the result it comes from
    Norm,
    /// Lower and upper bounds with the location of the supremum
    Bounds,
    /// Value of Hf(z) or (Hf)′(z) for a named function
    Eval,
    /// Run verification suites; exits 1 if any check fails
    Verify,
    /// One row of norms and bounds per α
    Table,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Norm => "norm",
            Command::Bounds => "bounds",
            Command::Eval => "eval",
            Command::Verify => "verify",
            Command::Table => "table",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceSelector {
    HardyInf,
    Korenblum,
    LogKorenblum,
    /// B = B^1
    Bloch,
    BlochAlpha,
    /// B^(α+1)
    BlochPlusOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    /// ∫₀¹ f(t)/(1−tz) dt
    Integral,
    /// ∫₀¹ T_t f(z) dt
    Composition,
    /// Hilbert matrix acting on Taylor coefficients
    Matrix,
    /// Differentiated kernel ∫₀¹ t f(t)/(1−tz)² dt
    Kernel,
    /// Derivative of the composition form
    Composed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Default, Args)]
pub struct Flags {
    /// Source space
    #[arg(long, global = true, value_enum)]
    pub from: Option<SpaceSelector>,
    /// Target space
    #[arg(long, global = true, value_enum)]
    pub to: Option<SpaceSelector>,
    /// Space parameter α
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// α grid as start:stop:step (table)
    #[arg(long, global = true)]
    pub alphas: Option<String>,
    /// Registry function: const, monomial:k, poly:[c0,c1,...], f_alpha, f_alpha_plain, h_alpha, h_one
    #[arg(long, global = true)]
    pub function: Option<String>,
    /// Point of the disk, e.g. 0.3, 0.2-0.5i
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// Evaluate (Hf)′ instead of Hf
    #[arg(long, global = true)]
    pub derivative: bool,
    /// Representation used by eval
    #[arg(long, global = true, value_enum)]
    pub form: Option<FormArg>,
    /// Verification suite, or "all"
    #[arg(long, global = true)]
    pub suite: Option<String>,
    /// Random functions per certificate
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<FormatArg>,
    /// Write the report to this file instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Quadrature tolerance for eval and for the H∞ → B certificate
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// key = value file with defaults for any of the flags above
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_TRIALS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub from: Option<SpaceSelector>,
    pub to: Option<SpaceSelector>,
    pub alphas: Vec<f64>,
    pub function: Option<String>,
    pub z: Complex64,
    pub derivative: bool,
    pub form: Option<FormArg>,
    pub suite: String,
    pub trials: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub tol: f64,
}

impl RunConfig {
    /// The single α of commands that take one.
    pub fn alpha(&self) -> Option<f64> {
        self.alphas.first().copied()
    }
}

const CONFIG_KEYS: [&str; 14] = [
    "from", "to", "alpha", "alphas", "function", "z", "derivative", "form", "suite", "trials", "format", "out",
    "seed", "tol",
];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("config line {}: expected key = value", n + 1)))?;
        let key = k.trim().replace('_', "-");
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(CliError::Config(format!(
                "config line {}: unknown key {key}; known: {}",
                n + 1,
                CONFIG_KEYS.join(", ")
            )));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn from_file<T: ValueEnum>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, CliError> {
    map.get(key)
        .map(|v| T::from_str(v, true).map_err(|_| CliError::Config(format!("config {key}: invalid value {v}"))))
        .transpose()
}

fn parsed<T: std::str::FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, CliError> {
    map.get(key)
        .map(|v| v.parse().map_err(|_| CliError::Config(format!("config {key}: invalid value {v}"))))
        .transpose()
}

/// `start:stop:step`, inclusive of `stop` up to rounding. Values are
/// rounded to 12 decimals so that `0.1:0.9:0.1` yields `0.3`, not
/// `0.30000000000000004`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Config(format!("--alphas expects start:stop:step, got {s}"));
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let [start, stop, step] = parts[..] else {
        return Err(bad());
    };
    if !(step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
        return Err(bad());
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if n > 100_000 {
        return Err(CliError::Config(format!("--alphas {s} has {n} points; at most 100000")));
    }
    Ok((0..n)
        .map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

pub fn parse_z(s: &str) -> Result<Complex64, CliError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let z: Complex64 = t
        .parse()
        .map_err(|_| CliError::Config(format!("--z expects a complex number such as 0.3-0.2i, got {s}")))?;
    if !(z.norm() < 1.0) {
        return Err(CliError::Config(format!("--z must lie in the open unit disk, got |z| = {}", z.norm())));
    }
    Ok(z)
}

/// Merges flags over the config file over built-in defaults.
pub fn resolve(cli: Cli) -> Result<RunConfig, CliError> {
    let f = cli.flags;
    let file = match &f.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
            parse_config_file(&text)?
        }
        None => BTreeMap::new(),
    };

    let alphas = match (f.alpha, &f.alphas) {
        (Some(_), Some(_)) => return Err(CliError::Config("give either --alpha or --alphas, not both".into())),
        (Some(a), None) => vec![a],
        (None, Some(g)) => parse_grid(g)?,
        (None, None) => match (file.get("alphas"), parsed::<f64>(&file, "alpha")?) {
            (Some(g), _) => parse_grid(g)?,
            (None, Some(a)) => vec![a],
            (None, None) => Vec::new(),
        },
    };
    for &a in &alphas {
        if !a.is_finite() {
            return Err(CliError::Config(format!("α must be finite, got {a}")));
        }
    }

    let format = match f.format.or(from_file(&file, "format")?).unwrap_or(FormatArg::Text) {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    let z = match f.z.or_else(|| file.get("z").cloned()) {
        Some(s) => parse_z(&s)?,
        None => Complex64::new(0.0, 0.0),
    };
    let tol = f.tol.or(parsed(&file, "tol")?).unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0 && tol < 1.0) {
        return Err(CliError::Config(format!("--tol must lie in (0, 1), got {tol}")));
    }
    let trials = f.trials.or(parsed(&file, "trials")?).unwrap_or(DEFAULT_TRIALS);
    if trials == 0 {
        return Err(CliError::Config("--trials must be positive".into()));
    }

    Ok(RunConfig {
        command: cli.command,
        from: f.from.or(from_file(&file, "from")?),
        to: f.to.or(from_file(&file, "to")?),
        alphas,
        function: f.function.or_else(|| file.get("function").cloned()),
        z,
        derivative: f.derivative || parsed::<bool>(&file, "derivative")?.unwrap_or(false),
        form: f.form.or(from_file(&file, "form")?),
        suite: f.suite.or_else(|| file.get("suite").cloned()).unwrap_or_else(|| "all".into()),
        trials,
        format,
        out: f.out.or_else(|| file.get("out").map(PathBuf::from)),
        seed: f.seed.or(parsed(&file, "seed")?).unwrap_or(DEFAULT_SEED),
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_includes_its_end() {
        let g = parse_grid("0.1:0.9:0.1").unwrap();
        assert_eq!(g.len(), 9);
        assert_eq!(g[2], 0.3);
        assert_eq!(g[8], 0.9);
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1").is_err());
    }

    #[test]
    fn complex_points() {
        assert_eq!(parse_z("0").unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(parse_z("0.2 - 0.5i").unwrap(), Complex64::new(0.2, -0.5));
        assert!(parse_z("1").is_err());
        assert!(parse_z("x").is_err());
    }

    #[test]
    fn config_file_keys() {
        let m = parse_config_file("# comment\nalpha = 0.5\nseed=7 # trailing\n").unwrap();
        assert_eq!(m["alpha"], "0.5");
        assert_eq!(m["seed"], "7");
        assert!(parse_config_file("colour = red").is_err());
        assert!(parse_config_file("alpha").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("hn-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        std::fs::write(&path, "alpha = 0.25\nseed = 9\nformat = json\n").unwrap();
        let cli = Cli::parse_from([
            "hilbert-norms",
            "norm",
            "--config",
            path.to_str().unwrap(),
            "--alpha",
            "0.5",
        ]);
        let cfg = resolve(cli).unwrap();
        assert_eq!(cfg.alphas, vec![0.5]);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.format, Format::Json);
        std::fs::remove_dir_all(dir).ok();
    }
}
