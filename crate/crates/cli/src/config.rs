use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Parser, Debug)]
#[command(name = "expsum", version, about = "Exponential sums, L-functions, spectral pages and Dwork traces over finite fields")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Size of the worker pool (default: one per core).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// TOML file supplying values for any flag not given on the command line.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decomposition, Milnor number, spectral vanishing, sums, Lambda, root moduli, optional Dwork check.
    Analyze(AnalyzeArgs),
    /// Exponential sums S_1..S_imax.
    Sum(CommonArgs),
    /// L-function, Lambda and root moduli.
    Lfunction(LfunctionArgs),
    /// Pages of the spectral sequence and a vanishing scan.
    Spectral(SpectralArgs),
    /// Smooth complete intersection hypotheses for a factored leading form.
    #[command(name = "check-1-18")]
    CheckCi(CheckArgs),
    /// Trace formula congruences for the truncated Dwork operators.
    DworkVerify(CommonArgs),
    /// The interval of admissible b.
    BRange(BRangeArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze(_) => "analyze",
            Command::Sum(_) => "sum",
            Command::Lfunction(_) => "lfunction",
            Command::Spectral(_) => "spectral",
            Command::CheckCi(_) => "check-1-18",
            Command::DworkVerify(_) => "dwork-verify",
            Command::BRange(_) => "b-range",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Args, Debug, Default, Clone)]
pub struct CommonArgs {
    /// Characteristic.
    #[arg(long)]
    pub p: Option<u32>,
    /// Extension degree, q = p^a.
    #[arg(long)]
    pub a: Option<usize>,
    /// Defining polynomial of F_q, comma-separated coefficients low to high.
    #[arg(long)]
    pub modulus: Option<String>,
    /// Polynomial in x1..xn, e.g. "x1*x2 + x1 + x2".
    #[arg(long)]
    pub poly: Option<String>,
    /// Number of variables (default: largest index in --poly).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "i-max")]
    pub i_max: Option<usize>,
    #[arg(long = "r-bound")]
    pub r_bound: Option<i64>,
    #[arg(long = "cutoff-D")]
    pub cutoff_d: Option<u32>,
    #[arg(long = "precision-N")]
    pub precision_n: Option<u32>,
    /// Maximum number of polynomial evaluations per sum.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Tolerance for the root-modulus comparison.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub milnor: bool,
    #[arg(long)]
    pub spectral: bool,
    #[arg(long)]
    pub sums: bool,
    #[arg(long)]
    pub lfunction: bool,
    #[arg(long)]
    pub weil: bool,
    #[arg(long)]
    pub dwork: bool,
    /// Everything except --dwork.
    #[arg(long)]
    pub all: bool,
}

#[derive(Args, Debug, Default, Clone)]
pub struct LfunctionArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Expected degree of Lambda; uses Newton's identities instead of reconstruction.
    #[arg(long)]
    pub degree: Option<usize>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct SpectralArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Pages to tabulate, 1..=page.
    #[arg(long)]
    pub page: Option<usize>,
    /// Page on which to scan for vanishing off the top degree.
    #[arg(long)]
    pub e: Option<usize>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct CheckArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Factor of the leading form as "poly:multiplicity"; repeat for each factor.
    #[arg(long = "factor")]
    pub factors: Vec<String>,
    /// The second-highest part f^(delta'), if it should differ from the decomposition of --poly.
    #[arg(long)]
    pub second: Option<String>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct BRangeArgs {
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub delta: Option<u64>,
    #[arg(long)]
    pub e: Option<u64>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct FactorEntry {
    pub poly: String,
    #[serde(default = "one")]
    pub multiplicity: u32,
}

fn one() -> u32 {
    1
}

/// Keys accepted in a `--config` file.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigFile {
    pub p: Option<u64>,
    pub a: Option<usize>,
    pub modulus: Option<Vec<u32>>,
    pub poly: Option<String>,
    pub n: Option<usize>,
    pub i_max: Option<usize>,
    pub r_bound: Option<i64>,
    #[serde(rename = "cutoff-D")]
    pub cutoff_d: Option<u32>,
    #[serde(rename = "precision-N")]
    pub precision_n: Option<u32>,
    pub budget: Option<u64>,
    pub tol: Option<f64>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
    pub select: Option<Vec<String>>,
    pub degree: Option<usize>,
    pub page: Option<usize>,
    pub e: Option<u64>,
    pub delta: Option<u64>,
    pub factors: Option<Vec<FactorEntry>>,
    pub second: Option<String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
    }
}

/// Analyses selectable in `analyze`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Analysis {
    Milnor,
    Spectral,
    Sums,
    Lfunction,
    Weil,
    Dwork,
}

impl Analysis {
    fn parse(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "milnor" => Analysis::Milnor,
            "spectral" => Analysis::Spectral,
            "sums" => Analysis::Sums,
            "lfunction" => Analysis::Lfunction,
            "weil" => Analysis::Weil,
            "dwork" => Analysis::Dwork,
            other => return Err(CliError::Validation(format!("unknown analysis {other:?}"))),
        })
    }
}

/// Flag values merged with the config file; flags win.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Settings {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poly: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_bound: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", rename = "cutoff_D")]
    pub cutoff_d: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", rename = "precision_N")]
    pub precision_n: Option<u32>,
    pub budget: u64,
    pub tol: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub select: Vec<Analysis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub page: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<FactorEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub second: Option<String>,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

fn parse_modulus(s: &str) -> Result<Vec<u32>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| CliError::Validation(format!("bad modulus coefficient {t:?}"))))
        .collect()
}

fn parse_factor(s: &str) -> Result<FactorEntry, CliError> {
    match s.rsplit_once(':') {
        Some((poly, m)) => {
            let multiplicity = m
                .trim()
                .parse::<u32>()
                .map_err(|_| CliError::Validation(format!("bad multiplicity in {s:?}")))?;
            Ok(FactorEntry { poly: poly.trim().to_string(), multiplicity })
        }
        None => Ok(FactorEntry { poly: s.trim().to_string(), multiplicity: 1 }),
    }
}

impl Settings {
    pub fn resolve(cli: &Cli) -> Result<Settings, CliError> {
        let file = match &cli.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let mut s = Settings {
            p: file.p,
            a: file.a,
            modulus: file.modulus.clone(),
            poly: file.poly.clone(),
            n: file.n,
            i_max: file.i_max,
            r_bound: file.r_bound,
            cutoff_d: file.cutoff_d,
            precision_n: file.precision_n,
            budget: file.budget.unwrap_or(expsum::charsum::DEFAULT_BUDGET),
            tol: file.tol.unwrap_or(1e-9),
            select: Vec::new(),
            degree: file.degree,
            page: file.page,
            e: file.e,
            delta: file.delta,
            factors: file.factors.clone().unwrap_or_default(),
            second: file.second.clone(),
            format: cli.format.or(file.format).unwrap_or(Format::Json),
            threads: cli.threads.or(file.threads),
        };
        if let Some(sel) = &file.select {
            s.select = sel.iter().map(|x| Analysis::parse(x)).collect::<Result<_, _>>()?;
        }
        match &cli.command {
            Command::Analyze(a) => {
                s.apply(&a.common)?;
                let flags = [
                    (a.milnor, Analysis::Milnor),
                    (a.spectral, Analysis::Spectral),
                    (a.sums, Analysis::Sums),
                    (a.lfunction, Analysis::Lfunction),
                    (a.weil, Analysis::Weil),
                    (a.dwork, Analysis::Dwork),
                ];
                let from_flags: Vec<Analysis> = flags.iter().filter(|(on, _)| *on).map(|&(_, x)| x).collect();
                if a.all || !from_flags.is_empty() {
                    s.select = from_flags;
                }
                if a.all {
                    s.select.extend([Analysis::Milnor, Analysis::Spectral, Analysis::Sums, Analysis::Lfunction, Analysis::Weil]);
                }
                s.select.sort();
                s.select.dedup();
            }
            Command::Sum(c) | Command::DworkVerify(c) => s.apply(c)?,
            Command::Lfunction(l) => {
                s.apply(&l.common)?;
                s.degree = l.degree.or(s.degree);
            }
            Command::Spectral(sp) => {
                s.apply(&sp.common)?;
                s.page = sp.page.or(s.page);
                s.e = sp.e.map(|e| e as u64).or(s.e);
            }
            Command::CheckCi(c) => {
                s.apply(&c.common)?;
                if !c.factors.is_empty() {
                    s.factors = c.factors.iter().map(|f| parse_factor(f)).collect::<Result<_, _>>()?;
                }
                s.second = c.second.clone().or(s.second.take());
            }
            Command::BRange(b) => {
                s.p = b.p.or(s.p);
                s.delta = b.delta.or(s.delta);
                s.e = b.e.or(s.e);
            }
        }
        s.validate(&cli.command)?;
        Ok(s)
    }

    fn apply(&mut self, c: &CommonArgs) -> Result<(), CliError> {
        self.p = c.p.map(u64::from).or(self.p);
        self.a = c.a.or(self.a);
        if let Some(m) = &c.modulus {
            self.modulus = Some(parse_modulus(m)?);
        }
        self.poly = c.poly.clone().or(self.poly.take());
        self.n = c.n.or(self.n);
        self.i_max = c.i_max.or(self.i_max);
        self.r_bound = c.r_bound.or(self.r_bound);
        self.cutoff_d = c.cutoff_d.or(self.cutoff_d);
        self.precision_n = c.precision_n.or(self.precision_n);
        self.budget = c.budget.unwrap_or(self.budget);
        self.tol = c.tol.unwrap_or(self.tol);
        Ok(())
    }

    fn validate(&self, cmd: &Command) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Validation(m.to_string()));
        if self.budget == 0 {
            return bad("--budget must be positive");
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return bad("--tol must be a positive number");
        }
        if self.i_max == Some(0) {
            return bad("--i-max must be positive");
        }
        if self.cutoff_d == Some(0) {
            return bad("--cutoff-D must be positive");
        }
        if self.precision_n == Some(0) {
            return bad("--precision-N must be positive");
        }
        if self.r_bound.is_some_and(|r| r < 0) {
            return bad("--r-bound must be non-negative");
        }
        if self.threads == Some(0) {
            return bad("--threads must be positive");
        }
        if self.page == Some(0) || self.e == Some(0) {
            return bad("pages are numbered from 1");
        }
        if let Command::BRange(_) = cmd {
            if self.p.is_none() || self.delta.is_none() || self.e.is_none() {
                return bad("b-range needs --p, --delta and --e");
            }
            return Ok(());
        }
        if self.p.is_none() {
            return bad("--p is required");
        }
        if self.poly.is_none() {
            return bad("--poly is required");
        }
        let a = self.a.unwrap_or(1);
        if a == 0 {
            return bad("--a must be positive");
        }
        let wants_dwork = matches!(cmd, Command::DworkVerify(_)) || self.select.contains(&Analysis::Dwork);
        if wants_dwork && a != 1 {
            return bad("Dwork verification requires a = 1");
        }
        match cmd {
            Command::Analyze(_) if self.select.is_empty() => {
                bad("no analysis selected: pass --all or any of --milnor --spectral --sums --lfunction --weil --dwork")
            }
            Command::CheckCi(_) if self.factors.is_empty() => bad("check-1-18 needs at least one --factor"),
            _ => Ok(()),
        }
    }
}
