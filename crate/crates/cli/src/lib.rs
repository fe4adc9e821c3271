//! Command-line front end: argument model, validation and the four commands.
//!
//! Every command returns a [`Report`], which is rendered as JSON or CSV.
//! Rendering is deterministic: identical arguments give identical bytes.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use hyperquad::algebra::{Field, Fq};
use hyperquad::approx::{analyse, neq_witness, ApproxError, ExponentReport, Family, NeqWitness};
use hyperquad::contfrac::{eval_cf, CfError, Letters};
use hyperquad::hyperfamilies::{
    phi_equation, residual, theta_equation, HyperquadraticEquation, PhiParams, ThetaParams,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "hyperquad",
    version,
    about = "Hyperquadratic continued fractions over F_q((1/T))"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the first partial quotients and convergent degrees.
    Generate {
        #[command(flatten)]
        run: RunConfig,
        /// Number of partial quotients after a_0.
        #[arg(long, default_value_t = 10)]
        letters: usize,
    },
    /// Evaluate the degree-(r+1) equation at the expansion.
    Verify {
        #[command(flatten)]
        run: RunConfig,
        /// Allowed shortfall of the residual exponent below the precision.
        #[arg(long, default_value_t = 60)]
        slack: i64,
        /// Add 1 to the constant coefficient (negative control).
        #[arg(long)]
        perturb: bool,
    },
    /// Measure approximation exponents and issue the verdict.
    Exponents {
        #[command(flatten)]
        run: RunConfig,
        /// Degree bound d for the equality conditions.
        #[arg(long, default_value_t = 2)]
        d: u64,
        /// Partial quotients used for the w1 estimate.
        #[arg(long, default_value_t = 256)]
        w1_letters: usize,
    },
    /// Certify an element with w_n different from w_n*.
    Neq {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        s: u32,
        #[arg(long, default_value_t = 1)]
        t: u32,
        #[arg(long, default_value_t = 2)]
        n: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    Theta,
    Phi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Field, family and run parameters shared by generate, verify and exponents.
#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub s: u32,
    #[arg(long, value_enum)]
    pub family: FamilyKind,
    #[arg(long, default_value_t = 1)]
    pub t: u32,
    /// Θ only: length of the initial T-run.
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    /// Φ only: number of lambdas; with --lambda, repeats it ℓ times.
    #[arg(long)]
    pub ell: Option<usize>,
    /// Field element as "0", "1", "g" or "g^i".
    #[arg(long)]
    pub lambda: Option<String>,
    /// Φ only: comma-separated λ_1..λ_ℓ.
    #[arg(long)]
    pub lambdas: Option<String>,
    /// Φ only: "ε1,ε2".
    #[arg(long, default_value = "1,1")]
    pub eps: String,
    #[arg(long, default_value_t = 3)]
    pub n_min: u32,
    #[arg(long, default_value_t = 5)]
    pub n_max: u32,
    #[arg(long, default_value_t = 1500)]
    pub precision: i64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("validation error: {0}")]
    Validation(String),
    #[error("computation error: {0}")]
    Compute(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Compute(_) | CliError::Io(_) => 1,
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

impl From<ApproxError> for CliError {
    fn from(e: ApproxError) -> Self {
        match e {
            ApproxError::HypothesisViolated(_) | ApproxError::InvalidIndex { .. } | ApproxError::InvalidInput(_) => {
                CliError::Validation(e.to_string())
            }
            ApproxError::TooLarge { .. } => CliError::Validation(format!("{e}; lower --n-max")),
            other => CliError::Compute(other.to_string()),
        }
    }
}

fn field(p: u64, s: u32) -> Result<Field, CliError> {
    Field::new(p, s).map_err(|e| invalid(e.to_string()))
}

fn element(f: &Field, text: &str) -> Result<Fq, CliError> {
    f.parse(text).map_err(|e| invalid(e.to_string()))
}

fn element_list(f: &Field, text: &str) -> Result<Vec<Fq>, CliError> {
    text.split(',').map(|x| element(f, x)).collect()
}

impl RunConfig {
    /// Checks the parameters against the family preconditions.
    pub fn family(&self) -> Result<Family, CliError> {
        let f = field(self.p, self.s)?;
        match self.family {
            FamilyKind::Theta => {
                if self.lambdas.is_some() || self.ell.is_some() {
                    return Err(invalid("--lambdas and --ell apply to the phi family only"));
                }
                let lambda = element(
                    &f,
                    self.lambda.as_deref().ok_or_else(|| invalid("theta needs --lambda"))?,
                )?;
                let p = ThetaParams::new(&f, self.t, self.k, lambda).map_err(|e| invalid(e.to_string()))?;
                Ok(Family::Theta(p))
            }
            FamilyKind::Phi => {
                if self.k != 0 {
                    return Err(invalid("--k applies to the theta family only"));
                }
                let lambdas = match (&self.lambdas, &self.lambda) {
                    (Some(_), Some(_)) => return Err(invalid("give either --lambda or --lambdas")),
                    (Some(list), None) => element_list(&f, list)?,
                    (None, Some(one)) => vec![element(&f, one)?; self.ell.unwrap_or(1)],
                    (None, None) => return Err(invalid("phi needs --lambdas or --lambda")),
                };
                if let Some(ell) = self.ell {
                    if ell != lambdas.len() {
                        return Err(invalid(format!("--ell {ell} but {} lambdas given", lambdas.len())));
                    }
                }
                let eps = element_list(&f, &self.eps)?;
                let [e1, e2] = eps[..] else {
                    return Err(invalid("--eps takes exactly two elements"));
                };
                let p = PhiParams::new(&f, self.t, lambdas, (e1, e2)).map_err(|e| invalid(e.to_string()))?;
                Ok(Family::Phi(p))
            }
        }
    }

    fn n_range(&self) -> Result<std::ops::RangeInclusive<u32>, CliError> {
        if self.n_min > self.n_max {
            return Err(invalid(format!(
                "--n-min {} exceeds --n-max {}",
                self.n_min, self.n_max
            )));
        }
        Ok(self.n_min..=self.n_max)
    }
}

/// Output of one command: a JSON document, the CSV projection, and whether
/// the command's check passed.
#[derive(Debug, Clone)]
pub struct Report {
    pub json: Value,
    pub csv_header: Vec<&'static str>,
    pub csv_rows: Vec<Vec<String>>,
    pub passed: bool,
}

impl Report {
    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).map_err(|e| CliError::Compute(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let csv_err = |e: csv::Error| CliError::Compute(e.to_string());
                w.write_record(&self.csv_header).map_err(csv_err)?;
                for row in &self.csv_rows {
                    w.write_record(row).map_err(csv_err)?;
                }
                let bytes = w.into_inner().map_err(|e| CliError::Compute(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| CliError::Compute(e.to_string()))
            }
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn envelope(command: &str, family: Option<&Family>, body: Value) -> Value {
    let mut doc = json!({ "schema_version": SCHEMA_VERSION, "command": command });
    if let Some(f) = family {
        doc["family"] = json!(f.describe());
        doc["r"] = json!(f.r());
    }
    if let (Value::Object(d), Value::Object(b)) = (&mut doc, body) {
        d.extend(b);
    }
    doc
}

fn equation_of(family: &Family) -> HyperquadraticEquation {
    match family {
        Family::Theta(p) => theta_equation(p),
        Family::Phi(p) => phi_equation(p),
    }
}

/// The expansion of the family member itself (Φ, not its reciprocal).
fn expansion_of(family: &Family) -> hyperquad::ContinuedFraction {
    match family {
        Family::Theta(p) => hyperquad::hyperfamilies::theta_letters(p),
        Family::Phi(p) => hyperquad::hyperfamilies::phi_letters(p),
    }
}

pub fn cmd_generate(run: &RunConfig, letters: usize) -> Result<Report, CliError> {
    let family = run.family()?;
    let cf = expansion_of(&family);
    let prefix = cf.prefix(letters).map_err(|e| CliError::Compute(e.to_string()))?;
    let mut rows = vec![vec!["0".to_string(), cf.a0().encode(), "0".to_string()]];
    let mut deg_q = 0i64;
    let mut listing = Vec::with_capacity(letters + 1);
    listing.push(json!({ "index": 0, "letter": cf.a0().encode(), "deg_q": 0 }));
    for (i, a) in prefix.iter().enumerate() {
        deg_q += a.deg_i64();
        listing.push(json!({ "index": i + 1, "letter": a.encode(), "deg_q": deg_q }));
        rows.push(vec![(i + 1).to_string(), a.encode(), deg_q.to_string()]);
    }
    let mut body = json!({ "letters": listing });
    if family.is_periodic() {
        body["note"] = json!("lambda = 1: the expansion is ultimately periodic and the element is quadratic");
    }
    Ok(Report {
        json: envelope("generate", Some(&family), body),
        csv_header: vec!["index", "letter", "deg_q"],
        csv_rows: rows,
        passed: true,
    })
}

pub fn cmd_verify(run: &RunConfig, slack: i64, perturb: bool) -> Result<Report, CliError> {
    let family = run.family()?;
    if run.precision < 1 {
        return Err(invalid("--precision must be positive"));
    }
    let mut eq = equation_of(&family);
    if perturb {
        eq = eq.perturbed();
    }
    let x = eval_cf(&expansion_of(&family), Letters::All, run.precision).map_err(|e| match e {
        CfError::PrecisionExhausted => CliError::Compute(format!("{e}; raise --precision")),
        other => CliError::Compute(other.to_string()),
    })?;
    let rep = residual(&eq, &x).map_err(|e| CliError::Compute(format!("{e}; raise --precision")))?;
    let passed = rep.passes(slack);
    let coefficients: Vec<String> = eq.to_xpoly().coeffs().iter().rev().map(|c| c.encode()).collect();
    let threshold = -(rep.precision - slack);
    let body = json!({
        "perturbed": perturb,
        "equation": coefficients,
        "precision": rep.precision,
        "residual_exp": rep.residual_exp,
        "residual_prec": rep.residual_prec,
        "zero_to_precision": rep.zero_to_precision,
        "threshold": threshold,
        "pass": passed,
    });
    Ok(Report {
        json: envelope("verify", Some(&family), body),
        csv_header: vec!["family", "perturbed", "precision", "residual_exp", "threshold", "pass"],
        csv_rows: vec![vec![
            family.describe(),
            perturb.to_string(),
            rep.precision.to_string(),
            rep.residual_exp.to_string(),
            threshold.to_string(),
            passed.to_string(),
        ]],
        passed,
    })
}

fn exponent_rows(report: &ExponentReport) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for t in &report.tables {
        let branch = to_value(&t.branch).as_str().unwrap_or_default().to_string();
        for rec in &t.records {
            let v = to_value(rec);
            let field = |k: &str| v[k].as_str().map(str::to_string).unwrap_or_else(|| v[k].to_string());
            rows.push(vec![
                branch.clone(),
                rec.n.to_string(),
                rec.shared_letters.to_string(),
                field("dist_exp"),
                rec.height_exp.to_string(),
                field("gap_exp"),
                field("dist_ratio"),
                if v["gap_ratio"].is_null() {
                    String::new()
                } else {
                    field("gap_ratio")
                },
            ]);
        }
    }
    rows
}

pub fn cmd_exponents(run: &RunConfig, d: u64, w1_letters: usize) -> Result<Report, CliError> {
    let family = run.family()?;
    let report = analyse(&family, run.n_range()?, d, w1_letters)?;
    let body = json!({ "tables": to_value(&report.tables), "verdict": to_value(&report.verdict) });
    Ok(Report {
        json: envelope("exponents", Some(&family), body),
        csv_header: vec![
            "branch",
            "n",
            "shared_letters",
            "dist_exp",
            "height_exp",
            "gap_exp",
            "dist_ratio",
            "gap_ratio",
        ],
        csv_rows: exponent_rows(&report),
        passed: true,
    })
}

pub fn cmd_neq(p: u64, s: u32, t: u32, n: u64) -> Result<Report, CliError> {
    let f = field(p, s)?;
    let witness: NeqWitness = match neq_witness(&f, t, n) {
        Ok(w) => w,
        Err(ApproxError::ConditionFailed { margin }) => {
            let body = json!({ "n": n, "t": t, "holds": false, "margin": margin });
            let mut doc = envelope("neq", None, body);
            doc["q"] = json!(f.size());
            return Ok(Report {
                json: doc,
                csv_header: vec!["q", "t", "n", "holds", "margin"],
                csv_rows: vec![vec![
                    f.size().to_string(),
                    t.to_string(),
                    n.to_string(),
                    "false".into(),
                    margin.to_string(),
                ]],
                passed: false,
            });
        }
        Err(e) => return Err(e.into()),
    };
    let v = to_value(&witness);
    let mut row = Vec::new();
    for key in ["family", "n", "r", "w_star", "w", "degree"] {
        row.push(
            v[key]
                .as_str()
                .map(str::to_string)
                .unwrap_or_else(|| v[key].to_string()),
        );
    }
    let mut doc = envelope("neq", None, v);
    doc["q"] = json!(f.size());
    doc["holds"] = json!(true);
    Ok(Report {
        json: doc,
        csv_header: vec!["family", "n", "r", "w_star", "w", "degree"],
        csv_rows: vec![row],
        passed: true,
    })
}

/// Runs a parsed command line. Returns the rendered output, the output
/// path if any, and the exit code.
pub fn run(cli: &Cli) -> Result<(String, Option<PathBuf>, u8), CliError> {
    let (report, output) = match &cli.command {
        Command::Generate { run, letters } => (cmd_generate(run, *letters)?, &run.output),
        Command::Verify { run, slack, perturb } => (cmd_verify(run, *slack, *perturb)?, &run.output),
        Command::Exponents { run, d, w1_letters } => (cmd_exponents(run, *d, *w1_letters)?, &run.output),
        Command::Neq { p, s, t, n, output } => (cmd_neq(*p, *s, *t, *n)?, output),
    };
    let text = report.render(output.format)?;
    Ok((text, output.out.clone(), if report.passed { 0 } else { 1 }))
}
