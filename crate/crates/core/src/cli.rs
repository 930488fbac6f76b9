//! Command-line front end.
//!
//! Curves go out as CSV, scalar reports as JSON. Every command is a pure
//! function of its arguments, so repeated runs are byte-identical.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage, 3 input
//! validation, 4 optimizer failure, 5 simulator refusal.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::coordinated::{coord_lower_asymptotic, coord_lower_finite, coord_upper_asymptotic, coord_upper_finite};
use crate::error::Error;
use crate::model::{ChannelConfig, InputDistribution};
use crate::numerics::SeriesControl;
use crate::oracle::{enumerate_output_distribution, exact_entropy};
use crate::simulator::{estimate_entropy, estimate_mi, Estimator, SimulationConfig, SimulationEstimate};
use crate::uncoordinated::{
    cached_gamma_star, distorted_distribution, find_gamma_star, single_user_mi, uc_lower_asymptotic, uc_sum_rate,
    uc_unif_asymptotic, uc_upper_asymptotic, uc_upper_finite, GammaStarResult,
};
use crate::verify::{consistency_suite, lemma1_suite, lemma2_suite, CheckResult};

pub const DEFAULT_GAMMA_MIN: f64 = 0.1;
pub const DEFAULT_GAMMA_MAX: f64 = 10.0;
pub const DEFAULT_GAMMA_STEP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitKind {
    VerificationFailed,
    Usage,
    Validation,
    Optimizer,
    Simulator,
}

impl ExitKind {
    pub fn code(self) -> i32 {
        match self {
            ExitKind::VerificationFailed => 1,
            ExitKind::Usage => 2,
            ExitKind::Validation => 3,
            ExitKind::Optimizer => 4,
            ExitKind::Simulator => 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub kind: ExitKind,
    pub message: String,
}

impl CliError {
    fn new(kind: ExitKind, message: impl Into<String>) -> Self {
        CliError { kind, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        self.kind.code()
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match &e {
            Error::Optimizer(_) => ExitKind::Optimizer,
            Error::SimulatorRefusal(_) | Error::EnumerationCap { .. } => ExitKind::Simulator,
            Error::InvalidGamma(_) => ExitKind::Usage,
            _ => ExitKind::Validation,
        };
        CliError::new(kind, e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "adder-capacity", version, about = "Capacity bounds for the multiuser vector adder channel")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct GridArgs {
    #[arg(long = "gamma-min", default_value_t = DEFAULT_GAMMA_MIN)]
    pub gamma_min: f64,
    #[arg(long = "gamma-max", default_value_t = DEFAULT_GAMMA_MAX)]
    pub gamma_max: f64,
    #[arg(long = "gamma-step", default_value_t = DEFAULT_GAMMA_STEP)]
    pub gamma_step: f64,
}

impl From<GridArgs> for GammaGrid {
    fn from(g: GridArgs) -> Self {
        GammaGrid { min: g.gamma_min, max: g.gamma_max, step: g.gamma_step }
    }
}

#[derive(Debug, Args, Clone)]
pub struct InstanceArgs {
    #[arg(long = "Q")]
    pub q: usize,
    #[arg(long = "S")]
    pub s: usize,
    /// `uniform`, `distorted`, or a path to a file with one probability per line.
    #[arg(long, default_value = "uniform")]
    pub dist: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Coordinated,
    Uncoordinated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Lemma1,
    Lemma2,
    Consistency,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EstimatorArg {
    Mi,
    PlugIn,
    MillerMadow,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Asymptotic bounds of one transmission mode on a load grid (CSV).
    Bounds {
        #[arg(value_enum)]
        mode: ModeArg,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Finite-instance bounds and the uncoordinated sum rate (JSON).
    Finite {
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Load maximizing the uniform-input uncoordinated rate (JSON).
    GammaStar {
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Monte Carlo estimate against its analytic value (JSON).
    Simulate {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        streams: usize,
        #[arg(long, value_enum, default_value_t = EstimatorArg::Mi)]
        estimator: EstimatorArg,
    },
    /// Run a self-check suite; exits 1 if any case fails.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
    },
    /// Data behind figure 1 (coordinated bounds), 2 (uniform-input
    /// uncoordinated rate) or 3 (uncoordinated bounds). Comparison curves for
    /// the OR channel are not included.
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        id: u8,
        #[command(flatten)]
        grid: GridArgs,
    },
}

/// Evenly spaced loads `min, min + step, …` up to `max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaGrid {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Default for GammaGrid {
    fn default() -> Self {
        GammaGrid { min: DEFAULT_GAMMA_MIN, max: DEFAULT_GAMMA_MAX, step: DEFAULT_GAMMA_STEP }
    }
}

impl GammaGrid {
    pub fn validate(&self) -> Result<(), CliError> {
        let ok = self.min.is_finite() && self.max.is_finite() && self.step.is_finite();
        if !ok || self.min <= 0.0 || self.max < self.min || self.step <= 0.0 {
            return Err(CliError::new(
                ExitKind::Usage,
                format!(
                    "invalid grid: need 0 < gamma-min <= gamma-max and gamma-step > 0 (got min={}, max={}, step={})",
                    self.min, self.max, self.step
                ),
            ));
        }
        Ok(())
    }

    pub fn points(&self) -> Result<Vec<f64>, CliError> {
        self.validate()?;
        let n = ((self.max - self.min) / self.step + 1e-9).floor() as usize;
        Ok((0..=n).map(|k| self.min + k as f64 * self.step).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveTable {
    pub curve_id: String,
    pub rows: Vec<(f64, f64)>,
}

impl CurveTable {
    fn check(&self) -> Result<(), CliError> {
        let increasing = self.rows.windows(2).all(|w| w[0].0 < w[1].0);
        let valid = self.rows.iter().all(|&(_, b)| b.is_finite() && b >= 0.0);
        if increasing && valid {
            Ok(())
        } else {
            Err(CliError::new(ExitKind::Validation, format!("curve {} has invalid rows", self.curve_id)))
        }
    }
}

fn curve<F>(id: &str, gammas: &[f64], f: F) -> Result<CurveTable, CliError>
where
    F: Fn(f64) -> crate::Result<f64>,
{
    let rows = gammas.iter().map(|&g| f(g).map(|b| (g, b))).collect::<crate::Result<Vec<_>>>()?;
    let table = CurveTable { curve_id: id.to_string(), rows };
    table.check()?;
    Ok(table)
}

fn coordinated_curves(gammas: &[f64]) -> Result<Vec<CurveTable>, CliError> {
    let ctrl = SeriesControl::default();
    Ok(vec![
        curve("coord-lower", gammas, |g| coord_lower_asymptotic(g, &ctrl).map(|b| b.bits))?,
        curve("coord-upper", gammas, |g| coord_upper_asymptotic(g).map(|b| b.bits))?,
    ])
}

fn unif_curve(gammas: &[f64]) -> Result<CurveTable, CliError> {
    let ctrl = SeriesControl::default();
    curve("uc-unif", gammas, |g| uc_unif_asymptotic(g, &ctrl).map(|b| b.bits))
}

fn uncoordinated_bound_curves(gammas: &[f64]) -> Result<Vec<CurveTable>, CliError> {
    let ctrl = SeriesControl::default();
    Ok(vec![
        curve("uc-lower", gammas, |g| uc_lower_asymptotic(g, &ctrl).map(|b| b.bits))?,
        curve("uc-upper", gammas, |g| uc_upper_asymptotic(g).map(|b| b.bits))?,
    ])
}

/// All asymptotic bounds of `mode` on the grid.
pub fn cmd_bounds(mode: ModeArg, grid: &GammaGrid) -> Result<Vec<CurveTable>, CliError> {
    let gammas = grid.points()?;
    match mode {
        ModeArg::Coordinated => coordinated_curves(&gammas),
        ModeArg::Uncoordinated => {
            let mut tables = vec![unif_curve(&gammas)?];
            tables.extend(uncoordinated_bound_curves(&gammas)?);
            Ok(tables)
        }
    }
}

pub fn cmd_figure(id: u8, grid: &GammaGrid) -> Result<Vec<CurveTable>, CliError> {
    let gammas = grid.points()?;
    match id {
        1 => coordinated_curves(&gammas),
        2 => Ok(vec![unif_curve(&gammas)?]),
        3 => uncoordinated_bound_curves(&gammas),
        _ => Err(CliError::new(ExitKind::Usage, format!("unknown figure id {id}; expected 1, 2 or 3"))),
    }
}

/// Six significant digits, fixed notation, period as decimal separator.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0.00000".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // Rounding can carry into a new leading digit (9.999999 -> 10.00000).
    let carried = s.parse::<f64>().is_ok_and(|v| v.abs() >= 10f64.powi(magnitude + 1));
    if carried && decimals > 0 {
        let decimals = decimals - 1;
        return format!("{x:.decimals$}");
    }
    s
}

/// CSV with header `gamma,<curve_id>,...`. All tables must share one grid.
pub fn curves_to_csv(tables: &[CurveTable]) -> String {
    let mut out = String::from("gamma");
    for t in tables {
        out.push(',');
        out.push_str(&t.curve_id);
    }
    out.push('\n');
    let rows = tables.first().map_or(0, |t| t.rows.len());
    for r in 0..rows {
        out.push_str(&format_sig6(tables[0].rows[r].0));
        for t in tables {
            out.push(',');
            out.push_str(&format_sig6(t.rows[r].1));
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DistSpec {
    Uniform,
    Distorted,
    File(PathBuf),
}

impl DistSpec {
    pub fn parse(spec: &str) -> Self {
        match spec {
            "uniform" => DistSpec::Uniform,
            "distorted" => DistSpec::Distorted,
            path => DistSpec::File(PathBuf::from(path)),
        }
    }

    pub fn label(&self) -> String {
        match self {
            DistSpec::Uniform => "uniform".into(),
            DistSpec::Distorted => "distorted".into(),
            DistSpec::File(p) => p.display().to_string(),
        }
    }

    pub fn resolve(&self, cfg: &ChannelConfig) -> Result<InputDistribution, CliError> {
        let dist = match self {
            DistSpec::Uniform => InputDistribution::uniform(cfg.q())?,
            DistSpec::Distorted => distorted_distribution(cfg, cached_gamma_star()?.gamma_star)?,
            DistSpec::File(path) => read_distribution(path)?,
        };
        dist.check_against(cfg)?;
        Ok(dist)
    }
}

fn read_distribution(path: &Path) -> Result<InputDistribution, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new(ExitKind::Validation, format!("cannot read {}: {e}", path.display())))?;
    InputDistribution::from_text(&text)
        .map_err(|e| CliError::new(ExitKind::Validation, format!("{}: {e}", path.display())))
}

fn instance(q: usize, s: usize) -> Result<ChannelConfig, CliError> {
    ChannelConfig::new(q, s).map_err(|e| CliError::new(ExitKind::Usage, e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteReport {
    #[serde(rename = "Q")]
    pub q: usize,
    #[serde(rename = "S")]
    pub s: usize,
    pub dist: String,
    pub coord_upper: f64,
    pub coord_lower: f64,
    pub uc_upper: f64,
    pub uc_sum_rate: f64,
}

pub fn cmd_finite(q: usize, s: usize, dist: &DistSpec) -> Result<FiniteReport, CliError> {
    let cfg = instance(q, s)?;
    let p = dist.resolve(&cfg)?;
    Ok(FiniteReport {
        q,
        s,
        dist: dist.label(),
        coord_upper: coord_upper_finite(&cfg).bits,
        coord_lower: coord_lower_finite(&cfg).bits,
        uc_upper: uc_upper_finite(&cfg).bits,
        uc_sum_rate: uc_sum_rate(&cfg, &p)?.bits,
    })
}

pub fn cmd_gamma_star(tol: f64) -> Result<GammaStarResult, CliError> {
    Ok(find_gamma_star(tol, &SeriesControl::default())?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulateReport {
    #[serde(rename = "Q")]
    pub q: usize,
    #[serde(rename = "S")]
    pub s: usize,
    pub dist: String,
    pub samples: usize,
    pub seed: u64,
    pub streams: usize,
    #[serde(flatten)]
    pub result: SimulationEstimate,
    pub reference: f64,
    /// (estimate − reference) / std_error; `null` when the standard error is
    /// zero but the estimate differs from the reference.
    pub z_score: Option<f64>,
}

pub fn cmd_simulate(
    q: usize,
    s: usize,
    dist: &DistSpec,
    samples: usize,
    seed: u64,
    streams: usize,
    estimator: EstimatorArg,
) -> Result<SimulateReport, CliError> {
    let cfg = instance(q, s)?;
    let p = dist.resolve(&cfg)?;
    let sim = SimulationConfig::new(cfg, p.clone(), samples, seed, streams)?;
    let (result, reference) = match estimator {
        EstimatorArg::Mi => (estimate_mi(&sim)?, single_user_mi(&cfg, &p)?),
        EstimatorArg::PlugIn | EstimatorArg::MillerMadow => {
            let kind = if estimator == EstimatorArg::PlugIn { Estimator::PlugIn } else { Estimator::MillerMadow };
            let est = estimate_entropy(&sim, kind)?;
            (est, exact_entropy(&enumerate_output_distribution(&cfg, &p)?))
        }
    };
    let diff = result.estimate - reference;
    let z_score = if result.std_error > 0.0 {
        Some(diff / result.std_error)
    } else if diff.abs() < 1e-12 {
        Some(0.0)
    } else {
        None
    };
    Ok(SimulateReport { q, s, dist: dist.label(), samples, seed, streams, result, reference, z_score })
}

pub fn cmd_verify(suite: SuiteArg) -> Result<Vec<CheckResult>, CliError> {
    let results = match suite {
        SuiteArg::Lemma1 => lemma1_suite(),
        SuiteArg::Lemma2 => lemma2_suite(),
        SuiteArg::Consistency => consistency_suite(),
    }?;
    Ok(results)
}

pub fn format_checks(suite: &str, results: &[CheckResult]) -> String {
    let mut out = String::new();
    for r in results {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{tag} {} {}", r.name, r.detail);
    }
    let passed = results.iter().filter(|r| r.passed).count();
    let _ = writeln!(out, "{suite}: {passed}/{} passed", results.len());
    out
}

/// Rendered output of a command and whether it succeeded.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub success: bool,
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let ok = |text: String| Ok(Report { text, success: true });
    match &cli.command {
        Command::Bounds { mode, grid } => ok(curves_to_csv(&cmd_bounds(*mode, &GammaGrid::from(*grid))?)),
        Command::Figure { id, grid } => ok(curves_to_csv(&cmd_figure(*id, &GammaGrid::from(*grid))?)),
        Command::Finite { instance } => {
            ok(json(&cmd_finite(instance.q, instance.s, &DistSpec::parse(&instance.dist))?))
        }
        Command::GammaStar { tol } => ok(json(&cmd_gamma_star(*tol)?)),
        Command::Simulate { instance, samples, seed, streams, estimator } => ok(json(&cmd_simulate(
            instance.q,
            instance.s,
            &DistSpec::parse(&instance.dist),
            *samples,
            *seed,
            *streams,
            *estimator,
        )?)),
        Command::Verify { suite } => {
            let results = cmd_verify(*suite)?;
            let name = suite.to_possible_value().expect("no skipped variants").get_name().to_string();
            Ok(Report { text: format_checks(&name, &results), success: results.iter().all(|r| r.passed) })
        }
    }
}

/// Runs the command and delivers its output; returns the process exit code.
pub fn main_with(cli: &Cli) -> i32 {
    match run(cli) {
        Ok(report) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &report.text).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => {
                    print!("{}", report.text);
                    Ok(())
                }
            };
            if let Err(msg) = written {
                eprintln!("error: {msg}");
                return ExitKind::Usage.code();
            }
            if report.success {
                0
            } else {
                ExitKind::VerificationFailed.code()
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
