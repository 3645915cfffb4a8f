//! Parameter sweeps, figure recipes and analytic-versus-simulation reports.

mod io;
mod recipe;
pub(crate) mod report;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytic::{self, AnalyticError, AnalyticMethod, EvalOptions};
use crate::model::{db_to_linear, linear_to_db, Scheme, SystemParams};
use crate::montecarlo::{self, McError, OutageEstimate, MIN_TRIALS};

pub use io::{
    format_db, format_value, read_csv_rows, read_json, to_csv_string, write_csv, write_json, CsvRow, CSV_HEADER,
};
pub use recipe::{figure_recipe, FigureId, DEFAULT_SEED, DEFAULT_TRIALS};
pub use report::{
    compare_report, compare_report_with, ComparisonReport, Crossovers, CurveComparison, PointGap, ReportOptions,
    SlopeFit,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("invalid sweep: {0}")]
    Invalid(String),
    #[error("ZF combining needs N > M (got N = {n}, M = {m})")]
    Infeasible { n: usize, m: usize },
    #[error("curves do not share an abscissa: {0}")]
    Shape(String),
    #[error("i/o failure: {0}")]
    Io(String),
    #[error("malformed input: {0}")]
    Format(String),
}

/// How a curve is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Method {
    Analytic(AnalyticMethod),
    MonteCarlo,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Analytic(m) => m.as_str(),
            Method::MonteCarlo => "mc",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = ExperimentError;
    fn from_str(s: &str) -> Result<Self, ExperimentError> {
        if s == "mc" {
            return Ok(Method::MonteCarlo);
        }
        s.parse::<AnalyticMethod>()
            .map(Method::Analytic)
            .map_err(|_| ExperimentError::Invalid(format!("unknown method '{s}'")))
    }
}

impl From<Method> for String {
    fn from(m: Method) -> String {
        m.as_str().to_string()
    }
}

impl TryFrom<String> for Method {
    type Error = ExperimentError;
    fn try_from(s: String) -> Result<Self, ExperimentError> {
        s.parse()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Abscissa {
    /// ρ₁ in dB; ρ₂ follows through μ.
    Rho1Db,
    /// Relay antenna count N.
    NAntennas,
}

/// One antenna/interference setting swept along the abscissa.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub label: String,
    /// Ignored when the abscissa is the antenna count.
    pub n: usize,
    pub rho_i: Vec<f64>,
}

impl Case {
    pub fn new(n: usize, rho_i: Vec<f64>) -> Self {
        Case { label: format!("N={n} {}", interference_label(&rho_i)), n, rho_i }
    }

    /// Case for antenna-count sweeps, labelled without N.
    pub fn interference_only(rho_i: Vec<f64>) -> Self {
        Case { label: interference_label(&rho_i), n: 1, rho_i }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

fn interference_label(rho_i: &[f64]) -> String {
    let m = rho_i.len();
    if m == 0 {
        return "M=0".into();
    }
    let db: Vec<String> = rho_i.iter().map(|&r| format_db(linear_to_db(r))).collect();
    if db.iter().all(|d| d == &db[0]) {
        format!("M={m} rho_i_db={}", db[0])
    } else {
        format!("M={m} rho_i_db={}", db.join(";"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub schemes: Vec<Scheme>,
    pub methods: Vec<Method>,
    pub abscissa: Abscissa,
    /// Strictly increasing; integers for [`Abscissa::NAntennas`].
    pub values: Vec<f64>,
    /// Supplies μ (or ρ₂), γ_th and whichever of ρ₁, N the abscissa leaves fixed.
    pub template: SystemParams,
    /// Settings swept in turn; empty means the template's own N and ρ_I.
    pub cases: Vec<Case>,
    pub trials: u64,
    pub seed: u64,
    /// Absolute quadrature tolerance of the integral formulas.
    pub tol: f64,
}

impl SweepConfig {
    pub fn resolved_cases(&self) -> Vec<Case> {
        if !self.cases.is_empty() {
            return self.cases.clone();
        }
        let rho_i = self.template.rho_i().to_vec();
        match self.abscissa {
            Abscissa::Rho1Db => vec![Case::new(self.template.n(), rho_i)],
            Abscissa::NAntennas => vec![Case::interference_only(rho_i)],
        }
    }

    /// Parameters of the point at abscissa value `x` for `case`.
    pub fn point(&self, case: &Case, x: f64) -> Result<SystemParams, ExperimentError> {
        let invalid = |e: crate::model::ModelError| ExperimentError::Invalid(e.to_string());
        let base = self.template.with_rho_i(case.rho_i.clone()).map_err(invalid)?;
        match self.abscissa {
            Abscissa::Rho1Db => base.with_n(case.n).and_then(|p| p.with_rho1(db_to_linear(x))).map_err(invalid),
            Abscissa::NAntennas => {
                if !(x >= 1.0 && x.fract() == 0.0 && x <= 4096.0) {
                    return Err(ExperimentError::Invalid(format!("antenna count must be a positive integer, got {x}")));
                }
                base.with_n(x as usize).map_err(invalid)
            }
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if let Some(w) = self.values.windows(2).find(|w| !(w[0] < w[1])) {
            return Err(ExperimentError::Invalid(format!(
                "abscissa values must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(ExperimentError::Invalid("abscissa values must be finite".into()));
        }
        if !(self.tol > 0.0) {
            return Err(ExperimentError::Invalid(format!("tol must be > 0, got {}", self.tol)));
        }
        if self.methods.contains(&Method::MonteCarlo) && self.trials < MIN_TRIALS {
            return Err(ExperimentError::Invalid(format!("trials must be at least {MIN_TRIALS}, got {}", self.trials)));
        }
        for case in self.resolved_cases() {
            for &x in &self.values {
                let p = self.point(&case, x)?;
                if self.schemes.contains(&Scheme::Zf) && p.n() <= p.m() {
                    return Err(ExperimentError::Infeasible { n: p.n(), m: p.m() });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub x: f64,
    pub params: SystemParams,
    /// `None` marks a gap left by a failed evaluation.
    pub probability: Option<f64>,
    pub std_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutageCurve {
    pub label: String,
    pub scheme: Scheme,
    pub method: Method,
    pub case: String,
    pub abscissa: Abscissa,
    pub points: Vec<CurvePoint>,
    /// Monte Carlo curves only.
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub provenance: SweepConfig,
}

impl OutageCurve {
    pub fn xs(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.x).collect()
    }

    pub fn values(&self) -> Vec<Option<f64>> {
        self.points.iter().map(|p| p.probability).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointFailure {
    pub curve: String,
    pub x: f64,
    pub message: String,
    /// True for numerical failures as opposed to invalid requests.
    pub numerical: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub curves: Vec<OutageCurve>,
    pub failures: Vec<PointFailure>,
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput, ExperimentError> {
    run_sweep_with(cfg, montecarlo::default_workers())
}

/// Curves come out case by case, then by scheme, then by method, in the
/// order given in `cfg`. Monte Carlo points along ρ₁ share one seed, so the
/// whole curve is computed from the same channel draws.
pub fn run_sweep_with(cfg: &SweepConfig, workers: usize) -> Result<SweepOutput, ExperimentError> {
    cfg.validate()?;
    if workers == 0 {
        return Err(ExperimentError::Invalid("workers must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| ExperimentError::Invalid(format!("cannot start worker pool: {e}")))?;
    let opts = EvalOptions { tol: cfg.tol, ..EvalOptions::default() };
    let mut curves = Vec::new();
    let mut failures = Vec::new();

    for case in cfg.resolved_cases() {
        let points: Vec<SystemParams> = cfg.values.iter().map(|&x| cfg.point(&case, x)).collect::<Result<_, _>>()?;
        // a representative point decides which analytic methods apply
        let probe = match cfg.abscissa {
            Abscissa::Rho1Db => cfg.template.with_rho_i(case.rho_i.clone()).and_then(|p| p.with_n(case.n)),
            Abscissa::NAntennas => cfg.template.with_rho_i(case.rho_i.clone()),
        }
        .map_err(|e| ExperimentError::Invalid(e.to_string()))?;

        let mc_schemes: Vec<Scheme> =
            if cfg.methods.contains(&Method::MonteCarlo) { cfg.schemes.clone() } else { Vec::new() };
        let mc = if mc_schemes.is_empty() || points.is_empty() {
            Vec::new()
        } else {
            simulate_case(cfg, &points, &mc_schemes, workers)
        };

        for (si, &scheme) in cfg.schemes.iter().enumerate() {
            for &method in &cfg.methods {
                let label = format!("{scheme} {method} {}", case.label);
                let mut curve = OutageCurve {
                    label: label.clone(),
                    scheme,
                    method,
                    case: case.label.clone(),
                    abscissa: cfg.abscissa,
                    points: Vec::with_capacity(points.len()),
                    trials: None,
                    seed: None,
                    provenance: cfg.clone(),
                };
                match method {
                    Method::Analytic(am) => {
                        if analytic::check_supported(scheme, am, &probe).is_err() {
                            continue;
                        }
                        let vals: Vec<Result<f64, AnalyticError>> = pool.install(|| {
                            points
                                .par_iter()
                                .map(|p| analytic::outage(scheme, am, p, &opts).map(|v| v.probability))
                                .collect()
                        });
                        for ((p, &x), v) in points.iter().zip(&cfg.values).zip(vals) {
                            let probability = match v {
                                Ok(v) => Some(v),
                                Err(e) => {
                                    failures.push(PointFailure {
                                        curve: label.clone(),
                                        x,
                                        numerical: e.is_numerical(),
                                        message: e.to_string(),
                                    });
                                    None
                                }
                            };
                            curve.points.push(CurvePoint { x, params: p.clone(), probability, std_error: None });
                        }
                    }
                    Method::MonteCarlo => {
                        curve.trials = Some(cfg.trials);
                        curve.seed = Some(cfg.seed);
                        for (pi, (p, &x)) in points.iter().zip(&cfg.values).enumerate() {
                            let (probability, std_error) = match &mc[pi] {
                                Ok(est) => (Some(est[si].probability), Some(est[si].std_error)),
                                Err(e) => {
                                    failures.push(PointFailure {
                                        curve: label.clone(),
                                        x,
                                        numerical: e.is_numerical(),
                                        message: e.to_string(),
                                    });
                                    (None, None)
                                }
                            };
                            curve.points.push(CurvePoint { x, params: p.clone(), probability, std_error });
                        }
                    }
                }
                curves.push(curve);
            }
        }
    }
    Ok(SweepOutput { curves, failures })
}

/// Per point, one estimate per scheme.
fn simulate_case(
    cfg: &SweepConfig,
    points: &[SystemParams],
    schemes: &[Scheme],
    workers: usize,
) -> Vec<Result<Vec<OutageEstimate>, McError>> {
    let transpose = |r: Vec<Vec<OutageEstimate>>| -> Vec<Vec<OutageEstimate>> {
        (0..points.len()).map(|pi| r.iter().map(|s| s[pi]).collect()).collect()
    };
    match cfg.abscissa {
        Abscissa::Rho1Db => match montecarlo::estimate_outage_batch(points, schemes, cfg.trials, cfg.seed, workers) {
            Ok(r) => transpose(r).into_iter().map(Ok).collect(),
            Err(e) => points.iter().map(|_| Err(e.clone())).collect(),
        },
        Abscissa::NAntennas => points
            .iter()
            .map(|p| {
                montecarlo::estimate_outage_batch(std::slice::from_ref(p), schemes, cfg.trials, cfg.seed, workers)
                    .map(|r| r.into_iter().map(|s| s[0]).collect())
            })
            .collect(),
    }
}
