use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Abscissa, Case, ExperimentError, Method, SweepConfig};
use crate::analytic::AnalyticMethod;
use crate::model::{Scheme, SystemParams};
use crate::specfun::DEFAULT_ABS_TOL;

pub const DEFAULT_TRIALS: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
}

impl FigureId {
    pub const ALL: [FigureId; 6] =
        [FigureId::Fig2, FigureId::Fig3, FigureId::Fig4, FigureId::Fig5, FigureId::Fig6, FigureId::Fig7];

    pub fn as_str(self) -> &'static str {
        match self {
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureId {
    type Err = ExperimentError;
    fn from_str(s: &str) -> Result<Self, ExperimentError> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| ExperimentError::Invalid(format!("unknown figure '{s}' (expected fig2 to fig7)")))
    }
}

/// ρ₁ grid in dB, inclusive, 2.5 dB apart.
fn db_grid(lo: f64, hi: f64) -> Vec<f64> {
    let steps = ((hi - lo) / 2.5).round() as usize;
    (0..=steps).map(|i| lo + 2.5 * i as f64).collect()
}

/// (N, M) pairs of the single-scheme figures, interferers at 0 dB.
fn antenna_cases() -> Vec<Case> {
    [(2, 1), (3, 1), (3, 2), (4, 3)].iter().map(|&(n, m)| Case::new(n, vec![1.0; m])).collect()
}

/// Splits of a total 3ρ̄ over three interferers, for ρ̄ at 0 dB and 10 dB.
fn split_cases() -> Vec<Case> {
    let mut cases = Vec::new();
    for (avg, tag) in [(1.0, "0"), (10.0, "10")] {
        for (name, w) in [
            ("equal", [1.0 / 3.0; 3]),
            ("2/3,1/6,1/6", [2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0]),
            ("0.8,0.1,0.1", [0.8, 0.1, 0.1]),
        ] {
            let rho_i: Vec<f64> = w.iter().map(|f| 3.0 * avg * f).collect();
            let rho_i = if name == "equal" { vec![avg; 3] } else { rho_i };
            cases.push(Case::new(2, rho_i).with_label(format!("N=2 M=3 mean_rho_i_db={tag} split={name}")));
        }
    }
    cases
}

/// The sweep behind each figure, at 10⁶ trials per Monte Carlo point.
pub fn figure_recipe(id: FigureId) -> SweepConfig {
    use AnalyticMethod::*;
    let template = SystemParams::equal_power(3, 2, 1.0, 1.0, 1.0, 1.0).expect("valid template");
    let base = |schemes: Vec<Scheme>, methods: Vec<Method>, cases: Vec<Case>, values: Vec<f64>| SweepConfig {
        schemes,
        methods,
        abscissa: Abscissa::Rho1Db,
        values,
        template: template.clone(),
        cases,
        trials: DEFAULT_TRIALS,
        seed: DEFAULT_SEED,
        tol: DEFAULT_ABS_TOL,
    };
    let a = Method::Analytic;
    let mc = Method::MonteCarlo;
    match id {
        FigureId::Fig2 => {
            base(vec![Scheme::Mrc], vec![a(Exact), a(LowerBound), a(HighSnr), mc], antenna_cases(), db_grid(0.0, 30.0))
        }
        FigureId::Fig3 => base(vec![Scheme::Zf], vec![a(Exact), a(HighSnr), mc], antenna_cases(), db_grid(0.0, 30.0)),
        FigureId::Fig4 => {
            base(vec![Scheme::Mmse], vec![a(Exact), a(LowerBound), a(HighSnr), mc], antenna_cases(), db_grid(0.0, 30.0))
        }
        FigureId::Fig5 => base(vec![Scheme::Mmse], vec![a(Exact), mc], split_cases(), db_grid(0.0, 30.0)),
        FigureId::Fig6 => base(
            Scheme::ALL.to_vec(),
            vec![mc],
            vec![Case::new(3, vec![1.0; 2]), Case::new(3, vec![1000.0; 2])],
            db_grid(0.0, 40.0),
        ),
        FigureId::Fig7 => SweepConfig {
            abscissa: Abscissa::NAntennas,
            template: SystemParams::equal_power(3, 2, 10.0, 1.0, 1.0, 1.0).expect("valid template"),
            ..base(
                Scheme::ALL.to_vec(),
                vec![a(Exact), mc],
                vec![Case::interference_only(vec![1.0; 2])],
                (3..=10).map(f64::from).collect(),
            )
        },
    }
}
