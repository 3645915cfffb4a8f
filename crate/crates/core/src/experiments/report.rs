use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Abscissa, ExperimentError, Method, OutageCurve};
use crate::model::Scheme;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportOptions {
    /// ρ₁ range in dB for the slope fits; `None` uses the last 10 dB of the grid.
    pub slope_window_db: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointGap {
    pub x: f64,
    pub analytic: f64,
    pub mc: f64,
    pub std_error: f64,
    /// |analytic − mc| over the larger of the reported standard error and the
    /// one implied by the analytic value.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveComparison {
    pub scheme: Scheme,
    pub case: String,
    pub method: Method,
    pub gaps: Vec<PointGap>,
    pub max_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub label: String,
    pub from_db: f64,
    pub to_db: f64,
    /// Decades of outage per decade of ρ₁.
    pub slope: f64,
    pub points: usize,
}

/// Sign changes of the MRC − ZF gap along ρ₁ for one case and method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Crossovers {
    pub case: String,
    pub method: Method,
    pub locations_db: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub comparisons: Vec<CurveComparison>,
    pub slopes: Vec<SlopeFit>,
    pub crossovers: Vec<Crossovers>,
}

pub fn compare_report(curves: &[OutageCurve]) -> Result<ComparisonReport, ExperimentError> {
    compare_report_with(curves, &ReportOptions::default())
}

pub fn compare_report_with(curves: &[OutageCurve], opts: &ReportOptions) -> Result<ComparisonReport, ExperimentError> {
    let Some(first) = curves.first() else {
        return Ok(ComparisonReport { comparisons: vec![], slopes: vec![], crossovers: vec![] });
    };
    let xs = first.xs();
    for c in curves {
        if c.abscissa != first.abscissa || c.xs() != xs {
            return Err(ExperimentError::Shape(format!("'{}' and '{}' differ", first.label, c.label)));
        }
    }

    let mut comparisons = Vec::new();
    for an in curves.iter().filter(|c| matches!(c.method, Method::Analytic(_))) {
        let Some(mc) =
            curves.iter().find(|c| c.method == Method::MonteCarlo && c.scheme == an.scheme && c.case == an.case)
        else {
            continue;
        };
        let trials = mc.trials.unwrap_or(0) as f64;
        let gaps: Vec<PointGap> = an
            .points
            .iter()
            .zip(&mc.points)
            .filter_map(|(a, m)| {
                let (av, mv) = (a.probability?, m.probability?);
                let se = m.std_error.unwrap_or(0.0);
                let implied = if trials > 0.0 { (av * (1.0 - av) / trials).sqrt() } else { 0.0 };
                let gap = (av - mv).abs();
                let denom = se.max(implied);
                let ratio = if gap == 0.0 {
                    0.0
                } else if denom > 0.0 {
                    gap / denom
                } else {
                    f64::INFINITY
                };
                Some(PointGap { x: a.x, analytic: av, mc: mv, std_error: se, ratio })
            })
            .collect();
        let max_ratio = gaps.iter().map(|g| g.ratio).fold(0.0, f64::max);
        comparisons.push(CurveComparison {
            scheme: an.scheme,
            case: an.case.clone(),
            method: an.method,
            gaps,
            max_ratio,
        });
    }

    let mut slopes = Vec::new();
    if first.abscissa == Abscissa::Rho1Db && !xs.is_empty() {
        let (lo, hi) = opts.slope_window_db.unwrap_or((xs[xs.len() - 1] - 10.0, xs[xs.len() - 1]));
        for c in curves.iter().filter(|c| matches!(c.method, Method::Analytic(_))) {
            let pts: Vec<(f64, f64)> = c
                .points
                .iter()
                .filter(|p| p.x >= lo && p.x <= hi)
                .filter_map(|p| p.probability.filter(|&v| v > 0.0).map(|v| (p.x / 10.0, v.log10())))
                .collect();
            if let Some(slope) = least_squares_slope(&pts) {
                slopes.push(SlopeFit { label: c.label.clone(), from_db: lo, to_db: hi, slope, points: pts.len() });
            }
        }
    }

    let mut crossovers = Vec::new();
    if first.abscissa == Abscissa::Rho1Db {
        for mrc in curves.iter().filter(|c| c.scheme == Scheme::Mrc) {
            let Some(zf) =
                curves.iter().find(|c| c.scheme == Scheme::Zf && c.case == mrc.case && c.method == mrc.method)
            else {
                continue;
            };
            crossovers.push(Crossovers {
                case: mrc.case.clone(),
                method: mrc.method,
                locations_db: sign_changes(&xs, &mrc.values(), &zf.values()),
            });
        }
    }

    Ok(ComparisonReport { comparisons, slopes, crossovers })
}

/// Slope of the least-squares line through `pts`; needs two distinct abscissas.
pub(crate) fn least_squares_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Zeros of a − b located by linear interpolation between grid points;
/// points where either side is missing or the gap is exactly zero are skipped.
fn sign_changes(xs: &[f64], a: &[Option<f64>], b: &[Option<f64>]) -> Vec<f64> {
    let diffs: Vec<(f64, f64)> = xs
        .iter()
        .zip(a.iter().zip(b))
        .filter_map(|(&x, (a, b))| Some((x, (*a)? - (*b)?)))
        .filter(|&(_, d)| d != 0.0)
        .collect();
    diffs
        .windows(2)
        .filter(|w| (w[0].1 > 0.0) != (w[1].1 > 0.0))
        .map(|w| {
            let ((x0, d0), (x1, d1)) = (w[0], w[1]);
            x0 + (x1 - x0) * d0 / (d0 - d1)
        })
        .collect()
}

impl ComparisonReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.comparisons {
            let _ = writeln!(s, "{} {} vs mc [{}]: max gap/SE = {:.3}", c.scheme, c.method, c.case, c.max_ratio);
        }
        for f in &self.slopes {
            let _ = writeln!(
                s,
                "slope {} over {}..{} dB: {:.3} ({} points)",
                f.label, f.from_db, f.to_db, f.slope, f.points
            );
        }
        for x in &self.crossovers {
            let locs: Vec<String> = x.locations_db.iter().map(|v| format!("{v:.2}")).collect();
            let _ = writeln!(
                s,
                "mrc/zf crossovers {} [{}]: {} at [{}] dB",
                x.method,
                x.case,
                x.locations_db.len(),
                locs.join(", ")
            );
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolated_crossing() {
        let xs = [0.0, 2.5, 5.0];
        let a = [Some(1.0), Some(0.5), Some(0.1)];
        let b = [Some(0.8), Some(0.6), Some(0.4)];
        let z = sign_changes(&xs, &a, &b);
        assert_eq!(z.len(), 1);
        // 0.2 → −0.1 over 2.5 dB
        assert!((z[0] - 2.5 * 0.2 / 0.3).abs() < 1e-12);
    }

    #[test]
    fn slope_of_a_line() {
        let pts: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, 3.0 - 2.0 * i as f64)).collect();
        assert!((least_squares_slope(&pts).unwrap() + 2.0).abs() < 1e-14);
        assert_eq!(least_squares_slope(&pts[..1]), None);
    }
}
