//! The acceptance suite: eleven checks tying the closed forms, the simulator
//! and the special functions together. Shared by the integration test target
//! and the `selftest` subcommand.

use std::time::Instant;

use crate::analytic::{self, cdf_z_piecewise, cdf_z_unified, outage_largen, AnalyticMethod, EvalOptions};
use crate::experiments::{
    compare_report_with, run_sweep_with, to_csv_string, Abscissa, Case, Method, OutageCurve, ReportOptions, SweepConfig,
};
use crate::model::{db_to_linear, Scheme, SystemParams};
use crate::montecarlo::{
    combiner_mmse, combiner_mrc, combiner_zf, draw_channel, estimate_outage_batch, sinr_generic, sinr_scheme,
    trial_stream, z_statistic, OutageEstimate,
};
use crate::specfun::de::integrate_exp_sinh;
use crate::specfun::gamma::gamma_p_int;
use crate::specfun::quad::integrate_finite;
use crate::specfun::{bessel_k_int, gauss_2f1_family, integrate_semi_infinite, Dd, DEFAULT_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    /// Trial counts as stated in the criteria.
    Full,
    /// Reduced trial counts for a quick self-test; tolerances are unchanged.
    Quick,
}

impl Scale {
    fn pick<T>(self, full: T, quick: T) -> T {
        match self {
            Scale::Full => full,
            Scale::Quick => quick,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {} {}: {} ({:.1} s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.detail,
            self.seconds
        )
    }
}

pub const TITLES: [&str; 11] = [
    "dual-path agreement",
    "per-draw SINR identity",
    "lower-bound ordering and tightness",
    "diversity orders",
    "high-SNR approximation",
    "scheme ordering and crossover",
    "ZF interference invariance",
    "large-N limit",
    "distribution oracles",
    "special functions",
    "determinism",
];

const SEED: u64 = 20240601;
const GRID_NM: [(usize, usize); 4] = [(2, 1), (3, 1), (3, 2), (4, 3)];
const GRID_DB: [f64; 5] = [0.0, 5.0, 10.0, 15.0, 20.0];

pub fn run_all(scale: Scale, workers: usize) -> Vec<CriterionResult> {
    (1..=11).map(|id| run_criterion(id, scale, workers)).collect()
}

/// Runs criterion `id` (1 to 11).
pub fn run_criterion(id: u8, scale: Scale, workers: usize) -> CriterionResult {
    let start = Instant::now();
    let outcome = match id {
        1 => c1_dual_path(scale, workers),
        2 => c2_sinr_identity(scale),
        3 => c3_lower_bounds(),
        4 => c4_diversity(),
        5 => c5_highsnr(),
        6 => c6_ordering(scale, workers),
        7 => c7_zf_invariance(scale, workers),
        8 => c8_large_n(scale, workers),
        9 => c9_distributions(scale),
        10 => c10_special_functions(),
        11 => c11_determinism(scale),
        _ => Err(format!("no criterion {id}")),
    };
    let (passed, detail) = match outcome {
        Ok(Verdict { passed, detail }) => (passed, detail),
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionResult {
        id,
        title: TITLES.get(id as usize - 1).copied().unwrap_or("unknown"),
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Result<Verdict, String> {
    Ok(Verdict { passed, detail })
}

fn params(n: usize, m: usize, rho1_db: f64, rho_i: f64, gamma_th: f64) -> SystemParams {
    SystemParams::equal_power(n, m, db_to_linear(rho1_db), 1.0, gamma_th, rho_i).expect("valid parameters")
}

fn exact(scheme: Scheme, p: &SystemParams) -> Result<f64, String> {
    analytic::outage(scheme, AnalyticMethod::Exact, p, &EvalOptions::default())
        .map(|v| v.probability)
        .map_err(|e| e.to_string())
}

fn eval(scheme: Scheme, method: AnalyticMethod, p: &SystemParams) -> Result<f64, String> {
    analytic::outage(scheme, method, p, &EvalOptions::default()).map(|v| v.probability).map_err(|e| e.to_string())
}

fn dual_path_config(trials: u64) -> SweepConfig {
    SweepConfig {
        schemes: Scheme::ALL.to_vec(),
        methods: vec![Method::Analytic(AnalyticMethod::Exact), Method::MonteCarlo],
        abscissa: Abscissa::Rho1Db,
        values: GRID_DB.to_vec(),
        template: params(2, 1, 0.0, 1.0, 1.0),
        cases: GRID_NM.iter().map(|&(n, m)| Case::new(n, vec![1.0; m])).collect(),
        trials,
        seed: SEED,
        tol: crate::specfun::DEFAULT_ABS_TOL,
    }
}

fn find<'a>(curves: &'a [OutageCurve], scheme: Scheme, method: Method, case: &str) -> Option<&'a OutageCurve> {
    curves.iter().find(|c| c.scheme == scheme && c.method == method && c.case == case)
}

fn c1_dual_path(scale: Scale, workers: usize) -> Result<Verdict, String> {
    let trials = scale.pick(1_000_000, 100_000);
    let out = run_sweep_with(&dual_path_config(trials), workers).map_err(|e| e.to_string())?;
    if let Some(f) = out.failures.first() {
        return Err(format!("{} at {}: {}", f.curve, f.x, f.message));
    }
    let mut checked = 0;
    let mut worst = (0.0f64, String::new());
    let mut bad = Vec::new();
    for an in out.curves.iter().filter(|c| c.method != Method::MonteCarlo) {
        let mc = find(&out.curves, an.scheme, Method::MonteCarlo, &an.case).ok_or("missing Monte Carlo curve")?;
        for (a, m) in an.points.iter().zip(&mc.points) {
            let (av, mv) = (a.probability.unwrap(), m.probability.unwrap());
            // the quick scale also admits the standard error implied by the exact value
            let se = match scale {
                Scale::Full => m.std_error.unwrap(),
                Scale::Quick => m.std_error.unwrap().max((av * (1.0 - av) / trials as f64).sqrt()),
            };
            let excess = (av - mv).abs() - (3.0 * se + 1e-5);
            let z = (av - mv).abs() / se.max(1e-300);
            checked += 1;
            if z > worst.0 && se > 0.0 {
                worst = (z, format!("{} {} dB", an.label, a.x));
            }
            if excess > 0.0 {
                bad.push(format!("{} at {} dB: exact {av:.4e}, mc {mv:.4e} ± {se:.1e}", an.label, a.x));
            }
        }
    }
    verdict(
        bad.is_empty() && checked == 60,
        format!(
            "{checked} points at {trials} trials, largest gap {:.2} SE ({}){}",
            worst.0,
            worst.1,
            if bad.is_empty() { String::new() } else { format!("; outside 3 SE + 1e-5: {}", bad.join("; ")) }
        ),
    )
}

fn c2_sinr_identity(scale: Scale) -> Result<Verdict, String> {
    let draws = scale.pick(10_000, 2_000);
    let p = SystemParams::new(4, 10.0, 1.0, 1.0, vec![1.0, 1.0]).expect("valid parameters");
    let mut worst = 0.0f64;
    for t in 0..draws {
        let d = draw_channel(&mut trial_stream(SEED, t), 4, 2);
        for scheme in Scheme::ALL {
            let w1 = match scheme {
                Scheme::Mrc => combiner_mrc(&d),
                Scheme::Zf => combiner_zf(&d),
                Scheme::Mmse => Ok(combiner_mmse(&d, &p)),
            }
            .map_err(|e| e.to_string())?;
            let g = sinr_generic(&d, &w1, &p, scheme).map_err(|e| e.to_string())?.sinr;
            let s = sinr_scheme(&d, &p, scheme).map_err(|e| e.to_string())?.sinr;
            worst = worst.max((g - s).abs() / s.abs());
        }
    }
    verdict(worst <= 1e-10, format!("{draws} draws per scheme, max relative difference {worst:.2e}"))
}

fn c3_lower_bounds() -> Result<Verdict, String> {
    let mut violations = Vec::new();
    let mut worst_high = (0.0f64, String::new());
    for &(n, m) in &GRID_NM {
        for &db in &GRID_DB {
            let p = params(n, m, db, 1.0, 1.0);
            for scheme in [Scheme::Mrc, Scheme::Mmse] {
                let e = exact(scheme, &p)?;
                let l = eval(scheme, AnalyticMethod::LowerBound, &p)?;
                if l > e + 2e-6 {
                    violations.push(format!("{scheme} N={n} M={m} {db} dB"));
                }
                let rel = (e - l) / e;
                if db >= 15.0 && rel > worst_high.0 {
                    worst_high = (rel, format!("{scheme} N={n} M={m} at {db} dB"));
                }
            }
        }
    }
    verdict(
        violations.is_empty() && worst_high.0 <= 0.05,
        format!(
            "ordering violations: {}; largest relative gap at >= 15 dB {:.2}% ({}), limit 5%",
            if violations.is_empty() { "none".to_string() } else { violations.join(", ") },
            100.0 * worst_high.0,
            worst_high.1
        ),
    )
}

fn slope_over(scheme: Scheme, n: usize, m: usize, lo: f64, hi: f64) -> Result<f64, String> {
    let steps = ((hi - lo) / 2.5).round() as usize;
    let pts = (0..=steps)
        .map(|i| {
            let db = lo + 2.5 * i as f64;
            exact(scheme, &params(n, m, db, 1.0, 1.0)).map(|v| (db / 10.0, v.log10()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    crate::experiments::report::least_squares_slope(&pts).ok_or_else(|| "degenerate fit".into())
}

fn c4_diversity() -> Result<Verdict, String> {
    let mut parts = Vec::new();
    let mut ok = true;
    for &(n, m) in &[(3usize, 1usize), (3, 2), (4, 2)] {
        for scheme in Scheme::ALL {
            let want = if scheme == Scheme::Zf { -((n - m) as f64) } else { -(n as f64) };
            let s = slope_over(scheme, n, m, 30.0, 40.0)?;
            ok &= (s - want).abs() <= 0.3;
            parts.push(format!("{scheme}({n},{m}) {s:.3}/{want}"));
        }
    }
    verdict(ok, parts.join(", "))
}

fn c5_highsnr() -> Result<Verdict, String> {
    let p = params(3, 2, 35.0, 1.0, 1.0);
    let mut parts = Vec::new();
    let mut ok = true;
    for scheme in Scheme::ALL {
        let e = exact(scheme, &p)?;
        let h = eval(scheme, AnalyticMethod::HighSnr, &p)?;
        let rel = (h - e).abs() / e;
        ok &= rel <= 0.10;
        parts.push(format!("{scheme} {:.3}%", 100.0 * rel));
    }
    verdict(ok, format!("relative error at 35 dB, N=3 M=2: {}", parts.join(", ")))
}

fn c6_ordering(scale: Scale, workers: usize) -> Result<Verdict, String> {
    let trials = scale.pick(1_000_000, 100_000);
    let grid: Vec<f64> = (0..=16).map(|i| 2.5 * i as f64).collect();
    let mut cfg = crate::experiments::figure_recipe(crate::experiments::FigureId::Fig6);
    cfg.trials = trials;
    cfg.seed = SEED;
    cfg.values = grid.clone();
    cfg.methods = vec![Method::Analytic(AnalyticMethod::Exact), Method::MonteCarlo];
    let out = run_sweep_with(&cfg, workers).map_err(|e| e.to_string())?;
    if let Some(f) = out.failures.first() {
        return Err(format!("{} at {}: {}", f.curve, f.x, f.message));
    }
    let mut notes = Vec::new();
    let mut ok = true;
    for case in cfg.resolved_cases() {
        for method in [Method::MonteCarlo, Method::Analytic(AnalyticMethod::Exact)] {
            let get = |s| find(&out.curves, s, method, &case.label).ok_or("missing curve");
            let (mrc, zf, mmse) = (get(Scheme::Mrc)?, get(Scheme::Zf)?, get(Scheme::Mmse)?);
            for (i, x) in grid.iter().enumerate() {
                let v = |c: &OutageCurve| (c.points[i].probability.unwrap(), c.points[i].std_error.unwrap_or(0.0));
                let (a, sa) = v(mmse);
                for (b, sb) in [v(mrc), v(zf)] {
                    let slack = if method == Method::MonteCarlo { 3.0 * (sa * sa + sb * sb).sqrt() } else { 2e-6 };
                    if a > b + slack {
                        ok = false;
                        notes.push(format!("MMSE above another scheme ({method}, {}, {} dB)", case.label, x));
                    }
                }
            }
        }
    }
    // crossover on the noise-free curves at ρ_I = 30 dB
    let strong = cfg.resolved_cases().into_iter().find(|c| c.rho_i[0] == 1000.0).ok_or("missing strong case")?;
    let exact_curves: Vec<OutageCurve> = out
        .curves
        .iter()
        .filter(|c| c.case == strong.label && c.method == Method::Analytic(AnalyticMethod::Exact))
        .cloned()
        .collect();
    let report = compare_report_with(&exact_curves, &ReportOptions::default()).map_err(|e| e.to_string())?;
    let crossings = report.crossovers.first().map(|c| c.locations_db.clone()).unwrap_or_default();
    let at = |s: Scheme, db: f64| -> f64 {
        let c = find(&exact_curves, s, Method::Analytic(AnalyticMethod::Exact), &strong.label).unwrap();
        c.points.iter().find(|p| p.x == db).and_then(|p| p.probability).unwrap()
    };
    let low_ok = [0.0, 2.5, 5.0].iter().all(|&db| at(Scheme::Zf, db) < at(Scheme::Mrc, db));
    let high_ok = grid.iter().filter(|&&db| db >= 30.0).all(|&db| at(Scheme::Mrc, db) < at(Scheme::Zf, db));
    ok &= low_ok && high_ok && crossings.len() == 1;
    notes.push(format!(
        "rho_i 30 dB: ZF < MRC at 0-5 dB {low_ok}, MRC < ZF at >= 30 dB {high_ok}, crossovers in 0-40 dB at {:?} dB",
        crossings.iter().map(|x| (x * 100.0).round() / 100.0).collect::<Vec<_>>()
    ));
    if crossings.is_empty() {
        notes.push(format!("exact curves cross at {} on an extended grid", extended_crossover(&strong.rho_i)?));
    }
    verdict(ok, notes.join("; "))
}

/// MRC/ZF crossover of the exact curves searched up to 70 dB, for the report.
fn extended_crossover(rho_i: &[f64]) -> Result<String, String> {
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=28 {
        let db = 2.5 * i as f64;
        let p = SystemParams::new(3, db_to_linear(db), 1.0, 1.0, rho_i.to_vec()).map_err(|e| e.to_string())?;
        let d = exact(Scheme::Mrc, &p)? - exact(Scheme::Zf, &p)?;
        if let Some((x0, d0)) = prev {
            if (d0 > 0.0) != (d > 0.0) {
                return Ok(format!("{:.2} dB", x0 + 2.5 * d0 / (d0 - d)));
            }
        }
        prev = Some((db, d));
    }
    Ok("no crossing below 70 dB".into())
}

fn c7_zf_invariance(scale: Scale, workers: usize) -> Result<Verdict, String> {
    let trials = scale.pick(1_000_000, 100_000);
    let grid: Vec<f64> = (0..=8).map(|i| 5.0 * i as f64).collect();
    let mut identical = true;
    for &db in &grid {
        let a = exact(Scheme::Zf, &params(3, 2, db, 1.0, 1.0))?;
        let b = exact(Scheme::Zf, &params(3, 2, db, 1000.0, 1.0))?;
        identical &= a.to_bits() == b.to_bits();
    }
    let run = |rho_i: f64| -> Result<Vec<OutageEstimate>, String> {
        let pts: Vec<SystemParams> = grid.iter().map(|&db| params(3, 2, db, rho_i, 1.0)).collect();
        estimate_outage_batch(&pts, &[Scheme::Zf], trials, SEED, workers)
            .map(|mut r| r.remove(0))
            .map_err(|e| e.to_string())
    };
    let (weak, strong) = (run(1.0)?, run(1000.0)?);
    let mc_same = weak == strong;
    verdict(
        identical && mc_same,
        format!(
            "exact bit-identical over {} points: {identical}; Monte Carlo at {trials} trials identical: {mc_same}",
            grid.len()
        ),
    )
}

/// Threshold for the large-N check; see the accompanying notes.
pub const LARGE_N_GAMMA_TH_DB: f64 = 13.0;

fn c8_large_n(scale: Scale, workers: usize) -> Result<Verdict, String> {
    let trials = scale.pick(100_000, 20_000);
    let p =
        SystemParams::equal_power(64, 2, 10.0, 1.0, db_to_linear(LARGE_N_GAMMA_TH_DB), 10.0).expect("valid parameters");
    let limit = outage_largen(&p).map_err(|e| e.to_string())?.probability;
    let est = estimate_outage_batch(std::slice::from_ref(&p), &Scheme::ALL, trials, SEED, workers)
        .map_err(|e| e.to_string())?;
    let se_under_limit = (limit * (1.0 - limit) / trials as f64).sqrt();
    let mut ok = true;
    let mut parts = Vec::new();
    for (si, scheme) in Scheme::ALL.iter().enumerate() {
        let e = est[si][0];
        let se = e.std_error.max(se_under_limit);
        let pass = match scheme {
            Scheme::Mrc => e.probability - limit > 3.0 * e.std_error && e.std_error > 0.0,
            _ => (e.probability - limit).abs() <= 3.0 * se,
        };
        ok &= pass;
        parts.push(format!("{scheme} {:.4e} ± {:.1e}", e.probability, e.std_error));
    }
    verdict(ok, format!("gamma_th {LARGE_N_GAMMA_TH_DB} dB, limit {limit:.3e}, {trials} trials: {}", parts.join(", ")))
}

/// sup |F_emp − F| of a sample against a continuous c.d.f.
fn ks_distance(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

fn dkw_band(n: usize, alpha: f64) -> f64 {
    ((2.0 / alpha).ln() / (2.0 * n as f64)).sqrt()
}

fn c9_distributions(scale: Scale) -> Result<Verdict, String> {
    let mut parts = Vec::new();
    let mut ok = true;

    let mut worst = 0.0f64;
    for &(n, m) in &[(3usize, 2usize), (2, 3), (4, 4)] {
        let p = params(n, m, 10.0, 1.0, 1.0);
        for i in 0..=100 {
            let z = 0.5 * i as f64;
            let a = cdf_z_unified(&p, z).map_err(|e| e.to_string())?;
            let b = cdf_z_piecewise(&p, z).map_err(|e| e.to_string())?;
            worst = worst.max((a - b).abs());
        }
    }
    ok &= worst <= 1e-10;
    parts.push(format!("c.d.f. forms differ by {worst:.1e}"));

    let samples = scale.pick(1_000_000, 100_000);
    let p = params(3, 2, 10.0, 1.0, 1.0);
    let zs = (0..samples as u64)
        .map(|t| z_statistic(&draw_channel(&mut trial_stream(SEED, t), 3, 2), &p))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let d = ks_distance(zs, |z| cdf_z_unified(&p, z).unwrap_or(f64::NAN));
    let band = dkw_band(samples, 0.01);
    ok &= d <= band;
    parts.push(format!("Z sup-distance {d:.2e} (band {band:.2e}, {samples} samples)"));

    let draws = 100_000usize;
    let band = dkw_band(draws, 0.01);
    let mut y1 = Vec::with_capacity(draws);
    let mut y3 = Vec::with_capacity(draws);
    for t in 0..draws as u64 {
        let d = draw_channel(&mut trial_stream(SEED ^ 0x5eed, t), 4, 2);
        y1.push(d.h1.norm_squared());
        let w = combiner_zf(&d).map_err(|e| e.to_string())?;
        y3.push((&w * &d.h1)[0].norm_sqr());
    }
    let d1 = ks_distance(y1, |x| gamma_p_int::<f64>(4, x));
    let d3 = ks_distance(y3, |x| gamma_p_int::<f64>(2, x));
    ok &= d1 <= band && d3 <= band;
    parts.push(format!("|h1|^2 vs Gamma(4,1) {d1:.2e}, h1'Ph1 vs Gamma(2,1) {d3:.2e} (band {band:.2e})"));
    verdict(ok, parts.join("; "))
}

/// ∫₀^∞ e^(−x cosh t) cosh(vt) dt in double-double.
fn bessel_oracle(v: i32, x: f64) -> Result<f64, String> {
    let r = integrate_exp_sinh(
        |t: Dd| {
            // past t = 40 the integrand is below e^(−10¹⁵) on the whole x range
            if t.to_f64() > 40.0 {
                return Dd::ZERO;
            }
            let et = t.exp();
            let ch = (et + Dd::ONE / et) * 0.5;
            let vt = t * v as f64;
            ((vt - ch * x).exp() + (-vt - ch * x).exp()) * 0.5
        },
        1e-22,
        0.0,
    )
    .map_err(|e| e.to_string())?;
    Ok(r.value.to_f64())
}

/// b ∫₀¹ t^(b−1) (1 + z t)^(−a) dt in u = ln(1 + z t), refined to a relative target.
fn hyp_oracle(a: u32, b: u32, z: f64) -> Result<f64, String> {
    let f = |u: f64| {
        let t = u.exp_m1() / z;
        b as f64 * t.powi(b as i32 - 1) * ((1.0 - a as f64) * u).exp() / z
    };
    let top = z.ln_1p();
    let rough = integrate_finite(f, 0.0, top, 1e-3, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let fine = integrate_finite(f, 0.0, top, 1e-12 * rough.value.abs(), DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    Ok(fine.value)
}

fn c10_special_functions() -> Result<Verdict, String> {
    let mut ok = true;
    let mut parts = Vec::new();

    let xs = [0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0];
    let mut worst = 0.0f64;
    for v in 0..=10 {
        for &x in &xs {
            let k = bessel_k_int(v, x).map_err(|e| e.to_string())?;
            let o = bessel_oracle(v, x)?;
            worst = worst.max((k - o).abs() / o);
        }
    }
    ok &= worst <= 1e-10;
    parts.push(format!("Bessel K max relative error {worst:.1e}"));

    let mut worst = 0.0f64;
    for a in [1u32, 2, 3, 5, 6] {
        for b in [1u32, 2, 3, 5, 6] {
            for z in [0.1, 1.0, 10.0, 100.0, 1000.0] {
                let f = gauss_2f1_family(a, b, z).map_err(|e| e.to_string())?;
                let o = hyp_oracle(a, b, z)?;
                worst = worst.max((f - o).abs() / o);
            }
        }
    }
    ok &= worst <= 1e-8;
    parts.push(format!("2F1 max relative error {worst:.1e}"));

    let k1_2 = bessel_k_int(1, 2.0).map_err(|e| e.to_string())?;
    type Case = (&'static str, fn(f64) -> f64, f64);
    let cases: [Case; 3] = [
        ("e^-x", |x| (-x).exp(), 1.0),
        ("x e^-x", |x| x * (-x).exp(), 1.0),
        ("e^(-1/x-x)/x^2", |x| (-1.0 / x - x).exp() / (x * x), 2.0 * k1_2),
    ];
    for (name, f, truth) in cases {
        let r = integrate_semi_infinite(f, 1e-6, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        let err = (r.value - truth).abs();
        let certified = r.abs_error_estimate <= 1e-6 && err <= 1e-6 && err <= r.abs_error_estimate.max(1e-15);
        ok &= certified;
        parts.push(format!("{name}: error {err:.1e} vs estimate {:.1e}", r.abs_error_estimate));
    }
    verdict(ok, parts.join("; "))
}

fn c11_determinism(scale: Scale) -> Result<Verdict, String> {
    let trials = scale.pick(1_000_000, 20_000);
    let workers: &[usize] = &[1, 4, 16];
    let mut outputs = Vec::new();
    for &w in workers {
        let out = run_sweep_with(&dual_path_config(trials), w).map_err(|e| e.to_string())?;
        outputs.push(to_csv_string(&out.curves));
    }
    let same = outputs.windows(2).all(|w| w[0].as_bytes() == w[1].as_bytes());
    verdict(
        same,
        format!(
            "criterion-1 CSV ({} bytes, {trials} trials) identical across workers {workers:?}: {same}",
            outputs[0].len()
        ),
    )
}
