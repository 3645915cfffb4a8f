use std::fs::File;

use proptest::prelude::*;
use relaylink::experiments::{
    compare_report_with, read_csv_rows, read_json, to_csv_string, write_csv, write_json, ReportOptions, CSV_HEADER,
};
use relaylink::{
    figure_recipe, run_sweep, Abscissa, AnalyticMethod, Case, ExperimentError, FigureId, Method, OutageCurve, Scheme,
    SweepConfig, SystemParams,
};

fn small_sweep(schemes: Vec<Scheme>, methods: Vec<Method>, values: Vec<f64>) -> SweepConfig {
    SweepConfig {
        schemes,
        methods,
        abscissa: Abscissa::Rho1Db,
        values,
        template: SystemParams::equal_power(3, 2, 1.0, 1.0, 1.0, 1.0).unwrap(),
        cases: vec![],
        trials: 20_000,
        seed: 3,
        tol: 1e-6,
    }
}

fn curve<'a>(curves: &'a [OutageCurve], scheme: Scheme, method: Method, case: &str) -> &'a OutageCurve {
    curves.iter().find(|c| c.scheme == scheme && c.method == method && c.case == case).expect("curve present")
}

#[test]
fn recipes() {
    let f6 = figure_recipe(FigureId::Fig6);
    assert_eq!(f6.schemes, Scheme::ALL.to_vec());
    let cases = f6.resolved_cases();
    assert!(cases.iter().all(|c| c.n == 3 && c.rho_i.len() == 2));
    assert_eq!(cases.iter().map(|c| c.rho_i[0]).collect::<Vec<_>>(), vec![1.0, 1000.0]);

    let f7 = figure_recipe(FigureId::Fig7);
    assert_eq!(f7.abscissa, Abscissa::NAntennas);
    assert_eq!((f7.template.rho1(), f7.template.rho2()), (10.0, 10.0));

    let f2 = figure_recipe(FigureId::Fig2);
    assert_eq!((f2.template.gamma_th(), f2.template.mu()), (1.0, 1.0));
    assert!(f2.resolved_cases().iter().all(|c| c.rho_i.iter().all(|&r| r == 1.0)));
    for id in FigureId::ALL {
        figure_recipe(id).validate().unwrap();
        assert_eq!(figure_recipe(id).trials, 1_000_000);
        assert_eq!(id.as_str().parse::<FigureId>().unwrap(), id);
    }
}

#[test]
fn empty_abscissa() {
    let out = run_sweep(&small_sweep(
        Scheme::ALL.to_vec(),
        vec![Method::Analytic(AnalyticMethod::Exact), Method::MonteCarlo],
        vec![],
    ))
    .unwrap();
    assert!(out.failures.is_empty());
    assert!(out.curves.iter().all(|c| c.points.is_empty()));
}

#[test]
fn infeasible_and_invalid_sweeps() {
    let mut cfg = small_sweep(vec![Scheme::Zf], vec![Method::MonteCarlo], vec![0.0]);
    cfg.cases = vec![Case::new(2, vec![1.0; 2])];
    assert_eq!(run_sweep(&cfg).unwrap_err(), ExperimentError::Infeasible { n: 2, m: 2 });
    let cfg = small_sweep(vec![Scheme::Mrc], vec![Method::MonteCarlo], vec![5.0, 0.0]);
    assert!(matches!(run_sweep(&cfg), Err(ExperimentError::Invalid(_))));
}

#[test]
fn fig7_curves_fall_with_n() {
    let mut cfg = figure_recipe(FigureId::Fig7);
    cfg.trials = 100_000;
    let out = run_sweep(&cfg).unwrap();
    assert_eq!(out.curves.len(), 6);
    for c in &out.curves {
        let v: Vec<f64> = c.values().into_iter().map(Option::unwrap).collect();
        let se: Vec<f64> = c.points.iter().map(|p| p.std_error.unwrap_or(0.0)).collect();
        for i in 1..v.len() {
            assert!(v[i] <= v[i - 1] + 3.0 * (se[i] + se[i - 1]), "{}: {:?}", c.label, v);
        }
    }
}

#[test]
fn fig6_properties() {
    let mut cfg = figure_recipe(FigureId::Fig6);
    cfg.trials = 200_000;
    cfg.methods.insert(0, Method::Analytic(AnalyticMethod::Exact));
    let out = run_sweep(&cfg).unwrap();
    let weak = "N=3 M=2 rho_i_db=0";
    let strong = "N=3 M=2 rho_i_db=30";
    let mc = Method::MonteCarlo;
    let ex = Method::Analytic(AnalyticMethod::Exact);
    for case in [weak, strong] {
        let mmse = curve(&out.curves, Scheme::Mmse, mc, case);
        for other in [Scheme::Mrc, Scheme::Zf] {
            let o = curve(&out.curves, other, mc, case);
            for (a, b) in mmse.points.iter().zip(&o.points) {
                let se = a.std_error.unwrap() + b.std_error.unwrap();
                assert!(a.probability.unwrap() <= b.probability.unwrap() + 3.0 * se);
            }
        }
    }
    let w = curve(&out.curves, Scheme::Mrc, ex, weak).values();
    let s = curve(&out.curves, Scheme::Mrc, ex, strong).values();
    assert!(w.iter().zip(&s).all(|(a, b)| b.unwrap() > a.unwrap()));
    let zw = curve(&out.curves, Scheme::Zf, mc, weak);
    let zs = curve(&out.curves, Scheme::Zf, mc, strong);
    assert_eq!(zw.values(), zs.values());
    assert_eq!(curve(&out.curves, Scheme::Zf, ex, weak).values(), curve(&out.curves, Scheme::Zf, ex, strong).values());
}

#[test]
fn fig5_equal_split_is_worst() {
    let mut cfg = figure_recipe(FigureId::Fig5);
    cfg.trials = 200_000;
    let out = run_sweep(&cfg).unwrap();
    for tag in ["0", "10"] {
        let prefix = format!("N=2 M=3 mean_rho_i_db={tag} split=");
        let equal =
            curve(&out.curves, Scheme::Mmse, Method::Analytic(AnalyticMethod::Exact), &format!("{prefix}equal"));
        for split in ["2/3,1/6,1/6", "0.8,0.1,0.1"] {
            let mc = curve(&out.curves, Scheme::Mmse, Method::MonteCarlo, &format!("{prefix}{split}"));
            for (e, m) in equal.points.iter().zip(&mc.points) {
                assert!(
                    m.probability.unwrap() <= e.probability.unwrap() + 3.0 * m.std_error.unwrap(),
                    "{split} at {}",
                    e.x
                );
            }
        }
    }
}

#[test]
fn report_slopes_gaps_and_shape() {
    let cfg = SweepConfig {
        values: vec![25.0, 27.5, 30.0, 32.5, 35.0],
        ..small_sweep(vec![Scheme::Zf], vec![Method::Analytic(AnalyticMethod::Exact)], vec![])
    };
    let out = run_sweep(&cfg).unwrap();
    let rep = compare_report_with(&out.curves, &ReportOptions { slope_window_db: Some((25.0, 35.0)) }).unwrap();
    assert!((rep.slopes[0].slope + 1.0).abs() < 0.3, "slope {}", rep.slopes[0].slope);

    let mut fig2 = figure_recipe(FigureId::Fig2);
    fig2.methods = vec![Method::Analytic(AnalyticMethod::Exact), Method::MonteCarlo];
    let out2 = run_sweep(&fig2).unwrap();
    let rep = compare_report_with(&out2.curves, &ReportOptions::default()).unwrap();
    assert_eq!(rep.comparisons.len(), 4);
    for c in &rep.comparisons {
        assert!(c.max_ratio <= 3.0, "{} max gap {} SE", c.case, c.max_ratio);
    }
    assert!(rep.to_text().contains("mrc"));

    let mut mixed = out.curves.clone();
    mixed.extend(out2.curves);
    assert!(matches!(compare_report_with(&mixed, &ReportOptions::default()), Err(ExperimentError::Shape(_))));
}

#[test]
fn file_roundtrips() {
    let cfg = small_sweep(
        vec![Scheme::Mrc, Scheme::Mmse],
        vec![Method::Analytic(AnalyticMethod::Exact), Method::Analytic(AnalyticMethod::HighSnr), Method::MonteCarlo],
        vec![0.0, 7.5, 15.0],
    );
    let curves = run_sweep(&cfg).unwrap().curves;
    let dir = tempfile::tempdir().unwrap();

    let json = dir.path().join("curves.json");
    write_json(&curves, File::create(&json).unwrap()).unwrap();
    assert_eq!(read_json(File::open(&json).unwrap()).unwrap(), curves);

    let csv = dir.path().join("curves.csv");
    write_csv(&curves, File::create(&csv).unwrap()).unwrap();
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
    assert_eq!(text, to_csv_string(&curves));
    let rows = read_csv_rows(text.as_bytes()).unwrap();
    let points: Vec<_> = curves.iter().flat_map(|c| c.points.iter().map(move |p| (c, p))).collect();
    assert_eq!(rows.len(), points.len());
    for (row, (c, p)) in rows.iter().zip(points) {
        assert_eq!((row.scheme, row.method), (c.scheme, c.method));
        assert_eq!(row.value, p.probability);
        assert_eq!(row.std_err, p.std_error);
        assert_eq!(row.trials.is_some(), c.method == Method::MonteCarlo);
        assert_eq!(row.rho_i_db, vec![0.0, 0.0]);
        assert_eq!(row.rho1_db, p.x);
    }
    assert!(matches!(read_csv_rows("a,b\n1,2\n".as_bytes()), Err(ExperimentError::Format(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn csv_is_deterministic(seed in any::<u64>(), workers in 1usize..6) {
        let mut cfg = small_sweep(Scheme::ALL.to_vec(), vec![Method::MonteCarlo], vec![0.0, 10.0]);
        cfg.seed = seed;
        cfg.trials = 2000;
        let a = to_csv_string(&relaylink::experiments::run_sweep_with(&cfg, 1).unwrap().curves);
        let b = to_csv_string(&relaylink::experiments::run_sweep_with(&cfg, workers).unwrap().curves);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn method_names_roundtrip(i in 0usize..5) {
        let m = [
            Method::Analytic(AnalyticMethod::Exact),
            Method::Analytic(AnalyticMethod::LowerBound),
            Method::Analytic(AnalyticMethod::HighSnr),
            Method::Analytic(AnalyticMethod::LargeN),
            Method::MonteCarlo,
        ][i];
        prop_assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
    }
}
