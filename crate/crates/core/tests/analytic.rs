use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use relaylink::analytic::{
    cdf_z_piecewise, cdf_z_unified, highsnr_coefficient, outage_largen, outage_mrc_exact, outage_mrc_highsnr,
    outage_mrc_lower, outage_zf_exact, outage_zf_highsnr,
};
use relaylink::montecarlo::estimate_outage_with;
use relaylink::{outage, AnalyticError, AnalyticMethod, EvalOptions, Scheme, SystemParams};

const TOL: f64 = 1e-6;

fn eq(n: usize, m: usize, rho1: f64, gamma_th: f64, rho_i: f64) -> SystemParams {
    SystemParams::equal_power(n, m, rho1, 1.0, gamma_th, rho_i).unwrap()
}

fn eval(scheme: Scheme, method: AnalyticMethod, p: &SystemParams) -> f64 {
    outage(scheme, method, p, &EvalOptions::default()).unwrap().probability
}

#[test]
fn zero_threshold_gives_zero() {
    let p = SystemParams::equal_power(3, 2, 10.0, 1.0, 0.0, 1.0).unwrap();
    for (s, m) in [
        (Scheme::Mrc, AnalyticMethod::Exact),
        (Scheme::Mrc, AnalyticMethod::LowerBound),
        (Scheme::Zf, AnalyticMethod::Exact),
        (Scheme::Mmse, AnalyticMethod::Exact),
        (Scheme::Mmse, AnalyticMethod::LowerBound),
        (Scheme::Zf, AnalyticMethod::LargeN),
    ] {
        assert_eq!(eval(s, m, &p), 0.0, "{s} {m}");
    }
}

#[test]
fn hand_evaluated_values() {
    let p = eq(1, 1, 1000.0, 1.0, 1.0);
    assert!((eval(Scheme::Mrc, AnalyticMethod::HighSnr, &p) - 3e-3).abs() < 1e-15);
    assert!((eval(Scheme::Mmse, AnalyticMethod::HighSnr, &p) - 3e-3).abs() < 1e-15);
    for s in [Scheme::Mrc, Scheme::Mmse] {
        assert!((highsnr_coefficient(s, &p, &p.profile()).unwrap() - 3.0).abs() < 1e-14);
    }
    assert!(matches!(highsnr_coefficient(Scheme::Zf, &p, &p.profile()), Err(AnalyticError::Unsupported { .. })));

    // one antenna, one interferer: 1 − e^(−0.2)·10/11 at ρ₁ = ρ₂ = 10
    let lower = eval(Scheme::Mmse, AnalyticMethod::LowerBound, &eq(1, 1, 10.0, 1.0, 1.0));
    assert!((lower - (1.0 - (-0.2f64).exp() * 10.0 / 11.0)).abs() < 1e-14);

    assert!((outage_zf_highsnr(&eq(3, 2, 100.0, 1.0, 1.0)).unwrap().probability - 0.01).abs() < 1e-15);
    assert!((outage_zf_highsnr(&eq(4, 2, 100.0, 1.0, 1.0)).unwrap().probability - 5e-5).abs() < 1e-18);
    let by_mu: Vec<f64> = [0.5, 1.0, 2.0]
        .iter()
        .map(|&mu| {
            outage_zf_highsnr(&SystemParams::equal_power(3, 1, 100.0, mu, 1.0, 1.0).unwrap()).unwrap().probability
        })
        .collect();
    assert!(by_mu.iter().all(|&v| v == by_mu[0]));
}

#[test]
fn zf_without_interferers_is_the_large_n_limit() {
    for n in 1..6 {
        let p = SystemParams::new(n, 7.0, 1.3, 2.0, vec![]).unwrap();
        assert_eq!(outage_zf_exact(&p).unwrap().probability, outage_largen(&p).unwrap().probability);
    }
}

#[test]
fn zf_depends_on_n_minus_m_at_high_snr() {
    let a = outage_zf_exact(&eq(4, 3, 1000.0, 1.0, 1.0)).unwrap().probability;
    let b = outage_zf_exact(&eq(3, 2, 1000.0, 1.0, 1.0)).unwrap().probability;
    assert!((a - b).abs() / b < 0.01, "{a} vs {b}");
}

#[test]
fn zf_infeasible() {
    assert_eq!(outage_zf_exact(&eq(2, 3, 10.0, 1.0, 1.0)), Err(AnalyticError::Infeasible { n: 2, m: 3 }));
}

#[test]
fn mrc_highsnr_with_distinct_powers_against_sampled_moment() {
    // coefficient is [μ^(−2) + E(1+U₁)²]/2 with U₁ = 2E₁ + E₂ + E₃
    let p = SystemParams::new(2, 1e4, 1.0, 1.0, vec![2.0, 1.0, 1.0]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 10_000_000;
    let (mut s, mut s2) = (0.0, 0.0);
    for _ in 0..n {
        let e: [f64; 3] = [Exp1.sample(&mut rng), Exp1.sample(&mut rng), Exp1.sample(&mut rng)];
        let v = (1.0 + 2.0 * e[0] + e[1] + e[2]).powi(2);
        s += v;
        s2 += v * v;
    }
    let mean = s / n as f64;
    let se = ((s2 / n as f64 - mean * mean) / n as f64).sqrt();
    let sampled = (1.0 + mean) / 2.0 * 1e-8;
    let v = outage_mrc_highsnr(&p, &p.profile()).unwrap().probability;
    assert!((v - 16e-8).abs() < 1e-20);
    assert!((v - sampled).abs() < 4.0 * se / 2.0 * 1e-8, "{v} vs sampled {sampled}");
}

#[test]
fn mmse_profile_restriction() {
    let p = SystemParams::new(3, 10.0, 1.0, 1.0, vec![1.0, 2.0]).unwrap();
    assert!(matches!(
        outage(Scheme::Mmse, AnalyticMethod::Exact, &p, &EvalOptions::default()),
        Err(AnalyticError::UnsupportedProfile(_))
    ));
    assert!(matches!(cdf_z_unified(&p, 1.0), Err(AnalyticError::UnsupportedProfile(_))));
}

#[test]
fn cdf_forms() {
    let p = eq(3, 2, 10.0, 1.0, 1.0);
    assert_eq!(cdf_z_unified(&p, 0.0).unwrap(), 0.0);
    assert_eq!(cdf_z_piecewise(&p, 0.0).unwrap(), 0.0);
    assert!((cdf_z_unified(&p, 2.0).unwrap() - cdf_z_piecewise(&p, 2.0).unwrap()).abs() < 1e-10);
    let q = eq(3, 5, 10.0, 1.0, 2.0);
    assert!((cdf_z_unified(&q, 1.0).unwrap() - cdf_z_piecewise(&q, 1.0).unwrap()).abs() < 1e-10);
    assert!(cdf_z_unified(&p, 1e4).unwrap() > 1.0 - 1e-12);
}

fn assert_matches_mc(scheme: Scheme, p: &SystemParams) {
    let exact = eval(scheme, AnalyticMethod::Exact, p);
    let mc = estimate_outage_with(p, scheme, 1_000_000, 77, relaylink::montecarlo::default_workers()).unwrap();
    assert!(
        (exact - mc.probability).abs() <= 3.0 * mc.std_error + 1e-5,
        "{scheme}: exact {exact}, mc {} ± {}",
        mc.probability,
        mc.std_error
    );
}

#[test]
fn exact_forms_match_simulation() {
    assert_matches_mc(Scheme::Mrc, &eq(2, 1, 10.0, 1.0, 1.0));
    assert_matches_mc(Scheme::Mmse, &eq(2, 3, 10.0, 1.0, 1.0));
    assert_matches_mc(Scheme::Zf, &eq(4, 2, 10.0, 1.0, 1.0));
}

/// The bound holds everywhere but only gets within 5% of the exact value
/// from about 20 dB on (9.6% at 15 dB for N=3, M=2).
#[test]
fn lower_bound_gap_shrinks_with_snr() {
    let gap = |db: f64| {
        let p = eq(3, 2, 10f64.powf(db / 10.0), 1.0, 1.0);
        let exact = outage_mrc_exact(&p, &p.profile(), TOL).unwrap().probability;
        let lower = outage_mrc_lower(&p, &p.profile()).unwrap().probability;
        assert!(lower <= exact + 2.0 * TOL);
        (exact - lower) / exact
    };
    let gaps: Vec<f64> = [10.0, 15.0, 20.0, 25.0, 30.0].iter().map(|&d| gap(d)).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert!(gaps[2] < 0.05 && gaps[1] < 0.1, "{gaps:?}");
}

#[test]
fn highsnr_scaling_and_saturation() {
    let a = eval(Scheme::Mmse, AnalyticMethod::HighSnr, &eq(3, 2, 1e3, 1.0, 1.0));
    let b = eval(Scheme::Mmse, AnalyticMethod::HighSnr, &eq(3, 2, 1e4, 1.0, 1.0));
    assert!((b / a - 1e-3).abs() < 1e-15);
    assert_eq!(eval(Scheme::Mrc, AnalyticMethod::HighSnr, &eq(3, 2, 0.1, 10.0, 1.0)), 1.0);
    // the approximation converges to the exact value
    let p = eq(1, 1, 1e5, 1.0, 1.0);
    let exact = eval(Scheme::Mmse, AnalyticMethod::Exact, &p);
    assert!((eval(Scheme::Mmse, AnalyticMethod::HighSnr, &p) - exact).abs() / exact < 1e-3);
}

/// MMSE beats MRC in the high-SNR coefficient; a single antenna is a tie.
#[test]
fn coefficient_ordering() {
    for n in 1..=6 {
        for m in 1..=6 {
            for rho_i in [0.1, 1.0, 10.0] {
                for mu in [0.5, 1.0, 2.0] {
                    let p = SystemParams::equal_power(n, m, 1e3, mu, 1.0, rho_i).unwrap();
                    let mrc = highsnr_coefficient(Scheme::Mrc, &p, &p.profile()).unwrap();
                    let mmse = highsnr_coefficient(Scheme::Mmse, &p, &p.profile()).unwrap();
                    if n == 1 {
                        assert!((mrc - mmse).abs() <= 1e-12 * mrc, "N=1 M={m}: {mrc} vs {mmse}");
                    } else {
                        assert!(mmse < mrc, "N={n} M={m} rho_i={rho_i} mu={mu}: {mmse} >= {mrc}");
                    }
                }
            }
        }
    }
}

fn slope(scheme: Scheme, n: usize, m: usize) -> f64 {
    let pts: Vec<(f64, f64)> = (0..=4)
        .map(|i| {
            let rho1 = 10f64.powf(3.0 + 0.25 * i as f64);
            (rho1.log10(), eval(scheme, AnalyticMethod::Exact, &eq(n, m, rho1, 1.0, 1.0)).log10())
        })
        .collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
    pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>()
}

#[test]
fn diversity_orders() {
    for (n, m) in [(2, 1), (4, 1), (4, 3)] {
        assert!((slope(Scheme::Mrc, n, m) + n as f64).abs() < 0.3);
        assert!((slope(Scheme::Mmse, n, m) + n as f64).abs() < 0.3);
        assert!((slope(Scheme::Zf, n, m) + (n - m) as f64).abs() < 0.3);
    }
}

fn link() -> impl Strategy<Value = (usize, usize, f64, f64, f64)> {
    (1usize..5, 0usize..4, -5.0f64..25.0, -5.0f64..8.0, -5.0f64..15.0)
        .prop_map(|(n, m, rho1_db, gth_db, ri_db)| (n, m, rho1_db, gth_db, ri_db))
}

fn db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

fn methods(n: usize, m: usize) -> Vec<(Scheme, AnalyticMethod)> {
    let mut v = vec![
        (Scheme::Mrc, AnalyticMethod::Exact),
        (Scheme::Mrc, AnalyticMethod::LowerBound),
        (Scheme::Mrc, AnalyticMethod::HighSnr),
        (Scheme::Mmse, AnalyticMethod::Exact),
        (Scheme::Mmse, AnalyticMethod::LowerBound),
        (Scheme::Mmse, AnalyticMethod::HighSnr),
        (Scheme::Mmse, AnalyticMethod::LargeN),
    ];
    if n > m {
        v.extend([(Scheme::Zf, AnalyticMethod::Exact), (Scheme::Zf, AnalyticMethod::HighSnr)]);
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn monotone_in_threshold_and_snr((n, m, rho1_db, gth_db, ri_db) in link(), step in 0.5f64..6.0) {
        let base = eq(n, m, db(rho1_db), db(gth_db), db(ri_db));
        let harder = eq(n, m, db(rho1_db), db(gth_db + step), db(ri_db));
        let stronger = eq(n, m, db(rho1_db + step), db(gth_db), db(ri_db));
        for (s, meth) in methods(n, m) {
            let v = eval(s, meth, &base);
            prop_assert!((0.0..=1.0).contains(&v));
            prop_assert!(eval(s, meth, &harder) >= v - 2.0 * TOL, "{} {} not increasing in gamma_th", s, meth);
            prop_assert!(eval(s, meth, &stronger) <= v + 2.0 * TOL, "{} {} not decreasing in rho1", s, meth);
        }
    }

    #[test]
    fn bounds_and_ordering((n, m, rho1_db, gth_db, ri_db) in link()) {
        let p = eq(n, m, db(rho1_db), db(gth_db), db(ri_db));
        let mrc = eval(Scheme::Mrc, AnalyticMethod::Exact, &p);
        let mmse = eval(Scheme::Mmse, AnalyticMethod::Exact, &p);
        prop_assert!(eval(Scheme::Mrc, AnalyticMethod::LowerBound, &p) <= mrc + 2.0 * TOL);
        prop_assert!(eval(Scheme::Mmse, AnalyticMethod::LowerBound, &p) <= mmse + 2.0 * TOL);
        prop_assert!(mmse <= mrc + 2.0 * TOL);
        if n > m {
            prop_assert!(mmse <= eval(Scheme::Zf, AnalyticMethod::Exact, &p) + 2.0 * TOL);
        }
    }

    #[test]
    fn zf_ignores_interference_power(n in 2usize..6, rho1_db in -5.0f64..30.0, a in -10.0f64..30.0, b in -10.0f64..30.0) {
        let m = n - 1;
        let x = outage_zf_exact(&eq(n, m, db(rho1_db), 1.0, db(a))).unwrap();
        let y = outage_zf_exact(&eq(n, m, db(rho1_db), 1.0, db(b))).unwrap();
        prop_assert_eq!(x.probability.to_bits(), y.probability.to_bits());
    }

    #[test]
    fn cdf_forms_coincide(n in 1usize..6, m in 1usize..6, rho1 in 0.5f64..50.0, ri in 0.2f64..5.0, z in 0.0f64..50.0) {
        let p = eq(n, m, rho1, 1.0, ri);
        let u = cdf_z_unified(&p, z).unwrap();
        let w = cdf_z_piecewise(&p, z).unwrap();
        prop_assert!((u - w).abs() < 1e-10, "{} vs {}", u, w);
    }
}
