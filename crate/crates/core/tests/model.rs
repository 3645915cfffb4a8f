use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use relaylink::model::{build_profile, hyperexp_pdf, DEFAULT_GROUP_TOL};
use relaylink::specfun::quad::integrate_finite;
use relaylink::specfun::DEFAULT_BUDGET;
use relaylink::{db_to_linear, linear_to_db, SystemParams};

#[test]
fn db_conversions() {
    assert_eq!(db_to_linear(0.0), 1.0);
    assert!((db_to_linear(10.0) - 10.0).abs() < 1e-12);
    assert!((db_to_linear(30.0) - 1000.0).abs() < 1e-9);
    assert!((linear_to_db(db_to_linear(-7.25)) + 7.25).abs() < 1e-12);
}

#[test]
fn two_powers_by_hand() {
    let prof = build_profile(&[2.0, 1.0], DEFAULT_GROUP_TOL).unwrap();
    assert_eq!(prof.distinct_powers, vec![2.0, 1.0]);
    assert!((prof.char_coeffs[0][0] - 2.0).abs() < 1e-12);
    assert!((prof.char_coeffs[1][0] + 1.0).abs() < 1e-12);
}

/// Solves Σ χ_ij (1+ρ_i s)^(−j) = ∏ (1+ρ_k s)^(−1) at as many points as unknowns.
fn chi_by_linear_system(rho: &[f64]) -> Vec<(f64, usize, f64)> {
    let prof = build_profile(rho, DEFAULT_GROUP_TOL).unwrap();
    let terms: Vec<(f64, usize)> = prof.terms().map(|(r, j, _)| (r, j)).collect();
    let k = terms.len();
    let s: Vec<f64> = (0..k).map(|i| 0.05 * 3f64.powi(i as i32)).collect();
    let a = DMatrix::from_fn(k, k, |row, col| {
        let (r, j) = terms[col];
        (1.0 + r * s[row]).powi(-(j as i32))
    });
    let b = DVector::from_fn(k, |row, _| rho.iter().map(|&r| 1.0 / (1.0 + r * s[row])).product());
    let x = a.lu().solve(&b).expect("nonsingular");
    terms.iter().zip(x.iter()).map(|(&(r, j), &c)| (r, j, c)).collect()
}

#[test]
fn coefficients_match_linear_system() {
    for rho in [vec![3.0, 1.0, 1.0], vec![4.0, 4.0, 2.0, 0.5], vec![0.3, 1.7, 1.7, 1.7]] {
        let prof = build_profile(&rho, DEFAULT_GROUP_TOL).unwrap();
        for ((r, j, c), (r2, j2, oracle)) in prof.terms().zip(chi_by_linear_system(&rho)) {
            assert_eq!((r, j), (r2, j2));
            assert!((c - oracle).abs() <= 1e-7 * oracle.abs().max(1.0), "{rho:?}: chi({r},{j}) = {c}, oracle {oracle}");
        }
    }
}

#[test]
fn pdf_matches_histogram() {
    // 2E₁ + E₂ has density e^(−x/2) − e^(−x)
    let prof = build_profile(&[2.0, 1.0], DEFAULT_GROUP_TOL).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (n, half) = (1_000_000, 0.025);
    let hits = (0..n)
        .filter(|_| {
            let e1: f64 = Exp1.sample(&mut rng);
            let e2: f64 = Exp1.sample(&mut rng);
            ((2.0 * e1 + e2) - 1.0).abs() < half
        })
        .count();
    let frac = hits as f64 / n as f64;
    let est = frac / (2.0 * half);
    let se = (frac / n as f64).sqrt() / (2.0 * half);
    let pdf = hyperexp_pdf(&prof, 1.0);
    assert!((pdf - ((-0.5f64).exp() - (-1.0f64).exp())).abs() < 1e-14);
    assert!((est - pdf).abs() < 4.0 * se, "histogram {est} ± {se}, pdf {pdf}");
}

fn powers() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop::sample::select(vec![0.25, 0.5, 1.0, 2.0, 3.0, 10.0]), 1..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pdf_integrates_to_one(rho in powers()) {
        let prof = build_profile(&rho, DEFAULT_GROUP_TOL).unwrap();
        let top = 50.0 * rho.iter().cloned().fold(0.0, f64::max);
        let r = integrate_finite(|x| hyperexp_pdf(&prof, x), 0.0, top, 1e-9, DEFAULT_BUDGET).unwrap();
        prop_assert!((r.value - 1.0).abs() < 1e-6, "integral {}", r.value);
    }

    #[test]
    fn residue_formula_for_distinct_powers(seed in 0u64..1000, m in 1usize..6) {
        let rho: Vec<f64> = (0..m).map(|i| 0.5 + i as f64 * 0.7 + (seed % 7) as f64 * 0.01).collect();
        let prof = build_profile(&rho, DEFAULT_GROUP_TOL).unwrap();
        for (i, &ri) in prof.distinct_powers.iter().enumerate() {
            let oracle: f64 = prof.distinct_powers.iter().filter(|&&rk| rk != ri).map(|&rk| ri / (ri - rk)).product();
            let chi = prof.char_coeffs[i][0];
            prop_assert!((chi - oracle).abs() <= 1e-10 * oracle.abs());
        }
    }

    #[test]
    fn permutation_invariant(rho in powers(), rot in 0usize..6) {
        let a = build_profile(&rho, DEFAULT_GROUP_TOL).unwrap();
        let mut shuffled = rho.clone();
        let len = shuffled.len();
        shuffled.rotate_left(rot % len);
        shuffled.reverse();
        let b = build_profile(&shuffled, DEFAULT_GROUP_TOL).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn json_roundtrip(n in 1usize..8, rho1_db in -10.0f64..40.0, mu in 0.1f64..10.0, rho in powers()) {
        let p = SystemParams::new(n, db_to_linear(rho1_db), mu, 1.0, rho).unwrap();
        let back: SystemParams = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        prop_assert_eq!(p, back);
    }
}
