//! Link parameters and the interference-power digest.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::specfun::gamma::binomial;
use crate::specfun::Dd;

/// Relative tolerance under which two interferer powers are treated as equal.
pub const DEFAULT_GROUP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub fn db_to_linear(x_db: f64) -> f64 {
    10f64.powf(x_db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Mrc,
    Zf,
    Mmse,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Mrc, Scheme::Zf, Scheme::Mmse];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Mrc => "mrc",
            Scheme::Zf => "zf",
            Scheme::Mmse => "mmse",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mrc" => Ok(Scheme::Mrc),
            "zf" => Ok(Scheme::Zf),
            "mmse" => Ok(Scheme::Mmse),
            _ => Err(ModelError::InvalidParameter(format!("unknown scheme '{s}'"))),
        }
    }
}

/// All scalar link parameters in linear scale, noise power normalized to 1.
///
/// The number of interferers is `rho_i.len()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct SystemParams {
    n_relay_antennas: usize,
    rho1: f64,
    rho2: f64,
    mu: f64,
    gamma_th: f64,
    rho_i: Vec<f64>,
}

#[derive(Deserialize)]
struct RawParams {
    n_relay_antennas: usize,
    rho1: f64,
    rho2: f64,
    mu: f64,
    gamma_th: f64,
    rho_i: Vec<f64>,
}

impl TryFrom<RawParams> for SystemParams {
    type Error = ModelError;
    fn try_from(r: RawParams) -> Result<Self, ModelError> {
        check_power("rho1", r.rho1)?;
        check_power("rho2", r.rho2)?;
        check_power("mu", r.mu)?;
        // keep the stored μ so a round trip is exact; it must still describe ρ₂/ρ₁
        if (r.mu * r.rho1 - r.rho2).abs() > 1e-12 * r.rho2 {
            return Err(ModelError::InvalidParameter(format!(
                "mu = {} is inconsistent with rho2/rho1 = {}",
                r.mu,
                r.rho2 / r.rho1
            )));
        }
        SystemParams::build(r.n_relay_antennas, r.rho1, r.rho2, r.mu, r.gamma_th, r.rho_i)
    }
}

fn check_power(name: &str, v: f64) -> Result<(), ModelError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(ModelError::InvalidParameter(format!("{name} must be finite and > 0, got {v}")))
    }
}

impl SystemParams {
    /// Builds from (ρ₁, μ) with ρ₂ = μρ₁.
    pub fn new(n: usize, rho1: f64, mu: f64, gamma_th: f64, rho_i: Vec<f64>) -> Result<Self, ModelError> {
        check_power("mu", mu)?;
        check_power("rho1", rho1)?;
        Self::build(n, rho1, mu * rho1, mu, gamma_th, rho_i)
    }

    /// Builds from explicit (ρ₁, ρ₂); μ = ρ₂/ρ₁.
    pub fn with_rho2(n: usize, rho1: f64, rho2: f64, gamma_th: f64, rho_i: Vec<f64>) -> Result<Self, ModelError> {
        check_power("rho1", rho1)?;
        check_power("rho2", rho2)?;
        Self::build(n, rho1, rho2, rho2 / rho1, gamma_th, rho_i)
    }

    /// Equal interferer powers: `m` copies of `rho_i`.
    pub fn equal_power(n: usize, m: usize, rho1: f64, mu: f64, gamma_th: f64, rho_i: f64) -> Result<Self, ModelError> {
        Self::new(n, rho1, mu, gamma_th, vec![rho_i; m])
    }

    fn build(n: usize, rho1: f64, rho2: f64, mu: f64, gamma_th: f64, rho_i: Vec<f64>) -> Result<Self, ModelError> {
        if n == 0 {
            return Err(ModelError::InvalidParameter("N must be at least 1".into()));
        }
        check_power("rho1", rho1)?;
        check_power("rho2", rho2)?;
        check_power("mu", mu)?;
        if !(gamma_th.is_finite() && gamma_th >= 0.0) {
            return Err(ModelError::InvalidParameter(format!("gamma_th must be finite and >= 0, got {gamma_th}")));
        }
        for (i, &r) in rho_i.iter().enumerate() {
            check_power(&format!("rho_i[{i}]"), r)?;
        }
        Ok(SystemParams { n_relay_antennas: n, rho1, rho2, mu, gamma_th, rho_i })
    }

    pub fn n(&self) -> usize {
        self.n_relay_antennas
    }

    pub fn m(&self) -> usize {
        self.rho_i.len()
    }

    pub fn rho1(&self) -> f64 {
        self.rho1
    }

    pub fn rho2(&self) -> f64 {
        self.rho2
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn gamma_th(&self) -> f64 {
        self.gamma_th
    }

    pub fn rho_i(&self) -> &[f64] {
        &self.rho_i
    }

    /// The common interferer power when all are equal (within the grouping
    /// tolerance); `None` when M = 0 or the powers differ.
    pub fn common_interference_power(&self) -> Option<f64> {
        let p = self.profile();
        if p.distinct_powers.len() == 1 {
            Some(p.distinct_powers[0])
        } else {
            None
        }
    }

    pub fn profile(&self) -> InterferenceProfile {
        build_profile(&self.rho_i, DEFAULT_GROUP_TOL).expect("powers validated at construction")
    }

    /// Same link with a new ρ₁; ρ₂ follows through μ.
    pub fn with_rho1(&self, rho1: f64) -> Result<Self, ModelError> {
        Self::new(self.n_relay_antennas, rho1, self.mu, self.gamma_th, self.rho_i.clone())
    }

    pub fn with_n(&self, n: usize) -> Result<Self, ModelError> {
        Self::build(n, self.rho1, self.rho2, self.mu, self.gamma_th, self.rho_i.clone())
    }

    pub fn with_gamma_th(&self, gamma_th: f64) -> Result<Self, ModelError> {
        Self::build(self.n_relay_antennas, self.rho1, self.rho2, self.mu, gamma_th, self.rho_i.clone())
    }

    pub fn with_rho_i(&self, rho_i: Vec<f64>) -> Result<Self, ModelError> {
        Self::build(self.n_relay_antennas, self.rho1, self.rho2, self.mu, self.gamma_th, rho_i)
    }
}

/// Law of U₁ = Σ ρ_Ii |h_Ii|²-type sums: distinct powers, multiplicities and
/// characteristic coefficients χ_ij with
/// ∏_k (1+ρ_k s)^(−τ_k) = Σ_i Σ_j χ_ij (1+ρ_i s)^(−j).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterferenceProfile {
    /// Strictly decreasing.
    pub distinct_powers: Vec<f64>,
    pub multiplicities: Vec<usize>,
    /// `char_coeffs[i][j-1]` is χ_ij for 1 ≤ j ≤ τ_i.
    pub char_coeffs: Vec<Vec<f64>>,
}

impl InterferenceProfile {
    pub fn total_multiplicity(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.distinct_powers.is_empty()
    }

    /// Iterates over (ρ_i, j, χ_ij).
    pub fn terms(&self) -> impl Iterator<Item = (f64, usize, f64)> + '_ {
        self.distinct_powers
            .iter()
            .zip(&self.char_coeffs)
            .flat_map(|(&r, cs)| cs.iter().enumerate().map(move |(j, &c)| (r, j + 1, c)))
    }
}

pub fn build_profile(rho_i: &[f64], group_tol: f64) -> Result<InterferenceProfile, ModelError> {
    if !(group_tol > 0.0 && group_tol <= 1e-3) {
        return Err(ModelError::InvalidParameter(format!("group_tol must lie in (0, 1e-3], got {group_tol}")));
    }
    for (i, &r) in rho_i.iter().enumerate() {
        check_power(&format!("rho_i[{i}]"), r)?;
    }
    let mut sorted = rho_i.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));

    let mut powers = Vec::new();
    let mut mult = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let top = sorted[i];
        let mut j = i;
        let mut dev = 0.0;
        while j < sorted.len() && (top - sorted[j]) / top <= group_tol {
            dev += sorted[j] - top;
            j += 1;
        }
        // group mean, written so identical members reproduce exactly
        powers.push(top + dev / (j - i) as f64);
        mult.push(j - i);
        i = j;
    }
    let char_coeffs = characteristic_coefficients(&powers, &mult);
    Ok(InterferenceProfile { distinct_powers: powers, multiplicities: mult, char_coeffs })
}

/// Partial-fraction coefficients by expanding the other factors around each pole:
/// with u = 1 + ρ_i s, 1 + ρ_k s = α_k (1 + β_k u), α_k = (ρ_i−ρ_k)/ρ_i, β_k = ρ_k/(ρ_i−ρ_k).
fn characteristic_coefficients(powers: &[f64], mult: &[usize]) -> Vec<Vec<f64>> {
    (0..powers.len())
        .map(|i| {
            let tau = mult[i];
            let ri = Dd::from_f64(powers[i]);
            let mut g = vec![Dd::ZERO; tau];
            g[0] = Dd::ONE;
            for k in (0..powers.len()).filter(|&k| k != i) {
                let rk = Dd::from_f64(powers[k]);
                let alpha = (ri - rk) / ri;
                let beta = rk / (ri - rk);
                let tk = mult[k] as u32;
                // series of (1 + β u)^(−τ_k), truncated to τ_i terms
                let series: Vec<Dd> =
                    (0..tau as u32).map(|l| binomial::<Dd>(tk + l - 1, l) * (-beta).powi(l as i32)).collect();
                let scale = alpha.powi(-(tk as i32));
                let mut next = vec![Dd::ZERO; tau];
                for (a, &ga) in g.iter().enumerate() {
                    for (b, &sb) in series.iter().enumerate().take(tau - a) {
                        next[a + b] += ga * sb;
                    }
                }
                g = next.into_iter().map(|v| v * scale).collect();
            }
            // χ_{i, τ_i − l} = g_l
            (1..=tau).map(|j| g[tau - j].to_f64()).collect()
        })
        .collect()
}

/// Density of U₁ at x. With no interferers U₁ ≡ 0 has no density and 0 is returned.
pub fn hyperexp_pdf(profile: &InterferenceProfile, x: f64) -> f64 {
    if x < 0.0 || profile.is_empty() {
        return 0.0;
    }
    let mut f = 0.0;
    for (r, j, chi) in profile.terms() {
        let lf: f64 = (1..j).map(|k| (k as f64).ln()).sum();
        let log_term = (j as f64 - 1.0) * x.ln() - x / r - j as f64 * r.ln() - lf;
        let t = if j == 1 {
            (-x / r).exp() / r
        } else if x == 0.0 {
            0.0
        } else {
            log_term.exp()
        };
        f += chi * t;
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn db_examples() {
        assert_eq!(db_to_linear(0.0), 1.0);
        assert_eq!(db_to_linear(10.0), 10.0);
        assert!((db_to_linear(30.0) - 1000.0).abs() < 1e-12);
        assert!((linear_to_db(1000.0) - 30.0).abs() < 1e-12);
    }

    #[test]
    fn equal_powers_collapse() {
        let p = build_profile(&[1.0, 1.0, 1.0], DEFAULT_GROUP_TOL).unwrap();
        assert_eq!(p.distinct_powers, vec![1.0]);
        assert_eq!(p.multiplicities, vec![3]);
        assert_eq!(p.char_coeffs, vec![vec![0.0, 0.0, 1.0]]);
    }

    #[test]
    fn two_distinct_powers() {
        let p = build_profile(&[1.0, 2.0], DEFAULT_GROUP_TOL).unwrap();
        assert_eq!(p.distinct_powers, vec![2.0, 1.0]);
        assert!((p.char_coeffs[0][0] - 2.0).abs() < 1e-15);
        assert!((p.char_coeffs[1][0] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_power() {
        let p = build_profile(&[5.0], DEFAULT_GROUP_TOL).unwrap();
        assert_eq!(p.multiplicities, vec![1]);
        assert_eq!(p.char_coeffs, vec![vec![1.0]]);
    }

    #[test]
    fn near_duplicates_merge() {
        let p = build_profile(&[1.0, 1.0 + 1e-12, 3.0], DEFAULT_GROUP_TOL).unwrap();
        assert_eq!(p.multiplicities, vec![1, 2]);
    }

    #[test]
    fn rejects_bad_powers() {
        assert!(build_profile(&[1.0, 0.0], DEFAULT_GROUP_TOL).is_err());
        assert!(build_profile(&[1.0], 0.0).is_err());
        assert!(SystemParams::new(0, 1.0, 1.0, 1.0, vec![]).is_err());
        assert!(SystemParams::new(2, 1.0, 1.0, -1.0, vec![]).is_err());
        assert!(SystemParams::new(2, 1.0, 1.0, 1.0, vec![-2.0]).is_err());
    }

    #[test]
    fn pdf_at_origin() {
        let one = build_profile(&[1.0], DEFAULT_GROUP_TOL).unwrap();
        assert!((hyperexp_pdf(&one, 0.0) - 1.0).abs() < 1e-15);
        let two = build_profile(&[1.0, 1.0], DEFAULT_GROUP_TOL).unwrap();
        assert_eq!(hyperexp_pdf(&two, 0.0), 0.0);
    }

    #[test]
    fn mu_consistency() {
        let p = SystemParams::new(3, 10.0, 2.0, 1.0, vec![1.0; 2]).unwrap();
        assert_eq!(p.rho2(), 20.0);
        let q = p.with_rho1(100.0).unwrap();
        assert_eq!(q.rho2(), 200.0);
        let r = SystemParams::with_rho2(3, 10.0, 5.0, 1.0, vec![]).unwrap();
        assert_eq!(r.mu(), 0.5);
    }

    #[test]
    fn serde_roundtrip() {
        let p = SystemParams::new(3, 10.0, 2.0, 1.0, vec![1.0, 4.0]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        let q: SystemParams = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
        let bad = s.replace("\"n_relay_antennas\":3", "\"n_relay_antennas\":0");
        assert!(serde_json::from_str::<SystemParams>(&bad).is_err());
    }
}
