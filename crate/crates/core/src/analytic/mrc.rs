use super::kernel::Kernel;
use super::{finalize, saturate, zero, AnalyticError, EvalOptions, OutageValue, Precision};
use crate::model::{InterferenceProfile, SystemParams};
use crate::specfun::de::integrate_exp_sinh;
use crate::specfun::gamma::{binomial, factorial, gamma_q_int};
use crate::specfun::{integrate_semi_infinite, Dd, QuadratureResult, Real, SpecfunError, DEFAULT_BUDGET};

/// Relative target for each extended-precision integral.
pub(crate) const EXTENDED_REL_TOL: f64 = 1e-24;

/// Γ(j+l)/Γ(j)
fn rising(j: usize, l: usize) -> f64 {
    (0..l).map(|i| (j + i) as f64).product()
}

/// Exact MRC/MRT outage, averaging the dual-hop kernel over the interference
/// sum U₁ with one integral per (distinct power, multiplicity) pair.
pub fn outage_mrc_exact(p: &SystemParams, prof: &InterferenceProfile, tol: f64) -> Result<OutageValue, AnalyticError> {
    outage_mrc_exact_with(p, prof, &EvalOptions { tol, ..EvalOptions::default() })
}

pub fn outage_mrc_exact_with(
    p: &SystemParams,
    prof: &InterferenceProfile,
    opts: &EvalOptions,
) -> Result<OutageValue, AnalyticError> {
    if !(opts.tol > 0.0) {
        return Err(AnalyticError::InvalidParameter(format!("tol must be > 0, got {}", opts.tol)));
    }
    if p.gamma_th() == 0.0 {
        return Ok(zero());
    }
    match opts.precision {
        Precision::Extended => mrc_exact_generic::<Dd, _>(p, prof, opts.tol, |f, _| {
            let r = integrate_exp_sinh(f, EXTENDED_REL_TOL, 0.0)?;
            Ok((r.value, r.abs_error_estimate, r.evaluations))
        }),
        Precision::Double => mrc_exact_generic::<f64, _>(p, prof, opts.tol, |f, tol| {
            let r = integrate_semi_infinite(f, tol, DEFAULT_BUDGET)?;
            Ok((r.value, r.abs_error_estimate, r.evaluations))
        }),
    }
}

type Integrator<'a, R> = &'a mut dyn FnMut(R) -> R;

fn mrc_exact_generic<R: Real, Q>(
    p: &SystemParams,
    prof: &InterferenceProfile,
    tol: f64,
    mut quad: Q,
) -> Result<OutageValue, AnalyticError>
where
    Q: FnMut(Integrator<'_, R>, f64) -> Result<(R, f64, usize), SpecfunError>,
{
    let n = p.n() as u32;
    let g = R::from_f64(p.gamma_th());
    let c = g / p.rho1();
    let a = g / p.rho2();
    let b = R::one() / p.rho2();
    let kernel = Kernel::new(n, n, a, b);
    let ea = (-a).exp();
    if prof.is_empty() {
        let s = ea * kernel.g(c);
        return finalize((R::one() - s).to_f64(), None);
    }
    let terms: Vec<(f64, usize, f64)> = prof.terms().filter(|t| t.2 != 0.0).collect();
    let mut s = R::zero();
    let mut err = 0.0;
    let mut evals = 0;
    for &(rho_p, q, chi) in &terms {
        let w = R::from_f64(chi) / R::from_f64(rho_p).powi(q as i32) / factorial::<R>(q as u32 - 1);
        let share = tol / (terms.len() as f64 * w.abs().to_f64() * ea.to_f64()).max(f64::MIN_POSITIVE);
        let inv_rho = R::one() / rho_p;
        let mut f = |u: R| -> R {
            let e = (-(u * inv_rho)).exp();
            if e.to_f64() == 0.0 {
                return R::zero();
            }
            let up = if q == 1 { R::one() } else { u.powi(q as i32 - 1) };
            up * e * kernel.g(c * (u + 1.0))
        };
        let (v, e, k) = quad(&mut f, share).map_err(|source| AnalyticError::Quadrature {
            context: format!("MRC interference term (power {rho_p}, order {q})"),
            source,
        })?;
        s += w * v;
        err += (w * ea).abs().to_f64() * e;
        evals += k;
    }
    let pout = (R::one() - ea * s).to_f64();
    if err > tol {
        return Err(AnalyticError::Quadrature {
            context: "MRC exact outage".into(),
            source: SpecfunError::NonConvergence {
                best: QuadratureResult { value: pout, abs_error_estimate: err, evaluations: evals },
            },
        });
    }
    finalize(pout, Some(QuadratureResult { value: pout, abs_error_estimate: err, evaluations: evals }))
}

/// Closed-form lower bound from γ ≤ min(ρ₁y₁/(U₁+1), ρ₂y₂).
pub fn outage_mrc_lower(p: &SystemParams, prof: &InterferenceProfile) -> Result<OutageValue, AnalyticError> {
    if p.gamma_th() == 0.0 {
        return Ok(zero());
    }
    let n = p.n() as u32;
    let g = Dd::from_f64(p.gamma_th());
    let c = g / p.rho1();
    let a = g / p.rho2();
    // E[U^l e^{−cU}] for l < N
    let moments: Vec<Dd> = (0..n as usize)
        .map(|l| {
            if prof.is_empty() {
                return if l == 0 { Dd::ONE } else { Dd::ZERO };
            }
            let mut acc = Dd::ZERO;
            for (r, j, chi) in prof.terms() {
                let shrink = Dd::ONE / (c * r + 1.0);
                acc += Dd::from_f64(chi) * rising(j, l) * Dd::from_f64(r).powi(l as i32) * shrink.powi((j + l) as i32);
            }
            acc
        })
        .collect();
    let mut t = Dd::ZERO;
    let mut ck = Dd::ONE;
    for k in 0..n {
        if k > 0 {
            ck = ck * c / k as f64;
        }
        let mut inner = Dd::ZERO;
        for l in 0..=k {
            inner += binomial::<Dd>(k, l) * moments[l as usize];
        }
        t += ck * inner;
    }
    t *= (-c).exp();
    let pout = Dd::ONE - gamma_q_int(n, a) * t;
    finalize(pout.to_f64(), None)
}

/// [μ^(−N) + Σ_k C(N,k) E[U₁^k]] / N!, the multiplier of (γ_th/ρ₁)^N.
pub fn mrc_highsnr_coefficient(n: usize, mu: f64, prof: &InterferenceProfile) -> f64 {
    let mut bracket = mu.powi(-(n as i32));
    for k in 0..=n {
        let ek = if prof.is_empty() {
            if k == 0 {
                1.0
            } else {
                0.0
            }
        } else {
            let mut e = 0.0;
            for (r, j, chi) in prof.terms() {
                e += chi * (rising(j, k) * r.powi(k as i32));
            }
            e
        };
        bracket += binomial::<f64>(n as u32, k as u32) * ek;
    }
    bracket / factorial::<f64>(n as u32)
}

/// Equal-power form of [`mrc_highsnr_coefficient`] with E[U₁^k] = Γ(k+M)/Γ(M) ρ_I^k.
pub fn mrc_highsnr_coefficient_equal(n: usize, m: usize, rho_i: f64, mu: f64) -> f64 {
    let mut bracket = mu.powi(-(n as i32));
    for k in 0..=n {
        let ek = if m == 0 {
            if k == 0 {
                1.0
            } else {
                0.0
            }
        } else {
            rising(m, k) * rho_i.powi(k as i32)
        };
        bracket += binomial::<f64>(n as u32, k as u32) * ek;
    }
    bracket / factorial::<f64>(n as u32)
}

pub fn outage_mrc_highsnr(p: &SystemParams, prof: &InterferenceProfile) -> Result<OutageValue, AnalyticError> {
    let coef = mrc_highsnr_coefficient(p.n(), p.mu(), prof);
    let v = coef * (p.gamma_th() / p.rho1()).powi(p.n() as i32);
    Ok(saturate(v))
}
