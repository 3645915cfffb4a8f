use super::kernel::Kernel;
use super::mrc::EXTENDED_REL_TOL;
use super::{equal_power, finalize, saturate, zero, AnalyticError, EvalOptions, OutageValue, Precision};
use crate::model::SystemParams;
use crate::specfun::de::integrate_exp_sinh;
use crate::specfun::gamma::{binomial, factorial, gamma_p_int, gamma_q_int};
use crate::specfun::{integrate_semi_infinite, Dd, QuadratureResult, Real, SpecfunError, DEFAULT_BUDGET};

/// ₂F₁(M+1, b; b+1; −z) with b < M+1, coefficients precomputed.
struct TailF<R> {
    a: u32,
    ratios: Vec<R>,
}

impl<R: Real> TailF<R> {
    fn new(a: u32, b: u32) -> Self {
        let cb = binomial::<R>(a - 1, b);
        let ratios = (b..a).map(|j| binomial::<R>(a - 1, j) / cb).collect();
        TailF { a, ratios }
    }

    fn eval(&self, z: R) -> R {
        // w^{j−b}(1−w)^{a−1−j} = (1+z)^{−(a−1−b)} z^{j−b} with w = z/(1+z)
        let mut acc = R::zero();
        for r in self.ratios.iter().rev() {
            acc = acc * z + *r;
        }
        acc / (z + 1.0).powi((self.a - 1) as i32)
    }
}

/// A'_m = ρ_I^{N−m+1} / (Γ(m) Γ(N−m+2) Γ(m−N+M)) for m₁ ≤ m ≤ N, with the
/// matching ₂F₁(M+1, N−m+1; N−m+2; ·).
fn mmse_terms<R: Real>(n: usize, m_int: usize, rho_i: f64) -> Vec<(R, TailF<R>)> {
    if m_int == 0 {
        return Vec::new();
    }
    let m1 = n.saturating_sub(m_int) + 1;
    (m1..=n)
        .map(|m| {
            let a = R::from_f64(rho_i).powi((n - m + 1) as i32)
                / (factorial::<R>((m - 1) as u32)
                    * factorial::<R>((n - m + 1) as u32)
                    * factorial::<R>((m + m_int - n - 1) as u32));
            (a, TailF::new(m_int as u32 + 1, (n - m + 1) as u32))
        })
        .collect()
}

/// Γ(M+1) e^{−z/ρ₁} (z/ρ₁)^N Σ_m A'_m ₂F₁(…; −ρ_I z/ρ₁): the interference excess of F_Z.
fn cdf_excess(n: usize, m: usize, rho1: f64, rho_i: f64, z: Dd) -> Dd {
    let terms = mmse_terms::<Dd>(n, m, rho_i);
    if terms.is_empty() {
        return Dd::ZERO;
    }
    let x1 = z / rho1;
    let arg = x1 * rho_i;
    let mut s = Dd::ZERO;
    for (a, f) in &terms {
        s += *a * f.eval(arg);
    }
    factorial::<Dd>(m as u32) * (-x1).exp() * x1.powi(n as i32) * s
}

/// C.d.f. of the MMSE first-hop statistic Z in unified (single-expression) form.
pub fn cdf_z_unified(p: &SystemParams, z: f64) -> Result<f64, AnalyticError> {
    let rho_i = equal_power(p, "the MMSE c.d.f.")?;
    if !(z >= 0.0) {
        return Err(AnalyticError::InvalidParameter(format!("z must be >= 0, got {z}")));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let zd = Dd::from_f64(z);
    let v = gamma_p_int(p.n() as u32, zd / p.rho1()) + cdf_excess(p.n(), p.m(), p.rho1(), rho_i, zd);
    Ok(v.to_f64())
}

/// C.d.f. of Z in the branchwise form 1 − e^{−z/ρ₁} Σ_m A_m(z)/(m−1)! (z/ρ₁)^{m−1}.
pub fn cdf_z_piecewise(p: &SystemParams, z: f64) -> Result<f64, AnalyticError> {
    let rho_i = equal_power(p, "the MMSE c.d.f.")?;
    if !(z >= 0.0) {
        return Err(AnalyticError::InvalidParameter(format!("z must be >= 0, got {z}")));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let (n, m) = (p.n(), p.m());
    let x1 = Dd::from_f64(z) / p.rho1();
    let w = x1 * rho_i;
    let denom = (w + 1.0).powi(m as i32);
    let mut s = Dd::ZERO;
    let mut pw = Dd::ONE;
    for k in 1..=n {
        if k > 1 {
            pw = pw * x1 / (k - 1) as f64;
        }
        let am = if n >= m + k {
            Dd::ONE
        } else {
            let mut num = Dd::ONE;
            for i in 1..=(n - k) {
                num += binomial::<Dd>(m as u32, i as u32) * w.powi(i as i32);
            }
            num / denom
        };
        s += am * pw;
    }
    Ok((Dd::ONE - (-x1).exp() * s).to_f64())
}

/// Exact MMSE/MRT outage: the interference-free dual-hop closed form plus a
/// single integral carrying the interference excess of F_Z.
pub fn outage_mmse_exact(p: &SystemParams, tol: f64) -> Result<OutageValue, AnalyticError> {
    outage_mmse_exact_with(p, &EvalOptions { tol, ..EvalOptions::default() })
}

pub fn outage_mmse_exact_with(p: &SystemParams, opts: &EvalOptions) -> Result<OutageValue, AnalyticError> {
    let rho_i = equal_power(p, "the exact MMSE outage")?;
    if !(opts.tol > 0.0) {
        return Err(AnalyticError::InvalidParameter(format!("tol must be > 0, got {}", opts.tol)));
    }
    if p.gamma_th() == 0.0 {
        return Ok(zero());
    }
    match opts.precision {
        Precision::Extended => mmse_exact_generic::<Dd, _>(p, rho_i, opts.tol, |f, _| {
            let r = integrate_exp_sinh(f, EXTENDED_REL_TOL, 0.0)?;
            Ok((r.value, r.abs_error_estimate, r.evaluations))
        }),
        Precision::Double => mmse_exact_generic::<f64, _>(p, rho_i, opts.tol, |f, tol| {
            let r = integrate_semi_infinite(f, tol, DEFAULT_BUDGET)?;
            Ok((r.value, r.abs_error_estimate, r.evaluations))
        }),
    }
}

fn mmse_exact_generic<R: Real, Q>(
    p: &SystemParams,
    rho_i: f64,
    tol: f64,
    mut quad: Q,
) -> Result<OutageValue, AnalyticError>
where
    Q: FnMut(&mut dyn FnMut(R) -> R, f64) -> Result<(R, f64, usize), SpecfunError>,
{
    let (n, m) = (p.n(), p.m());
    let g = R::from_f64(p.gamma_th());
    let c = g / p.rho1();
    let a = g / p.rho2();
    let b = R::one() / p.rho2();
    let d = a + b;
    let big_b = c * d;
    let base = R::one() - (-a).exp() * Kernel::new(n as u32, n as u32, a, b).g(c);

    let terms = mmse_terms::<R>(n, m, rho_i);
    if terms.is_empty() {
        return finalize(base.to_f64(), None);
    }
    // V_k = Σ_j C(N,j) b^{N−j} C(N+j−1,k) a^{N+j−1−k}
    let nn = n as u32;
    let mut v = vec![R::zero(); 2 * n];
    for j in 0..=nn {
        let cj = binomial::<R>(nn, j) * b.powi((nn - j) as i32);
        let top = nn + j - 1;
        for k in 0..=top {
            v[k as usize] += cj * binomial::<R>(top, k) * a.powi((top - k) as i32);
        }
    }
    let w = c * rho_i;
    let mut f = |x: R| -> R {
        let expo = -(big_b / x) - x - x.ln() * n as f64;
        if expo.to_f64() < -1400.0 {
            return R::zero();
        }
        let e = expo.exp();
        if e.to_f64() == 0.0 {
            return R::zero();
        }
        let mut poly = R::zero();
        for vk in v.iter().rev() {
            poly = poly * x + *vk;
        }
        let arg = w * (d / x + 1.0);
        let mut fs = R::zero();
        for (am, tf) in &terms {
            fs += *am * tf.eval(arg);
        }
        e * poly * fs
    };
    let pref = (-c - a).exp() * c.powi(n as i32) * factorial::<R>(m as u32) / factorial::<R>(nn - 1);
    let pref_f = pref.to_f64().max(f64::MIN_POSITIVE);
    let (i1, err, evals) = quad(&mut f, tol / pref_f)
        .map_err(|source| AnalyticError::Quadrature { context: "MMSE interference integral".into(), source })?;
    let pout = (base + pref * i1).to_f64();
    let err = err * pref.to_f64();
    let qr = QuadratureResult { value: pout, abs_error_estimate: err, evaluations: evals };
    if err > tol {
        return Err(AnalyticError::Quadrature {
            context: "MMSE exact outage".into(),
            source: SpecfunError::NonConvergence { best: qr },
        });
    }
    finalize(pout, Some(qr))
}

/// Closed-form lower bound from γ ≤ min(Z, ρ₂y₂).
pub fn outage_mmse_lower(p: &SystemParams) -> Result<OutageValue, AnalyticError> {
    let rho_i = equal_power(p, "the MMSE lower bound")?;
    if p.gamma_th() == 0.0 {
        return Ok(zero());
    }
    let n = p.n() as u32;
    let g = Dd::from_f64(p.gamma_th());
    let survival = gamma_q_int(n, g / p.rho1()) - cdf_excess(p.n(), p.m(), p.rho1(), rho_i, g);
    let pout = Dd::ONE - gamma_q_int(n, g / p.rho2()) * survival;
    finalize(pout.to_f64(), None)
}

/// Γ(M+1) Σ_m A'_m + (1 + μ^(−N))/N!, the multiplier of (γ_th/ρ₁)^N.
pub fn mmse_highsnr_coefficient(p: &SystemParams) -> Result<f64, AnalyticError> {
    let rho_i = equal_power(p, "the MMSE high-SNR coefficient")?;
    let n = p.n();
    let mut s = Dd::ZERO;
    for (a, _) in mmse_terms::<Dd>(n, p.m(), rho_i) {
        s += a;
    }
    let v =
        factorial::<Dd>(p.m() as u32) * s + (Dd::from_f64(p.mu()).powi(-(n as i32)) + 1.0) / factorial::<Dd>(n as u32);
    Ok(v.to_f64())
}

pub fn outage_mmse_highsnr(p: &SystemParams) -> Result<OutageValue, AnalyticError> {
    let coef = mmse_highsnr_coefficient(p)?;
    Ok(saturate(coef * (p.gamma_th() / p.rho1()).powi(p.n() as i32)))
}
