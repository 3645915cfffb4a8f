//! First-hop combining vectors and the quadratic forms behind them.

use nalgebra::{DMatrix, DVector, RowDVector};
use num_complex::Complex64;

use super::{ChannelDraw, McError};
use crate::model::SystemParams;

/// Relative size of an R diagonal entry below which H_I counts as rank deficient.
pub(crate) const RANK_TOL: f64 = 1e-12;

pub fn combiner_mrc(d: &ChannelDraw) -> Result<RowDVector<Complex64>, McError> {
    let norm = d.h1.norm();
    if norm == 0.0 {
        return Err(McError::DegenerateDraw);
    }
    Ok(d.h1.adjoint() / Complex64::from(norm))
}

/// P h₁ with P the projector onto the orthogonal complement of span(H_I).
pub(crate) fn zf_residual(d: &ChannelDraw) -> Result<DVector<Complex64>, McError> {
    let (n, m) = (d.n(), d.m());
    if n <= m {
        return Err(McError::Infeasible { n, m });
    }
    if m == 0 {
        return Ok(d.h1.clone());
    }
    let qr = d.h_i.clone().qr();
    let r = qr.r();
    let scale = d.h_i.column_iter().map(|c| c.norm()).fold(0.0, f64::max);
    if (0..m).any(|i| !(r[(i, i)].norm() > RANK_TOL * scale)) {
        return Err(McError::DegenerateDraw);
    }
    let q = qr.q();
    let mut res = &d.h1 - &q * (q.adjoint() * &d.h1);
    // second pass restores orthogonality lost to cancellation
    res -= &q * (q.adjoint() * &res);
    Ok(res)
}

/// w₁ = h₁†P/√(h₁†Ph₁).
pub fn combiner_zf(d: &ChannelDraw) -> Result<RowDVector<Complex64>, McError> {
    let res = zf_residual(d)?;
    let norm = res.norm();
    if norm == 0.0 {
        return Err(McError::DegenerateDraw);
    }
    Ok(res.adjoint() / Complex64::from(norm))
}

/// H_I with column i scaled by √(ρ_Ii / scale).
fn weighted_interference(d: &ChannelDraw, rho_i: &[f64], scale: f64) -> DMatrix<Complex64> {
    let mut g = d.h_i.clone();
    for (i, mut col) in g.column_iter_mut().enumerate() {
        col *= Complex64::from((rho_i[i] / scale).sqrt());
    }
    g
}

/// h₁†(h₁h₁† + H_I D H_I†/ρ_max + I/ρ_max)⁻¹, which is the textbook
/// h₁†(h₁h₁† + H_IH_I† + I/ρ_I)⁻¹ when all interferers share ρ_I. With no
/// interferers ρ_max is taken as 1.
pub fn combiner_mmse(d: &ChannelDraw, p: &SystemParams) -> RowDVector<Complex64> {
    let n = d.n();
    let rho_max = p.rho_i().iter().copied().fold(0.0, f64::max);
    let scale = if rho_max > 0.0 { rho_max } else { 1.0 };
    let g = weighted_interference(d, p.rho_i(), scale);
    let mut a = &d.h1 * d.h1.adjoint() + &g * g.adjoint();
    for i in 0..n {
        a[(i, i)] += 1.0 / scale;
    }
    let chol = a.cholesky().expect("identity-regularized Gram matrix is positive definite");
    chol.solve(&d.h1).adjoint()
}

/// h₁†(I + H_I D H_I†)⁻¹h₁, so the MMSE first-hop SINR is ρ₁ times this.
///
/// Uses the M × M capacitance matrix when M < N and the N × N matrix otherwise.
pub(crate) fn mmse_quadratic(d: &ChannelDraw, rho_i: &[f64]) -> f64 {
    let (n, m) = (d.n(), d.m());
    let y1 = d.h1.norm_squared();
    if m == 0 {
        return y1;
    }
    let g = weighted_interference(d, rho_i, 1.0);
    if m < n {
        let u = g.adjoint() * &d.h1;
        let mut cap = g.adjoint() * &g;
        for i in 0..m {
            cap[(i, i)] += 1.0;
        }
        let chol = cap.cholesky().expect("identity-regularized Gram matrix is positive definite");
        let x = chol.l_dirty().solve_lower_triangular(&u).expect("nonzero Cholesky diagonal");
        y1 - x.norm_squared()
    } else {
        let mut a = &g * g.adjoint();
        for i in 0..n {
            a[(i, i)] += 1.0;
        }
        let chol = a.cholesky().expect("identity-regularized Gram matrix is positive definite");
        let x = chol.l_dirty().solve_lower_triangular(&d.h1).expect("nonzero Cholesky diagonal");
        x.norm_squared()
    }
}
