use nalgebra::RowDVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::combiner::{combiner_mmse, mmse_quadratic, zf_residual};
use super::{ChannelDraw, McError};
use crate::model::{Scheme, SystemParams};

/// Relative agreement required between the two forms of Z.
pub const Z_CONSISTENCY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SinrSample {
    pub scheme: Scheme,
    /// End-to-end SINR γ.
    pub sinr: f64,
    /// First-hop SINR Z, with γ = ρ₂y₂Z/(1 + ρ₂y₂ + Z).
    pub z_first_hop: f64,
}

fn check_dims(d: &ChannelDraw, p: &SystemParams) -> Result<(), McError> {
    if d.n() != p.n() || d.m() != p.m() || d.h2.len() != p.n() {
        return Err(McError::InvalidParameter(format!(
            "draw is {}x{} but parameters have N = {}, M = {}",
            d.n(),
            d.m(),
            p.n(),
            p.m()
        )));
    }
    Ok(())
}

/// First-hop signal and interference-plus-noise powers seen through w₁.
fn first_hop_powers(d: &ChannelDraw, w1: &RowDVector<Complex64>, p: &SystemParams) -> (f64, f64) {
    let signal = (w1 * &d.h1)[0].norm_sqr() * p.rho1();
    let leak = w1 * &d.h_i;
    let interference: f64 = leak.iter().zip(p.rho_i()).map(|(x, r)| x.norm_sqr() * r).sum();
    (signal, interference + w1.norm_squared())
}

/// End-to-end SINR from the explicit relay matrix W = ω h₂†/‖h₂‖ w₁, with ω²
/// set by the relay power constraint.
pub fn sinr_generic(
    d: &ChannelDraw,
    w1: &RowDVector<Complex64>,
    p: &SystemParams,
    scheme: Scheme,
) -> Result<SinrSample, McError> {
    check_dims(d, p)?;
    if w1.len() != d.n() {
        return Err(McError::InvalidParameter(format!("combiner has length {}, expected {}", w1.len(), d.n())));
    }
    let (signal, noise) = first_hop_powers(d, w1, p);
    let omega = (p.rho2() / (signal + noise)).sqrt();
    let mrt = d.h2.adjoint() / Complex64::from(d.h2.norm());
    let w = (mrt * w1) * Complex64::from(omega);
    let h2w = &d.h2 * &w;
    let num = (&h2w * &d.h1)[0].norm_sqr() * p.rho1();
    let leak = &h2w * &d.h_i;
    let interference: f64 = leak.iter().zip(p.rho_i()).map(|(x, r)| x.norm_sqr() * r).sum();
    let sinr = num / (interference + h2w.norm_squared() + 1.0);
    Ok(SinrSample { scheme, sinr, z_first_hop: signal / noise })
}

/// Per-draw quantities from which every scheme's SINR follows.
#[derive(Debug, Clone, Copy)]
pub(crate) struct DrawStats {
    pub y1: f64,
    pub y2: f64,
    /// Σ ρ_Ii |h₁†h_Ii|² / ‖h₁‖².
    pub u1: f64,
    /// h₁†Ph₁; NaN when not requested.
    pub y3: f64,
    /// h₁†(I + H_I D H_I†)⁻¹h₁; NaN when not requested.
    pub q: f64,
}

pub(crate) fn draw_stats(d: &ChannelDraw, rho_i: &[f64], zf: bool, mmse: bool) -> Result<DrawStats, McError> {
    let y1 = d.h1.norm_squared();
    if y1 == 0.0 {
        return Err(McError::DegenerateDraw);
    }
    let proj = d.h1.adjoint() * &d.h_i;
    let u1 = proj.iter().zip(rho_i).map(|(x, r)| x.norm_sqr() * r).sum::<f64>() / y1;
    let y3 = if zf { zf_residual(d)?.norm_squared() } else { f64::NAN };
    let q = if mmse { mmse_quadratic(d, rho_i) } else { f64::NAN };
    Ok(DrawStats { y1, y2: d.h2.norm_squared(), u1, y3, q })
}

/// (γ, Z) for one scheme.
pub(crate) fn sinr_from_stats(scheme: Scheme, s: &DrawStats, rho1: f64, rho2: f64) -> (f64, f64) {
    match scheme {
        Scheme::Mrc => {
            let sinr = s.y2 * s.y1 * rho1 / (s.y2 * s.u1 + s.y2 + (s.y1 * rho1 + s.u1 + 1.0) / rho2);
            (sinr, rho1 * s.y1 / (s.u1 + 1.0))
        }
        Scheme::Zf => (s.y2 * s.y3 * rho1 * rho2 / (s.y2 * rho2 + s.y3 * rho1 + 1.0), rho1 * s.y3),
        Scheme::Mmse => {
            let z = rho1 * s.q;
            (rho2 * s.y2 * z / (1.0 + rho2 * s.y2 + z), z)
        }
    }
}

/// End-to-end SINR from each scheme's reduced expression; no W is formed.
pub fn sinr_scheme(d: &ChannelDraw, p: &SystemParams, scheme: Scheme) -> Result<SinrSample, McError> {
    check_dims(d, p)?;
    let st = draw_stats(d, p.rho_i(), scheme == Scheme::Zf, scheme == Scheme::Mmse)?;
    let (sinr, z_first_hop) = sinr_from_stats(scheme, &st, p.rho1(), p.rho2());
    Ok(SinrSample { scheme, sinr, z_first_hop })
}

/// MMSE first-hop SINR, computed both from the MMSE combiner and as
/// ρ₁h₁†(I + H_I D H_I†)⁻¹h₁; the two must agree.
pub fn z_statistic(d: &ChannelDraw, p: &SystemParams) -> Result<f64, McError> {
    check_dims(d, p)?;
    let w1 = combiner_mmse(d, p);
    let (signal, noise) = first_hop_powers(d, &w1, p);
    let via_combiner = signal / noise;
    let direct = p.rho1() * mmse_quadratic(d, p.rho_i());
    let rel = (via_combiner - direct).abs() / direct.abs().max(f64::MIN_POSITIVE);
    if !(rel <= Z_CONSISTENCY_TOL) {
        return Err(McError::NumericalConsistency(format!(
            "Z from the combiner ({via_combiner:e}) and the quadratic form ({direct:e}) differ by {rel:e} relative"
        )));
    }
    Ok(direct)
}
