use super::kernel::dual_hop_success;
use super::{finalize, saturate, zero, AnalyticError, OutageValue};
use crate::model::SystemParams;
use crate::specfun::gamma::factorial;
use crate::specfun::Dd;

fn feasible(p: &SystemParams) -> Result<(), AnalyticError> {
    if p.n() > p.m() {
        Ok(())
    } else {
        Err(AnalyticError::Infeasible { n: p.n(), m: p.m() })
    }
}

/// Exact ZF/MRT outage. The interference powers never enter.
pub fn outage_zf_exact(p: &SystemParams) -> Result<OutageValue, AnalyticError> {
    feasible(p)?;
    if p.gamma_th() == 0.0 {
        return Ok(zero());
    }
    let g = p.gamma_th();
    let c = Dd::from_f64(g) / p.rho1();
    let a = Dd::from_f64(g) / p.rho2();
    let b = Dd::ONE / p.rho2();
    let s = dual_hop_success((p.n() - p.m()) as u32, p.n() as u32, c, a, b);
    finalize((Dd::ONE - s).to_f64(), None)
}

/// (γ_th/ρ₁)^(N−M) / Γ(N−M+1).
pub fn outage_zf_highsnr(p: &SystemParams) -> Result<OutageValue, AnalyticError> {
    feasible(p)?;
    let d = (p.n() - p.m()) as u32;
    let v = (Dd::from_f64(p.gamma_th()) / p.rho1()).powi(d as i32) / factorial::<Dd>(d);
    Ok(saturate(v.to_f64()))
}
