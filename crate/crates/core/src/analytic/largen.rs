use super::kernel::dual_hop_success;
use super::{finalize, zero, AnalyticError, OutageValue};
use crate::model::SystemParams;
use crate::specfun::Dd;

/// Limit outage of ZF/MRT and MMSE/MRT as N grows: the interference-free
/// dual-hop link with γ = ρ₁y₁ρ₂y₂/(ρ₁y₁ + ρ₂y₂ + 1).
pub fn outage_largen(p: &SystemParams) -> Result<OutageValue, AnalyticError> {
    if p.gamma_th() == 0.0 {
        return Ok(zero());
    }
    let g = p.gamma_th();
    let c = Dd::from_f64(g) / p.rho1();
    let a = Dd::from_f64(g) / p.rho2();
    let b = Dd::ONE / p.rho2();
    let n = p.n() as u32;
    let s = dual_hop_success(n, n, c, a, b);
    finalize((Dd::ONE - s).to_f64(), None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::outage_zf_exact;

    #[test]
    fn matches_zf_without_interferers() {
        for n in 1..6 {
            for &r in &[1.0, 10.0, 316.0] {
                let p = SystemParams::new(n, r, 1.5, 2.0, vec![]).unwrap();
                assert_eq!(outage_largen(&p).unwrap(), outage_zf_exact(&p).unwrap());
            }
        }
    }
}
