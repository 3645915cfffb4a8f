//! The Gauss hypergeometric family ₂F₁(a, b; b+1; −z) for integer a, b ≥ 1, z ≥ 0.
//!
//! From the Euler integral F = b ∫₀¹ t^{b−1} (1+zt)^{−a} dt.

use super::dd::Dd;
use super::gamma::binomial;
use super::real::Real;
use super::SpecfunError;

/// ₂F₁(a, b; b+1; −z).
pub fn gauss_2f1_family(a: u32, b: u32, z: f64) -> Result<f64, SpecfunError> {
    if a == 0 || b == 0 {
        return Err(SpecfunError::Domain(format!("2F1 family needs a, b >= 1, got a={a}, b={b}")));
    }
    if !(z >= 0.0) || !z.is_finite() {
        return Err(SpecfunError::Domain(format!("2F1 family needs finite z >= 0, got {z}")));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    let zd = Dd::from_f64(z);
    let v = if a > b {
        hyp2f1_tail(a, b, zd)
    } else if z / (1.0 + z) <= 0.9 {
        pfaff_series(a, b, zd)
    } else {
        power_expansion(a, b, zd)
    };
    Ok(v.to_f64())
}

/// a > b: with w = z/(1+z), F = (1+z)^{−b} Σ_{j=b}^{a−1} C(a−1,j)/C(a−1,b) w^{j−b} (1−w)^{a−1−j}.
/// Every term is positive, so the sum is well conditioned for all z.
pub fn hyp2f1_tail<R: Real>(a: u32, b: u32, z: R) -> R {
    debug_assert!(a > b);
    let zp1 = z + 1.0;
    let w = z / zp1;
    let omw = R::one() / zp1;
    let cb = binomial::<R>(a - 1, b);
    let mut sum = R::zero();
    for j in b..a {
        let t = binomial::<R>(a - 1, j) / cb * w.powi((j - b) as i32) * omw.powi((a - 1 - j) as i32);
        sum += t;
    }
    sum * omw.powi(b as i32)
}

fn pfaff_series(a: u32, b: u32, z: Dd) -> Dd {
    // (1+z)^{−a} Σ (a)_n/(b+1)_n w^n
    let zp1 = z + 1.0;
    let w = z / zp1;
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    for n in 0..5000u32 {
        term = term * w * (a + n) as f64 / (b + 1 + n) as f64;
        sum += term;
        if term.to_f64() < 1e-20 * sum.to_f64() {
            break;
        }
    }
    sum / zp1.powi(a as i32)
}

fn power_expansion(a: u32, b: u32, z: Dd) -> Dd {
    // b z^{−b} Σ_i C(b−1,i) (−1)^{b−1−i} ∫_1^{1+z} v^{i−a} dv
    let zp1 = z + 1.0;
    let mut sum = Dd::ZERO;
    for i in 0..b {
        let p = i as i64 - a as i64 + 1;
        let j = if p == 0 { zp1.ln() } else { (zp1.powi(p as i32) - 1.0) / p as f64 };
        let c = binomial::<Dd>(b - 1, i) * j;
        if (b - 1 - i).is_multiple_of(2) {
            sum += c;
        } else {
            sum -= c;
        }
    }
    sum * b as f64 / z.powi(b as i32)
}
