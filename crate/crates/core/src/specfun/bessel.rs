//! Modified Bessel functions of the second kind for integer order.

use super::real::Real;
use super::SpecfunError;

/// K_v(x) for integer v and x > 0. Underflows to 0 for very large x.
pub fn bessel_k_int(v: i32, x: f64) -> Result<f64, SpecfunError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecfunError::Domain(format!("bessel_k_int needs finite x > 0, got {x}")));
    }
    let n = v.unsigned_abs();
    let (k0, k1) = bessel_k01(x);
    if n == 0 {
        return Ok(k0);
    }
    let (mut km, mut k) = (k0, k1);
    for j in 1..n {
        let kp = km + k * (2.0 * j as f64 / x);
        km = k;
        k = kp;
    }
    Ok(k)
}

/// (K₀(x), K₁(x)) for x > 0.
pub fn bessel_k01<R: Real>(x: R) -> (R, R) {
    if x.to_f64() <= 2.0 {
        k01_series(x)
    } else {
        k01_steed(x)
    }
}

fn k01_series<R: Real>(x: R) -> (R, R) {
    let t = x * x * 0.25;
    let lg = (x * 0.5).ln() + R::euler_gamma();
    // K0 = −(ln(x/2)+γ) I0 + Σ_{k≥1} t^k/(k!)² H_k
    // K1 = 1/x + ln(x/2) I1 − (x/4) Σ_{k≥0} t^k/(k!(k+1)!) (ψ(k+1)+ψ(k+2))
    let mut i0 = R::one();
    let mut s0 = R::zero();
    let mut term0 = R::one(); // t^k/(k!)^2
    let mut term1 = R::one(); // t^k/(k!(k+1)!)
    let mut i1 = R::one();
    let mut h = R::zero(); // H_k
                           // ψ(1) + ψ(2) = −2γ + 1
    let mut s1 = -R::euler_gamma() * 2.0 + 1.0;
    let mut k = 1u32;
    loop {
        let kf = k as f64;
        term0 = term0 * t / (kf * kf);
        term1 = term1 * t / (kf * (kf + 1.0));
        h += R::one() / kf;
        i0 += term0;
        s0 += term0 * h;
        i1 += term1;
        let h1 = h + R::one() / (kf + 1.0);
        s1 += term1 * (h + h1 - R::euler_gamma() * 2.0);
        if term0.to_f64() < R::EPS * 1e-2 * i0.to_f64() || k > 200 {
            break;
        }
        k += 1;
    }
    let k0 = -lg * i0 + s0;
    let i1 = i1 * x * 0.5;
    let k1 = R::one() / x + (x * 0.5).ln() * i1 - x * 0.25 * s1;
    (k0, k1)
}

fn k01_steed<R: Real>(x: R) -> (R, R) {
    let tiny = R::EPS * 0.5;
    let mut b = (x + 1.0) * 2.0;
    let mut d = R::one() / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = R::zero();
    let mut q2 = R::one();
    let a1 = 0.25;
    let mut q = R::from_f64(a1);
    let mut c = R::from_f64(a1);
    let mut a = -a1;
    let mut s = q * delh + 1.0;
    for i in 2..2000u32 {
        a -= 2.0 * (i - 1) as f64;
        c = -(c * a) / i as f64;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        if c.abs().to_f64() > 1e100 {
            // c grows factorially while q1, q2 decay; rescaling keeps c·qnew intact
            c *= 1e-100;
            q1 *= 1e100;
            q2 *= 1e100;
        }
        b += 2.0;
        d = R::one() / (b + d * a);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs().to_f64() < tiny {
            break;
        }
    }
    h *= a1;
    let k0 = (R::pi() / (x * 2.0)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

/// Table of s_v(y) = y^{v/2} K_v(2√y) for v in vmin..=vmax.
///
/// These are the values of ∫₀^∞ t^{v−1} e^{−t−y/t} dt / 2 and satisfy
/// s_{v+1} = v s_v + y s_{v−1}, s_{−n} = y^{−n} s_n.
pub fn scaled_k_table<R: Real>(y: R, vmin: i32, vmax: i32) -> Vec<R> {
    let top = vmax.max(-vmin).max(1) as usize;
    let mut pos = Vec::with_capacity(top + 1);
    let sy = y.sqrt();
    let (k0, k1) = bessel_k01(sy * 2.0);
    pos.push(k0);
    pos.push(sy * k1);
    for n in 1..top {
        let next = pos[n] * n as f64 + y * pos[n - 1];
        pos.push(next);
    }
    let inv_y = R::one() / y;
    (vmin..=vmax)
        .map(|v| {
            if v >= 0 {
                pos[v as usize]
            } else {
                let n = (-v) as usize;
                pos[n] * inv_y.powi(n as i32)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::dd::Dd;

    #[test]
    fn symmetric_in_order() {
        assert_eq!(bessel_k_int(-2, 3.0).unwrap(), bessel_k_int(2, 3.0).unwrap());
    }

    #[test]
    fn reference_values() {
        let k0 = bessel_k_int(0, 1.0).unwrap();
        let k1 = bessel_k_int(1, 1.0).unwrap();
        assert!((k0 / 0.42102443824070834 - 1.0).abs() < 1e-14);
        assert!((k1 / 0.6019072301972346 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn continuity_at_branch_point() {
        let below = k01_series(Dd::from_f64(2.0));
        let above = k01_steed(Dd::from_f64(2.0));
        assert!(((below.0 - above.0) / above.0).abs().to_f64() < 1e-29);
        assert!(((below.1 - above.1) / above.1).abs().to_f64() < 1e-29);
    }

    #[test]
    fn domain_errors() {
        assert!(bessel_k_int(0, 0.0).is_err());
        assert!(bessel_k_int(1, -1.0).is_err());
        assert_eq!(bessel_k_int(0, 800.0).unwrap(), 0.0);
    }

    #[test]
    fn scaled_table_recurrence() {
        let y = 0.37;
        let t = scaled_k_table(y, -3, 5);
        for (i, v) in (-3..=5).enumerate() {
            let direct = y.powf(v as f64 / 2.0) * bessel_k_int(v, 2.0 * y.sqrt()).unwrap();
            assert!((t[i] / direct - 1.0).abs() < 1e-13, "v = {v}");
        }
    }
}
