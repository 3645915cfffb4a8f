//! Double-double arithmetic: an unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`,
//! giving roughly 32 significant decimal digits with f64 exponent range.
//!
//! The outage formulas are of the form `1 - S` where `S` is a positive sum that
//! approaches 1 at high SNR, so probabilities near 1e-15 need more than f64.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

#[derive(Clone, Copy, Default, PartialEq)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    pub const PI: Dd = Dd { hi: std::f64::consts::PI, lo: 1.2246467991473532e-16 };
    pub const LN2: Dd = Dd { hi: std::f64::consts::LN_2, lo: 2.319046813846299558e-17 };
    pub const EULER_GAMMA: Dd = Dd { hi: 0.5772156649015329, lo: -4.942915152430645e-18 };

    /// Builds from two components; they are renormalized.
    pub fn new(hi: f64, lo: f64) -> Dd {
        let (h, l) = two_sum(hi, lo);
        Dd { hi: h, lo: l }
    }

    pub const fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite()
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    /// Multiplication by 2^k, exact barring underflow.
    pub fn ldexp(self, k: i32) -> Dd {
        let mut x = self;
        let mut k = k;
        while k > 1000 {
            x = Dd { hi: x.hi * 2f64.powi(1000), lo: x.lo * 2f64.powi(1000) };
            k -= 1000;
        }
        while k < -1000 {
            x = Dd { hi: x.hi * 2f64.powi(-1000), lo: x.lo * 2f64.powi(-1000) };
            k += 1000;
        }
        let s = 2f64.powi(k);
        Dd { hi: x.hi * s, lo: x.lo * s }
    }

    pub fn sqr(self) -> Dd {
        let (p, e) = two_prod(self.hi, self.hi);
        let e = e + 2.0 * self.hi * self.lo + self.lo * self.lo;
        let (h, l) = quick_two_sum(p, e);
        Dd { hi: h, lo: l }
    }

    pub fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 { Dd::ZERO } else { Dd::from_f64(f64::NAN) };
        }
        let s = self.hi.sqrt();
        let y = Dd::from_f64(s);
        y + (self - y.sqr()) * (0.5 / s)
    }

    pub fn exp(self) -> Dd {
        if self.hi > 709.78 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -745.2 {
            return Dd::ZERO;
        }
        if self.hi == 0.0 {
            return Dd::ONE;
        }
        let k = (self.hi / Dd::LN2.hi).round();
        let r = (self - Dd::LN2 * k).ldexp(-10);
        // expm1(r) by Taylor; |r| < 3.4e-4 so 12 terms are ample
        let mut term = r;
        let mut sum = r;
        for n in 2..=12 {
            term = term * r / n as f64;
            sum += term;
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        // (1 + p)^2 - 1 = 2p + p^2
        for _ in 0..10 {
            sum = sum.ldexp(1) + sum.sqr();
        }
        (sum + 1.0).ldexp(k as i32)
    }

    pub fn ln(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::from_f64(if self.hi == 0.0 { f64::NEG_INFINITY } else { f64::NAN });
        }
        if !self.hi.is_finite() {
            return self;
        }
        let y = Dd::from_f64(self.hi.ln());
        y + self * (-y).exp() - 1.0
    }

    pub fn powi(self, n: i32) -> Dd {
        if n == 0 {
            return Dd::ONE;
        }
        let mut base = self;
        let mut e = n.unsigned_abs();
        let mut acc = Dd::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        if n < 0 {
            Dd::ONE / acc
        } else {
            acc
        }
    }
}

impl fmt::Debug for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dd({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.hi)
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Dd {
        Dd::from_f64(x)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (h, l) = quick_two_sum(s1, s2);
        if !h.is_finite() {
            return Dd { hi: h, lo: 0.0 };
        }
        Dd { hi: h, lo: l }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        if !p.is_finite() || p == 0.0 {
            return Dd { hi: p, lo: 0.0 };
        }
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (h, l) = quick_two_sum(p, e);
        Dd { hi: h, lo: l }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        if !q1.is_finite() || q1 == 0.0 {
            return Dd { hi: q1, lo: 0.0 };
        }
        let r = self - b * q1;
        let q2 = r.hi / b.hi;
        let r = r - b * q2;
        let q3 = r.hi / b.hi;
        let (h, l) = quick_two_sum(q1, q2);
        Dd { hi: h, lo: l } + q3
    }
}

impl Add<f64> for Dd {
    type Output = Dd;
    fn add(self, b: f64) -> Dd {
        let (s1, s2) = two_sum(self.hi, b);
        let s2 = s2 + self.lo;
        let (h, l) = quick_two_sum(s1, s2);
        if !h.is_finite() {
            return Dd { hi: h, lo: 0.0 };
        }
        Dd { hi: h, lo: l }
    }
}

impl Sub<f64> for Dd {
    type Output = Dd;
    fn sub(self, b: f64) -> Dd {
        self + (-b)
    }
}

impl Mul<f64> for Dd {
    type Output = Dd;
    fn mul(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        if !p.is_finite() || p == 0.0 {
            return Dd { hi: p, lo: 0.0 };
        }
        let e = e + self.lo * b;
        let (h, l) = quick_two_sum(p, e);
        Dd { hi: h, lo: l }
    }
}

impl Div<f64> for Dd {
    type Output = Dd;
    fn div(self, b: f64) -> Dd {
        self / Dd::from_f64(b)
    }
}

macro_rules! assign_ops {
    ($($tr:ident $m:ident $op:tt $rhs:ty),*) => {$(
        impl $tr<$rhs> for Dd {
            fn $m(&mut self, b: $rhs) {
                *self = *self $op b;
            }
        }
    )*};
}

assign_ops!(
    AddAssign add_assign + Dd, SubAssign sub_assign - Dd, MulAssign mul_assign * Dd, DivAssign div_assign / Dd,
    AddAssign add_assign + f64, SubAssign sub_assign - f64, MulAssign mul_assign * f64, DivAssign div_assign / f64
);

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: Dd, b: Dd) -> f64 {
        ((a - b) / b).abs().to_f64()
    }

    #[test]
    fn division_roundtrip() {
        let a = Dd::from_f64(1.0) / 3.0;
        let back = a * 3.0;
        assert!((back - 1.0).abs().to_f64() < 1e-31);
    }

    #[test]
    fn exp_ln_inverse() {
        for &x in &[-600.0, -30.5, -1.0, -1e-5, 1e-8, 0.3, 2.0, 17.25, 300.0] {
            let d = Dd::from_f64(x);
            let back = d.exp().ln();
            assert!((back - d).abs().to_f64() <= 1e-30 * x.abs().max(1.0), "x = {x}");
        }
    }

    #[test]
    fn exp_one_matches_e() {
        // e = 2.718281828459045 + 1.4456468917292502e-16
        let e = Dd::new(std::f64::consts::E, 1.4456468917292502e-16);
        assert!(rel(Dd::ONE.exp(), e) < 1e-31);
    }

    #[test]
    fn sqrt_two_squared() {
        let r = Dd::from_f64(2.0).sqrt();
        assert!((r.sqr() - 2.0).abs().to_f64() < 1e-31);
    }

    #[test]
    fn pi_from_machin() {
        // pi = 16 atan(1/5) - 4 atan(1/239)
        fn atan_inv(n: f64) -> Dd {
            let x = Dd::ONE / n;
            let x2 = x.sqr();
            let mut term = x;
            let mut sum = x;
            let mut k = 1;
            loop {
                term = -term * x2;
                let t = term / (2 * k + 1) as f64;
                sum += t;
                if t.abs().to_f64() < 1e-40 {
                    break;
                }
                k += 1;
            }
            sum
        }
        let pi = atan_inv(5.0) * 16.0 - atan_inv(239.0) * 4.0;
        assert!(rel(pi, Dd::PI) < 1e-31);
    }

    #[test]
    fn ln2_and_euler_constants() {
        assert!(rel(Dd::LN2.exp(), Dd::from_f64(2.0)) < 1e-31);
        // Euler-Maclaurin: gamma = H_n - ln n - 1/(2n) + 1/(12n^2) - 1/(120n^4) + 1/(252n^6)
        let n = 1000.0;
        let mut h = Dd::ZERO;
        for k in (1..=1000).rev() {
            h += Dd::ONE / k as f64;
        }
        let nn = Dd::from_f64(n);
        let g = h - nn.ln() - Dd::ONE / (2.0 * n) + Dd::ONE / (12.0 * n * n) - Dd::ONE / nn.powi(4) / 120.0
            + Dd::ONE / nn.powi(6) / 252.0
            - Dd::ONE / nn.powi(8) / 240.0;
        assert!((g - Dd::EULER_GAMMA).abs().to_f64() < 1e-29);
    }

    #[test]
    fn powi_negative() {
        let x = Dd::from_f64(1.5);
        assert!(rel(x.powi(-3) * x.powi(3), Dd::ONE) < 1e-31);
    }

    #[test]
    fn exp_extremes() {
        assert_eq!(Dd::from_f64(-800.0).exp().to_f64(), 0.0);
        assert!(Dd::from_f64(800.0).exp().to_f64().is_infinite());
    }
}
