//! Closed form of Prob(y₁ (y₂ − a)/(y₂ + b) > c) for y₁ ~ Gamma(n₁, 1), y₂ ~ Gamma(n₂, 1).
//!
//! With d = a + b the success probability is
//!   2 e^{−a−c}/Γ(n₂) Σ_{m<n₁} c^m/m! Σ_{j≤m} C(m,j) b^{m−j}
//!     Σ_{k<n₂+j} C(n₂+j−1,k) a^{n₂+j−1−k} s_{k−m+1}(c d),
//! where s_v(y) = y^{v/2} K_v(2√y).

use crate::specfun::bessel::scaled_k_table;
use crate::specfun::gamma::{binomial, factorial};
use crate::specfun::Real;

pub(crate) struct Kernel<R> {
    n1: u32,
    d: R,
    /// coef[m][k] = 1/m! Σ_j C(m,j) b^{m−j} C(n₂+j−1,k) a^{n₂+j−1−k}, times d^{k+1−m} when k+1 < m
    coef: Vec<Vec<R>>,
    vmax: i32,
    norm: R,
}

impl<R: Real> Kernel<R> {
    pub(crate) fn new(n1: u32, n2: u32, a: R, b: R) -> Self {
        let d = a + b;
        let (ad, bd) = (a / d, b / d);
        let dn2 = d.powi(n2 as i32);
        let mut coef = Vec::with_capacity(n1 as usize);
        for m in 0..n1 {
            let mut row = vec![R::zero(); (n2 + m) as usize];
            let mf = factorial::<R>(m);
            for j in 0..=m {
                let cj = binomial::<R>(m, j) / mf;
                let top = n2 + j - 1;
                for (k, slot) in row.iter_mut().enumerate().take(top as usize + 1) {
                    let k = k as u32;
                    let bin = cj * binomial::<R>(top, k);
                    *slot += if k + 1 >= m {
                        bin * b.powi((m - j) as i32) * a.powi((top - k) as i32)
                    } else {
                        // negative order: fold d^(k+1−m) in, leaving d^(n₂) times ratios ≤ 1
                        bin * bd.powi((m - j) as i32) * ad.powi((top - k) as i32) * dn2
                    };
                }
            }
            coef.push(row);
        }
        let vmax = (n2 as i32).max(n1 as i32 - 2).max(1);
        Kernel { n1, d, coef, vmax, norm: R::from_f64(2.0) / factorial::<R>(n2 - 1) }
    }

    /// e^{−c} Σ_m Σ_k coef[m][k] c^m s_{k−m+1}(c d), times 2/Γ(n₂).
    ///
    /// Negative orders use c^m s_{−n}(cd) = c^{m−n} d^{−n} s_n(cd) so no y^{−n} is formed.
    pub(crate) fn g(&self, c: R) -> R {
        let y = c * self.d;
        let s = scaled_k_table(y, 0, self.vmax);
        let mut cpow = Vec::with_capacity(self.n1 as usize + 1);
        cpow.push(R::one());
        for i in 1..=self.n1 as usize {
            let next = cpow[i - 1] * c;
            cpow.push(next);
        }
        let mut total = R::zero();
        for (m, row) in self.coef.iter().enumerate() {
            for (k, &w) in row.iter().enumerate() {
                let v = k as i32 - m as i32 + 1;
                let t = if v >= 0 { cpow[m] * s[v as usize] } else { cpow[k + 1] * s[(-v) as usize] };
                total += w * t;
            }
        }
        (-c).exp() * total * self.norm
    }
}

/// Success probability S such that the dual-hop outage is 1 − S.
pub(crate) fn dual_hop_success<R: Real>(n1: u32, n2: u32, c: R, a: R, b: R) -> R {
    if n1 == 0 {
        return R::zero();
    }
    let k = Kernel::new(n1, n2, a, b);
    (-a).exp() * k.g(c)
}
