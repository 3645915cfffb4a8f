//! Adaptive Gauss–Kronrod (7/15) quadrature over (0, ∞).

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::SpecfunError;

pub const DEFAULT_ABS_TOL: f64 = 1e-6;
pub const DEFAULT_BUDGET: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut abs_sum = fc.abs() * WGK[7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        k += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            g += WG[j / 2] * (f1 + f2);
        }
    }
    let err = ((k - g) * h).abs().max(50.0 * f64::EPSILON * abs_sum * h);
    (k * h, err)
}

/// ∫₀^∞ f(x) dx via x = t/(1−t) and adaptive bisection on (0, 1).
///
/// The error estimate is |K15 − G7| per panel, summed. Fails with
/// [`SpecfunError::NonConvergence`] (carrying the best estimate) if the budget
/// runs out first.
pub fn integrate_semi_infinite<F: FnMut(f64) -> f64>(
    mut f: F,
    abs_tol: f64,
    budget: usize,
) -> Result<QuadratureResult, SpecfunError> {
    let mut g = |t: f64| {
        let s = 1.0 - t;
        let x = t / s;
        let y = f(x) / (s * s);
        if y.is_finite() {
            y
        } else if x.is_finite() {
            f64::NAN
        } else {
            0.0
        }
    };
    let mut evals = 0usize;
    let mut heap = BinaryHeap::new();
    let (v, e) = gk15(&mut g, 0.0, 1.0);
    evals += 15;
    let mut total = v;
    let mut total_err = e;
    heap.push(Piece { a: 0.0, b: 1.0, value: v, err: e });
    loop {
        if !total.is_finite() || total_err.is_nan() {
            return Err(SpecfunError::NonFinite);
        }
        if total_err <= abs_tol {
            return Ok(QuadratureResult { value: total, abs_error_estimate: total_err, evaluations: evals });
        }
        if evals + 30 > budget {
            return Err(SpecfunError::NonConvergence {
                best: QuadratureResult { value: total, abs_error_estimate: total_err, evaluations: evals },
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // panel at machine resolution; its error cannot shrink further
            return Err(SpecfunError::NonConvergence {
                best: QuadratureResult { value: total, abs_error_estimate: total_err, evaluations: evals },
            });
        }
        let (v1, e1) = gk15(&mut g, worst.a, mid);
        let (v2, e2) = gk15(&mut g, mid, worst.b);
        evals += 30;
        total += v1 + v2 - worst.value;
        heap.push(Piece { a: worst.a, b: mid, value: v1, err: e1 });
        heap.push(Piece { a: mid, b: worst.b, value: v2, err: e2 });
        // resum the error to avoid drift from repeated subtraction
        total_err = heap.iter().map(|p| p.err).sum();
    }
}

/// ∫_a^b f(x) dx by the same adaptive rule on a finite interval.
pub fn integrate_finite<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    budget: usize,
) -> Result<QuadratureResult, SpecfunError> {
    let w = b - a;
    integrate_semi_infinite(
        |x| {
            // map (0,∞) → (a,b) by u = x/(1+x)
            let u = x / (1.0 + x);
            let j = 1.0 / ((1.0 + x) * (1.0 + x));
            f(a + w * u) * w * j
        },
        abs_tol,
        budget,
    )
}
