use super::real::Real;
use super::SpecfunError;

/// Γ(n) = (n−1)! for integer n ≥ 1.
pub fn gamma_int(n: u32) -> Result<f64, SpecfunError> {
    if n == 0 {
        return Err(SpecfunError::Domain(format!("gamma_int needs n >= 1, got {n}")));
    }
    if n > 171 {
        return Err(SpecfunError::Range(format!("gamma_int({n}) overflows f64")));
    }
    Ok(factorial::<f64>(n - 1))
}

/// Γ(n, x) = (n−1)! e^(−x) Σ_{k<n} x^k/k!.
pub fn upper_inc_gamma_int(n: u32, x: f64) -> Result<f64, SpecfunError> {
    if !(x >= 0.0) {
        return Err(SpecfunError::Domain(format!("upper_inc_gamma_int needs x >= 0, got {x}")));
    }
    let g = gamma_int(n)?;
    Ok(g * gamma_q_int::<f64>(n, x))
}

pub fn factorial<R: Real>(n: u32) -> R {
    let mut f = R::one();
    for k in 2..=n {
        f *= k as f64;
    }
    f
}

pub fn binomial<R: Real>(n: u32, k: u32) -> R {
    if k > n {
        return R::zero();
    }
    let k = k.min(n - k);
    let mut c = R::one();
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c
}

/// Regularized upper incomplete gamma Q(n, x) = Γ(n, x)/Γ(n) for integer n.
pub fn gamma_q_int<R: Real>(n: u32, x: R) -> R {
    if n == 0 {
        return R::zero();
    }
    if x.to_f64() == 0.0 {
        return R::one();
    }
    if x.to_f64() < 700.0 {
        let mut term = R::one();
        let mut sum = R::one();
        for k in 1..n {
            term = term * x / k as f64;
            sum += term;
        }
        let q = (-x).exp() * sum;
        // rounding can push the sum past 1 when x is small against n
        return if q > R::one() { R::one() } else { q };
    }
    // each term separately in log space; e^(−x) alone would underflow
    let lx = x.ln();
    let mut lf = R::zero();
    let mut sum = R::zero();
    for k in 0..n {
        if k > 0 {
            lf += R::from_f64(k as f64).ln();
        }
        sum += (lx * k as f64 - x - lf).exp();
    }
    sum
}

/// Regularized lower incomplete gamma P(n, x) = 1 − Q(n, x), summed directly
/// for small x so the result keeps full relative accuracy.
pub fn gamma_p_int<R: Real>(n: u32, x: R) -> R {
    if n == 0 {
        return R::one();
    }
    let xf = x.to_f64();
    if xf <= 0.0 {
        return R::zero();
    }
    if xf >= n as f64 {
        return R::one() - gamma_q_int(n, x);
    }
    // e^(−x) x^n/n! Σ_j x^j/((n+1)…(n+j))
    let lead = (-x + x.ln() * n as f64).exp() / factorial::<R>(n);
    let mut term = R::one();
    let mut sum = R::one();
    let mut j = 1u32;
    loop {
        term = term * x / (n + j) as f64;
        sum += term;
        if term.to_f64() <= R::EPS * 0.25 * sum.to_f64() || j > 10_000 {
            break;
        }
        j += 1;
    }
    lead * sum
}
