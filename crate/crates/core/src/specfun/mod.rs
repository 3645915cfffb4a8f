//! Special functions and quadrature.

pub mod bessel;
pub mod dd;
pub mod de;
pub mod gamma;
pub mod hyper;
pub mod quad;
pub mod real;

use thiserror::Error;

pub use bessel::bessel_k_int;
pub use dd::Dd;
pub use gamma::{gamma_int, upper_inc_gamma_int};
pub use hyper::gauss_2f1_family;
pub use quad::{integrate_semi_infinite, QuadratureResult, DEFAULT_ABS_TOL, DEFAULT_BUDGET};
pub use real::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecfunError {
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("result not representable: {0}")]
    Range(String),
    #[error("quadrature did not converge (best {:e} ± {:e} after {} evaluations)", best.value, best.abs_error_estimate, best.evaluations)]
    NonConvergence { best: QuadratureResult },
    #[error("integrand produced a non-finite value")]
    NonFinite,
}
