//! Outage probability formulas for the MRC/MRT, ZF/MRT and MMSE/MRT relays.
//!
//! All closed forms are evaluated in double-double arithmetic and rounded at
//! the end; outage values near 1e-15 come out of a `1 − S` difference.

mod kernel;
mod largen;
mod mmse;
mod mrc;
mod zf;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{InterferenceProfile, Scheme, SystemParams};
use crate::specfun::{QuadratureResult, SpecfunError};

pub use largen::outage_largen;
pub use mmse::{
    cdf_z_piecewise, cdf_z_unified, mmse_highsnr_coefficient, outage_mmse_exact, outage_mmse_exact_with,
    outage_mmse_highsnr, outage_mmse_lower,
};
pub use mrc::{
    mrc_highsnr_coefficient, mrc_highsnr_coefficient_equal, outage_mrc_exact, outage_mrc_exact_with,
    outage_mrc_highsnr, outage_mrc_lower,
};
pub use zf::{outage_zf_exact, outage_zf_highsnr};

/// Excursion outside [0, 1] tolerated before clamping.
pub const CLAMP_SLACK: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AnalyticMethod {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "lower")]
    LowerBound,
    #[serde(rename = "highsnr")]
    HighSnr,
    #[serde(rename = "largen")]
    LargeN,
}

impl AnalyticMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            AnalyticMethod::Exact => "exact",
            AnalyticMethod::LowerBound => "lower",
            AnalyticMethod::HighSnr => "highsnr",
            AnalyticMethod::LargeN => "largen",
        }
    }
}

impl fmt::Display for AnalyticMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AnalyticMethod {
    type Err = AnalyticError;
    fn from_str(s: &str) -> Result<Self, AnalyticError> {
        match s {
            "exact" => Ok(AnalyticMethod::Exact),
            "lower" => Ok(AnalyticMethod::LowerBound),
            "highsnr" => Ok(AnalyticMethod::HighSnr),
            "largen" => Ok(AnalyticMethod::LargeN),
            _ => Err(AnalyticError::InvalidParameter(format!("unknown analytic method '{s}'"))),
        }
    }
}

/// Arithmetic used for the integral formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Precision {
    /// Double-double arithmetic with exp-sinh quadrature.
    #[default]
    Extended,
    /// Plain f64 with adaptive Gauss–Kronrod quadrature at absolute tolerance `tol`.
    Double,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    /// Absolute error allowed on the outage probability.
    pub tol: f64,
    pub precision: Precision,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { tol: crate::specfun::DEFAULT_ABS_TOL, precision: Precision::Extended }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageValue {
    pub probability: f64,
    /// Present for the integral formulas; `value` is the unclamped probability
    /// and `abs_error_estimate` the propagated quadrature error.
    pub quadrature: Option<QuadratureResult>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("ZF combining needs N > M (got N = {n}, M = {m})")]
    Infeasible { n: usize, m: usize },
    #[error("{0} needs equal interference powers")]
    UnsupportedProfile(&'static str),
    #[error("method '{method}' is not defined for scheme '{scheme}'")]
    Unsupported { scheme: Scheme, method: AnalyticMethod },
    #[error("quadrature failed in {context}: {source}")]
    Quadrature {
        context: String,
        #[source]
        source: SpecfunError,
    },
    #[error("outage value {value:e} lies outside [0, 1] beyond the {CLAMP_SLACK:e} slack")]
    NumericalConsistency { value: f64 },
}

impl AnalyticError {
    /// True for failures of the numerics rather than of the request.
    pub fn is_numerical(&self) -> bool {
        matches!(self, AnalyticError::Quadrature { .. } | AnalyticError::NumericalConsistency { .. })
    }
}

pub(crate) fn finalize(v: f64, quadrature: Option<QuadratureResult>) -> Result<OutageValue, AnalyticError> {
    if !(-CLAMP_SLACK..=1.0 + CLAMP_SLACK).contains(&v) {
        return Err(AnalyticError::NumericalConsistency { value: v });
    }
    Ok(OutageValue { probability: v.clamp(0.0, 1.0), quadrature })
}

/// High-SNR leading terms are asymptotes, not probabilities; below their
/// regime they can exceed 1 and are capped there.
pub(crate) fn saturate(v: f64) -> OutageValue {
    OutageValue { probability: v.min(1.0), quadrature: None }
}

pub(crate) fn zero() -> OutageValue {
    OutageValue { probability: 0.0, quadrature: None }
}

/// Common interferer power for the equal-power formulas; any value works when M = 0.
pub(crate) fn equal_power(p: &SystemParams, what: &'static str) -> Result<f64, AnalyticError> {
    if p.m() == 0 {
        return Ok(1.0);
    }
    p.common_interference_power().ok_or(AnalyticError::UnsupportedProfile(what))
}

/// Whether `method` is defined for `scheme` at these parameters; ZF
/// feasibility is left to the evaluation itself.
pub fn check_supported(scheme: Scheme, method: AnalyticMethod, p: &SystemParams) -> Result<(), AnalyticError> {
    match (scheme, method) {
        (Scheme::Zf, AnalyticMethod::LowerBound) | (Scheme::Mrc, AnalyticMethod::LargeN) => {
            Err(AnalyticError::Unsupported { scheme, method })
        }
        (Scheme::Mmse, AnalyticMethod::Exact) => equal_power(p, "the exact MMSE outage").map(|_| ()),
        (Scheme::Mmse, AnalyticMethod::LowerBound) => equal_power(p, "the MMSE lower bound").map(|_| ()),
        (Scheme::Mmse, AnalyticMethod::HighSnr) => equal_power(p, "the MMSE high-SNR coefficient").map(|_| ()),
        _ => Ok(()),
    }
}

/// Evaluates `method` for `scheme`.
pub fn outage(
    scheme: Scheme,
    method: AnalyticMethod,
    p: &SystemParams,
    opts: &EvalOptions,
) -> Result<OutageValue, AnalyticError> {
    match (scheme, method) {
        (Scheme::Mrc, AnalyticMethod::Exact) => outage_mrc_exact_with(p, &p.profile(), opts),
        (Scheme::Mrc, AnalyticMethod::LowerBound) => outage_mrc_lower(p, &p.profile()),
        (Scheme::Mrc, AnalyticMethod::HighSnr) => outage_mrc_highsnr(p, &p.profile()),
        (Scheme::Zf, AnalyticMethod::Exact) => outage_zf_exact(p),
        (Scheme::Zf, AnalyticMethod::HighSnr) => outage_zf_highsnr(p),
        (Scheme::Mmse, AnalyticMethod::Exact) => outage_mmse_exact_with(p, opts),
        (Scheme::Mmse, AnalyticMethod::LowerBound) => outage_mmse_lower(p),
        (Scheme::Mmse, AnalyticMethod::HighSnr) => outage_mmse_highsnr(p),
        (Scheme::Zf | Scheme::Mmse, AnalyticMethod::LargeN) => outage_largen(p),
        (Scheme::Zf, AnalyticMethod::LowerBound) | (Scheme::Mrc, AnalyticMethod::LargeN) => {
            Err(AnalyticError::Unsupported { scheme, method })
        }
    }
}

/// Multiplier of (γ_th/ρ₁)^N in the high-SNR outage of MRC and MMSE.
pub fn highsnr_coefficient(scheme: Scheme, p: &SystemParams, prof: &InterferenceProfile) -> Result<f64, AnalyticError> {
    match scheme {
        Scheme::Mrc => Ok(mrc_highsnr_coefficient(p.n(), p.mu(), prof)),
        Scheme::Mmse => mmse_highsnr_coefficient(p),
        Scheme::Zf => Err(AnalyticError::Unsupported { scheme, method: AnalyticMethod::HighSnr }),
    }
}
