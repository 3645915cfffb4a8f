//! Outage analysis of dual-hop amplify-and-forward relaying with a
//! multi-antenna relay under co-channel interference.
//!
//! Three relay schemes are covered (MRC/MRT, ZF/MRT, MMSE/MRT), each with
//! closed-form or single-integral outage expressions in [`analytic`] and a
//! channel-level simulator in [`montecarlo`].

// NaN-rejecting `!(x > 0.0)` checks and full-width double-double constants are deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod acceptance;
pub mod analytic;
pub mod experiments;
pub mod model;
pub mod montecarlo;
pub mod specfun;

pub use analytic::{outage, AnalyticError, AnalyticMethod, EvalOptions, OutageValue, Precision};
pub use experiments::{
    figure_recipe, run_sweep, Abscissa, Case, ExperimentError, FigureId, Method, OutageCurve, SweepConfig,
};
pub use model::{db_to_linear, linear_to_db, InterferenceProfile, ModelError, Scheme, SystemParams};
pub use montecarlo::{estimate_outage, ChannelDraw, McError, OutageEstimate, SinrSample};
pub use specfun::{QuadratureResult, SpecfunError};
