//! Monte Carlo outage estimation over Rayleigh channel realizations.
//!
//! Trial `t` of a run with seed `s` draws from its own ChaCha8 stream `(s, t)`,
//! so outcomes do not depend on how trials are split across workers.

mod channel;
mod combiner;
mod sinr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Scheme, SystemParams};

pub use channel::{draw_channel, trial_stream, ChannelDraw};
pub use combiner::{combiner_mmse, combiner_mrc, combiner_zf};
pub use sinr::{sinr_generic, sinr_scheme, z_statistic, SinrSample, Z_CONSISTENCY_TOL};

use sinr::{draw_stats, sinr_from_stats};

pub const MIN_TRIALS: u64 = 1000;
/// Outage counts below this mark the estimate unreliable.
pub const RELIABLE_COUNT: u64 = 10;
const CHUNK: u64 = 4096;
const MAX_REDRAWS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum McError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("ZF combining needs N > M (got N = {n}, M = {m})")]
    Infeasible { n: usize, m: usize },
    #[error("degenerate channel draw")]
    DegenerateDraw,
    #[error("numerical consistency check failed: {0}")]
    NumericalConsistency(String),
}

impl McError {
    pub fn is_numerical(&self) -> bool {
        matches!(self, McError::NumericalConsistency(_) | McError::DegenerateDraw)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageEstimate {
    pub scheme: Scheme,
    pub probability: f64,
    /// Binomial standard error √(p̂(1 − p̂)/trials).
    pub std_error: f64,
    pub trials: u64,
    pub outages: u64,
    pub seed: u64,
    /// Draws rejected as numerically rank deficient and redrawn.
    pub redraws: u64,
    /// Set when fewer than [`RELIABLE_COUNT`] outages were observed.
    pub unreliable: bool,
}

impl OutageEstimate {
    fn from_counts(scheme: Scheme, outages: u64, trials: u64, seed: u64, redraws: u64) -> Self {
        let p = outages as f64 / trials as f64;
        OutageEstimate {
            scheme,
            probability: p,
            std_error: (p * (1.0 - p) / trials as f64).sqrt(),
            trials,
            outages,
            seed,
            redraws,
            unreliable: outages < RELIABLE_COUNT,
        }
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Outage estimate with one worker per available core.
pub fn estimate_outage(p: &SystemParams, scheme: Scheme, trials: u64, seed: u64) -> Result<OutageEstimate, McError> {
    estimate_outage_with(p, scheme, trials, seed, default_workers())
}

pub fn estimate_outage_with(
    p: &SystemParams,
    scheme: Scheme,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<OutageEstimate, McError> {
    let mut out = estimate_outage_batch(std::slice::from_ref(p), &[scheme], trials, seed, workers)?;
    Ok(out.remove(0).remove(0))
}

/// Estimates every (scheme, point) pair from one shared set of draws.
///
/// All points must share N and the interference powers; ρ₁, ρ₂ and γ_th may
/// differ. Entry `[s][i]` equals what [`estimate_outage_with`] returns for
/// `schemes[s]` at `points[i]` with the same seed.
pub fn estimate_outage_batch(
    points: &[SystemParams],
    schemes: &[Scheme],
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<Vec<Vec<OutageEstimate>>, McError> {
    if trials < MIN_TRIALS {
        return Err(McError::InvalidParameter(format!("trials must be at least {MIN_TRIALS}, got {trials}")));
    }
    if workers == 0 {
        return Err(McError::InvalidParameter("workers must be at least 1".into()));
    }
    let Some(first) = points.first() else {
        return Ok(schemes.iter().map(|_| Vec::new()).collect());
    };
    let (n, m) = (first.n(), first.m());
    let rho_i = first.rho_i().to_vec();
    if points.iter().any(|q| q.n() != n || q.rho_i() != rho_i.as_slice()) {
        return Err(McError::InvalidParameter("batched points must share N and the interference powers".into()));
    }
    let zf = schemes.contains(&Scheme::Zf);
    if zf && n <= m {
        return Err(McError::Infeasible { n, m });
    }
    let mmse = schemes.contains(&Scheme::Mmse);
    let cells = schemes.len() * points.len();

    let run_chunk = |c: u64| -> Result<(Vec<u64>, u64), McError> {
        let mut counts = vec![0u64; cells];
        let mut redraws = 0u64;
        for t in c * CHUNK..((c + 1) * CHUNK).min(trials) {
            let mut rng = trial_stream(seed, t);
            let mut attempts = 0;
            let st = loop {
                let d = draw_channel(&mut rng, n, m);
                match draw_stats(&d, &rho_i, zf, mmse) {
                    Ok(st) => break st,
                    Err(McError::DegenerateDraw) if attempts < MAX_REDRAWS => {
                        attempts += 1;
                        redraws += 1;
                    }
                    Err(e) => return Err(e),
                }
            };
            for (si, &scheme) in schemes.iter().enumerate() {
                for (pi, q) in points.iter().enumerate() {
                    let (sinr, _) = sinr_from_stats(scheme, &st, q.rho1(), q.rho2());
                    if sinr < q.gamma_th() {
                        counts[si * points.len() + pi] += 1;
                    }
                }
            }
        }
        Ok((counts, redraws))
    };

    let chunks = trials.div_ceil(CHUNK);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| McError::InvalidParameter(format!("cannot start worker pool: {e}")))?;
    let parts: Vec<(Vec<u64>, u64)> =
        pool.install(|| (0..chunks).into_par_iter().map(run_chunk).collect::<Result<_, _>>())?;

    let mut counts = vec![0u64; cells];
    let mut redraws = 0;
    for (c, r) in parts {
        for (acc, x) in counts.iter_mut().zip(c) {
            *acc += x;
        }
        redraws += r;
    }
    Ok(schemes
        .iter()
        .enumerate()
        .map(|(si, &scheme)| {
            (0..points.len())
                .map(|pi| OutageEstimate::from_counts(scheme, counts[si * points.len() + pi], trials, seed, redraws))
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, m: usize) -> SystemParams {
        SystemParams::equal_power(n, m, 10.0, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn threshold_extremes() {
        let p = params(2, 1);
        let zero = estimate_outage_with(&p.with_gamma_th(0.0).unwrap(), Scheme::Mrc, 2000, 3, 1).unwrap();
        assert_eq!(zero.outages, 0);
        assert!(zero.unreliable);
        let one = estimate_outage_with(&p.with_gamma_th(1e12).unwrap(), Scheme::Mmse, 2000, 3, 1).unwrap();
        assert_eq!(one.probability, 1.0);
        assert_eq!(one.std_error, 0.0);
    }

    #[test]
    fn batch_matches_single_calls() {
        let pts: Vec<_> = [1.0, 10.0, 100.0].iter().map(|&r| params(3, 1).with_rho1(r).unwrap()).collect();
        let batch = estimate_outage_batch(&pts, &Scheme::ALL, 3000, 9, 2).unwrap();
        for (si, &s) in Scheme::ALL.iter().enumerate() {
            for (pi, q) in pts.iter().enumerate() {
                assert_eq!(batch[si][pi], estimate_outage_with(q, s, 3000, 9, 1).unwrap());
            }
        }
    }

    #[test]
    fn rejects_bad_requests() {
        let p = params(2, 2);
        assert_eq!(estimate_outage_with(&p, Scheme::Zf, 1000, 1, 1), Err(McError::Infeasible { n: 2, m: 2 }));
        assert!(matches!(estimate_outage_with(&p, Scheme::Mrc, 999, 1, 1), Err(McError::InvalidParameter(_))));
        assert!(matches!(estimate_outage_with(&p, Scheme::Mrc, 1000, 1, 0), Err(McError::InvalidParameter(_))));
    }
}
