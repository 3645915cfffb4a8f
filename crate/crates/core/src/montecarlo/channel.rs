use nalgebra::{DMatrix, DVector, RowDVector};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// One realization of all fading channels.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelDraw {
    /// Source → relay, N × 1.
    pub h1: DVector<Complex64>,
    /// Relay → destination, stored as the 1 × N row.
    pub h2: RowDVector<Complex64>,
    /// Interferer → relay channels as columns, N × M.
    pub h_i: DMatrix<Complex64>,
}

impl ChannelDraw {
    pub fn n(&self) -> usize {
        self.h1.len()
    }

    pub fn m(&self) -> usize {
        self.h_i.ncols()
    }
}

fn cn01<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Draws h₁, then h₂, then H_I column by column, all CN(0, 1).
pub fn draw_channel<R: Rng + ?Sized>(stream: &mut R, n: usize, m: usize) -> ChannelDraw {
    let h1 = DVector::from_fn(n, |_, _| cn01(stream));
    let h2 = RowDVector::from_fn(n, |_, _| cn01(stream));
    // from_fn fills column-major
    let h_i = DMatrix::from_fn(n, m, |_, _| cn01(stream));
    ChannelDraw { h1, h2, h_i }
}

/// The random stream of trial `trial`; depends on (seed, trial) only.
pub fn trial_stream(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}
