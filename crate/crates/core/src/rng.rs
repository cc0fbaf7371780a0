//! Deterministic random streams.
//!
//! Every Monte Carlo sample draws from its own ChaCha8 stream keyed by the
//! master seed, a purpose tag and the sample index, so results do not depend
//! on how samples are spread over threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Purpose tags keeping streams of different estimators apart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    TopologicalOverlap = 1,
    MeasureOverlap = 2,
    Lyapunov = 3,
    PointCloud = 4,
    Pivots = 5,
    Test = 99,
}

/// The stream for sample `index` of the estimator tagged `purpose`.
pub fn stream(seed: u64, purpose: Purpose, index: u64) -> Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(purpose as u64).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}
