//! Deterministic, splittable random streams.
//!
//! Every replication owns one [`RandomStream`] built from
//! `(master_seed, stream_index)`. The mapping is a pure function, so a run is
//! reproducible bit-for-bit regardless of how replications are scheduled
//! across workers. Streams are single-owner: share nothing, fork instead.

use crate::real::Real;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Owned deterministic random stream.
///
/// `Clone` yields an exact copy (same state, same future draws), which is what
/// reproducibility tests need. Use [`RandomStream::fork`] to derive an
/// independent substream instead.
#[derive(Debug, Clone)]
pub struct RandomStream {
    rng: ChaCha8Rng,
}

impl RandomStream {
    /// Deterministic stream for `(master_seed, stream_index)`.
    ///
    /// Distinct indices select distinct ChaCha streams under the same key, so
    /// replications are statistically independent.
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_index.into());
        Self { rng }
    }

    /// Uniform draw strictly inside (0, 1).
    ///
    /// The open interval keeps inverse-c.d.f. transforms finite (no `ln(0)`).
    pub fn uniform<T: Real>(&mut self) -> T {
        // 53 random bits centered in their cell: never exactly 0 or 1.
        let bits = self.rng.next_u64() >> 11;
        T::from_f64_lossy((bits as f64 + 0.5) / 9007199254740992.0)
    }

    /// Derive an independent substream, advancing this stream's state.
    pub fn fork(&mut self) -> RandomStream {
        let mut seed = [0u8; 32];
        for chunk in seed.chunks_exact_mut(8) {
            chunk.copy_from_slice(&self.rng.next_u64().to_le_bytes());
        }
        Self {
            rng: ChaCha8Rng::from_seed(seed),
        }
    }
}
