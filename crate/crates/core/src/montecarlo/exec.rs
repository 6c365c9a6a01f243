use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::{SimConfig, BLOCK_TRIALS};
use crate::error::Result;

/// Independent generator for block `block` of a simulation keyed by `seed`.
pub(crate) fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Runs `body(len, rng)` once per block of `trials` and returns the block
/// results in block order. Uses a pool of `sim.workers` threads when the
/// `parallel` feature is on and more than one worker is requested.
pub(crate) fn run_blocks<T, F>(sim: &SimConfig, trials: u64, body: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, &mut ChaCha8Rng) -> Result<T> + Sync,
{
    let blocks = trials.div_ceil(BLOCK_TRIALS);
    let run = |b: u64| {
        let len = BLOCK_TRIALS.min(trials - b * BLOCK_TRIALS);
        body(len, &mut block_rng(sim.seed, b))
    };

    #[cfg(feature = "parallel")]
    if sim.workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(sim.workers)
            .build()
            .map_err(|e| crate::error::Error::ResourceLimit(e.to_string()))?;
        return pool.install(|| (0..blocks).into_par_iter().map(run).collect());
    }

    (0..blocks).map(run).collect()
}

/// Derives the seed for an independent sub-simulation (splitmix64 mix).
pub(crate) fn fork_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
