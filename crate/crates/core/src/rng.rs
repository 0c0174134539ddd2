//! Seeding conventions: one root seed, counter-derived substreams.
//!
//! Every source of randomness in the crate is a ChaCha stream addressed by
//! `(root seed, stream index)`. Streams are independent of each other and of
//! any execution order, so Monte Carlo loops may be evaluated in any schedule
//! without changing results.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream namespace offsets. Consumers that draw from the same root seed use
/// disjoint namespaces so their draws never overlap.
pub mod namespace {
    /// Main bootstrap multiplier replicates.
    pub const BOOTSTRAP: u64 = 0;
    /// Power enhancement threshold replicates (disjoint from `BOOTSTRAP`).
    pub const ENHANCEMENT: u64 = 1 << 32;
    /// Scenario error process draws.
    pub const SCENARIO: u64 = 2 << 32;
    /// One-off scenario parameter draws (e.g. the FAR operator).
    pub const SCENARIO_PARAMS: u64 = 3 << 32;
}

/// The RNG for substream `stream` of `seed`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 finaliser; used to derive child seeds from `(seed, index)`
/// pairs without correlation between neighbouring indices.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
