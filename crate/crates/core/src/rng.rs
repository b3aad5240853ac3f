//! Reproducible randomness.
//!
//! Every random draw in the crate comes from ChaCha20 (`rand_chacha` 0.9,
//! 20 rounds), a counter-based generator. A user seed is expanded with
//! `SeedableRng::seed_from_u64`; independent consumers are separated by the
//! ChaCha stream id, which [`derive_stream`] computes from a list of tags
//! (purpose, sender, message index, trial number, ...). Two consumers with
//! different tag lists never share keystream, and a consumer's output does
//! not depend on how many draws other consumers made, so parallel trials
//! reproduce bit-for-bit.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Generator version recorded in reports.
pub const GENERATOR: &str = "chacha20/rand_chacha-0.9/v1";

/// Stream tags for the different consumers of a code-construction seed.
pub mod tag {
    pub const MATRIX: u64 = 1;
    pub const INNER_GENERATOR: u64 = 2;
    pub const OUTER_GENERATOR: u64 = 3;
    pub const BIAS: u64 = 4;
    pub const CHANNEL_INPUT: u64 = 5;
    pub const TRIAL: u64 = 6;
    pub const PARITY: u64 = 7;
    pub const SOURCE: u64 = 8;
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hashes a tag path into a ChaCha stream id.
pub fn derive_stream(tags: &[u64]) -> u64 {
    tags.iter()
        .fold(0x5E_ED0F_C0DE_u64, |acc, &t| splitmix(acc ^ splitmix(t)))
}

/// Generator for `seed` positioned on the stream named by `tags`.
pub fn stream_rng(seed: u64, tags: &[u64]) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(derive_stream(tags));
    rng
}
