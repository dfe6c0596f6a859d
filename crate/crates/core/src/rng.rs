//! Deterministic random-number streams.
//!
//! Every Monte Carlo trial gets its own ChaCha stream selected by the trial
//! index, so results do not depend on how trials are scheduled across workers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used throughout the crate.
pub type TrialRng = ChaCha8Rng;

/// Independent stream number `trial` of the generator seeded by `master_seed`.
pub fn trial_rng(master_seed: u64, trial: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

/// A stream for work that is not split per trial (e.g. one-off sampling).
pub fn seeded_rng(master_seed: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(master_seed)
}

/// Derives a sub-seed from a master seed and a list of tags (SplitMix64
/// finaliser applied per tag), so independent runs inside one experiment
/// get unrelated streams.
pub fn derive_seed(master_seed: u64, tags: &[u64]) -> u64 {
    let mut x = master_seed;
    for &t in tags {
        x = mix(x ^ mix(t.wrapping_add(0x9E37_79B9_7F4A_7C15)));
    }
    x
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
