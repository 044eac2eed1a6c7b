//! Reproducible random-number plumbing.
//!
//! Every stochastic operation in the crate derives its randomness from an
//! explicit 64-bit seed through the helpers here, so results are bit-stable
//! across runs, platforms, and thread counts. Two contracts matter:
//!
//! * **Disjoint substreams.** A single seed feeds several independent
//!   generators (e.g. the latent long-memory innovations and the
//!   multiplicative volatility noise) via distinct ChaCha streams. Drawing
//!   from one stream never perturbs the other, so regenerating only the
//!   latent path reproduces it exactly.
//! * **Splittable replication seeds.** Monte Carlo replication `r` uses
//!   [`replication_seed`]`(base, r)`, a SplitMix64-style bijective mix. The
//!   mapping is pure, so replications can run in any order on any number of
//!   workers and still see identical randomness.
//!
//! The generator is pinned to ChaCha12 explicitly (rather than to the
//! library's default generator alias) so that seed-level reproducibility
//! survives dependency upgrades.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Stream id for the latent (long-memory innovation) draws.
const STREAM_LATENT: u64 = 0;
/// Stream id for the independent multiplicative noise draws.
const STREAM_NOISE: u64 = 1;

/// Generator for the latent innovation stream of `seed`.
pub fn latent_rng(seed: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(STREAM_LATENT);
    rng
}

/// Generator for the noise stream of `seed`, disjoint from the latent stream.
pub fn noise_rng(seed: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(STREAM_NOISE);
    rng
}

/// Derives the seed for Monte Carlo replication `r` from a base seed.
///
/// SplitMix64 output function applied to `base + r·γ` (γ the golden-ratio
/// increment). For a fixed base the map `r ↦ seed` is injective, so distinct
/// replications never share a seed, and the derivation is stateless — any
/// single replication can be reproduced in isolation.
pub fn replication_seed(base_seed: u64, r: u64) -> u64 {
    let mut z = base_seed.wrapping_add(r.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_deterministic() {
        let a: Vec<f64> = latent_rng(42).random_iter().take(8).collect();
        let b: Vec<f64> = latent_rng(42).random_iter().take(8).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn latent_and_noise_streams_differ() {
        let a: Vec<u64> = latent_rng(7).random_iter().take(4).collect();
        let b: Vec<u64> = noise_rng(7).random_iter().take(4).collect();
        assert_ne!(a, b, "substreams of one seed must be disjoint");
    }

    #[test]
    fn drawing_noise_does_not_disturb_latent() {
        let direct: Vec<u64> = latent_rng(99).random_iter().take(16).collect();
        // Interleave unrelated noise draws; the latent stream must not care.
        let mut noise = noise_rng(99);
        let _ = noise.random::<u64>();
        let again: Vec<u64> = latent_rng(99).random_iter().take(16).collect();
        assert_eq!(direct, again);
    }

    #[test]
    fn replication_seeds_are_distinct() {
        let base = 123_456_789;
        let mut seen = std::collections::HashSet::new();
        for r in 0..10_000u64 {
            assert!(seen.insert(replication_seed(base, r)), "collision at r={r}");
        }
    }

    #[test]
    fn replication_seed_is_stateless() {
        assert_eq!(replication_seed(5, 17), replication_seed(5, 17));
        assert_ne!(replication_seed(5, 17), replication_seed(6, 17));
    }
}
