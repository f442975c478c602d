//! Deterministic seed derivation. Every random stage draws from its own
//! stream, so results depend only on the master seed and the item identity.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds the words into one well-mixed seed.
pub fn mix64(words: &[u64]) -> u64 {
    words.iter().fold(0x6A09_E667_F3BC_C908, |acc, &w| splitmix(acc ^ splitmix(w)))
}

/// Seed of one image.
pub fn image_seed(master: u64, class_index: u64, instance_index: u64) -> u64 {
    mix64(&[master, class_index, instance_index])
}

fn fnv1a(s: &str) -> u64 {
    s.bytes()
        .fold(0xCBF2_9CE4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01B3))
}

/// Child stream keyed by a stage name.
pub fn stream(seed: u64, name: &str) -> Rng {
    Rng::seed_from_u64(mix64(&[seed, fnv1a(name)]))
}
