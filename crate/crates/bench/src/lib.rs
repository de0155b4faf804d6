//! Inputs shared by the benchmarks under `benches/`.

use lubkit::axioms::random_lubpo;
use lubkit::Lubpo;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `count` random general-mode lubpos on `n` elements, fixed by `seed`.
pub fn sample_lubpos(n: usize, count: usize, seed: u64) -> Vec<Lubpo> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_lubpo(&mut rng, n)).collect()
}
