//! Shared inputs for the benchmarks.

use qgame_core::linalg::ComplexMatrix;
use qgame_core::sampling::ginibre;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seeded random Hermitian matrix of size `dim`.
pub fn hermitian(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ginibre(dim, &mut rng).hermitian_part()
}
