//! Inputs shared by the benchmarks.

use std::sync::Arc;

use pdcom::algebra::divided_power_algebra;
use pdcom::{Fp, Matrix, PdAlgebra};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn divided(p: u64, heights: &[u32]) -> Arc<PdAlgebra> {
    Arc::new(divided_power_algebra(Fp::new(p).unwrap(), heights).unwrap())
}

/// A seeded random `rows × cols` matrix over F_p.
pub fn random_matrix(p: u64, rows: usize, cols: usize, seed: u64) -> Matrix {
    let f = Fp::new(p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let columns: Vec<Vec<u64>> = (0..cols).map(|_| (0..rows).map(|_| rng.gen_range(0..p)).collect()).collect();
    Matrix::from_columns(f, rows, &columns).unwrap()
}
