//! Seeded randomness. One master seed, one ChaCha stream per trial, so any
//! trial can be replayed from `(seed, trial)` alone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::Matrix;
use crate::scalar::{ratio, Rational, Scalar};

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Integer entries uniform in `[-bound, bound]`.
pub fn random_int_matrix<F: Scalar, R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> Matrix<F> {
    let data = (0..rows * cols)
        .map(|_| F::from_i64(rng.gen_range(-bound..=bound)))
        .collect();
    Matrix::from_vec(rows, cols, data).expect("sized data")
}

/// Like [`random_int_matrix`] but each entry is zero with probability `zero_prob`.
pub fn random_sparse_matrix<F: Scalar, R: Rng>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    bound: i64,
    zero_prob: f64,
) -> Matrix<F> {
    let data = (0..rows * cols)
        .map(|_| {
            if rng.gen_bool(zero_prob) {
                F::zero()
            } else {
                F::from_i64(rng.gen_range(-bound..=bound))
            }
        })
        .collect();
    Matrix::from_vec(rows, cols, data).expect("sized data")
}

/// A small rational `p/q` with `|p| ≤ bound`, `1 ≤ q ≤ bound`.
pub fn random_rational<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    let bound = bound.max(1);
    ratio(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound))
}
