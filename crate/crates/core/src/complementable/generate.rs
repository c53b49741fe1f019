//! Seeded instance generators.
//!
//! [`generate_complementable`] builds `T` in block coordinates with `C = DX`
//! and `B = Y* D`, so both range inclusions hold by construction, then hides
//! the coordinate split behind rational orthogonal rotations.

use rand::Rng;

use super::Instance;
use crate::matrix::ExactMatrix;
use crate::rng::{random_int_matrix, random_sparse_matrix, trial_rng};
use crate::scalar::{int, ratio, Rational};
use crate::subspace::Subspace;

/// Product of two Householder reflections `I − 2vvᵀ/vᵀv` with small integer
/// `v`: orthogonal, rational, and generally dense.
pub fn rational_rotation<R: Rng>(rng: &mut R, n: usize) -> ExactMatrix {
    let mut u = ExactMatrix::identity(n);
    if n < 2 {
        return u;
    }
    for _ in 0..2 {
        let v: Vec<i64> = loop {
            let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
            if v.iter().any(|&x| x != 0) {
                break v;
            }
        };
        let vv: i64 = v.iter().map(|x| x * x).sum();
        let coef = ratio(2, vv);
        let mut h = ExactMatrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                let e = h.get(i, j) - &coef * int(v[i] * v[j]);
                h.set(i, j, e);
            }
        }
        u = &u * &h;
    }
    u
}

fn random_invertible<R: Rng>(rng: &mut R, n: usize, bound: i64) -> ExactMatrix {
    for _ in 0..32 {
        let r: ExactMatrix = random_int_matrix(rng, n, n, bound);
        if r.rank() == n {
            return r;
        }
    }
    ExactMatrix::identity(n)
}

/// Random `rows × cols` matrix, rank-deficient about a third of the time.
fn random_block<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> ExactMatrix {
    let full = rows.min(cols);
    if full >= 1 && rng.gen_bool(1.0 / 3.0) {
        let inner = rng.gen_range(0..full);
        let left: ExactMatrix = random_int_matrix(rng, rows, inner, bound);
        let right: ExactMatrix = random_int_matrix(rng, inner, cols, bound);
        return &left * &right;
    }
    random_int_matrix(rng, rows, cols, bound)
}

/// Span of the given columns of `u`, mixed by a random invertible matrix and
/// padded with one redundant vector when there is room.
fn rotated_span<R: Rng>(rng: &mut R, u: &ExactMatrix, cols: std::ops::Range<usize>) -> Subspace<Rational> {
    let n = u.rows();
    let k = cols.len();
    if k == 0 {
        return Subspace::zero(n);
    }
    let idx: Vec<usize> = cols.collect();
    let basis = &u.select_columns(&idx) * &random_invertible(rng, k, 2);
    let mut vectors = basis.columns();
    if k >= 2 && rng.gen_bool(0.5) {
        let extra = vectors[0].iter().zip(&vectors[1]).map(|(a, b)| a - b).collect();
        vectors.push(extra);
    }
    Subspace::new(n, vectors).expect("vectors have ambient length")
}

/// A complementable instance with `dim M = m1`, `dim M⊥ = m2`,
/// `dim N = n1`, `dim N⊥ = n2`; entries of the random blocks lie in
/// `[-entry_bound, entry_bound]`.
pub fn generate_complementable(
    seed: u64,
    m1: usize,
    m2: usize,
    n1: usize,
    n2: usize,
    entry_bound: i64,
) -> Instance<Rational> {
    let mut rng = trial_rng(seed, 0);
    generate_complementable_with(&mut rng, m1, m2, n1, n2, entry_bound.max(1))
}

/// [`generate_complementable`] drawing from a caller-owned generator.
pub fn generate_complementable_with<R: Rng>(
    rng: &mut R,
    m1: usize,
    m2: usize,
    n1: usize,
    n2: usize,
    bound: i64,
) -> Instance<Rational> {
    let a = random_int_matrix::<Rational, _>(rng, n1, m1, bound);
    let d = random_block(rng, n2, m2, bound);
    let x: ExactMatrix = random_int_matrix(rng, m2, m1, bound);
    let y: ExactMatrix = random_int_matrix(rng, n2, n1, bound);
    let c = &d * &x;
    let b = &y.adjoint() * &d;
    let top = a.hstack(&b).expect("row blocks share height");
    let bottom = c.hstack(&d).expect("row blocks share height");
    let t_blk = top.vstack(&bottom).expect("column blocks share width");

    let h = m1 + m2;
    let k = n1 + n2;
    let u_h = rational_rotation(rng, h);
    let u_k = rational_rotation(rng, k);
    let operator = &(&u_k * &t_blk) * &u_h.transpose();
    let m = rotated_span(rng, &u_h, 0..m1);
    let n = rotated_span(rng, &u_k, 0..n1);
    Instance { operator, m, n }
}

/// Block dimensions `(m1, m2, n1, n2)` with `1 ≤ m1 + m2 ≤ max_dim` and
/// likewise for `n`.
pub fn random_dims<R: Rng>(rng: &mut R, max_dim: usize) -> (usize, usize, usize, usize) {
    let max_dim = max_dim.max(1);
    let low = max_dim.min(2);
    let h = rng.gen_range(low..=max_dim);
    let k = rng.gen_range(low..=max_dim);
    let m1 = rng.gen_range(0..=h);
    let n1 = rng.gen_range(0..=k);
    (m1, h - m1, n1, k - n1)
}

fn random_subspace<R: Rng>(rng: &mut R, n: usize) -> Subspace<Rational> {
    // proper nontrivial subspaces whenever there is room for one
    let count = if n >= 2 {
        rng.gen_range(1..n)
    } else {
        rng.gen_range(0..=n)
    };
    let span: ExactMatrix = random_sparse_matrix(rng, n, count, 2, 0.4);
    Subspace::column_space(&span)
}

/// A fully random `(T, M, N)`, most of them not complementable: `T` is
/// sparse and often rank deficient, `M` and `N` are random spans.
pub fn random_instance<R: Rng>(rng: &mut R, max_dim: usize) -> Instance<Rational> {
    let max_dim = max_dim.max(1);
    let low = max_dim.min(2);
    let h = rng.gen_range(low..=max_dim);
    let k = rng.gen_range(low..=max_dim);
    let operator = if rng.gen_bool(0.25) {
        let inner = rng.gen_range(0..=h.min(k));
        let left: ExactMatrix = random_sparse_matrix(rng, k, inner, 3, 0.3);
        let right: ExactMatrix = random_sparse_matrix(rng, inner, h, 3, 0.3);
        &left * &right
    } else {
        random_sparse_matrix(rng, k, h, 3, 0.25)
    };
    let m = random_subspace(rng, h);
    let n = random_subspace(rng, k);
    Instance { operator, m, n }
}
