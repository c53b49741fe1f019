//! Floating-point helpers for the few quantities that are irrational in
//! general (operator norms). Everything else in the crate is exact.

use num_complex::Complex64;

use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Tolerance used when comparing floating results such as `‖C‖²` and `λ*`.
pub const FLOAT_TOL: f64 = 1e-9;

pub const POWER_TOL: f64 = 1e-12;
pub const POWER_MAX_ITER: usize = 10_000;

fn mat_vec(h: &[Vec<Complex64>], v: &[Complex64]) -> Vec<Complex64> {
    h.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn dot(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn mat_sqr_normalized(h: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = h.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (row, out_row) in h.iter().zip(out.iter_mut()) {
        for (&a, h_k) in row.iter().zip(h) {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (o, &b) in out_row.iter_mut().zip(h_k) {
                *o += a * b;
            }
        }
    }
    let scale = out.iter().flatten().map(|z| z.norm()).fold(0.0_f64, f64::max);
    if scale > 0.0 {
        for z in out.iter_mut().flatten() {
            *z /= scale;
        }
    }
    out
}

/// Largest eigenvalue of a positive semidefinite Hermitian matrix.
///
/// Power iteration with Rayleigh-quotient stopping (`POWER_TOL`,
/// `POWER_MAX_ITER`). The start vector is taken from a repeatedly squared
/// copy of the matrix, which already points into the dominant eigenspace
/// even when the top two eigenvalues nearly coincide.
pub fn psd_top_eigenvalue(h: &[Vec<Complex64>]) -> f64 {
    let n = h.len();
    if n == 0 {
        return 0.0;
    }
    let mut s = h.to_vec();
    for _ in 0..40 {
        s = mat_sqr_normalized(&s);
    }
    let best_col = (0..n)
        .map(|j| (j, s.iter().map(|row| row[j].norm_sqr()).sum::<f64>()))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(j, _)| j)
        .unwrap_or(0);
    let mut v: Vec<Complex64> = s.iter().map(|row| row[best_col]).collect();
    if norm(&v) == 0.0 {
        // squared matrix collapsed to zero: start from the largest diagonal
        v = vec![Complex64::new(0.0, 0.0); n];
        let d = (0..n).max_by(|&a, &b| h[a][a].re.total_cmp(&h[b][b].re)).unwrap_or(0);
        v[d] = Complex64::new(1.0, 0.0);
    }
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);

    let mut lambda = dot(&v, &mat_vec(h, &v)).re;
    for _ in 0..POWER_MAX_ITER {
        let w = mat_vec(h, &v);
        let nw = norm(&w);
        if nw == 0.0 {
            return 0.0;
        }
        v = w.into_iter().map(|x| x / nw).collect();
        let next = dot(&v, &mat_vec(h, &v)).re;
        let done = (next - lambda).abs() <= POWER_TOL * next.abs().max(1.0);
        lambda = next;
        if done {
            break;
        }
    }
    lambda.max(0.0)
}

/// `‖M‖²` via the top eigenvalue of the exact Gram matrix `M*M`.
pub fn operator_norm_sqr<F: Scalar>(m: &Matrix<F>) -> f64 {
    let gram = &m.adjoint() * m;
    psd_top_eigenvalue(&gram.to_c64_rows())
}

/// `‖M‖²` from the other Gram matrix `MM*`; agrees with [`operator_norm_sqr`]
/// in exact arithmetic and serves as its cross-check.
pub fn operator_norm_sqr_left<F: Scalar>(m: &Matrix<F>) -> f64 {
    let gram = m * &m.adjoint();
    psd_top_eigenvalue(&gram.to_c64_rows())
}
