//! Dense exact matrices and the elimination kernels everything else is built on.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::LinalgError;
use crate::scalar::{Rational, Scalar};

/// Row-major matrix over an exact field.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<F: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// Real rational matrix, the default carrier for operators.
pub type ExactMatrix = Matrix<Rational>;

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon<F: Scalar> {
    pub reduced: Matrix<F>,
    pub pivots: Vec<usize>,
}

/// Every solution of `B·X = A` is `particular + Σ cᵢ·nullspace_basis[i]`.
#[derive(Clone, Debug)]
pub struct AffineSolution<F: Scalar> {
    pub particular: Matrix<F>,
    pub nullspace_basis: Vec<Matrix<F>>,
}

impl<F: Scalar> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = F::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<F>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::ShapeMismatch {
                op: "from_vec",
                left: (rows, cols),
                right: (data.len(), 1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Rows must all have the same length. An empty row list gives a 0×0 matrix.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self, LinalgError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n_cols {
                return Err(LinalgError::Ragged {
                    row: i,
                    found: row.len(),
                    expected: n_cols,
                });
            }
            data.extend(row);
        }
        Ok(Self {
            rows: n_rows,
            cols: n_cols,
            data,
        })
    }

    /// Builds an `n × k` matrix from `k` column vectors of length `n`.
    pub fn from_columns(n: usize, columns: &[Vec<F>]) -> Result<Self, LinalgError> {
        let k = columns.len();
        let mut m = Self::zeros(n, k);
        for (j, col) in columns.iter().enumerate() {
            if col.len() != n {
                return Err(LinalgError::Ragged {
                    row: j,
                    found: col.len(),
                    expected: n,
                });
            }
            for (i, v) in col.iter().enumerate() {
                m.data[i * k + j] = v.clone();
            }
        }
        Ok(m)
    }

    /// Convenience for tests and fixtures.
    ///
    /// # Panics
    /// On ragged input.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| F::from_i64(v)).collect())
                .collect(),
        )
        .expect("ragged integer matrix")
    }

    pub fn column_vector(v: Vec<F>) -> Self {
        let n = v.len();
        Self {
            rows: n,
            cols: 1,
            data: v,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).conj();
            }
        }
        t
    }

    pub fn scale(&self, s: &F) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.mul_ref(s)).collect(),
        }
    }

    fn check_same_shape(&self, other: &Self, op: &'static str) -> Result<(), LinalgError> {
        if self.shape() != other.shape() {
            return Err(LinalgError::ShapeMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_shape(other, "add")?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add_ref(b)).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_shape(other, "sub")?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub_ref(b)).collect(),
        })
    }

    /// Product that skips zero entries of `self`; projector sandwiches and
    /// coordinate subspaces are mostly zeros.
    pub fn try_mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::ShapeMismatch {
                op: "mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let brow = other.row(k);
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    if !b.is_zero() {
                        *o = o.add_ref(&a.mul_ref(b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.rows != other.rows {
            return Err(LinalgError::ShapeMismatch {
                op: "hstack",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Ok(Self {
            rows: self.rows,
            cols,
            data,
        })
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.cols {
            return Err(LinalgError::ShapeMismatch {
                op: "vstack",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (jj, &j) in idx.iter().enumerate() {
                m.data[i * idx.len() + jj] = self.get(i, j).clone();
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Self {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    /// Sum of `|aᵢⱼ|²`, exact.
    pub fn frobenius_sqr(&self) -> Rational {
        self.data
            .iter()
            .fold(Rational::from_integer(0.into()), |acc, v| acc + v.norm_sqr())
    }

    /// Gauss-Jordan elimination to reduced row echelon form.
    pub fn rref(&self) -> Echelon<F> {
        let mut rows: Vec<Vec<F>> = self.to_rows();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let inv = F::one().div_ref(&rows[r][c]);
            if !inv.is_one() {
                for v in rows[r][c..].iter_mut() {
                    if !v.is_zero() {
                        *v = v.mul_ref(&inv);
                    }
                }
            }
            let (before, rest) = rows.split_at_mut(r);
            let (pivot_row, after) = rest.split_first_mut().expect("pivot row exists");
            for other in before.iter_mut().chain(after.iter_mut()) {
                let factor = other[c].clone();
                if factor.is_zero() {
                    continue;
                }
                for (o, p) in other[c..].iter_mut().zip(&pivot_row[c..]) {
                    if !p.is_zero() {
                        *o = o.sub_ref(&factor.mul_ref(p));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon {
            reduced: Self::from_rows(rows).unwrap_or_else(|_| Self::zeros(self.rows, self.cols)),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of `{x : self·x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let Echelon { reduced, pivots } = self.rref();
        nullspace_from_echelon(&reduced, &pivots, self.cols)
    }

    /// Column indices forming a basis of the column space.
    pub fn independent_columns(&self) -> Vec<usize> {
        self.rref().pivots
    }

    pub fn inverse(&self) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::ShapeMismatch {
                op: "inverse",
                left: self.shape(),
                right: self.shape(),
            });
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(n))?;
        let Echelon { reduced, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(LinalgError::Singular);
        }
        let idx: Vec<usize> = (n..2 * n).collect();
        Ok(reduced.select_columns(&idx))
    }

    /// Moore–Penrose inverse through the full-rank factorization `A = F·G`
    /// (`F` the pivot columns of `A`, `G` the nonzero rows of its RREF):
    /// `A⁺ = G*(G G*)⁻¹(F* F)⁻¹F*`.
    pub fn pinv(&self) -> Self {
        let Echelon { reduced, pivots } = self.rref();
        let r = pivots.len();
        if r == 0 {
            return Self::zeros(self.cols, self.rows);
        }
        let f = self.select_columns(&pivots);
        let g = reduced.select_rows(&(0..r).collect::<Vec<_>>());
        let f_star = f.adjoint();
        let g_star = g.adjoint();
        // Both Gram matrices are r×r and invertible because F and G have full rank r.
        let ff_inv = (&f_star * &f).inverse().expect("F*F invertible");
        let gg_inv = (&g * &g_star).inverse().expect("GG* invertible");
        &(&(&g_star * &gg_inv) * &ff_inv) * &f_star
    }

    pub fn to_c64_rows(&self) -> Vec<Vec<num_complex::Complex64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(F::to_c64).collect())
            .collect()
    }
}

pub(crate) fn nullspace_from_echelon<F: Scalar>(reduced: &Matrix<F>, pivots: &[usize], cols: usize) -> Vec<Vec<F>> {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![F::zero(); cols];
            v[free] = F::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = reduced.get(i, free).neg_ref();
            }
            v
        })
        .collect()
}

/// `true` iff the column space of `a` lies inside that of `b`, i.e.
/// `rank([b | a]) = rank(b)`.
pub fn range_inclusion<F: Scalar>(a: &Matrix<F>, b: &Matrix<F>) -> Result<bool, LinalgError> {
    let aug = b.hstack(a)?;
    Ok(aug.rank() == b.rank())
}

/// All solutions of `b·X = a`. The particular solution returned is the one
/// whose columns are orthogonal to `N(b)`.
pub fn solve_general<F: Scalar>(b: &Matrix<F>, a: &Matrix<F>) -> Result<AffineSolution<F>, LinalgError> {
    let n = b.cols();
    let p = a.cols();
    let aug = b.hstack(a)?;
    let Echelon { reduced, pivots } = aug.rref();
    if pivots.iter().any(|&c| c >= n) {
        return Err(LinalgError::NoSolution);
    }
    let mut particular = Matrix::zeros(n, p);
    for (i, &c) in pivots.iter().enumerate() {
        for j in 0..p {
            particular.set(c, j, reduced.get(i, n + j).clone());
        }
    }
    let null = nullspace_from_echelon(&reduced, &pivots, n);
    if !null.is_empty() {
        // Remove the null-space component so the particular solution is the
        // minimum-norm one, i.e. orthogonal to N(b).
        let z = Matrix::from_columns(n, &null)?;
        let z_star = z.adjoint();
        let gram_inv = (&z_star * &z).inverse()?;
        let correction = &(&z * &gram_inv) * &(&z_star * &particular);
        particular = &particular - &correction;
    }
    let mut nullspace_basis = Vec::with_capacity(null.len() * p);
    for v in &null {
        for j in 0..p {
            let mut z = Matrix::zeros(n, p);
            for (i, x) in v.iter().enumerate() {
                z.set(i, j, x.clone());
            }
            nullspace_basis.push(z);
        }
    }
    Ok(AffineSolution {
        particular,
        nullspace_basis,
    })
}

impl<F: Scalar> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

// Operator forms panic on shape mismatch; use the `try_*` methods when the
// shapes come from user input.

impl<F: Scalar> Mul for &Matrix<F> {
    type Output = Matrix<F>;
    fn mul(self, rhs: Self) -> Matrix<F> {
        self.try_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl<F: Scalar> Add for &Matrix<F> {
    type Output = Matrix<F>;
    fn add(self, rhs: Self) -> Matrix<F> {
        self.try_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl<F: Scalar> Sub for &Matrix<F> {
    type Output = Matrix<F>;
    fn sub(self, rhs: Self) -> Matrix<F> {
        self.try_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl<F: Scalar> Neg for &Matrix<F> {
    type Output = Matrix<F>;
    fn neg(self) -> Matrix<F> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(F::neg_ref).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio, ComplexRational};
    use num_complex::Complex;

    type M = ExactMatrix;

    fn q(rows: &[&[(i64, i64)]]) -> M {
        M::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&(n, d)| ratio(n, d)).collect())
                .collect(),
        )
        .unwrap()
    }

    /// Checks the four Penrose identities directly.
    fn is_penrose_inverse<F: Scalar>(a: &Matrix<F>, x: &Matrix<F>) -> bool {
        let ax = a * x;
        let xa = x * a;
        &ax * a == *a && &xa * x == *x && ax.adjoint() == ax && xa.adjoint() == xa
    }

    #[test]
    fn rank_examples() {
        assert_eq!(M::zeros(3, 3).rank(), 0);
        assert_eq!(M::identity(4).rank(), 4);
        assert_eq!(M::from_ints(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(M::zeros(0, 3).rank(), 0);
    }

    #[test]
    fn range_inclusion_examples() {
        let b = M::from_ints(&[&[1], &[1]]);
        assert!(range_inclusion(&M::zeros(2, 3), &b).unwrap());
        assert!(range_inclusion(&M::from_ints(&[&[1, 1], &[1, 1]]), &b).unwrap());
        assert!(!range_inclusion(&M::from_ints(&[&[0], &[1]]), &M::from_ints(&[&[1], &[0]])).unwrap());
        assert!(matches!(
            range_inclusion(&M::zeros(3, 1), &b),
            Err(LinalgError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn pinv_examples() {
        assert_eq!(M::identity(3).pinv(), M::identity(3));
        let row = M::from_ints(&[&[1, 1]]);
        let expected = q(&[&[(1, 2)], &[(1, 2)]]);
        assert!(is_penrose_inverse(&row, &expected));
        assert_eq!(row.pinv(), expected);
        let diag = M::from_ints(&[&[1, 0], &[0, 0]]);
        assert!(is_penrose_inverse(&diag, &diag));
        assert_eq!(diag.pinv(), diag);
        assert_eq!(M::zeros(2, 3).pinv(), M::zeros(3, 2));
    }

    #[test]
    fn pinv_complex() {
        let i = Complex::new(int(0), int(1));
        let one = Complex::new(int(1), int(0));
        let a = Matrix::<ComplexRational>::from_rows(vec![vec![one.clone(), i.clone()], vec![i.clone(), -one.clone()]])
            .unwrap();
        let x = a.pinv();
        assert!(is_penrose_inverse(&a, &x));
        assert_eq!(a.rank(), 1);
    }

    #[test]
    fn solve_general_examples() {
        let a = M::from_ints(&[&[3, -1], &[0, 2]]);
        let s = solve_general(&M::identity(2), &a).unwrap();
        assert_eq!(s.particular, a);
        assert!(s.nullspace_basis.is_empty());

        let b = M::from_ints(&[&[1, 1]]);
        let s = solve_general(&b, &M::from_ints(&[&[2]])).unwrap();
        assert_eq!(s.particular, M::from_ints(&[&[1], &[1]]));
        assert_eq!(s.nullspace_basis.len(), 1);
        let z = &s.nullspace_basis[0];
        assert_eq!(&b * z, M::zeros(1, 1));
        // basis vector spans the same line as (1, −1)
        assert_eq!(z.rank(), 1);
        assert!(range_inclusion(&M::from_ints(&[&[1], &[-1]]), z).unwrap());

        assert_eq!(
            solve_general(&M::from_ints(&[&[1], &[0]]), &M::from_ints(&[&[0], &[1]])).unwrap_err(),
            LinalgError::NoSolution
        );
    }

    #[test]
    fn inverse_roundtrip_and_singular() {
        let a = M::from_ints(&[&[2, 1], &[7, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, M::identity(2));
        assert_eq!(
            M::from_ints(&[&[1, 2], &[2, 4]]).inverse().unwrap_err(),
            LinalgError::Singular
        );
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = M::from_ints(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let null = a.nullspace();
        assert_eq!(null.len(), 1);
        let v = M::column_vector(null[0].clone());
        assert!((&a * &v).is_zero());
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = M::from_rows(vec![vec![int(1)], vec![int(1), int(2)]]).unwrap_err();
        assert!(matches!(err, LinalgError::Ragged { row: 1, .. }));
    }
}
