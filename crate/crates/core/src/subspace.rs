//! Subspaces of a finite-dimensional space, held as spanning sets.
//!
//! Spanning sets may be redundant or non-orthogonal; every query is answered
//! by exact rank computations, so no orthonormalization (and no square
//! roots) is ever needed.

use crate::error::LinalgError;
use crate::matrix::{range_inclusion, Matrix};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct Subspace<F: Scalar> {
    ambient_dim: usize,
    /// `ambient_dim × k`, one spanning vector per column.
    span: Matrix<F>,
}

fn ambient_mismatch(op: &'static str, a: usize, b: usize) -> LinalgError {
    LinalgError::ShapeMismatch {
        op,
        left: (a, 1),
        right: (b, 1),
    }
}

impl<F: Scalar> Subspace<F> {
    pub fn new(ambient_dim: usize, vectors: Vec<Vec<F>>) -> Result<Self, LinalgError> {
        Ok(Self {
            ambient_dim,
            span: Matrix::from_columns(ambient_dim, &vectors)?,
        })
    }

    /// Column space of `m`.
    pub fn column_space(m: &Matrix<F>) -> Self {
        Self {
            ambient_dim: m.rows(),
            span: m.clone(),
        }
    }

    /// Null space of `m`, a subspace of the domain.
    pub fn kernel(m: &Matrix<F>) -> Self {
        let null = m.nullspace();
        Self::new(m.cols(), null).expect("null vectors have domain length")
    }

    pub fn zero(n: usize) -> Self {
        Self {
            ambient_dim: n,
            span: Matrix::zeros(n, 0),
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            ambient_dim: n,
            span: Matrix::identity(n),
        }
    }

    /// Span of the standard basis vectors `e_i`, `i ∈ idx` (0-based).
    pub fn coordinate(n: usize, idx: &[usize]) -> Self {
        let mut span = Matrix::zeros(n, idx.len());
        for (j, &i) in idx.iter().enumerate() {
            span.set(i, j, F::one());
        }
        Self { ambient_dim: n, span }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn spanning_set(&self) -> &Matrix<F> {
        &self.span
    }

    pub fn dim(&self) -> usize {
        self.span.rank()
    }

    /// A maximal independent subset of the spanning vectors, as columns.
    pub fn basis(&self) -> Matrix<F> {
        self.span.select_columns(&self.span.independent_columns())
    }

    pub fn basis_vectors(&self) -> Vec<Vec<F>> {
        self.basis().columns()
    }

    /// Orthogonal projector `V(V*V)⁻¹V*`.
    pub fn projector(&self) -> Matrix<F> {
        let v = self.basis();
        if v.cols() == 0 {
            return Matrix::zeros(self.ambient_dim, self.ambient_dim);
        }
        let v_star = v.adjoint();
        let gram_inv = (&v_star * &v)
            .inverse()
            .expect("Gram matrix of independent vectors is invertible");
        &(&v * &gram_inv) * &v_star
    }

    /// Orthogonal complement, computed as the null space of `V*`.
    pub fn complement(&self) -> Self {
        if self.span.cols() == 0 {
            return Self::full(self.ambient_dim);
        }
        Self::kernel(&self.span.adjoint())
    }

    fn check_ambient(&self, other: &Self, op: &'static str) -> Result<(), LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(ambient_mismatch(op, self.ambient_dim, other.ambient_dim));
        }
        Ok(())
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Self) -> Result<bool, LinalgError> {
        self.check_ambient(other, "contains")?;
        range_inclusion(&other.span, &self.span)
    }

    pub fn contains_vector(&self, v: &[F]) -> Result<bool, LinalgError> {
        if v.len() != self.ambient_dim {
            return Err(ambient_mismatch("contains_vector", self.ambient_dim, v.len()));
        }
        range_inclusion(&Matrix::column_vector(v.to_vec()), &self.span)
    }

    pub fn equal(&self, other: &Self) -> Result<bool, LinalgError> {
        Ok(self.contains(other)? && other.contains(self)?)
    }

    pub fn sum(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_ambient(other, "sum")?;
        Ok(Self {
            ambient_dim: self.ambient_dim,
            span: self.span.hstack(&other.span)?,
        })
    }

    /// `x ∈ S₁ ∩ S₂` iff `x` is orthogonal to both complements.
    pub fn intersect(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_ambient(other, "intersect")?;
        let c1 = self.complement().span.adjoint();
        let c2 = other.complement().span.adjoint();
        let constraints = c1.vstack(&c2)?;
        if constraints.rows() == 0 {
            return Ok(Self::full(self.ambient_dim));
        }
        Ok(Self::kernel(&constraints))
    }

    /// `T(S)` for `T` acting on this subspace's ambient space.
    pub fn image(&self, t: &Matrix<F>) -> Result<Self, LinalgError> {
        if t.cols() != self.ambient_dim {
            return Err(ambient_mismatch("image", t.cols(), self.ambient_dim));
        }
        Ok(Self::column_space(&t.try_mul(&self.span)?))
    }

    /// `T⁻¹(S) = {x : Tx ∈ S}`, where `S` is this subspace of `T`'s codomain.
    pub fn preimage(&self, t: &Matrix<F>) -> Result<Self, LinalgError> {
        if t.rows() != self.ambient_dim {
            return Err(ambient_mismatch("preimage", t.rows(), self.ambient_dim));
        }
        let constraints = self.complement().span.adjoint();
        if constraints.rows() == 0 {
            return Ok(Self::full(t.cols()));
        }
        Ok(Self::kernel(&constraints.try_mul(t)?))
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }
}
