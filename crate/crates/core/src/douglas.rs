//! Douglas factorization: when `R(A) ⊆ R(B)`, the reduced solution
//! `C = B⁺A` solves `A = BC`, has range orthogonal to `N(B)`, and its squared
//! norm is the smallest `λ` with `AA* ≼ λ BB*`.

use rand::Rng;
use serde::Serialize;

use crate::error::{DouglasError, LinalgError};
use crate::matrix::{range_inclusion, Matrix};
use crate::numeric::{operator_norm_sqr, operator_norm_sqr_left, FLOAT_TOL};
use crate::rng::trial_rng;
use crate::scalar::Scalar;
use crate::subspace::Subspace;

#[derive(Clone, Debug)]
pub struct DouglasCertificate<F: Scalar> {
    pub reduced_solution: Matrix<F>,
    /// Smallest `λ` with `AA* ≼ λ BB*`, computed as `‖C‖²` from `C*C`.
    pub lambda_star: f64,
    /// `‖C‖`, computed independently from `CC*`.
    pub norm_c: f64,
}

/// Exact and floating checks of the factorization identities.
///
/// `kernel_of_a_equals_kernel_of_b` records the kernel clause in its
/// literal `N(A) = N(B)` reading; it is reported, not required. The
/// standard statement `N(C) = N(A)` is `kernel_matches`.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct DouglasChecks {
    pub factorization_exact: bool,
    pub range_orthogonal_to_kernel_b: bool,
    pub kernel_matches: bool,
    pub kernel_of_a_equals_kernel_of_b: bool,
    pub norm_consistent: bool,
}

impl DouglasChecks {
    pub fn all_required_pass(&self) -> bool {
        self.factorization_exact && self.range_orthogonal_to_kernel_b && self.kernel_matches && self.norm_consistent
    }
}

pub fn douglas_factorize<F: Scalar>(a: &Matrix<F>, b: &Matrix<F>) -> Result<DouglasCertificate<F>, DouglasError> {
    if a.rows() != b.rows() {
        return Err(LinalgError::ShapeMismatch {
            op: "douglas_factorize",
            left: a.shape(),
            right: b.shape(),
        }
        .into());
    }
    if !range_inclusion(a, b)? {
        return Err(DouglasError::RangeNotIncluded);
    }
    let reduced_solution = &b.pinv() * a;
    let lambda_star = operator_norm_sqr(&reduced_solution);
    let norm_c = operator_norm_sqr_left(&reduced_solution).sqrt();
    Ok(DouglasCertificate {
        reduced_solution,
        lambda_star,
        norm_c,
    })
}

pub fn check_certificate<F: Scalar>(
    a: &Matrix<F>,
    b: &Matrix<F>,
    cert: &DouglasCertificate<F>,
) -> Result<DouglasChecks, LinalgError> {
    let c = &cert.reduced_solution;
    let factorization_exact = b.try_mul(c)? == *a;
    let null_b = Subspace::kernel(b);
    let range_orthogonal_to_kernel_b = null_b.projector().try_mul(c)?.is_zero();
    let kernel_matches = Subspace::kernel(c).equal(&Subspace::kernel(a))?;
    let kernel_of_a_equals_kernel_of_b = a.cols() == b.cols() && Subspace::kernel(a).equal(&null_b)?;
    let norm_consistent = (cert.norm_c * cert.norm_c - cert.lambda_star).abs() <= FLOAT_TOL;
    Ok(DouglasChecks {
        factorization_exact,
        range_orthogonal_to_kernel_b,
        kernel_matches,
        kernel_of_a_equals_kernel_of_b,
        norm_consistent,
    })
}

/// Seeded search for a solution of `BX = A` with smaller Frobenius norm than
/// the reduced solution. Perturbations are `Z = N·R/s` with `N` a basis of
/// `N(B)`; returns `true` when none of `trials` candidates beats `C`.
pub fn verify_minimality<F: Scalar>(cert: &DouglasCertificate<F>, b: &Matrix<F>, trials: usize, seed: u64) -> bool {
    let c = &cert.reduced_solution;
    let null = b.nullspace();
    if null.is_empty() {
        return true;
    }
    let basis = Matrix::from_columns(b.cols(), &null).expect("null vectors have domain length");
    let base = c.frobenius_sqr();
    let mut rng = trial_rng(seed, 0);
    (0..trials).all(|_| {
        let coeffs: Matrix<F> = crate::rng::random_int_matrix(&mut rng, null.len(), c.cols(), 3);
        let denom = F::from_i64(rng.gen_range(1..=8));
        let z = (&basis * &coeffs).scale(&F::one().div_ref(&denom));
        let candidate = c.try_add(&z).expect("perturbation has solution shape");
        candidate.frobenius_sqr() >= base
    })
}
