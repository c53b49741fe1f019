//! (M,N)-complementability of finite-dimensional operators.
//!
//! `T : H → K` is split against `H = M ⊕ M⊥` and `K = N ⊕ N⊥` into four
//! compressions
//!
//! ```text
//!     T = | A  B |     A = P_N T P_M,    B = P_N T P_M⊥,
//!         | C  D |     C = P_N⊥ T P_M,   D = P_N⊥ T P_M⊥,
//! ```
//!
//! all kept in ambient coordinates. `T` is complementable when
//! `R(C) ⊆ R(D)` and `R(B*) ⊆ R(D*)`; its shorted operator is then
//! `A − B D⁺ C`.

mod generate;
mod verify;

pub use generate::{
    generate_complementable, generate_complementable_with, random_dims, random_instance, rational_rotation,
};
pub use verify::{
    verify_affine_intersection, verify_affine_intersection_with, verify_b_factors_through_d,
    verify_domain_range_decompositions, verify_null_projections, verify_projection_pair, verify_projection_pair_with,
    verify_shorted_identities, verify_shorted_identities_with, ClauseResult, DecompositionCheck,
    ProjectionPairCertificate, PropertyCheck,
};

use serde::Serialize;

use crate::error::{ComplementError, LinalgError};
use crate::matrix::{range_inclusion, solve_general, Matrix};
use crate::scalar::Scalar;
use crate::subspace::Subspace;

/// An operator together with the subspaces `M ⊆ H` and `N ⊆ K`.
#[derive(Clone, Debug)]
pub struct Instance<F: Scalar> {
    pub operator: Matrix<F>,
    pub m: Subspace<F>,
    pub n: Subspace<F>,
}

#[derive(Clone, Debug)]
pub struct BlockDecomposition<F: Scalar> {
    pub a_block: Matrix<F>,
    pub b_block: Matrix<F>,
    pub c_block: Matrix<F>,
    pub d_block: Matrix<F>,
    pub m1: Subspace<F>,
    pub m2: Subspace<F>,
    pub n1: Subspace<F>,
    pub n2: Subspace<F>,
    pub p_m: Matrix<F>,
    pub p_m_perp: Matrix<F>,
    pub p_n: Matrix<F>,
    pub p_n_perp: Matrix<F>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FailingInclusion {
    #[serde(rename = "none")]
    None,
    #[serde(rename = "C_in_D")]
    CInD,
    #[serde(rename = "Bstar_in_Dstar")]
    BStarInDStar,
}

impl FailingInclusion {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::None => "none",
            Self::CInD => "C_in_D",
            Self::BStarInDStar => "Bstar_in_Dstar",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ComplementabilityReport<F: Scalar> {
    pub complementable: bool,
    /// Reduced solution of `C = D X`.
    pub x_factor: Option<Matrix<F>>,
    /// Reduced solution of `B* = D* Y`.
    pub y_factor: Option<Matrix<F>>,
    pub failing_inclusion: FailingInclusion,
    pub schur: Option<Matrix<F>>,
    pub blocks: BlockDecomposition<F>,
}

/// Which formula produces the shorted operator. Everything except
/// [`SchurFormula::Standard`] is a deliberately wrong variant used to check
/// that the verifiers catch defects.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SchurFormula {
    #[default]
    Standard,
    /// `A + B D⁺ C`.
    SignFlipped,
}

fn check_shapes<F: Scalar>(t: &Matrix<F>, m: &Subspace<F>, n: &Subspace<F>) -> Result<(), LinalgError> {
    if t.cols() != m.ambient_dim() || t.rows() != n.ambient_dim() {
        return Err(LinalgError::ShapeMismatch {
            op: "block_decompose",
            left: t.shape(),
            right: (n.ambient_dim(), m.ambient_dim()),
        });
    }
    Ok(())
}

pub fn block_decompose<F: Scalar>(
    t: &Matrix<F>,
    m: &Subspace<F>,
    n: &Subspace<F>,
) -> Result<BlockDecomposition<F>, LinalgError> {
    check_shapes(t, m, n)?;
    let m2 = m.complement();
    let n2 = n.complement();
    let p_m = m.projector();
    let p_m_perp = m2.projector();
    let p_n = n.projector();
    let p_n_perp = n2.projector();
    let t_m = t * &p_m;
    let t_m_perp = t * &p_m_perp;
    Ok(BlockDecomposition {
        a_block: &p_n * &t_m,
        b_block: &p_n * &t_m_perp,
        c_block: &p_n_perp * &t_m,
        d_block: &p_n_perp * &t_m_perp,
        m1: m.clone(),
        m2,
        n1: n.clone(),
        n2,
        p_m,
        p_m_perp,
        p_n,
        p_n_perp,
    })
}

/// Which of the two range inclusions fails, checked in order.
pub fn failing_inclusion<F: Scalar>(blocks: &BlockDecomposition<F>) -> FailingInclusion {
    let c_in_d = range_inclusion(&blocks.c_block, &blocks.d_block).expect("blocks share the codomain");
    if !c_in_d {
        return FailingInclusion::CInD;
    }
    let b_star = blocks.b_block.adjoint();
    let d_star = blocks.d_block.adjoint();
    if !range_inclusion(&b_star, &d_star).expect("blocks share the domain") {
        return FailingInclusion::BStarInDStar;
    }
    FailingInclusion::None
}

/// Verdict only; skips the factors and the shorted operator. Used where only
/// the yes/no answer matters (large truncations).
pub fn complementability_verdict<F: Scalar>(
    t: &Matrix<F>,
    m: &Subspace<F>,
    n: &Subspace<F>,
) -> Result<FailingInclusion, LinalgError> {
    Ok(failing_inclusion(&block_decompose(t, m, n)?))
}

pub fn is_complementable<F: Scalar>(
    t: &Matrix<F>,
    m: &Subspace<F>,
    n: &Subspace<F>,
) -> Result<ComplementabilityReport<F>, LinalgError> {
    let blocks = block_decompose(t, m, n)?;
    let failing = failing_inclusion(&blocks);
    if failing != FailingInclusion::None {
        return Ok(ComplementabilityReport {
            complementable: false,
            x_factor: None,
            y_factor: None,
            failing_inclusion: failing,
            schur: None,
            blocks,
        });
    }
    let d_pinv = blocks.d_block.pinv();
    let x = &d_pinv * &blocks.c_block;
    let y = &d_pinv.adjoint() * &blocks.b_block.adjoint();
    let schur = &blocks.a_block - &(&blocks.b_block * &x);
    Ok(ComplementabilityReport {
        complementable: true,
        x_factor: Some(x),
        y_factor: Some(y),
        failing_inclusion: FailingInclusion::None,
        schur: Some(schur),
        blocks,
    })
}

pub(crate) fn shorted_with<F: Scalar>(blocks: &BlockDecomposition<F>, formula: SchurFormula) -> Matrix<F> {
    let correction = &(&blocks.b_block * &blocks.d_block.pinv()) * &blocks.c_block;
    match formula {
        SchurFormula::Standard => &blocks.a_block - &correction,
        SchurFormula::SignFlipped => &blocks.a_block + &correction,
    }
}

/// The shorted operator `A − B D⁺ C` in ambient form (zero outside the
/// `(M, N)` corner).
pub fn schur_complement<F: Scalar>(
    t: &Matrix<F>,
    m: &Subspace<F>,
    n: &Subspace<F>,
) -> Result<Matrix<F>, ComplementError> {
    schur_complement_with(t, m, n, SchurFormula::Standard)
}

pub fn schur_complement_with<F: Scalar>(
    t: &Matrix<F>,
    m: &Subspace<F>,
    n: &Subspace<F>,
    formula: SchurFormula,
) -> Result<Matrix<F>, ComplementError> {
    let blocks = block_decompose(t, m, n)?;
    let failing = failing_inclusion(&blocks);
    if failing != FailingInclusion::None {
        return Err(ComplementError::NotComplementable(failing.as_str()));
    }
    Ok(shorted_with(&blocks, formula))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum IntersectionVerdict {
    /// Every basis vector of `M` has exactly one intersection point.
    Unique,
    /// No `w ∈ M⊥` brings `T(x + w)` into `N` for this basis vector.
    Empty { basis_index: usize },
    /// `T(x + w)` ranges over more than one point of `N`.
    NotUnique,
}

/// One basis vector `x ∈ M` and the unique `z ∈ N` with
/// `(Tx + T(M⊥)) ∩ N = {z}`.
#[derive(Clone, Debug)]
pub struct IntersectionPoint<F: Scalar> {
    pub x: Vec<F>,
    pub z: Vec<F>,
}

#[derive(Clone, Debug)]
pub struct IntersectionOutcome<F: Scalar> {
    pub verdict: IntersectionVerdict,
    pub points: Vec<IntersectionPoint<F>>,
}

/// Intersects the affine set `Tx + T(M⊥)` with `N` for each basis vector
/// `x` of `M`, solving `P_N⊥ T (x + w) = 0` over `w ∈ M⊥`.
///
/// Uniqueness does not depend on `x`: it fails exactly when some `w ∈ M⊥`
/// with `P_N⊥ T w = 0` has `T w ≠ 0`, so it is decided once, which also
/// covers `M = {0}`.
pub fn affine_intersection_oracle<F: Scalar>(
    t: &Matrix<F>,
    m: &Subspace<F>,
    n: &Subspace<F>,
) -> Result<IntersectionOutcome<F>, LinalgError> {
    check_shapes(t, m, n)?;
    let p_n_perp = n.complement().projector();
    let v2 = m.complement().basis();
    let t_v2 = t * &v2;
    let g = &p_n_perp * &t_v2;
    for null in g.nullspace() {
        if !(&t_v2 * &Matrix::column_vector(null)).is_zero() {
            return Ok(IntersectionOutcome {
                verdict: IntersectionVerdict::NotUnique,
                points: Vec::new(),
            });
        }
    }
    let mut points = Vec::new();
    for (idx, x) in m.basis_vectors().into_iter().enumerate() {
        let x_col = Matrix::column_vector(x.clone());
        let rhs = -&(&p_n_perp * &(t * &x_col));
        let sol = match solve_general(&g, &rhs) {
            Ok(s) => s,
            Err(LinalgError::NoSolution) => {
                return Ok(IntersectionOutcome {
                    verdict: IntersectionVerdict::Empty { basis_index: idx },
                    points,
                })
            }
            Err(e) => return Err(e),
        };
        let w = &v2 * &sol.particular;
        let z = t * &(&x_col + &w);
        points.push(IntersectionPoint { x, z: z.column(0) });
    }
    Ok(IntersectionOutcome {
        verdict: IntersectionVerdict::Unique,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ExactMatrix;
    use crate::scalar::{int, ratio, Rational};

    fn e1() -> Subspace<Rational> {
        Subspace::new(2, vec![vec![int(1), int(0)]]).unwrap()
    }

    fn q(rows: &[&[(i64, i64)]]) -> ExactMatrix {
        ExactMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&(a, b)| ratio(a, b)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn full_subspaces_give_a_equal_t() {
        let t = ExactMatrix::from_ints(&[&[1, 2, 0], &[3, 4, 5]]);
        let b = block_decompose(&t, &Subspace::full(3), &Subspace::full(2)).unwrap();
        assert_eq!(b.a_block, t);
        assert!(b.b_block.is_zero() && b.c_block.is_zero() && b.d_block.is_zero());
    }

    #[test]
    fn two_by_two_blocks() {
        let t = ExactMatrix::from_ints(&[&[1, 2], &[3, 4]]);
        let b = block_decompose(&t, &e1(), &e1()).unwrap();
        assert_eq!(b.a_block, ExactMatrix::from_ints(&[&[1, 0], &[0, 0]]));
        assert_eq!(b.b_block, ExactMatrix::from_ints(&[&[0, 2], &[0, 0]]));
        assert_eq!(b.c_block, ExactMatrix::from_ints(&[&[0, 0], &[3, 0]]));
        assert_eq!(b.d_block, ExactMatrix::from_ints(&[&[0, 0], &[0, 4]]));
        let sum = &(&b.a_block + &b.b_block) + &(&b.c_block + &b.d_block);
        assert_eq!(sum, t);
    }

    #[test]
    fn identity_blocks_are_projectors() {
        let m = Subspace::new(2, vec![vec![int(1), int(1)]]).unwrap();
        let b = block_decompose(&ExactMatrix::identity(2), &m, &m).unwrap();
        assert_eq!(b.a_block, m.projector());
        assert_eq!(b.d_block, m.complement().projector());
        assert!(b.b_block.is_zero() && b.c_block.is_zero());
    }

    #[test]
    fn complementable_examples() {
        let t = ExactMatrix::from_ints(&[&[1, 2], &[3, 4]]);
        let r = is_complementable(&t, &e1(), &e1()).unwrap();
        assert!(r.complementable);
        assert_eq!(r.failing_inclusion, FailingInclusion::None);
        assert_eq!(r.x_factor.unwrap(), q(&[&[(0, 1), (0, 1)], &[(3, 4), (0, 1)]]));

        let t = ExactMatrix::from_ints(&[&[1, 1], &[0, 0]]);
        let r = is_complementable(&t, &e1(), &e1()).unwrap();
        assert!(!r.complementable);
        assert_eq!(r.failing_inclusion, FailingInclusion::BStarInDStar);

        let m = Subspace::new(3, vec![vec![int(1), int(2), int(-1)]]).unwrap();
        assert!(
            is_complementable(&ExactMatrix::identity(3), &m, &m)
                .unwrap()
                .complementable
        );
    }

    #[test]
    fn shape_mismatch() {
        let t = ExactMatrix::identity(3);
        assert!(matches!(
            is_complementable(&t, &e1(), &e1()),
            Err(LinalgError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn schur_examples() {
        let t = ExactMatrix::from_ints(&[&[1, 2], &[3, 4]]);
        let s = schur_complement(&t, &e1(), &e1()).unwrap();
        assert_eq!(s, q(&[&[(-1, 2), (0, 1)], &[(0, 1), (0, 1)]]));

        // b = c = 0 gives a_block back
        let t = ExactMatrix::from_ints(&[&[5, 0], &[0, 7]]);
        assert_eq!(
            schur_complement(&t, &e1(), &e1()).unwrap(),
            ExactMatrix::from_ints(&[&[5, 0], &[0, 0]])
        );

        let m = Subspace::new(2, vec![vec![int(1), int(1)]]).unwrap();
        assert_eq!(
            schur_complement(&ExactMatrix::identity(2), &m, &m).unwrap(),
            m.projector()
        );

        let t = ExactMatrix::from_ints(&[&[1, 1], &[0, 0]]);
        assert_eq!(
            schur_complement(&t, &e1(), &e1()).unwrap_err(),
            ComplementError::NotComplementable("Bstar_in_Dstar")
        );
    }

    #[test]
    fn affine_intersection_examples() {
        let t = ExactMatrix::from_ints(&[&[1, 2], &[3, 4]]);
        let out = affine_intersection_oracle(&t, &e1(), &e1()).unwrap();
        assert_eq!(out.verdict, IntersectionVerdict::Unique);
        assert_eq!(out.points[0].z, vec![ratio(-1, 2), int(0)]);

        let m = Subspace::new(3, vec![vec![int(1), int(0), int(2)], vec![int(0), int(1), int(1)]]).unwrap();
        let out = affine_intersection_oracle(&ExactMatrix::identity(3), &m, &m).unwrap();
        assert_eq!(out.verdict, IntersectionVerdict::Unique);
        for p in &out.points {
            assert_eq!(p.x, p.z);
        }

        let t = ExactMatrix::from_ints(&[&[1, 1], &[0, 0]]);
        assert_eq!(
            affine_intersection_oracle(&t, &e1(), &e1()).unwrap().verdict,
            IntersectionVerdict::NotUnique
        );

        // C ≠ 0 but D = 0: no w can cancel the N⊥ component
        let t = ExactMatrix::from_ints(&[&[1, 0], &[1, 0]]);
        assert_eq!(
            affine_intersection_oracle(&t, &e1(), &e1()).unwrap().verdict,
            IntersectionVerdict::Empty { basis_index: 0 }
        );
    }

    #[test]
    fn intersection_detects_non_uniqueness_with_trivial_m() {
        // M = {0}: uniqueness still requires B to vanish on N(D)
        let t = ExactMatrix::from_ints(&[&[1, 1], &[0, 0]]);
        let zero = Subspace::zero(2);
        assert_eq!(
            affine_intersection_oracle(&t, &zero, &e1()).unwrap().verdict,
            IntersectionVerdict::NotUnique
        );
        assert!(!is_complementable(&t, &zero, &e1()).unwrap().complementable);
    }
}
