//! Constructive checks of the complementability characterizations.
//!
//! Each verifier rebuilds the certificate used in the corresponding proof
//! (block-form projections, the factors `X`, `Y`) in ambient coordinates and
//! checks every identity exactly. In finite dimensions `D(T) = H` and the
//! formal adjoint is `T*`.

use serde::Serialize;

use super::{
    affine_intersection_oracle, block_decompose, failing_inclusion, is_complementable, shorted_with, FailingInclusion,
    IntersectionVerdict, SchurFormula,
};
use crate::error::{ComplementError, LinalgError};
use crate::matrix::{solve_general, Matrix};
use crate::scalar::Scalar;
use crate::subspace::Subspace;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ClauseResult {
    pub clause: &'static str,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub clauses: Vec<ClauseResult>,
}

impl PropertyCheck {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            clauses: Vec::new(),
        }
    }

    fn push(&mut self, clause: &'static str, passed: bool) {
        self.clauses.push(ClauseResult { clause, passed });
    }

    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    pub fn failed_clauses(&self) -> Vec<&'static str> {
        self.clauses.iter().filter(|c| !c.passed).map(|c| c.clause).collect()
    }

    pub fn from_clauses(name: &'static str, clauses: impl IntoIterator<Item = (&'static str, bool)>) -> Self {
        let mut out = Self::new(name);
        for (clause, passed) in clauses {
            out.push(clause, passed);
        }
        out
    }

    /// A single failed clause, for checks that could not run at all.
    pub fn failed(name: &'static str, clause: &'static str) -> Self {
        Self::from_clauses(name, [(clause, false)])
    }

    pub fn renamed(mut self, name: &'static str) -> Self {
        self.name = name;
        self
    }
}

fn require_complementable<F: Scalar>(
    t: &Matrix<F>,
    m: &Subspace<F>,
    n: &Subspace<F>,
) -> Result<super::ComplementabilityReport<F>, ComplementError> {
    let report = is_complementable(t, m, n)?;
    if !report.complementable {
        return Err(ComplementError::NotComplementable(report.failing_inclusion.as_str()));
    }
    Ok(report)
}

pub fn verify_shorted_identities<F: Scalar>(
    t: &Matrix<F>,
    m: &Subspace<F>,
    n: &Subspace<F>,
) -> Result<PropertyCheck, ComplementError> {
    verify_shorted_identities_with(t, m, n, SchurFormula::Standard)
}

/// Shorted-operator identities, with the shorted operator produced by
/// `formula`:
///
/// 1. `T*` is `(N, M)`-complementable;
/// 2. `R(T/(M,N)) = R(T) ∩ N`;
/// 3. `N(T/(M,N)) = M⊥ + N(T)`;
/// 4. it equals `A − B Z` with `Z` the reduced solution of `C = D Z`
///    (found by elimination, not through `D⁺`);
/// 5. it equals `A − Y* C` with `Y` the reduced solution of `B* = D* Y`.
pub fn verify_shorted_identities_with<F: Scalar>(
    t: &Matrix<F>,
    m: &Subspace<F>,
    n: &Subspace<F>,
    formula: SchurFormula,
) -> Result<PropertyCheck, ComplementError> {
    let report = require_complementable(t, m, n)?;
    let blocks = &report.blocks;
    let shorted = shorted_with(blocks, formula);
    let mut check = PropertyCheck::new("shorted operator identities");

    let adjoint_ok = is_complementable(&t.adjoint(), n, m)?.complementable;
    check.push("adjoint is (N,M)-complementable", adjoint_ok);

    let range = Subspace::column_space(&shorted);
    let expected_range = Subspace::column_space(t).intersect(n)?;
    check.push("range of shorted operator = R(T) ∩ N", range.equal(&expected_range)?);

    let kernel = Subspace::kernel(&shorted);
    let expected_kernel = blocks.m2.sum(&Subspace::kernel(t))?;
    check.push(
        "kernel of shorted operator = M⊥ + N(T)",
        kernel.equal(&expected_kernel)?,
    );

    let z = solve_general(&blocks.d_block, &blocks.c_block)?.particular;
    let via_z = &blocks.a_block - &(&blocks.b_block * &z);
    check.push("A − B D⁺ C = A − B Z (reduced solution of C = DZ)", shorted == via_z);

    let y = solve_general(&blocks.d_block.adjoint(), &blocks.b_block.adjoint())?.particular;
    let via_y = &blocks.a_block - &(&y.adjoint() * &blocks.c_block);
    check.push("A − B Z = A − Y* C", shorted == via_y);
    Ok(check)
}

/// The affine-intersection oracle returns a unique point for every basis
/// vector of `M`, and that point is the shorted operator applied to it.
pub fn verify_affine_intersection<F: Scalar>(
    t: &Matrix<F>,
    m: &Subspace<F>,
    n: &Subspace<F>,
) -> Result<PropertyCheck, ComplementError> {
    verify_affine_intersection_with(t, m, n, SchurFormula::Standard)
}

pub fn verify_affine_intersection_with<F: Scalar>(
    t: &Matrix<F>,
    m: &Subspace<F>,
    n: &Subspace<F>,
    formula: SchurFormula,
) -> Result<PropertyCheck, ComplementError> {
    let report = require_complementable(t, m, n)?;
    let shorted = shorted_with(&report.blocks, formula);
    let intersection = affine_intersection_oracle(t, m, n)?;
    let mut check = PropertyCheck::new("affine intersection characterization");
    check.push(
        "intersection point exists and is unique",
        intersection.verdict == IntersectionVerdict::Unique,
    );
    let agree = intersection
        .points
        .iter()
        .all(|p| (&shorted * &Matrix::column_vector(p.x.clone())).column(0) == p.z);
    check.push("intersection points equal the shorted operator on M", agree);
    Ok(check)
}

#[derive(Clone, Debug)]
pub struct ProjectionPairCertificate<F: Scalar> {
    pub p_r: Matrix<F>,
    pub p_l: Matrix<F>,
    pub m_r: Matrix<F>,
    pub m_l: Matrix<F>,
    pub p: Matrix<F>,
    pub q: Matrix<F>,
}

pub fn verify_projection_pair<F: Scalar>(
    t: &Matrix<F>,
    m: &Subspace<F>,
    n: &Subspace<F>,
) -> Result<(ProjectionPairCertificate<F>, PropertyCheck), ComplementError> {
    verify_projection_pair_with(t, m, n, None, None)
}

/// Builds `P_r = [[0,0],[E,I]]`, `P_l = [[0,F],[0,I]]`,
/// `M_r = [[0,0],[X,I]]`, `M_l = [[0,0],[Y,I]]` and checks
/// `P_r M_r = M_r`, `P_l T M_r = P_l T`, `P_l* M_l = M_l`,
/// `P_r* T* M_l = P_r* T*`.
///
/// `e` and `f` are arbitrary ambient matrices; only their `M → M⊥` and
/// `N⊥ → N` corners are used. `None` means zero.
pub fn verify_projection_pair_with<F: Scalar>(
    t: &Matrix<F>,
    m: &Subspace<F>,
    n: &Subspace<F>,
    e: Option<&Matrix<F>>,
    f: Option<&Matrix<F>>,
) -> Result<(ProjectionPairCertificate<F>, PropertyCheck), ComplementError> {
    let report = require_complementable(t, m, n)?;
    let b = &report.blocks;
    let x = report.x_factor.as_ref().expect("complementable report has X");
    let y = report.y_factor.as_ref().expect("complementable report has Y");

    let e_corner = match e {
        Some(e) => &(&b.p_m_perp * e) * &b.p_m,
        None => Matrix::zeros(t.cols(), t.cols()),
    };
    let f_corner = match f {
        Some(f) => &(&b.p_n * f) * &b.p_n_perp,
        None => Matrix::zeros(t.rows(), t.rows()),
    };
    let p_r = &e_corner + &b.p_m_perp;
    let p_l = &f_corner + &b.p_n_perp;
    let m_r = x + &b.p_m_perp;
    let m_l = y + &b.p_n_perp;
    let t_star = t.adjoint();

    let mut check = PropertyCheck::new("projection-pair characterization");
    check.push(
        "P_r is a projection with range M⊥",
        &p_r * &p_r == p_r && Subspace::column_space(&p_r).equal(&b.m2)?,
    );
    check.push(
        "P_l is a projection with kernel N",
        &p_l * &p_l == p_l && Subspace::kernel(&p_l).equal(&b.n1)?,
    );
    check.push("P_r M_r = M_r", &p_r * &m_r == m_r);
    check.push("P_l T M_r = P_l T", &(&p_l * t) * &m_r == &p_l * t);
    let p_l_star = p_l.adjoint();
    check.push("P_l* M_l = M_l", &p_l_star * &m_l == m_l);
    let p_r_star = p_r.adjoint();
    check.push(
        "P_r* T× M_l = P_r* T×",
        &(&p_r_star * &t_star) * &m_l == &p_r_star * &t_star,
    );

    let p = &b.p_m - x;
    let q = &b.p_n - y;
    Ok((
        ProjectionPairCertificate {
            p_r,
            p_l,
            m_r,
            m_l,
            p,
            q,
        },
        check,
    ))
}

/// `P = [[I,0],[−X,0]]`, `Q = [[I,0],[−Y,0]]`: idempotent, `N(P) = M⊥`,
/// `N(Q) = N⊥`, `R(TP) ⊆ N`, `R(T* Q) ⊆ M`, and `TP = (T* Q)*`, which is the
/// shorted operator.
pub fn verify_null_projections<F: Scalar>(
    t: &Matrix<F>,
    m: &Subspace<F>,
    n: &Subspace<F>,
) -> Result<PropertyCheck, ComplementError> {
    let report = require_complementable(t, m, n)?;
    let b = &report.blocks;
    let x = report.x_factor.as_ref().expect("complementable report has X");
    let y = report.y_factor.as_ref().expect("complementable report has Y");
    let p = &b.p_m - x;
    let q = &b.p_n - y;
    let tp = t * &p;
    let t_star_q = &t.adjoint() * &q;

    let mut check = PropertyCheck::new("null-space projections");
    check.push(
        "P is a projection with kernel M⊥",
        &p * &p == p && Subspace::kernel(&p).equal(&b.m2)?,
    );
    check.push(
        "Q is a projection with kernel N⊥",
        &q * &q == q && Subspace::kernel(&q).equal(&b.n2)?,
    );
    check.push("R(TP) ⊆ N", n.contains(&Subspace::column_space(&tp))?);
    check.push("R(T× Q) ⊆ M", m.contains(&Subspace::column_space(&t_star_q))?);
    check.push("TP = (T× Q)*", tp == t_star_q.adjoint());
    check.push("TP equals the shorted operator", Some(&tp) == report.schur.as_ref());
    Ok(check)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DecompositionCheck {
    /// `H = T⁻¹(N) + M⊥`
    pub domain_preimage: bool,
    /// `K = T*⁻¹(M) + N⊥`
    pub adjoint_domain_preimage: bool,
    /// `H = M⊥ + (T*(N⊥))⊥`
    pub domain_annihilator: bool,
    /// `K = N⊥ + (T(M⊥))⊥`
    pub adjoint_domain_annihilator: bool,
    /// `R(T) = T(M⊥) + (N ∩ R(T))`
    pub range_split: bool,
    /// `R(T*) = T*(N⊥) + (M ∩ R(T*))`
    pub adjoint_range_split: bool,
    pub all_hold: bool,
    pub complementable: bool,
}

impl DecompositionCheck {
    /// The six identities hold together exactly when `T` is complementable.
    pub fn consistent(&self) -> bool {
        self.all_hold == self.complementable
    }

    pub fn identities(&self) -> [(&'static str, bool); 6] {
        [
            ("H = T⁻¹(N) + M⊥", self.domain_preimage),
            ("K = (T×)⁻¹(M) + N⊥", self.adjoint_domain_preimage),
            ("H = M⊥ + (T×(N⊥))⊥", self.domain_annihilator),
            ("K = N⊥ + (T(M⊥))⊥", self.adjoint_domain_annihilator),
            ("R(T) = T(M⊥) + (N ∩ R(T))", self.range_split),
            ("R(T×) = T×(N⊥) + (M ∩ R(T×))", self.adjoint_range_split),
        ]
    }
}

pub fn verify_domain_range_decompositions<F: Scalar>(
    t: &Matrix<F>,
    m: &Subspace<F>,
    n: &Subspace<F>,
) -> Result<DecompositionCheck, LinalgError> {
    let blocks = block_decompose(t, m, n)?;
    let complementable = failing_inclusion(&blocks) == FailingInclusion::None;
    let t_star = t.adjoint();
    let m2 = &blocks.m2;
    let n2 = &blocks.n2;

    let domain_preimage = n.preimage(t)?.sum(m2)?.is_full();
    let adjoint_domain_preimage = m.preimage(&t_star)?.sum(n2)?.is_full();
    let domain_annihilator = m2.sum(&n2.image(&t_star)?.complement())?.is_full();
    let adjoint_domain_annihilator = n2.sum(&m2.image(t)?.complement())?.is_full();

    let range_t = Subspace::column_space(t);
    let range_split = m2.image(t)?.sum(&n.intersect(&range_t)?)?.equal(&range_t)?;
    let range_t_star = Subspace::column_space(&t_star);
    let adjoint_range_split = n2
        .image(&t_star)?
        .sum(&m.intersect(&range_t_star)?)?
        .equal(&range_t_star)?;

    let all_hold = domain_preimage
        && adjoint_domain_preimage
        && domain_annihilator
        && adjoint_domain_annihilator
        && range_split
        && adjoint_range_split;
    Ok(DecompositionCheck {
        domain_preimage,
        adjoint_domain_preimage,
        domain_annihilator,
        adjoint_domain_annihilator,
        range_split,
        adjoint_range_split,
        all_hold,
        complementable,
    })
}

/// `B = Y* D` for the reduced solution `Y` of `B* = D* Y`.
pub fn verify_b_factors_through_d<F: Scalar>(
    t: &Matrix<F>,
    m: &Subspace<F>,
    n: &Subspace<F>,
) -> Result<PropertyCheck, ComplementError> {
    let report = require_complementable(t, m, n)?;
    let y = report.y_factor.as_ref().expect("complementable report has Y");
    let mut check = PropertyCheck::new("B factors through D");
    check.push(
        "B = Y* D",
        report.blocks.b_block == &y.adjoint() * &report.blocks.d_block,
    );
    Ok(check)
}
