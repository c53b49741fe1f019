//! Leading principal corners of banded operators, fed to the finite engine.

use serde::Serialize;

use super::index_set::IndexSet;
use super::operator::{BandedOperator, DenselyDefinedOperator};
use crate::complementable::{FailingInclusion, Instance};
use crate::error::SeqError;
use crate::matrix::{ExactMatrix, Matrix};
use crate::scalar::Rational;
use crate::subspace::Subspace;

/// Smallest admissible truncation size for a band width.
pub fn min_size(op: &BandedOperator) -> usize {
    (2 * op.width()).max(1)
}

/// The `size × size` corner of `op`, 1-based indices mapped to 0-based.
pub fn truncate_operator(op: &BandedOperator, size: usize) -> Result<ExactMatrix, SeqError> {
    let min = min_size(op);
    if size < min {
        return Err(SeqError::SizeTooSmall { size, min });
    }
    let mut out = Matrix::zeros(size, size);
    for i in 1..=size as i64 {
        for b in op.bands() {
            let j = i + b.offset;
            if j >= 1 && j <= size as i64 {
                out.set(i as usize - 1, j as usize - 1, b.coeff.eval(i));
            }
        }
    }
    Ok(out)
}

fn coordinate(set: &IndexSet, size: usize) -> Subspace<Rational> {
    let idx: Vec<usize> = set.members_upto(size).into_iter().map(|n| n as usize - 1).collect();
    Subspace::coordinate(size, &idx)
}

/// `(T_size, M ∩ {1..size}, N ∩ {1..size})` as a finite instance.
pub fn truncate(
    t: &DenselyDefinedOperator,
    m: &IndexSet,
    n: &IndexSet,
    size: usize,
) -> Result<Instance<Rational>, SeqError> {
    Ok(Instance {
        operator: truncate_operator(&t.action, size)?,
        m: coordinate(m, size),
        n: coordinate(n, size),
    })
}

/// Complementability verdict for coordinate subspaces. The ambient blocks
/// are zero-padded submatrices here, so the range inclusions are checked on
/// the compressed blocks directly.
pub fn coordinate_verdict(t: &ExactMatrix, m_idx: &[usize], n_idx: &[usize]) -> FailingInclusion {
    let m_perp: Vec<usize> = (0..t.cols()).filter(|j| !m_idx.contains(j)).collect();
    let n_perp: Vec<usize> = (0..t.rows()).filter(|i| !n_idx.contains(i)).collect();
    let lower = t.select_rows(&n_perp);
    let c = lower.select_columns(m_idx);
    let d = lower.select_columns(&m_perp);
    let b = t.select_rows(n_idx).select_columns(&m_perp);
    let rank_d = d.rank();
    if d.hstack(&c).expect("same rows").rank() != rank_d {
        return FailingInclusion::CInD;
    }
    if d.vstack(&b).expect("same columns").rank() != rank_d {
        return FailingInclusion::BStarInDStar;
    }
    FailingInclusion::None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruncationVerdict {
    pub size: usize,
    pub complementable: bool,
    pub failing_inclusion: FailingInclusion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub verdicts: Vec<TruncationVerdict>,
    pub stable: bool,
}

pub fn truncation_stability(
    t: &DenselyDefinedOperator,
    m: &IndexSet,
    n: &IndexSet,
    grid: &[usize],
) -> Result<StabilityReport, SeqError> {
    if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SeqError::BadGrid);
    }
    let verdicts = grid
        .iter()
        .map(|&size| {
            let op = truncate_operator(&t.action, size)?;
            let to0 = |v: Vec<i64>| v.into_iter().map(|i| i as usize - 1).collect::<Vec<_>>();
            let failing = coordinate_verdict(&op, &to0(m.members_upto(size)), &to0(n.members_upto(size)));
            Ok(TruncationVerdict {
                size,
                complementable: failing == FailingInclusion::None,
                failing_inclusion: failing,
            })
        })
        .collect::<Result<Vec<_>, SeqError>>()?;
    let stable = verdicts
        .windows(2)
        .all(|w| w[0].failing_inclusion == w[1].failing_inclusion);
    Ok(StabilityReport { verdicts, stable })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjointCheck {
    pub size: usize,
    pub interior_rows: usize,
    pub interior_equal: bool,
    pub full_equal: bool,
}

/// Compares the truncated formal adjoint with the conjugate transpose of
/// the truncation. Interior rows are those at least the band width away
/// from both ends.
pub fn adjoint_truncation_check(op: &BandedOperator, size: usize) -> Result<AdjointCheck, SeqError> {
    let t = truncate_operator(op, size)?;
    let adj = truncate_operator(&op.formal_adjoint(), size)?;
    let reference = t.adjoint();
    let width = op.width();
    let interior: Vec<usize> = (width..size.saturating_sub(width)).collect();
    let interior_equal = interior.iter().all(|&i| adj.row(i) == reference.row(i));
    Ok(AdjointCheck {
        size,
        interior_rows: interior.len(),
        interior_equal,
        full_equal: adj == reference,
    })
}
