//! Densely defined operators on ℓ₂ in a banded model.
//!
//! An operator is a finite set of bands whose coefficients are periodic
//! polynomials in the row index; its domain is `{x ∈ ℓ₂ : Wx ∈ ℓ₂}` for a
//! second banded operator `W` (often the action itself). Coordinate
//! subspaces are eventually periodic index sets. Indices start at 1.

mod decide;
mod fastq;
mod index_set;
mod operator;
mod poly;
mod probe;
mod sequence;
mod truncation;

pub use decide::{
    complement_consistency, decide_decomposable, validate_witness, ComplementConsistency, DecomposabilityVerdict,
    Evidence, StraddlingFamily, Verdict, Witness, WitnessTerm, WitnessValidation, HEURISTIC_GRID, WITNESS_GRID,
};
pub use index_set::IndexSet;
pub use operator::{
    formal_adjoint, formal_apply, AppliedEntry, Band, BandedOperator, CoefficientFn, DenselyDefinedOperator,
};
pub use poly::Poly;
pub use probe::{
    classify, divergence_probe, loglog_slope, Growth, GrowthReport, SeriesReport, SumPoint, CAUCHY_TAIL,
    DIVERGENT_SLOPE,
};
pub use sequence::SequenceRecipe;
pub use truncation::{
    adjoint_truncation_check, coordinate_verdict, min_size, truncate, truncate_operator, truncation_stability,
    AdjointCheck, StabilityReport, TruncationVerdict,
};
