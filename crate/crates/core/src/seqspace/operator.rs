//! Banded operators on sequences indexed from 1.

use num_integer::Integer;
use num_traits::Zero;

use super::fastq::{eval_fast, Q128};
use super::poly::Poly;
use super::sequence::SequenceRecipe;
use crate::error::SeqError;
use crate::scalar::Rational;

/// A function of the index `n`, polynomial on each residue class of
/// `modulus`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientFn {
    modulus: usize,
    /// `pieces[r]` is used for `n ≡ r (mod modulus)`.
    pieces: Vec<Poly>,
}

impl CoefficientFn {
    /// Builds from `(residue, poly)` pairs, which must cover every residue of
    /// `modulus` exactly once.
    pub fn new(modulus: usize, pieces: Vec<(usize, Poly)>) -> Result<Self, SeqError> {
        if modulus == 0 {
            return Err(SeqError::BadCoefficient("modulus must be at least 1".into()));
        }
        let mut slots: Vec<Option<Poly>> = vec![None; modulus];
        for (residue, poly) in pieces {
            if residue >= modulus {
                return Err(SeqError::BadCoefficient(format!(
                    "residue {residue} out of range for modulus {modulus}"
                )));
            }
            if slots[residue].replace(poly).is_some() {
                return Err(SeqError::BadCoefficient(format!("residue {residue} given twice")));
            }
        }
        let pieces = slots
            .into_iter()
            .enumerate()
            .map(|(r, p)| p.ok_or_else(|| SeqError::BadCoefficient(format!("residue {r} missing"))))
            .collect::<Result<_, _>>()?;
        Ok(Self { modulus, pieces })
    }

    pub fn constant(c: Rational) -> Self {
        Self {
            modulus: 1,
            pieces: vec![Poly::constant(c)],
        }
    }

    pub fn uniform(poly: Poly) -> Self {
        Self {
            modulus: 1,
            pieces: vec![poly],
        }
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn pieces(&self) -> &[Poly] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(Poly::is_zero)
    }

    pub fn piece_for(&self, n: i64) -> &Poly {
        &self.pieces[n.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn eval(&self, n: i64) -> Rational {
        self.piece_for(n).eval_int(n)
    }

    /// The polynomial in `k` giving the value at `n = period·k + shift`.
    /// `period` must be a multiple of the modulus.
    pub fn along(&self, period: i64, shift: i64) -> Poly {
        debug_assert_eq!(period % self.modulus as i64, 0);
        self.piece_for(shift).compose_affine(period, shift)
    }

    /// `n ↦ self(n − d)`, the coefficient carried by an adjoint band.
    pub fn shifted(&self, d: i64) -> Self {
        let m = self.modulus as i64;
        let pieces = (0..m)
            .map(|r| self.pieces[(r - d).rem_euclid(m) as usize].compose_affine(1, -d))
            .collect();
        Self {
            modulus: self.modulus,
            pieces,
        }
    }

    pub(crate) fn to_fast(&self) -> FastCoefficient {
        FastCoefficient {
            modulus: self.modulus as i64,
            pieces: self.pieces.iter().map(Poly::to_fast).collect(),
        }
    }
}

pub(crate) struct FastCoefficient {
    modulus: i64,
    pieces: Vec<Option<Vec<Q128>>>,
}

impl FastCoefficient {
    pub fn eval(&self, n: i64) -> Option<Q128> {
        let piece = self.pieces[n.rem_euclid(self.modulus) as usize].as_ref()?;
        eval_fast(piece, Q128::int(n as i128))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Band {
    pub offset: i64,
    pub coeff: CoefficientFn,
}

/// `(Ax)_i = Σ_bands coeff(i)·x_{i+offset}`, with `x_j = 0` for `j < 1`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BandedOperator {
    bands: Vec<Band>,
}

impl BandedOperator {
    /// Bands are sorted by offset; offsets must be distinct.
    pub fn new(mut bands: Vec<Band>) -> Result<Self, SeqError> {
        bands.sort_by_key(|b| b.offset);
        if let Some(w) = bands.windows(2).find(|w| w[0].offset == w[1].offset) {
            return Err(SeqError::BadCoefficient(format!(
                "offset {} appears twice",
                w[0].offset
            )));
        }
        Ok(Self { bands })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn diagonal(coeff: CoefficientFn) -> Self {
        Self {
            bands: vec![Band { offset: 0, coeff }],
        }
    }

    pub fn bands(&self) -> &[Band] {
        &self.bands
    }

    /// Largest `|offset|`.
    pub fn width(&self) -> usize {
        self.bands
            .iter()
            .map(|b| b.offset.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Least common multiple of the coefficient moduli.
    pub fn period(&self) -> usize {
        self.bands.iter().fold(1, |acc, b| acc.lcm(&b.coeff.modulus()))
    }

    pub fn coefficient(&self, offset: i64) -> Option<&CoefficientFn> {
        self.bands.iter().find(|b| b.offset == offset).map(|b| &b.coeff)
    }

    /// Entry `(i, j)` of the infinite matrix, 1-based.
    pub fn entry(&self, i: i64, j: i64) -> Rational {
        self.coefficient(j - i).map_or_else(Rational::zero, |c| c.eval(i))
    }

    /// Row `i` of `A·x`.
    pub fn row_value(&self, i: i64, x: &SequenceRecipe) -> Rational {
        self.bands
            .iter()
            .filter(|b| i + b.offset >= 1)
            .fold(Rational::zero(), |acc, b| acc + b.coeff.eval(i) * x.value(i + b.offset))
    }

    /// Formal adjoint: `⟨Ax, y⟩ = ⟨x, A^× y⟩` for finitely supported `x`, `y`.
    /// Band `d` with coefficient `c(n)` becomes band `−d` with `c(n − d)`
    /// (coefficients are real, so conjugation is the identity).
    pub fn formal_adjoint(&self) -> Self {
        let bands = self
            .bands
            .iter()
            .map(|b| Band {
                offset: -b.offset,
                coeff: b.coeff.shifted(b.offset),
            })
            .collect();
        Self::new(bands).expect("reflected offsets stay distinct")
    }

    pub(crate) fn to_fast(&self) -> Vec<(i64, FastCoefficient)> {
        self.bands.iter().map(|b| (b.offset, b.coeff.to_fast())).collect()
    }
}

/// `T` with domain `D(T) = {x ∈ ℓ₂ : Wx ∈ ℓ₂}`.
///
/// Every band is finite, so finitely supported sequences always lie in the
/// domain and `D(T)` is dense.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenselyDefinedOperator {
    pub action: BandedOperator,
    /// `None` means `W` is the action itself.
    pub domain_op: Option<BandedOperator>,
}

impl DenselyDefinedOperator {
    pub fn new(action: BandedOperator) -> Self {
        Self {
            action,
            domain_op: None,
        }
    }

    pub fn with_domain(action: BandedOperator, domain_op: BandedOperator) -> Self {
        Self {
            action,
            domain_op: Some(domain_op),
        }
    }

    pub fn domain_operator(&self) -> &BandedOperator {
        self.domain_op.as_ref().unwrap_or(&self.action)
    }

    /// The operator of the worked ℓ₂ example:
    /// `T(x) = (x₁ − x₂, 0, 3(x₃ − x₄), 0, …)` with `W = T`.
    pub fn pairing_example() -> Self {
        let n = Poly::from_ints(&[0, 1]);
        let diag = CoefficientFn::new(2, vec![(1, n.clone()), (0, Poly::zero())]).expect("two residues");
        let upper = CoefficientFn::new(2, vec![(1, n.neg()), (0, Poly::zero())]).expect("two residues");
        let action = BandedOperator::new(vec![
            Band { offset: 0, coeff: diag },
            Band {
                offset: 1,
                coeff: upper,
            },
        ])
        .expect("distinct offsets");
        Self::new(action)
    }
}

/// One entry of a formal image prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AppliedEntry {
    pub value: Rational,
    /// Some band of this row reads an index beyond the prefix.
    pub partial: bool,
}

/// The first `upto` entries of `op·x`, computed exactly from the full
/// sequence `x`.
pub fn formal_apply(op: &BandedOperator, x: &SequenceRecipe, upto: usize) -> Vec<AppliedEntry> {
    let reach = op.bands().iter().map(|b| b.offset).max().unwrap_or(0).max(0);
    (1..=upto as i64)
        .map(|i| AppliedEntry {
            value: op.row_value(i, x),
            partial: i + reach > upto as i64,
        })
        .collect()
}

/// Formal adjoint of the action of `t`.
pub fn formal_adjoint(t: &DenselyDefinedOperator) -> BandedOperator {
    t.action.formal_adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn shift() -> BandedOperator {
        BandedOperator::new(vec![Band {
            offset: 1,
            coeff: CoefficientFn::constant(int(1)),
        }])
        .unwrap()
    }

    #[test]
    fn coefficient_validation() {
        assert!(CoefficientFn::new(2, vec![(0, Poly::zero())]).is_err());
        assert!(CoefficientFn::new(2, vec![(0, Poly::zero()), (0, Poly::zero())]).is_err());
        assert!(CoefficientFn::new(2, vec![(2, Poly::zero()), (0, Poly::zero())]).is_err());
        assert!(CoefficientFn::new(0, vec![]).is_err());
    }

    #[test]
    fn pairing_operator_entries() {
        let t = DenselyDefinedOperator::pairing_example();
        assert_eq!(t.action.entry(1, 1), int(1));
        assert_eq!(t.action.entry(1, 2), int(-1));
        assert_eq!(t.action.entry(3, 4), int(-3));
        assert_eq!(t.action.entry(2, 2), int(0));
        assert_eq!(t.action.period(), 2);
        assert_eq!(t.action.width(), 1);
    }

    #[test]
    fn apply_pairing_operator_to_harmonic_sequence() {
        let t = DenselyDefinedOperator::pairing_example();
        let out = formal_apply(&t.action, &SequenceRecipe::harmonic(), 6);
        // row 2k−1 is (2k−1)(1/(2k−1) − 1/(2k)) = 1/(2k)
        let values: Vec<_> = out.iter().map(|e| e.value.clone()).collect();
        assert_eq!(
            values,
            vec![ratio(1, 2), int(0), ratio(1, 4), int(0), ratio(1, 6), int(0)]
        );
        assert!(out[5].partial && !out[4].partial);
    }

    #[test]
    fn shift_band() {
        let e1 = SequenceRecipe::finite(vec![int(1)]);
        let e2 = SequenceRecipe::finite(vec![int(0), int(1)]);
        let a: Vec<_> = formal_apply(&shift(), &e1, 3).into_iter().map(|e| e.value).collect();
        assert_eq!(a, vec![int(0), int(0), int(0)]);
        let b: Vec<_> = formal_apply(&shift(), &e2, 3).into_iter().map(|e| e.value).collect();
        assert_eq!(b, vec![int(1), int(0), int(0)]);
        let zero: Vec<_> = formal_apply(&BandedOperator::zero(), &e2, 2)
            .into_iter()
            .map(|e| e.value)
            .collect();
        assert_eq!(zero, vec![int(0), int(0)]);
    }

    #[test]
    fn adjoint_examples() {
        let diag = BandedOperator::diagonal(CoefficientFn::uniform(Poly::from_ints(&[1, 2])));
        assert_eq!(diag.formal_adjoint(), diag);
        let adj = shift().formal_adjoint();
        assert_eq!(adj.bands().len(), 1);
        assert_eq!(adj.bands()[0].offset, -1);
        assert_eq!(adj.bands()[0].coeff, CoefficientFn::constant(int(1)));
        let t = DenselyDefinedOperator::pairing_example();
        let adj = formal_adjoint(&t);
        for i in 1..12 {
            for j in 1..12 {
                assert_eq!(adj.entry(i, j), t.action.entry(j, i));
            }
        }
        assert_eq!(adj.formal_adjoint(), t.action);
    }
}
