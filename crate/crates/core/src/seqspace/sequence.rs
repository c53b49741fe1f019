//! Closed-form sequences `x = (x_1, x_2, …)`.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::fastq::Q128;
use super::operator::{CoefficientFn, FastCoefficient};
use super::poly::Poly;
use crate::scalar::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceRecipe {
    /// `x_n = num(n) / den(n)`, and `0` where `den(n) = 0`.
    Ratio { num: CoefficientFn, den: CoefficientFn },
    /// Values of `x_1, …, x_len`, zero afterwards.
    Finite(Vec<Rational>),
    /// Finitely many nonzero entries at arbitrary indices.
    Sparse(BTreeMap<i64, Rational>),
}

impl SequenceRecipe {
    /// `x_n = 1/n`.
    pub fn harmonic() -> Self {
        Self::Ratio {
            num: CoefficientFn::constant(Rational::from_integer(1.into())),
            den: CoefficientFn::uniform(Poly::from_ints(&[0, 1])),
        }
    }

    pub fn finite(values: Vec<Rational>) -> Self {
        Self::Finite(values)
    }

    /// The `k`-th unit vector.
    pub fn unit(k: i64) -> Self {
        Self::Sparse(BTreeMap::from([(k, Rational::from_integer(1.into()))]))
    }

    pub fn value(&self, n: i64) -> Rational {
        if n < 1 {
            return Rational::zero();
        }
        match self {
            Self::Ratio { num, den } => {
                let d = den.eval(n);
                if d.is_zero() {
                    Rational::zero()
                } else {
                    num.eval(n) / d
                }
            }
            Self::Finite(v) => v.get(n as usize - 1).cloned().unwrap_or_else(Rational::zero),
            Self::Sparse(m) => m.get(&n).cloned().unwrap_or_else(Rational::zero),
        }
    }

    /// Last index of the support, if finite.
    pub fn support_end(&self) -> Option<i64> {
        match self {
            Self::Ratio { .. } => None,
            Self::Finite(v) => Some(v.iter().rposition(|x| !x.is_zero()).map_or(0, |p| p as i64 + 1)),
            Self::Sparse(m) => Some(m.iter().rev().find(|(_, v)| !v.is_zero()).map_or(0, |(&k, _)| k)),
        }
    }

    pub(crate) fn to_fast(&self) -> FastSequence<'_> {
        match self {
            Self::Ratio { num, den } => FastSequence::Ratio(num.to_fast(), den.to_fast()),
            _ => FastSequence::Exact(self),
        }
    }
}

pub(crate) enum FastSequence<'a> {
    Ratio(FastCoefficient, FastCoefficient),
    Exact(&'a SequenceRecipe),
}

impl FastSequence<'_> {
    pub fn value(&self, n: i64) -> Option<Q128> {
        if n < 1 {
            return Some(Q128::ZERO);
        }
        match self {
            Self::Ratio(num, den) => {
                let d = den.eval(n)?;
                if d.is_zero() {
                    Some(Q128::ZERO)
                } else {
                    num.eval(n)?.div(d)
                }
            }
            Self::Exact(recipe) => Q128::from_rational(&recipe.value(n)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    #[test]
    fn values() {
        let h = SequenceRecipe::harmonic();
        assert_eq!(h.value(4), ratio(1, 4));
        assert_eq!(h.value(0), int(0));
        assert_eq!(h.support_end(), None);
        assert_eq!(h.to_fast().value(7).unwrap().to_rational(), ratio(1, 7));
        let f = SequenceRecipe::finite(vec![int(1), int(2), int(0)]);
        assert_eq!(f.value(2), int(2));
        assert_eq!(f.value(9), int(0));
        assert_eq!(f.support_end(), Some(2));
        assert_eq!(SequenceRecipe::unit(5).support_end(), Some(5));
    }
}
