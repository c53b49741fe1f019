//! Small rationals on `i128` for the hot loops of the divergence probe, and
//! a partial-sum accumulator that stays exact as long as it reasonably can.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::scalar::{to_f64, Rational};

/// Reduced fraction with positive denominator. Every operation is checked
/// and returns `None` on overflow.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Q128 {
    num: i128,
    den: i128,
}

impl Q128 {
    pub const ZERO: Self = Self { num: 0, den: 1 };
    #[cfg(test)]
    pub const ONE: Self = Self { num: 1, den: 1 };

    pub fn int(v: i128) -> Self {
        Self { num: v, den: 1 }
    }

    fn reduced(num: i128, den: i128) -> Option<Self> {
        if den == 0 {
            return None;
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g > 1 { (num / g, den / g) } else { (num, den) };
        if den < 0 {
            num = num.checked_neg()?;
            den = den.checked_neg()?;
        }
        Some(Self { num, den })
    }

    pub fn from_rational(r: &Rational) -> Option<Self> {
        Some(Self {
            num: r.numer().to_i128()?,
            den: r.denom().to_i128()?,
        })
    }

    pub fn to_rational(self) -> Rational {
        Rational::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn add(self, o: Self) -> Option<Self> {
        if self.den == o.den {
            return Self::reduced(self.num.checked_add(o.num)?, self.den);
        }
        let g = self.den.gcd(&o.den);
        let l = self.den / g;
        let r = o.den / g;
        let num = self.num.checked_mul(r)?.checked_add(o.num.checked_mul(l)?)?;
        Self::reduced(num, self.den.checked_mul(r)?)
    }

    pub fn mul(self, o: Self) -> Option<Self> {
        if self.num == 0 || o.num == 0 {
            return Some(Self::ZERO);
        }
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let num = (self.num / g1).checked_mul(o.num / g2)?;
        let den = (self.den / g2).checked_mul(o.den / g1)?;
        Some(Self { num, den })
    }

    pub fn div(self, o: Self) -> Option<Self> {
        if o.num == 0 {
            return None;
        }
        let inv = Self::reduced(o.den, o.num)?;
        self.mul(inv)
    }
}

/// Horner evaluation with `i128` coefficients.
pub(crate) fn eval_fast(coeffs: &[Q128], x: Q128) -> Option<Q128> {
    coeffs.iter().rev().try_fold(Q128::ZERO, |acc, &c| acc.mul(x)?.add(c))
}

/// Once an exact partial sum needs a denominator this wide, it is carried
/// on in floating point.
const EXACT_DENOM_BITS: u64 = 256;

/// Running sum of nonnegative rationals: `i128` while it fits, then
/// arbitrary precision, then compensated `f64` once the denominator outgrows
/// [`EXACT_DENOM_BITS`].
#[derive(Clone, Debug)]
pub(crate) enum Accumulator {
    Small(Q128),
    Big(Rational),
    Float { sum: f64, comp: f64 },
}

impl Default for Accumulator {
    fn default() -> Self {
        Self::Small(Q128::ZERO)
    }
}

impl Accumulator {
    fn add_float(sum: &mut f64, comp: &mut f64, x: f64) {
        // Neumaier summation
        let t = *sum + x;
        if sum.abs() >= x.abs() {
            *comp += (*sum - t) + x;
        } else {
            *comp += (x - t) + *sum;
        }
        *sum = t;
    }

    pub fn add_small(&mut self, term: Q128) {
        if term.is_zero() {
            return;
        }
        match self {
            Self::Small(acc) => match acc.add(term) {
                Some(v) => *acc = v,
                None => {
                    let big = acc.to_rational() + term.to_rational();
                    *self = Self::Big(big);
                    self.demote_if_wide();
                }
            },
            Self::Big(_) => self.add_big(&term.to_rational()),
            Self::Float { sum, comp } => Self::add_float(sum, comp, term.to_f64()),
        }
    }

    pub fn add_big(&mut self, term: &Rational) {
        if term.is_zero() {
            return;
        }
        match self {
            Self::Small(acc) => {
                *self = Self::Big(acc.to_rational() + term);
                self.demote_if_wide();
            }
            Self::Big(acc) => {
                *acc += term;
                self.demote_if_wide();
            }
            Self::Float { sum, comp } => Self::add_float(sum, comp, to_f64(term)),
        }
    }

    /// Adds a term that is already rounded; only valid in float mode.
    pub fn add_rounded(&mut self, term: f64) {
        match self {
            Self::Float { sum, comp } => Self::add_float(sum, comp, term),
            _ => panic!("rounded terms need a float accumulator"),
        }
    }

    pub fn is_float(&self) -> bool {
        matches!(self, Self::Float { .. })
    }

    fn demote_if_wide(&mut self) {
        if let Self::Big(acc) = self {
            if let Some(small) = Q128::from_rational(acc) {
                *self = Self::Small(small);
            } else if acc.denom().bits() > EXACT_DENOM_BITS {
                *self = Self::Float {
                    sum: to_f64(acc),
                    comp: 0.0,
                };
            }
        }
    }

    pub fn exact(&self) -> Option<Rational> {
        match self {
            Self::Small(q) => Some(q.to_rational()),
            Self::Big(r) => Some(r.clone()),
            Self::Float { .. } => None,
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            Self::Small(q) => q.to_f64(),
            Self::Big(r) => to_f64(r),
            Self::Float { sum, comp } => sum + comp,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn q128_matches_big_rationals() {
        let a = Q128::from_rational(&ratio(3, 4)).unwrap();
        let b = Q128::from_rational(&ratio(-5, 6)).unwrap();
        assert_eq!(a.add(b).unwrap().to_rational(), ratio(3, 4) + ratio(-5, 6));
        assert_eq!(a.mul(b).unwrap().to_rational(), ratio(3, 4) * ratio(-5, 6));
        assert_eq!(a.div(b).unwrap().to_rational(), ratio(3, 4) / ratio(-5, 6));
        assert!(a.div(Q128::ZERO).is_none());
        assert!(Q128::int(i128::MAX).add(Q128::ONE).is_none());
    }

    #[test]
    fn accumulator_switches_to_float() {
        let mut acc = Accumulator::default();
        let mut exact = Rational::zero();
        for k in 1..=2000i128 {
            let t = Q128::ONE.div(Q128::int(4 * k * k)).unwrap();
            acc.add_small(t);
            if k <= 10 {
                exact += t.to_rational();
                assert_eq!(acc.exact(), Some(exact.clone()));
            }
        }
        assert!(acc.exact().is_none());
        let expected: f64 = (1..=2000).map(|k| 1.0 / (4.0 * (k * k) as f64)).sum();
        assert!((acc.value() - expected).abs() < 1e-13);
    }

    #[test]
    fn integer_sums_stay_exact() {
        let mut acc = Accumulator::default();
        for _ in 0..1000 {
            acc.add_small(Q128::ONE);
        }
        assert_eq!(acc.exact(), Some(Rational::from_integer(1000.into())));
    }
}
