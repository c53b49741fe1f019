//! Univariate polynomials with rational coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::fastq::Q128;
use crate::scalar::Rational;

/// Coefficients from the constant term upward; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, x: i64) -> Rational {
        self.eval(&Rational::from_integer(BigInt::from(x)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// `p(a·k + b)` as a polynomial in `k`.
    pub fn compose_affine(&self, a: i64, b: i64) -> Self {
        let inner = Self::from_ints(&[b, a]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc.mul(&inner).add(&Self::constant(c.clone())))
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Same polynomial with `i128` coefficients, when they fit.
    pub(crate) fn to_fast(&self) -> Option<Vec<Q128>> {
        self.coeffs.iter().map(Q128::from_rational).collect()
    }

    /// Writes the polynomial in the variable `var`, highest power first.
    pub fn format_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (power, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let unit = mag.is_one();
            match power {
                0 => out.push_str(&mag.to_string()),
                _ => {
                    if !unit {
                        out.push_str(&mag.to_string());
                    }
                    out.push_str(var);
                    if power > 1 {
                        out.push('^');
                        out.push_str(&power.to_string());
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_in("n"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    #[test]
    fn arithmetic_and_degree() {
        let p = Poly::from_ints(&[-1, 2]);
        let q = Poly::from_ints(&[1, 2]);
        assert_eq!(p.mul(&q), Poly::from_ints(&[-1, 0, 4]));
        assert_eq!(p.sub(&p), Poly::zero());
        assert_eq!(Poly::zero().degree(), None);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p.eval_int(3), int(5));
        assert_eq!(Poly::new(vec![ratio(1, 2), int(0)]).degree(), Some(0));
    }

    #[test]
    fn affine_composition() {
        // n ↦ n at n = 2k − 1
        let p = Poly::from_ints(&[0, 1]);
        assert_eq!(p.compose_affine(2, -1), Poly::from_ints(&[-1, 2]));
        let sq = Poly::from_ints(&[0, 0, 1]);
        assert_eq!(sq.compose_affine(2, 1), Poly::from_ints(&[1, 4, 4]));
    }

    #[test]
    fn formatting() {
        assert_eq!(Poly::from_ints(&[-1, 2]).format_in("k"), "2k - 1");
        assert_eq!(Poly::from_ints(&[0, -1, 1]).format_in("n"), "n^2 - n");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(Poly::new(vec![ratio(-1, 3)]).to_string(), "-1/3");
    }
}
