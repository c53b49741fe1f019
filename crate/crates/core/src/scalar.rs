//! Exact scalar fields used by every matrix in the crate.
//!
//! The default field is [`Rational`] (arbitrary precision, always in lowest
//! terms). [`ComplexRational`] pairs two rationals for complex mode. Floating
//! point only appears when an operator norm has to be estimated.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ParseScalarError;

/// Exact rational number.
pub type Rational = BigRational;

/// Exact complex rational `re + im·i`.
pub type ComplexRational = Complex<BigRational>;

/// A field with exact arithmetic and an involution (complex conjugation).
///
/// The arithmetic helpers take references so that matrix kernels can avoid
/// cloning big integers on every multiply-add.
pub trait Scalar: Clone + PartialEq + Debug + Display + Zero + One + Send + Sync + 'static {
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    /// Panics on division by zero, like the underlying rational type.
    fn div_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn conj(&self) -> Self;
    /// `|x|²` as an exact rational.
    fn norm_sqr(&self) -> Rational;
    fn from_rational(r: Rational) -> Self;
    fn to_c64(&self) -> Complex64;
    /// Parse the wire form (`"p/q"`, `"p"`, or `"a+bi"` for complex).
    fn parse_wire(s: &str) -> Result<Self, ParseScalarError>;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(int(v))
    }
}

impl Scalar for Rational {
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn div_ref(&self, other: &Self) -> Self {
        self / other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn norm_sqr(&self) -> Rational {
        self * self
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(to_f64(self), 0.0)
    }
    fn parse_wire(s: &str) -> Result<Self, ParseScalarError> {
        parse_rational(s)
    }
}

impl Scalar for ComplexRational {
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn div_ref(&self, other: &Self) -> Self {
        self / other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }
    fn from_rational(r: Rational) -> Self {
        Complex::new(r, Rational::zero())
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }
    fn parse_wire(s: &str) -> Result<Self, ParseScalarError> {
        parse_complex(s)
    }
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Nearest `f64`; saturates to ±inf for out-of-range magnitudes.
pub fn to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Huge numerator and denominator: shift both down before dividing.
    let n_bits = r.numer().bits() as i64;
    let d_bits = r.denom().bits() as i64;
    let shift_n = (n_bits - 900).max(0) as usize;
    let shift_d = (d_bits - 900).max(0) as usize;
    let n = (r.numer() >> shift_n).to_f64().unwrap_or(f64::INFINITY);
    let d = (r.denom() >> shift_d).to_f64().unwrap_or(f64::INFINITY);
    let v = n / d * 2f64.powi((shift_n as i64 - shift_d as i64) as i32);
    if r.is_negative() && v > 0.0 {
        -v
    } else {
        v
    }
}

fn normalize_minus(s: &str) -> String {
    s.trim()
        .chars()
        .map(|c| match c {
            '\u{2010}' | '\u{2011}' | '\u{2012}' | '\u{2013}' | '\u{2212}' => '-',
            c => c,
        })
        .filter(|c| !c.is_whitespace())
        .collect()
}

pub fn parse_rational(s: &str) -> Result<Rational, ParseScalarError> {
    let cleaned = normalize_minus(s);
    if cleaned.is_empty() {
        return Err(ParseScalarError::new(s));
    }
    let parsed = match cleaned.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim_start_matches('+')).map_err(|_| ParseScalarError::new(s))?;
            let d = BigInt::from_str(d).map_err(|_| ParseScalarError::new(s))?;
            if d.is_zero() {
                return Err(ParseScalarError::new(s));
            }
            Rational::new(n, d)
        }
        None => Rational::from_integer(
            BigInt::from_str(cleaned.trim_start_matches('+')).map_err(|_| ParseScalarError::new(s))?,
        ),
    };
    Ok(parsed)
}

/// Accepts `"a"`, `"bi"`, `"a+bi"`, `"a-bi"`, `"i"`, `"-i"`; `a` and `b` are rationals.
pub fn parse_complex(s: &str) -> Result<ComplexRational, ParseScalarError> {
    let cleaned = normalize_minus(s);
    let Some(body) = cleaned.strip_suffix('i') else {
        return Ok(Complex::new(parse_rational(&cleaned)?, Rational::zero()));
    };
    // split at the last sign that is not the leading one
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(_, c)| c == '+' || c == '-')
        .map(|(i, _)| i)
        .last();
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => Rational::one(),
        "-" => -Rational::one(),
        other => parse_rational(other)?,
    };
    Ok(Complex::new(parse_rational(re)?, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("-1/2").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("\u{2011}1/2").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("4/6").unwrap(), ratio(2, 3));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn canonical_sign_and_lowest_terms() {
        let r = Rational::new(BigInt::from(4), BigInt::from(-6));
        assert_eq!(r.to_string(), "-2/3");
        assert_eq!(int(3).to_string(), "3");
    }

    #[test]
    fn parse_complex_forms() {
        let c = parse_complex("1/2+3i").unwrap();
        assert_eq!(c, Complex::new(ratio(1, 2), int(3)));
        assert_eq!(parse_complex("-i").unwrap(), Complex::new(int(0), int(-1)));
        assert_eq!(parse_complex("2").unwrap(), Complex::new(int(2), int(0)));
        assert_eq!(parse_complex("-1-2/3i").unwrap(), Complex::new(int(-1), ratio(-2, 3)));
    }

    #[test]
    fn huge_rationals_convert_to_float() {
        let big = BigInt::from(10).pow(400);
        let r = Rational::new(big.clone() * 3, big);
        assert!((to_f64(&r) - 3.0).abs() < 1e-12);
    }
}
