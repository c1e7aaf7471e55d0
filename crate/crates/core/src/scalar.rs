//! Exact rational coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Coefficient field of every model in the crate.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// `(-1)^exp`.
pub fn sign(exp: usize) -> Scalar {
    if exp.is_multiple_of(2) {
        one()
    } else {
        -one()
    }
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`. Denominators must be positive and
/// nonzero; the value is reduced.
pub fn parse_scalar(text: &str) -> Result<Scalar, Error> {
    let text = text.trim();
    let bad = || Error::Parse(format!("invalid rational {text:?}, expected \"p/q\""));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if !den.is_positive() {
        return Err(bad());
    }
    Ok(Scalar::new(num, den))
}

/// Canonical text form: `"p/q"` with `q > 0` and the fraction reduced.
pub fn format_scalar(x: &Scalar) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Short display form used in tables: integers without the denominator.
pub fn display_scalar(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format_scalar(x)
    }
}

pub fn factorial(k: usize) -> Scalar {
    (1..=k as i64).fold(one(), |acc, i| acc * int(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_scalar("2/4").unwrap(), ratio(1, 2));
        assert_eq!(parse_scalar("-3").unwrap(), int(-3));
        assert_eq!(parse_scalar(" 1/3 ").unwrap(), ratio(1, 3));
        assert_eq!(format_scalar(&ratio(-6, 4)), "-3/2");
        assert_eq!(format_scalar(&int(5)), "5/1");
        assert_eq!(display_scalar(&int(5)), "5");
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("1/-2").is_err());
        assert!(parse_scalar("x").is_err());
        assert!(parse_scalar("").is_err());
    }

    #[test]
    fn signs_and_factorials() {
        assert_eq!(sign(0), one());
        assert_eq!(sign(3), -one());
        assert_eq!(factorial(0), one());
        assert_eq!(factorial(5), int(120));
    }
}
