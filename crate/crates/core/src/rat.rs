//! Exact rational scalars. Thin layer over `num_rational::BigRational`:
//! reduced fractions with positive denominator, parsed from and printed to
//! the `"p/q"` strings used in every external format.

use crate::error::{HocatError, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rat = num_rational::BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_zero(r: &Rat) -> bool {
    r.is_zero()
}

/// Canonical display: `"p"` for integers, `"p/q"` otherwise (q > 0, reduced).
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p"` or `"p/q"`. Rejects zero denominators.
pub fn rat_from_str(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| HocatError::Malformed(format!("bad integer {:?}", t)))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let num = parse_int(n)?;
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(HocatError::Malformed(format!("zero denominator in {:?}", s)));
            }
            Ok(Rat::new(num, den))
        }
    }
}

/// Sign of (-1)^k as a rational.
pub fn sign_pow(k: i64) -> Rat {
    if k.rem_euclid(2) == 0 {
        Rat::one()
    } else {
        -Rat::one()
    }
}

pub fn abs(r: &Rat) -> Rat {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn string_round_trip_is_canonical() {
        for s in ["0", "5", "-3", "7/2", "-7/2"] {
            let r = rat_from_str(s).unwrap();
            assert_eq!(rat_to_string(&r), s);
        }
        // non-canonical inputs normalise
        assert_eq!(rat_to_string(&rat_from_str("4/2").unwrap()), "2");
        assert_eq!(rat_to_string(&rat_from_str("1/-2").unwrap()), "-1/2");
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(rat_from_str("1/0").is_err());
    }
}
