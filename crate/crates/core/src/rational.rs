//! Exact rational arithmetic for rates and bounds.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::{Error, Result};

pub type Rational = Ratio<i128>;

pub fn rational(numer: i128, denom: i128) -> Rational {
    Ratio::new(numer, denom)
}

pub fn integer(value: u64) -> Rational {
    Ratio::from_integer(value as i128)
}

/// Parses `p/q` or a bare integer; rejects negatives and zero denominators.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let (numer, denom) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let numer: i128 = numer.parse().map_err(|_| Error::InvalidInput(format!("not a rational: {text:?}")))?;
    let denom: i128 = denom.parse().map_err(|_| Error::InvalidInput(format!("not a rational: {text:?}")))?;
    if denom <= 0 || numer < 0 {
        return Err(Error::InvalidInput(format!("rational must be p/q with p >= 0 and q > 0, got {text:?}")));
    }
    Ok(Ratio::new(numer, denom))
}

pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Floor of a non-negative rational as an unsigned integer.
pub fn floor_u64(value: &Rational) -> u64 {
    if *value <= Rational::zero() {
        0
    } else {
        value.floor().to_integer() as u64
    }
}

pub fn ceil_u64(value: &Rational) -> u64 {
    if *value <= Rational::zero() {
        0
    } else {
        value.ceil().to_integer() as u64
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// `⌈log₂ n⌉`, with `lg 1 = 0`.
pub fn lg(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lg_is_ceiling_log2() {
        let expected = [(1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (8, 3), (9, 4), (16, 4), (17, 5)];
        for (n, want) in expected {
            assert_eq!(lg(n), want, "lg({n})");
        }
    }

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("1/2").unwrap(), rational(1, 2));
        assert_eq!(parse_rational(" 3 ").unwrap(), rational(3, 1));
        assert_eq!(parse_rational("2/4").unwrap(), rational(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("-1/2").is_err());
        assert!(parse_rational("a/2").is_err());
        assert_eq!(format_rational(&rational(6, 4)), "3/2");
        assert_eq!(format_rational(&rational(4, 2)), "2");
    }

    #[test]
    fn floors_and_ceilings() {
        assert_eq!(floor_u64(&rational(7, 2)), 3);
        assert_eq!(ceil_u64(&rational(7, 2)), 4);
        assert_eq!(ceil_u64(&rational(4, 1)), 4);
        assert_eq!(floor_u64(&rational(-1, 2)), 0);
    }
}
