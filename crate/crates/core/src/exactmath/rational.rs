use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_big(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let parsed = match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad(t))?;
            let q: BigInt = q.trim().parse().map_err(|_| bad(t))?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {t:?}")));
            }
            Rational::new(p, q)
        }
        None => Rational::from_integer(t.parse().map_err(|_| bad(t))?),
    };
    Ok(parsed)
}

/// Parses a comma separated list of rationals.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_rational).collect()
}

fn bad(t: &str) -> Error {
    Error::Parse(format!("not a rational number: {t:?}"))
}

/// `p/q` with the `/1` dropped for integers.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn pow(base: &Rational, exp: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Integer power allowing negative exponents; `base` must be nonzero when `exp < 0`.
pub fn powi(base: &Rational, exp: i64) -> Rational {
    if exp >= 0 {
        pow(base, exp as u32)
    } else {
        pow(&base.recip(), (-exp) as u32)
    }
}

/// Returns the integer value when `r` is integral.
pub fn as_integer(r: &Rational) -> Option<BigInt> {
    r.is_integer().then(|| r.numer().clone())
}

pub fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}

pub fn floor(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
