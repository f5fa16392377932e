use num_bigint::BigInt;
use num_traits::One;

use super::poly::Poly;
use super::rational::{from_big, Rational};

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `binomial(n, k)` for integer `n` (possibly negative) via the falling factorial.
pub fn binomial(n: &BigInt, k: u32) -> BigInt {
    let mut num = BigInt::one();
    for i in 0..k {
        num *= n - BigInt::from(i);
    }
    num / factorial(k)
}

/// Multiset coefficient `k(k+1)...(k+j-1)/j!`, valid for every integer `k`.
///
/// Vanishes for `-j+1 <= k <= 0` when `j >= 1`.
pub fn multichoose(k: &BigInt, j: u32) -> BigInt {
    let mut num = BigInt::one();
    for i in 0..j {
        num *= k + BigInt::from(i);
    }
    num / factorial(j)
}

pub fn multichoose_i64(k: i64, j: u32) -> BigInt {
    multichoose(&BigInt::from(k), j)
}

/// Multiset coefficient with a symbolic first argument.
pub fn multichoose_poly(k: &Poly, j: u32) -> Poly {
    let nvars = k.nvars();
    let mut acc = Poly::one(nvars);
    for i in 0..j {
        let shifted = k + &Poly::constant(nvars, Rational::from_integer(BigInt::from(i)));
        acc = &acc * &shifted;
    }
    acc.scale(&Rational::new(BigInt::one(), factorial(j)))
}

/// Number of standard Young tableaux of the rectangle with `n` rows of length `m`.
pub fn hook_count_rectangular(m: u32, n: u32) -> BigInt {
    let mut hooks = BigInt::one();
    for i in 0..n {
        for j in 0..m {
            hooks *= (m - j - 1) + (n - i - 1) + 1;
        }
    }
    factorial(m * n) / hooks
}

/// `1/k!` as a rational.
pub fn inv_factorial(k: u32) -> Rational {
    from_big(factorial(k)).recip()
}
