//! Parking functions and `x`-parking functions.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{resource, Error, Result};
use crate::exactmath::rational::pow;
use crate::exactmath::Rational;
use crate::lattice::SCAN_LIMIT;
use crate::volume::PolytopeSpec;

/// Largest length accepted by [`enumerate_parking`].
pub const MAX_PARKING_LENGTH: usize = 6;

/// A sequence of positive integers `(a_1, ..., a_n)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ParkingSequence {
    pub values: Vec<u64>,
}

impl ParkingSequence {
    /// Weakly increasing rearrangement `b_1 <= ... <= b_n`.
    pub fn sorted(&self) -> Vec<u64> {
        let mut b = self.values.clone();
        b.sort_unstable();
        b
    }

    pub fn is_parking(&self) -> bool {
        self.sorted().iter().enumerate().all(|(i, &b)| b >= 1 && b <= i as u64 + 1)
    }
}

fn prefix_u(spec: &PolytopeSpec) -> Result<Vec<u64>> {
    let mut acc = 0u64;
    Ok(spec
        .integer_x()?
        .into_iter()
        .map(|v| {
            acc += v as u64;
            acc
        })
        .collect())
}

/// Whether the increasing rearrangement `b` of `a` satisfies `b_i <= u_i`.
pub fn is_x_parking(a: &[u64], spec: &PolytopeSpec) -> Result<bool> {
    if a.len() != spec.n() {
        return Err(Error::Dimension(format!("sequence of length {} for n = {}", a.len(), spec.n())));
    }
    if a.contains(&0) {
        return crate::error::domain("parking sequences have positive entries");
    }
    let u = prefix_u(spec)?;
    let seq = ParkingSequence { values: a.to_vec() };
    Ok(seq.sorted().iter().zip(&u).all(|(b, ui)| b <= ui))
}

/// Visits every sequence in `{1..max}^n` in lexicographic order.
fn for_each_sequence(n: usize, max: u64, mut f: impl FnMut(&[u64])) {
    if max == 0 {
        if n == 0 {
            f(&[]);
        }
        return;
    }
    let mut a = vec![1u64; n];
    loop {
        f(&a);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if a[i] < max {
                a[i] += 1;
                a[i + 1..].fill(1);
                break;
            }
        }
    }
}

/// Number of `x`-parking functions, by scanning `{1..u_n}^n` (at most `SCAN_LIMIT` sequences).
pub fn count_x_parking(spec: &PolytopeSpec) -> Result<u64> {
    let u = prefix_u(spec)?;
    let n = spec.n();
    let un = *u.last().expect("spec is nonempty");
    if un.checked_pow(n as u32).is_none_or(|w| w > SCAN_LIMIT) {
        return resource(format!("x-parking scan with n = {n}, u_n = {un}"));
    }
    let mut count = 0;
    for_each_sequence(n, un, |a| {
        let mut b = a.to_vec();
        b.sort_unstable();
        if b.iter().zip(&u).all(|(bi, ui)| bi <= ui) {
            count += 1;
        }
    });
    Ok(count)
}

/// All parking functions of length `n`, in lexicographic order.
pub fn enumerate_parking(n: usize) -> Result<Vec<ParkingSequence>> {
    if n > MAX_PARKING_LENGTH {
        return resource(format!("parking functions of length {n}"));
    }
    let mut out = Vec::new();
    for_each_sequence(n, n as u64, |a| {
        let s = ParkingSequence { values: a.to_vec() };
        if s.is_parking() {
            out.push(s);
        }
    });
    Ok(out)
}

/// `Σ_{a ∈ PF(n)} x_{a_1} ··· x_{a_n}`.
pub fn weighted_parking_sum(x: &[Rational]) -> Result<Rational> {
    if x.is_empty() {
        return Err(Error::EmptyInput("x must be nonempty".into()));
    }
    let mut total = Rational::zero();
    for pf in enumerate_parking(x.len())? {
        total += pf.values.iter().fold(Rational::one(), |acc, &a| acc * &x[a as usize - 1]);
    }
    Ok(total)
}

/// `Σ_{a ∈ PF(n)} q^{a_1 + ... + a_n - n}`.
pub fn parking_q_sum(n: usize, q: &Rational) -> Result<Rational> {
    let mut total = Rational::zero();
    for pf in enumerate_parking(n)? {
        let e: u64 = pf.values.iter().sum::<u64>() - n as u64;
        total += pow(q, e as u32);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int, rat};
    use crate::volume::scaled_volume_at;
    use proptest::prelude::*;

    fn spec(x: &[i64]) -> PolytopeSpec {
        PolytopeSpec::from_integers(x).unwrap()
    }

    #[test]
    fn small_lists() {
        assert_eq!(enumerate_parking(1).unwrap(), vec![ParkingSequence { values: vec![1] }]);
        let two: Vec<Vec<u64>> = enumerate_parking(2).unwrap().into_iter().map(|s| s.values).collect();
        assert_eq!(two, vec![vec![1, 1], vec![1, 2], vec![2, 1]]);
        assert_eq!(enumerate_parking(5).unwrap().len(), 1296);
        assert!(enumerate_parking(7).is_err());
    }

    #[test]
    fn counts() {
        assert_eq!(count_x_parking(&spec(&[2, 1])).unwrap(), 8);
        assert_eq!(count_x_parking(&spec(&[1, 1, 1])).unwrap(), 16);
        assert_eq!(count_x_parking(&spec(&[1, 1, 1, 1])).unwrap(), 125);
        assert_eq!(count_x_parking(&spec(&[0, 2, 2])).unwrap(), 0);
        assert!(count_x_parking(&spec(&[9, 9, 9, 9, 9, 9])).is_err());
    }

    #[test]
    fn membership() {
        let ones = spec(&[1, 1, 1]);
        assert!(is_x_parking(&[1, 1, 1], &ones).unwrap());
        assert!(is_x_parking(&[3, 1, 2], &ones).unwrap());
        assert!(!is_x_parking(&[3, 3, 1], &ones).unwrap());
        assert!(!is_x_parking(&[1, 1], &spec(&[0, 5])).unwrap());
        assert!(is_x_parking(&[0, 1], &spec(&[1, 1])).is_err());
    }

    #[test]
    fn three_way_identity() {
        for n in 1..=3usize {
            let total = 4i64.pow(n as u32);
            for code in 0..total {
                let x: Vec<i64> = (0..n).map(|i| (code / 4i64.pow(i as u32)) % 4).collect();
                let s = spec(&x);
                if s.u().last().unwrap() > &int(8) {
                    continue;
                }
                let xr: Vec<Rational> = x.iter().map(|&v| int(v)).collect();
                let scan = int(count_x_parking(&s).unwrap() as i64);
                assert_eq!(scan, scaled_volume_at(&xr).unwrap(), "{x:?}");
                assert_eq!(scan, weighted_parking_sum(&xr).unwrap(), "{x:?}");
            }
        }
    }

    #[test]
    fn q_sum_is_volume_specialization() {
        for n in 1..=4 {
            for q in [rat(1, 2), int(3)] {
                assert_eq!(parking_q_sum(n, &q).unwrap(), crate::volume::q_specialization(n, &q).unwrap());
            }
        }
    }

    proptest! {
        #[test]
        fn permutation_closure(a in prop::collection::vec(1u64..=4, 3), shift in 0usize..3) {
            let s = spec(&[1, 1, 2]);
            let mut b = a.clone();
            b.rotate_left(shift);
            prop_assert_eq!(is_x_parking(&a, &s).unwrap(), is_x_parking(&b, &s).unwrap());
        }

        #[test]
        fn monotone_in_x(x in prop::collection::vec(0i64..=2, 3), bump in 0usize..3) {
            let mut y = x.clone();
            y[bump] += 1;
            prop_assert!(count_x_parking(&spec(&x)).unwrap() <= count_x_parking(&spec(&y)).unwrap());
        }
    }
}
