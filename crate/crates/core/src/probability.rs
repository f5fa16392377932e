//! Uniform order statistics: band probabilities, multinomial ballot
//! events, the lines of Daniels and Pyke, and a seeded Monte Carlo check.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::config::rng;
use crate::error::{domain, Error, Result};
use crate::exactmath::combin::inv_factorial;
use crate::exactmath::rational::{floor, from_big, pow, powi, to_f64};
use crate::exactmath::{binomial, factorial, int, Matrix, Poly, Rational};
use crate::volume::{scaled_volume_at, volume_poly};

/// Lower and upper bounds `r_j <= U_{n,j} <= s_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandSpec {
    r: Vec<Rational>,
    s: Vec<Rational>,
}

fn check_simplex(v: &[Rational], name: &str) -> Result<()> {
    if v.is_empty() {
        return Err(Error::EmptyInput(format!("{name} must be nonempty")));
    }
    if v[0].is_negative() || v[v.len() - 1] > Rational::one() || v.windows(2).any(|w| w[0] > w[1]) {
        return domain(format!("{name} must satisfy 0 <= v_1 <= ... <= v_n <= 1"));
    }
    Ok(())
}

impl BandSpec {
    pub fn new(r: Vec<Rational>, s: Vec<Rational>) -> Result<Self> {
        if r.len() != s.len() {
            return Err(Error::Dimension(format!("band bounds of lengths {} and {}", r.len(), s.len())));
        }
        check_simplex(&r, "r")?;
        check_simplex(&s, "s")?;
        if r.iter().zip(&s).any(|(a, b)| a > b) {
            return domain("band needs r_i <= s_i");
        }
        Ok(BandSpec { r, s })
    }

    /// `r = 0`.
    pub fn upper(s: Vec<Rational>) -> Result<Self> {
        Self::new(vec![Rational::zero(); s.len()], s)
    }

    /// `s = 1`.
    pub fn lower(r: Vec<Rational>) -> Result<Self> {
        Self::new(r.clone(), vec![Rational::one(); r.len()])
    }

    pub fn n(&self) -> usize {
        self.r.len()
    }

    pub fn r(&self) -> &[Rational] {
        &self.r
    }

    pub fn s(&self) -> &[Rational] {
        &self.s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonteCarloResult {
    pub estimate: f64,
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
}

impl MonteCarloResult {
    /// Whether `value` lies within `k` standard errors of the estimate.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (self.estimate - value).abs() <= k * self.std_error
    }
}

/// `P(U_{n,j} <= s_j for all j) = n! V_n(s_1, s_2 - s_1, ...)`.
pub fn upper_band_prob(s: &[Rational]) -> Result<Rational> {
    check_simplex(s, "s")?;
    let mut prev = Rational::zero();
    let x: Vec<Rational> = s
        .iter()
        .map(|sj| {
            let d = sj - &prev;
            prev = sj.clone();
            d
        })
        .collect();
    scaled_volume_at(&x)
}

/// `P(U_{n,j} >= r_j for all j) = n! V_n(1 - r_n, r_n - r_{n-1}, ..., r_2 - r_1)`.
pub fn lower_band_prob(r: &[Rational]) -> Result<Rational> {
    check_simplex(r, "r")?;
    let n = r.len();
    let ext: Vec<Rational> = r.iter().cloned().chain([Rational::one()]).collect();
    // x_j = r_{n+2-j} - r_{n+1-j}, 1-based
    let x: Vec<Rational> = (1..=n).map(|j| &ext[n + 1 - j] - &ext[n - j]).collect();
    scaled_volume_at(&x)
}

/// General band by the determinant `n! det[ (s_i - r_j)_+^{j-i+1} / (j-i+1)! ]`.
pub fn band_prob(band: &BandSpec) -> Result<Rational> {
    let n = band.n();
    let m = Matrix::from_fn(n, n, |i, j| {
        if j + 1 < i {
            return Rational::zero();
        }
        let d = (j + 1 - i) as u32;
        let t = &band.s[i] - &band.r[j];
        let t = if t.is_negative() { Rational::zero() } else { t };
        pow(&t, d) * inv_factorial(d)
    });
    Ok(m.determinant()? * from_big(factorial(n as u32)))
}

/// `(P(N_1 + ... + N_i >= i for all i), P(N_1 + ... + N_i < i for all i))`
/// for `N` multinomial with `n = p.len() - 1` trials.
pub fn multinomial_ballot(p: &[Rational]) -> Result<(Rational, Rational)> {
    if p.len() < 2 {
        return Err(Error::Dimension("multinomial ballot needs at least two cells".into()));
    }
    if p.iter().any(Signed::is_negative) || p.iter().sum::<Rational>() != Rational::one() {
        return domain("cell probabilities must be nonnegative and sum to 1");
    }
    let n = p.len() - 1;
    let first = scaled_volume_at(&p[..n])?;
    let reversed: Vec<Rational> = p[1..].iter().rev().cloned().collect();
    Ok((first, scaled_volume_at(&reversed)?))
}

/// `n! V_n(1 - p, p/n, ..., p/n)` as a polynomial in `p`.
pub fn daniels_poly(n: usize) -> Result<Poly> {
    let p = Poly::var(1, 0);
    let one = Poly::one(1);
    let images: Vec<Poly> = (0..n)
        .map(|i| if i == 0 { &one - &p } else { p.scale(&Rational::new(BigInt::one(), BigInt::from(n))) })
        .collect();
    Ok(volume_poly(n)?.compose(&images)?.scale(&from_big(factorial(n as u32))))
}

fn pyke_check(n: usize, b: &Rational, x: &Rational) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptyInput("pyke formula needs n >= 1".into()));
    }
    let gap = b * int(n as i64) - x;
    if b.is_negative() || b > &Rational::one() || gap.is_negative() || gap > Rational::one() {
        return domain("need 0 <= b <= 1 and 0 <= n b - x <= 1");
    }
    Ok(())
}

/// Number of shifted terms: `⌊x/b⌋`, and 0 when `b = 0` or `x < 0`.
fn pyke_m(b: &Rational, x: &Rational) -> i64 {
    if b.is_zero() || x.is_negative() {
        return 0;
    }
    i64::try_from(floor(&(x / b))).expect("small quotient")
}

/// `(1 + x - n b) Σ_{j=0}^{⌊x/b⌋} C(n, j) (j b - x)^j (1 + x - j b)^{n-j-1}`.
pub fn pyke_formula(n: usize, b: &Rational, x: &Rational) -> Result<Rational> {
    pyke_check(n, b, x)?;
    let a = int(1) + x - b * int(n as i64);
    let m = pyke_m(b, x).min(n as i64);
    let mut sum = Rational::zero();
    for j in 0..=m {
        let jb = b * int(j);
        let c = from_big(binomial(&BigInt::from(n), j as u32));
        sum += c * powi(&(&jb - x), j) * powi(&(int(1) + x - &jb), n as i64 - j - 1);
    }
    Ok(a * sum)
}

/// The vector `x` with `n! V_n(x)` equal to the Pyke probability.
pub fn pyke_vector(n: usize, b: &Rational, x: &Rational) -> Result<Vec<Rational>> {
    pyke_check(n, b, x)?;
    let m = pyke_m(b, x) as usize;
    let mut v = vec![Rational::zero(); n];
    v[0] = int(1) + x - b * int(n as i64);
    if m >= n {
        return Ok(v);
    }
    for (i, vi) in v.iter_mut().enumerate().skip(1) {
        let i1 = i + 1;
        if i1 < n - m + 1 {
            *vi = b.clone();
        } else if i1 == n - m + 1 {
            *vi = b * int((n - i1 + 2) as i64) - x;
        }
    }
    Ok(v)
}

pub fn pyke_volume(n: usize, b: &Rational, x: &Rational) -> Result<Rational> {
    scaled_volume_at(&pyke_vector(n, b, x)?)
}

/// Frequency of `r_j <= U_{n,j} <= s_j` over `trials` sorted uniform samples.
pub fn mc_band(band: &BandSpec, trials: u64, seed: u64) -> Result<MonteCarloResult> {
    if trials == 0 {
        return domain("need at least one trial");
    }
    let r: Vec<f64> = band.r.iter().map(to_f64).collect();
    let s: Vec<f64> = band.s.iter().map(to_f64).collect();
    let mut g = rng(seed);
    let mut u = vec![0.0f64; band.n()];
    let mut hits = 0u64;
    for _ in 0..trials {
        for v in u.iter_mut() {
            *v = g.gen::<f64>();
        }
        u.sort_by(f64::total_cmp);
        if u.iter().zip(&r).zip(&s).all(|((v, lo), hi)| lo <= v && v <= hi) {
            hits += 1;
        }
    }
    let estimate = hits as f64 / trials as f64;
    let std_error = (estimate * (1.0 - estimate) / trials as f64).sqrt();
    Ok(MonteCarloResult { estimate, std_error, trials, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;
    use crate::volume::{special_ab, special_abc};
    use proptest::prelude::*;

    fn v(xs: &[(i64, i64)]) -> Vec<Rational> {
        xs.iter().map(|&(p, q)| rat(p, q)).collect()
    }

    #[test]
    fn trivial_bands() {
        assert_eq!(upper_band_prob(&vec![int(1); 4]).unwrap(), int(1));
        assert_eq!(upper_band_prob(&vec![int(0); 4]).unwrap(), int(0));
        assert_eq!(lower_band_prob(&vec![int(0); 4]).unwrap(), int(1));
        assert_eq!(upper_band_prob(&v(&[(1, 2), (1, 1)])).unwrap(), rat(3, 4));
        assert!(upper_band_prob(&v(&[(1, 2), (1, 3)])).is_err());
        assert!(lower_band_prob(&v(&[(3, 2)])).is_err());
    }

    #[test]
    fn determinant_agrees_with_one_sided_forms() {
        let s = v(&[(1, 5), (1, 2), (2, 3), (9, 10)]);
        assert_eq!(band_prob(&BandSpec::upper(s.clone()).unwrap()).unwrap(), upper_band_prob(&s).unwrap());
        let r = v(&[(0, 1), (1, 3), (1, 2), (3, 4)]);
        assert_eq!(band_prob(&BandSpec::lower(r.clone()).unwrap()).unwrap(), lower_band_prob(&r).unwrap());
    }

    #[test]
    fn two_sided_band_by_monte_carlo() {
        let band = BandSpec::new(v(&[(0, 1), (1, 5), (1, 3)]), v(&[(1, 2), (3, 4), (1, 1)])).unwrap();
        let exact = to_f64(&band_prob(&band).unwrap());
        let mc = mc_band(&band, 100_000, 17).unwrap();
        assert!(mc.agrees_with(exact, 3.0), "{mc:?} vs {exact}");
    }

    #[test]
    fn daniels_line() {
        for n in 1..=6 {
            assert_eq!(daniels_poly(n).unwrap(), Poly::univariate(&[int(1), int(-1)]));
            let p = rat(2, 7);
            let r: Vec<Rational> = (1..=n).map(|j| &p * int(j as i64) / int(n as i64)).collect();
            assert_eq!(lower_band_prob(&r).unwrap(), int(1) - &p);
        }
        let r: Vec<Rational> = (1..=5).map(|j| rat(3 * j, 50)).collect();
        let mc = mc_band(&BandSpec::lower(r).unwrap(), 100_000, 42).unwrap();
        assert!(mc.agrees_with(0.7, 3.0), "{mc:?}");
    }

    #[test]
    fn lower_band_by_monte_carlo() {
        let r = v(&[(0, 1), (1, 3), (1, 2)]);
        let exact = to_f64(&lower_band_prob(&r).unwrap());
        let mc = mc_band(&BandSpec::lower(r).unwrap(), 100_000, 3).unwrap();
        assert!(mc.agrees_with(exact, 3.0));
        let s = v(&[(1, 2), (1, 1)]);
        let mc = mc_band(&BandSpec::upper(s).unwrap(), 100_000, 4).unwrap();
        assert!(mc.agrees_with(0.75, 3.0));
        let full = mc_band(&BandSpec::upper(vec![int(1); 3]).unwrap(), 1000, 1).unwrap();
        assert_eq!(full.estimate, 1.0);
        assert_eq!(full.std_error, 0.0);
    }

    #[test]
    fn multinomial() {
        assert_eq!(multinomial_ballot(&[int(1), int(0), int(0), int(0)]).unwrap(), (int(1), int(0)));
        for n in 1..=5i64 {
            let q = rat(1, n + 1);
            let (first, _) = multinomial_ballot(&vec![q.clone(); n as usize + 1]).unwrap();
            assert_eq!(first, special_ab(n as usize, &q, &q).unwrap());
        }
        assert!(multinomial_ballot(&[rat(1, 2), rat(1, 3)]).is_err());
    }

    #[test]
    fn multinomial_by_enumeration() {
        let p = v(&[(1, 6), (1, 3), (1, 4), (1, 4)]);
        let n = 3;
        let (mut above, mut below) = (Rational::zero(), Rational::zero());
        for code in 0..4usize.pow(n as u32) {
            let outcome: Vec<usize> = (0..n).map(|t| code / 4usize.pow(t as u32) % 4).collect();
            let prob = outcome.iter().fold(Rational::one(), |acc, &c| acc * &p[c]);
            let mut counts = [0usize; 4];
            for &c in &outcome {
                counts[c] += 1;
            }
            let prefix: Vec<usize> = counts.iter().scan(0, |a, &c| {
                *a += c;
                Some(*a)
            }).collect();
            if (1..=n).all(|i| prefix[i - 1] >= i) {
                above += &prob;
            }
            if (1..=n).all(|i| prefix[i - 1] < i) {
                below += &prob;
            }
        }
        assert_eq!(multinomial_ballot(&p).unwrap(), (above, below));
    }

    #[test]
    fn pyke_special_cases() {
        // one term: a (a + n b)^{n-1}
        let (n, b, x) = (4, rat(1, 5), rat(1, 10));
        let a = int(1) + &x - &b * int(4);
        assert_eq!(pyke_formula(n, &b, &x).unwrap(), special_ab(n, &a, &b).unwrap());
        assert_eq!(pyke_volume(n, &b, &x).unwrap(), special_ab(n, &a, &b).unwrap());
        // two terms: the (a, b, c) evaluation with c = 2b - x
        let (b, x) = (rat(1, 5), rat(3, 10));
        let a = int(1) + &x - &b * int(4);
        let c = &b * int(2) - &x;
        assert_eq!(pyke_vector(4, &b, &x).unwrap(), vec![a.clone(), b.clone(), b.clone(), c.clone()]);
        assert_eq!(pyke_formula(4, &b, &x).unwrap(), special_abc(4, &a, &b, &c).unwrap());
        assert!(pyke_formula(3, &rat(1, 2), &int(0)).is_err());
        assert!(pyke_formula(3, &rat(3, 2), &int(4)).is_err());
    }

    proptest! {
        #[test]
        fn pyke_matches_volume(n in 1usize..=5, bnum in 1i64..=20, m in 0i64..=3, frac in 0i64..20) {
            let b = rat(bnum, 20 * n as i64);
            let x = &b * int(m) + &b * rat(frac, 20);
            prop_assume!(m < n as i64);
            prop_assume!(pyke_check(n, &b, &x).is_ok());
            prop_assert_eq!(pyke_formula(n, &b, &x).unwrap(), pyke_volume(n, &b, &x).unwrap());
        }

        #[test]
        fn widening_never_hurts(s in prop::collection::vec(0i64..=12, 3), bump in 0usize..3) {
            let mut s = s;
            s.sort();
            let sr: Vec<Rational> = s.iter().map(|&k| rat(k, 12)).collect();
            let mut wider = s.clone();
            for w in wider.iter_mut().skip(bump) {
                *w = (*w + 1).min(12);
            }
            let wr: Vec<Rational> = wider.iter().map(|&k| rat(k, 12)).collect();
            prop_assert!(upper_band_prob(&sr).unwrap() <= upper_band_prob(&wr).unwrap());
            let lower_narrow = lower_band_prob(&wr).unwrap();
            prop_assert!(lower_narrow <= lower_band_prob(&sr).unwrap());
        }
    }
}
