//! The volume polynomial of `Π_n(x)`: the ballot-sum expansion, the Steck
//! determinant, closed-form special evaluations and the `q`-specialization.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::ballot::enumerate_k;
use crate::error::{domain, resource, Error, Result};
use crate::exactmath::combin::inv_factorial;
use crate::exactmath::rational::{from_big, pow, powi};
use crate::exactmath::{binomial, factorial, int, Matrix, Poly, Rational};

/// The vector `x` defining `Π_n(x) = { y >= 0 : y_1 + ... + y_i <= x_1 + ... + x_i }`
/// together with its prefix sums `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeSpec {
    x: Vec<Rational>,
    u: Vec<Rational>,
}

impl PolytopeSpec {
    pub fn new(x: Vec<Rational>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::EmptyInput("polytope needs at least one coordinate".into()));
        }
        if x.iter().any(Signed::is_negative) {
            return domain("x must be componentwise nonnegative");
        }
        let mut u = Vec::with_capacity(x.len());
        let mut acc = Rational::zero();
        for xi in &x {
            acc += xi;
            u.push(acc.clone());
        }
        Ok(PolytopeSpec { x, u })
    }

    pub fn from_integers(x: &[i64]) -> Result<Self> {
        Self::new(x.iter().map(|&v| int(v)).collect())
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[Rational] {
        &self.x
    }

    /// Prefix sums `u_i = x_1 + ... + x_i`.
    pub fn u(&self) -> &[Rational] {
        &self.u
    }

    /// `x` as machine integers, for the lattice-point operations.
    pub fn integer_x(&self) -> Result<Vec<i64>> {
        self.x
            .iter()
            .map(|r| {
                if !r.is_integer() {
                    return domain(format!("x entry {r} is not an integer"));
                }
                i64::try_from(r.numer()).map_err(|_| Error::Domain(format!("x entry {r} too large")))
            })
            .collect()
    }

    /// Membership of `y` in the closed polytope.
    pub fn contains(&self, y: &[Rational]) -> bool {
        if y.len() != self.n() || y.iter().any(Signed::is_negative) {
            return false;
        }
        let mut acc = Rational::zero();
        for (yi, ui) in y.iter().zip(&self.u) {
            acc += yi;
            if &acc > ui {
                return false;
            }
        }
        true
    }
}

fn memo() -> &'static RwLock<HashMap<usize, Arc<Poly>>> {
    static TABLE: OnceLock<RwLock<HashMap<usize, Arc<Poly>>>> = OnceLock::new();
    TABLE.get_or_init(Default::default)
}

/// `V_n(x) = Σ_{k ∈ K_n} Π x_i^{k_i} / k_i!`, memoized per `n`.
pub fn volume_poly(n: usize) -> Result<Arc<Poly>> {
    if let Some(p) = memo().read().expect("volume memo poisoned").get(&n) {
        return Ok(Arc::clone(p));
    }
    let mut p = Poly::zero(n);
    for k in enumerate_k(n)? {
        let coeff = k.parts().iter().fold(Rational::one(), |acc, &ki| acc * inv_factorial(ki));
        p.add_term(k.parts().to_vec(), coeff);
    }
    let p = Arc::new(p);
    memo().write().expect("volume memo poisoned").entry(n).or_insert_with(|| Arc::clone(&p));
    Ok(p)
}

/// Evaluates `V_n` at a concrete vector.
pub fn volume_at(x: &[Rational]) -> Result<Rational> {
    volume_poly(x.len())?.eval(x)
}

/// `n! V_n(x)`.
pub fn scaled_volume_at(x: &[Rational]) -> Result<Rational> {
    Ok(volume_at(x)? * from_big(factorial(x.len() as u32)))
}

/// Symbolic Steck determinant `det[ 1(j-i+1 >= 0) u_i^{j-i+1} / (j-i+1)! ]`.
pub fn volume_steck(n: usize) -> Result<Poly> {
    if n == 0 {
        return Err(Error::EmptyInput("volume_steck needs n >= 1".into()));
    }
    let mut prefix = Vec::with_capacity(n);
    let mut acc = Poly::zero(n);
    for i in 0..n {
        acc = &acc + &Poly::var(n, i);
        prefix.push(acc.clone());
    }
    let m = Matrix::from_fn(n, n, |i, j| {
        if j + 1 >= i {
            let d = (j + 1 - i) as u32;
            prefix[i].pow(d).scale(&inv_factorial(d))
        } else {
            Poly::zero(n)
        }
    });
    m.determinant()
}

/// `a (a + n b)^{n-1}`, which equals `n! V_n(a, b, ..., b)`.
pub fn special_ab(n: usize, a: &Rational, b: &Rational) -> Result<Rational> {
    if n == 0 {
        return Err(Error::EmptyInput("special_ab needs n >= 1".into()));
    }
    let nb = int(n as i64) * b;
    Ok(a * pow(&(a + nb), n as u32 - 1))
}

/// `a (a + n b)^{n-1} + n a (c - b)(a + (n-1) b)^{n-2}`, equal to `n! V_n(a, b, ..., b, c)`.
pub fn special_abc(n: usize, a: &Rational, b: &Rational, c: &Rational) -> Result<Rational> {
    if n < 3 {
        return domain(format!("special_abc needs n >= 3, got {n}"));
    }
    let ni = int(n as i64);
    let first = special_ab(n, a, b)?;
    let second = &ni * a * (c - b) * pow(&(a + int(n as i64 - 1) * b), n as u32 - 2);
    Ok(first + second)
}

/// `a Σ_{j=0}^{m} C(n,j) (c - (m+1-j) b)^j (a + (n-j) b)^{n-j-1}`, equal to
/// `n! V_n(a, b (n-m-1 times), c, 0 (m-1 times))`.
pub fn special_abcm(n: usize, m: usize, a: &Rational, b: &Rational, c: &Rational) -> Result<Rational> {
    if n < 3 {
        return domain(format!("special_abcm needs n >= 3, got {n}"));
    }
    if m < 1 || m + 2 > n {
        return domain(format!("special_abcm needs 1 <= m <= n-2, got m={m}, n={n}"));
    }
    let mut sum = Rational::zero();
    for j in 0..=m {
        let coef = from_big(binomial(&BigInt::from(n), j as u32));
        let left = pow(&(c - int((m + 1 - j) as i64) * b), j as u32);
        let right = pow(&(a + int((n - j) as i64) * b), (n - j - 1) as u32);
        sum += coef * left * right;
    }
    Ok(a * sum)
}

/// Argument vector `(a, b, ..., b, c, 0, ..., 0)` matching [`special_abcm`].
pub fn abcm_vector(n: usize, m: usize, a: &Rational, b: &Rational, c: &Rational) -> Vec<Rational> {
    let mut v = vec![a.clone()];
    v.extend(std::iter::repeat_n(b.clone(), n - m - 1));
    v.push(c.clone());
    v.extend(std::iter::repeat_n(Rational::zero(), m - 1));
    v
}

/// `n! V_n(1, q, q^2, ..., q^{n-1})`.
pub fn q_specialization(n: usize, q: &Rational) -> Result<Rational> {
    if !q.is_positive() {
        return domain("q must be positive");
    }
    let x: Vec<Rational> = (0..n).map(|i| pow(q, i as u32)).collect();
    scaled_volume_at(&x)
}

/// Largest `n` accepted by [`inversion_oracle`].
pub const INVERSION_ORACLE_MAX_N: usize = 6;

/// Inversion enumerator `I_n(q)` of labeled trees on `{0, ..., n}` rooted at 0,
/// by enumerating every tree through its Prüfer sequence. An inversion is a
/// pair `i < j` with `j` on the path from the root to `i`.
pub fn inversion_oracle(n: usize) -> Result<Poly> {
    if n == 0 {
        return Err(Error::EmptyInput("inversion enumerator needs n >= 1".into()));
    }
    if n > INVERSION_ORACLE_MAX_N {
        return resource(format!("labeled-tree enumeration for n = {n}"));
    }
    let vertices = n + 1;
    let len = vertices - 2;
    let mut counts = vec![0u64; n * (n - 1) / 2 + 1];
    let mut seq = vec![0usize; len];
    loop {
        let parent = rooted_parents(&prufer_edges(&seq, vertices), vertices);
        let mut inv = 0;
        for i in 1..vertices {
            let mut v = parent[i];
            while v != 0 {
                if v > i {
                    inv += 1;
                }
                v = parent[v];
            }
        }
        counts[inv] += 1;
        // next sequence in base `vertices`
        let mut pos = 0;
        loop {
            if pos == len {
                let coeffs: Vec<Rational> = counts.iter().map(|&c| int(c as i64)).collect();
                return Ok(Poly::univariate(&coeffs));
            }
            seq[pos] += 1;
            if seq[pos] < vertices {
                break;
            }
            seq[pos] = 0;
            pos += 1;
        }
    }
}

fn prufer_edges(seq: &[usize], vertices: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; vertices];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(vertices - 1);
    for &s in seq {
        let leaf = (0..vertices).find(|&v| degree[v] == 1).expect("a leaf always exists");
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..vertices).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

fn rooted_parents(edges: &[(usize, usize)], vertices: usize) -> Vec<usize> {
    let mut adj = vec![Vec::new(); vertices];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut parent = vec![usize::MAX; vertices];
    parent[0] = 0;
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if parent[w] == usize::MAX {
                parent[w] = v;
                stack.push(w);
            }
        }
    }
    parent
}

/// `q^{C(n,2)} I_n(1/q)`, the right side of the Kreweras identity.
pub fn kreweras_side(n: usize, q: &Rational) -> Result<Rational> {
    let inv = inversion_oracle(n)?;
    let at = inv.eval(&[q.recip()])?;
    Ok(powi(q, (n * (n - 1) / 2) as i64) * at)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    fn xs(n: usize) -> Vec<Poly> {
        (0..n).map(|i| Poly::var(n, i)).collect()
    }

    #[test]
    fn first_volume_polynomials() {
        let x = xs(1);
        assert_eq!(*volume_poly(1).unwrap(), x[0]);

        let x = xs(2);
        let v2 = &(&x[0] * &x[1]) + &x[0].pow(2).scale(&rat(1, 2));
        assert_eq!(*volume_poly(2).unwrap(), v2);

        let x = xs(3);
        let h = rat(1, 2);
        let v3 = [
            &(&x[0] * &x[1]) * &x[2],
            (&x[0].pow(2) * &x[1]).scale(&h),
            (&x[0] * &x[1].pow(2)).scale(&h),
            (&x[0].pow(2) * &x[2]).scale(&h),
            x[0].pow(3).scale(&rat(1, 6)),
        ]
        .into_iter()
        .fold(Poly::zero(3), |a, b| &a + &b);
        assert_eq!(*volume_poly(3).unwrap(), v3);
        assert_eq!(volume_poly(3).unwrap().eval(&[int(1), int(1), int(1)]).unwrap(), rat(8, 3));
    }

    #[test]
    fn steck_agrees_with_ballot_sum() {
        for n in 1..=6 {
            assert_eq!(volume_steck(n).unwrap(), *volume_poly(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn homogeneous_with_catalan_many_positive_terms() {
        for n in 1..=7 {
            let v = volume_poly(n).unwrap();
            assert!(v.is_homogeneous());
            assert_eq!(v.degree(), Some(n as u32));
            assert_eq!(BigInt::from(v.num_terms()), crate::ballot::catalan(n as u32));
            assert!(v.terms().all(|(_, c)| c.is_positive()));
        }
    }

    #[test]
    fn all_ones_gives_tree_count() {
        for n in 1..=7usize {
            let ones = vec![int(1); n];
            let expected = BigInt::from(n + 1).pow(n as u32 - 1);
            assert_eq!(scaled_volume_at(&ones).unwrap(), from_big(expected));
        }
    }

    #[test]
    fn degenerate_first_coordinate() {
        assert_eq!(volume_at(&[int(0), int(2), int(3)]).unwrap(), int(0));
    }

    #[test]
    fn special_evaluations() {
        assert_eq!(special_ab(3, &int(1), &int(1)).unwrap(), int(16));
        for n in 1..6 {
            assert_eq!(special_ab(n, &int(1), &int(0)).unwrap(), int(1));
        }
        assert_eq!(special_abc(3, &int(1), &int(1), &int(0)).unwrap(), int(7));
        assert_eq!(special_abc(4, &rat(2, 3), &int(5), &int(5)).unwrap(), special_ab(4, &rat(2, 3), &int(5)).unwrap());
        assert!(special_abc(2, &int(1), &int(1), &int(1)).is_err());
        assert!(special_abcm(5, 4, &int(1), &int(1), &int(1)).is_err());
        assert!(special_abcm(5, 0, &int(1), &int(1), &int(1)).is_err());
    }

    #[test]
    fn abcm_with_m_one_is_abc() {
        for n in 3..=6 {
            let (a, b, c) = (rat(3, 7), rat(1, 5), rat(9, 4));
            assert_eq!(abcm_vector(n, 1, &a, &b, &c).len(), n);
            assert_eq!(special_abcm(n, 1, &a, &b, &c).unwrap(), special_abc(n, &a, &b, &c).unwrap());
        }
    }

    #[test]
    fn q_specialization_small() {
        for n in 1..=5usize {
            let expected = from_big(BigInt::from(n + 1).pow(n as u32 - 1));
            assert_eq!(q_specialization(n, &int(1)).unwrap(), expected);
        }
        assert_eq!(q_specialization(2, &int(2)).unwrap(), int(5));
        assert!(q_specialization(2, &int(0)).is_err());
    }

    #[test]
    fn inversion_enumerators() {
        assert_eq!(inversion_oracle(1).unwrap(), Poly::one(1));
        assert_eq!(inversion_oracle(2).unwrap(), Poly::univariate(&[int(2), int(1)]));
        for n in 1..=5usize {
            let total = inversion_oracle(n).unwrap().eval(&[int(1)]).unwrap();
            assert_eq!(total, from_big(BigInt::from(n + 1).pow(n as u32 - 1)));
        }
        assert!(matches!(inversion_oracle(7), Err(Error::Resource(_))));
    }

    #[test]
    fn kreweras_identity_at_three() {
        for q in [rat(1, 2), int(2), rat(5, 3), int(7), rat(2, 9)] {
            assert_eq!(q_specialization(3, &q).unwrap(), kreweras_side(3, &q).unwrap());
        }
    }

    #[test]
    fn spec_validation() {
        assert!(PolytopeSpec::new(vec![int(1), int(-1)]).is_err());
        assert!(PolytopeSpec::new(vec![]).is_err());
        let s = PolytopeSpec::from_integers(&[1, 2, 3]).unwrap();
        assert_eq!(s.u(), &[int(1), int(3), int(6)]);
        assert!(s.contains(&[int(1), int(2), int(3)]));
        assert!(!s.contains(&[int(2), int(0), int(0)]));
        assert!(PolytopeSpec::new(vec![rat(1, 2)]).unwrap().integer_x().is_err());
    }
}
