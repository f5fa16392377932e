//! Lattice-point counts of `Π_n(x)` and its relatives: the Ehrhart product,
//! bounded plane partitions, the matrix polytopes `Π_n^m`, Steck's count of
//! monotone integer sequences and the two-sided polytope `Π_n(z, x)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::ballot::enumerate_k;
use crate::error::{domain, resource, Error, Result};
use crate::exactmath::matrix::bareiss;
use crate::exactmath::rational::{from_big, powi};
use crate::exactmath::{
    binomial, factorial, hook_count_rectangular, int, interpolate, multichoose_i64,
    multichoose_poly, Poly, Rational,
};
use crate::volume::PolytopeSpec;

/// Work budget shared by the exhaustive scans.
pub const SCAN_LIMIT: u64 = 10_000_000;

/// A partition `λ`, stored as its weakly decreasing parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Shape {
    parts: Vec<u64>,
}

impl Shape {
    pub fn new(parts: Vec<u64>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return domain(format!("shape {parts:?} is not weakly decreasing"));
        }
        Ok(Shape { parts })
    }

    /// The reversed prefix-sum partition `ũ = (u_n, ..., u_1)` of an integer `x`.
    pub fn from_polytope(spec: &PolytopeSpec) -> Result<Self> {
        let x = spec.integer_x()?;
        let mut u: Vec<u64> = x
            .iter()
            .scan(0u64, |acc, &v| {
                *acc += v as u64;
                Some(*acc)
            })
            .collect();
        u.reverse();
        Shape::new(u)
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn cells(&self) -> u64 {
        self.parts.iter().sum()
    }
}

impl TryFrom<Vec<u64>> for Shape {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        Shape::new(v)
    }
}

impl From<Shape> for Vec<u64> {
    fn from(s: Shape) -> Vec<u64> {
        s.parts
    }
}

/// A filling of a shape that weakly decreases along rows and down columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanePartition {
    pub shape: Shape,
    pub entries: Vec<Vec<u64>>,
}

impl PlanePartition {
    pub fn new(shape: Shape, entries: Vec<Vec<u64>>) -> Result<Self> {
        if entries.len() != shape.parts.len()
            || entries.iter().zip(&shape.parts).any(|(row, &l)| row.len() as u64 != l)
        {
            return Err(Error::Dimension("entries do not fill the shape".into()));
        }
        for (i, row) in entries.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let left_ok = j == 0 || row[j - 1] >= v;
                let up_ok = i == 0 || entries[i - 1][j] >= v;
                if !left_ok || !up_ok {
                    return domain("entries must weakly decrease along rows and columns");
                }
            }
        }
        Ok(PlanePartition { shape, entries })
    }

    pub fn largest_part(&self) -> u64 {
        self.entries.iter().flatten().copied().max().unwrap_or(0)
    }
}

fn integer_x(spec: &PolytopeSpec) -> Result<Vec<u64>> {
    Ok(spec.integer_x()?.into_iter().map(|v| v as u64).collect())
}

fn prefix_sums(x: &[u64]) -> Vec<u64> {
    x.iter()
        .scan(0u64, |acc, &v| {
            *acc += v;
            Some(*acc)
        })
        .collect()
}

/// `N(Π_n(x)) = Σ_{k ∈ K_n} ((x_1+1 multichoose k_1)) Π_{i>=2} ((x_i multichoose k_i))`.
pub fn count_points(spec: &PolytopeSpec) -> Result<BigInt> {
    let x = spec.integer_x()?;
    let mut total = BigInt::zero();
    for k in enumerate_k(x.len())? {
        let mut term = multichoose_i64(x[0] + 1, k.parts()[0]);
        for (xi, &ki) in x.iter().zip(k.parts()).skip(1) {
            if term.is_zero() {
                break;
            }
            term *= multichoose_i64(*xi, ki);
        }
        total += term;
    }
    Ok(total)
}

/// Integer points of `Π_n(x)` by walking every admissible prefix.
pub fn count_points_brute(spec: &PolytopeSpec) -> Result<u64> {
    let x = integer_x(spec)?;
    let u = prefix_sums(&x);
    let boxed = u.iter().try_fold(1u64, |acc, &ui| acc.checked_mul(ui + 1));
    if boxed.is_none_or(|b| b > SCAN_LIMIT) {
        return resource(format!("brute-force scan over x = {x:?}"));
    }
    fn walk(u: &[u64], i: usize, sum: u64) -> u64 {
        if i == u.len() {
            return 1;
        }
        (sum..=u[i]).map(|s| walk(u, i + 1, s)).sum()
    }
    Ok(walk(&u, 0, 0))
}

/// Ehrhart polynomial of `Π_n(a, b, ..., b)` in the dilation variable `r`:
/// `(1/n!)(ra + 1) Π_{k=2}^{n} (r(a + nb) + k)`.
pub fn ehrhart_ab(n: usize, a: u64, b: u64) -> Result<Poly> {
    if n == 0 {
        return Err(Error::EmptyInput("ehrhart_ab needs n >= 1".into()));
    }
    let (a, b) = (int(a as i64), int(b as i64));
    let slope = &a + int(n as i64) * &b;
    let mut p = Poly::univariate(&[int(1), a]);
    for k in 2..=n {
        p = &p * &Poly::univariate(&[int(k as i64), slope.clone()]);
    }
    Ok(p.scale(&from_big(factorial(n as u32)).recip()))
}

/// Symbolic `N(Π_n(x))` as a polynomial in `x_1, ..., x_n`.
pub fn count_points_poly(n: usize) -> Result<Poly> {
    let mut total = Poly::zero(n);
    let shifted = &Poly::var(n, 0) + &Poly::one(n);
    for k in enumerate_k(n)? {
        let mut term = multichoose_poly(&shifted, k.parts()[0]);
        for (i, &ki) in k.parts().iter().enumerate().skip(1) {
            term = &term * &multichoose_poly(&Poly::var(n, i), ki);
        }
        total = &total + &term;
    }
    Ok(total)
}

/// Whether `N(Π_n(x_1 - 1, x_2, ..., x_n))` has only nonnegative coefficients.
pub fn shifted_nonneg_check(n: usize) -> Result<bool> {
    if n > 6 {
        return resource(format!("symbolic expansion for n = {n}"));
    }
    let p = count_points_poly(n)?;
    let mut images: Vec<Poly> = (0..n).map(|i| Poly::var(n, i)).collect();
    images[0] = &images[0] - &Poly::one(n);
    let shifted = p.compose(&images)?;
    let nonneg = shifted.terms().all(|(_, c)| !c.is_negative());
    Ok(nonneg)
}

/// Plane partitions of `shape` with every entry in `{1, ..., maxpart}`, by backtracking.
pub fn plane_partitions(shape: &Shape, maxpart: u64) -> Result<u64> {
    if shape.cells() > 64 {
        return resource(format!("plane partitions of a shape with {} cells", shape.cells()));
    }
    let parts: Vec<usize> = shape.parts.iter().map(|&p| p as usize).collect();
    let mut grid: Vec<Vec<u64>> = parts.iter().map(|&l| vec![0; l]).collect();
    let mut budget = SCAN_LIMIT;
    let count = fill(&parts, &mut grid, 0, 0, maxpart, &mut budget);
    if budget == 0 {
        return resource("plane partition enumeration exceeded the work budget");
    }
    Ok(count)
}

fn fill(parts: &[usize], grid: &mut [Vec<u64>], i: usize, j: usize, maxpart: u64, budget: &mut u64) -> u64 {
    if *budget == 0 {
        return 0;
    }
    *budget -= 1;
    if i == parts.len() {
        return 1;
    }
    if j == parts[i] {
        return fill(parts, grid, i + 1, 0, maxpart, budget);
    }
    let mut hi = maxpart;
    if j > 0 {
        hi = hi.min(grid[i][j - 1]);
    }
    if i > 0 {
        hi = hi.min(grid[i - 1][j]);
    }
    let mut total = 0;
    for v in 1..=hi {
        grid[i][j] = v;
        total += fill(parts, grid, i, j + 1, maxpart, budget);
    }
    total
}

/// Integer points of `Π_n^m(x)` by exhaustive scan: `n × m` matrices `y >= 0`
/// whose column partial sums `v_{ij} = y_{1j} + ... + y_{ij}` satisfy
/// `v_{i1} <= ... <= v_{im} <= u_i`.
pub fn count_points_nm(spec: &PolytopeSpec, m: usize) -> Result<u64> {
    if m == 0 {
        return domain("m must be at least 1");
    }
    if spec.n() * m > 9 {
        return resource(format!("scan of Π_n^m with n·m = {}", spec.n() * m));
    }
    let u = prefix_sums(&integer_x(spec)?);
    let mut budget = SCAN_LIMIT;
    let mut row = vec![0u64; m];
    let prev = vec![0u64; m];
    let count = scan_rows(&u, 0, &prev, &mut row, 0, &mut budget);
    if budget == 0 {
        return resource("Π_n^m scan exceeded the work budget");
    }
    Ok(count)
}

fn scan_rows(u: &[u64], i: usize, prev: &[u64], row: &mut Vec<u64>, j: usize, budget: &mut u64) -> u64 {
    if *budget == 0 {
        return 0;
    }
    *budget -= 1;
    if i == u.len() {
        return 1;
    }
    let m = prev.len();
    if j == m {
        let next = row.clone();
        let mut fresh = vec![0u64; m];
        return scan_rows(u, i + 1, &next, &mut fresh, 0, budget);
    }
    // v_{ij} >= v_{i-1,j} and v_{ij} >= v_{i,j-1}
    let lo = if j == 0 { prev[0] } else { prev[j].max(row[j - 1]) };
    let mut total = 0;
    for v in lo..=u[i] {
        row[j] = v;
        total += scan_rows(u, i, prev, row, j + 1, budget);
    }
    total
}

/// Integer points of `Π_n^m(x)` by dynamic programming over rows; each row
/// state is the nondecreasing vector `(v_{i1}, ..., v_{im})`.
pub fn count_points_nm_dp(spec: &PolytopeSpec, m: usize) -> Result<BigInt> {
    if m == 0 {
        return domain("m must be at least 1");
    }
    let u = prefix_sums(&integer_x(spec)?);
    let side = (*u.last().unwrap_or(&0) + 1) as usize;
    let cells = (side as u64).checked_pow(m as u32).filter(|&c| c <= 5 * SCAN_LIMIT);
    let Some(cells) = cells else {
        return resource(format!("Π_n^m table of side {side} in {m} dimensions"));
    };
    let cells = cells as usize;
    let mut f = vec![BigInt::zero(); cells];
    f[0] = BigInt::one();
    let mut coords = vec![0usize; m];
    for &ui in &u {
        // g(w) = Σ_{w' <= w} f(w'), one axis at a time
        let mut stride = 1;
        for _ in 0..m {
            for idx in 0..cells {
                if (idx / stride) % side > 0 {
                    let below = f[idx - stride].clone();
                    f[idx] += below;
                }
            }
            stride *= side;
        }
        for (idx, val) in f.iter_mut().enumerate() {
            let mut rest = idx;
            for c in coords.iter_mut() {
                *c = rest % side;
                rest /= side;
            }
            let ok = coords.windows(2).all(|w| w[0] <= w[1]) && coords[m - 1] as u64 <= ui;
            if !ok {
                val.set_zero();
            }
        }
    }
    Ok(f.into_iter().sum())
}

/// The matrix-polytope volume product in its printed form, divided by `(nm)!`:
/// `1!·2!···m!·f^{<m^n>}·(n+m)^{n-1}(n+m-1)^{n-2}···(n+1)^{n-m} / (nm)!`.
/// It does not involve `a` or `b` and equals the volume at `x = (1, ..., 1)`.
pub fn volume_nm_printed(n: usize, m: usize) -> Result<Rational> {
    volume_nm_formula(n, m, &int(1), &int(1))
}

/// Volume of `Π_n^m(a, b, ..., b)`:
/// `f^{<m^n>} Π_{j=1}^{m} [a(a+b)···(a+(j-1)b)] (a + (n+m-j) b)^{n-j} / (nm)!`.
/// At `a = b = 1` this is the printed product.
pub fn volume_nm_formula(n: usize, m: usize, a: &Rational, b: &Rational) -> Result<Rational> {
    if n == 0 || m == 0 {
        return domain("n and m must be at least 1");
    }
    if a.is_negative() || b.is_negative() {
        return domain("a and b must be nonnegative");
    }
    if a.is_zero() {
        return Ok(Rational::zero());
    }
    let mut value = from_big(hook_count_rectangular(m as u32, n as u32));
    for j in 1..=m {
        for i in 0..j {
            value *= a + int(i as i64) * b;
        }
        let base = a + int((n + m - j) as i64) * b;
        value *= powi(&base, n as i64 - j as i64);
    }
    Ok(value / from_big(factorial((n * m) as u32)))
}

/// Volume of `Π_n^m(x)` as the leading coefficient of the interpolated Ehrhart
/// polynomial `r ↦ N(Π_n^m(r x))`.
pub fn volume_nm_interpolated(x: &[u64], m: usize) -> Result<Rational> {
    let n = x.len();
    let deg = n * m;
    let mut points = Vec::with_capacity(deg + 1);
    for r in 0..=deg as u64 {
        let dilated: Vec<i64> = x.iter().map(|&v| (v * r) as i64).collect();
        let spec = PolytopeSpec::from_integers(&dilated)?;
        points.push((int(r as i64), from_big(count_points_nm_dp(&spec, m)?)));
    }
    let p = interpolate(&points)?;
    Ok(p.coeff(&[deg as u32]))
}

/// Steck's determinant `det[ 1(j-i+1 >= 0, c_i - b_j > 1) C(c_i - b_j + j - i - 1, j - i + 1) ]`.
pub fn steck_count(b: &[i64], c: &[i64]) -> Result<BigInt> {
    check_steck_input(b, c)?;
    let n = b.len();
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let gap = c[i] - b[j];
                    if j + 1 >= i && gap > 1 {
                        let d = (j + 1 - i) as i64;
                        binomial(&BigInt::from(gap + d - 2), d as u32)
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    Ok(bareiss(rows))
}

/// Number of integer tuples `j_1 < ... < j_n` with `b_i < j_i < c_i`, by scanning.
pub fn steck_count_brute(b: &[i64], c: &[i64]) -> Result<u64> {
    check_steck_input(b, c)?;
    fn walk(b: &[i64], c: &[i64], i: usize, last: i64, budget: &mut u64) -> u64 {
        if i == b.len() {
            return 1;
        }
        *budget = budget.saturating_sub(1);
        let lo = (b[i] + 1).max(last + 1);
        (lo..c[i]).map(|j| walk(b, c, i + 1, j, budget)).sum()
    }
    let mut budget = SCAN_LIMIT;
    let count = walk(b, c, 0, i64::MIN / 2, &mut budget);
    if budget == 0 {
        return resource("tuple scan exceeded the work budget");
    }
    Ok(count)
}

fn check_steck_input(b: &[i64], c: &[i64]) -> Result<()> {
    if b.len() != c.len() {
        return Err(Error::Dimension(format!("b has {} entries, c has {}", b.len(), c.len())));
    }
    if b.is_empty() {
        return Err(Error::EmptyInput("b and c must be nonempty".into()));
    }
    if b.windows(2).any(|w| w[0] > w[1]) || c.windows(2).any(|w| w[0] > w[1]) {
        return domain("b and c must be weakly increasing");
    }
    Ok(())
}

/// Data `(z, x)` of `Π_n(z, x) = { y >= 0 : v_i <= y_1 + ... + y_i <= u_i }`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoSidedSpec {
    z: Vec<Rational>,
    x: Vec<Rational>,
    v: Vec<Rational>,
    u: Vec<Rational>,
}

impl TwoSidedSpec {
    pub fn new(z: Vec<Rational>, x: Vec<Rational>) -> Result<Self> {
        if z.len() != x.len() {
            return Err(Error::Dimension(format!("z has {} entries, x has {}", z.len(), x.len())));
        }
        if x.is_empty() {
            return Err(Error::EmptyInput("two-sided polytope needs n >= 1".into()));
        }
        if z.iter().chain(&x).any(Signed::is_negative) {
            return domain("z and x must be nonnegative");
        }
        let sums = |w: &[Rational]| -> Vec<Rational> {
            w.iter()
                .scan(Rational::zero(), |acc, wi| {
                    *acc += wi;
                    Some(acc.clone())
                })
                .collect()
        };
        let (v, u) = (sums(&z), sums(&x));
        if v.iter().zip(&u).any(|(vi, ui)| vi > ui) {
            return domain("need v_i <= u_i for every i");
        }
        Ok(TwoSidedSpec { z, x, v, u })
    }

    pub fn from_integers(z: &[i64], x: &[i64]) -> Result<Self> {
        Self::new(z.iter().map(|&t| int(t)).collect(), x.iter().map(|&t| int(t)).collect())
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn z(&self) -> &[Rational] {
        &self.z
    }

    pub fn x(&self) -> &[Rational] {
        &self.x
    }

    pub fn v(&self) -> &[Rational] {
        &self.v
    }

    pub fn u(&self) -> &[Rational] {
        &self.u
    }

    fn integer_bounds(&self) -> Result<(Vec<i64>, Vec<i64>)> {
        let conv = |w: &[Rational]| -> Result<Vec<i64>> {
            w.iter()
                .map(|r| {
                    if !r.is_integer() {
                        return domain(format!("{r} is not an integer"));
                    }
                    r.to_integer().to_i64().ok_or_else(|| Error::Domain(format!("{r} too large")))
                })
                .collect()
        };
        Ok((conv(&self.v)?, conv(&self.u)?))
    }
}

/// `N(Π_n(z, x))` by walking all admissible prefix sums.
pub fn two_sided_count(spec: &TwoSidedSpec) -> Result<u64> {
    let (v, u) = spec.integer_bounds()?;
    let boxed = v
        .iter()
        .zip(&u)
        .try_fold(1u64, |acc, (vi, ui)| acc.checked_mul((ui - vi + 1) as u64));
    if boxed.is_none_or(|b| b > SCAN_LIMIT) {
        return resource("two-sided scan is too large");
    }
    fn walk(v: &[i64], u: &[i64], i: usize, sum: i64) -> u64 {
        if i == u.len() {
            return 1;
        }
        (sum.max(v[i])..=u[i]).map(|s| walk(v, u, i + 1, s)).sum()
    }
    Ok(walk(&v, &u, 0, 0))
}

/// The two closed forms for `N(Π_2(z, x))`.
pub fn two_sided_closed_form_n2(spec: &TwoSidedSpec) -> Result<BigInt> {
    if spec.n() != 2 {
        return Err(Error::Dimension(format!("closed form needs n = 2, got {}", spec.n())));
    }
    let to_i = |r: &Rational| -> Result<i64> {
        if !r.is_integer() {
            return domain(format!("{r} is not an integer"));
        }
        r.to_integer().to_i64().ok_or_else(|| Error::Domain(format!("{r} too large")))
    };
    let (z1, z2) = (to_i(&spec.z[0])?, to_i(&spec.z[1])?);
    let (x1, x2) = (to_i(&spec.x[0])?, to_i(&spec.x[1])?);
    if x1 >= z1 + z2 {
        let t = x1 - z1 - z2 + 1;
        let (bz2, bx2) = (BigInt::from(z2), BigInt::from(x2));
        Ok(multichoose_i64(t, 2)
            + multichoose_i64(t, 1) * &bx2
            + &bz2 * multichoose_i64(t, 1)
            + &bz2 * &bx2)
    } else {
        Ok(multichoose_i64(x1 - z1 + 1, 1) * multichoose_i64(x1 + x2 - z1 - z2 + 1, 1))
    }
}

/// One cell of the decomposition of `Π_n(z, x)`: a linear extension
/// `a_1 ... a_{3n}` of `3 × n`, read as a chain of values with `<` at descents.
/// Labels `1..=n` stand for `v_i`, `n+1..=2n` for `y_1 + ... + y_i` and
/// `2n+1..=3n` for `u_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoSidedCell {
    pub n: usize,
    pub order: Vec<usize>,
}

impl TwoSidedCell {
    /// Whether the relation between positions `k` and `k+1` is strict.
    pub fn strict(&self, k: usize) -> bool {
        self.order[k] > self.order[k + 1]
    }

    fn constant(&self, label: usize, v: &[i64], u: &[i64]) -> Option<i64> {
        let n = self.n;
        if label <= n {
            Some(v[label - 1])
        } else if label > 2 * n {
            Some(u[label - 2 * n - 1])
        } else {
            None
        }
    }

    /// Integer points of the cell: each run of partial sums between two constants
    /// `L` and `R` with `q` strict relations contributes `C(R - L - q + len, len)`.
    pub fn lattice_count(&self, spec: &TwoSidedSpec) -> Result<BigInt> {
        let (v, u) = spec.integer_bounds()?;
        let mut total = BigInt::one();
        let mut left = self.constant(self.order[0], &v, &u).expect("chain starts at v_1");
        let (mut free, mut strict) = (0i64, 0i64);
        for k in 1..self.order.len() {
            if self.strict(k - 1) {
                strict += 1;
            }
            match self.constant(self.order[k], &v, &u) {
                None => free += 1,
                Some(right) => {
                    let room = right - left - strict;
                    if room < 0 {
                        return Ok(BigInt::zero());
                    }
                    total *= binomial(&BigInt::from(room + free), free as u32);
                    left = right;
                    free = 0;
                    strict = 0;
                }
            }
        }
        Ok(total)
    }

    /// Whether the cell is empty as a real set, read off the constants alone.
    pub fn is_empty(&self, spec: &TwoSidedSpec) -> bool {
        let n = self.n;
        let value = |label: usize| -> Option<&Rational> {
            if label <= n {
                Some(&spec.v[label - 1])
            } else if label > 2 * n {
                Some(&spec.u[label - 2 * n - 1])
            } else {
                None
            }
        };
        let mut left = value(self.order[0]).expect("chain starts at v_1");
        let mut any_strict = false;
        for k in 1..self.order.len() {
            any_strict |= self.strict(k - 1);
            if let Some(right) = value(self.order[k]) {
                if right < left || (right == left && any_strict) {
                    return true;
                }
                left = right;
                any_strict = false;
            }
        }
        false
    }
}

impl fmt::Display for TwoSidedCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n;
        let name = |label: usize| -> String {
            if label <= n {
                format!("v{label}")
            } else if label > 2 * n {
                format!("u{}", label - 2 * n)
            } else {
                (1..=label - n).map(|i| format!("y{i}")).collect::<Vec<_>>().join("+")
            }
        };
        write!(f, "0 <= {}", name(self.order[0]))?;
        for k in 1..self.order.len() {
            let rel = if self.strict(k - 1) { "<" } else { "<=" };
            write!(f, " {rel} {}", name(self.order[k]))?;
        }
        Ok(())
    }
}

/// All cells for `n <= 4`, one per linear extension of `3 × n` in lexicographic order.
pub fn two_sided_cells(n: usize) -> Result<Vec<TwoSidedCell>> {
    if n == 0 {
        return Err(Error::EmptyInput("two-sided cells need n >= 1".into()));
    }
    if n > 4 {
        return resource(format!("linear extensions of 3 x {n}"));
    }
    // element (row r, column i) has label r*n + i + 1
    let mut cells = Vec::new();
    let mut taken = vec![0usize; 3];
    let mut order = Vec::with_capacity(3 * n);
    fn extend(n: usize, taken: &mut [usize], order: &mut Vec<usize>, out: &mut Vec<TwoSidedCell>) {
        if order.len() == 3 * n {
            out.push(TwoSidedCell { n, order: order.clone() });
            return;
        }
        for r in 0..3 {
            let i = taken[r];
            if i < n && (r == 0 || taken[r - 1] > i) {
                taken[r] += 1;
                order.push(r * n + i + 1);
                extend(n, taken, order, out);
                order.pop();
                taken[r] -= 1;
            }
        }
    }
    extend(n, &mut taken, &mut order, &mut cells);
    Ok(cells)
}

/// `N(Π_n(z, x))` as the sum of the cell counts.
pub fn two_sided_cell_sum(spec: &TwoSidedSpec) -> Result<BigInt> {
    let mut total = BigInt::zero();
    for cell in two_sided_cells(spec.n())? {
        total += cell.lattice_count(spec)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(x: &[i64]) -> PolytopeSpec {
        PolytopeSpec::from_integers(x).unwrap()
    }

    fn all_vectors(n: usize, max: i64) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|v| (0..=max).map(move |t| [v.clone(), vec![t]].concat()))
                .collect();
        }
        out
    }

    #[test]
    fn small_counts() {
        assert_eq!(count_points(&spec(&[0])).unwrap(), BigInt::from(1));
        assert_eq!(count_points(&spec(&[2, 1])).unwrap(), BigInt::from(9));
        assert_eq!(count_points(&spec(&[1, 1, 1])).unwrap(), BigInt::from(14));
        assert_eq!(count_points_brute(&spec(&[1])).unwrap(), 2);
        assert_eq!(count_points_brute(&spec(&[2, 1])).unwrap(), 9);
        assert_eq!(count_points(&spec(&[0, 0, 0])).unwrap(), BigInt::from(1));
    }

    #[test]
    fn formula_matches_scan() {
        for n in 1..=3 {
            for x in all_vectors(n, 4) {
                let s = spec(&x);
                assert_eq!(count_points(&s).unwrap(), BigInt::from(count_points_brute(&s).unwrap()), "{x:?}");
            }
        }
    }

    #[test]
    fn non_integer_x_rejected() {
        let s = PolytopeSpec::new(vec![crate::exactmath::rat(1, 2)]).unwrap();
        assert!(matches!(count_points(&s), Err(Error::Domain(_))));
    }

    #[test]
    fn brute_guard() {
        assert!(matches!(count_points_brute(&spec(&[50, 50, 50, 50, 50])), Err(Error::Resource(_))));
    }

    #[test]
    fn ehrhart_values() {
        assert_eq!(ehrhart_ab(3, 2, 1).unwrap().eval(&[int(0)]).unwrap(), int(1));
        assert_eq!(ehrhart_ab(2, 1, 1).unwrap().eval(&[int(1)]).unwrap(), int(5));
        assert_eq!(ehrhart_ab(3, 1, 1).unwrap().eval(&[int(1)]).unwrap(), int(14));
        for n in 1..=3usize {
            for (a, b) in [(0u64, 1u64), (1, 0), (2, 3), (3, 1)] {
                let e = ehrhart_ab(n, a, b).unwrap();
                for r in 0..=3i64 {
                    let mut x = vec![b as i64 * r; n];
                    x[0] = a as i64 * r;
                    let brute = count_points_brute(&spec(&x)).unwrap();
                    assert_eq!(e.eval(&[int(r)]).unwrap(), int(brute as i64), "n={n} a={a} b={b} r={r}");
                }
            }
        }
    }

    #[test]
    fn shifted_coefficients_nonnegative() {
        for n in 1..=4 {
            assert!(shifted_nonneg_check(n).unwrap(), "n = {n}");
        }
        assert_eq!(count_points_poly(1).unwrap(), Poly::univariate(&[int(1), int(1)]));
    }

    #[test]
    fn plane_partition_examples() {
        let s = Shape::new(vec![2, 1]).unwrap();
        assert_eq!(plane_partitions(&s, 2).unwrap(), 5);
        assert_eq!(plane_partitions(&Shape::new(vec![4, 2, 2]).unwrap(), 1).unwrap(), 1);
        let stair = Shape::from_polytope(&spec(&[1, 1, 1])).unwrap();
        assert_eq!(stair.parts(), &[3, 2, 1]);
        assert_eq!(plane_partitions(&stair, 2).unwrap(), 14);
        assert!(Shape::new(vec![1, 2]).is_err());
    }

    #[test]
    fn plane_partition_bijection_count() {
        for n in 1..=3 {
            for x in all_vectors(n, 3) {
                let s = spec(&x);
                let pp = plane_partitions(&Shape::from_polytope(&s).unwrap(), 2).unwrap();
                assert_eq!(BigInt::from(pp), count_points(&s).unwrap(), "{x:?}");
            }
        }
    }

    #[test]
    fn plane_partition_validation() {
        let s = Shape::new(vec![2, 1]).unwrap();
        assert!(PlanePartition::new(s.clone(), vec![vec![2, 1], vec![1]]).is_ok());
        assert!(PlanePartition::new(s.clone(), vec![vec![1, 2], vec![1]]).is_err());
        assert!(PlanePartition::new(s, vec![vec![1, 1]]).is_err());
    }

    #[test]
    fn matrix_polytope_counts() {
        for x in all_vectors(3, 2) {
            let s = spec(&x);
            assert_eq!(count_points_nm(&s, 1).unwrap(), count_points_brute(&s).unwrap());
        }
        let s = spec(&[1, 1]);
        assert_eq!(count_points_nm(&s, 2).unwrap(), plane_partitions(&Shape::new(vec![2, 1]).unwrap(), 3).unwrap());
        let s = spec(&[1, 0, 1]);
        let shape = Shape::from_polytope(&s).unwrap();
        assert_eq!(count_points_nm(&s, 2).unwrap(), plane_partitions(&shape, 3).unwrap());
    }

    #[test]
    fn matrix_polytope_dp_matches_scan() {
        for n in 1..=3 {
            for m in 1..=3 {
                if n * m > 9 {
                    continue;
                }
                for x in all_vectors(n, 2) {
                    let s = spec(&x);
                    assert_eq!(count_points_nm_dp(&s, m).unwrap(), BigInt::from(count_points_nm(&s, m).unwrap()));
                }
            }
        }
    }

    #[test]
    fn matrix_polytope_volume_formula() {
        for (n, m) in [(2, 2), (3, 2), (2, 3), (4, 2), (3, 3), (1, 3)] {
            for a in 0..=2i64 {
                for b in 0..=2i64 {
                    let mut x = vec![b as u64; n];
                    x[0] = a as u64;
                    let f = volume_nm_formula(n, m, &int(a), &int(b)).unwrap();
                    assert_eq!(f, volume_nm_interpolated(&x, m).unwrap(), "({n},{m}) a={a} b={b}");
                }
            }
        }
        for n in 1..=4 {
            let v = crate::volume::special_ab(n, &int(2), &int(1)).unwrap() / from_big(factorial(n as u32));
            assert_eq!(volume_nm_interpolated(&[2, 1, 1, 1][..n], 1).unwrap(), v);
            assert_eq!(volume_nm_formula(n, 1, &int(2), &int(1)).unwrap(), v);
        }
    }

    #[test]
    fn printed_volume_product() {
        // 4! V = 1!·2!·f^{<2^2>}·4 = 16 and 6! V = 1!·2!·5·5^2·4 = 1000
        assert_eq!(volume_nm_printed(2, 2).unwrap(), crate::exactmath::rat(16, 24));
        assert_eq!(volume_nm_printed(3, 2).unwrap(), crate::exactmath::rat(1000, 720));
        assert_eq!(volume_nm_printed(2, 3).unwrap(), volume_nm_interpolated(&[1, 1], 3).unwrap());
    }

    #[test]
    fn steck_examples() {
        assert_eq!(steck_count(&[0], &[3]).unwrap(), BigInt::from(2));
        assert_eq!(steck_count(&[0, 2, 3], &[1, 3, 4]).unwrap(), BigInt::zero());
        assert_eq!(steck_count_brute(&[0], &[3]).unwrap(), 2);
        assert!(steck_count(&[1, 0], &[3, 4]).is_err());
    }

    proptest! {
        #[test]
        fn steck_matches_scan(n in 1usize..=4, seed in prop::collection::vec((0i64..=6, 0i64..=6), 4)) {
            let mut b: Vec<i64> = seed.iter().take(n).map(|p| p.0).collect();
            let mut c: Vec<i64> = seed.iter().take(n).map(|p| p.1).collect();
            b.sort_unstable();
            c.sort_unstable();
            prop_assert_eq!(steck_count(&b, &c).unwrap(), BigInt::from(steck_count_brute(&b, &c).unwrap()));
        }

        #[test]
        fn cell_sum_matches_scan(n in 1usize..=3, z in prop::collection::vec(0i64..=3, 3), extra in prop::collection::vec(0i64..=3, 3)) {
            // choose x with u_i >= v_i
            let z = &z[..n];
            let mut x = Vec::new();
            let (mut v, mut u) = (0, 0);
            for i in 0..n {
                v += z[i];
                let xi = (v - u).max(0) + extra[i];
                u += xi;
                x.push(xi);
            }
            let s = TwoSidedSpec::from_integers(z, &x).unwrap();
            prop_assert_eq!(two_sided_cell_sum(&s).unwrap(), BigInt::from(two_sided_count(&s).unwrap()));
        }
    }

    #[test]
    fn two_sided_examples() {
        let zero = TwoSidedSpec::from_integers(&[0, 0, 0], &[1, 2, 1]).unwrap();
        assert_eq!(BigInt::from(two_sided_count(&zero).unwrap()), count_points(&spec(&[1, 2, 1])).unwrap());
        let a = TwoSidedSpec::from_integers(&[1, 1], &[3, 1]).unwrap();
        assert_eq!(two_sided_closed_form_n2(&a).unwrap(), BigInt::from(8));
        assert_eq!(two_sided_count(&a).unwrap(), 8);
        let b = TwoSidedSpec::from_integers(&[1, 1], &[1, 2]).unwrap();
        assert_eq!(two_sided_closed_form_n2(&b).unwrap(), BigInt::from(2));
        assert_eq!(two_sided_count(&b).unwrap(), 2);
        assert!(TwoSidedSpec::from_integers(&[2], &[1]).is_err());
    }

    #[test]
    fn two_sided_cell_listing() {
        let cells = two_sided_cells(2).unwrap();
        let orders: Vec<Vec<usize>> = cells.iter().map(|c| c.order.clone()).collect();
        assert_eq!(
            orders,
            vec![
                vec![1, 2, 3, 4, 5, 6],
                vec![1, 2, 3, 5, 4, 6],
                vec![1, 3, 2, 4, 5, 6],
                vec![1, 3, 2, 5, 4, 6],
                vec![1, 3, 5, 2, 4, 6],
            ]
        );
        assert_eq!(cells[1].to_string(), "0 <= v1 <= v2 <= y1 <= u1 < y1+y2 <= u2");
        let one = two_sided_cells(1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].to_string(), "0 <= v1 <= y1 <= u1");
        assert_eq!(two_sided_cells(3).unwrap().len(), 42);
    }

    #[test]
    fn empty_cells_follow_constants() {
        // x1 >= z1 + z2: only the last cell is empty
        let s = TwoSidedSpec::from_integers(&[1, 1], &[3, 1]).unwrap();
        let empty: Vec<bool> = two_sided_cells(2).unwrap().iter().map(|c| c.is_empty(&s)).collect();
        assert_eq!(empty, vec![false, false, false, false, true]);
        let s = TwoSidedSpec::from_integers(&[1, 1], &[1, 2]).unwrap();
        let empty: Vec<bool> = two_sided_cells(2).unwrap().iter().map(|c| c.is_empty(&s)).collect();
        assert_eq!(empty, vec![true, true, true, true, false]);
    }
}
