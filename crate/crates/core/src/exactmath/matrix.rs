use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::Poly;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

pub type RationalMatrix = Matrix<Rational>;
pub type PolyMatrix = Matrix<Poly>;

impl<T: Clone> Matrix<T> {
    pub fn new(rows: usize, cols: usize, entries: Vec<T>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.cols + j]
    }

    fn require_square(&self) -> Result<()> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!(
                "determinant of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(())
    }
}

impl RationalMatrix {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn mul(&self, rhs: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension("inner dimensions differ".into()));
        }
        Ok(Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(Rational::zero(), |acc, k| acc + self.get(i, k) * rhs.get(k, j))
        }))
    }

    /// Exact determinant: rows are scaled to integers and the integer matrix is
    /// reduced with fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<Rational> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(Rational::one());
        }
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let row = &self.entries[i * n..(i + 1) * n];
            let l = row.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
            a.push(row.iter().map(|r| r.numer() * (&l / r.denom())).collect());
            scale *= l;
        }
        Ok(Rational::new(bareiss(a), scale))
    }
}

/// Fraction-free Gaussian elimination; every division is exact.
pub fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

impl PolyMatrix {
    /// Exact symbolic determinant by expansion over row prefixes
    /// (`O(n 2^n)` ring operations, no division).
    pub fn determinant(&self) -> Result<Poly> {
        self.require_square()?;
        let n = self.rows;
        let nvars = self.entries.first().map_or(0, Poly::nvars);
        if n == 0 {
            return Ok(Poly::one(nvars));
        }
        if n > 20 {
            return Err(Error::Resource(format!("symbolic determinant of size {n}")));
        }
        // minors[mask]: signed sum over bijections of the first |mask| rows onto `mask`.
        let mut minors: Vec<Option<Poly>> = vec![None; 1 << n];
        minors[0] = Some(Poly::one(nvars));
        for mask in 0usize..(1 << n) {
            let Some(acc) = minors[mask].take() else { continue };
            let row = mask.count_ones() as usize;
            if row == n {
                minors[mask] = Some(acc);
                continue;
            }
            for c in 0..n {
                if mask & (1 << c) != 0 || self.get(row, c).is_zero() {
                    continue;
                }
                let above = (mask >> (c + 1)).count_ones();
                let mut term = &acc * self.get(row, c);
                if above % 2 == 1 {
                    term = -term;
                }
                let slot = &mut minors[mask | (1 << c)];
                *slot = Some(match slot.take() {
                    Some(p) => &p + &term,
                    None => term,
                });
            }
        }
        Ok(minors[(1 << n) - 1].take().unwrap_or_else(|| Poly::zero(nvars)))
    }
}

/// Sign of the determinant of a small integer matrix, for orientation tests.
pub fn integer_determinant(rows: &[Vec<i64>]) -> BigInt {
    let a = rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    bareiss(a)
}

/// Kernel basis of a rational matrix given as rows (reduced row echelon form).
pub fn kernel(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[i][f].clone();
            }
            v
        })
        .collect()
}

/// Solves the square system `a x = b` exactly; `None` when singular.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> =
        a.iter().zip(b).map(|(row, bi)| row.iter().cloned().chain([bi.clone()]).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for v in m[c].iter_mut() {
            *v *= &inv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=n {
                    let d = &f * &m[c][j];
                    m[i][j] -= d;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Scales a rational vector to the primitive integer vector on the same ray.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = v.iter().map(|r| r.numer() * (&l / r.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g.abs()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::{int, rat};

    #[test]
    fn identity_has_unit_determinant() {
        assert_eq!(RationalMatrix::identity(3).determinant().unwrap(), int(1));
    }

    #[test]
    fn two_by_two() {
        let m = Matrix::new(2, 2, vec![int(2), int(3), int(1), int(4)]).unwrap();
        assert_eq!(m.determinant().unwrap(), int(5));
    }

    #[test]
    fn steck_matrix_for_two() {
        // u = (1, 3): [[u1, u1^2/2], [1, u2]]
        let m = Matrix::new(2, 2, vec![int(1), rat(1, 2), int(1), int(3)]).unwrap();
        assert_eq!(m.determinant().unwrap(), rat(5, 2));
    }

    #[test]
    fn non_square_is_rejected() {
        let m = Matrix::new(1, 2, vec![int(1), int(2)]).unwrap();
        assert!(matches!(m.determinant(), Err(Error::Dimension(_))));
        assert!(Matrix::new(2, 2, vec![int(1)]).is_err());
    }

    #[test]
    fn pivoting_needed() {
        let m = Matrix::new(3, 3, vec![
            int(0), int(1), int(2),
            int(1), int(0), int(3),
            int(4), int(-3), int(8),
        ])
        .unwrap();
        // cofactor expansion by hand: 0*(0+9) - 1*(8-12) + 2*(-3-0) = 4 - 6
        assert_eq!(m.determinant().unwrap(), int(-2));
    }

    #[test]
    fn symbolic_two_by_two() {
        let a = Poly::var(4, 0);
        let b = Poly::var(4, 1);
        let c = Poly::var(4, 2);
        let d = Poly::var(4, 3);
        let m = Matrix::new(2, 2, vec![a.clone(), b.clone(), c.clone(), d.clone()]).unwrap();
        assert_eq!(m.determinant().unwrap(), &(&a * &d) - &(&b * &c));
    }

    #[test]
    fn kernel_of_plane() {
        let k = kernel(&[vec![int(1), int(1), int(0)]], 3);
        assert_eq!(k.len(), 2);
        for v in k {
            assert_eq!(&v[0] + &v[1], int(0));
        }
    }

    #[test]
    fn primitive_vector() {
        let v = primitive_integer_vector(&[rat(1, 2), rat(-3, 2), int(0)]);
        assert_eq!(v, vec![BigInt::from(1), BigInt::from(-3), BigInt::from(0)]);
    }
}
