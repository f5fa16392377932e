//! The complete fan `F_n` in the coordinates `y_2..y_n`, its rays and the
//! matching triangulations of the `(n+2)`-gon.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{enumerate_trees, Node, PlaneBinaryTree};
use crate::error::{domain, Result};
use crate::exactmath::matrix::{kernel, primitive_integer_vector};
use crate::exactmath::{fmt_rational, int, Rational};
use crate::volume::PolytopeSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sense {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

/// `y_lo + ... + y_hi <= 0` or `>= 0`; in polytope form every `y_h` reads `y_h - x_h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SignedIntervalInequality {
    pub lo: usize,
    pub hi: usize,
    pub sense: Sense,
}

impl SignedIntervalInequality {
    /// `y_lo + ... + y_hi` for a full point `y_1..y_n`.
    pub fn interval_sum(&self, y: &[Rational]) -> Rational {
        y[self.lo - 1..self.hi].iter().sum()
    }

    /// Signed slack: positive means strictly satisfied.
    fn slack(&self, sum: Rational) -> Rational {
        match self.sense {
            Sense::Le => -sum,
            Sense::Ge => sum,
        }
    }

    /// Slack at a fan point given in coordinates `y_2..y_n`.
    pub fn fan_slack(&self, point: &[Rational]) -> Rational {
        self.slack(point[self.lo - 2..self.hi - 1].iter().sum())
    }

    /// Slack of the translated inequality `Σ (y_h - x_h)` at `y`.
    pub fn polytope_slack(&self, spec: &PolytopeSpec, y: &[Rational]) -> Rational {
        let xs: Rational = spec.x()[self.lo - 1..self.hi].iter().sum();
        self.slack(self.interval_sum(y) - xs)
    }

    /// Polytope form with the `x` values substituted, e.g. `y2+y3 >= 4`.
    pub fn polytope_text(&self, spec: &PolytopeSpec) -> String {
        let xs: Rational = spec.x()[self.lo - 1..self.hi].iter().sum();
        format!("{} {} {}", self.lhs(), self.op(), fmt_rational(&xs))
    }

    fn lhs(&self) -> String {
        (self.lo..=self.hi).map(|h| format!("y{h}")).collect::<Vec<_>>().join("+")
    }

    fn op(&self) -> &'static str {
        match self.sense {
            Sense::Le => "<=",
            Sense::Ge => ">=",
        }
    }
}

impl fmt::Display for SignedIntervalInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} 0", self.lhs(), self.op())
    }
}

/// One inequality per parent/child pair: a right child `c` of `p` gives
/// `y_{p+1}+...+y_c <= 0`, a left child gives `y_{c+1}+...+y_p >= 0`.
pub fn fan_inequalities(t: &PlaneBinaryTree) -> Vec<SignedIntervalInequality> {
    t.covers()
        .into_iter()
        .map(|(p, c)| {
            if p < c {
                SignedIntervalInequality { lo: p + 1, hi: c, sense: Sense::Le }
            } else {
                SignedIntervalInequality { lo: c + 1, hi: p, sense: Sense::Ge }
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FanLocation {
    Chamber(PlaneBinaryTree),
    Boundary,
}

/// The chamber whose interior holds `point = (y_2, ..., y_n)`.
///
/// With `h_1 = 0` and `h_k = -(y_2 + ... + y_k)` the chamber inequalities say
/// that children sit weakly above parents, so the candidate is the min-heap
/// tree of `h` in label order.
pub fn locate_in_fan(point: &[Rational], n: usize) -> Result<FanLocation> {
    if n == 0 || point.len() + 1 != n {
        return Err(crate::Error::Dimension(format!("fan point of length {} for n = {n}", point.len())));
    }
    let mut h = vec![Rational::zero()];
    for p in point {
        let next = h.last().expect("nonempty") - p;
        h.push(next);
    }
    fn build(h: &[Rational]) -> Node {
        if h.is_empty() {
            return Node::Leaf;
        }
        let mut m = 0;
        for i in 1..h.len() {
            if h[i] < h[m] {
                m = i;
            }
        }
        Node::internal(build(&h[..m]), build(&h[m + 1..]))
    }
    let t = PlaneBinaryTree::from_shape(build(&h));
    if fan_inequalities(&t).iter().all(|q| q.fan_slack(point).is_positive()) {
        Ok(FanLocation::Chamber(t))
    } else {
        Ok(FanLocation::Boundary)
    }
}

/// Noncrossing diagonals of a convex polygon with vertices `0..n_gon`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PolygonDecomposition {
    pub n_gon: usize,
    pub diagonals: BTreeSet<(usize, usize)>,
}

fn crosses(a: (usize, usize), b: (usize, usize)) -> bool {
    (a.0 < b.0 && b.0 < a.1 && a.1 < b.1) || (b.0 < a.0 && a.0 < b.1 && b.1 < a.1)
}

impl PolygonDecomposition {
    pub fn new(n_gon: usize, diagonals: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n_gon < 3 {
            return domain(format!("a polygon needs 3 vertices, got {n_gon}"));
        }
        let mut set = BTreeSet::new();
        for (a, b) in diagonals {
            let (a, b) = (a.min(b), a.max(b));
            if b >= n_gon || b - a < 2 || (a == 0 && b == n_gon - 1) {
                return domain(format!("({a},{b}) is not a diagonal of the {n_gon}-gon"));
            }
            set.insert((a, b));
        }
        for &d in &set {
            if set.iter().any(|&e| crosses(d, e)) {
                return domain(format!("diagonal {d:?} crosses another"));
            }
        }
        Ok(PolygonDecomposition { n_gon, diagonals: set })
    }

    pub fn is_triangulation(&self) -> bool {
        self.diagonals.len() + 3 == self.n_gon
    }
}

/// The triangulation of the `(n+2)`-gon with root edge `(0, n+1)`: the
/// vertex with subtree labels `lo..hi` is the triangle `(lo-1, label, hi+1)`.
pub fn tree_triangulation(t: &PlaneBinaryTree) -> PolygonDecomposition {
    let diagonals = (1..=t.n())
        .filter(|&i| i != t.root())
        .map(|i| {
            let (lo, hi) = t.subtree_range(i);
            (lo - 1, hi + 1)
        })
        .collect();
    PolygonDecomposition { n_gon: t.n() + 2, diagonals }
}

pub fn tree_of_triangulation(d: &PolygonDecomposition) -> Result<PlaneBinaryTree> {
    let d = PolygonDecomposition::new(d.n_gon, d.diagonals.iter().copied())?;
    if !d.is_triangulation() {
        return domain(format!("{} diagonals do not triangulate a {}-gon", d.diagonals.len(), d.n_gon));
    }
    let edge = |a: usize, b: usize| b == a + 1 || d.diagonals.contains(&(a, b));
    fn build(lo: usize, hi: usize, edge: &dyn Fn(usize, usize) -> bool) -> Result<Node> {
        if hi - lo < 2 {
            return Ok(Node::Leaf);
        }
        match (lo + 1..hi).find(|&k| edge(lo, k) && edge(k, hi)) {
            Some(k) => Ok(Node::internal(build(lo, k, edge)?, build(k, hi, edge)?)),
            None => domain(format!("no triangle on edge ({lo},{hi})")),
        }
    }
    Ok(PlaneBinaryTree::from_shape(build(0, d.n_gon - 1, &edge)?))
}

/// Ray generator `p_D` of the diagonal `(i, j)` in coordinates `y_2..y_n`.
pub fn p_d(i: usize, j: usize, n: usize) -> Vec<i64> {
    let mut v = vec![0i64; n - 1];
    if i > 0 && i < n {
        v[i - 1] = -1;
    }
    if j <= n {
        v[j - 2] += 1;
    }
    v
}

/// Primitive generators of the extreme rays of the chamber of `t`, sorted.
pub fn chamber_rays(t: &PlaneBinaryTree) -> Result<Vec<Vec<i64>>> {
    let n = t.n();
    if n < 2 {
        return domain("the fan needs n >= 2");
    }
    let ineqs = fan_inequalities(t);
    let rows: Vec<Vec<Rational>> = ineqs
        .iter()
        .map(|q| (2..=n).map(|k| if q.lo <= k && k <= q.hi { int(1) } else { int(0) }).collect())
        .collect();
    let mut rays = Vec::with_capacity(n - 1);
    for (r, q) in ineqs.iter().enumerate() {
        let others: Vec<Vec<Rational>> =
            rows.iter().enumerate().filter(|&(i, _)| i != r).map(|(_, row)| row.clone()).collect();
        let ker = kernel(&others, n - 1);
        if ker.len() != 1 {
            return domain(format!("chamber of {t} is not simplicial"));
        }
        let mut v = ker.into_iter().next().expect("one kernel vector");
        if !q.fan_slack(&v).is_positive() {
            v = v.into_iter().map(|c| -c).collect();
        }
        rays.push(primitive_integer_vector(&v).iter().map(|c| c.to_i64().expect("small ray")).collect());
    }
    rays.sort();
    Ok(rays)
}

/// The `{0,1}` "less or equal" matrix of a finite poset.
type Leq = Vec<Vec<bool>>;

fn subset_poset(masks: &[u64]) -> Leq {
    // one extra element on top
    let m = masks.len();
    let mut leq = vec![vec![false; m + 1]; m + 1];
    for i in 0..m {
        for j in 0..m {
            leq[i][j] = masks[i] & !masks[j] == 0;
        }
        leq[i][m] = true;
    }
    leq[m][m] = true;
    leq
}

fn isomorphic(a: &Leq, b: &Leq) -> bool {
    let n = a.len();
    if b.len() != n {
        return false;
    }
    let sig = |p: &Leq, i: usize| {
        let below = (0..n).filter(|&j| p[j][i]).count();
        let above = (0..n).filter(|&j| p[i][j]).count();
        (below, above)
    };
    let sa: Vec<_> = (0..n).map(|i| sig(a, i)).collect();
    let sb: Vec<_> = (0..n).map(|i| sig(b, i)).collect();
    let mut ca = sa.clone();
    let mut cb = sb.clone();
    ca.sort();
    cb.sort();
    if ca != cb {
        return false;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| sa[i]);
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(
        depth: usize,
        order: &[usize],
        a: &Leq,
        b: &Leq,
        sa: &[(usize, usize)],
        sb: &[(usize, usize)],
        image: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let e = order[depth];
        for c in 0..b.len() {
            if used[c] || sb[c] != sa[e] {
                continue;
            }
            let consistent = order[..depth].iter().all(|&p| a[p][e] == b[image[p]][c] && a[e][p] == b[c][image[p]]);
            if !consistent {
                continue;
            }
            image[e] = c;
            used[c] = true;
            if extend(depth + 1, order, a, b, sa, sb, image, used) {
                return true;
            }
            used[c] = false;
        }
        false
    }
    extend(0, &order, a, b, &sa, &sb, &mut image, &mut used)
}

fn fan_faces(n: usize) -> Result<(usize, usize, Vec<u64>)> {
    let trees = enumerate_trees(n)?;
    let mut ids: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    let mut faces = BTreeSet::new();
    for t in &trees {
        let mut mask = 0u64;
        for r in chamber_rays(t)? {
            let next = ids.len();
            mask |= 1 << *ids.entry(r).or_insert(next);
        }
        // every subset of a simplicial chamber's rays spans a face
        let mut sub = mask;
        loop {
            faces.insert(sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & mask;
        }
    }
    Ok((trees.len(), ids.len(), faces.into_iter().collect()))
}

fn noncrossing_sets(n_gon: usize) -> Vec<u64> {
    let diags: Vec<(usize, usize)> =
        (0..n_gon).flat_map(|a| (a + 2..n_gon).map(move |b| (a, b))).filter(|&(a, b)| !(a == 0 && b == n_gon - 1)).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1 << diags.len()) {
        let chosen: Vec<_> = (0..diags.len()).filter(|&i| mask >> i & 1 == 1).map(|i| diags[i]).collect();
        if chosen.iter().all(|&d| chosen.iter().all(|&e| !crosses(d, e))) {
            out.push(mask);
        }
    }
    out
}

/// `(chambers, rays, faces)` of `F_n`, faces counting the origin.
pub fn fan_face_counts(n: usize) -> Result<(usize, usize, usize)> {
    if n < 2 {
        return domain("the fan needs n >= 2");
    }
    let (c, r, f) = fan_faces(n)?;
    Ok((c, r, f.len()))
}

/// Whether the face poset of `F_n` with a top adjoined is isomorphic to the
/// poset of noncrossing diagonal sets of the `(n+2)`-gon with a top adjoined.
pub fn assoc_face_poset_check(n: usize) -> Result<bool> {
    if !(2..=4).contains(&n) {
        return domain(format!("face poset check needs 2 <= n <= 4, got {n}"));
    }
    let (_, _, faces) = fan_faces(n)?;
    let decs = noncrossing_sets(n + 2);
    Ok(isomorphic(&subset_poset(&faces), &subset_poset(&decs)))
}

#[cfg(test)]
mod tests {
    use super::super::tests::example_four;
    use super::*;
    use crate::config::rng;
    use crate::exactmath::rat;
    use rand::Rng;

    fn pt(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&c| int(c)).collect()
    }

    #[test]
    fn example_inequalities() {
        let text: Vec<String> = fan_inequalities(&example_four()).iter().map(|q| q.to_string()).collect();
        assert_eq!(text, vec!["y2+y3 >= 0", "y2 <= 0", "y4 <= 0"]);
        let comb: Vec<String> =
            fan_inequalities(&PlaneBinaryTree::right_comb(4)).iter().map(|q| q.to_string()).collect();
        assert_eq!(comb, vec!["y2 <= 0", "y3 <= 0", "y4 <= 0"]);
    }

    #[test]
    fn locate_examples() {
        assert_eq!(locate_in_fan(&pt(&[0, 0, 0]), 4).unwrap(), FanLocation::Boundary);
        assert_eq!(locate_in_fan(&pt(&[-1, 2, -1]), 4).unwrap(), FanLocation::Chamber(example_four()));
        let hits: Vec<_> = enumerate_trees(4)
            .unwrap()
            .into_iter()
            .filter(|t| fan_inequalities(t).iter().all(|q| q.fan_slack(&pt(&[-1, 2, -1])).is_positive()))
            .collect();
        assert_eq!(hits, vec![example_four()]);
        assert!(matches!(locate_in_fan(&[], 1).unwrap(), FanLocation::Chamber(_)));
        assert!(locate_in_fan(&pt(&[1]), 3).is_err());
    }

    #[test]
    fn fan_is_complete_and_disjoint() {
        let mut r = rng(11);
        for n in 2..=6 {
            let trees = enumerate_trees(n).unwrap();
            for _ in 0..300 {
                let p: Vec<Rational> = (0..n - 1).map(|_| rat(r.gen_range(-1000..=1000), 997)).collect();
                let strict: Vec<&PlaneBinaryTree> = trees
                    .iter()
                    .filter(|t| fan_inequalities(t).iter().all(|q| q.fan_slack(&p).is_positive()))
                    .collect();
                match locate_in_fan(&p, n).unwrap() {
                    FanLocation::Chamber(t) => assert_eq!(strict, vec![&t]),
                    FanLocation::Boundary => assert!(strict.is_empty()),
                }
            }
        }
    }

    #[test]
    fn triangulations() {
        let one = tree_triangulation(&enumerate_trees(1).unwrap()[0]);
        assert_eq!(one.n_gon, 3);
        assert!(one.diagonals.is_empty());
        for n in 1..=6 {
            for t in enumerate_trees(n).unwrap() {
                let d = tree_triangulation(&t);
                assert!(PolygonDecomposition::new(d.n_gon, d.diagonals.iter().copied()).unwrap().is_triangulation());
                assert_eq!(tree_of_triangulation(&d).unwrap(), t);
            }
        }
        assert!(tree_of_triangulation(&PolygonDecomposition { n_gon: 5, diagonals: [(0, 2)].into() }).is_err());
        assert!(PolygonDecomposition::new(6, [(0, 3), (1, 4)]).is_err());
        assert!(PolygonDecomposition::new(6, [(0, 5)]).is_err());
    }

    #[test]
    fn ten_gon_diagonals_cut_label_intervals() {
        // a diagonal (i, j) splits off exactly the labels i+1..j-1
        for t in enumerate_trees(8).unwrap() {
            let d = tree_triangulation(&t);
            for &(i, j) in &d.diagonals {
                assert!((1..=8).any(|v| t.subtree_range(v) == (i + 1, j - 1)));
            }
        }
    }

    #[test]
    fn rays_small() {
        let trees = enumerate_trees(2).unwrap();
        let mut all: Vec<Vec<Vec<i64>>> = trees.iter().map(|t| chamber_rays(t).unwrap()).collect();
        all.sort();
        assert_eq!(all, vec![vec![vec![-1]], vec![vec![1]]]);
        let mut count: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
        for t in enumerate_trees(3).unwrap() {
            for r in chamber_rays(&t).unwrap() {
                *count.entry(r).or_default() += 1;
            }
        }
        let expected: BTreeMap<Vec<i64>, usize> =
            [vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1], vec![-1, 1]].into_iter().map(|r| (r, 2)).collect();
        assert_eq!(count, expected);
    }

    #[test]
    fn rays_are_diagonal_points() {
        for n in 2..=5 {
            for t in enumerate_trees(n).unwrap() {
                let mut from_diags: Vec<Vec<i64>> =
                    tree_triangulation(&t).diagonals.iter().map(|&(i, j)| p_d(i, j, n)).collect();
                from_diags.sort();
                assert_eq!(chamber_rays(&t).unwrap(), from_diags, "{t}");
            }
        }
    }

    #[test]
    fn face_posets() {
        assert_eq!(fan_face_counts(2).unwrap(), (2, 2, 3));
        assert_eq!(fan_face_counts(3).unwrap(), (5, 5, 11));
        assert_eq!(fan_face_counts(4).unwrap(), (14, 9, 45));
        for n in 2..=4 {
            assert!(assoc_face_poset_check(n).unwrap());
        }
        assert!(assoc_face_poset_check(5).is_err());
    }

    #[test]
    fn isomorphism_search_rejects() {
        // chain of 3 vs. two incomparable elements under a top
        let chain = subset_poset(&[0, 1]);
        let anti = subset_poset(&[1, 2]);
        assert!(!isomorphic(&chain, &anti));
        assert!(isomorphic(&chain, &subset_poset(&[0, 2])));
    }
}
