//! Finite posets, linear extensions and sections of order cones.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, resource, Error, Result};
use crate::exactmath::combin::inv_factorial;
use crate::exactmath::{int, multichoose_i64, multichoose_poly, Poly, Rational};

/// Largest poset accepted by [`linear_extensions`].
pub const MAX_EXTENSION_SIZE: usize = 12;
/// Largest poset accepted by [`ideal_lattice`].
pub const MAX_IDEAL_SIZE: usize = 16;

/// A poset on `α_1, ..., α_p` with a natural labeling, stored 0-based by its
/// cover relations together with strict down-sets as bitsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    size: usize,
    covers: Vec<(usize, usize)>,
    below: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct PosetJson {
    size: usize,
    covers: Vec<[usize; 2]>,
}

impl FinitePoset {
    /// Builds a poset from 0-based relations `(i, j)` meaning `α_i < α_j`. The
    /// relations need not be covers; they are closed and then reduced.
    pub fn new(size: usize, relations: &[(usize, usize)]) -> Result<Self> {
        if size > 64 {
            return resource(format!("poset of size {size}"));
        }
        let mut below = vec![0u64; size];
        for &(i, j) in relations {
            if i >= size || j >= size {
                return Err(Error::Dimension(format!("relation ({i}, {j}) outside a poset of size {size}")));
            }
            if i >= j {
                return domain(format!("relation α{} < α{} violates the natural labeling", i + 1, j + 1));
            }
            below[j] |= 1 << i;
        }
        // natural labeling makes index order a topological order
        for j in 0..size {
            let mut acc = below[j];
            for i in 0..j {
                if below[j] >> i & 1 == 1 {
                    acc |= below[i];
                }
            }
            below[j] = acc;
        }
        let mut covers = Vec::new();
        for j in 0..size {
            for i in 0..j {
                if below[j] >> i & 1 == 1 {
                    let skipped = (i + 1..j).any(|k| below[j] >> k & 1 == 1 && below[k] >> i & 1 == 1);
                    if !skipped {
                        covers.push((i, j));
                    }
                }
            }
        }
        Ok(FinitePoset { size, covers, below })
    }

    pub fn chain(p: usize) -> Self {
        let rel: Vec<_> = (1..p).map(|i| (i - 1, i)).collect();
        Self::new(p, &rel).expect("chain is naturally labeled")
    }

    pub fn antichain(p: usize) -> Self {
        Self::new(p, &[]).expect("antichain is naturally labeled")
    }

    /// `Q_n = 2 × n`: `α_1 < ... < α_n`, `α_{n+1} < ... < α_{2n}`, `α_i < α_{n+i}`.
    pub fn q(n: usize) -> Self {
        let mut rel = Vec::new();
        for i in 0..n {
            if i + 1 < n {
                rel.push((i, i + 1));
                rel.push((n + i, n + i + 1));
            }
            rel.push((i, n + i));
        }
        Self::new(2 * n, &rel).expect("Q_n is naturally labeled")
    }

    /// The six-element example poset: `α_1 < α_3 < α_5`, `α_2 < α_4 < α_6`,
    /// `α_3 < α_4`, `α_5 < α_6`.
    pub fn six_element_example() -> Self {
        Self::new(6, &[(0, 2), (2, 4), (1, 3), (3, 5), (2, 3), (4, 5)]).expect("naturally labeled")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: PosetJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut rel = Vec::with_capacity(raw.covers.len());
        for [i, j] in raw.covers {
            if i == 0 || j == 0 {
                return domain("poset indices are 1-based");
            }
            rel.push((i - 1, j - 1));
        }
        Self::new(raw.size, &rel)
    }

    pub fn to_json(&self) -> String {
        let raw = PosetJson { size: self.size, covers: self.covers.iter().map(|&(i, j)| [i + 1, j + 1]).collect() };
        serde_json::to_string(&raw).expect("poset serializes")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Cover relations, 0-based.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Whether `α_i < α_j` (0-based, strict).
    pub fn less(&self, i: usize, j: usize) -> bool {
        self.below[j] >> i & 1 == 1
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.less(i, j) || self.less(j, i)
    }

    /// Bitset of elements strictly below `j`.
    pub fn down_set(&self, j: usize) -> u64 {
        self.below[j]
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.size).filter(|&i| !(0..self.size).any(|j| self.less(i, j))).collect()
    }

    /// The unique maximal element, if there is one.
    pub fn top(&self) -> Option<usize> {
        match self.maximal_elements().as_slice() {
            [t] if self.size > 0 => Some(*t),
            _ => None,
        }
    }

    /// The poset itself when it has a unique maximal element, otherwise the
    /// poset with a new top `α_{p+1}` above everything.
    pub fn with_top(&self) -> Self {
        if self.top().is_some() {
            return self.clone();
        }
        let mut rel = self.covers.clone();
        rel.extend(self.maximal_elements().into_iter().map(|m| (m, self.size)));
        Self::new(self.size + 1, &rel).expect("adjoining a top keeps the labeling natural")
    }

    /// Whether a bitset is closed downward.
    pub fn is_ideal(&self, set: u64) -> bool {
        (0..self.size).all(|j| set >> j & 1 == 0 || self.below[j] & !set == 0)
    }

    /// Whether no two elements of a bitset are comparable.
    pub fn is_antichain(&self, set: u64) -> bool {
        (0..self.size).all(|j| set >> j & 1 == 0 || self.below[j] & set == 0)
    }
}

/// A linear extension written as the word `a_1 ... a_p` (0-based labels).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct LinearExtension {
    pub word: Vec<usize>,
}

impl LinearExtension {
    pub fn new(poset: &FinitePoset, word: Vec<usize>) -> Result<Self> {
        let p = poset.size();
        let mut pos = vec![usize::MAX; p];
        if word.len() != p {
            return Err(Error::Dimension(format!("word of length {} for a poset of size {p}", word.len())));
        }
        for (k, &a) in word.iter().enumerate() {
            if a >= p || pos[a] != usize::MAX {
                return domain("word is not a permutation");
            }
            pos[a] = k;
        }
        if poset.covers().iter().any(|&(i, j)| pos[i] > pos[j]) {
            return domain("word is not order preserving");
        }
        Ok(LinearExtension { word })
    }

    /// 1-based word as a string such as `142536`.
    pub fn to_word_string(&self) -> String {
        let sep = if self.word.len() > 9 { " " } else { "" };
        self.word.iter().map(|a| (a + 1).to_string()).collect::<Vec<_>>().join(sep)
    }
}

/// All linear extensions in lexicographic order of their words.
pub fn linear_extensions(poset: &FinitePoset) -> Result<Vec<LinearExtension>> {
    let p = poset.size();
    if p > MAX_EXTENSION_SIZE {
        return resource(format!("linear extensions of a poset of size {p}"));
    }
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(p);
    fn walk(poset: &FinitePoset, placed: u64, word: &mut Vec<usize>, out: &mut Vec<LinearExtension>) {
        if word.len() == poset.size() {
            out.push(LinearExtension { word: word.clone() });
            return;
        }
        for a in 0..poset.size() {
            if placed >> a & 1 == 0 && poset.down_set(a) & !placed == 0 {
                word.push(a);
                walk(poset, placed | 1 << a, word, out);
                word.pop();
            }
        }
    }
    walk(poset, 0, &mut word, &mut out);
    Ok(out)
}

/// A chain `t_1 < ... < t_n` ending at the top of the poset (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MarkedChain {
    members: Vec<usize>,
}

impl MarkedChain {
    pub fn new(poset: &FinitePoset, members: Vec<usize>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyInput("marked chain must be nonempty".into()));
        }
        if members.iter().any(|&t| t >= poset.size()) {
            return Err(Error::Dimension("chain member outside the poset".into()));
        }
        if members.windows(2).any(|w| !poset.less(w[0], w[1])) {
            return domain("marked elements do not form a chain t_1 < ... < t_n");
        }
        if poset.top() != members.last().copied() {
            return domain("the last chain element must be the unique maximal element");
        }
        Ok(MarkedChain { members })
    }

    /// The top chain `α_{n+1} < ... < α_{2n}` of `Q_n`.
    pub fn q_top(n: usize) -> Self {
        MarkedChain { members: (n..2 * n).collect() }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    fn mask(&self) -> u64 {
        self.members.iter().fold(0, |m, &t| m | 1 << t)
    }
}

/// Heights `h_i` (1-based positions of `t_i`) and descent counts
/// `d_i = #{ j : h_{i-1} <= j < h_i, a_j > a_{j+1} }` with `h_0 = 0`, `a_0 = 0`.
pub fn heights_descents(pi: &LinearExtension, chain: &MarkedChain) -> (Vec<usize>, Vec<usize>) {
    let mut pos = vec![0; pi.word.len()];
    for (k, &a) in pi.word.iter().enumerate() {
        pos[a] = k + 1;
    }
    let h: Vec<usize> = chain.members.iter().map(|&t| pos[t]).collect();
    // 1-based a_j with a_0 below every label
    let a = |j: usize| -> i64 { if j == 0 { -1 } else { pi.word[j - 1] as i64 } };
    let mut d = Vec::with_capacity(h.len());
    let mut prev = 0;
    for &hi in &h {
        d.push((prev..hi).filter(|&j| a(j) > a(j + 1)).count());
        prev = hi;
    }
    (h, d)
}

fn check_section_input(poset: &FinitePoset, chain: &MarkedChain, n: usize) -> Result<()> {
    if chain.len() != n {
        return Err(Error::Dimension(format!("chain has {} elements, x has {n}", chain.len())));
    }
    if poset.top() != chain.members.last().copied() {
        return domain("chain must end at the unique maximal element");
    }
    Ok(())
}

/// Integer points of the order-cone section `C_C(P, u)`:
/// `Σ_π Π_{i=1}^{n} ((x_i - d_i + 1 multichoose h_i - h_{i-1} - 1))`.
pub fn section_count(poset: &FinitePoset, chain: &MarkedChain, x: &[i64]) -> Result<BigInt> {
    check_section_input(poset, chain, x.len())?;
    if x.iter().any(|&v| v < 0) {
        return domain("x must be nonnegative");
    }
    let mut total = BigInt::zero();
    for pi in linear_extensions(poset)? {
        let (h, d) = heights_descents(&pi, chain);
        let mut term = BigInt::from(1);
        let mut prev = 0;
        for i in 0..x.len() {
            term *= multichoose_i64(x[i] - d[i] as i64 + 1, (h[i] - prev - 1) as u32);
            prev = h[i];
        }
        total += term;
    }
    Ok(total)
}

/// [`section_count`] as a polynomial in `x_1, ..., x_n`.
pub fn section_count_poly(poset: &FinitePoset, chain: &MarkedChain) -> Result<Poly> {
    let n = chain.len();
    check_section_input(poset, chain, n)?;
    let mut total = Poly::zero(n);
    for pi in linear_extensions(poset)? {
        let (h, d) = heights_descents(&pi, chain);
        let mut term = Poly::one(n);
        let mut prev = 0;
        for i in 0..n {
            let shift = Poly::constant(n, int(1 - d[i] as i64));
            term = &term * &multichoose_poly(&(&Poly::var(n, i) + &shift), (h[i] - prev - 1) as u32);
            prev = h[i];
        }
        total = &total + &term;
    }
    Ok(total)
}

/// Exhaustive count of integer order-preserving `f: P - C -> [0, u_n]` whose
/// extension by `f(t_i) = u_i` stays order-preserving.
pub fn section_count_brute(poset: &FinitePoset, chain: &MarkedChain, x: &[i64]) -> Result<u64> {
    check_section_input(poset, chain, x.len())?;
    if x.iter().any(|&v| v < 0) {
        return domain("x must be nonnegative");
    }
    let p = poset.size();
    let mut value = vec![None; p];
    let mut acc = 0;
    for (&t, xi) in chain.members.iter().zip(x) {
        acc += xi;
        value[t] = Some(acc);
    }
    // the fixed values must themselves be order preserving
    for &(i, j) in poset.covers() {
        if let (Some(a), Some(b)) = (value[i], value[j]) {
            if a > b {
                return Ok(0);
            }
        }
    }
    let free: Vec<usize> = (0..p).filter(|&s| chain.mask() >> s & 1 == 0).collect();
    let mut budget = crate::lattice::SCAN_LIMIT;
    fn walk(
        poset: &FinitePoset,
        free: &[usize],
        k: usize,
        value: &mut [Option<i64>],
        top: i64,
        budget: &mut u64,
    ) -> u64 {
        if k == free.len() {
            return 1;
        }
        if *budget == 0 {
            return 0;
        }
        *budget -= 1;
        let s = free[k];
        let p = poset.size();
        // free elements below s come earlier in label order
        let lo = (0..p).filter(|&r| poset.less(r, s)).filter_map(|r| value[r]).max().unwrap_or(0);
        let hi = (0..p)
            .filter(|&r| poset.less(s, r))
            .filter_map(|r| if free.contains(&r) { None } else { value[r] })
            .min()
            .unwrap_or(top);
        let mut total = 0;
        for v in lo..=hi {
            value[s] = Some(v);
            total += walk(poset, free, k + 1, value, top, budget);
        }
        value[s] = None;
        total
    }
    let count = walk(poset, &free, 0, &mut value, acc, &mut budget);
    if budget == 0 {
        return resource("section scan exceeded the work budget");
    }
    Ok(count)
}

/// Volume of `C_C(P, u)`: `Σ_π Π_i x_i^{g_i} / g_i!` with `g_i = h_i - h_{i-1} - 1`.
pub fn section_volume(poset: &FinitePoset, chain: &MarkedChain) -> Result<Poly> {
    let n = chain.len();
    check_section_input(poset, chain, n)?;
    let mut total = Poly::zero(n);
    for pi in linear_extensions(poset)? {
        let (h, _) = heights_descents(&pi, chain);
        let mut exps = Vec::with_capacity(n);
        let mut coeff = Rational::from_integer(1.into());
        let mut prev = 0;
        for &hi in &h {
            let g = (hi - prev - 1) as u32;
            exps.push(g);
            coeff *= inv_factorial(g);
            prev = hi;
        }
        total.add_term(exps, coeff);
    }
    Ok(total)
}

/// Order ideals of a poset with their cover relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealLattice {
    /// Ideals as bitsets, sorted by size and then numerically.
    pub ideals: Vec<u64>,
    /// Index pairs `(a, b)` with `ideals[a] ⋖ ideals[b]`.
    pub covers: Vec<(usize, usize)>,
}

impl IdealLattice {
    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }
}

/// All order ideals of `P`.
pub fn ideal_lattice(poset: &FinitePoset) -> Result<IdealLattice> {
    let p = poset.size();
    if p > MAX_IDEAL_SIZE {
        return resource(format!("order ideals of a poset of size {p}"));
    }
    let mut ideals: Vec<u64> = (0u64..1 << p).filter(|&s| poset.is_ideal(s)).collect();
    ideals.sort_by_key(|&s| (s.count_ones(), s));
    let index: BTreeMap<u64, usize> = ideals.iter().enumerate().map(|(k, &s)| (s, k)).collect();
    let mut covers = Vec::new();
    for (a, &s) in ideals.iter().enumerate() {
        for e in 0..p {
            if s >> e & 1 == 0 {
                if let Some(&b) = index.get(&(s | 1 << e)) {
                    covers.push((a, b));
                }
            }
        }
    }
    Ok(IdealLattice { ideals, covers })
}

/// All Loewy chains `∅ = I_0 < ... < I_k = P`: chains of order ideals whose
/// successive differences are antichains. Each chain is listed by its ideals.
pub fn loewy_chains(poset: &FinitePoset) -> Result<Vec<Vec<u64>>> {
    let lattice = ideal_lattice(poset)?;
    let full = if poset.size() == 64 { u64::MAX } else { (1u64 << poset.size()) - 1 };
    let mut out = Vec::new();
    let mut chain = vec![0u64];
    fn walk(poset: &FinitePoset, ideals: &[u64], full: u64, chain: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        let last = *chain.last().expect("chain starts at the empty ideal");
        if last == full {
            out.push(chain.clone());
            return;
        }
        for &next in ideals {
            if next & last == last && next != last && poset.is_antichain(next & !last) {
                chain.push(next);
                walk(poset, ideals, full, chain, out);
                chain.pop();
            }
        }
    }
    walk(poset, &lattice.ideals, full, &mut chain, &mut out);
    Ok(out)
}

/// Interior faces grouped by dimension in the chain complex of `J(P)` with the
/// ideals common to every Loewy chain removed: a Loewy chain with `e` remaining
/// ideals has dimension `e - 1`.
pub fn loewy_interior_stats(poset: &FinitePoset) -> Result<BTreeMap<i64, usize>> {
    let chains = loewy_chains(poset)?;
    let common: Vec<u64> = chains
        .first()
        .map(|c| c.iter().copied().filter(|i| chains.iter().all(|k| k.contains(i))).collect())
        .unwrap_or_default();
    let mut stats = BTreeMap::new();
    for c in &chains {
        let dim = (c.len() - common.len()) as i64 - 1;
        *stats.entry(dim).or_insert(0) += 1;
    }
    Ok(stats)
}

/// Interior faces of the section decomposition grouped by geometric dimension
/// `k - n`, where `k` is the number of steps of the Loewy chain.
pub fn loewy_face_dimensions(poset: &FinitePoset, chain: &MarkedChain) -> Result<BTreeMap<usize, usize>> {
    let mut stats = BTreeMap::new();
    for c in loewy_chains(poset)? {
        let steps = c.len() - 1;
        *stats.entry(steps - chain.len()).or_insert(0) += 1;
    }
    Ok(stats)
}

/// Support function of `Π_n(x)` in direction `w`, as the Minkowski sum
/// `Σ x_i τ_i`: `Σ_i x_i max(0, w_i, ..., w_n)`.
pub fn minkowski_support(x: &[Rational], w: &[Rational]) -> Rational {
    let n = x.len();
    let mut total = Rational::zero();
    let mut best = Rational::zero();
    let mut tail = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        if w[i] > best {
            best = w[i].clone();
        }
        tail[i] = best.clone();
    }
    for i in 0..n {
        total += &x[i] * &tail[i];
    }
    total
}

/// Compares [`minkowski_support`] with the maximum of `⟨w, v⟩` over the vertices
/// of `Π_n(x)` for `trials` random integer directions with entries in `[-5, 5]`.
pub fn minkowski_support_check(spec: &crate::volume::PolytopeSpec, trials: usize, seed: u64) -> Result<bool> {
    if spec.n() > 4 {
        return resource(format!("vertex enumeration for n = {}", spec.n()));
    }
    let vertices = crate::treefan::enumerate_vertices(spec)?;
    let mut rng = crate::config::rng(seed);
    let n = spec.n();
    for trial in 0..trials {
        let w: Vec<Rational> = if trial == 0 {
            vec![Rational::zero(); n]
        } else {
            (0..n).map(|_| int(rng.gen_range(-5..=5))).collect()
        };
        let scan = vertices
            .iter()
            .map(|v| v.iter().zip(&w).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
            .max()
            .expect("a polytope has a vertex");
        if scan != minkowski_support(spec.x(), &w) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Random naturally labeled poset of the given size with a unique maximal
/// element: relations `i < j` are drawn independently with probability `density`.
pub fn random_poset<R: Rng>(size: usize, density: f64, rng: &mut R) -> FinitePoset {
    let mut rel = Vec::new();
    for j in 0..size {
        for i in 0..j {
            if rng.gen_bool(density) {
                rel.push((i, j));
            }
        }
    }
    let base = FinitePoset::new(size, &rel).expect("naturally labeled by construction");
    if size == 0 {
        return base;
    }
    base.with_top()
}

/// All marked chains ending at the top, listed by their lower members.
pub fn marked_chains(poset: &FinitePoset) -> Vec<MarkedChain> {
    let Some(top) = poset.top() else { return Vec::new() };
    let mut out = Vec::new();
    let candidates: Vec<usize> = (0..poset.size()).filter(|&s| s != top).collect();
    for mask in 0u64..1 << candidates.len() {
        let mut members: Vec<usize> =
            candidates.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &s)| s).collect();
        members.push(top);
        if let Ok(c) = MarkedChain::new(poset, members) {
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    fn words(p: &FinitePoset) -> Vec<String> {
        linear_extensions(p).unwrap().iter().map(LinearExtension::to_word_string).collect()
    }

    #[test]
    fn construction_and_json() {
        let p = FinitePoset::from_json(r#"{"size": 3, "covers": [[1, 2], [2, 3], [1, 3]]}"#).unwrap();
        assert_eq!(p.covers(), &[(0, 1), (1, 2)]);
        assert!(p.less(0, 2));
        assert_eq!(FinitePoset::from_json(&p.to_json()).unwrap(), p);
        assert!(FinitePoset::new(2, &[(1, 0)]).is_err());
        assert!(FinitePoset::new(2, &[(0, 5)]).is_err());
        assert!(FinitePoset::from_json("{").is_err());
    }

    #[test]
    fn adjoining_a_top() {
        let a = FinitePoset::antichain(2);
        assert_eq!(a.top(), None);
        let t = a.with_top();
        assert_eq!(t.size(), 3);
        assert_eq!(t.top(), Some(2));
        assert_eq!(FinitePoset::q(3).with_top(), FinitePoset::q(3));
    }

    #[test]
    fn extension_examples() {
        assert_eq!(linear_extensions(&FinitePoset::chain(5)).unwrap().len(), 1);
        assert_eq!(
            words(&FinitePoset::six_element_example()),
            vec!["123456", "123546", "132456", "132546", "135246", "213456", "213546"]
        );
        assert_eq!(words(&FinitePoset::q(3)), vec!["123456", "124356", "124536", "142356", "142536"]);
        assert!(linear_extensions(&FinitePoset::antichain(13)).is_err());
    }

    #[test]
    fn q_extensions_are_catalan() {
        for n in 1..=6 {
            let ext = linear_extensions(&FinitePoset::q(n)).unwrap();
            assert_eq!(BigInt::from(ext.len()), crate::ballot::catalan(n as u32));
        }
    }

    #[test]
    fn q_extensions_biject_onto_ballot_compositions() {
        for n in 1..=6 {
            let chain = MarkedChain::q_top(n);
            let q = FinitePoset::q(n);
            let mut gaps: Vec<Vec<u32>> = linear_extensions(&q)
                .unwrap()
                .iter()
                .map(|pi| {
                    let (h, d) = heights_descents(pi, &chain);
                    assert_eq!(d[0], 0);
                    let mut prev = 0;
                    h.iter()
                        .map(|&hi| {
                            let g = (hi - prev - 1) as u32;
                            prev = hi;
                            g
                        })
                        .collect()
                })
                .collect();
            gaps.sort();
            let ks: Vec<Vec<u32>> =
                crate::ballot::enumerate_k(n).unwrap().iter().map(|k| k.parts().to_vec()).collect();
            assert_eq!(gaps, ks);
        }
    }

    #[test]
    fn heights_and_descents() {
        let q = FinitePoset::q(3);
        let chain = MarkedChain::q_top(3);
        let pi = LinearExtension::new(&q, vec![0, 3, 1, 4, 2, 5]).unwrap();
        let (h, d) = heights_descents(&pi, &chain);
        assert_eq!(h, vec![2, 4, 6]);
        assert_eq!(d, vec![0, 1, 1]);
        let id = LinearExtension::new(&q, (0..6).collect()).unwrap();
        assert_eq!(heights_descents(&id, &chain).1, vec![0, 0, 0]);
        let p = FinitePoset::six_element_example();
        let c = MarkedChain::new(&p, vec![0, 2, 5]).unwrap();
        let pi = LinearExtension::new(&p, vec![1, 0, 2, 3, 4, 5]).unwrap();
        assert_eq!(heights_descents(&pi, &c).1[0], 1);
        assert!(LinearExtension::new(&q, vec![3, 0, 1, 2, 4, 5]).is_err());
    }

    #[test]
    fn marked_chain_validation() {
        let p = FinitePoset::six_element_example();
        assert!(MarkedChain::new(&p, vec![0, 2, 5]).is_ok());
        assert!(MarkedChain::new(&p, vec![0, 1, 5]).is_err());
        assert!(MarkedChain::new(&p, vec![0, 2]).is_err());
        assert!(MarkedChain::new(&p, vec![]).is_err());
    }

    fn mc(k: Poly, j: u32) -> Poly {
        multichoose_poly(&k, j)
    }

    #[test]
    fn six_element_section_expression() {
        let p = FinitePoset::six_element_example();
        let c = MarkedChain::new(&p, vec![0, 2, 5]).unwrap();
        let x = |i| Poly::var(3, i);
        let k = |c: i64| Poly::constant(3, int(c));
        let expected = [
            &mc(&x(1) + &k(1), 1) * &mc(&x(2) + &k(1), 2),
            &mc(&x(1) + &k(1), 1) * &mc(x(2), 2),
            mc(x(2), 3),
            mc(&x(2) - &k(1), 3),
            mc(x(2), 3),
            &mc(x(0), 1) * &mc(&x(2) + &k(1), 2),
            &mc(x(0), 1) * &mc(x(2), 2),
        ]
        .into_iter()
        .fold(Poly::zero(3), |a, b| &a + &b);
        let got = section_count_poly(&p, &c).unwrap();
        assert_eq!(got, expected);
        assert_eq!(section_volume(&p, &c).unwrap(), got.homogeneous_part(3));
    }

    #[test]
    fn sections_match_scan_on_small_posets() {
        let mut rng = crate::config::rng(7);
        for trial in 0..60 {
            let p = random_poset(2 + trial % 4, 0.4, &mut rng);
            for c in marked_chains(&p) {
                let n = c.len();
                for x in [vec![1; n], vec![2; n], (0..n as i64).collect::<Vec<_>>()] {
                    assert_eq!(
                        section_count(&p, &c, &x).unwrap(),
                        BigInt::from(section_count_brute(&p, &c, &x).unwrap()),
                        "{} {:?} {x:?}",
                        p.to_json(),
                        c.members()
                    );
                }
            }
        }
    }

    #[test]
    fn trivial_sections() {
        let p = FinitePoset::chain(4);
        let c = MarkedChain::new(&p, vec![0, 1, 2, 3]).unwrap();
        assert_eq!(section_count(&p, &c, &[1, 2, 0, 3]).unwrap(), BigInt::from(1));
    }

    #[test]
    fn q_specialization() {
        for n in 1..=4 {
            let q = FinitePoset::q(n);
            let c = MarkedChain::q_top(n);
            assert_eq!(section_volume(&q, &c).unwrap(), *crate::volume::volume_poly(n).unwrap());
            assert_eq!(section_count_poly(&q, &c).unwrap(), crate::lattice::count_points_poly(n).unwrap());
        }
        let q = FinitePoset::q(2);
        let x1 = Poly::var(2, 0);
        let x2 = Poly::var(2, 1);
        assert_eq!(section_volume(&q, &MarkedChain::q_top(2)).unwrap(), &(&x1 * &x2) + &x1.pow(2).scale(&rat(1, 2)));
    }

    #[test]
    fn ideals() {
        let a = ideal_lattice(&FinitePoset::antichain(2)).unwrap();
        assert_eq!(a.len(), 4);
        assert_eq!(ideal_lattice(&FinitePoset::chain(5)).unwrap().len(), 6);
        let j = ideal_lattice(&FinitePoset::q(3)).unwrap();
        assert_eq!(j.len(), 10);
        assert_eq!(j.covers.len(), 12);
    }

    #[test]
    fn loewy_statistics() {
        let q3 = loewy_interior_stats(&FinitePoset::q(3)).unwrap();
        assert_eq!(q3, BTreeMap::from([(0, 1), (1, 5), (2, 5)]));
        let q2 = loewy_interior_stats(&FinitePoset::q(2)).unwrap();
        assert_eq!(q2, BTreeMap::from([(-1, 1), (0, 2)]));
        assert_eq!(loewy_chains(&FinitePoset::chain(4)).unwrap().len(), 1);
        let faces = loewy_face_dimensions(&FinitePoset::q(3), &MarkedChain::q_top(3)).unwrap();
        assert_eq!(faces, BTreeMap::from([(1, 1), (2, 5), (3, 5)]));
    }

    #[test]
    fn support_function() {
        let x = [int(1), int(2)];
        assert_eq!(minkowski_support(&x, &[int(1), int(1)]), int(3));
        assert_eq!(minkowski_support(&x, &[int(0), int(0)]), int(0));
        let s = crate::volume::PolytopeSpec::from_integers(&[1, 2, 3]).unwrap();
        assert!(minkowski_support_check(&s, 500, 1).unwrap());
    }
}
