//! The acceptance checks, shared by `pspoly verify` and the `acceptance` test target.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ballot::{catalan, enumerate_k};
use crate::config::{rng, Config};
use crate::error::{Error, Result};
use crate::exactmath::combin::{inv_factorial, multichoose_poly};
use crate::exactmath::rational::pow;
use crate::exactmath::{int, rat, Poly, Rational};
use crate::lattice::{
    count_points, count_points_brute, count_points_nm, ehrhart_ab, plane_partitions, steck_count, steck_count_brute,
    two_sided_cell_sum, two_sided_closed_form_n2, two_sided_count, volume_nm_formula, volume_nm_interpolated,
    volume_nm_printed, Shape, TwoSidedSpec,
};
use crate::parking::{count_x_parking, weighted_parking_sum};
use crate::posets::{
    loewy_interior_stats, marked_chains, minkowski_support_check, random_poset, section_count, section_count_brute,
    section_count_poly, section_volume, FinitePoset, MarkedChain,
};
use crate::probability::{daniels_poly, mc_band, pyke_formula, pyke_volume, BandSpec};
use crate::treefan::{
    assoc_face_poset_check, delta_volume, enumerate_trees, enumerate_vertices, face_structure, fan_inequalities,
    k_of_tree, locate_in_fan, tree_of_k, FanLocation,
};
use crate::volume::{kreweras_side, scaled_volume_at, volume_at, volume_poly, volume_steck, PolytopeSpec};

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub id: u32,
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

type CheckFn = fn(&Config) -> Result<(bool, String)>;

pub struct Criterion {
    pub id: u32,
    pub suite: &'static str,
    pub name: &'static str,
    run: CheckFn,
}

/// Suite names accepted by [`select`], besides `all` and criterion numbers.
pub const SUITES: [&str; 7] = ["volume", "ballot", "parking", "lattice", "posets", "treefan", "probability"];

pub fn criteria() -> Vec<Criterion> {
    let c = |id, suite, name, run| Criterion { id, suite, name, run };
    vec![
        c(1, "volume", "volume polynomial equals the determinant form", c01 as CheckFn),
        c(2, "ballot", "ballot compositions are counted by Catalan numbers", c02),
        c(3, "volume", "n! V_n(1,...,1) = (n+1)^(n-1)", c03),
        c(4, "parking", "parking count = n! V_n(x) = weighted parking sum", c04),
        c(5, "lattice", "lattice point formula matches enumeration", c05),
        c(6, "lattice", "Ehrhart product for (a,b,...,b) matches enumeration", c06),
        c(7, "lattice", "plane partitions with parts <= 2 count lattice points", c07),
        c(8, "lattice", "matrix polytope points are plane partitions", c08),
        c(9, "lattice", "matrix polytope volume product matches interpolation", c09),
        c(10, "posets", "order-cone section counts match enumeration", c10),
        c(11, "posets", "the poset Q_n recovers the polytope", c11),
        c(12, "posets", "interior faces of the Loewy subdivision of Q_3", c12),
        c(13, "posets", "support function of the Minkowski sum", c13),
        c(14, "treefan", "cells of the tree subdivision sum to the volume", c14),
        c(15, "treefan", "fan chambers and the associahedron face poset", c15),
        c(16, "treefan", "vertex count is a product of simplex vertex counts", c16),
        c(17, "probability", "Daniels line: n! V_n(1-p, p/n, ...) = 1 - p", c17),
        c(18, "probability", "Pyke formula equals n! V_n", c18),
        c(19, "lattice", "Steck determinant counts integer tuples", c19),
        c(20, "lattice", "two-sided polytope counts", c20),
        c(21, "volume", "Kreweras q-identity", c21),
    ]
}

/// Criteria matching `suite`: `all`, a suite name, or a criterion number.
pub fn select(suite: &str) -> Result<Vec<Criterion>> {
    let all = criteria();
    if suite == "all" {
        return Ok(all);
    }
    if let Ok(id) = suite.parse::<u32>() {
        let picked: Vec<Criterion> = all.into_iter().filter(|c| c.id == id).collect();
        if picked.is_empty() {
            return Err(Error::Domain(format!("no criterion numbered {id}")));
        }
        return Ok(picked);
    }
    if !SUITES.contains(&suite) {
        return Err(Error::Domain(format!("unknown suite {suite:?}; expected all, a number, or one of {SUITES:?}")));
    }
    Ok(all.into_iter().filter(|c| c.suite == suite).collect())
}

pub fn run_criterion(c: &Criterion, cfg: &Config) -> CheckReport {
    let start = Instant::now();
    let (passed, detail) = match (c.run)(cfg) {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    CheckReport { id: c.id, suite: c.suite, name: c.name, passed, detail, millis: start.elapsed().as_millis() }
}

pub fn run_suite(suite: &str, cfg: &Config) -> Result<Vec<CheckReport>> {
    Ok(select(suite)?.iter().map(|c| run_criterion(c, cfg)).collect())
}

/// Per-criterion RNG so that each check sees the same stream whatever else runs.
fn stream(cfg: &Config, id: u64) -> ChaCha8Rng {
    rng(cfg.seed.wrapping_mul(1_000_003).wrapping_add(id))
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&c| int(c)).collect()
}

fn spec(x: &[i64]) -> Result<PolytopeSpec> {
    PolytopeSpec::from_integers(x)
}

/// Every vector in `{0..=max}^n`.
fn grid(n: usize, max: i64) -> impl Iterator<Item = Vec<i64>> {
    let base = max + 1;
    (0..base.pow(n as u32)).map(move |code| (0..n).map(|i| code / base.pow(i as u32) % base).collect())
}

/// First failure, as a detail string.
struct Tally {
    cases: usize,
    failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { cases: 0, failure: None }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn finish(self, summary: impl Into<String>) -> Result<(bool, String)> {
        match self.failure {
            None => Ok((true, format!("{} ({} cases)", summary.into(), self.cases))),
            Some(f) => Ok((false, format!("{} of {} cases checked; first mismatch: {f}", summary.into(), self.cases))),
        }
    }
}

fn v3_expected() -> Poly {
    let x: Vec<Poly> = (0..3).map(|i| Poly::var(3, i)).collect();
    let h = rat(1, 2);
    [
        &(&x[0] * &x[1]) * &x[2],
        (&x[0].pow(2) * &x[1]).scale(&h),
        (&x[0] * &x[1].pow(2)).scale(&h),
        (&x[0].pow(2) * &x[2]).scale(&h),
        x[0].pow(3).scale(&rat(1, 6)),
    ]
    .into_iter()
    .fold(Poly::zero(3), |a, b| &a + &b)
}

fn c01(_: &Config) -> Result<(bool, String)> {
    let mut t = Tally::new();
    for n in 1..=6 {
        let p = volume_poly(n)?;
        let s = volume_steck(n)?;
        t.check(*p == s, || format!("n = {n}"));
    }
    t.check(*volume_poly(3)? == v3_expected(), || "V_3 terms".into());
    t.finish("n = 1..6 exact, V_3 has its five terms")
}

fn c02(_: &Config) -> Result<(bool, String)> {
    let listed: [u64; 12] = [1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796, 58786, 208012];
    let mut t = Tally::new();
    for n in 1..=12usize {
        let count = enumerate_k(n)?.len() as u64;
        t.check(count == listed[n - 1] && BigInt::from(count) == catalan(n as u32), || format!("n = {n}: {count}"));
    }
    t.finish("n <= 12")
}

fn c03(_: &Config) -> Result<(bool, String)> {
    let mut t = Tally::new();
    let listed = [(3, 16), (4, 125), (5, 1296), (6, 16807), (7, 262144)];
    for n in 1..=7usize {
        let got = scaled_volume_at(&vec![int(1); n])?;
        let want = pow(&int(n as i64 + 1), n as u32 - 1);
        t.check(got == want, || format!("n = {n}: {got}"));
    }
    for (n, v) in listed {
        t.check(scaled_volume_at(&vec![int(1); n])? == int(v), || format!("listed value for n = {n}"));
    }
    t.finish("n <= 7")
}

fn parking_case(x: &[i64], t: &mut Tally) -> Result<()> {
    let s = spec(x)?;
    let xr = ints(x);
    let scan = int(count_x_parking(&s)? as i64);
    let vol = scaled_volume_at(&xr)?;
    let weighted = weighted_parking_sum(&xr)?;
    t.check(scan == vol && vol == weighted, || format!("x = {x:?}: scan {scan}, volume {vol}, sum {weighted}"));
    Ok(())
}

fn c04(cfg: &Config) -> Result<(bool, String)> {
    let mut t = Tally::new();
    for n in 1..=4 {
        for x in grid(n, 3) {
            parking_case(&x, &mut t)?;
        }
    }
    let mut r = stream(cfg, 4);
    for _ in 0..cfg.random_cases {
        let x: Vec<i64> = (0..5).map(|_| r.gen_range(0..=3)).collect();
        parking_case(&x, &mut t)?;
    }
    t.finish(format!("entries <= 3 for n <= 4, {} random cases at n = 5", cfg.random_cases))
}

fn c05(_: &Config) -> Result<(bool, String)> {
    let mut t = Tally::new();
    for n in 1..=4 {
        for x in grid(n, 4) {
            let s = spec(&x)?;
            let (f, b) = (count_points(&s)?, count_points_brute(&s)?);
            t.check(f == BigInt::from(b), || format!("x = {x:?}: {f} vs {b}"));
        }
    }
    t.finish("entries <= 4, n <= 4")
}

fn c06(_: &Config) -> Result<(bool, String)> {
    let mut t = Tally::new();
    for n in 1..=4usize {
        for a in 0..=3u64 {
            for b in 0..=3u64 {
                let p = ehrhart_ab(n, a, b)?;
                for r in 0..=4u64 {
                    let mut x = vec![(r * b) as i64; n];
                    x[0] = (r * a) as i64;
                    let brute = int(count_points_brute(&spec(&x)?)? as i64);
                    let val = p.eval(&[int(r as i64)])?;
                    t.check(val == brute, || format!("n={n} a={a} b={b} r={r}: {val} vs {brute}"));
                }
                let lead = p.coeff(&[n as u32]);
                let (ar, br) = (int(a as i64), int(b as i64));
                let want = &ar * pow(&(&ar + int(n as i64) * &br), n as u32 - 1) * inv_factorial(n as u32);
                t.check(lead == want, || format!("leading coefficient n={n} a={a} b={b}"));
            }
        }
    }
    t.finish("r <= 4, n <= 4, a,b <= 3")
}

fn c07(_: &Config) -> Result<(bool, String)> {
    let mut t = Tally::new();
    t.check(plane_partitions(&Shape::new(vec![2, 1])?, 2)? == 5, || "shape (2,1), parts <= 2".into());
    for n in 1..=4 {
        for x in grid(n, 4) {
            let s = spec(&x)?;
            let pp = plane_partitions(&Shape::from_polytope(&s)?, 2)?;
            let c = count_points(&s)?;
            t.check(BigInt::from(pp) == c, || format!("x = {x:?}: {pp} vs {c}"));
        }
    }
    t.finish("entries <= 4, n <= 4")
}

fn c08(_: &Config) -> Result<(bool, String)> {
    let mut t = Tally::new();
    for n in 1..=3 {
        for m in 1..=3usize {
            for x in grid(n, 2) {
                let s = spec(&x)?;
                let a = count_points_nm(&s, m)?;
                let b = plane_partitions(&Shape::from_polytope(&s)?, m as u64 + 1)?;
                t.check(a == b, || format!("n={n} m={m} x={x:?}: {a} vs {b}"));
            }
        }
    }
    t.finish("n, m <= 3, entries <= 2")
}

fn c09(_: &Config) -> Result<(bool, String)> {
    let mut t = Tally::new();
    let mut printed_off = 0;
    for (n, m) in [(2usize, 2usize), (3, 2), (2, 3)] {
        for a in 0..=2u64 {
            for b in 0..=2u64 {
                let mut x = vec![b; n];
                x[0] = a;
                let oracle = volume_nm_interpolated(&x, m)?;
                let formula = volume_nm_formula(n, m, &int(a as i64), &int(b as i64))?;
                t.check(formula == oracle, || format!("(n,m)=({n},{m}) a={a} b={b}: {formula} vs {oracle}"));
                let printed = volume_nm_printed(n, m)?;
                if a == b {
                    let scaled = printed * pow(&int(a as i64), (n * m) as u32);
                    t.check(scaled == oracle, || format!("printed product on the diagonal a=b={a}"));
                } else if printed != oracle {
                    printed_off += 1;
                }
            }
        }
    }
    t.finish(format!(
        "(a,b) product vs interpolation; printed a,b-free product agrees at a=b=1 and on the diagonal after scaling, \
         differs at {printed_off} off-diagonal points"
    ))
}

fn x_vectors_small(n: usize) -> Vec<Vec<i64>> {
    // all x with u_n <= 3
    grid(n, 3).filter(|x| x.iter().sum::<i64>() <= 3).collect()
}

fn c10(cfg: &Config) -> Result<(bool, String)> {
    let mut t = Tally::new();
    let mut r = stream(cfg, 10);
    let mut posets = 0;
    for k in 0..cfg.poset_cases {
        let size = 2 + k % 5;
        let density = r.gen_range(0.15..0.6);
        let mut p = random_poset(size, density, &mut r);
        if p.size() > size {
            p = random_poset(size - 1, density, &mut r);
        }
        posets += 1;
        for c in marked_chains(&p) {
            for x in x_vectors_small(c.len()) {
                let f = section_count(&p, &c, &x)?;
                let b = section_count_brute(&p, &c, &x)?;
                t.check(f == BigInt::from(b), || format!("{} chain {:?} x {x:?}: {f} vs {b}", p.to_json(), c.members()));
            }
        }
    }
    let p = FinitePoset::six_element_example();
    let c = MarkedChain::new(&p, vec![0, 2, 5])?;
    t.check(section_count_poly(&p, &c)? == six_element_expression(), || "six-element example".into());
    t.finish(format!("{posets} random posets of size <= 6 with every chain and u_n <= 3, plus the six-element example"))
}

fn six_element_expression() -> Poly {
    let x = |i| Poly::var(3, i);
    let k = |c: i64| Poly::constant(3, int(c));
    let mc = |p: Poly, j| multichoose_poly(&p, j);
    [
        &mc(&x(1) + &k(1), 1) * &mc(&x(2) + &k(1), 2),
        &mc(&x(1) + &k(1), 1) * &mc(x(2), 2),
        mc(x(2), 3),
        mc(&x(2) - &k(1), 3),
        mc(x(2), 3),
        &mc(x(0), 1) * &mc(&x(2) + &k(1), 2),
        &mc(x(0), 1) * &mc(x(2), 2),
    ]
    .into_iter()
    .fold(Poly::zero(3), |a, b| &a + &b)
}

fn c11(_: &Config) -> Result<(bool, String)> {
    let mut t = Tally::new();
    for n in 1..=4 {
        let q = FinitePoset::q(n);
        let c = MarkedChain::q_top(n);
        t.check(section_volume(&q, &c)? == *volume_poly(n)?, || format!("volume n = {n}"));
        t.check(section_count_poly(&q, &c)? == crate::lattice::count_points_poly(n)?, || format!("count n = {n}"));
        for x in grid(n, 2) {
            let a = section_count(&q, &c, &x)?;
            let b = count_points(&spec(&x)?)?;
            t.check(a == b, || format!("x = {x:?}"));
        }
    }
    t.finish("n <= 4, symbolic and at entries <= 2")
}

fn c12(_: &Config) -> Result<(bool, String)> {
    let stats = loewy_interior_stats(&FinitePoset::q(3))?;
    let want: BTreeMap<i64, usize> = [(0, 1), (1, 5), (2, 5)].into_iter().collect();
    Ok((stats == want, format!("dimension -> count {stats:?}")))
}

fn c13(cfg: &Config) -> Result<(bool, String)> {
    let mut t = Tally::new();
    let mut r = stream(cfg, 13);
    for n in 1..=4 {
        for k in 0..cfg.random_cases.max(1) {
            let x: Vec<i64> = (0..n).map(|_| r.gen_range(0..=4)).collect();
            let s = spec(&x)?;
            let seed = cfg.seed.wrapping_add((n * 1000 + k) as u64);
            t.check(minkowski_support_check(&s, cfg.support_directions, seed)?, || format!("x = {x:?}"));
        }
    }
    t.finish(format!("{} directions per x, n <= 4", cfg.support_directions))
}

fn c14(cfg: &Config) -> Result<(bool, String)> {
    let mut t = Tally::new();
    let mut r = stream(cfg, 14);
    for n in 1..=6 {
        let trees = enumerate_trees(n)?;
        let poly = volume_poly(n)?;
        for tree in &trees {
            let k = k_of_tree(tree)?;
            let mono = k.parts().iter().fold(Rational::one(), |acc, &ki| acc * inv_factorial(ki));
            t.check(poly.coeff(k.parts()) == mono, || format!("monomial of {tree}"));
        }
        for _ in 0..cfg.random_cases {
            let x: Vec<Rational> = (0..n).map(|_| rat(r.gen_range(0..=12), r.gen_range(1..=5))).collect();
            let s = PolytopeSpec::new(x.clone())?;
            let mut total = Rational::zero();
            for tree in &trees {
                total += delta_volume(tree, &s)?;
            }
            let want = volume_at(&x)?;
            t.check(total == want, || format!("n = {n}: {total} vs {want}"));
        }
    }
    for n in 1..=7 {
        let trees = enumerate_trees(n)?;
        let ks = enumerate_k(n)?;
        let mut seen = std::collections::BTreeSet::new();
        for tree in &trees {
            let k = k_of_tree(tree)?;
            t.check(&tree_of_k(k.parts())? == tree, || format!("round trip {tree}"));
            seen.insert(k);
        }
        t.check(seen.len() == ks.len() && ks.iter().all(|k| seen.contains(k)), || format!("bijection n = {n}"));
    }
    t.finish(format!("n <= 6 with {} random x each; bijection n <= 7", cfg.random_cases))
}

/// A point inside the chamber of `tree`: heights `h_i` = depth of `i`.
fn interior_point(tree: &crate::treefan::PlaneBinaryTree) -> Vec<Rational> {
    let n = tree.n();
    let depth = |mut v: usize| {
        let mut d = 0i64;
        while let Some(p) = tree.parent(v) {
            d += 1;
            v = p;
        }
        d
    };
    (2..=n).map(|k| int(depth(k - 1) - depth(k))).collect()
}

fn c15(cfg: &Config) -> Result<(bool, String)> {
    let mut t = Tally::new();
    for n in [3, 4] {
        t.check(assoc_face_poset_check(n)?, || format!("face poset n = {n}"));
    }
    for n in 2..=6 {
        let trees = enumerate_trees(n)?;
        t.check(BigInt::from(trees.len()) == catalan(n as u32), || format!("chamber count n = {n}"));
        for tree in &trees {
            let located = locate_in_fan(&interior_point(tree), n)?;
            t.check(located == FanLocation::Chamber(tree.clone()), || format!("chamber of {tree} is empty"));
        }
    }
    let mut r = stream(cfg, 15);
    let per_n = cfg.membership_points / 5 + 1;
    let mut swept = 0;
    for n in 2..=6 {
        let trees = enumerate_trees(n)?;
        let mut done = 0;
        while done < per_n {
            let p: Vec<Rational> = (0..n - 1).map(|_| int(r.gen_range(-1000..=1000))).collect();
            let strict: Vec<_> = trees
                .iter()
                .filter(|tree| fan_inequalities(tree).iter().all(|q| q.fan_slack(&p) > Rational::zero()))
                .collect();
            if matches!(locate_in_fan(&p, n)?, FanLocation::Boundary) {
                t.check(strict.is_empty(), || format!("boundary point {p:?} is interior somewhere"));
                continue;
            }
            t.check(strict.len() == 1, || format!("point {p:?} lies in {} open chambers", strict.len()));
            done += 1;
            swept += 1;
        }
    }
    t.finish(format!("face posets n = 3, 4; C_n chambers for n <= 6; {swept} generic points"))
}

fn c16(_: &Config) -> Result<(bool, String)> {
    let mut t = Tally::new();
    for n in 1..=4 {
        for x in grid(n, 2) {
            if x[0] == 0 {
                continue;
            }
            let s = spec(&x)?;
            let count = enumerate_vertices(&s)?.len() as u64;
            let f = face_structure(&s)?;
            t.check(count == f.vertex_count, || format!("x = {x:?}: {count} vs {:?}", f.blocks));
        }
    }
    t.finish("n <= 4, entries <= 2 with x_1 > 0")
}

fn c17(cfg: &Config) -> Result<(bool, String)> {
    let mut t = Tally::new();
    let one_minus_p = Poly::univariate(&[int(1), int(-1)]);
    for n in 1..=6 {
        t.check(daniels_poly(n)? == one_minus_p, || format!("n = {n}"));
    }
    let r: Vec<Rational> = (1..=5).map(|j| rat(3 * j, 50)).collect();
    let mc = mc_band(&BandSpec::lower(r)?, cfg.mc_trials as u64, cfg.seed)?;
    t.check(mc.agrees_with(0.7, 3.0), || format!("Monte Carlo {} +- {}", mc.estimate, mc.std_error));
    t.finish(format!(
        "exact for n <= 6; Monte Carlo n=5 p=0.3: {:.5} +- {:.5} over {} trials",
        mc.estimate, mc.std_error, mc.trials
    ))
}

fn c18(cfg: &Config) -> Result<(bool, String)> {
    let mut t = Tally::new();
    let mut r = stream(cfg, 18);
    let mut by_m = [0usize; 4];
    let total = cfg.poset_cases.max(4);
    for k in 0..total {
        let m = (k % 4) as i64;
        let n = r.gen_range(m as usize + 1..=5);
        let b = rat(r.gen_range(1..=60), 60 * n as i64);
        let x = &b * int(m) + &b * rat(r.gen_range(0..60), 60);
        let f = pyke_formula(n, &b, &x)?;
        let v = pyke_volume(n, &b, &x)?;
        by_m[m as usize] += 1;
        t.check(f == v, || format!("n={n} b={b} x={x}: {f} vs {v}"));
    }
    t.finish(format!("floor(x/b) = 0,1,2,3 counts {by_m:?}"))
}

fn c19(cfg: &Config) -> Result<(bool, String)> {
    let mut t = Tally::new();
    let mut r = stream(cfg, 19);
    for _ in 0..cfg.poset_cases {
        let n = r.gen_range(1..=4);
        let mut b: Vec<i64> = (0..n).map(|_| r.gen_range(0..=6)).collect();
        let mut c: Vec<i64> = (0..n).map(|_| r.gen_range(0..=8)).collect();
        b.sort_unstable();
        c.sort_unstable();
        let d = steck_count(&b, &c)?;
        let s = steck_count_brute(&b, &c)?;
        t.check(d == BigInt::from(s), || format!("b={b:?} c={c:?}: {d} vs {s}"));
    }
    t.finish("n <= 4")
}

fn random_two_sided(n: usize, r: &mut ChaCha8Rng) -> Result<TwoSidedSpec> {
    let z: Vec<i64> = (0..n).map(|_| r.gen_range(0..=3)).collect();
    let mut x = Vec::with_capacity(n);
    let (mut v, mut u) = (0, 0);
    for zi in &z {
        v += zi;
        let xi = (v - u).max(0) + r.gen_range(0..=3);
        u += xi;
        x.push(xi);
    }
    TwoSidedSpec::from_integers(&z, &x)
}

fn c20(cfg: &Config) -> Result<(bool, String)> {
    let mut t = Tally::new();
    let mut r = stream(cfg, 20);
    let mut regimes = [0usize; 2];
    let mut attempts = 0;
    while regimes.iter().any(|&k| k < 50) {
        attempts += 1;
        if attempts > 100_000 {
            return Ok((false, format!("could not sample both regimes: {regimes:?}")));
        }
        let s = random_two_sided(2, &mut r)?;
        let first = s.x()[0] >= &s.z()[0] + &s.z()[1];
        let slot = usize::from(!first);
        if regimes[slot] >= 50 {
            continue;
        }
        regimes[slot] += 1;
        let a = two_sided_closed_form_n2(&s)?;
        let b = two_sided_count(&s)?;
        t.check(a == BigInt::from(b), || format!("z={:?} x={:?}: {a} vs {b}", s.z(), s.x()));
    }
    for n in 1..=3 {
        for _ in 0..cfg.random_cases {
            let s = random_two_sided(n, &mut r)?;
            let a = two_sided_cell_sum(&s)?;
            let b = two_sided_count(&s)?;
            t.check(a == BigInt::from(b), || format!("cells z={:?} x={:?}: {a} vs {b}", s.z(), s.x()));
        }
    }
    t.finish(format!("50 specs per n = 2 regime, {} cell sums per n <= 3", cfg.random_cases))
}

fn c21(_: &Config) -> Result<(bool, String)> {
    let mut t = Tally::new();
    let qs = [rat(1, 2), rat(2, 3), int(2), rat(5, 3), rat(-3, 7)];
    for n in 1..=4usize {
        for q in &qs {
            let x: Vec<Rational> = (0..n).map(|i| pow(q, i as u32)).collect();
            let lhs = scaled_volume_at(&x)?;
            let rhs = kreweras_side(n, q)?;
            t.check(lhs == rhs, || format!("n={n} q={q}: {lhs} vs {rhs}"));
        }
    }
    t.finish("5 values of q per n <= 4")
}
