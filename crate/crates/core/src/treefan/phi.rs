//! The planted tree `φ(x, y)` and the cells `Δ_T(x)`.

use num_traits::{One, Zero};
use serde::Serialize;

use super::{fan_inequalities, k_of_tree, Node, PlaneBinaryTree};
use crate::error::{domain, Result};
use crate::exactmath::combin::inv_factorial;
use crate::exactmath::rational::pow;
use crate::exactmath::{fmt_rational, Rational};
use crate::volume::PolytopeSpec;

/// A planted plane tree drawn with edge lengths; vertex 0 is the root at
/// height 0 and every edge length is a height difference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlantedTreeWithLengths {
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    pub heights: Vec<Rational>,
    /// `labels[i - 1]` is where the walk stands after its `i`-th down step.
    pub labels: Vec<usize>,
    /// Set when some step had length 0 or a down step ended on an existing vertex.
    pub degenerate: bool,
}

#[derive(Serialize)]
struct EdgeJson {
    from: usize,
    to: usize,
    length: String,
}

#[derive(Serialize)]
struct PlantedJson {
    edges: Vec<EdgeJson>,
    labels: Vec<usize>,
    degenerate: bool,
    tree: Option<String>,
}

impl Serialize for PlantedTreeWithLengths {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PlantedJson {
            edges: self
                .edges()
                .into_iter()
                .map(|(from, to, l)| EdgeJson { from, to, length: fmt_rational(&l) })
                .collect(),
            labels: self.labels.clone(),
            degenerate: self.degenerate,
            tree: self.unplanted().map(|t| t.to_parens()),
        }
        .serialize(s)
    }
}

impl PlantedTreeWithLengths {
    /// `(parent, child, length)` in vertex order.
    pub fn edges(&self) -> Vec<(usize, usize, Rational)> {
        (1..self.heights.len())
            .filter_map(|v| self.parent[v].map(|p| (p, v, &self.heights[v] - &self.heights[p])))
            .collect()
    }

    pub fn total_length(&self) -> Rational {
        self.edges().into_iter().map(|(_, _, l)| l).sum()
    }

    /// The plane binary tree left after removing the root edge, when the
    /// walk was generic.
    pub fn unplanted(&self) -> Option<PlaneBinaryTree> {
        if self.degenerate || self.children[0].len() != 1 {
            return None;
        }
        fn shape(t: &PlantedTreeWithLengths, v: usize) -> Option<Node> {
            match t.children[v].as_slice() {
                [] => Some(Node::Leaf),
                [l, r] => Some(Node::internal(shape(t, *l)?, shape(t, *r)?)),
                _ => None,
            }
        }
        shape(self, self.children[0][0]).map(PlaneBinaryTree::from_shape)
    }
}

/// Walks up `x_1`, down `y_1`, ..., up `s - Σx`, down `s - Σy`, growing the tree.
pub fn build_tree_phi(spec: &PolytopeSpec, y: &[Rational], s: &Rational) -> Result<PlantedTreeWithLengths> {
    if !spec.contains(y) {
        return domain("y is not in the polytope");
    }
    let sx: Rational = spec.x().iter().sum();
    let sy: Rational = y.iter().sum();
    if &sx >= s || &sy >= s {
        return domain(format!("total length {s} must exceed both sums"));
    }
    let mut t = PlantedTreeWithLengths {
        parent: vec![None],
        children: vec![vec![]],
        heights: vec![Rational::zero()],
        labels: Vec::with_capacity(spec.n()),
        degenerate: false,
    };
    let ups: Vec<Rational> = spec.x().iter().cloned().chain([s - &sx]).collect();
    let downs: Vec<Rational> = y.iter().cloned().chain([s - &sy]).collect();
    // path from the root to the current vertex
    let mut path = vec![0usize];
    for (step, (up, down)) in ups.iter().zip(&downs).enumerate() {
        let cur = *path.last().expect("path is never empty");
        if up.is_zero() {
            t.degenerate = true;
        } else {
            let h = &t.heights[cur] + up;
            let v = t.add_vertex(Some(cur), h);
            t.children[cur].push(v);
            path.push(v);
        }
        let top = *path.last().expect("path is never empty");
        let target = &t.heights[top] - down;
        if down.is_zero() {
            t.degenerate = true;
        }
        while path.len() > 1 && t.heights[path[path.len() - 2]] > target {
            path.pop();
        }
        let below = path[path.len() - 1];
        let stop = if path.len() > 1 && t.heights[path[path.len() - 2]] == target {
            path.pop();
            path[path.len() - 1]
        } else if t.heights[below] == target {
            below
        } else {
            // `below` sits above the target here; split its parent edge
            let p = t.parent[below].expect("target is above the root");
            let w = t.add_vertex(Some(p), target.clone());
            let slot = t.children[p].iter().position(|&c| c == below).expect("child listed");
            t.children[p][slot] = w;
            t.children[w].push(below);
            t.parent[below] = Some(w);
            path.pop();
            path.push(w);
            w
        };
        if step < spec.n() {
            if t.children[stop].len() > 1 || stop == 0 {
                t.degenerate = true;
            }
            t.labels.push(stop);
        }
    }
    Ok(t)
}

impl PlantedTreeWithLengths {
    fn add_vertex(&mut self, parent: Option<usize>, height: Rational) -> usize {
        self.parent.push(parent);
        self.children.push(vec![]);
        self.heights.push(height);
        self.heights.len() - 1
    }
}

/// Membership of `y` in the closed cell `Δ̄_T(x)`.
pub fn delta_membership(t: &PlaneBinaryTree, spec: &PolytopeSpec, y: &[Rational]) -> bool {
    t.n() == spec.n()
        && spec.contains(y)
        && fan_inequalities(t).iter().all(|q| q.polytope_slack(spec, y) >= Rational::zero())
}

/// `Π x_i^{k_i} / k_i!` with `k = k(T)`.
pub fn delta_volume(t: &PlaneBinaryTree, spec: &PolytopeSpec) -> Result<Rational> {
    if t.n() != spec.n() {
        return Err(crate::Error::Dimension(format!("tree with {} vertices for n = {}", t.n(), spec.n())));
    }
    let k = k_of_tree(t)?;
    Ok(k.parts()
        .iter()
        .zip(spec.x())
        .fold(Rational::one(), |acc, (&ki, xi)| acc * pow(xi, ki) * inv_factorial(ki)))
}
