//! Plane binary trees, the fan `F_n` and the subdivision of `Π_n(x)` into
//! the cells `Δ_T`.

mod faces;
mod fan;
mod phi;

use std::fmt;

use serde::Serialize;

use crate::ballot::{is_ballot, BallotComposition};
use crate::error::{domain, resource, Error, Result};

pub use faces::{
    chamber_geometry, enumerate_vertices, face_structure, polytope_vertices, subdivision_obj, subdivision_svg,
    ChamberGeometry, FaceStructure,
};
pub use fan::{
    assoc_face_poset_check, chamber_rays, fan_face_counts, fan_inequalities, locate_in_fan, p_d, tree_of_triangulation,
    tree_triangulation, FanLocation, PolygonDecomposition, Sense, SignedIntervalInequality,
};
pub use phi::{build_tree_phi, delta_membership, delta_volume, PlantedTreeWithLengths};

/// Largest `n` accepted by [`enumerate_trees`].
pub const MAX_TREE_SIZE: usize = 10;

/// Shape of a plane binary tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Leaf,
    Internal(Box<Node>, Box<Node>),
}

impl Node {
    pub fn internal(left: Node, right: Node) -> Node {
        Node::Internal(Box::new(left), Box::new(right))
    }

    fn size(&self) -> usize {
        match self {
            Node::Leaf => 0,
            Node::Internal(l, r) => 1 + l.size() + r.size(),
        }
    }
}

/// A plane binary tree with the binary search labeling `1..n` of its
/// internal vertices: each label exceeds those in its left subtree and is
/// below those in its right subtree.
///
/// Label-indexed tables use slot 0 for "leaf" or "none".
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlaneBinaryTree {
    shape: Node,
    left: Vec<usize>,
    right: Vec<usize>,
    parent: Vec<usize>,
    root: usize,
}

#[derive(Serialize)]
struct TreeJson {
    parens: String,
    preorder: Vec<usize>,
}

impl Serialize for PlaneBinaryTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TreeJson { parens: self.to_parens(), preorder: self.preorder() }.serialize(s)
    }
}

impl PlaneBinaryTree {
    pub fn from_shape(shape: Node) -> Self {
        let n = shape.size();
        let mut t = PlaneBinaryTree {
            shape: Node::Leaf,
            left: vec![0; n + 1],
            right: vec![0; n + 1],
            parent: vec![0; n + 1],
            root: 0,
        };
        let mut counter = 0;
        t.root = t.label(&shape, &mut counter);
        t.shape = shape;
        t
    }

    fn label(&mut self, node: &Node, counter: &mut usize) -> usize {
        match node {
            Node::Leaf => 0,
            Node::Internal(l, r) => {
                let a = self.label(l, counter);
                *counter += 1;
                let me = *counter;
                let b = self.label(r, counter);
                self.left[me] = a;
                self.right[me] = b;
                if a > 0 {
                    self.parent[a] = me;
                }
                if b > 0 {
                    self.parent[b] = me;
                }
                me
            }
        }
    }

    /// Number of internal vertices.
    pub fn n(&self) -> usize {
        self.left.len() - 1
    }

    pub fn shape(&self) -> &Node {
        &self.shape
    }

    /// Label of the root, 0 for the one-leaf tree.
    pub fn root(&self) -> usize {
        self.root
    }

    /// Internal left child of `i`, if any.
    pub fn left(&self, i: usize) -> Option<usize> {
        Some(self.left[i]).filter(|&c| c > 0)
    }

    pub fn right(&self, i: usize) -> Option<usize> {
        Some(self.right[i]).filter(|&c| c > 0)
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        Some(self.parent[i]).filter(|&c| c > 0)
    }

    /// Pairs `(parent, child)` of internal vertices, ordered by child.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        (1..=self.n()).filter_map(|c| self.parent(c).map(|p| (p, c))).collect()
    }

    /// Smallest and largest label in the subtree of `i`.
    pub fn subtree_range(&self, i: usize) -> (usize, usize) {
        let mut lo = i;
        while let Some(l) = self.left(lo) {
            lo = l;
        }
        let mut hi = i;
        while let Some(r) = self.right(hi) {
            hi = r;
        }
        (lo, hi)
    }

    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            if v == 0 {
                continue;
            }
            out.push(v);
            stack.push(self.right[v]);
            stack.push(self.left[v]);
        }
        out
    }

    /// Balanced parentheses: a leaf is empty and an internal vertex is `(L)R`.
    pub fn to_parens(&self) -> String {
        fn go(node: &Node, out: &mut String) {
            if let Node::Internal(l, r) = node {
                out.push('(');
                go(l, out);
                out.push(')');
                go(r, out);
            }
        }
        let mut s = String::new();
        go(&self.shape, &mut s);
        s
    }

    pub fn from_parens(s: &str) -> Result<Self> {
        fn parse(b: &[u8], pos: &mut usize) -> Result<Node> {
            if *pos >= b.len() || b[*pos] == b')' {
                return Ok(Node::Leaf);
            }
            if b[*pos] != b'(' {
                return Err(Error::Parse(format!("unexpected character at {}", *pos)));
            }
            *pos += 1;
            let l = parse(b, pos)?;
            if *pos >= b.len() || b[*pos] != b')' {
                return Err(Error::Parse("unbalanced parentheses".into()));
            }
            *pos += 1;
            let r = parse(b, pos)?;
            Ok(Node::internal(l, r))
        }
        let b = s.trim().as_bytes();
        let mut pos = 0;
        let node = parse(b, &mut pos)?;
        if pos != b.len() {
            return Err(Error::Parse(format!("trailing input in tree {s:?}")));
        }
        Ok(Self::from_shape(node))
    }

    /// `n` vertices, each the left child of the next.
    pub fn left_comb(n: usize) -> Self {
        Self::from_shape((0..n).fold(Node::Leaf, |acc, _| Node::internal(acc, Node::Leaf)))
    }

    pub fn right_comb(n: usize) -> Self {
        Self::from_shape((0..n).fold(Node::Leaf, |acc, _| Node::internal(Node::Leaf, acc)))
    }
}

impl fmt::Display for PlaneBinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_parens())
    }
}

fn shapes(n: usize) -> Vec<Node> {
    let mut table: Vec<Vec<Node>> = vec![vec![Node::Leaf]];
    for m in 1..=n {
        let mut row = Vec::new();
        for i in 0..m {
            for l in &table[i] {
                for r in &table[m - 1 - i] {
                    row.push(Node::internal(l.clone(), r.clone()));
                }
            }
        }
        table.push(row);
    }
    table.swap_remove(n)
}

/// All plane binary trees with `n` internal vertices, by size of the left subtree.
pub fn enumerate_trees(n: usize) -> Result<Vec<PlaneBinaryTree>> {
    if n > MAX_TREE_SIZE {
        return resource(format!("tree enumeration with n = {n} (limit {MAX_TREE_SIZE})"));
    }
    Ok(shapes(n).into_iter().map(PlaneBinaryTree::from_shape).collect())
}

/// `k_i = 0` when the left child of `i` is internal, else the length of the
/// chain of left-child steps upward from `i`.
pub fn k_of_tree(t: &PlaneBinaryTree) -> Result<BallotComposition> {
    let parts = (1..=t.n())
        .map(|i| {
            if t.left(i).is_some() {
                return 0;
            }
            let mut r = 1;
            let mut v = i;
            while let Some(p) = t.parent(v) {
                if t.left(p) != Some(v) {
                    break;
                }
                r += 1;
                v = p;
            }
            r
        })
        .collect();
    BallotComposition::new(parts)
}

/// Inverse of [`k_of_tree`] by the left/right walk.
pub fn tree_of_k(k: &[u32]) -> Result<PlaneBinaryTree> {
    if !is_ballot(k) {
        return domain(format!("{k:?} is not a ballot composition"));
    }
    // arena: (left, right, parent), usize::MAX for none
    const NONE: usize = usize::MAX;
    let mut nodes: Vec<[usize; 3]> = vec![[NONE; 3]];
    let mut cur = 0;
    let grow_left = |nodes: &mut Vec<[usize; 3]>, cur: &mut usize, steps: u32| {
        for _ in 0..steps {
            nodes.push([NONE, NONE, *cur]);
            let id = nodes.len() - 1;
            nodes[*cur][0] = id;
            *cur = id;
        }
    };
    grow_left(&mut nodes, &mut cur, k[0] - 1);
    for &ki in &k[1..] {
        if ki > 0 {
            if nodes[cur][1] != NONE {
                return domain(format!("walk for {k:?} revisits a right child"));
            }
            nodes.push([NONE, NONE, cur]);
            let id = nodes.len() - 1;
            nodes[cur][1] = id;
            cur = id;
            grow_left(&mut nodes, &mut cur, ki - 1);
        } else {
            loop {
                let p = nodes[cur][2];
                if p == NONE {
                    return domain(format!("walk for {k:?} falls below the root"));
                }
                let was_left = nodes[p][0] == cur;
                cur = p;
                if was_left {
                    break;
                }
            }
        }
    }
    fn to_node(nodes: &[[usize; 3]], id: usize) -> Node {
        if id == usize::MAX {
            return Node::Leaf;
        }
        Node::internal(to_node(nodes, nodes[id][0]), to_node(nodes, nodes[id][1]))
    }
    Ok(PlaneBinaryTree::from_shape(to_node(&nodes, 0)))
}
