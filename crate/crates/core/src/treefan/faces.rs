//! Vertices and combinatorial type of `Π_n(x)`, and explicit geometry of
//! the cells `Δ_T(x)` for `n = 2, 3`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use itertools::Itertools;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{enumerate_trees, fan_inequalities, k_of_tree, Sense};
use crate::error::{domain, resource, Result};
use crate::exactmath::matrix::solve;
use crate::exactmath::rational::to_f64;
use crate::exactmath::{fmt_rational, Rational};
use crate::volume::PolytopeSpec;

/// Largest `n` for the subset scan in [`enumerate_vertices`].
pub const MAX_VERTEX_SCAN: usize = 8;

/// A halfspace `a · y <= b`.
type Halfspace = (Vec<Rational>, Rational);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceStructure {
    pub blocks: Vec<usize>,
    pub vertex_count: u64,
}

/// Block sizes from the runs of equal `u_i`; the polytope has the type of
/// the product of simplices of those dimensions.
pub fn face_structure(spec: &PolytopeSpec) -> Result<FaceStructure> {
    if spec.x()[0].is_zero() {
        return domain("face structure needs x_1 > 0");
    }
    let mut blocks = vec![1usize];
    for w in spec.u().windows(2) {
        if w[0] == w[1] {
            *blocks.last_mut().expect("nonempty") += 1;
        } else {
            blocks.push(1);
        }
    }
    let vertex_count = blocks.iter().map(|&b| b as u64 + 1).product();
    Ok(FaceStructure { blocks, vertex_count })
}

fn polytope_halfspaces(spec: &PolytopeSpec) -> Vec<Halfspace> {
    let n = spec.n();
    let mut hs = Vec::with_capacity(2 * n);
    for i in 0..n {
        let mut a = vec![Rational::zero(); n];
        a[i] = -Rational::one();
        hs.push((a, Rational::zero()));
    }
    for (i, u) in spec.u().iter().enumerate() {
        let a = (0..n).map(|h| if h <= i { Rational::one() } else { Rational::zero() }).collect();
        hs.push((a, u.clone()));
    }
    hs
}

fn dot(a: &[Rational], y: &[Rational]) -> Rational {
    a.iter().zip(y).map(|(p, q)| p * q).sum()
}

/// Vertices of `{ y : a · y <= b }` by solving every `n`-subset of the
/// boundary hyperplanes, sorted and deduplicated.
pub fn polytope_vertices(halfspaces: &[(Vec<Rational>, Rational)], n: usize) -> Vec<Vec<Rational>> {
    let mut out = BTreeSet::new();
    for subset in (0..halfspaces.len()).combinations(n) {
        let a: Vec<Vec<Rational>> = subset.iter().map(|&i| halfspaces[i].0.clone()).collect();
        let b: Vec<Rational> = subset.iter().map(|&i| halfspaces[i].1.clone()).collect();
        if let Some(y) = solve(&a, &b) {
            if halfspaces.iter().all(|(a, b)| &dot(a, &y) <= b) {
                out.insert(y);
            }
        }
    }
    out.into_iter().collect()
}

/// Vertices of `Π_n(x)`.
pub fn enumerate_vertices(spec: &PolytopeSpec) -> Result<Vec<Vec<Rational>>> {
    if spec.n() > MAX_VERTEX_SCAN {
        return resource(format!("vertex scan with n = {} (limit {MAX_VERTEX_SCAN})", spec.n()));
    }
    Ok(polytope_vertices(&polytope_halfspaces(spec), spec.n()))
}

/// One closed cell `Δ̄_T(x)` with its defining data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChamberGeometry {
    pub tree: String,
    pub k: Vec<u32>,
    pub volume: String,
    pub inequalities: Vec<String>,
    pub vertices: Vec<Vec<String>>,
    #[serde(skip)]
    exact_vertices: Vec<Vec<Rational>>,
    #[serde(skip)]
    halfspaces: Vec<Halfspace>,
}

/// The cells of the subdivision of `Π_n(x)` for `n <= 3`.
pub fn chamber_geometry(spec: &PolytopeSpec) -> Result<Vec<ChamberGeometry>> {
    let n = spec.n();
    if n > 3 {
        return domain(format!("explicit geometry is produced for n <= 3, got {n}"));
    }
    let base = polytope_halfspaces(spec);
    enumerate_trees(n)?
        .into_iter()
        .map(|t| {
            let ineqs = fan_inequalities(&t);
            let mut hs = base.clone();
            for q in &ineqs {
                let xs: Rational = spec.x()[q.lo - 1..q.hi].iter().sum();
                let ind: Vec<Rational> =
                    (1..=n).map(|h| if q.lo <= h && h <= q.hi { Rational::one() } else { Rational::zero() }).collect();
                match q.sense {
                    Sense::Le => hs.push((ind, xs)),
                    Sense::Ge => hs.push((ind.into_iter().map(|c| -c).collect(), -xs)),
                }
            }
            let exact_vertices = polytope_vertices(&hs, n);
            Ok(ChamberGeometry {
                tree: t.to_parens(),
                k: k_of_tree(&t)?.parts().to_vec(),
                volume: fmt_rational(&super::delta_volume(&t, spec)?),
                inequalities: ineqs.iter().map(|q| q.polytope_text(spec)).collect(),
                vertices: exact_vertices.iter().map(|v| v.iter().map(fmt_rational).collect()).collect(),
                exact_vertices,
                halfspaces: hs,
            })
        })
        .collect()
}

fn floats(v: &[Rational]) -> Vec<f64> {
    v.iter().map(to_f64).collect()
}

/// Orders coplanar points around their centroid; `normal` is `None` in the plane.
fn cyclic_order(points: &[Vec<f64>], normal: Option<&[f64]>) -> Vec<usize> {
    let d = points[0].len();
    let c: Vec<f64> = (0..d).map(|k| points.iter().map(|p| p[k]).sum::<f64>() / points.len() as f64).collect();
    let rel: Vec<Vec<f64>> = points.iter().map(|p| p.iter().zip(&c).map(|(a, b)| a - b).collect()).collect();
    let angle: Vec<f64> = match normal {
        None => rel.iter().map(|r| r[1].atan2(r[0])).collect(),
        Some(nv) => {
            let e1 = rel.iter().find(|r| r.iter().any(|v| v.abs() > 1e-12)).cloned().unwrap_or(vec![1.0, 0.0, 0.0]);
            let e2 = [nv[1] * e1[2] - nv[2] * e1[1], nv[2] * e1[0] - nv[0] * e1[2], nv[0] * e1[1] - nv[1] * e1[0]];
            let dotf = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
            rel.iter().map(|r| dotf(r, &e2).atan2(dotf(r, &e1))).collect()
        }
    };
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| angle[a].total_cmp(&angle[b]));
    idx
}

/// SVG drawing of the cells of `Π_2(x)`, coordinates `(y_1, y_2)`.
pub fn subdivision_svg(spec: &PolytopeSpec) -> Result<String> {
    if spec.n() != 2 {
        return domain("SVG output is for n = 2");
    }
    let cells = chamber_geometry(spec)?;
    let scale = 80.0;
    let pad = 20.0;
    let w = to_f64(&spec.u()[0]) * scale + 2.0 * pad;
    let h = to_f64(&spec.u()[1]) * scale + 2.0 * pad;
    let colors = ["#9ecae1", "#fdae6b"];
    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#).ok();
    for (i, cell) in cells.iter().enumerate() {
        let pts: Vec<Vec<f64>> = cell.exact_vertices.iter().map(|v| floats(v)).collect();
        if pts.len() < 3 {
            continue;
        }
        let poly = cyclic_order(&pts, None)
            .into_iter()
            .map(|k| format!("{:.3},{:.3}", pad + pts[k][0] * scale, h - pad - pts[k][1] * scale))
            .join(" ");
        writeln!(
            s,
            r#"  <polygon points="{poly}" fill="{}" stroke="black" stroke-width="1"><title>{} k={:?}</title></polygon>"#,
            colors[i % colors.len()],
            cell.tree,
            cell.k
        )
        .ok();
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Wavefront OBJ with one object per cell of `Π_3(x)`.
pub fn subdivision_obj(spec: &PolytopeSpec) -> Result<String> {
    if spec.n() != 3 {
        return domain("OBJ output is for n = 3");
    }
    let cells = chamber_geometry(spec)?;
    let mut s = String::from("# cells of the subdivision\n");
    let mut offset = 1;
    for cell in &cells {
        writeln!(s, "o cell_{}_k{}", cell.tree, cell.k.iter().join("")).ok();
        for v in &cell.exact_vertices {
            writeln!(s, "v {}", floats(v).iter().map(|c| format!("{c:.6}")).join(" ")).ok();
        }
        for (a, b) in &cell.halfspaces {
            let tight: Vec<usize> = (0..cell.exact_vertices.len()).filter(|&k| &dot(a, &cell.exact_vertices[k]) == b).collect();
            if tight.len() < 3 {
                continue;
            }
            let pts: Vec<Vec<f64>> = tight.iter().map(|&k| floats(&cell.exact_vertices[k])).collect();
            let order = cyclic_order(&pts, Some(&floats(a)));
            writeln!(s, "f {}", order.iter().map(|&k| tight[k] + offset).join(" ")).ok();
        }
        offset += cell.exact_vertices.len();
    }
    Ok(s)
}
