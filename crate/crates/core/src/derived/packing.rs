//! The orthogonal circle packing centered at the mesh vertices.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{LatticeCoord, SquaredLength};
use crate::mesh::{Mesh, VertexId};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circle {
    pub center: LatticeCoord,
    /// Exact squared radius.
    pub radius_sq: SquaredLength,
    /// Floating-point mirror of the radius.
    pub radius: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CirclePacking {
    circles: BTreeMap<VertexId, Circle>,
}

impl CirclePacking {
    pub fn get(&self, v: VertexId) -> Option<&Circle> {
        self.circles.get(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, &Circle)> + '_ {
        self.circles.iter().map(|(v, c)| (*v, c))
    }

    pub fn len(&self) -> usize {
        self.circles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circles.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PackingError {
    #[error("faces around vertex at {0:?} disagree on its radius")]
    InconsistentRadius(LatticeCoord),
}

/// `|v - X|²` where `X`, the crossing point of the face diagonals, is the
/// midpoint of corners 1 and 3.
fn radius_sq_in_face(v: LatticeCoord, c1: LatticeCoord, c3: LatticeCoord) -> SquaredLength {
    (v + v - c1 - c3).norm_sq() / Ratio::from_integer(4)
}

/// One circle per vertex through the diagonal crossings of its faces.
pub fn build_packing(mesh: &Mesh) -> Result<CirclePacking, PackingError> {
    let mut circles = BTreeMap::new();
    for (v, pos) in mesh.vertices() {
        let mut r2: Option<SquaredLength> = None;
        for &f in mesh.faces_of(v) {
            let c = mesh.face_positions(f);
            let here = radius_sq_in_face(pos, c[1], c[3]);
            match r2 {
                None => r2 = Some(here),
                Some(r) if r != here => return Err(PackingError::InconsistentRadius(pos)),
                _ => {}
            }
        }
        let Some(radius_sq) = r2 else { continue };
        let radius = ratio_f64(&radius_sq).sqrt();
        circles.insert(
            v,
            Circle {
                center: pos,
                radius_sq,
                radius,
            },
        );
    }
    Ok(CirclePacking { circles })
}

pub(crate) fn ratio_f64(r: &Ratio<i128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Outcome of [`validate_packing`].
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct PackingReport {
    pub orthogonal_pairs: usize,
    pub tangent_pairs: usize,
    /// Pairs without a common face whose centers lie within twice the sum
    /// of their radii, each checked exactly.
    pub disjoint_pairs: usize,
    /// Largest gap between the exact radii and an independent
    /// floating-point diagonal intersection.
    pub max_float_error: f64,
    pub violations: Vec<String>,
}

impl PackingReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// How two circles with squared radii `ru2`, `rv2` at squared distance `d2`
/// relate, decided exactly after scaling by `1 / ru2`.
#[derive(Debug, PartialEq, Eq)]
enum Contact {
    Orthogonal,
    Tangent,
    Disjoint,
    Overlapping,
}

fn contact(ru2: SquaredLength, rv2: SquaredLength, d2: SquaredLength) -> Contact {
    let one = Ratio::from_integer(1);
    let x = rv2 / ru2;
    let dd = d2 / ru2;
    if dd == one + x {
        return Contact::Orthogonal;
    }
    // |uv| vs r_u + r_v: compare (dd - 1 - x)² with 4x when dd - 1 - x >= 0
    let gap = dd - one - x;
    if gap < Ratio::from_integer(0) {
        return Contact::Overlapping;
    }
    let lhs = gap * gap;
    let rhs = x * Ratio::from_integer(4);
    match lhs.cmp(&rhs) {
        std::cmp::Ordering::Equal => Contact::Tangent,
        std::cmp::Ordering::Greater => Contact::Disjoint,
        std::cmp::Ordering::Less => Contact::Overlapping,
    }
}

fn float_radius(v: LatticeCoord, c: &[LatticeCoord; 4]) -> f64 {
    // Intersection of lines c0c2 and c1c3.
    let p = c.map(|x| x.to_cartesian());
    let (d1, d2) = ((p[2].0 - p[0].0, p[2].1 - p[0].1), (p[3].0 - p[1].0, p[3].1 - p[1].1));
    let den = d1.0 * d2.1 - d1.1 * d2.0;
    let t = ((p[1].0 - p[0].0) * d2.1 - (p[1].1 - p[0].1) * d2.0) / den;
    let x = (p[0].0 + t * d1.0, p[0].1 + t * d1.1);
    let q = v.to_cartesian();
    (q.0 - x.0).hypot(q.1 - x.1)
}

/// Checks orthogonality along every edge, tangency across every face,
/// the radius ratios, the floating-point mirror, and that no two circles
/// without a common face meet anywhere in the mesh.
///
/// Pairs of boundary vertices are exempt from the disjointness check.
pub fn validate_packing(packing: &CirclePacking, mesh: &Mesh) -> PackingReport {
    let mut rep = PackingReport::default();
    let three = Ratio::from_integer(3);
    let nine = Ratio::from_integer(9);
    let one = Ratio::from_integer(1);
    let circle = |v: VertexId| packing.get(v).expect("circle for every vertex");

    let mut edges: Vec<_> = mesh.edges().map(|(e, _)| e).collect();
    edges.sort();
    for (u, v) in edges {
        let (cu, cv) = (circle(u), circle(v));
        let d2 = (cu.center - cv.center).norm_sq();
        if contact(cu.radius_sq, cv.radius_sq, d2) != Contact::Orthogonal {
            rep.violations
                .push(format!("edge {:?}-{:?}: circles not orthogonal", cu.center, cv.center));
        }
        let x = cv.radius_sq / cu.radius_sq;
        if x != three && x != one / three {
            rep.violations
                .push(format!("edge {:?}-{:?}: radius ratio² {x}", cu.center, cv.center));
        }
        rep.orthogonal_pairs += 1;
    }

    let mut faces: Vec<_> = mesh.faces().map(|(f, face)| (f, face.corners)).collect();
    faces.sort();
    for (f, corners) in &faces {
        for (a, b) in [(0, 2), (1, 3)] {
            let (ca, cb) = (circle(corners[a]), circle(corners[b]));
            let d2 = (ca.center - cb.center).norm_sq();
            if contact(ca.radius_sq, cb.radius_sq, d2) != Contact::Tangent {
                rep.violations.push(format!("face {f:?}: opposite circles not tangent"));
            }
            let x = cb.radius_sq / ca.radius_sq;
            if x > nine || x < one / nine {
                rep.violations.push(format!("face {f:?}: tangent radius ratio² {x}"));
            }
            rep.tangent_pairs += 1;
        }
        let pos = corners.map(|v| mesh.position(v));
        for &v in corners {
            let err = (float_radius(mesh.position(v), &pos) - circle(v).radius).abs();
            rep.max_float_error = rep.max_float_error.max(err);
        }
    }
    if rep.max_float_error > 1e-9 {
        rep.violations
            .push(format!("float mirror off by {}", rep.max_float_error));
    }

    // Every pair of circles within twice touching distance, found through
    // bucket grids per pair of radius classes, must be related by a face
    // or else be disjoint.
    let mut related: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    for (_, corners) in &faces {
        for i in 0..4 {
            for j in i + 1..4 {
                related.insert((corners[i].min(corners[j]), corners[i].max(corners[j])));
            }
        }
    }
    type Sited = Vec<(VertexId, (f64, f64))>;
    let mut classes: BTreeMap<SquaredLength, Sited> = BTreeMap::new();
    for (v, c) in packing.iter() {
        classes
            .entry(c.radius_sq)
            .or_default()
            .push((v, c.center.to_cartesian()));
    }
    let classes: Vec<_> = classes.into_iter().collect();
    for (ia, (ra2, small)) in classes.iter().enumerate() {
        for (rb2, large) in &classes[ia..] {
            let window = 2.0 * (ratio_f64(ra2).sqrt() + ratio_f64(rb2).sqrt());
            let cell = |p: (f64, f64)| ((p.0 / window).floor() as i64, (p.1 / window).floor() as i64);
            let mut grid: BTreeMap<(i64, i64), Sited> = BTreeMap::new();
            for &(w, p) in large {
                grid.entry(cell(p)).or_default().push((w, p));
            }
            for &(u, pu) in small {
                let (i, j) = cell(pu);
                for (di, dj) in (-1..=1).flat_map(|a| (-1..=1).map(move |b| (a, b))) {
                    for &(w, pw) in grid.get(&(i + di, j + dj)).into_iter().flatten() {
                        let key = (u.min(w), u.max(w));
                        if u == w || (ra2 == rb2 && w < u) || related.contains(&key) {
                            continue;
                        }
                        if (pu.0 - pw.0).hypot(pu.1 - pw.1) > window {
                            continue;
                        }
                        // The face relating two boundary vertices may lie outside the patch.
                        if mesh.is_boundary_vertex(u) && mesh.is_boundary_vertex(w) {
                            continue;
                        }
                        let (cu, cw) = (circle(u), circle(w));
                        let d2 = (cu.center - cw.center).norm_sq();
                        if contact(cu.radius_sq, cw.radius_sq, d2) != Contact::Disjoint {
                            rep.violations
                                .push(format!("circles at {:?} and {:?} overlap", cu.center, cw.center));
                        }
                        rep.disjoint_pairs += 1;
                    }
                }
            }
        }
    }
    rep
}
