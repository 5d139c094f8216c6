//! The two well-centered meshes formed by the face diagonals.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::lattice::{relative_vectors, Angle, LatticeCoord, ScaledVec};
use crate::mesh::{Mesh, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum DualShape {
    /// Equilateral triangle.
    Triangle,
    /// Isosceles trapezoid with 60° base angles, parallel sides in ratio
    /// 3 : 1 and legs twice the shorter parallel side.
    Trapezoid,
    /// Equilateral triangle glued to a regular hexagon along one side.
    Pentagon,
    /// Regular hexagon.
    Hexagon,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualFace {
    /// The vertex of the other class this face surrounds.
    pub site: VertexId,
    /// Counterclockwise.
    pub cycle: Vec<VertexId>,
    /// `None` if the cycle has none of the four expected shapes.
    pub shape: Option<DualShape>,
    /// Whether `site` lies strictly inside the cycle.
    pub site_inside: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DualMesh {
    pub vertices: Vec<VertexId>,
    /// One face diagonal each, as `(lower id, higher id)`.
    pub edges: Vec<(VertexId, VertexId)>,
    pub faces: Vec<DualFace>,
    /// Faces around boundary sites, whose cycles are incomplete.
    pub dropped_boundary: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualMeshPair {
    /// The class containing the origin.
    pub red: DualMesh,
    pub blue: DualMesh,
    /// Faces whose two diagonals are not perpendicular.
    pub non_orthogonal: usize,
}

/// 2-colors the vertex graph by breadth-first search, giving the origin
/// class 0. Returns `None` if the graph is not bipartite.
pub fn bipartition(mesh: &Mesh) -> Option<BTreeMap<VertexId, u8>> {
    let mut class = BTreeMap::new();
    let mut starts: Vec<VertexId> = mesh.vertex_at(LatticeCoord::ORIGIN).into_iter().collect();
    starts.extend(mesh.vertices().map(|(v, _)| v));
    for s in starts {
        if class.contains_key(&s) {
            continue;
        }
        class.insert(s, 0u8);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            let c = class[&v];
            for u in mesh.neighbors(v) {
                match class.get(&u) {
                    None => {
                        class.insert(u, 1 - c);
                        queue.push_back(u);
                    }
                    Some(&cu) if cu == c => return None,
                    _ => {}
                }
            }
        }
    }
    Some(class)
}

/// Classifies a counterclockwise polygon exactly.
pub fn classify_polygon(p: &[LatticeCoord]) -> Option<DualShape> {
    use Angle::*;
    let n = p.len();
    if !(3..=6).contains(&n) {
        return None;
    }
    let base = p[0];
    let (_, v) = relative_vectors(base, <[LatticeCoord; 6]>::try_from(pad(p)).ok()?);
    let v = &v[..n];
    let edge = |i: usize| ScaledVec {
        a: v[(i + 1) % n].a - v[i].a,
        b: v[(i + 1) % n].b - v[i].b,
    };
    let mut angles = Vec::with_capacity(n);
    let mut sides = Vec::with_capacity(n);
    for i in 0..n {
        let into = edge((i + n - 1) % n);
        let out = edge(i);
        if into.cross(&out) <= 0 {
            return None;
        }
        angles.push(out.angle_to(&ScaledVec { a: -into.a, b: -into.b }));
        sides.push(out.norm());
    }
    let t = *sides.iter().min()?;
    // With angles rotated so the pattern starts at index `s`, check sides
    // `side[s + i] == mult[i]² · t`.
    let matches = |pattern: &[Angle], mult: &[i128]| {
        (0..n).any(|s| (0..n).all(|i| angles[(s + i) % n] == pattern[i] && sides[(s + i) % n] == mult[i] * mult[i] * t))
    };
    let shape = match n {
        3 if matches(&[Sixty; 3], &[1; 3]) => DualShape::Triangle,
        // side i joins corner i to corner i + 1
        4 if matches(&[Sixty, Sixty, OneTwenty, OneTwenty], &[3, 2, 1, 2]) => DualShape::Trapezoid,
        5 if matches(&[Sixty, OneTwenty, OneTwenty, OneTwenty, OneTwenty], &[2, 1, 1, 1, 2]) => DualShape::Pentagon,
        6 if matches(&[OneTwenty; 6], &[1; 6]) => DualShape::Hexagon,
        _ => return None,
    };
    Some(shape)
}

fn pad(p: &[LatticeCoord]) -> Vec<LatticeCoord> {
    let mut v = p.to_vec();
    v.resize(6, p[0]);
    v
}

/// Whether `site` is strictly inside the counterclockwise convex polygon.
fn strictly_inside(site: LatticeCoord, p: &[LatticeCoord]) -> bool {
    let n = p.len();
    let (_, v) = relative_vectors(site, <[LatticeCoord; 6]>::try_from(pad(p)).expect("six"));
    (0..n).all(|i| v[i].cross(&v[(i + 1) % n]) > 0)
}

/// Splits the face diagonals into the two dual meshes.
pub fn dual_meshes(mesh: &Mesh) -> DualMeshPair {
    let class = bipartition(mesh).expect("diamond-kite meshes are bipartite");
    let mut pair = DualMeshPair {
        red: DualMesh::default(),
        blue: DualMesh::default(),
        non_orthogonal: 0,
    };
    for (&v, &c) in &class {
        let target = if c == 0 { &mut pair.red } else { &mut pair.blue };
        target.vertices.push(v);
    }
    let mut faces: Vec<_> = mesh.faces().map(|(f, face)| (f, face.corners)).collect();
    faces.sort();
    for (f, c) in faces {
        let pos = mesh.face_positions(f);
        let (_, d) = relative_vectors(pos[0], [pos[2], pos[3] - pos[1] + pos[0]]);
        if d[0].dot2(&d[1]) != 0 {
            pair.non_orthogonal += 1;
        }
        for (a, b) in [(c[0], c[2]), (c[1], c[3])] {
            let target = if class[&a] == 0 { &mut pair.red } else { &mut pair.blue };
            target.edges.push((a.min(b), a.max(b)));
        }
    }
    for (&site, &c) in &class {
        // faces of one mesh surround the vertices of the other
        let target = if c == 0 { &mut pair.blue } else { &mut pair.red };
        if mesh.is_boundary_vertex(site) {
            target.dropped_boundary += 1;
            continue;
        }
        let cycle: Vec<VertexId> = mesh
            .faces_around(site)
            .into_iter()
            .map(|f| {
                let face = mesh.face(f);
                face.corners[(face.corner_index(site).expect("incident") + 1) % 4]
            })
            .collect();
        let pts: Vec<LatticeCoord> = cycle.iter().map(|&v| mesh.position(v)).collect();
        let shape = classify_polygon(&pts);
        let site_inside = pts.len() <= 6 && strictly_inside(mesh.position(site), &pts);
        target.faces.push(DualFace {
            site,
            cycle,
            shape,
            site_inside,
        });
    }
    pair
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polygon_shapes() {
        let z = LatticeCoord::eisenstein;
        assert_eq!(
            classify_polygon(&[z(0, 0), z(1, 0), z(0, 1)]),
            Some(DualShape::Triangle)
        );
        assert_eq!(
            classify_polygon(&[z(0, 0), z(3, 0), z(1, 2), z(0, 2)]),
            Some(DualShape::Trapezoid)
        );
        // half a regular hexagon never surrounds a degree-4 vertex
        assert_eq!(classify_polygon(&[z(0, 0), z(2, 0), z(1, 1), z(0, 1)]), None);
        let hex: Vec<_> = (0..6).map(LatticeCoord::unit).collect();
        assert_eq!(classify_polygon(&hex), Some(DualShape::Hexagon));
        // unit triangle glued to a unit hexagon
        assert_eq!(
            classify_polygon(&[z(0, 0), z(2, 0), z(2, 1), z(1, 2), z(0, 2)]),
            Some(DualShape::Pentagon)
        );
        assert_eq!(classify_polygon(&[z(0, 0), z(1, 0), z(1, 1), z(0, 1)]), None);
    }

    #[test]
    fn rhombille_duals() {
        let m = Mesh::initial_patch(3).unwrap();
        let d = dual_meshes(&m);
        assert_eq!(d.non_orthogonal, 0);
        // Red holds the degree-6 vertices, so its faces surround the
        // degree-3 sites and vice versa.
        for f in &d.blue.faces {
            assert_eq!(f.shape, Some(DualShape::Hexagon));
            assert!(f.site_inside);
        }
        for f in &d.red.faces {
            assert_eq!(f.shape, Some(DualShape::Triangle));
            assert!(f.site_inside);
        }
        assert!(!d.red.faces.is_empty() && !d.blue.faces.is_empty());
    }
}
