//! Verification that every interior vertex is the centroid of its neighbors.

use serde::Serialize;

use crate::lattice::LatticeCoord;
use crate::mesh::{Mesh, VertexId};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CentroidReport {
    pub interior_checked: usize,
    pub boundary_skipped: usize,
    /// Interior vertices whose neighbor sum differs from `degree · position`.
    #[serde(skip)]
    pub defects: Vec<VertexId>,
    pub defect_count: usize,
}

impl CentroidReport {
    pub fn is_ok(&self) -> bool {
        self.defects.is_empty()
    }
}

/// Checks `Σ (u - v) = 0` over the neighbors `u` of every interior vertex `v`,
/// exactly.
pub fn check_centroid(mesh: &Mesh) -> CentroidReport {
    check_centroid_with(mesh, |v| mesh.position(v))
}

/// As [`check_centroid`], reading positions through `pos`; the mesh supplies
/// only the connectivity.
pub fn check_centroid_with<P: Fn(VertexId) -> LatticeCoord>(mesh: &Mesh, pos: P) -> CentroidReport {
    let mut rep = CentroidReport::default();
    let mut vs: Vec<VertexId> = mesh.vertices().map(|(v, _)| v).collect();
    vs.sort();
    for v in vs {
        if mesh.is_boundary_vertex(v) {
            rep.boundary_skipped += 1;
            continue;
        }
        rep.interior_checked += 1;
        let p = pos(v);
        let defect = mesh
            .neighbors(v)
            .into_iter()
            .fold(LatticeCoord::ORIGIN, |acc, u| acc + (pos(u) - p));
        if !defect.is_origin() {
            rep.defects.push(v);
        }
    }
    rep.defect_count = rep.defects.len();
    rep
}
