//! All mesh invariants in one pass.

use serde::Serialize;

use crate::adapt::{coarsenable_vertices, oversized_faces, Sampling, SizeField};
use crate::derived::{build_packing, check_centroid, coloring_conflicts, dual_meshes, three_color, validate_packing};
use crate::mesh::{classify, Mesh};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &'static str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name,
            passed,
            detail: detail.into(),
        });
    }
}

/// Runs the shape, counting, lower-set, packing, coloring, dual and centroid
/// checks, plus size conformance and minimality when a field is given.
pub fn verify(mesh: &Mesh, field: Option<(&dyn SizeField, Sampling)>) -> VerifyReport {
    let mut rep = VerifyReport::default();

    let bad_shapes = mesh
        .faces()
        .filter(|(f, face)| {
            classify(&mesh.face_positions(*f))
                .is_none_or(|c| c.shape != face.shape || c.level != face.level || c.start != 0)
        })
        .count();
    rep.push(
        "angle inventory",
        bad_shapes == 0,
        format!("{bad_shapes} of {} faces malformed", mesh.face_count()),
    );

    let base = Mesh::from_patch(mesh.patch());
    let n = mesh.applied().len();
    let counts_ok = mesh.vertex_count() == base.vertex_count() + 6 * n
        && mesh.edge_count() == base.edge_count() + 12 * n
        && mesh.face_count() == base.face_count() + 6 * n
        && mesh.euler_characteristic() == base.euler_characteristic();
    rep.push(
        "euler deltas",
        counts_ok,
        format!(
            "V={} E={} F={} after {n} replacements, V-E+F={}",
            mesh.vertex_count(),
            mesh.edge_count(),
            mesh.face_count(),
            mesh.euler_characteristic()
        ),
    );

    let closed = mesh.applied().is_downward_closed() && mesh.applied().iter().all(|k| k.is_valid());
    rep.push("lower-set closure", closed, format!("{n} keys"));

    match build_packing(mesh) {
        Ok(p) => {
            let v = validate_packing(&p, mesh);
            let detail = match v.violations.first() {
                Some(first) => format!("{} violations, first: {first}", v.violations.len()),
                None => format!(
                    "{} orthogonal, {} tangent, {} disjoint pairs; float error {:.1e}",
                    v.orthogonal_pairs, v.tangent_pairs, v.disjoint_pairs, v.max_float_error
                ),
            };
            rep.push("packing identities", v.is_ok(), detail);
        }
        Err(e) => rep.push("packing identities", false, e.to_string()),
    }

    let coloring = three_color(mesh);
    let conflicts = coloring_conflicts(mesh, &coloring);
    let classes = coloring.class_count();
    let classes_ok = classes == 3 || (mesh.face_count() < 3 && classes == mesh.face_count());
    rep.push(
        "coloring properness",
        conflicts.is_empty() && classes_ok,
        format!("{} conflicts, {classes} classes", conflicts.len()),
    );

    let duals = dual_meshes(mesh);
    let faces = duals.red.faces.iter().chain(&duals.blue.faces);
    let unknown = faces.clone().filter(|f| f.shape.is_none()).count();
    let outside = faces.filter(|f| !f.site_inside).count();
    rep.push(
        "dual orthogonality",
        duals.non_orthogonal == 0 && unknown == 0 && outside == 0,
        format!(
            "{} non-orthogonal faces, {unknown} unclassified and {outside} non-centered dual faces, {} boundary cells dropped",
            duals.non_orthogonal,
            duals.red.dropped_boundary + duals.blue.dropped_boundary
        ),
    );

    let c = check_centroid(mesh);
    rep.push(
        "centroid",
        c.is_ok(),
        format!(
            "{} defects among {} interior vertices",
            c.defect_count, c.interior_checked
        ),
    );

    if let Some((field, sampling)) = field {
        let over = oversized_faces(mesh, field, sampling).len();
        rep.push("size conformance", over == 0, format!("{over} oversized faces"));
        let coarse = coarsenable_vertices(mesh, field, sampling).len();
        rep.push("coarsest mesh", coarse == 0, format!("{coarse} coarsenable vertices"));
    }
    rep
}
