//! Refinement to a size function, coarsening, and dynamic adaptation.

mod size_field;

use std::collections::{HashSet, VecDeque};
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::MeshError;
use crate::lattice::{side_length, LatticeCoord};
use crate::mesh::{BoundaryPolicy, FaceId, Mesh, Shape, VertexId};

pub use size_field::{
    dist, dist_to_quad, in_convex, BuiltinField, CircleDistance, Constant, Grid, Point, PointDistance, Ramp, SizeField,
    DEFAULT_GRID_FLOOR, DEFAULT_MIN_SIZE,
};

/// Order in which the refinement queue is drained.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum QueueOrder {
    #[default]
    Fifo,
    Lifo,
}

/// How `oversized` looks at the size function.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Sampling {
    /// Minimum of `σ` over the whole quadrilateral.
    #[default]
    Exact,
    /// Minimum of `σ` over the four corners only: faster, and may leave
    /// faces whose interior dips below their side length.
    Vertices,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct AdaptOptions {
    pub order: QueueOrder,
    pub sampling: Sampling,
    pub boundary: BoundaryPolicy,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RefineReport {
    pub replacement_steps: usize,
    pub queue_pushes: usize,
    /// Refinements skipped at the patch boundary under [`BoundaryPolicy::Clip`].
    pub clipped: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CoarsenReport {
    pub coarsening_steps: usize,
    pub queue_pushes: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct AdaptReport {
    pub replacement_steps: usize,
    pub coarsening_steps: usize,
    pub queue_pushes: usize,
    pub clipped: usize,
    /// Wall-clock time; left out of serialized reports so they stay
    /// reproducible.
    #[serde(skip)]
    pub duration: Duration,
}

fn cartesian(q: &[LatticeCoord; 4]) -> [Point; 4] {
    q.map(|p| p.to_cartesian())
}

/// Whether the quadrilateral `q`, whose longest side has the given level,
/// contains a point where `σ` is below that side.
pub fn quad_oversized<F: SizeField + ?Sized>(q: &[LatticeCoord; 4], level: u32, field: &F, sampling: Sampling) -> bool {
    let pts = cartesian(q);
    let min = match sampling {
        Sampling::Exact => field.min_over_quad(&pts),
        Sampling::Vertices => pts.iter().map(|&p| field.eval(p)).fold(f64::INFINITY, f64::min),
    };
    min < side_length(level)
}

/// The two kites inside a diamond that share its side length, each as
/// counterclockwise corners starting at its 60° corner.
pub fn diamond_kites(d: &[LatticeCoord; 4]) -> [[LatticeCoord; 4]; 2] {
    let kite =
        |a: LatticeCoord, o1: LatticeCoord, a2: LatticeCoord, o2: LatticeCoord| [a, o1, (o1 + a2 + o2).div3(), o2];
    [kite(d[0], d[1], d[2], d[3]), kite(d[2], d[3], d[0], d[1])]
}

/// Whether a mesh face is oversized. Diamonds are oversized exactly when one
/// of their two kites is.
pub fn is_oversized<F: SizeField + ?Sized>(mesh: &Mesh, f: FaceId, field: &F, sampling: Sampling) -> bool {
    let face = mesh.face(f);
    let q = mesh.face_positions(f);
    match face.shape {
        Shape::Kite => quad_oversized(&q, face.level, field, sampling),
        Shape::Diamond => diamond_kites(&q)
            .iter()
            .any(|k| quad_oversized(k, face.level, field, sampling)),
    }
}

/// Faces currently oversized.
pub fn oversized_faces<F: SizeField + ?Sized>(mesh: &Mesh, field: &F, sampling: Sampling) -> Vec<FaceId> {
    mesh.faces()
        .map(|(f, _)| f)
        .filter(|&f| is_oversized(mesh, f, field, sampling))
        .collect()
}

/// Refines until no face is oversized, producing the coarsest such mesh that
/// refines the input.
pub fn refine_to_size<F: SizeField + ?Sized>(
    mesh: &mut Mesh,
    field: &F,
    opts: &AdaptOptions,
) -> Result<RefineReport, MeshError> {
    let mut queue: VecDeque<FaceId> = mesh.faces().map(|(f, _)| f).collect();
    let mut report = RefineReport {
        queue_pushes: queue.len(),
        ..Default::default()
    };
    loop {
        let next = match opts.order {
            QueueOrder::Fifo => queue.pop_front(),
            QueueOrder::Lifo => queue.pop_back(),
        };
        let Some(f) = next else { break };
        let Some(face) = mesh.try_face(f).copied() else {
            continue;
        };
        let q = mesh.face_positions(f);
        let targets: Vec<VertexId> = match face.shape {
            Shape::Kite => {
                if quad_oversized(&q, face.level, field, opts.sampling) {
                    vec![face.corners[0]]
                } else {
                    vec![]
                }
            }
            Shape::Diamond => diamond_kites(&q)
                .iter()
                .zip([face.corners[0], face.corners[2]])
                .filter(|(k, _)| quad_oversized(k, face.level, field, opts.sampling))
                .map(|(_, v)| v)
                .collect(),
        };
        for v in targets {
            if !mesh.contains_vertex(v) {
                continue;
            }
            let out = mesh.refine(v, opts.boundary)?;
            if out.clipped {
                report.clipped += 1;
            }
            report.replacement_steps += out.applied.len();
            report.queue_pushes += out.added_faces.len();
            queue.extend(out.added_faces);
        }
    }
    Ok(report)
}

/// Whether `v` can be coarsened without creating an oversized face: it is the
/// center of a maximal replacement whose six surrounding coarse kites are all
/// small enough.
pub fn is_coarsenable<F: SizeField + ?Sized>(mesh: &Mesh, v: VertexId, field: &F, sampling: Sampling) -> bool {
    match mesh.coarsening_kites(v) {
        Ok((level, kites)) => !kites.iter().any(|k| quad_oversized(k, level, field, sampling)),
        Err(_) => false,
    }
}

/// Vertices currently coarsenable.
pub fn coarsenable_vertices<F: SizeField + ?Sized>(mesh: &Mesh, field: &F, sampling: Sampling) -> Vec<VertexId> {
    mesh.vertices()
        .map(|(v, _)| v)
        .filter(|&v| is_coarsenable(mesh, v, field, sampling))
        .collect()
}

/// Coarsens until no vertex is coarsenable.
pub fn coarsen_to_size<F: SizeField + ?Sized>(mesh: &mut Mesh, field: &F, opts: &AdaptOptions) -> CoarsenReport {
    let mut queue: VecDeque<VertexId> = coarsenable_vertices(mesh, field, opts.sampling).into();
    let mut queued: HashSet<VertexId> = queue.iter().copied().collect();
    let mut report = CoarsenReport {
        queue_pushes: queue.len(),
        ..Default::default()
    };
    loop {
        let next = match opts.order {
            QueueOrder::Fifo => queue.pop_front(),
            QueueOrder::Lifo => queue.pop_back(),
        };
        let Some(v) = next else { break };
        queued.remove(&v);
        if !mesh.contains_vertex(v) || !is_coarsenable(mesh, v, field, opts.sampling) {
            continue;
        }
        mesh.coarsen_step(v).expect("coarsenable vertex");
        report.coarsening_steps += 1;
        // Keys that may have just become maximal are centered at v or at a
        // corner of a face now around v.
        let mut candidates = vec![v];
        for &f in mesh.faces_of(v) {
            candidates.extend(mesh.face(f).corners);
        }
        candidates.sort();
        candidates.dedup();
        for u in candidates {
            if !queued.contains(&u) && is_coarsenable(mesh, u, field, opts.sampling) {
                queued.insert(u);
                queue.push_back(u);
                report.queue_pushes += 1;
            }
        }
    }
    report
}

/// Refines, then coarsens, to the coarsest mesh conforming to `field`.
pub fn adapt<F: SizeField + ?Sized>(mesh: &mut Mesh, field: &F, opts: &AdaptOptions) -> Result<AdaptReport, MeshError> {
    let start = Instant::now();
    let r = refine_to_size(mesh, field, opts)?;
    let c = coarsen_to_size(mesh, field, opts);
    Ok(AdaptReport {
        replacement_steps: r.replacement_steps,
        coarsening_steps: c.coarsening_steps,
        queue_pushes: r.queue_pushes + c.queue_pushes,
        clipped: r.clipped,
        duration: start.elapsed(),
    })
}
