//! Mesh statistics and local-feature-size ratios.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::adapt::{dist, in_convex, Point, SizeField};
use crate::lattice::side_length;
use crate::mesh::{FaceId, Mesh};

/// Grid points per `σ(p)` when searching the disk around `p`.
const GRID_PER_RADIUS: f64 = 24.0;

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Summary {
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub median: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Summary {
        if values.is_empty() {
            return Summary::default();
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let median = if n % 2 == 1 {
            v[n / 2]
        } else {
            (v[n / 2 - 1] + v[n / 2]) / 2.0
        };
        Summary {
            count: n,
            min: v[0],
            max: v[n - 1],
            mean: v.iter().sum::<f64>() / n as f64,
            median,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct MeshStats {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub diamonds: usize,
    pub kites: usize,
    pub replacements: usize,
    pub total_edge_length: f64,
    pub total_area: f64,
    pub face_area: Summary,
    pub face_perimeter: Summary,
    /// `level_histogram[j]` faces have longest side `3^(-j/2)`.
    pub level_histogram: Vec<usize>,
    pub min_angle_deg: u32,
    pub max_angle_deg: u32,
    /// Longest side of the face containing a random point `p`, over the
    /// estimate of the local feature size at `p`.
    pub size_ratio: Summary,
    #[serde(skip)]
    pub size_ratio_samples: Vec<f64>,
}

fn shoelace(p: &[Point; 4]) -> f64 {
    (0..4)
        .map(|i| {
            let (a, b) = (p[i], p[(i + 1) % 4]);
            a.0 * b.1 - a.1 * b.0
        })
        .sum::<f64>()
        / 2.0
}

fn perimeter(p: &[Point; 4]) -> f64 {
    (0..4).map(|i| dist(p[i], p[(i + 1) % 4])).sum()
}

type Buckets = HashMap<(i64, i64), Vec<(FaceId, [Point; 4])>>;

/// Uniform buckets of faces by bounding box, for point location.
struct Locator {
    cell: f64,
    buckets: Buckets,
}

impl Locator {
    fn new(mesh: &Mesh) -> Locator {
        let cell = 0.5;
        let mut buckets = Buckets::new();
        let mut faces: Vec<FaceId> = mesh.faces().map(|(f, _)| f).collect();
        faces.sort();
        for f in faces {
            let q = mesh.face_positions(f).map(|c| c.to_cartesian());
            let lo = q
                .iter()
                .fold((f64::INFINITY, f64::INFINITY), |a, p| (a.0.min(p.0), a.1.min(p.1)));
            let hi = q.iter().fold((f64::NEG_INFINITY, f64::NEG_INFINITY), |a, p| {
                (a.0.max(p.0), a.1.max(p.1))
            });
            for i in (lo.0 / cell).floor() as i64..=(hi.0 / cell).floor() as i64 {
                for j in (lo.1 / cell).floor() as i64..=(hi.1 / cell).floor() as i64 {
                    buckets.entry((i, j)).or_default().push((f, q));
                }
            }
        }
        Locator { cell, buckets }
    }

    fn locate(&self, p: Point) -> Option<FaceId> {
        let key = ((p.0 / self.cell).floor() as i64, (p.1 / self.cell).floor() as i64);
        self.buckets
            .get(&key)?
            .iter()
            .find(|(_, q)| in_convex(p, q))
            .map(|(f, _)| *f)
    }
}

/// Upper estimate of `inf_q |p - q| + σ'(q)` with `σ' = min(σ, 1)`, over the
/// given candidates and a grid filling the disk of radius `σ'(p)`.
///
/// Capping at the initial edge length does not change the mesh (no face is
/// ever longer) and keeps the ratio meaningful where `σ` exceeds the patch
/// scale.
pub fn local_feature_size<F: SizeField + ?Sized>(field: &F, p: Point, candidates: &[Point]) -> f64 {
    let capped = |q: Point| field.eval(q).min(1.0);
    let reach = capped(p);
    let mut best = reach;
    for &q in candidates {
        let d = dist(p, q);
        if d < reach {
            best = best.min(d + capped(q));
        }
    }
    let h = reach / GRID_PER_RADIUS;
    let n = GRID_PER_RADIUS as i64;
    for i in -n..=n {
        for j in -n..=n {
            let q = (p.0 + i as f64 * h, p.1 + j as f64 * h);
            let d = dist(p, q);
            if d <= reach {
                best = best.min(d + capped(q));
            }
        }
    }
    best
}

/// Counts, lengths, areas, and `samples` local-feature-size ratios drawn with
/// a seeded generator.
pub fn stats<F: SizeField + ?Sized>(mesh: &Mesh, field: &F, samples: usize, seed: u64) -> MeshStats {
    let mut st = MeshStats {
        vertices: mesh.vertex_count(),
        edges: mesh.edge_count(),
        faces: mesh.face_count(),
        replacements: mesh.applied().len(),
        level_histogram: mesh.level_histogram(),
        ..Default::default()
    };
    let mut edges: Vec<_> = mesh.edges().map(|(e, _)| e).collect();
    edges.sort();
    st.total_edge_length = edges
        .iter()
        .map(|&(u, v)| dist(mesh.position(u).to_cartesian(), mesh.position(v).to_cartesian()))
        .sum();

    let mut areas = Vec::with_capacity(st.faces);
    let mut perims = Vec::with_capacity(st.faces);
    st.min_angle_deg = 180;
    let mut faces: Vec<_> = mesh.faces().map(|(f, face)| (f, *face)).collect();
    faces.sort_by_key(|(f, _)| *f);
    for (f, face) in &faces {
        let q = mesh.face_positions(*f).map(|c| c.to_cartesian());
        areas.push(shoelace(&q));
        perims.push(perimeter(&q));
        match face.shape {
            crate::mesh::Shape::Diamond => st.diamonds += 1,
            crate::mesh::Shape::Kite => st.kites += 1,
        }
        for i in 0..4 {
            st.min_angle_deg = st.min_angle_deg.min(face.angle_at(i));
            st.max_angle_deg = st.max_angle_deg.max(face.angle_at(i));
        }
    }
    st.total_area = areas.iter().sum();
    st.face_area = Summary::of(&areas);
    st.face_perimeter = Summary::of(&perims);

    if samples > 0 && !faces.is_empty() {
        let mut verts: Vec<_> = mesh.vertices().collect();
        verts.sort_by_key(|(v, _)| *v);
        let pts: Vec<Point> = verts.iter().map(|(_, p)| p.to_cartesian()).collect();
        let lo = pts
            .iter()
            .fold((f64::INFINITY, f64::INFINITY), |a, p| (a.0.min(p.0), a.1.min(p.1)));
        let hi = pts.iter().fold((f64::NEG_INFINITY, f64::NEG_INFINITY), |a, p| {
            (a.0.max(p.0), a.1.max(p.1))
        });
        let locator = Locator::new(mesh);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        while st.size_ratio_samples.len() < samples {
            let p = (rng.random_range(lo.0..=hi.0), rng.random_range(lo.1..=hi.1));
            let Some(f) = locator.locate(p) else { continue };
            let side = side_length(mesh.face(f).level);
            let lfs = local_feature_size(field, p, &pts);
            st.size_ratio_samples.push(side / lfs);
        }
        st.size_ratio = Summary::of(&st.size_ratio_samples);
    }
    st
}
