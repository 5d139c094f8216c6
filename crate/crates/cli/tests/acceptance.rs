//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.
//!
//! Set `DKMESH_UPDATE_GOLDEN=1` to rewrite the golden SVG.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dkmesh::adapt::{
    adapt, coarsenable_vertices, dist, in_convex, oversized_faces, refine_to_size, AdaptOptions, BuiltinField,
    CircleDistance, Constant, Grid, Point, PointDistance, QueueOrder, Ramp, Sampling, DEFAULT_GRID_FLOOR,
};
use dkmesh::derived::{
    build_packing, check_centroid, check_centroid_with, coloring_conflicts, dual_meshes, local_feature_size,
    three_color, validate_packing, DualShape,
};
use dkmesh::io::{parse_mesh_file, serialize};
use dkmesh::lattice::{close_down, join, meet, random_linearization, side_length, LowerSet};
use dkmesh::mesh::{classify, FaceId};
use dkmesh::{BoundaryPolicy, LatticeCoord, Mesh, MeshError, ReplacementKey};

// Pinned thresholds.
const SHAPE_MESHES: usize = 100;
const SHAPE_TIME_LIMIT: Duration = Duration::from_secs(10);
const MAX_TEST_LEVEL: u32 = 8;
const MIN_REPLACEMENT_STEPS: usize = 10_000;
const COARSEST_FIELDS: usize = 50;
const CONFLUENCE_TRIALS: usize = 20;
const ADAPT_PAIRS: usize = 50;
const LATTICE_PAIRS: usize = 200;
const LATTICE_MAX_KEYS: usize = 100;
const FLOAT_MIRROR_TOL: f64 = 1e-9;
const CIRCLE_TIME_LIMIT: Duration = Duration::from_secs(5);
const CIRCLE_CONFIG: &str = "circle:cx=0,cy=0,r=4,scale=0.2";
const GOLDEN_CONFIG: &str = "circle:cx=0,cy=0,r=4,scale=0.2,min=0.2";
/// Side over estimated local feature size. Measured [0.296, 1.000] over
/// seed 13, locked with a small margin.
const RATIO_WINDOW: (f64, f64) = (0.25, 1.05);
const RATIO_SAMPLES: usize = 300;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

/// Every mesh produced along the way, deduplicated by file text.
#[derive(Default)]
struct Pool {
    seen: HashSet<String>,
    meshes: Vec<Mesh>,
}

impl Pool {
    fn add(&mut self, m: &Mesh) {
        if self.seen.insert(serialize(m)) {
            self.meshes.push(m.clone());
        }
    }
}

fn clip() -> AdaptOptions {
    AdaptOptions {
        boundary: BoundaryPolicy::Clip,
        ..Default::default()
    }
}

fn grid_lipschitz(values: &[f64], nx: usize, ny: usize, dx: f64, dy: f64) -> f64 {
    let mut gx: f64 = 0.0;
    let mut gy: f64 = 0.0;
    for j in 0..ny {
        for i in 0..nx {
            let v = values[j * nx + i];
            if i + 1 < nx {
                gx = gx.max((values[j * nx + i + 1] - v).abs() / dx);
            }
            if j + 1 < ny {
                gy = gy.max((values[(j + 1) * nx + i] - v).abs() / dy);
            }
        }
    }
    gx.hypot(gy)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Constant,
    Point,
    Circle,
    Ramp,
    Grid,
}

const ALL_KINDS: [Kind; 5] = [Kind::Constant, Kind::Point, Kind::Circle, Kind::Ramp, Kind::Grid];

/// A random field of the given kind for a patch of radius `r`, bounded
/// below so no face finer than level 8 is needed.
fn random_field(rng: &mut ChaCha8Rng, kind: Kind, r: u32) -> BuiltinField {
    let r = r as f64;
    let min = rng.random_range(0.02..0.3);
    let mut disk = |rho: f64| {
        let (t, s): (f64, f64) = (rng.random_range(0.0..std::f64::consts::TAU), rng.random_range(0.0..1.0));
        (rho * s.sqrt() * t.cos(), rho * s.sqrt() * t.sin())
    };
    match kind {
        Kind::Constant => BuiltinField::Constant(Constant {
            value: rng.random_range(0.3..2.0),
        }),
        Kind::Point => {
            let center = disk(r / 3.0);
            BuiltinField::Point(PointDistance {
                center,
                scale: rng.random_range(0.1..0.6),
                min,
            })
        }
        Kind::Circle => {
            let center = disk(r / 4.0);
            let radius = rng.random_range(0.5..(r / 2.0).max(1.0));
            BuiltinField::Circle(CircleDistance {
                center,
                radius,
                scale: rng.random_range(0.1..0.6),
                min,
            })
        }
        Kind::Ramp => BuiltinField::Ramp(Ramp {
            base: rng.random_range(0.3..1.5),
            gx: rng.random_range(-0.15..0.15),
            gy: rng.random_range(-0.15..0.15),
            floor: min,
        }),
        Kind::Grid => {
            let n = rng.random_range(3..=8usize);
            let d = 2.0 * (r + 1.0) / (n - 1) as f64;
            let origin = (-r - 1.0, -r - 1.0);
            let values: Vec<f64> = (0..n * n)
                .map(|idx| {
                    let (i, j) = (idx % n, idx / n);
                    let p = (origin.0 + i as f64 * d, origin.1 + j as f64 * d);
                    // coarse near the rim, so strict refinement can succeed
                    if dist(p, (0.0, 0.0)) > r - 3.0 {
                        1.5
                    } else {
                        rng.random_range(0.05..1.5)
                    }
                })
                .collect();
            let lipschitz = grid_lipschitz(&values, n, n, d, d);
            BuiltinField::Grid(Grid {
                origin,
                spacing: (d, d),
                nx: n,
                ny: n,
                values,
                lipschitz,
                floor: min.max(DEFAULT_GRID_FLOOR),
            })
        }
    }
}

fn random_kind(rng: &mut ChaCha8Rng) -> Kind {
    ALL_KINDS[rng.random_range(0..ALL_KINDS.len())]
}

/// Refines a fresh patch under the strict policy, drawing fields until one
/// fits inside the patch. Returns the field, the mesh and the rejections.
fn strict_instance(rng: &mut ChaCha8Rng) -> (u32, BuiltinField, Mesh, usize) {
    let mut rejected = 0;
    loop {
        let r = rng.random_range(6..=16);
        let kind = [Kind::Point, Kind::Circle, Kind::Grid][rng.random_range(0..3)];
        let f = random_field(rng, kind, r);
        let mut m = Mesh::initial_patch(r).unwrap();
        match refine_to_size(&mut m, &f, &AdaptOptions::default()) {
            Ok(_) => return (r, f, m, rejected),
            Err(MeshError::BoundaryViolation(_)) => rejected += 1,
            Err(e) => panic!("unexpected {e}"),
        }
    }
}

fn malformed_faces(m: &Mesh) -> usize {
    m.faces()
        .filter(|(f, face)| {
            classify(&m.face_positions(*f))
                .is_none_or(|c| c.shape != face.shape || c.level != face.level || c.start != 0)
        })
        .count()
}

fn max_level(m: &Mesh) -> u32 {
    m.faces().map(|(_, f)| f.level).max().unwrap_or(0)
}

/// Criterion 1 meshes: refine to one random field, then adapt to another.
fn shape_meshes(seed: u64) -> Vec<Mesh> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..SHAPE_MESHES)
        .map(|_| {
            let r = rng.random_range(2..=16);
            let (k1, k2) = (random_kind(&mut rng), random_kind(&mut rng));
            let (f1, f2) = (random_field(&mut rng, k1, r), random_field(&mut rng, k2, r));
            let mut m = Mesh::initial_patch(r).unwrap();
            refine_to_size(&mut m, &f1, &clip()).unwrap();
            adapt(&mut m, &f2, &clip()).unwrap();
            m
        })
        .collect()
}

fn c1_shapes(pool: &mut Pool) -> Outcome {
    let start = Instant::now();
    let meshes = shape_meshes(1);
    let bad: usize = meshes.iter().map(malformed_faces).sum();
    let elapsed = start.elapsed();
    let faces: usize = meshes.iter().map(|m| m.face_count()).sum();
    let deepest = meshes.iter().map(max_level).max().unwrap_or(0);
    for m in &meshes {
        pool.add(m);
    }
    outcome(
        bad == 0 && elapsed < SHAPE_TIME_LIMIT && deepest <= MAX_TEST_LEVEL,
        format!(
            "{} meshes, {faces} faces, {bad} malformed, deepest level {deepest}, {:.2} s (limit {} s)",
            meshes.len(),
            elapsed.as_secs_f64(),
            SHAPE_TIME_LIMIT.as_secs()
        ),
    )
}

fn counts(m: &Mesh) -> (i64, i64, i64) {
    (m.vertex_count() as i64, m.edge_count() as i64, m.face_count() as i64)
}

fn c2_accounting(pool: &Pool) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut steps, mut wrong) = (0usize, 0usize);
    for src in &pool.meshes {
        let mut m = Mesh::from_patch(src.patch());
        for key in random_linearization(src.applied(), &mut rng) {
            let before = counts(&m);
            m.apply_replacement(key).unwrap();
            let after = counts(&m);
            steps += 1;
            if (after.0 - before.0, after.1 - before.1, after.2 - before.2) != (6, 12, 6) {
                wrong += 1;
            }
        }
    }
    outcome(
        wrong == 0 && steps >= MIN_REPLACEMENT_STEPS,
        format!("{steps} replacement steps (minimum {MIN_REPLACEMENT_STEPS}), {wrong} with a (V,E,F) change other than (+6,+12,+6)"),
    )
}

fn refine_steps(m: &Mesh, p: LatticeCoord) -> (usize, usize) {
    let v = m.vertex_at(p).unwrap();
    let mut c = m.clone();
    let out = c.refine(v, BoundaryPolicy::Strict).unwrap();
    (m.degree(v), out.applied.len())
}

fn c3_refine_cases(pool: &mut Pool) -> Outcome {
    let origin = LatticeCoord::ORIGIN;
    let fresh = Mesh::initial_patch(4).unwrap();
    let mut one = fresh.clone();
    one.apply_replacement(ReplacementKey::new(origin, 0)).unwrap();
    let mut two = one.clone();
    two.apply_replacement(ReplacementKey::new(LatticeCoord::new(1, 0, -1), 0))
        .unwrap();
    let fixtures = [
        (refine_steps(&fresh, origin), (6, 1)),
        (refine_steps(&two, LatticeCoord::unit(0)), (5, 2)),
        (refine_steps(&one, LatticeCoord::unit(2)), (4, 3)),
    ];
    let fixtures_ok = fixtures.iter().all(|(got, want)| got == want);
    // every refinable interior vertex of the fixtures follows the same rule
    let mut sweep: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for m in [&fresh, &one, &two] {
        pool.add(m);
        for (v, p) in m.vertices() {
            if m.is_boundary_vertex(v) || m.refinement_key(v).is_err() {
                continue;
            }
            *sweep.entry(refine_steps(m, p)).or_default() += 1;
        }
    }
    let sweep_ok = sweep.keys().all(|&(d, s)| d + s == 7);
    let got: Vec<String> = fixtures
        .iter()
        .map(|((d, s), _)| format!("degree {d} -> {s}"))
        .collect();
    outcome(
        fixtures_ok && sweep_ok,
        format!("fixtures {}; sweep (degree, steps) counts {sweep:?}", got.join(", ")),
    )
}

struct StrictRun {
    field: BuiltinField,
    scratch: Mesh,
}

fn strict_runs(pool: &mut Pool) -> (Vec<StrictRun>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut rejected = 0;
    let runs = (0..COARSEST_FIELDS)
        .map(|_| {
            let (_, field, scratch, rej) = strict_instance(&mut rng);
            rejected += rej;
            pool.add(&scratch);
            StrictRun { field, scratch }
        })
        .collect();
    (runs, rejected)
}

fn nonconforming(m: &Mesh, f: &BuiltinField) -> (usize, usize) {
    (
        oversized_faces(m, f, Sampling::Exact).len(),
        coarsenable_vertices(m, f, Sampling::Exact).len(),
    )
}

struct AdaptPair {
    old: Mesh,
    field: BuiltinField,
    adapted: Mesh,
    report: dkmesh::adapt::AdaptReport,
    scratch: Mesh,
}

/// Adapts each strict run's mesh to a second field that also fits its patch.
fn adapt_pairs(runs: &[StrictRun], pool: &mut Pool) -> Vec<AdaptPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    (0..ADAPT_PAIRS)
        .map(|i| {
            let old = &runs[i % runs.len()].scratch;
            let r = old.patch().radius();
            let (field, scratch) = loop {
                let kind = [Kind::Point, Kind::Circle, Kind::Grid][rng.random_range(0..3)];
                let f = random_field(&mut rng, kind, r);
                let mut m = Mesh::initial_patch(r).unwrap();
                if refine_to_size(&mut m, &f, &AdaptOptions::default()).is_ok() {
                    break (f, m);
                }
            };
            let mut adapted = old.clone();
            let report = adapt(&mut adapted, &field, &AdaptOptions::default()).unwrap();
            pool.add(&adapted);
            pool.add(&scratch);
            AdaptPair {
                old: old.clone(),
                field,
                adapted,
                report,
                scratch,
            }
        })
        .collect()
}

fn c4_coarsest(runs: &[StrictRun], pairs: &[AdaptPair], rejected: usize) -> Outcome {
    let add = |a: (usize, usize), b: (usize, usize)| (a.0 + b.0, a.1 + b.1);
    let refined = runs
        .iter()
        .map(|r| nonconforming(&r.scratch, &r.field))
        .fold((0, 0), add);
    let adapted = pairs
        .iter()
        .map(|p| nonconforming(&p.adapted, &p.field))
        .fold((0, 0), add);
    outcome(
        refined == (0, 0) && adapted == (0, 0),
        format!(
            "{} fields after refine_to_size: {} oversized faces, {} coarsenable vertices; {} after adapt: {}, {}; {rejected} draws rejected for leaving the patch",
            runs.len(),
            refined.0,
            refined.1,
            pairs.len(),
            adapted.0,
            adapted.1
        ),
    )
}

fn c5_confluence(pool: &mut Pool) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut mismatches = 0;
    let mut keys = 0;
    for _ in 0..CONFLUENCE_TRIALS {
        let r = rng.random_range(3..=12);
        let kind = random_kind(&mut rng);
        let f = random_field(&mut rng, kind, r);
        let run = |order| {
            let mut m = Mesh::initial_patch(r).unwrap();
            refine_to_size(&mut m, &f, &AdaptOptions { order, ..clip() }).unwrap();
            m
        };
        let (fifo, lifo) = (run(QueueOrder::Fifo), run(QueueOrder::Lifo));
        let text = serialize(&fifo);
        keys += fifo.applied().len();
        let mut replays = Vec::new();
        for _ in 0..2 {
            let mut m = Mesh::initial_patch(r).unwrap();
            m.apply_all(random_linearization(fifo.applied(), &mut rng)).unwrap();
            replays.push(m);
        }
        let same = |m: &Mesh| serialize(m) == text && m.geometry() == fifo.geometry();
        if !(same(&lifo) && replays.iter().all(same)) {
            mismatches += 1;
        }
        pool.add(&fifo);
    }
    outcome(
        mismatches == 0,
        format!(
            "{CONFLUENCE_TRIALS} trials ({keys} keys): FIFO, LIFO and two random linearizations; {mismatches} differ"
        ),
    )
}

fn c6_dynamic(pairs: &[AdaptPair]) -> Outcome {
    let (mut unequal, mut miscounted, mut steps) = (0, 0, 0);
    for p in pairs {
        if serialize(&p.adapted) != serialize(&p.scratch) || p.adapted.geometry() != p.scratch.geometry() {
            unequal += 1;
        }
        let added = p.scratch.applied().difference(p.old.applied()).count();
        let removed = p.old.applied().difference(p.scratch.applied()).count();
        if p.report.replacement_steps != added || p.report.coarsening_steps != removed {
            miscounted += 1;
        }
        steps += p.report.replacement_steps + p.report.coarsening_steps;
    }
    outcome(
        unequal == 0 && miscounted == 0,
        format!(
            "{} (old, new) pairs, {steps} steps: {unequal} differ from refining from scratch, {miscounted} step counts differ from the lower-set difference",
            pairs.len()
        ),
    )
}

/// A random lower set of at most `LATTICE_MAX_KEYS` keys, grown by
/// refining random vertices.
fn random_lower_set(rng: &mut ChaCha8Rng) -> Mesh {
    let target = rng.random_range(0..=LATTICE_MAX_KEYS);
    let mut m = Mesh::initial_patch(5).unwrap();
    for _ in 0..400 {
        if m.applied().len() >= target {
            break;
        }
        let vs: Vec<_> = m
            .vertices()
            .map(|(v, _)| v)
            .filter(|&v| m.refinement_key(v).is_ok())
            .collect();
        let v = vs[rng.random_range(0..vs.len())];
        let mut next = m.clone();
        next.refine(v, BoundaryPolicy::Clip).unwrap();
        if next.applied().len() <= LATTICE_MAX_KEYS {
            m = next;
        }
    }
    m
}

fn c7_lattice(pool: &mut Pool) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let sets: Vec<Mesh> = (0..=LATTICE_PAIRS).map(|_| random_lower_set(&mut rng)).collect();
    let mut broken = BTreeMap::new();
    let mut fail = |law: &'static str, ok: bool| {
        if !ok {
            *broken.entry(law).or_insert(0usize) += 1;
        }
    };
    let keys = |l: &LowerSet| l.keys().clone();
    for i in 0..LATTICE_PAIRS {
        let (a, b, c) = (
            sets[i].applied(),
            sets[i + 1].applied(),
            sets[(i + 2) % sets.len()].applied(),
        );
        fail(
            "closed",
            meet(a, b).is_downward_closed() && join(a, b).is_downward_closed(),
        );
        fail(
            "intersection",
            keys(&meet(a, b)) == keys(a).intersection(&keys(b)).copied().collect::<BTreeSet<_>>(),
        );
        fail(
            "union",
            keys(&join(a, b)) == keys(a).union(&keys(b)).copied().collect::<BTreeSet<_>>(),
        );
        fail("idempotence", meet(a, a) == *a && join(a, a) == *a);
        fail("commutativity", meet(a, b) == meet(b, a) && join(a, b) == join(b, a));
        fail("absorption", meet(a, &join(a, b)) == *a && join(a, &meet(a, b)) == *a);
        fail(
            "distributivity",
            meet(a, &join(b, c)) == join(&meet(a, b), &meet(a, c))
                && join(a, &meet(b, c)) == meet(&join(a, b), &join(a, c)),
        );
        fail("closure", close_down(a.iter().copied()) == *a);
    }
    let sizes: Vec<usize> = sets.iter().map(|m| m.applied().len()).collect();
    for m in &sets {
        pool.add(m);
    }
    outcome(
        broken.is_empty() && sizes.iter().all(|&n| n <= LATTICE_MAX_KEYS),
        format!(
            "{LATTICE_PAIRS} pairs of lower sets with {}..={} keys; laws broken: {broken:?}",
            sizes.iter().min().unwrap(),
            sizes.iter().max().unwrap()
        ),
    )
}

fn c8_packing(pool: &Pool) -> Outcome {
    let (mut violations, mut edges, mut tangent, mut disjoint, mut err) = (0, 0, 0, 0, 0.0f64);
    for m in &pool.meshes {
        match build_packing(m) {
            Ok(p) => {
                let r = validate_packing(&p, m);
                violations += r.violations.len();
                edges += r.orthogonal_pairs;
                tangent += r.tangent_pairs;
                disjoint += r.disjoint_pairs;
                err = err.max(r.max_float_error);
            }
            Err(_) => violations += 1,
        }
    }
    outcome(
        violations == 0 && err <= FLOAT_MIRROR_TOL,
        format!(
            "{} meshes: {edges} orthogonal and {tangent} tangent pairs exact, {disjoint} nearby pairs disjoint, float mirror {err:.1e} (limit {FLOAT_MIRROR_TOL:.0e}); {violations} violations",
            pool.meshes.len()
        ),
    )
}

fn c9_coloring(pool: &Pool) -> Outcome {
    let mut bad = 0;
    for m in &pool.meshes {
        let c = three_color(m);
        if !coloring_conflicts(m, &c).is_empty() || c.class_count() != 3 {
            bad += 1;
        }
    }
    outcome(
        bad == 0,
        format!(
            "{} meshes, {bad} with a conflict or a class count other than 3",
            pool.meshes.len()
        ),
    )
}

fn c10_centroid(pool: &Pool) -> Outcome {
    let (mut defects, mut checked) = (0, 0);
    for m in &pool.meshes {
        let r = check_centroid(m);
        defects += r.defect_count;
        checked += r.interior_checked;
    }
    // negative control: move one deep interior vertex by a tiny lattice step
    let m = Mesh::replay(
        dkmesh::mesh::Patch::new(4).unwrap(),
        &close_down([ReplacementKey::new(LatticeCoord::ORIGIN, 3)]),
    )
    .unwrap();
    let v = m.vertex_at(LatticeCoord::ORIGIN).unwrap();
    let nudge = LatticeCoord::new(1, 0, 20);
    let r = check_centroid_with(&m, |u| if u == v { m.position(u) + nudge } else { m.position(u) });
    let mut expected: Vec<_> = m
        .neighbors(v)
        .into_iter()
        .filter(|&u| !m.is_boundary_vertex(u))
        .collect();
    expected.push(v);
    expected.sort();
    let control = r.defects == expected;
    outcome(
        defects == 0 && control,
        format!(
            "{} meshes, {checked} interior vertices, {defects} defects; perturbing one vertex flags exactly it and its {} neighbours: {control}",
            pool.meshes.len(),
            expected.len() - 1
        ),
    )
}

fn c11_duals(pool: &Pool) -> Outcome {
    let mut shapes: BTreeMap<Option<DualShape>, usize> = BTreeMap::new();
    let (mut skew, mut outside) = (0, 0);
    for m in &pool.meshes {
        let d = dual_meshes(m);
        skew += d.non_orthogonal;
        for f in d.red.faces.iter().chain(&d.blue.faces) {
            *shapes.entry(f.shape).or_default() += 1;
            outside += usize::from(!f.site_inside);
        }
    }
    let unknown = shapes.get(&None).copied().unwrap_or(0);
    let found: Vec<String> = shapes
        .iter()
        .filter_map(|(s, n)| s.map(|s| format!("{s:?} {n}")))
        .collect();
    outcome(
        unknown == 0 && skew == 0 && outside == 0,
        format!(
            "{} meshes: {}; {unknown} other shapes, {skew} non-perpendicular diagonal pairs, {outside} sites not strictly inside",
            pool.meshes.len(),
            found.join(", ")
        ),
    )
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_dkmesh")
}

fn dkmesh(args: &[&str]) -> std::process::Output {
    Command::new(bin()).args(args).output().expect("dkmesh runs")
}

fn golden_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/circle_r8.svg")
}

/// Median face level in unit-wide annuli around the circle `|p| = 4`.
fn annulus_medians(m: &Mesh) -> Vec<u32> {
    let mut bins: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    for (f, face) in m.faces() {
        let q = m.face_positions(f).map(|c| c.to_cartesian());
        let c = (
            (q[0].0 + q[1].0 + q[2].0 + q[3].0) / 4.0,
            (q[0].1 + q[1].1 + q[2].1 + q[3].1) / 4.0,
        );
        let gap = (dist(c, (0.0, 0.0)) - 4.0).abs();
        bins.entry(gap as usize).or_default().push(face.level);
    }
    bins.into_values()
        .map(|mut v| {
            v.sort();
            v[v.len() / 2]
        })
        .collect()
}

fn c12_circle_figure(pool: &mut Pool, dir: &Path) -> Outcome {
    let out = dir.join("circle.dkm");
    let start = Instant::now();
    let run = dkmesh(&[
        "generate",
        "--radius",
        "16",
        "--size",
        CIRCLE_CONFIG,
        "-o",
        out.to_str().unwrap(),
    ]);
    let elapsed = start.elapsed();
    if !run.status.success() {
        return outcome(
            false,
            format!("generate failed: {}", String::from_utf8_lossy(&run.stderr)),
        );
    }
    let m = parse_mesh_file(&std::fs::read_to_string(&out).unwrap())
        .unwrap()
        .replay();
    pool.add(&m);
    let medians = annulus_medians(&m);
    let monotone = medians.windows(2).all(|w| w[0] >= w[1]) && medians.first() > medians.last();

    let svg = dir.join("circle.svg");
    let render = dkmesh(&[
        "render",
        "-i",
        out.to_str().unwrap(),
        "--layers",
        "faces,coloring",
        "-o",
        svg.to_str().unwrap(),
    ]);
    let polygons = std::fs::read_to_string(&svg)
        .map(|s| s.matches("<polygon").count())
        .unwrap_or(0);
    let rendered = render.status.success() && polygons == m.face_count();

    // golden artifact: the same field with a coarser floor on a radius-8 patch
    let small = dir.join("golden.dkm");
    let golden = dir.join("golden.svg");
    let gen = dkmesh(&[
        "generate",
        "--radius",
        "8",
        "--size",
        GOLDEN_CONFIG,
        "-o",
        small.to_str().unwrap(),
    ]);
    let ren = dkmesh(&[
        "render",
        "-i",
        small.to_str().unwrap(),
        "--layers",
        "faces,coloring",
        "--precision",
        "3",
        "-o",
        golden.to_str().unwrap(),
    ]);
    let produced = std::fs::read_to_string(&golden).unwrap_or_default();
    if std::env::var_os("DKMESH_UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(golden_path().parent().unwrap()).unwrap();
        std::fs::write(golden_path(), &produced).unwrap();
    }
    let expected = std::fs::read_to_string(golden_path()).unwrap_or_default();
    let golden_ok = gen.status.success() && ren.status.success() && !produced.is_empty() && produced == expected;

    outcome(
        monotone && rendered && golden_ok && elapsed < CIRCLE_TIME_LIMIT,
        format!(
            "radius 16, {} faces in {:.2} s (limit {} s); median level by distance from the circle {medians:?}; svg with {polygons} polygons; golden file {}",
            m.face_count(),
            elapsed.as_secs_f64(),
            CIRCLE_TIME_LIMIT.as_secs(),
            if golden_ok { "matches" } else { "differs" }
        ),
    )
}

/// Ratios of side length to estimated local feature size at random points
/// of the inner disk, away from refinements clipped at the patch boundary.
fn ratio_samples(m: &Mesh, field: &BuiltinField, rng: &mut ChaCha8Rng, inner: f64) -> Vec<f64> {
    let verts: Vec<Point> = m.vertices().map(|(_, p)| p.to_cartesian()).collect();
    let faces: Vec<(FaceId, [Point; 4])> = m
        .faces()
        .map(|(f, _)| (f, m.face_positions(f).map(|c| c.to_cartesian())))
        .collect();
    let mut out = Vec::with_capacity(RATIO_SAMPLES);
    while out.len() < RATIO_SAMPLES {
        let p = (rng.random_range(-inner..inner), rng.random_range(-inner..inner));
        if dist(p, (0.0, 0.0)) > inner {
            continue;
        }
        let Some((f, _)) = faces.iter().find(|(_, q)| in_convex(p, q)) else {
            continue;
        };
        let side = side_length(m.face(*f).level);
        out.push(side / local_feature_size(field, p, &verts));
    }
    out
}

fn c13_ratios(pool: &mut Pool) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut per_kind = Vec::new();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for kind in ALL_KINDS {
        let (mut klo, mut khi) = (f64::INFINITY, 0.0f64);
        for _ in 0..4 {
            let r = 12;
            let f = random_field(&mut rng, kind, r);
            let mut m = Mesh::initial_patch(r).unwrap();
            refine_to_size(&mut m, &f, &clip()).unwrap();
            pool.add(&m);
            for x in ratio_samples(&m, &f, &mut rng, r as f64 - 6.0) {
                klo = klo.min(x);
                khi = khi.max(x);
            }
        }
        lo = lo.min(klo);
        hi = hi.max(khi);
        per_kind.push(format!("{kind:?} [{klo:.3}, {khi:.3}]"));
    }
    outcome(
        lo >= RATIO_WINDOW.0 && hi <= RATIO_WINDOW.1,
        format!(
            "{}; overall [{lo:.3}, {hi:.3}] within locked window [{}, {}]",
            per_kind.join(", "),
            RATIO_WINDOW.0,
            RATIO_WINDOW.1
        ),
    )
}

fn c14_serialization(pool: &Pool, dir: &Path) -> Outcome {
    let mut bad = 0;
    for m in &pool.meshes {
        let text = serialize(m);
        match parse_mesh_file(&text) {
            Ok(file) => {
                let back = file.replay();
                if back != *m || serialize(&back) != text {
                    bad += 1;
                }
            }
            Err(_) => bad += 1,
        }
    }
    // an independent second run of the criterion-1 generator
    let first: Vec<String> = shape_meshes(1).iter().map(serialize).collect();
    let second: Vec<String> = shape_meshes(1).iter().map(serialize).collect();
    let rerun_ok = first == second;
    // and two separate processes
    let files: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let out = dir.join(format!("run{i}.dkm"));
            dkmesh(&[
                "generate",
                "--radius",
                "10",
                "--size",
                CIRCLE_CONFIG,
                "-o",
                out.to_str().unwrap(),
            ]);
            std::fs::read(out).unwrap_or_default()
        })
        .collect();
    let process_ok = !files[0].is_empty() && files[0] == files[1];
    outcome(
        bad == 0 && rerun_ok && process_ok,
        format!(
            "{} meshes round-trip with {bad} failures; repeated generation identical in-process: {rerun_ok}, across processes: {process_ok}",
            pool.meshes.len()
        ),
    )
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let mut pool = Pool::default();
    let mut results: BTreeMap<u8, (&str, Outcome)> = BTreeMap::new();
    results.insert(1, ("shape exactness", c1_shapes(&mut pool)));
    results.insert(2, ("replacement accounting", c2_accounting(&pool)));
    results.insert(3, ("refine case counts", c3_refine_cases(&mut pool)));
    let (runs, rejected) = strict_runs(&mut pool);
    let pairs = adapt_pairs(&runs, &mut pool);
    results.insert(4, ("coarsest mesh", c4_coarsest(&runs, &pairs, rejected)));
    results.insert(5, ("confluence", c5_confluence(&mut pool)));
    results.insert(6, ("dynamic adaptation", c6_dynamic(&pairs)));
    results.insert(7, ("lattice laws", c7_lattice(&mut pool)));
    results.insert(12, ("circle-distance figure", c12_circle_figure(&mut pool, dir.path())));
    results.insert(13, ("size ratio window", c13_ratios(&mut pool)));
    results.insert(8, ("circle packing", c8_packing(&pool)));
    results.insert(9, ("three-coloring", c9_coloring(&pool)));
    results.insert(10, ("centroid", c10_centroid(&pool)));
    results.insert(11, ("dual meshes", c11_duals(&pool)));
    results.insert(14, ("serialization", c14_serialization(&pool, dir.path())));

    let mut failed = 0;
    for (id, (name, o)) in &results {
        println!("{} {id:2} {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.passed);
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
