//! The explicit diamond-kite quadrilateral mesh.
//!
//! Vertices carry exact [`LatticeCoord`] positions; faces store four corner
//! ids counterclockwise. Every edge knows its one or two incident faces. The
//! mesh also records the lower set of replacements that produced it from the
//! initial patch, which is its canonical identity.

mod patch;
mod refine;
mod replace;
mod shape;

use std::collections::BTreeSet;

use rustc_hash::FxHashMap;

use crate::error::MeshError;
use crate::lattice::{linearize, relative_vectors, LatticeCoord, LowerSet, ReplacementKey, ScaledVec};

pub use patch::{Patch, MAX_PATCH_RADIUS};
pub use refine::{BoundaryPolicy, RefineOutcome};
pub use replace::ReplacementDelta;
pub use shape::{classify, Classified, Shape};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceId(u32);

impl VertexId {
    pub fn index(&self) -> usize {
        self.0 as usize
    }
}

impl FaceId {
    pub fn index(&self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug)]
struct Vertex {
    pos: LatticeCoord,
    faces: Vec<FaceId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Face {
    /// Counterclockwise, starting at the 60° corner of a kite or at an acute
    /// corner of a diamond.
    pub corners: [VertexId; 4],
    pub shape: Shape,
    /// Longest side is `3^(-level/2)`.
    pub level: u32,
}

impl Face {
    /// Interior angle at corner `i`, in degrees.
    pub fn angle_at(&self, i: usize) -> u32 {
        match (self.shape, i % 4) {
            (Shape::Diamond, 0 | 2) => 60,
            (Shape::Diamond, _) => 120,
            (Shape::Kite, 0) => 60,
            (Shape::Kite, 2) => 120,
            (Shape::Kite, _) => 90,
        }
    }

    pub fn corner_index(&self, v: VertexId) -> Option<usize> {
        self.corners.iter().position(|&c| c == v)
    }
}

/// Position-only description of a face, used for mesh equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceGeometry {
    pub shape: Shape,
    pub level: u32,
    pub corners: [LatticeCoord; 4],
}

type EdgeKey = (VertexId, VertexId);

fn edge_key(u: VertexId, v: VertexId) -> EdgeKey {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Clone, Debug)]
pub struct Mesh {
    patch: Patch,
    vertices: Vec<Option<Vertex>>,
    faces: Vec<Option<Face>>,
    by_pos: FxHashMap<LatticeCoord, VertexId>,
    edges: FxHashMap<EdgeKey, [Option<FaceId>; 2]>,
    applied: LowerSet,
    live_vertices: usize,
    live_faces: usize,
}

impl Mesh {
    /// The rhombille patch of `3r² + 3r + 1` hexagonal cells, three diamonds each.
    pub fn initial_patch(radius: u32) -> Result<Mesh, MeshError> {
        let patch = Patch::new(radius).ok_or(MeshError::InvalidRadius(radius))?;
        Ok(Self::from_patch(patch))
    }

    pub fn from_patch(patch: Patch) -> Mesh {
        let mut mesh = Mesh {
            patch,
            vertices: Vec::new(),
            faces: Vec::new(),
            by_pos: FxHashMap::default(),
            edges: FxHashMap::default(),
            applied: LowerSet::new(),
            live_vertices: 0,
            live_faces: 0,
        };
        let anchors: Vec<_> = patch.cell_anchors().collect();
        for s in anchors {
            for corners in Patch::cell_faces(s) {
                let ids = corners.map(|p| mesh.vertex_or_insert(p));
                mesh.add_face(ids).expect("rhombille cell faces are diamonds");
            }
        }
        mesh
    }

    /// Builds the mesh of a lower set by replaying a linearization of it.
    pub fn replay(patch: Patch, keys: &LowerSet) -> Result<Mesh, MeshError> {
        let mut mesh = Mesh::from_patch(patch);
        mesh.apply_all(linearize(keys))?;
        Ok(mesh)
    }

    /// Applies keys in the given order, which must respect prerequisites.
    pub fn apply_all<I: IntoIterator<Item = ReplacementKey>>(&mut self, keys: I) -> Result<(), MeshError> {
        for k in keys {
            self.apply_replacement(k)?;
        }
        Ok(())
    }

    pub fn patch(&self) -> Patch {
        self.patch
    }

    pub fn applied(&self) -> &LowerSet {
        &self.applied
    }

    pub fn vertex_count(&self) -> usize {
        self.live_vertices
    }

    pub fn face_count(&self) -> usize {
        self.live_faces
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `V - E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    pub fn vertex_at(&self, pos: LatticeCoord) -> Option<VertexId> {
        self.by_pos.get(&pos).copied()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        matches!(self.vertices.get(v.index()), Some(Some(_)))
    }

    pub fn contains_face(&self, f: FaceId) -> bool {
        matches!(self.faces.get(f.index()), Some(Some(_)))
    }

    /// Panics if `v` is not a live vertex.
    pub fn position(&self, v: VertexId) -> LatticeCoord {
        self.vertex(v).pos
    }

    /// Panics if `f` is not a live face.
    pub fn face(&self, f: FaceId) -> &Face {
        self.faces[f.index()].as_ref().expect("live face")
    }

    pub fn try_face(&self, f: FaceId) -> Option<&Face> {
        self.faces.get(f.index()).and_then(|f| f.as_ref())
    }

    pub fn face_positions(&self, f: FaceId) -> [LatticeCoord; 4] {
        self.face(f).corners.map(|v| self.position(v))
    }

    pub fn vertices(&self) -> impl Iterator<Item = (VertexId, LatticeCoord)> + '_ {
        self.vertices
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.as_ref().map(|v| (VertexId(i as u32), v.pos)))
    }

    pub fn faces(&self) -> impl Iterator<Item = (FaceId, &Face)> + '_ {
        self.faces
            .iter()
            .enumerate()
            .filter_map(|(i, f)| f.as_ref().map(|f| (FaceId(i as u32), f)))
    }

    /// Undirected edges with their incident faces.
    pub fn edges(&self) -> impl Iterator<Item = ((VertexId, VertexId), &[Option<FaceId>; 2])> + '_ {
        self.edges.iter().map(|(k, v)| (*k, v))
    }

    pub fn edge_faces(&self, u: VertexId, v: VertexId) -> Option<&[Option<FaceId>; 2]> {
        self.edges.get(&edge_key(u, v))
    }

    /// Incident faces, unordered.
    pub fn faces_of(&self, v: VertexId) -> &[FaceId] {
        &self.vertex(v).faces
    }

    /// Incident faces in counterclockwise order around `v`.
    pub fn faces_around(&self, v: VertexId) -> Vec<FaceId> {
        let p = self.position(v);
        let mut keyed: Vec<(ScaledVec, FaceId)> = self
            .faces_of(v)
            .iter()
            .map(|&f| {
                let c = self.face_positions(f);
                let (_, r) = relative_vectors(p, c);
                let sum = r.iter().fold(ScaledVec { a: 0, b: 0 }, |acc, x| ScaledVec {
                    a: acc.a + x.a,
                    b: acc.b + x.b,
                });
                (sum, f)
            })
            .collect();
        // Directions differ in scale per face; only the orientation matters.
        keyed.sort_by(|(x, _), (y, _)| direction_cmp(x, y));
        keyed.into_iter().map(|(_, f)| f).collect()
    }

    /// Vertices joined to `v` by an edge, sorted by id.
    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self
            .faces_of(v)
            .iter()
            .flat_map(|&f| {
                let face = self.face(f);
                let i = face.corner_index(v).expect("incident face");
                [face.corners[(i + 1) % 4], face.corners[(i + 3) % 4]]
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.neighbors(v).len()
    }

    /// A vertex on the patch boundary has an edge with a single face.
    pub fn is_boundary_vertex(&self, v: VertexId) -> bool {
        self.neighbors(v).into_iter().any(|u| {
            self.edges
                .get(&edge_key(u, v))
                .is_none_or(|e| e[0].is_none() || e[1].is_none())
        })
    }

    /// Position-only view of the mesh, for equality checks.
    pub fn geometry(&self) -> BTreeSet<FaceGeometry> {
        self.faces()
            .map(|(id, f)| FaceGeometry {
                shape: f.shape,
                level: f.level,
                corners: self.face_positions(id),
            })
            .collect()
    }

    /// Number of faces at each level, indexed by level.
    pub fn level_histogram(&self) -> Vec<usize> {
        let mut h = Vec::new();
        for (_, f) in self.faces() {
            let l = f.level as usize;
            if h.len() <= l {
                h.resize(l + 1, 0);
            }
            h[l] += 1;
        }
        h
    }

    fn vertex(&self, v: VertexId) -> &Vertex {
        self.vertices[v.index()].as_ref().expect("live vertex")
    }

    fn vertex_mut(&mut self, v: VertexId) -> &mut Vertex {
        self.vertices[v.index()].as_mut().expect("live vertex")
    }

    fn vertex_or_insert(&mut self, pos: LatticeCoord) -> VertexId {
        if let Some(&v) = self.by_pos.get(&pos) {
            return v;
        }
        self.insert_vertex(pos)
    }

    fn insert_vertex(&mut self, pos: LatticeCoord) -> VertexId {
        let id = VertexId(self.vertices.len() as u32);
        self.vertices.push(Some(Vertex {
            pos,
            faces: Vec::with_capacity(6),
        }));
        let prev = self.by_pos.insert(pos, id);
        debug_assert!(prev.is_none(), "duplicate vertex at {pos:?}");
        self.live_vertices += 1;
        id
    }

    fn remove_vertex(&mut self, v: VertexId) {
        let vert = self.vertices[v.index()].take().expect("live vertex");
        debug_assert!(vert.faces.is_empty());
        self.by_pos.remove(&vert.pos);
        self.live_vertices -= 1;
    }

    /// Adds a face from counterclockwise corners, classifying its shape.
    fn add_face(&mut self, corners: [VertexId; 4]) -> Result<FaceId, MeshError> {
        let pos = corners.map(|v| self.position(v));
        let c = classify(&pos).ok_or_else(|| MeshError::precondition(format!("not a diamond or kite: {pos:?}")))?;
        let corners = shape::rotate(&corners, c.start);
        let id = FaceId(self.faces.len() as u32);
        self.faces.push(Some(Face {
            corners,
            shape: c.shape,
            level: c.level,
        }));
        for i in 0..4 {
            let (u, w) = (corners[i], corners[(i + 1) % 4]);
            let slot = self.edges.entry(edge_key(u, w)).or_insert([None, None]);
            match slot {
                [None, _] => slot[0] = Some(id),
                [Some(_), None] => slot[1] = Some(id),
                _ => panic!("edge {u:?}-{w:?} already has two faces"),
            }
        }
        for v in corners {
            self.vertex_mut(v).faces.push(id);
        }
        self.live_faces += 1;
        Ok(id)
    }

    fn remove_face(&mut self, f: FaceId) -> Face {
        let face = self.faces[f.index()].take().expect("live face");
        let c = face.corners;
        for i in 0..4 {
            let key = edge_key(c[i], c[(i + 1) % 4]);
            let slot = self.edges.get_mut(&key).expect("face edge");
            if slot[0] == Some(f) {
                slot[0] = slot[1].take();
            } else {
                debug_assert_eq!(slot[1], Some(f));
                slot[1] = None;
            }
            if slot[0].is_none() {
                self.edges.remove(&key);
            }
        }
        for v in c {
            let faces = &mut self.vertex_mut(v).faces;
            let i = faces.iter().position(|&x| x == f).expect("incidence");
            faces.swap_remove(i);
        }
        self.live_faces -= 1;
        face
    }
}

impl PartialEq for Mesh {
    fn eq(&self, other: &Mesh) -> bool {
        self.patch == other.patch
            && self.applied == other.applied
            && self.face_count() == other.face_count()
            && self.geometry() == other.geometry()
    }
}

/// Orders direction vectors by angle in `[0°, 360°)`.
fn direction_cmp(x: &ScaledVec, y: &ScaledVec) -> std::cmp::Ordering {
    // Cartesian (2a + b, √3 b) / 2; the √3 factor does not change signs.
    let half = |v: &ScaledVec| {
        let (cx, cy) = (2 * v.a + v.b, v.b);
        if cy > 0 || (cy == 0 && cx > 0) {
            0
        } else {
            1
        }
    };
    half(x).cmp(&half(y)).then_with(|| 0.cmp(&x.cross(y)))
}
