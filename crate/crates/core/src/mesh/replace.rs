//! Replacement steps and their inverse, coarsening steps.

use crate::error::MeshError;
use crate::lattice::{LatticeCoord, ReplacementKey, MAX_LEVEL};

use super::{FaceId, Mesh, Shape, VertexId};

/// What one replacement or coarsening step changed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplacementDelta {
    pub key: ReplacementKey,
    pub removed_faces: Vec<FaceId>,
    pub added_faces: Vec<FaceId>,
    pub added_vertices: Vec<VertexId>,
    pub removed_vertices: Vec<VertexId>,
}

/// One of the six faces with its 60° corner at a replacement center, as
/// `(face, next, far, prev)` going counterclockwise from the center.
type Spoke = (FaceId, VertexId, VertexId, VertexId);

impl Mesh {
    /// Checks a key against the level cap, lattice validity, the applied set
    /// and the patch boundary, in that order.
    pub fn check_replacement(&self, key: ReplacementKey) -> Result<(), MeshError> {
        if key.level() > MAX_LEVEL {
            return Err(MeshError::LevelCap(key));
        }
        if !key.is_valid() {
            return Err(MeshError::InvalidKey(key));
        }
        if self.applied.contains(&key) {
            return Err(MeshError::precondition(format!("{key:?} already applied")));
        }
        if let Some(p) = key.prerequisites().into_iter().find(|p| !self.applied.contains(p)) {
            return Err(MeshError::precondition(format!("{key:?} requires {p:?}")));
        }
        if key.level() == 0 && !self.patch.is_interior_center(key.center()) {
            return Err(MeshError::BoundaryViolation(key));
        }
        Ok(())
    }

    /// Replaces the six level-`j` faces around the key's center by six faces
    /// straddling the old spokes and six level-`j+1` diamonds at the center.
    pub fn apply_replacement(&mut self, key: ReplacementKey) -> Result<ReplacementDelta, MeshError> {
        self.check_replacement(key)?;
        let p = self
            .vertex_at(key.center())
            .ok_or_else(|| MeshError::precondition(format!("no vertex at {:?}", key.center())))?;
        let spokes = self.spokes(p, key.level())?;
        let pos = self.position(p);

        let mut delta = ReplacementDelta {
            key,
            removed_faces: Vec::with_capacity(6),
            added_faces: Vec::with_capacity(12),
            added_vertices: Vec::with_capacity(6),
            removed_vertices: Vec::new(),
        };
        for &(f, ..) in &spokes {
            self.remove_face(f);
            delta.removed_faces.push(f);
        }
        let centroids: Vec<VertexId> = spokes
            .iter()
            .map(|&(_, next, _, prev)| {
                let c = (pos + self.position(next) + self.position(prev)).div3();
                let id = self.insert_vertex(c);
                delta.added_vertices.push(id);
                id
            })
            .collect();
        for (i, &(_, next, far, prev)) in spokes.iter().enumerate() {
            let f = self.add_face([centroids[i], next, far, prev])?;
            delta.added_faces.push(f);
        }
        for i in 0..6 {
            // spoke i's `next` is spoke (i-1)'s `prev`
            let before = centroids[(i + 5) % 6];
            let f = self.add_face([p, before, spokes[i].1, centroids[i]])?;
            delta.added_faces.push(f);
        }
        self.applied.insert_unchecked(key);
        Ok(delta)
    }

    /// The six faces with a 60° level-`level` corner at `p`, counterclockwise.
    fn spokes(&self, p: VertexId, level: u32) -> Result<Vec<Spoke>, MeshError> {
        let around = self.faces_around(p);
        if around.len() != 6 {
            return Err(MeshError::precondition(format!(
                "vertex at {:?} has {} faces, expected 6",
                self.position(p),
                around.len()
            )));
        }
        let mut out = Vec::with_capacity(6);
        for f in around {
            let face = self.face(f);
            let i = face.corner_index(p).expect("incident face");
            if face.angle_at(i) != 60 || face.level != level {
                return Err(MeshError::precondition(format!(
                    "face around {:?} is a level-{} {:?} with {}° there",
                    self.position(p),
                    face.level,
                    face.shape,
                    face.angle_at(i)
                )));
            }
            let c = face.corners;
            out.push((f, c[(i + 1) % 4], c[(i + 2) % 4], c[(i + 3) % 4]));
        }
        for i in 0..6 {
            if out[i].3 != out[(i + 1) % 6].1 {
                return Err(MeshError::precondition("faces around center do not close up"));
            }
        }
        Ok(out)
    }

    /// The key whose undoing would restore the mesh around `v`, if `v` is the
    /// center of a maximal applied replacement.
    pub fn coarsening_key(&self, v: VertexId) -> Option<ReplacementKey> {
        let pos = self.position(v);
        let level = self.faces_of(v).iter().map(|&f| self.face(f).level).max()?;
        let key = ReplacementKey::new(pos, level.checked_sub(1)?);
        self.applied.is_maximal(&key).then_some(key)
    }

    /// Whether [`Mesh::coarsen_step`] at `v` would succeed.
    pub fn is_coarsenable(&self, v: VertexId) -> bool {
        self.coarsen_plan(v).is_ok()
    }

    /// Undoes the maximal replacement centered at `v`.
    pub fn coarsen_step(&mut self, v: VertexId) -> Result<ReplacementDelta, MeshError> {
        let plan = self.coarsen_plan(v)?;
        let mut delta = ReplacementDelta {
            key: plan.key,
            removed_faces: Vec::with_capacity(12),
            added_faces: Vec::with_capacity(6),
            added_vertices: Vec::new(),
            removed_vertices: Vec::with_capacity(6),
        };
        for &f in plan.small.iter().chain(plan.straddling.iter().map(|(f, _)| f)) {
            self.remove_face(f);
            delta.removed_faces.push(f);
        }
        for &n in &plan.centroids {
            self.remove_vertex(n);
            delta.removed_vertices.push(n);
        }
        for (_, corners) in plan.straddling {
            let f = self.add_face(corners)?;
            delta.added_faces.push(f);
        }
        self.applied.remove_unchecked(&plan.key);
        Ok(delta)
    }

    /// The six level-`j` kites a coarsening at `v` would leave around `v`,
    /// each as `(v, H, far, H')` counterclockwise with its 60° corner at `v`,
    /// together with their level.
    ///
    /// Computed from the current geometry without mutating the mesh.
    pub fn coarsening_kites(&self, v: VertexId) -> Result<(u32, Vec<[LatticeCoord; 4]>), MeshError> {
        let plan = self.coarsen_plan(v)?;
        let p = self.position(v);
        let kites = plan
            .centroids
            .iter()
            .map(|&n| {
                let d = self.position(n) - p;
                let ccw = d.mul_one_plus_zeta();
                [p, p + ccw.mul_unit(-1), self.position(n) + d, p + ccw]
            })
            .collect();
        Ok((plan.key.level(), kites))
    }

    fn coarsen_plan(&self, v: VertexId) -> Result<CoarsenPlan, MeshError> {
        let key = self
            .coarsening_key(v)
            .ok_or_else(|| MeshError::precondition("vertex is not the center of a maximal replacement"))?;
        let fine = key.level() + 1;
        let small = self.spokes(v, fine)?;
        let mut plan = CoarsenPlan {
            key,
            small: Vec::new(),
            straddling: Vec::new(),
            centroids: Vec::new(),
        };
        for &(f, n, _, _) in &small {
            if self.face(f).shape != Shape::Diamond {
                return Err(MeshError::precondition("faces around center are not all diamonds"));
            }
            let nf = self.faces_of(n);
            if nf.len() != 3 {
                return Err(MeshError::precondition("inner vertex is not of degree three"));
            }
            let s = *nf
                .iter()
                .find(|&&g| !small.iter().any(|&(h, ..)| h == g))
                .ok_or_else(|| MeshError::precondition("missing straddling face"))?;
            let mut corners = self.face(s).corners;
            let i = corners.iter().position(|&c| c == n).expect("incident face");
            corners[i] = v;
            let pos = corners.map(|c| self.position(c));
            if super::classify(&pos).is_none_or(|c| c.level != key.level()) {
                return Err(MeshError::precondition("restored face is not a coarse diamond or kite"));
            }
            plan.small.push(f);
            plan.straddling.push((s, corners));
            plan.centroids.push(n);
        }
        Ok(plan)
    }
}

struct CoarsenPlan {
    key: ReplacementKey,
    small: Vec<FaceId>,
    straddling: Vec<(FaceId, [VertexId; 4])>,
    centroids: Vec<VertexId>,
}
