//! Recursive refinement at a vertex.

use crate::error::MeshError;
use crate::lattice::{ReplacementKey, MAX_LEVEL};

use super::{FaceId, Mesh, Shape, VertexId};

/// How refinement treats replacements that would leave the initial patch.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum BoundaryPolicy {
    /// Fail with [`MeshError::BoundaryViolation`] and leave the mesh unchanged.
    #[default]
    Strict,
    /// Silently skip the refinement.
    Clip,
}

/// Replacements performed by one call to [`Mesh::refine`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RefineOutcome {
    /// In the order they were applied.
    pub applied: Vec<ReplacementKey>,
    /// Faces created by the call that are still present.
    pub added_faces: Vec<FaceId>,
    /// Whether the refinement was skipped under [`BoundaryPolicy::Clip`].
    pub clipped: bool,
}

impl Mesh {
    /// The replacement a refinement at `v` ends with: `v` paired with the
    /// level of its 60° faces.
    pub fn refinement_key(&self, v: VertexId) -> Result<ReplacementKey, MeshError> {
        let mut level = None;
        for &f in self.faces_of(v) {
            let face = self.face(f);
            let i = face.corner_index(v).expect("incident face");
            if face.angle_at(i) != 60 {
                continue;
            }
            match level {
                None => level = Some(face.level),
                Some(l) if l != face.level => {
                    return Err(MeshError::precondition(format!(
                        "60° faces at {:?} have levels {l} and {}",
                        self.position(v),
                        face.level
                    )))
                }
                _ => {}
            }
        }
        let level = level.ok_or_else(|| MeshError::precondition(format!("no 60° face at {:?}", self.position(v))))?;
        Ok(ReplacementKey::new(self.position(v), level))
    }

    /// Makes `v` a replacement center and applies that replacement, first
    /// refining the 60° corner of every kite with a right angle at `v`.
    ///
    /// Boundary and level-cap failures are detected before anything changes.
    pub fn refine(&mut self, v: VertexId, policy: BoundaryPolicy) -> Result<RefineOutcome, MeshError> {
        let key = self.refinement_key(v)?;
        if key.level() > MAX_LEVEL {
            return Err(MeshError::LevelCap(key));
        }
        if !key.is_valid() {
            return Err(MeshError::InvalidKey(key));
        }
        if !self.patch.is_feasible(&key) {
            return match policy {
                BoundaryPolicy::Strict => Err(MeshError::BoundaryViolation(key)),
                BoundaryPolicy::Clip => Ok(RefineOutcome {
                    clipped: true,
                    ..Default::default()
                }),
            };
        }
        let mut out = RefineOutcome::default();
        self.refine_inner(v, &mut out)?;
        out.added_faces.retain(|&f| self.contains_face(f));
        Ok(out)
    }

    fn refine_inner(&mut self, v: VertexId, out: &mut RefineOutcome) -> Result<(), MeshError> {
        let key = self.refinement_key(v)?;
        while let Some(kite) = self.right_angle_kite(v) {
            let tip = self.face(kite).corners[0];
            self.refine_inner(tip, out)?;
        }
        let delta = self.apply_replacement(key)?;
        out.applied.push(key);
        out.added_faces.extend(delta.added_faces);
        Ok(())
    }

    fn right_angle_kite(&self, v: VertexId) -> Option<FaceId> {
        self.faces_of(v).iter().copied().find(|&f| {
            let face = self.face(f);
            face.shape == Shape::Kite && face.angle_at(face.corner_index(v).expect("incident face")) == 90
        })
    }
}
