use thiserror::Error;

use crate::lattice::{ReplacementKey, MAX_LEVEL};

/// Failures of mesh-mutating operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeshError {
    #[error("invalid replacement key {0:?}")]
    InvalidKey(ReplacementKey),
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("replacement {0:?} does not fit inside the patch")]
    BoundaryViolation(ReplacementKey),
    #[error("replacement {0:?} is finer than the level cap {MAX_LEVEL}")]
    LevelCap(ReplacementKey),
    #[error("patch radius {0} is outside the supported range 1..={max}", max = crate::mesh::MAX_PATCH_RADIUS)]
    InvalidRadius(u32),
}

impl MeshError {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        MeshError::PreconditionViolation(msg.into())
    }
}
