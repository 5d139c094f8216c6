//! Exact lattice arithmetic, replacement keys, and the distributive lattice of
//! lower sets of replacements.

mod coord;
mod key;
mod lower_set;

pub use coord::{level_of_length, normalize, relative_vectors, Angle, LatticeCoord, ScaledVec, SquaredLength};
pub use key::{coarse_step, is_center, prerequisites, side_length, ReplacementKey, MAX_LEVEL};
pub use lower_set::{close_down, join, linearize, meet, random_linearization, LowerSet};
