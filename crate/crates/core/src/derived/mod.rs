//! Structures derived from a diamond-kite mesh.

mod centroid;
mod coloring;
mod dual;
mod packing;
mod stats;

pub use centroid::{check_centroid, check_centroid_with, CentroidReport};
pub use coloring::{coloring_conflicts, direction_class, three_color, FaceColoring};
pub use dual::{bipartition, classify_polygon, dual_meshes, DualFace, DualMesh, DualMeshPair, DualShape};
pub use packing::{build_packing, validate_packing, Circle, CirclePacking, PackingError, PackingReport};
pub use stats::{local_feature_size, stats, MeshStats, Summary};
