//! Adaptive diamond-kite quadrilateral meshes.
//!
//! Every mesh vertex is an exact point of the Eisenstein lattice refined by
//! powers of `1+ζ`, and every mesh is identified by the downward-closed set
//! of replacement steps that produced it from a rhombille patch. On top of
//! that sit size-driven refinement and coarsening, an orthogonal circle
//! packing, a 3-coloring of the faces, the two dual meshes, and text/SVG I/O.

pub mod adapt;
pub mod derived;
pub mod error;
pub mod io;
pub mod lattice;
pub mod mesh;
pub mod verify;

pub use error::MeshError;
pub use lattice::{LatticeCoord, LowerSet, ReplacementKey};
pub use mesh::{BoundaryPolicy, Mesh};
