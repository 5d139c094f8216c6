//! Text formats: mesh files, size-field configs, grid samples, and SVG.

mod config;
mod format;
mod svg;

pub use config::{load_size_field, parse_grid, parse_size_config, ConfigError, GridData, SizeSpec};
pub use format::{parse_mesh_file, serialize, FormatError, MeshFile, FORMAT_VERSION};
pub use svg::{render_svg, Layer, Layers, SvgOptions};
