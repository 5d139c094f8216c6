//! The `.dkm` mesh file: a patch radius and the canonical list of applied
//! replacement keys.
//!
//! ```text
//! dkm 1
//! radius 8
//! keys 2
//! 0 0 0 0
//! 1 0 0 0
//! ```
//!
//! Each key line is `level a b k` for the normalized center
//! `(a + bζ) / (1+ζ)^k`, in ascending `(level, a, b, k)` order.

use std::collections::BTreeSet;
use std::fmt::Write;

use thiserror::Error;

use crate::lattice::{LatticeCoord, LowerSet, ReplacementKey, MAX_LEVEL};
use crate::mesh::{Mesh, Patch, MAX_PATCH_RADIUS};

pub const FORMAT_VERSION: u32 = 1;

/// Header token on the first line.
const MAGIC: &str = "dkm";

/// Coordinates beyond this are rejected before any lattice arithmetic.
const MAX_COORD: i64 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: unsupported format version {found}, expected {FORMAT_VERSION}")]
    Version { line: usize, found: String },
    #[error("line {line}: invalid key: {msg}")]
    InvalidKey { line: usize, msg: String },
    #[error("line {line}: key set is not downward closed: {key:?} requires {missing:?}")]
    NotDownwardClosed {
        line: usize,
        key: ReplacementKey,
        missing: ReplacementKey,
    },
    #[error("line {line}: {key:?} does not fit inside the radius-{radius} patch")]
    Boundary {
        line: usize,
        key: ReplacementKey,
        radius: u32,
    },
}

impl FormatError {
    pub fn line(&self) -> usize {
        match self {
            FormatError::Malformed { line, .. }
            | FormatError::Version { line, .. }
            | FormatError::InvalidKey { line, .. }
            | FormatError::NotDownwardClosed { line, .. }
            | FormatError::Boundary { line, .. } => *line,
        }
    }
}

/// The parsed contents of a mesh file. Replaying it cannot fail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeshFile {
    pub patch: Patch,
    pub keys: LowerSet,
}

impl MeshFile {
    pub fn from_mesh(mesh: &Mesh) -> MeshFile {
        MeshFile {
            patch: mesh.patch(),
            keys: mesh.applied().clone(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{MAGIC} {FORMAT_VERSION}");
        let _ = writeln!(s, "radius {}", self.patch.radius());
        let _ = writeln!(s, "keys {}", self.keys.len());
        for k in self.keys.iter() {
            let c = k.center();
            let _ = writeln!(s, "{} {} {} {}", k.level(), c.a(), c.b(), c.k());
        }
        s
    }

    pub fn replay(&self) -> Mesh {
        Mesh::replay(self.patch, &self.keys).expect("parsed key sets are feasible")
    }
}

pub fn serialize(mesh: &Mesh) -> String {
    MeshFile::from_mesh(mesh).to_text()
}

fn malformed(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Malformed { line, msg: msg.into() }
}

/// Splits `line` into `tag value` and parses the value.
fn tagged<T: std::str::FromStr>(
    line: Option<(usize, &str)>,
    tag: &str,
    expected: usize,
) -> Result<(usize, T), FormatError> {
    let (n, text) = line.ok_or_else(|| malformed(expected, format!("missing `{tag}` line")))?;
    let mut parts = text.split(' ');
    if parts.next() != Some(tag) {
        return Err(malformed(n, format!("expected `{tag} <value>`")));
    }
    let value = parts
        .next()
        .ok_or_else(|| malformed(n, format!("`{tag}` needs a value")))?;
    if parts.next().is_some() {
        return Err(malformed(n, format!("trailing text after `{tag}`")));
    }
    value
        .parse()
        .map(|v| (n, v))
        .map_err(|_| malformed(n, format!("bad `{tag}` value {value:?}")))
}

fn parse_key(n: usize, text: &str) -> Result<ReplacementKey, FormatError> {
    let fields: Vec<&str> = text.split(' ').collect();
    if fields.len() != 4 {
        return Err(malformed(n, "expected `level a b k`"));
    }
    let int = |s: &str| s.parse::<i64>().map_err(|_| malformed(n, format!("bad integer {s:?}")));
    let (level, a, b, k) = (int(fields[0])?, int(fields[1])?, int(fields[2])?, int(fields[3])?);
    let bad = |msg: String| FormatError::InvalidKey { line: n, msg };
    if !(0..=MAX_LEVEL as i64).contains(&level) {
        return Err(bad(format!("level {level} outside 0..={MAX_LEVEL}")));
    }
    if a.abs() > MAX_COORD || b.abs() > MAX_COORD || k.abs() > 4 * MAX_LEVEL as i64 {
        return Err(bad("coordinates out of range".into()));
    }
    let c = LatticeCoord::new(a, b, k as i32);
    if (c.a(), c.b(), c.k() as i64) != (a, b, k) {
        return Err(bad(format!("center ({a}, {b}, {k}) is not normalized, expected {c:?}")));
    }
    let key = ReplacementKey::new(c, level as u32);
    if !key.is_valid() {
        return Err(bad(format!("{c:?} is not a level-{level} center")));
    }
    Ok(key)
}

/// Parses a mesh file, checking the header, key order, validity,
/// downward closure, and that every key fits in the patch.
pub fn parse_mesh_file(text: &str) -> Result<MeshFile, FormatError> {
    let text = text.strip_suffix('\n').unwrap_or(text);
    let mut lines = text.split('\n').enumerate().map(|(i, l)| (i + 1, l));

    let (n, version): (usize, String) = tagged(lines.next(), MAGIC, 1)?;
    if version != FORMAT_VERSION.to_string() {
        return Err(FormatError::Version {
            line: n,
            found: version,
        });
    }
    let (n, radius): (usize, u32) = tagged(lines.next(), "radius", 2)?;
    let patch = Patch::new(radius).ok_or_else(|| malformed(n, format!("radius must be in 1..={MAX_PATCH_RADIUS}")))?;
    let (n_count, count): (usize, usize) = tagged(lines.next(), "keys", 3)?;

    let mut keys = Vec::new();
    let mut line_of = Vec::new();
    for (n, text) in lines {
        if keys.len() == count {
            return Err(malformed(n, format!("more than the declared {count} keys")));
        }
        let key = parse_key(n, text)?;
        if keys.last().is_some_and(|prev| *prev >= key) {
            return Err(malformed(n, "keys must be strictly ascending by (level, a, b, k)"));
        }
        if key.level() == 0 && !patch.is_interior_center(key.center()) {
            return Err(FormatError::Boundary { line: n, key, radius });
        }
        keys.push(key);
        line_of.push(n);
    }
    if keys.len() != count {
        return Err(malformed(
            n_count,
            format!("declared {count} keys, found {}", keys.len()),
        ));
    }

    let set: BTreeSet<ReplacementKey> = keys.iter().copied().collect();
    let keys = LowerSet::try_from_keys(set).map_err(|(key, missing)| {
        let line = line_of[keys.binary_search(&key).expect("listed key")];
        FormatError::NotDownwardClosed { line, key, missing }
    })?;
    Ok(MeshFile { patch, keys })
}
