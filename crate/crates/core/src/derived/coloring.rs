//! Face 3-coloring by diagonal orientation.

use std::collections::BTreeMap;

use crate::lattice::LatticeCoord;
use crate::mesh::{FaceId, Mesh};

/// Direction of a nonzero lattice vector in multiples of 30°, modulo 180°.
///
/// Returns `None` for directions that are not multiples of 30°.
pub fn direction_class(d: LatticeCoord) -> Option<u8> {
    let (a, b, k) = (d.a(), d.b(), d.k());
    // Eisenstein integers along the six lines through the origin, at 0°, 30°,
    // ..., 150° modulo 180°.
    let t0 = if b == 0 {
        0
    } else if a == b {
        1
    } else if a == 0 {
        2
    } else if b == -2 * a {
        3
    } else if a == -b {
        4
    } else if a == -2 * b {
        5
    } else {
        return None;
    };
    // dividing by (1+ζ)^k turns by -30k degrees
    Some((t0 - k as i64).rem_euclid(6) as u8)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FaceColoring {
    colors: BTreeMap<FaceId, u8>,
}

impl FaceColoring {
    pub fn color(&self, f: FaceId) -> Option<u8> {
        self.colors.get(&f).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (FaceId, u8)> + '_ {
        self.colors.iter().map(|(f, c)| (*f, *c))
    }

    /// Number of faces of each color.
    pub fn class_sizes(&self) -> [usize; 3] {
        let mut n = [0; 3];
        for &c in self.colors.values() {
            n[c as usize] += 1;
        }
        n
    }

    pub fn class_count(&self) -> usize {
        self.class_sizes().iter().filter(|&&n| n > 0).count()
    }
}

/// Colors each face by the direction of its diagonals. The two diagonals are
/// perpendicular, so both give the same class modulo 90°.
pub fn three_color(mesh: &Mesh) -> FaceColoring {
    let colors = mesh
        .faces()
        .map(|(f, _)| {
            let c = mesh.face_positions(f);
            let t = direction_class(c[2] - c[0]).expect("diagonals lie on lattice directions");
            (f, t % 3)
        })
        .collect();
    FaceColoring { colors }
}

/// Pairs of edge-adjacent faces that share a color.
pub fn coloring_conflicts(mesh: &Mesh, coloring: &FaceColoring) -> Vec<(FaceId, FaceId)> {
    let mut out: Vec<_> = mesh
        .edges()
        .filter_map(|(_, fs)| match fs {
            [Some(f), Some(g)] if coloring.color(*f) == coloring.color(*g) => Some((*f.min(g), *f.max(g))),
            _ => None,
        })
        .collect();
    out.sort();
    out
}
