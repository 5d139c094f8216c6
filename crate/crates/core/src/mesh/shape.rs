//! Exact shape classification of quadrilaterals.

use crate::lattice::{level_of_length, relative_vectors, Angle, LatticeCoord, ScaledVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    /// Rhombus with angles 60°, 120°, 60°, 120°.
    Diamond,
    /// Angles 60°, 90°, 120°, 90°; the sides at the 60° corner are √3 times
    /// the sides at the 120° corner.
    Kite,
}

/// Result of classifying four counterclockwise corners.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classified {
    pub shape: Shape,
    /// Longest side is `3^(-level/2)`.
    pub level: u32,
    /// Index of the corner that becomes corner 0.
    pub start: usize,
}

/// Interior angles and side norms of a quadrilateral, at a shared scale.
pub(crate) struct QuadMetrics {
    pub angles: [Angle; 4],
    /// `side[i]` joins corner `i` to corner `i + 1`.
    pub side: [i128; 4],
    pub scale: i32,
    pub convex_ccw: bool,
}

pub(crate) fn metrics(p: &[LatticeCoord; 4]) -> QuadMetrics {
    let (scale, v) = relative_vectors(p[0], *p);
    let edge = |i: usize| -> ScaledVec {
        let (s, t) = (v[i], v[(i + 1) % 4]);
        ScaledVec {
            a: t.a - s.a,
            b: t.b - s.b,
        }
    };
    let e = [edge(0), edge(1), edge(2), edge(3)];
    let mut angles = [Angle::Other; 4];
    let mut convex_ccw = true;
    for i in 0..4 {
        let into = e[(i + 3) % 4];
        let out = e[i];
        let back = ScaledVec { a: -into.a, b: -into.b };
        angles[i] = out.angle_to(&back);
        if into.cross(&out) <= 0 {
            convex_ccw = false;
        }
    }
    QuadMetrics {
        angles,
        side: e.map(|s| s.norm()),
        scale,
        convex_ccw,
    }
}

/// Classifies a counterclockwise quadrilateral as a diamond or kite.
///
/// Diamonds start at the acute corner with the smaller coordinate; kites
/// start at their 60° corner.
pub fn classify(p: &[LatticeCoord; 4]) -> Option<Classified> {
    use Angle::*;
    let m = metrics(p);
    if !m.convex_ccw {
        return None;
    }
    for start in 0..4 {
        let a = |i: usize| m.angles[(start + i) % 4];
        let s = |i: usize| m.side[(start + i) % 4];
        let shape = match (a(0), a(1), a(2), a(3)) {
            (Sixty, OneTwenty, Sixty, OneTwenty) if (0..4).all(|i| s(i) == s(0)) => Shape::Diamond,
            (Sixty, Right, OneTwenty, Right) if s(0) == s(3) && s(1) == s(2) && s(0) == 3 * s(1) => Shape::Kite,
            _ => continue,
        };
        let level = level_of_length(s(0), m.scale)?;
        if level < 0 {
            return None;
        }
        let start = match shape {
            Shape::Kite => start,
            Shape::Diamond => {
                let other = (start + 2) % 4;
                if p[other] < p[start] {
                    other
                } else {
                    start
                }
            }
        };
        return Some(Classified {
            shape,
            level: level as u32,
            start,
        });
    }
    None
}

/// Rotates `p` so that index `start` comes first.
pub(crate) fn rotate<T: Copy>(p: &[T; 4], start: usize) -> [T; 4] {
    [p[start % 4], p[(start + 1) % 4], p[(start + 2) % 4], p[(start + 3) % 4]]
}
