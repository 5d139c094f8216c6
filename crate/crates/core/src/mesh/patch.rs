//! The initial rhombille patch.
//!
//! The patch is a block of hexagonal cells, three diamonds each. Cells are
//! centered at `s + 1` for every degree-six lattice point `s ∈ (1+ζ)Z[ζ]`
//! within `radius` steps of the origin, so the origin is an interior
//! degree-six vertex and one of its edges runs along the positive x-axis.

use crate::lattice::{close_down, is_center, LatticeCoord, ReplacementKey};

/// Largest accepted patch radius.
pub const MAX_PATCH_RADIUS: u32 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Patch {
    radius: u32,
}

impl Patch {
    pub fn new(radius: u32) -> Option<Self> {
        (1..=MAX_PATCH_RADIUS).contains(&radius).then_some(Patch { radius })
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    /// Number of hexagonal cells, `3r² + 3r + 1`.
    pub fn cell_count(&self) -> usize {
        let r = self.radius as usize;
        3 * r * r + 3 * r + 1
    }

    /// Degree-six lattice points `s` whose cell `s + 1` belongs to the patch.
    pub fn cell_anchors(&self) -> impl Iterator<Item = LatticeCoord> + '_ {
        let r = self.radius as i64;
        (-r..=r).flat_map(move |x| {
            (-r..=r)
                .filter(move |y| (x + y).abs() <= r)
                .map(move |y| LatticeCoord::eisenstein(x - y, x + 2 * y))
        })
    }

    /// Whether `s` anchors one of the patch's cells.
    pub fn has_cell(&self, s: LatticeCoord) -> bool {
        if !s.is_origin() && s.k() > -1 {
            return false;
        }
        // s = (1+ζ)(x + yζ); distance in the anchor lattice is max(|x|,|y|,|x+y|)
        let w = s.div_one_plus_zeta();
        let Some((x, y)) = w.as_eisenstein() else {
            return false;
        };
        let r = self.radius as i64;
        x.abs() <= r && y.abs() <= r && (x + y).abs() <= r
    }

    /// The three diamonds of the cell anchored at `s`, counterclockwise and
    /// starting at an acute corner.
    pub fn cell_faces(s: LatticeCoord) -> [[LatticeCoord; 4]; 3] {
        let h = s + LatticeCoord::unit(0);
        [1, 3, 5].map(|m| {
            [
                h + LatticeCoord::unit(m),
                h + LatticeCoord::unit(m + 1),
                h + LatticeCoord::unit(m + 2),
                h,
            ]
        })
    }

    /// Approximate hexagonal distance, in anchor steps, from the central cell
    /// to the cell around `p`.
    fn anchor_distance(&self, p: LatticeCoord) -> f64 {
        let (x, y) = p.to_cartesian();
        // u = (p - 1) / (1 + ζ), with 1 + ζ = 3/2 + i√3/2 and |1 + ζ|² = 3
        let (re, im) = (x - 1.0, y);
        let (cr, ci) = (1.5, 3f64.sqrt() / 2.0);
        let (ur, ui) = ((re * cr + im * ci) / 3.0, (im * cr - re * ci) / 3.0);
        let v = ui / (3f64.sqrt() / 2.0);
        let u = ur - v / 2.0;
        u.abs().max(v.abs()).max((u + v).abs())
    }

    /// Whether all six diamonds around the level-0 center `c` lie in the patch.
    pub fn is_interior_center(&self, c: LatticeCoord) -> bool {
        if !is_center(c, 0) {
            return false;
        }
        // c is the corner h + ζ^m (m = 1, 3, 5) of the cells h = c - ζ^m
        let one = LatticeCoord::unit(0);
        [1, 3, 5]
            .into_iter()
            .all(|m| self.has_cell(c - LatticeCoord::unit(m) - one))
    }

    /// Whether every replacement that `key` depends on, and `key` itself,
    /// can be carried out inside this patch.
    ///
    /// Only level-0 replacements can touch the boundary: a finer key whose
    /// prerequisites were all carried out finds its six faces in place.
    pub fn is_feasible(&self, key: &ReplacementKey) -> bool {
        if key.level() == 0 {
            return self.is_interior_center(key.center());
        }
        // Every level-0 key in the closure lies within 1/(1 - 3^-1/2) < 2.4
        // of the center, and its cells within 1 more; that is at most 2.3
        // anchor steps, so keys this deep inside need no closure walk.
        if self.anchor_distance(key.center()) + 4.0 <= self.radius as f64 {
            return true;
        }
        close_down([*key])
            .iter()
            .filter(|k| k.level() == 0)
            .all(|k| self.is_interior_center(k.center()))
    }
}
