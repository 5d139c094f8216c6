use std::fmt;

use super::coord::LatticeCoord;

/// Finest level a replacement may have; keeps every coordinate and every
/// intermediate product inside 64/128-bit integers.
pub const MAX_LEVEL: u32 = 36;

/// One replacement step: the hexagon centered at `center` whose six spokes
/// have length `3^(-level/2)` initial edge lengths.
///
/// Ordered by `(level, a, b, k)` of the normalized center.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReplacementKey {
    level: u32,
    center: LatticeCoord,
}

impl ReplacementKey {
    /// Builds a key without checking validity; see [`ReplacementKey::is_valid`].
    pub const fn new(center: LatticeCoord, level: u32) -> Self {
        ReplacementKey { level, center }
    }

    pub fn center(&self) -> LatticeCoord {
        self.center
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn is_valid(&self) -> bool {
        self.level <= MAX_LEVEL && is_center(self.center, self.level)
    }

    /// Side length `3^(-level/2)`.
    pub fn side(&self) -> f64 {
        side_length(self.level)
    }

    /// Immediate prerequisites; see [`prerequisites`].
    pub fn prerequisites(&self) -> Vec<ReplacementKey> {
        prerequisites(self)
    }
}

impl fmt::Debug for ReplacementKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?} @ {}]", self.center, self.level)
    }
}

/// `3^(-level/2)`.
pub fn side_length(level: u32) -> f64 {
    super::coord::inv_sqrt3_pow(level as i32)
}

/// Whether `p` can be the center of a level-`j` replacement.
///
/// The level-`j` mesh edges are `(1+ζ)^-j` times a unit, so the fully refined
/// level-`j` tiling has its vertices on `(1+ζ)^-j Z[ζ]` and its degree-six
/// vertices on the index-3 sublattice `(1+ζ)^(1-j) Z[ζ]`, i.e. normalized
/// `k <= j - 1`.
pub fn is_center(p: LatticeCoord, j: u32) -> bool {
    p.is_origin() || p.k() < j as i32
}

/// Immediate prerequisites of a valid key.
///
/// * level 0: none;
/// * `center` already a center one level up: that single coarser key;
/// * otherwise the three coarser centers among the six lattice neighbours at
///   distance `√3 · side`.
pub fn prerequisites(key: &ReplacementKey) -> Vec<ReplacementKey> {
    debug_assert!(key.is_valid(), "invalid key {key:?}");
    if key.level == 0 {
        return Vec::new();
    }
    let coarser = key.level - 1;
    if is_center(key.center, coarser) {
        return vec![ReplacementKey::new(key.center, coarser)];
    }
    let step = coarse_step(coarser);
    let out: Vec<ReplacementKey> = (0..6)
        .map(|m| key.center + step.mul_unit(m))
        .filter(|&q| is_center(q, coarser))
        .map(|q| ReplacementKey::new(q, coarser))
        .collect();
    debug_assert_eq!(out.len(), 3);
    out
}

/// `(1+ζ)^-level`: the level-`level` edge vector along the first unit direction.
pub fn coarse_step(level: u32) -> LatticeCoord {
    let mut v = LatticeCoord::unit(0);
    for _ in 0..level {
        v = v.div_one_plus_zeta();
    }
    v
}
