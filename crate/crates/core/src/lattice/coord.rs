//! Exact coordinates in the ring Z[ζ, (1+ζ)^-1], ζ = e^{iπ/3}.
//!
//! A [`LatticeCoord`] `(a, b, k)` denotes the planar point `(a + bζ) / (1+ζ)^k`
//! measured in initial edge lengths. Since `|1+ζ| = √3` and `arg(1+ζ) = 30°`,
//! raising `k` by one shrinks by `1/√3` and rotates by `-30°`, which is exactly
//! one subdivision level. Every vertex of every diamond-kite mesh is
//! representable, and equality is exact.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::Ratio;

/// Exact squared length, `|v|²`, as a rational number.
pub type SquaredLength = Ratio<i128>;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeCoord {
    a: i64,
    b: i64,
    k: i32,
}

/// `(a + bζ)(1 + ζ) = (a - b) + (a + 2b)ζ`
#[inline]
fn mul_one_plus_zeta(a: i64, b: i64) -> (i64, i64) {
    (a - b, a + 2 * b)
}

/// `(a + bζ)ζ = -b + (a + b)ζ`
#[inline]
fn mul_zeta(a: i64, b: i64) -> (i64, i64) {
    (-b, a + b)
}

impl LatticeCoord {
    pub const ORIGIN: LatticeCoord = LatticeCoord { a: 0, b: 0, k: 0 };

    /// Builds the normalized coordinate for `(a + bζ) / (1+ζ)^k`.
    pub fn new(a: i64, b: i64, k: i32) -> Self {
        normalize(a, b, k)
    }

    /// An Eisenstein integer `a + bζ` (scale exponent zero).
    pub fn eisenstein(a: i64, b: i64) -> Self {
        normalize(a, b, 0)
    }

    /// The unit `ζ^m`.
    pub fn unit(m: i32) -> Self {
        const UNITS: [(i64, i64); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];
        let (a, b) = UNITS[m.rem_euclid(6) as usize];
        LatticeCoord { a, b, k: 0 }
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn k(&self) -> i32 {
        self.k
    }

    pub fn is_origin(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Numerator `(a', b')` such that `self = (a' + b'ζ) / (1+ζ)^k`.
    ///
    /// `k` must be at least `self.k()`.
    pub fn raw_at(&self, k: i32) -> (i64, i64) {
        debug_assert!(k >= self.k || self.is_origin());
        let (mut a, mut b) = (self.a, self.b);
        if self.is_origin() {
            return (0, 0);
        }
        for _ in self.k..k {
            (a, b) = mul_one_plus_zeta(a, b);
        }
        (a, b)
    }

    /// Eisenstein-integer form, if this point lies in Z[ζ].
    pub fn as_eisenstein(&self) -> Option<(i64, i64)> {
        if self.k <= 0 || self.is_origin() {
            Some(self.raw_at(0))
        } else {
            None
        }
    }

    pub fn mul_unit(self, m: i32) -> Self {
        let (mut a, mut b) = (self.a, self.b);
        for _ in 0..m.rem_euclid(6) {
            (a, b) = mul_zeta(a, b);
        }
        LatticeCoord { a, b, k: self.k }
    }

    /// Divides by `(1+ζ)`: one level finer.
    pub fn div_one_plus_zeta(self) -> Self {
        if self.is_origin() {
            return self;
        }
        LatticeCoord {
            a: self.a,
            b: self.b,
            k: self.k + 1,
        }
    }

    /// Multiplies by `(1+ζ)`: one level coarser.
    pub fn mul_one_plus_zeta(self) -> Self {
        normalize(self.a, self.b, self.k - 1)
    }

    /// Multiplies by an integer.
    pub fn scale(self, n: i64) -> Self {
        normalize(self.a * n, self.b * n, self.k)
    }

    /// Divides by 3, using `3 = (1+ζ)² / ζ`.
    pub fn div3(self) -> Self {
        let (a, b) = mul_zeta(self.a, self.b);
        normalize(a, b, self.k + 2)
    }

    /// Exact squared Euclidean length, `(a² + ab + b²) / 3^k`.
    pub fn norm_sq(&self) -> SquaredLength {
        let (a, b) = (self.a as i128, self.b as i128);
        let n = a * a + a * b + b * b;
        if self.k >= 0 {
            Ratio::new(n, 3i128.pow(self.k as u32))
        } else {
            Ratio::from_integer(n * 3i128.pow((-self.k) as u32))
        }
    }

    /// Floating-point position. For output only; topology never depends on it.
    pub fn to_cartesian(&self) -> (f64, f64) {
        if self.is_origin() {
            return (0.0, 0.0);
        }
        let x = self.a as f64 + 0.5 * self.b as f64;
        let y = self.b as f64 * (3f64.sqrt() / 2.0);
        // (1+ζ)^-k = 3^{-k/2} · e^{-iπk/6}
        let (s, c) = rotation_30(-self.k);
        let mag = inv_sqrt3_pow(self.k);
        ((x * c - y * s) * mag, (x * s + y * c) * mag)
    }
}

/// `3^(-k/2)`.
pub(crate) fn inv_sqrt3_pow(k: i32) -> f64 {
    let whole = 3f64.powi(-k.div_euclid(2));
    if k.rem_euclid(2) == 1 {
        whole / 3f64.sqrt()
    } else {
        whole
    }
}

/// `(sin, cos)` of `m · 30°`, with the exact zeros and halves.
fn rotation_30(m: i32) -> (f64, f64) {
    let h = 3f64.sqrt() / 2.0;
    let i = m.rem_euclid(12) as usize;
    let cos = [1.0, h, 0.5, 0.0, -0.5, -h, -1.0, -h, -0.5, 0.0, 0.5, h];
    let sin = [0.0, 0.5, h, 1.0, h, 0.5, 0.0, -0.5, -h, -1.0, -h, -0.5];
    (sin[i], cos[i])
}

/// Reduces `(a, b, k)` to its unique normalized form.
///
/// `a + bζ` is divisible by `(1+ζ)` exactly when `a ≡ b (mod 3)`, and then
/// `(a + bζ) / (1+ζ) = ((2a + b) + (b - a)ζ) / 3`.
pub fn normalize(mut a: i64, mut b: i64, mut k: i32) -> LatticeCoord {
    if a == 0 && b == 0 {
        return LatticeCoord::ORIGIN;
    }
    while (a - b).rem_euclid(3) == 0 {
        (a, b) = ((2 * a + b) / 3, (b - a) / 3);
        k -= 1;
    }
    LatticeCoord { a, b, k }
}

fn common_k(p: &LatticeCoord, q: &LatticeCoord) -> i32 {
    match (p.is_origin(), q.is_origin()) {
        (true, true) => 0,
        (true, false) => q.k,
        (false, true) => p.k,
        (false, false) => p.k.max(q.k),
    }
}

impl Add for LatticeCoord {
    type Output = LatticeCoord;
    fn add(self, rhs: LatticeCoord) -> LatticeCoord {
        let k = common_k(&self, &rhs);
        let (a1, b1) = self.raw_at(k);
        let (a2, b2) = rhs.raw_at(k);
        normalize(a1 + a2, b1 + b2, k)
    }
}

impl Sub for LatticeCoord {
    type Output = LatticeCoord;
    fn sub(self, rhs: LatticeCoord) -> LatticeCoord {
        self + (-rhs)
    }
}

impl Neg for LatticeCoord {
    type Output = LatticeCoord;
    fn neg(self) -> LatticeCoord {
        LatticeCoord {
            a: -self.a,
            b: -self.b,
            k: self.k,
        }
    }
}

impl fmt::Debug for LatticeCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.k)
    }
}

impl fmt::Display for LatticeCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A vector between lattice points, expressed at a shared scale exponent.
///
/// Angle and orientation predicates are invariant under the common factor
/// `(1+ζ)^-k`, so they can be evaluated on the integer numerators alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScaledVec {
    pub a: i128,
    pub b: i128,
}

/// Components below this bound let products run in `i64`.
const SMALL: i128 = 1 << 30;

impl ScaledVec {
    fn small(&self) -> Option<(i64, i64)> {
        (self.a.abs() < SMALL && self.b.abs() < SMALL).then_some((self.a as i64, self.b as i64))
    }

    /// `|v|²` up to the shared factor `3^-k`.
    pub fn norm(&self) -> i128 {
        match self.small() {
            Some((a, b)) => (a * a + a * b + b * b) as i128,
            None => self.a * self.a + self.a * self.b + self.b * self.b,
        }
    }

    /// Twice the dot product, up to the shared factor.
    pub fn dot2(&self, o: &ScaledVec) -> i128 {
        match (self.small(), o.small()) {
            (Some((a, b)), Some((c, d))) => (2 * a * c + 2 * b * d + a * d + b * c) as i128,
            _ => 2 * self.a * o.a + 2 * self.b * o.b + self.a * o.b + self.b * o.a,
        }
    }

    /// Cross product divided by `√3/2`, up to the shared factor; its sign is
    /// the orientation of `(self, o)`.
    pub fn cross(&self, o: &ScaledVec) -> i128 {
        match (self.small(), o.small()) {
            (Some((a, b)), Some((c, d))) => (a * d - b * c) as i128,
            _ => self.a * o.b - self.b * o.a,
        }
    }

    /// Classifies the angle between two nonzero vectors.
    pub fn angle_to(&self, o: &ScaledVec) -> Angle {
        let d = self.dot2(o);
        if d == 0 {
            return Angle::Right;
        }
        let (n1, n2) = (self.norm(), o.norm());
        let fits = |x: i128| i64::try_from(x).is_ok();
        // a product of two i64 values cannot overflow i128
        let equal = if fits(d) && fits(n1) && fits(n2) {
            d.wrapping_mul(d) == n1.wrapping_mul(n2)
        } else {
            d * d == n1 * n2
        };
        match (equal, d > 0) {
            (true, true) => Angle::Sixty,
            (true, false) => Angle::OneTwenty,
            (false, _) => Angle::Other,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Angle {
    Sixty,
    Right,
    OneTwenty,
    Other,
}

impl Angle {
    pub fn degrees(&self) -> Option<u32> {
        match self {
            Angle::Sixty => Some(60),
            Angle::Right => Some(90),
            Angle::OneTwenty => Some(120),
            Angle::Other => None,
        }
    }
}

/// Expresses the vectors `points[i] - base` at the coarsest shared scale.
///
/// Returns the scale exponent together with the vectors.
pub fn relative_vectors<const N: usize>(base: LatticeCoord, points: [LatticeCoord; N]) -> (i32, [ScaledVec; N]) {
    let mut k = if base.is_origin() { i32::MIN } else { base.k };
    for p in &points {
        if !p.is_origin() {
            k = k.max(p.k);
        }
    }
    if k == i32::MIN {
        k = 0;
    }
    let (ba, bb) = base.raw_at(k);
    let vs = points.map(|p| {
        let (a, b) = p.raw_at(k);
        ScaledVec {
            a: (a - ba) as i128,
            b: (b - bb) as i128,
        }
    });
    (k, vs)
}

/// The level `j` with `norm = 3^-j` for a vector measured at scale `k`, if the
/// length is exactly a power of `1/√3`.
pub fn level_of_length(norm: i128, k: i32) -> Option<i32> {
    if norm <= 0 {
        return None;
    }
    let mut n = norm;
    let mut e = 0;
    while n % 3 == 0 {
        n /= 3;
        e += 1;
    }
    (n == 1).then_some(k - e)
}
