//! Local size functions and their minima over quadrilaterals.

/// A planar point in initial edge lengths.
pub type Point = (f64, f64);

/// A positive local size function `σ`.
///
/// `min_over_quad` must never exceed `σ` at any point of the (convex,
/// counterclockwise) quadrilateral; the built-in fields return the exact
/// infimum or a Lipschitz-certified lower bound.
pub trait SizeField {
    fn eval(&self, p: Point) -> f64;
    fn min_over_quad(&self, q: &[Point; 4]) -> f64;
}

impl<F: SizeField + ?Sized> SizeField for &F {
    fn eval(&self, p: Point) -> f64 {
        (**self).eval(p)
    }
    fn min_over_quad(&self, q: &[Point; 4]) -> f64 {
        (**self).min_over_quad(q)
    }
}

impl<F: SizeField + ?Sized> SizeField for Box<F> {
    fn eval(&self, p: Point) -> f64 {
        (**self).eval(p)
    }
    fn min_over_quad(&self, q: &[Point; 4]) -> f64 {
        (**self).min_over_quad(q)
    }
}

/// Default lower clamp for the distance fields, which vanish on their feature.
pub const DEFAULT_MIN_SIZE: f64 = 0.05;

/// Default lower clamp for grid-sampled fields, `3^-12`.
pub const DEFAULT_GRID_FLOOR: f64 = 1.0 / 531_441.0;

#[derive(Clone, Debug, PartialEq)]
pub struct Constant {
    pub value: f64,
}

/// `max(min, scale · |p - center|)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointDistance {
    pub center: Point,
    pub scale: f64,
    pub min: f64,
}

/// `max(min, scale · | |p - center| - radius |)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleDistance {
    pub center: Point,
    pub radius: f64,
    pub scale: f64,
    pub min: f64,
}

/// `max(floor, base + gx·x + gy·y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ramp {
    pub base: f64,
    pub gx: f64,
    pub gy: f64,
    pub floor: f64,
}

/// Bilinear interpolation of samples on a regular grid, clamped to the grid
/// outside it, with a declared Lipschitz constant.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub origin: Point,
    pub spacing: Point,
    pub nx: usize,
    pub ny: usize,
    /// Row-major, `values[j * nx + i]` at `origin + (i·dx, j·dy)`.
    pub values: Vec<f64>,
    pub lipschitz: f64,
    pub floor: f64,
}

/// The built-in fields behind one enum, as produced by the config parser.
#[derive(Clone, Debug, PartialEq)]
pub enum BuiltinField {
    Constant(Constant),
    Point(PointDistance),
    Circle(CircleDistance),
    Ramp(Ramp),
    Grid(Grid),
}

impl SizeField for Constant {
    fn eval(&self, _: Point) -> f64 {
        self.value
    }
    fn min_over_quad(&self, _: &[Point; 4]) -> f64 {
        self.value
    }
}

impl SizeField for PointDistance {
    fn eval(&self, p: Point) -> f64 {
        (self.scale * dist(p, self.center)).max(self.min)
    }
    fn min_over_quad(&self, q: &[Point; 4]) -> f64 {
        (self.scale * dist_to_quad(self.center, q)).max(self.min)
    }
}

impl SizeField for CircleDistance {
    fn eval(&self, p: Point) -> f64 {
        (self.scale * (dist(p, self.center) - self.radius).abs()).max(self.min)
    }
    fn min_over_quad(&self, q: &[Point; 4]) -> f64 {
        // |p - c| sweeps [near, far] over the connected quad.
        let near = dist_to_quad(self.center, q);
        let far = q.iter().map(|&p| dist(p, self.center)).fold(0.0, f64::max);
        let gap = (near - self.radius).max(self.radius - far).max(0.0);
        (self.scale * gap).max(self.min)
    }
}

impl SizeField for Ramp {
    fn eval(&self, p: Point) -> f64 {
        (self.base + self.gx * p.0 + self.gy * p.1).max(self.floor)
    }
    fn min_over_quad(&self, q: &[Point; 4]) -> f64 {
        q.iter().map(|&p| self.eval(p)).fold(f64::INFINITY, f64::min)
    }
}

impl Grid {
    fn sample(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    fn bilinear(&self, p: Point) -> f64 {
        let cell = |v: f64, o: f64, d: f64, n: usize| -> (usize, f64) {
            if n == 1 {
                return (0, 0.0);
            }
            let t = ((v - o) / d).clamp(0.0, (n - 1) as f64);
            let i = (t.floor() as usize).min(n - 2);
            (i, t - i as f64)
        };
        let (i, u) = cell(p.0, self.origin.0, self.spacing.0, self.nx);
        let (j, v) = cell(p.1, self.origin.1, self.spacing.1, self.ny);
        let i1 = (i + 1).min(self.nx - 1);
        let j1 = (j + 1).min(self.ny - 1);
        let bottom = self.sample(i, j) * (1.0 - u) + self.sample(i1, j) * u;
        let top = self.sample(i, j1) * (1.0 - u) + self.sample(i1, j1) * u;
        bottom * (1.0 - v) + top * v
    }
}

impl SizeField for Grid {
    fn eval(&self, p: Point) -> f64 {
        self.bilinear(p).max(self.floor)
    }
    fn min_over_quad(&self, q: &[Point; 4]) -> f64 {
        let c = (
            (q[0].0 + q[1].0 + q[2].0 + q[3].0) / 4.0,
            (q[0].1 + q[1].1 + q[2].1 + q[3].1) / 4.0,
        );
        let reach = q.iter().map(|&p| dist(p, c)).fold(0.0, f64::max);
        (self.bilinear(c) - self.lipschitz * reach).max(self.floor)
    }
}

impl SizeField for BuiltinField {
    fn eval(&self, p: Point) -> f64 {
        match self {
            BuiltinField::Constant(f) => f.eval(p),
            BuiltinField::Point(f) => f.eval(p),
            BuiltinField::Circle(f) => f.eval(p),
            BuiltinField::Ramp(f) => f.eval(p),
            BuiltinField::Grid(f) => f.eval(p),
        }
    }
    fn min_over_quad(&self, q: &[Point; 4]) -> f64 {
        match self {
            BuiltinField::Constant(f) => f.min_over_quad(q),
            BuiltinField::Point(f) => f.min_over_quad(q),
            BuiltinField::Circle(f) => f.min_over_quad(q),
            BuiltinField::Ramp(f) => f.min_over_quad(q),
            BuiltinField::Grid(f) => f.min_over_quad(q),
        }
    }
}

pub fn dist(p: Point, q: Point) -> f64 {
    (p.0 - q.0).hypot(p.1 - q.1)
}

fn dist_to_segment(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    dist(p, (a.0 + t * dx, a.1 + t * dy))
}

/// Whether `p` lies in the closed convex counterclockwise polygon `poly`.
pub fn in_convex(p: Point, poly: &[Point]) -> bool {
    let n = poly.len();
    (0..n).all(|i| {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0) >= 0.0
    })
}

/// Distance from `p` to a convex counterclockwise quadrilateral, zero inside.
pub fn dist_to_quad(p: Point, q: &[Point; 4]) -> f64 {
    if in_convex(p, q) {
        return 0.0;
    }
    (0..4)
        .map(|i| dist_to_segment(p, q[i], q[(i + 1) % 4]))
        .fold(f64::INFINITY, f64::min)
}
