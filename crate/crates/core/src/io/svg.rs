//! Deterministic SVG rendering.

use std::collections::BTreeSet;
use std::fmt::Write;
use std::str::FromStr;

use crate::adapt::Point;
use crate::derived::{build_packing, dual_meshes, three_color};
use crate::lattice::LatticeCoord;
use crate::mesh::Mesh;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Layer {
    Faces,
    Coloring,
    Packing,
    Duals,
}

impl FromStr for Layer {
    type Err = String;
    fn from_str(s: &str) -> Result<Layer, String> {
        match s.trim() {
            "faces" => Ok(Layer::Faces),
            "coloring" => Ok(Layer::Coloring),
            "packing" => Ok(Layer::Packing),
            "duals" => Ok(Layer::Duals),
            other => Err(format!(
                "unknown layer `{other}`; expected faces, coloring, packing or duals"
            )),
        }
    }
}

pub type Layers = BTreeSet<Layer>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SvgOptions {
    /// Decimal places of every coordinate.
    pub precision: usize,
    /// Pixels per initial edge length.
    pub scale: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            precision: 6,
            scale: 40.0,
        }
    }
}

const PALETTE: [&str; 3] = ["#f4a582", "#92c5de", "#b8e186"];
const PLAIN_FILL: &str = "#eeeeee";
const RED: &str = "#d62728";
const BLUE: &str = "#1f77b4";

struct Fmt {
    precision: usize,
    scale: f64,
}

impl Fmt {
    fn num(&self, x: f64) -> String {
        let s = format!("{:.*}", self.precision, x);
        // no negative zero
        if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
            s.trim_start_matches('-').to_string()
        } else {
            s
        }
    }

    /// Screen point: scaled, with y pointing down.
    fn screen(&self, p: Point) -> (f64, f64) {
        (p.0 * self.scale, -p.1 * self.scale)
    }

    fn point(&self, c: LatticeCoord) -> String {
        let (x, y) = self.screen(c.to_cartesian());
        format!("{},{}", self.num(x), self.num(y))
    }
}

/// Renders the requested layers, faces and circles ordered by their exact
/// positions so equal meshes render to equal bytes.
pub fn render_svg(mesh: &Mesh, layers: &Layers, opts: &SvgOptions) -> String {
    let fmt = Fmt {
        precision: opts.precision,
        scale: opts.scale,
    };
    let pts: Vec<Point> = mesh.vertices().map(|(_, p)| fmt.screen(p.to_cartesian())).collect();
    let (mut lo, mut hi) = ((0.0f64, 0.0f64), (0.0f64, 0.0f64));
    for p in &pts {
        lo = (lo.0.min(p.0), lo.1.min(p.1));
        hi = (hi.0.max(p.0), hi.1.max(p.1));
    }
    if layers.contains(&Layer::Packing) {
        // circles reach at most one initial edge past their centers
        lo = (lo.0 - opts.scale, lo.1 - opts.scale);
        hi = (hi.0 + opts.scale, hi.1 + opts.scale);
    }
    let pad = opts.scale * 0.25;
    let (x0, y0) = (lo.0 - pad, lo.1 - pad);
    let (w, h) = (hi.0 - lo.0 + 2.0 * pad, hi.1 - lo.1 + 2.0 * pad);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        "<!-- diamond-kite mesh, patch radius {}, {} replacements; screen (x, y) = {} * (x, -y) -->",
        mesh.patch().radius(),
        mesh.applied().len(),
        fmt.num(opts.scale)
    );
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}" width="{}" height="{}">"#,
        fmt.num(x0),
        fmt.num(y0),
        fmt.num(w),
        fmt.num(h),
        fmt.num(w),
        fmt.num(h)
    );

    let colored = layers.contains(&Layer::Coloring);
    if colored || layers.contains(&Layer::Faces) {
        let coloring = colored.then(|| three_color(mesh));
        let mut faces: Vec<_> = mesh
            .faces()
            .map(|(f, _)| {
                let fill = match &coloring {
                    Some(c) => PALETTE[c.color(f).expect("every face colored") as usize],
                    None => PLAIN_FILL,
                };
                (mesh.face_positions(f), fill)
            })
            .collect();
        faces.sort();
        let _ = writeln!(
            s,
            r##"<g id="faces" stroke="#333333" stroke-width="0.5" stroke-linejoin="round">"##
        );
        for (corners, fill) in faces {
            let points: Vec<String> = corners.iter().map(|&c| fmt.point(c)).collect();
            let _ = writeln!(s, r#"<polygon points="{}" fill="{fill}"/>"#, points.join(" "));
        }
        let _ = writeln!(s, "</g>");
    }

    if layers.contains(&Layer::Packing) {
        let packing = build_packing(mesh).expect("faces around a vertex agree on its radius");
        let mut circles: Vec<_> = packing.iter().map(|(_, c)| (c.center, c.radius)).collect();
        circles.sort_by_key(|c| c.0);
        let _ = writeln!(
            s,
            r##"<g id="packing" fill="none" stroke="#7b3294" stroke-width="0.5">"##
        );
        for (center, r) in circles {
            let (x, y) = fmt.screen(center.to_cartesian());
            let _ = writeln!(
                s,
                r#"<circle cx="{}" cy="{}" r="{}"/>"#,
                fmt.num(x),
                fmt.num(y),
                fmt.num(r * opts.scale)
            );
        }
        let _ = writeln!(s, "</g>");
    }

    if layers.contains(&Layer::Duals) {
        let duals = dual_meshes(mesh);
        for (id, color, dual) in [("red", RED, &duals.red), ("blue", BLUE, &duals.blue)] {
            let mut edges: Vec<(LatticeCoord, LatticeCoord)> = dual
                .edges
                .iter()
                .map(|&(u, v)| {
                    let (p, q) = (mesh.position(u), mesh.position(v));
                    (p.min(q), p.max(q))
                })
                .collect();
            edges.sort();
            let _ = writeln!(
                s,
                r#"<g id="dual-{id}" stroke="{color}" stroke-width="1" stroke-linecap="round">"#
            );
            for (p, q) in edges {
                let (a, b) = (fmt.screen(p.to_cartesian()), fmt.screen(q.to_cartesian()));
                let _ = writeln!(
                    s,
                    r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                    fmt.num(a.0),
                    fmt.num(a.1),
                    fmt.num(b.0),
                    fmt.num(b.1)
                );
            }
            let _ = writeln!(s, "</g>");
        }
    }
    let _ = writeln!(s, "</svg>");
    s
}
