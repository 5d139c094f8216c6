//! Size-field configuration strings and grid sample files.
//!
//! A configuration is `kind:key=val,key=val`:
//!
//! | kind       | required              | optional (default)                         |
//! |------------|-----------------------|--------------------------------------------|
//! | `constant` | `value`               |                                            |
//! | `point`    | `cx`, `cy`            | `scale` (1), `min` (0.05)                  |
//! | `circle`   | `cx`, `cy`, `r`       | `scale` (1), `min` (0.05)                  |
//! | `ramp`     | `base`                | `gx` (0), `gy` (0), `floor` (0.05)         |
//! | `grid`     | `file`, `lipschitz`   | `x0`, `y0` (0), `dx`, `dy` (1), `floor` (3^-12) |
//!
//! A grid file holds `grid NX NY` followed by `NY` rows of `NX` samples,
//! bottom row first. Blank lines and `#` comments are ignored.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::adapt::{
    BuiltinField, CircleDistance, Constant, Grid, PointDistance, Ramp, DEFAULT_GRID_FLOOR, DEFAULT_MIN_SIZE,
};

/// Largest accepted grid dimension.
const MAX_GRID_SIDE: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("size config: {0}")]
    Syntax(String),
    #[error("grid file line {line}: {msg}")]
    Grid { line: usize, msg: String },
    #[error("cannot read grid file {path}: {msg}")]
    Io { path: String, msg: String },
}

fn syntax(msg: impl Into<String>) -> ConfigError {
    ConfigError::Syntax(msg.into())
}

/// A parsed configuration; grid samples are still to be loaded.
#[derive(Clone, Debug, PartialEq)]
pub enum SizeSpec {
    Field(BuiltinField),
    GridFile {
        path: PathBuf,
        origin: (f64, f64),
        spacing: (f64, f64),
        lipschitz: f64,
        floor: f64,
    },
}

/// Samples read from a grid file.
#[derive(Clone, Debug, PartialEq)]
pub struct GridData {
    pub nx: usize,
    pub ny: usize,
    /// Row-major, bottom row first.
    pub values: Vec<f64>,
}

struct Params<'a> {
    kind: &'a str,
    values: BTreeMap<&'a str, &'a str>,
}

impl<'a> Params<'a> {
    fn take_str(&mut self, key: &str) -> Option<&'a str> {
        self.values.remove(key)
    }

    fn opt(&mut self, key: &str) -> Result<Option<f64>, ConfigError> {
        let Some(raw) = self.values.remove(key) else {
            return Ok(None);
        };
        let v: f64 = raw
            .parse()
            .map_err(|_| syntax(format!("{}: `{key}` is not a number: {raw:?}", self.kind)))?;
        if !v.is_finite() {
            return Err(syntax(format!("{}: `{key}` must be finite", self.kind)));
        }
        Ok(Some(v))
    }

    fn req(&mut self, key: &str) -> Result<f64, ConfigError> {
        self.opt(key)?
            .ok_or_else(|| syntax(format!("{}: missing `{key}`", self.kind)))
    }

    fn positive(&self, key: &str, v: f64) -> Result<f64, ConfigError> {
        if v > 0.0 {
            Ok(v)
        } else {
            Err(syntax(format!("{}: `{key}` must be positive", self.kind)))
        }
    }

    fn non_negative(&self, key: &str, v: f64) -> Result<f64, ConfigError> {
        if v >= 0.0 {
            Ok(v)
        } else {
            Err(syntax(format!("{}: `{key}` must not be negative", self.kind)))
        }
    }

    fn finish(self) -> Result<(), ConfigError> {
        match self.values.keys().next() {
            Some(k) => Err(syntax(format!("{}: unknown parameter `{k}`", self.kind))),
            None => Ok(()),
        }
    }
}

/// Parses `kind:key=val,...` without touching the file system.
pub fn parse_size_config(text: &str) -> Result<SizeSpec, ConfigError> {
    let text = text.trim();
    let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
    let mut values = BTreeMap::new();
    for item in rest.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| syntax(format!("expected `key=value`, found {item:?}")))?;
        let (k, v) = (k.trim(), v.trim());
        if values.insert(k, v).is_some() {
            return Err(syntax(format!("{kind}: `{k}` given twice")));
        }
    }
    let mut p = Params { kind, values };
    let field = match kind {
        "constant" => {
            let value = p.req("value")?;
            BuiltinField::Constant(Constant {
                value: p.positive("value", value)?,
            })
        }
        "point" => {
            let center = (p.req("cx")?, p.req("cy")?);
            let scale = p.opt("scale")?.unwrap_or(1.0);
            let min = p.opt("min")?.unwrap_or(DEFAULT_MIN_SIZE);
            BuiltinField::Point(PointDistance {
                center,
                scale: p.non_negative("scale", scale)?,
                min: p.positive("min", min)?,
            })
        }
        "circle" => {
            let center = (p.req("cx")?, p.req("cy")?);
            let radius = p.req("r")?;
            let scale = p.opt("scale")?.unwrap_or(1.0);
            let min = p.opt("min")?.unwrap_or(DEFAULT_MIN_SIZE);
            BuiltinField::Circle(CircleDistance {
                center,
                radius: p.non_negative("r", radius)?,
                scale: p.non_negative("scale", scale)?,
                min: p.positive("min", min)?,
            })
        }
        "ramp" => {
            let base = p.req("base")?;
            let gx = p.opt("gx")?.unwrap_or(0.0);
            let gy = p.opt("gy")?.unwrap_or(0.0);
            let floor = p.opt("floor")?.unwrap_or(DEFAULT_MIN_SIZE);
            BuiltinField::Ramp(Ramp {
                base,
                gx,
                gy,
                floor: p.positive("floor", floor)?,
            })
        }
        "grid" => {
            let path = p.take_str("file").ok_or_else(|| syntax("grid: missing `file`"))?;
            if path.is_empty() {
                return Err(syntax("grid: empty `file`"));
            }
            let lipschitz = p.req("lipschitz")?;
            let lipschitz = p.non_negative("lipschitz", lipschitz)?;
            let origin = (p.opt("x0")?.unwrap_or(0.0), p.opt("y0")?.unwrap_or(0.0));
            let (dx, dy) = (p.opt("dx")?.unwrap_or(1.0), p.opt("dy")?.unwrap_or(1.0));
            let spacing = (p.positive("dx", dx)?, p.positive("dy", dy)?);
            let floor = p.opt("floor")?.unwrap_or(DEFAULT_GRID_FLOOR);
            let floor = p.positive("floor", floor)?;
            p.finish()?;
            return Ok(SizeSpec::GridFile {
                path: PathBuf::from(path),
                origin,
                spacing,
                lipschitz,
                floor,
            });
        }
        "" => return Err(syntax("empty field kind")),
        other => return Err(syntax(format!("unknown field kind `{other}`"))),
    };
    p.finish()?;
    Ok(SizeSpec::Field(field))
}

/// Parses a grid sample file.
pub fn parse_grid(text: &str) -> Result<GridData, ConfigError> {
    let err = |line: usize, msg: String| ConfigError::Grid { line, msg };
    let mut rows = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (n, header) = rows
        .next()
        .ok_or_else(|| err(1, "missing `grid NX NY` header".into()))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    let dim = |s: &str| s.parse::<usize>().ok().filter(|d| (1..=MAX_GRID_SIDE).contains(d));
    let (nx, ny) = match h.as_slice() {
        ["grid", x, y] => match (dim(x), dim(y)) {
            (Some(x), Some(y)) => (x, y),
            _ => return Err(err(n, format!("grid dimensions must be in 1..={MAX_GRID_SIDE}"))),
        },
        _ => return Err(err(n, "expected `grid NX NY`".into())),
    };

    let mut values = Vec::with_capacity(nx * ny);
    let mut last = n;
    for (n, row) in rows {
        last = n;
        if values.len() == nx * ny {
            return Err(err(n, format!("more than the declared {ny} rows")));
        }
        let before = values.len();
        for tok in row.split_whitespace() {
            let v: f64 = tok.parse().map_err(|_| err(n, format!("bad sample {tok:?}")))?;
            if !v.is_finite() || v < 0.0 {
                return Err(err(n, format!("sample {tok} must be finite and non-negative")));
            }
            values.push(v);
        }
        if values.len() - before != nx {
            return Err(err(
                n,
                format!("expected {nx} samples, found {}", values.len() - before),
            ));
        }
    }
    if values.len() != nx * ny {
        return Err(err(last, format!("expected {ny} rows, found {}", values.len() / nx)));
    }
    Ok(GridData { nx, ny, values })
}

/// Parses a configuration and loads any grid file it names, resolving
/// relative paths against `base`.
pub fn load_size_field(text: &str, base: &Path) -> Result<BuiltinField, ConfigError> {
    match parse_size_config(text)? {
        SizeSpec::Field(f) => Ok(f),
        SizeSpec::GridFile {
            path,
            origin,
            spacing,
            lipschitz,
            floor,
        } => {
            let full = base.join(&path);
            let raw = std::fs::read_to_string(&full).map_err(|e| ConfigError::Io {
                path: full.display().to_string(),
                msg: e.to_string(),
            })?;
            let g = parse_grid(&raw)?;
            Ok(BuiltinField::Grid(Grid {
                origin,
                spacing,
                nx: g.nx,
                ny: g.ny,
                values: g.values,
                lipschitz,
                floor,
            }))
        }
    }
}
