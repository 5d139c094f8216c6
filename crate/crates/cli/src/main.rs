//! `dkmesh`: generate, adapt, render, measure and verify diamond-kite meshes.
//!
//! Exit codes: 0 success, 1 invariant violation, 2 usage or format error,
//! 3 boundary violation.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dkmesh::adapt::{adapt, refine_to_size, AdaptOptions, BuiltinField, QueueOrder, Sampling};
use dkmesh::derived::stats;
use dkmesh::io::{load_size_field, parse_mesh_file, render_svg, Layer, Layers, MeshFile, SvgOptions};
use dkmesh::lattice::{join, meet};
use dkmesh::verify::verify;
use dkmesh::{BoundaryPolicy, Mesh, MeshError};

#[derive(Parser)]
#[command(name = "dkmesh", version, about = "Adaptive diamond-kite quadrilateral meshes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Refine an initial patch to a size field.
    Generate {
        #[arg(long)]
        radius: u32,
        #[command(flatten)]
        size: SizeArgs,
        #[command(flatten)]
        adapt: AdaptArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Refine and coarsen an existing mesh to a new size field.
    Adapt {
        #[arg(short, long)]
        input: PathBuf,
        #[command(flatten)]
        size: SizeArgs,
        #[command(flatten)]
        adapt: AdaptArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write step counts as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Draw a mesh as SVG.
    Render {
        #[arg(short, long)]
        input: PathBuf,
        /// Comma-separated subset of faces, coloring, packing, duals.
        #[arg(long, default_value = "faces", value_delimiter = ',')]
        layers: Vec<Layer>,
        /// Decimal places per coordinate.
        #[arg(long, default_value_t = 6)]
        precision: usize,
        /// Pixels per initial edge length.
        #[arg(long, default_value_t = 40.0)]
        scale: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Counts, lengths, areas and local-feature-size ratios as JSON.
    Stats {
        #[arg(short, long)]
        input: PathBuf,
        #[command(flatten)]
        size: SizeArgs,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Meet or join of two meshes over the same patch.
    Lattice {
        op: LatticeOp,
        #[arg(short = 'a')]
        first: PathBuf,
        #[arg(short = 'b')]
        second: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check every mesh invariant, and size conformance when a field is given.
    Verify {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        size: Option<String>,
        /// Test the size field at face corners only.
        #[arg(long)]
        vertex_sampling: bool,
    },
}

#[derive(Args)]
struct SizeArgs {
    /// Size field, `kind:key=val,...`.
    #[arg(long)]
    size: String,
}

#[derive(Args)]
struct AdaptArgs {
    /// Skip refinements that would reach past the patch boundary.
    #[arg(long)]
    clip_boundary: bool,
    /// Test the size field at face corners only.
    #[arg(long)]
    vertex_sampling: bool,
    /// Drain work queues last-in first-out.
    #[arg(long)]
    lifo: bool,
}

impl AdaptArgs {
    fn options(&self) -> AdaptOptions {
        AdaptOptions {
            order: if self.lifo { QueueOrder::Lifo } else { QueueOrder::Fifo },
            sampling: sampling(self.vertex_sampling),
            boundary: if self.clip_boundary {
                BoundaryPolicy::Clip
            } else {
                BoundaryPolicy::Strict
            },
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LatticeOp {
    Meet,
    Join,
}

fn sampling(vertices: bool) -> Sampling {
    if vertices {
        Sampling::Vertices
    } else {
        Sampling::Exact
    }
}

struct Failure {
    code: u8,
    msg: String,
}

const VIOLATION: u8 = 1;
const USAGE: u8 = 2;
const BOUNDARY: u8 = 3;

fn fail(code: u8, msg: impl Into<String>) -> Failure {
    Failure { code, msg: msg.into() }
}

impl From<MeshError> for Failure {
    fn from(e: MeshError) -> Failure {
        let code = match e {
            MeshError::BoundaryViolation(_) => BOUNDARY,
            MeshError::LevelCap(_) | MeshError::InvalidRadius(_) => USAGE,
            _ => VIOLATION,
        };
        fail(code, e.to_string())
    }
}

fn read_mesh(path: &Path) -> Result<MeshFile, Failure> {
    let text = fs::read_to_string(path).map_err(|e| fail(USAGE, format!("{}: {e}", path.display())))?;
    parse_mesh_file(&text).map_err(|e| {
        let code = match e {
            dkmesh::io::FormatError::Boundary { .. } => BOUNDARY,
            _ => USAGE,
        };
        fail(code, format!("{}: {e}", path.display()))
    })
}

fn read_field(config: &str) -> Result<BuiltinField, Failure> {
    load_size_field(config, Path::new(".")).map_err(|e| fail(USAGE, e.to_string()))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| fail(USAGE, format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| fail(USAGE, format!("stdout: {e}"))),
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Generate {
            radius,
            size,
            adapt: a,
            output,
        } => {
            let field = read_field(&size.size)?;
            let mut mesh = Mesh::initial_patch(radius)?;
            let rep = refine_to_size(&mut mesh, &field, &a.options())?;
            eprintln!(
                "{} replacement steps, {} faces, {} clipped",
                rep.replacement_steps,
                mesh.face_count(),
                rep.clipped
            );
            write_out(output.as_deref(), &MeshFile::from_mesh(&mesh).to_text())
        }
        Command::Adapt {
            input,
            size,
            adapt: a,
            output,
            report,
        } => {
            let field = read_field(&size.size)?;
            let mut mesh = read_mesh(&input)?.replay();
            let rep = adapt(&mut mesh, &field, &a.options())?;
            eprintln!(
                "{} replacement steps, {} coarsening steps in {:.1} ms",
                rep.replacement_steps,
                rep.coarsening_steps,
                rep.duration.as_secs_f64() * 1e3
            );
            if let Some(path) = report {
                write_out(Some(&path), &json(&rep))?;
            }
            write_out(output.as_deref(), &MeshFile::from_mesh(&mesh).to_text())
        }
        Command::Render {
            input,
            layers,
            precision,
            scale,
            output,
        } => {
            if !(scale.is_finite() && scale > 0.0) || precision > 17 {
                return Err(fail(USAGE, "scale must be positive and precision at most 17"));
            }
            let mesh = read_mesh(&input)?.replay();
            let layers: Layers = layers.into_iter().collect();
            write_out(
                output.as_deref(),
                &render_svg(&mesh, &layers, &SvgOptions { precision, scale }),
            )
        }
        Command::Stats {
            input,
            size,
            samples,
            seed,
            output,
        } => {
            let field = read_field(&size.size)?;
            let mesh = read_mesh(&input)?.replay();
            write_out(output.as_deref(), &json(&stats(&mesh, &field, samples, seed)))
        }
        Command::Lattice {
            op,
            first,
            second,
            output,
        } => {
            let (a, b) = (read_mesh(&first)?, read_mesh(&second)?);
            if a.patch != b.patch {
                return Err(fail(
                    USAGE,
                    format!("patch radii differ: {} vs {}", a.patch.radius(), b.patch.radius()),
                ));
            }
            let keys = match op {
                LatticeOp::Meet => meet(&a.keys, &b.keys),
                LatticeOp::Join => join(&a.keys, &b.keys),
            };
            write_out(output.as_deref(), &MeshFile { patch: a.patch, keys }.to_text())
        }
        Command::Verify {
            input,
            size,
            vertex_sampling,
        } => {
            let field = size.as_deref().map(read_field).transpose()?;
            let mesh = read_mesh(&input)?.replay();
            let report = verify(&mesh, field.as_ref().map(|f| (f as _, sampling(vertex_sampling))));
            for c in &report.checks {
                println!("{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
            }
            if report.passed() {
                Ok(())
            } else {
                Err(fail(VIOLATION, "invariant violations found"))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("dkmesh: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
