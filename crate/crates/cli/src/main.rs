//! `polycomplex`: list, build, verify and transform the regular polygonal
//! complexes of the catalog.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use polycomplex::catalog::{self, Catalog, CatalogEntry, CatalogError, MirrorSpec, Source};
use polycomplex::export;
use polycomplex::gen_ops::{self, GenOpsError};
use polycomplex::geometry::{GeometryError, IntBox, Isometry, RationalVec3};
use polycomplex::point_groups::{self, PointGroupError};
use polycomplex::verify::{self, Report, Verifier, VerifyError};
use polycomplex::wythoff::{self, BuildOptions, GeneratorSet, WythoffError};

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Wythoff(#[from] WythoffError),
    #[error(transparent)]
    GenOps(#[from] GenOpsError),
    #[error(transparent)]
    PointGroup(#[from] PointGroupError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("{failed} of {total} entries failed verification")]
    VerificationFailed { failed: usize, total: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "polycomplex", version, about = "Regular polygonal complexes of euclidean 3-space")]
struct Cli {
    /// Catalog JSON file replacing the embedded one.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    /// Region box: `a:b` for a cube or `a:b,c:d,e:f` per axis.
    #[arg(long = "box", global = true, default_value = "-3:3", allow_hyphen_values = true, value_parser = parse_box)]
    bounds: IntBox,
    /// Edge-length scale `a`; multiplies exported coordinates.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(i64).range(1..))]
    scale: i64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for `verify`.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output file; a directory for `build`.
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
    /// Refuse to build when the base vertex lies outside the box.
    #[arg(long, global = true)]
    require_base: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Entries with their expected properties.
    List {
        /// Only entries with this mirror vector, e.g. `1,1`.
        #[arg(long, value_parser = parse_pair)]
        mirror: Option<(usize, usize)>,
        /// Only apeirotope 2-skeletons.
        #[arg(long)]
        skeletons: bool,
    },
    /// Build a region and export OFF plus a JSON sidecar.
    Build { name: String },
    /// Check entries against their expected properties.
    Verify {
        names: Vec<String>,
        #[arg(long)]
        all: bool,
        /// Stop at the first failing entry.
        #[arg(long)]
        fail_fast: bool,
    },
    /// Apply an operation and print the result as a loadable catalog.
    Apply {
        name: String,
        op: OpKind,
        /// Element of G2 for lambda0/lambda1; optional reflection for petrie.
        element: Option<String>,
        /// Entry name in the emitted catalog.
        #[arg(long = "as")]
        as_name: Option<String>,
    },
    /// The vertex-figure at a vertex (default: the base vertex).
    VertexFigure {
        name: String,
        #[arg(long, value_parser = parse_point)]
        at: Option<RationalVec3>,
    },
    /// The special group of an entry.
    SpecialGroup { name: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OpKind {
    Lambda0,
    Lambda1,
    Petrie,
    Rotation,
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected a:b, got {s:?}"))?;
    let num = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((num(a)?, num(b)?))
}

fn parse_box(s: &str) -> Result<IntBox, String> {
    let ranges: Vec<(i64, i64)> = s.split(',').map(parse_range).collect::<Result<_, _>>()?;
    let (min, max) = match ranges.as_slice() {
        [(a, b)] => ([*a; 3], [*b; 3]),
        [x, y, z] => ([x.0, y.0, z.0], [x.1, y.1, z.1]),
        _ => return Err("expected one range or three".into()),
    };
    IntBox::new(min, max).map_err(|e| e.to_string())
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected i,j, got {s:?}"))?;
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok((num(a)?, num(b)?))
}

fn parse_point(s: &str) -> Result<RationalVec3, String> {
    let parts: Vec<String> = s
        .trim_matches(|c| c == '(' || c == ')')
        .split(',')
        .map(|t| t.trim().to_string())
        .collect();
    serde_json::from_value(json!(parts)).map_err(|e| e.to_string())
}

struct Context {
    catalog: Catalog,
    cli: Cli,
}

impl Context {
    fn options(&self) -> BuildOptions {
        BuildOptions {
            require_base: self.cli.require_base,
            ..BuildOptions::default()
        }
    }

    fn emit(&self, text: &str) -> Result<(), CliError> {
        match &self.cli.output {
            Some(path) => write_file(path, text),
            None => {
                let mut out = std::io::stdout().lock();
                let _ = out.write_all(text.as_bytes());
                Ok(())
            }
        }
    }

    fn emit_json(&self, value: &impl Serialize) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value).expect("serializable");
        text.push('\n');
        self.emit(&text)
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn source_kind(entry: &CatalogEntry) -> &'static str {
    match entry.source {
        Source::Explicit(_) => "explicit",
        Source::Derived(_) => "derived",
        Source::Reconstructed(_) => "reconstructed",
    }
}

fn cmd_list(ctx: &Context, mirror: Option<(usize, usize)>, skeletons: bool) -> Result<(), CliError> {
    let rows: Vec<&CatalogEntry> = ctx
        .catalog
        .entries()
        .filter(|e| match (mirror, e.mirror_vector) {
            (Some((i, j)), MirrorSpec::Vector(a, b)) => (i, j) == (a, b),
            (Some(_), MirrorSpec::Skeleton) => false,
            (None, _) => true,
        })
        .filter(|e| !skeletons || e.mirror_vector == MirrorSpec::Skeleton)
        .collect();
    if ctx.cli.format == Format::Json {
        let out: Vec<_> = rows
            .iter()
            .map(|e| {
                json!({
                    "name": e.name,
                    "title": e.title,
                    "mirror_vector": e.mirror_vector,
                    "source": source_kind(e),
                    "expected": e.expected,
                })
            })
            .collect();
        return ctx.emit_json(&out);
    }
    let header = ["name", "mirror", "G2", "r", "face", "vertex-figure", "vertex-set", "special", "source"];
    let table: Vec<[String; 9]> = rows
        .iter()
        .map(|e| {
            let x = &e.expected;
            [
                e.name.clone(),
                e.mirror_vector.to_string(),
                x.g2.to_string(),
                x.r.to_string(),
                x.face.to_string(),
                x.vertex_figure.to_string(),
                x.vertex_set.map(|v| v.to_string()).unwrap_or_else(|| "-".into()),
                x.special_group.to_string(),
                source_kind(e).to_string(),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &table {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut text = String::new();
    let mut line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(widths).map(|(c, w)| format!("{c:w$}")).collect();
        text.push_str(padded.join("  ").trim_end());
        text.push('\n');
    };
    line(header.to_vec());
    for row in &table {
        line(row.iter().map(String::as_str).collect());
    }
    text.push_str(&format!("{} entries\n", table.len()));
    ctx.emit(&text)
}

fn cmd_build(ctx: &Context, name: &str) -> Result<(), CliError> {
    let gs = ctx.catalog.resolve(name)?;
    let region = wythoff::build_complex_with(&gs, ctx.cli.bounds, &ctx.options())?;
    let sidecar = export::sidecar(name, gs.to_spec(), &region, ctx.cli.scale);
    match &ctx.cli.output {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|source| CliError::Io {
                path: dir.display().to_string(),
                source,
            })?;
            let off = dir.join(format!("{name}.off"));
            let side = dir.join(format!("{name}.json"));
            write_file(&off, &sidecar.to_off())?;
            let mut text = serde_json::to_string_pretty(&sidecar).expect("serializable");
            text.push('\n');
            write_file(&side, &text)?;
            eprintln!("wrote {} and {}", off.display(), side.display());
            Ok(())
        }
        None if ctx.cli.format == Format::Json => ctx.emit_json(&sidecar),
        None => {
            let text = format!(
                "{name} on {} (margin {}, scale {})\n  vertices {}\n  edges {}\n  finite faces {} ({} clipped)\n  infinite faces {}\n",
                sidecar.bounds,
                sidecar.margin,
                sidecar.scale,
                sidecar.vertices.len(),
                sidecar.edges.len(),
                sidecar.finite_faces.len(),
                sidecar.clipped_faces.len(),
                sidecar.infinite_faces.len(),
            );
            ctx.emit(&text)
        }
    }
}

fn cmd_verify(ctx: &Context, names: &[String], all: bool, fail_fast: bool) -> Result<(), CliError> {
    let names: Vec<String> = match (all, names.is_empty()) {
        (true, true) => ctx.catalog.names().to_vec(),
        (false, false) => names.to_vec(),
        (true, false) => return Err(CliError::Usage("give entry names or --all, not both".into())),
        (false, true) => return Err(CliError::Usage("no entries given; use --all for every entry".into())),
    };
    for n in &names {
        ctx.catalog.get(n)?;
    }
    let verifier = Verifier::with_options(&ctx.catalog, ctx.cli.bounds, ctx.options())?;
    let stop = AtomicBool::new(false);
    let run = || -> Vec<Option<Result<Report, VerifyError>>> {
        names
            .par_iter()
            .map(|n| {
                if stop.load(Ordering::SeqCst) {
                    return None;
                }
                let rep = verifier.verify(n).map(|mut r| {
                    r.scale = ctx.cli.scale;
                    r
                });
                if fail_fast && !rep.as_ref().is_ok_and(Report::passed) {
                    stop.store(true, Ordering::SeqCst);
                }
                Some(rep)
            })
            .collect()
    };
    let results = match ctx.cli.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .install(run),
        None => run(),
    };
    let mut reports = Vec::new();
    for r in results.into_iter().flatten() {
        reports.push(r?);
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    let total = reports.len();
    if ctx.cli.format == Format::Json {
        ctx.emit_json(&json!({
            "bounds": ctx.cli.bounds,
            "scale": ctx.cli.scale,
            "passed": failed == 0,
            "reports": reports,
        }))?;
    } else {
        let mut text: String = reports.iter().map(Report::render_text).collect();
        text.push_str(&format!("{} of {total} entries passed\n", total - failed));
        ctx.emit(&text)?;
    }
    if failed > 0 {
        return Err(CliError::VerificationFailed { failed, total });
    }
    Ok(())
}

fn cmd_apply(ctx: &Context, name: &str, op: OpKind, element: Option<&str>, as_name: Option<&str>) -> Result<(), CliError> {
    let gs = ctx.catalog.resolve(name)?;
    let need = || element.ok_or_else(|| CliError::Usage(format!("{op:?} needs an element of G2")));
    let result: GeneratorSet = match op {
        OpKind::Lambda0 => gen_ops::lambda0(&gs, &gen_ops::resolve_element(&gs, need()?)?)?,
        OpKind::Lambda1 => gen_ops::lambda1(&gs, &gen_ops::resolve_element(&gs, need()?)?)?,
        OpKind::Petrie => {
            let t3 = match element {
                Some(text) => text.parse::<Isometry>()?,
                None => gen_ops::face_plane_reflection(&gs)?.ok_or_else(|| {
                    CliError::Usage("the base face has no exact plane reflection; pass one".into())
                })?,
            };
            gen_ops::petrie_lambda(&gs, &t3)?
        }
        OpKind::Rotation => gen_ops::rotation_form(&gs)?,
    };
    let expected = verify::describe(&result, ctx.cli.bounds)?;
    let (i, j) = point_groups::mirror_vector(&result)?;
    let default_name = format!(
        "{name}_{}{}",
        format!("{op:?}").to_lowercase(),
        element.map(|e| format!("_{}", sanitize(e))).unwrap_or_default()
    );
    let fragment = catalog::fragment_json(
        as_name.unwrap_or(&default_name),
        MirrorSpec::Vector(i, j),
        &result,
        &expected,
    );
    ctx.emit_json(&fragment)
}

fn sanitize(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect::<String>()
        .trim_matches('_')
        .to_string()
}

fn cmd_vertex_figure(ctx: &Context, name: &str, at: Option<RationalVec3>) -> Result<(), CliError> {
    let gs = ctx.catalog.resolve(name)?;
    let region = wythoff::build_complex_with(&gs, ctx.cli.bounds, &ctx.options())?;
    let v = at.unwrap_or(gs.base_vertex());
    let fig = region.vertex_figure(&v)?;
    let label = wythoff::identify_vertex_figure(&fig);
    if ctx.cli.format == Format::Json {
        return ctx.emit_json(&json!({
            "entry": name,
            "label": label.map(|l| l.to_string()),
            "figure": fig,
        }));
    }
    let mut text = format!(
        "{name} at {v}: {}\n",
        label.map(|l| l.to_string()).unwrap_or_else(|| "no reference model".into())
    );
    for n in fig.relative() {
        text.push_str(&format!("  {n}\n"));
    }
    for ((a, b), k) in &fig.edges {
        text.push_str(&format!("  {} -- {} x{k}\n", *a - v, *b - v));
    }
    ctx.emit(&text)
}

fn cmd_special_group(ctx: &Context, name: &str) -> Result<(), CliError> {
    let gs = ctx.catalog.resolve(name)?;
    let group = point_groups::special_group(&gs);
    let label = group.identify();
    let elements: Vec<String> = group.elements().iter().map(|m| m.to_string()).collect();
    if ctx.cli.format == Format::Json {
        return ctx.emit_json(&json!({
            "entry": name,
            "label": label,
            "order": group.order(),
            "elements": elements,
        }));
    }
    ctx.emit(&format!("{name}: {label} (order {})\n", group.order()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let catalog = match &cli.catalog {
        Some(path) => Catalog::load_path(path)?,
        None => Catalog::load_default()?,
    };
    let ctx = Context { catalog, cli };
    match &ctx.cli.command {
        Command::List { mirror, skeletons } => cmd_list(&ctx, *mirror, *skeletons),
        Command::Build { name } => cmd_build(&ctx, name),
        Command::Verify { names, all, fail_fast } => cmd_verify(&ctx, names, *all, *fail_fast),
        Command::Apply {
            name,
            op,
            element,
            as_name,
        } => cmd_apply(&ctx, name, *op, element.as_deref(), as_name.as_deref()),
        Command::VertexFigure { name, at } => cmd_vertex_figure(&ctx, name, *at),
        Command::SpecialGroup { name } => cmd_special_group(&ctx, name),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ CliError::VerificationFailed { .. }) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
