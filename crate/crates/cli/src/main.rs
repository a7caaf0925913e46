//! `tomotile`: solve, transform, and draw projection-constrained tilings.
//!
//! Exit codes are a stable contract: 0 success/satisfiable, 1 unsatisfiable,
//! 2 parse or validation failure, 3 search limit reached, 4 pull-back
//! failure.  Stdout carries data (JSON, file paths, drawings); stderr
//! carries diagnostics.

mod render;

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tomotile::format::{
    from_json, to_canonical_json, AtomGridFile, AtomInstanceFile, GadgetFile, InstanceFile,
    SearchFile, TilingFile,
};
use tomotile::gadget::{discover_gadgets, verify_gadget, VerifiedGadget};
use tomotile::projection::{cell_projections, center_projections, Instance, ProjectionKind};
use tomotile::reduce::{pull_back, reduce_instance, ReduceError};
use tomotile::solver::{enumerate, solve, SolveStatus, SolverConfig, SolverError};
use tomotile::{builtin_gadget, named_tileset, tileset_names};
use tomotile::{random_tiling, rng_from_seed};

#[derive(Parser)]
#[command(name = "tomotile", version, about = "Polyomino tilings under line projections")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    /// Count tile centers per line.
    Center,
    /// Count covered cells per line.
    Cell,
}

impl From<KindArg> for ProjectionKind {
    fn from(kind: KindArg) -> ProjectionKind {
        match kind {
            KindArg::Center => ProjectionKind::Center,
            KindArg::Cell => ProjectionKind::Cell,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RenderFormat {
    Ascii,
    Svg,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute a tiling's projections as a solvable instance.
    Project {
        tiling: PathBuf,
        #[arg(long, value_enum, default_value_t = KindArg::Center)]
        kind: KindArg,
    },
    /// Find a tiling with the instance's projections, or enumerate them.
    Solve {
        instance: PathBuf,
        /// Enumerate up to N solutions into files (0 = all).
        #[arg(long)]
        enumerate: Option<usize>,
        /// Abort after this many search nodes (0 = unlimited).
        #[arg(long, default_value_t = 0)]
        node_limit: u64,
        /// Output path prefix for enumerated solutions.
        #[arg(long, default_value = "solution")]
        out: String,
    },
    /// Reduce a four-atom instance to a tiling instance through a gadget.
    Reduce {
        atoms: PathBuf,
        /// Builtin gadget name or gadget file path.
        #[arg(long)]
        gadget: String,
    },
    /// Map a block-structured tiling back to an atom grid.
    Pullback {
        tiling: PathBuf,
        #[arg(long)]
        gadget: String,
    },
    /// Re-run a gadget's closure and independence checks.
    VerifyGadget { gadget: String },
    /// Search for gadgets matching a search file's signatures.
    Discover {
        search: PathBuf,
        /// Output path prefix for found gadgets.
        #[arg(long, default_value = "gadget")]
        out: String,
    },
    /// Generate a random satisfiable instance (determined by the seed).
    Gen {
        #[arg(long)]
        n: usize,
        /// Tile set name: cell, dominoes, square2, ltromino, upentomino.
        #[arg(long)]
        tileset: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Probability of keeping each candidate placement.
        #[arg(long, default_value_t = 0.8)]
        fill: f64,
        #[arg(long, value_enum, default_value_t = KindArg::Center)]
        kind: KindArg,
        /// Also write the generating tiling here.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Draw a tiling as ASCII (centers uppercase) or SVG (centers circled).
    Render {
        tiling: PathBuf,
        #[arg(long, value_enum, default_value_t = RenderFormat::Ascii)]
        format: RenderFormat,
        /// SVG cell edge in pixels.
        #[arg(long, default_value_t = 24)]
        cell_size: u32,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn validation(message: impl Display) -> Failure {
        Failure { code: 2, message: message.to_string() }
    }

    fn pullback(message: impl Display) -> Failure {
        Failure { code: 4, message: message.to_string() }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

/// Writes data to stdout, exiting quietly when the reader hangs up (e.g.
/// piping into `head`).  Every emission ends in a newline, so the
/// line-buffered handle is flushed before any exit.
fn emit(text: impl Display) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if let Err(e) = write!(out, "{text}") {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write to stdout: {e}");
        std::process::exit(2);
    }
}

fn emit_line(text: impl Display) {
    emit(format_args!("{text}\n"));
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.cmd {
        Cmd::Project { tiling, kind } => cmd_project(&tiling, kind.into()),
        Cmd::Solve { instance, enumerate, node_limit, out } => {
            cmd_solve(&instance, enumerate, node_limit, &out)
        }
        Cmd::Reduce { atoms, gadget } => cmd_reduce(&atoms, &gadget),
        Cmd::Pullback { tiling, gadget } => cmd_pullback(&tiling, &gadget),
        Cmd::VerifyGadget { gadget } => cmd_verify_gadget(&gadget),
        Cmd::Discover { search, out } => cmd_discover(&search, &out),
        Cmd::Gen { n, tileset, seed, fill, kind, witness } => {
            cmd_gen(n, &tileset, seed, fill, kind.into(), witness.as_deref())
        }
        Cmd::Render { tiling, format, cell_size } => cmd_render(&tiling, format, cell_size),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::validation(format!("cannot read {}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .map_err(|e| Failure::validation(format!("cannot write {}: {e}", path.display())))
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    from_json(&read_text(path)?)
        .map_err(|e| Failure::validation(format!("{}: {e}", path.display())))
}

fn load_tiling(path: &Path) -> Result<tomotile::Tiling, Failure> {
    let file: TilingFile = parse(path)?;
    let tiling = file
        .to_tiling()
        .map_err(|e| Failure::validation(format!("{}: {e}", path.display())))?;
    tiling
        .validate()
        .map_err(|e| Failure::validation(format!("{}: invalid tiling: {e}", path.display())))?;
    Ok(tiling)
}

/// A gadget argument is a builtin name or a file path; either way the
/// gadget must pass verification before use.
fn load_gadget(spec: &str) -> Result<VerifiedGadget, Failure> {
    let (gadget, closure) = load_gadget_unverified(spec)?;
    VerifiedGadget::verify(gadget, &closure)
        .map_err(|e| Failure::validation(format!("gadget {spec}: {e}")))
}

fn load_gadget_unverified(
    spec: &str,
) -> Result<(tomotile::Gadget, tomotile::ClosureSpec), Failure> {
    if let Some(parts) = builtin_gadget(spec) {
        return Ok(parts);
    }
    let path = Path::new(spec);
    let file: GadgetFile = parse(path)?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("gadget");
    file.to_gadget(stem).map_err(|e| Failure::validation(format!("{spec}: {e}")))
}

fn cmd_project(path: &Path, kind: ProjectionKind) -> Result<ExitCode, Failure> {
    let tiling = load_tiling(path)?;
    let pair = match kind {
        ProjectionKind::Center => center_projections(&tiling),
        ProjectionKind::Cell => cell_projections(&tiling),
    }
    .map_err(Failure::validation)?;
    let instance = Instance::new(tiling.tileset().clone(), pair);
    let file = InstanceFile::from_instance(&instance).map_err(Failure::validation)?;
    emit(to_canonical_json(&file));
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(
    path: &Path,
    enumerate_cap: Option<usize>,
    node_limit: u64,
    out: &str,
) -> Result<ExitCode, Failure> {
    let file: InstanceFile = parse(path)?;
    let instance = file
        .to_instance()
        .map_err(|e| Failure::validation(format!("{}: {e}", path.display())))?;
    let config = SolverConfig {
        node_limit,
        solution_limit: enumerate_cap.unwrap_or(0),
        ..SolverConfig::default()
    };
    let solver_failure = |e: SolverError| Failure::validation(format!("{}: {e}", path.display()));

    match enumerate_cap {
        None => {
            let outcome = solve(&instance, &config).map_err(solver_failure)?;
            match outcome.status {
                SolveStatus::Satisfiable => {
                    let witness = outcome.witness.expect("satisfiable outcomes carry a witness");
                    let file = TilingFile::from_tiling(&witness).map_err(Failure::validation)?;
                    emit(to_canonical_json(&file));
                    Ok(ExitCode::SUCCESS)
                }
                SolveStatus::Unsatisfiable => {
                    emit_line("UNSAT");
                    if let Some(reason) = outcome.reason {
                        eprintln!("unsatisfiable: {reason:?}");
                    }
                    Ok(ExitCode::from(1))
                }
                SolveStatus::NodeLimitReached => {
                    emit_line("LIMIT");
                    eprintln!("gave up after {} nodes", outcome.nodes);
                    Ok(ExitCode::from(3))
                }
            }
        }
        Some(_) => {
            let result = enumerate(&instance, &config).map_err(solver_failure)?;
            if result.tilings.is_empty() {
                if result.complete {
                    emit_line("UNSAT");
                    return Ok(ExitCode::from(1));
                }
                emit_line("LIMIT");
                eprintln!("gave up after {} nodes", result.nodes);
                return Ok(ExitCode::from(3));
            }
            for (i, tiling) in result.tilings.iter().enumerate() {
                let file = TilingFile::from_tiling(tiling).map_err(Failure::validation)?;
                let out_path = PathBuf::from(format!("{out}-{}.json", i + 1));
                write_text(&out_path, &to_canonical_json(&file))?;
                emit_line(out_path.display());
            }
            if !result.complete {
                eprintln!("enumeration incomplete: node limit reached");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cmd_reduce(path: &Path, gadget_spec: &str) -> Result<ExitCode, Failure> {
    let file: AtomInstanceFile = parse(path)?;
    let atoms = file
        .to_atoms()
        .map_err(|e| Failure::validation(format!("{}: {e}", path.display())))?;
    let gadget = load_gadget(gadget_spec)?;
    let reduced = reduce_instance(&atoms, &gadget).map_err(Failure::validation)?;
    let out = InstanceFile::from_instance(&reduced).map_err(Failure::validation)?;
    emit(to_canonical_json(&out));
    Ok(ExitCode::SUCCESS)
}

fn cmd_pullback(path: &Path, gadget_spec: &str) -> Result<ExitCode, Failure> {
    let tiling = load_tiling(path)?;
    let gadget = load_gadget(gadget_spec)?;
    match pull_back(&tiling, &gadget) {
        Ok(grid) => {
            emit(to_canonical_json(&AtomGridFile::from_grid(&grid)));
            Ok(ExitCode::SUCCESS)
        }
        Err(e @ ReduceError::NotBlockAdmissible { .. }) => Err(Failure::pullback(e)),
        Err(e) => Err(Failure::validation(e)),
    }
}

fn cmd_verify_gadget(spec: &str) -> Result<ExitCode, Failure> {
    let (gadget, closure) = load_gadget_unverified(spec)?;
    let report = verify_gadget(&gadget, &closure)
        .map_err(|e| Failure::validation(format!("gadget {spec}: {e}")))?;
    emit_line(format!("gadget {}: {report}", gadget.name()));
    for tiling in &report.missing {
        emit_line(format!("missing: {:?}", tiling.placements()));
    }
    for tiling in &report.extra {
        emit_line(format!("extra: {:?}", tiling.placements()));
    }
    if report.passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("gadget {} failed verification", gadget.name());
        Ok(ExitCode::from(2))
    }
}

fn cmd_discover(path: &Path, out: &str) -> Result<ExitCode, Failure> {
    let file: SearchFile = parse(path)?;
    let search = file
        .to_search()
        .map_err(|e| Failure::validation(format!("{}: {e}", path.display())))?;
    let found = discover_gadgets(&search).map_err(Failure::validation)?;
    let closure = search.implied_closure();
    for (i, gadget) in found.iter().enumerate() {
        let out_path = PathBuf::from(format!("{out}-{}.json", i + 1));
        let file = GadgetFile::from_gadget(gadget, Some(&closure));
        write_text(&out_path, &to_canonical_json(&file))?;
        emit_line(out_path.display());
    }
    eprintln!("found {} gadget(s)", found.len());
    Ok(ExitCode::SUCCESS)
}

fn cmd_gen(
    n: usize,
    tileset: &str,
    seed: u64,
    fill: f64,
    kind: ProjectionKind,
    witness: Option<&Path>,
) -> Result<ExitCode, Failure> {
    let ts = named_tileset(tileset).ok_or_else(|| {
        Failure::validation(format!(
            "unknown tile set {tileset:?}; available: {}",
            tileset_names().join(", ")
        ))
    })?;
    if !(0.0..=1.0).contains(&fill) {
        return Err(Failure::validation("--fill must be between 0 and 1"));
    }
    let mut rng = rng_from_seed(seed);
    let tiling = random_tiling(n, n, &ts, fill, &mut rng);
    let pair = match kind {
        ProjectionKind::Center => center_projections(&tiling),
        ProjectionKind::Cell => cell_projections(&tiling),
    }
    .map_err(Failure::validation)?;
    let instance = Instance::new(ts, pair);
    let file = InstanceFile::from_instance(&instance).map_err(Failure::validation)?;
    emit(to_canonical_json(&file));
    if let Some(path) = witness {
        let tiling_file = TilingFile::from_tiling(&tiling).map_err(Failure::validation)?;
        write_text(path, &to_canonical_json(&tiling_file))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_render(path: &Path, format: RenderFormat, cell_size: u32) -> Result<ExitCode, Failure> {
    let tiling = load_tiling(path)?;
    match format {
        RenderFormat::Ascii => emit(render::ascii(&tiling)),
        RenderFormat::Svg => emit(render::svg(&tiling, cell_size.max(4))),
    }
    Ok(ExitCode::SUCCESS)
}
