use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};
use polytile_core::assembly::{
    abstract_solve_in, parse_asm, verify_in, write_asm, AbstractError, SearchConfig, Space,
};
use polytile_core::bn::is_translational_monotile;
use polytile_core::checks::{run_all, Fixture};
use polytile_core::compiler::{self, compile_with_jobs};
use polytile_core::grid::{parse_poly, write_poly, Cell, CellSet, Polyomino};
use polytile_core::pattern::Geometry;
use polytile_core::render::{placement_items, render_svg, Class, Item, Palette, Style};
use polytile_core::solver::{
    parse_sol, refine, solve_exact_cover, verify_tiling, write_sol, Placement, Region, SolveConfig,
    SolveError,
};
use polytile_core::wang::{wang_torus_solve, WangSet};
use thiserror::Error;

#[derive(Parser)]
#[command(
    name = "polytile",
    version,
    about = "Wang tiles to seven orthogonally convex polyominoes"
)]
struct Cli {
    /// Keep every search single threaded and its answer reproducible.
    #[arg(long, global = true, default_value_t = true, action = ArgAction::Set)]
    deterministic: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a `.wang` set into seven `.poly` files and `manifest.txt`.
    Compile {
        input: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Threads used to realize the big pieces.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Check every `.poly` in a directory for connectivity and orthogonal convexity.
    Audit { dir: PathBuf },
    /// Decide whether one polyomino tiles the plane by translations.
    BnCheck { input: PathBuf },
    /// Search for an abstract assembly on a `W`x`H` Wang torus.
    Assemble {
        input: PathBuf,
        #[arg(long, value_parser = parse_size)]
        torus: (usize, usize),
        #[arg(long, default_value_t = SearchConfig::default().node_limit)]
        node_limit: u64,
        /// Write the assembly here instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Also write the cell-level placements as a `.sol` file.
        #[arg(long)]
        sol: Option<PathBuf>,
    },
    /// Cell-level exact cover with the pieces of a directory.
    Solve {
        #[arg(long)]
        pieces: PathBuf,
        /// `rect WxH` or a `.poly` file.
        #[arg(long, num_args = 1..=2)]
        region: Vec<String>,
        /// Periods `u1,u2,v1,v2` of a torus to tile instead of a window.
        #[arg(long, value_parser = parse_torus)]
        torus: Option<(Cell, Cell)>,
        #[arg(long, default_value_t = SolveConfig::default().node_limit)]
        node_limit: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check an `.asm` against a Wang set, or a `.sol` against a region.
    Verify {
        /// Abstract assembly to check; needs `--wang`.
        #[arg(long, requires = "wang")]
        asm: Option<PathBuf>,
        #[arg(long)]
        wang: Option<PathBuf>,
        /// Wang torus size the assembly lives on; open window otherwise.
        #[arg(long, value_parser = parse_size)]
        size: Option<(usize, usize)>,
        /// Cell-level placements; needs `--pieces` and a region.
        #[arg(long, requires = "pieces")]
        sol: Option<PathBuf>,
        #[arg(long)]
        pieces: Option<PathBuf>,
        #[arg(long, num_args = 1..=2)]
        region: Vec<String>,
        #[arg(long, value_parser = parse_torus)]
        torus: Option<(Cell, Cell)>,
        /// Ignore pieces reaching outside the window.
        #[arg(long)]
        open: bool,
    },
    /// Exhaustive search for a Wang tiling of a torus.
    WangTorus {
        input: PathBuf,
        #[arg(long, value_parser = parse_size)]
        size: (usize, usize),
    },
    /// Draw `.poly` files side by side, or `.sol` placements of `--pieces`.
    Render {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long, default_value_t = 4)]
        scale: u32,
        #[arg(long, default_value = "default")]
        palette: Palette,
        #[arg(long)]
        pieces: Option<PathBuf>,
    },
    /// Run the acceptance checks on the built-in three-tile set.
    Selftest,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Format(String),
    #[error("{0}")]
    Negative(String),
    #[error("search gave up after {0} nodes")]
    Exhausted(u64),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Negative(_) => 1,
            CliError::Format(_) => 2,
            CliError::Exhausted(_) => 3,
        }
    }
}

fn format_err(e: impl std::fmt::Display) -> CliError {
    CliError::Format(e.to_string())
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::ResourceExhausted(n) => CliError::Exhausted(n),
            SolveError::Incompatible(m) => CliError::Negative(m),
            other => format_err(other),
        }
    }
}

impl From<AbstractError> for CliError {
    fn from(e: AbstractError) -> Self {
        match e {
            AbstractError::ResourceExhausted(n) => CliError::Exhausted(n),
            other => format_err(other),
        }
    }
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s.split_once('x').ok_or("expected WxH")?;
    let w: usize = w.parse().map_err(|_| "bad width")?;
    let h: usize = h.parse().map_err(|_| "bad height")?;
    if w == 0 || h == 0 {
        return Err("sizes must be positive".into());
    }
    Ok((w, h))
}

fn parse_torus(s: &str) -> Result<(Cell, Cell), String> {
    let v: Vec<i32> = s
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| format!("bad number {t}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [u1, u2, v1, v2] => Ok((Cell::new(u1, u2), Cell::new(v1, v2))),
        _ => Err("expected u1,u2,v1,v2".into()),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}

fn read_wang(path: &Path) -> Result<WangSet, CliError> {
    WangSet::parse(&read(path)?).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}

fn read_poly(path: &Path) -> Result<(String, Polyomino), CliError> {
    parse_poly(&read(path)?).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}

/// Every `.poly` of a directory, sorted by file name.
fn read_pieces(dir: &Path) -> Result<Vec<(String, Polyomino)>, CliError> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::Format(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "poly"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::Format(format!(
            "{}: no .poly files",
            dir.display()
        )));
    }
    paths.iter().map(|p| read_poly(p)).collect()
}

fn region_of(spec: &[String], torus: Option<(Cell, Cell)>) -> Result<Region, CliError> {
    if let Some((p, q)) = torus {
        return Ok(Region::torus(p, q)?);
    }
    let words: Vec<&str> = spec.iter().flat_map(|s| s.split_whitespace()).collect();
    let cells = match words[..] {
        ["rect", size] => {
            let (w, h) = parse_size(size).map_err(CliError::Format)?;
            CellSet::rect(Cell::ORIGIN, w as i32, h as i32)
        }
        [file] => read_poly(Path::new(file))?.1.into_set(),
        _ => {
            return Err(CliError::Format(
                "give --region `rect WxH` or a .poly file, or --torus".into(),
            ))
        }
    };
    Ok(Region::window(cells)?)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => {
            fs::write(p, text).map_err(|e| CliError::Format(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Compile { input, out, jobs } => {
            let ws = read_wang(&input)?;
            let ts = compile_with_jobs(&ws, jobs.max(1)).map_err(format_err)?;
            fs::create_dir_all(&out).map_err(format_err)?;
            for p in &ts.pieces {
                let path = out.join(format!("{}.poly", p.name));
                let file = fs::File::create(&path).map_err(format_err)?;
                let mut w = BufWriter::new(file);
                write_poly(&mut w, &p.name, &p.polyomino)
                    .and_then(|_| w.flush())
                    .map_err(format_err)?;
            }
            fs::write(out.join("manifest.txt"), ts.manifest()).map_err(format_err)?;
            println!("wrote {} pieces to {}", ts.pieces.len(), out.display());
        }
        Command::Audit { dir } => {
            let pieces = read_pieces(&dir)?;
            let mut good = 0;
            for (name, p) in &pieces {
                let (conn, convex) = (p.is_connected(), p.is_orthogonally_convex());
                good += usize::from(conn && convex);
                println!(
                    "{name}: cells {} size {}x{} connected {conn} orthogonally-convex {convex}",
                    p.len(),
                    p.width(),
                    p.height()
                );
            }
            println!("{good}/{} orthogonally convex", pieces.len());
            if good != pieces.len() {
                return Err(CliError::Negative(format!(
                    "{} pieces fail",
                    pieces.len() - good
                )));
            }
        }
        Command::BnCheck { input } => {
            let (name, p) = read_poly(&input)?;
            let (tiles, f) = is_translational_monotile(&p).map_err(format_err)?;
            match f {
                Some(f) if tiles => {
                    let word = p.boundary_word().map_err(format_err)?;
                    let (a, b) = f.periods(&word.letters);
                    let cuts: Vec<String> = f
                        .factors()
                        .iter()
                        .map(|(o, l)| format!("{o}+{l}"))
                        .collect();
                    println!("TILES {name} factors {} periods {a} {b}", cuts.join(" "));
                }
                _ => {
                    println!("DOES-NOT-TILE {name}");
                    return Err(CliError::Negative(String::new()));
                }
            }
        }
        Command::Assemble {
            input,
            torus: (w, h),
            node_limit,
            out,
            sol,
        } => {
            let ws = read_wang(&input)?;
            let tiles = compiler::abstract_tiles(&ws);
            let lattice = Geometry::new(&ws)
                .torus(w as i32, h as i32)
                .map_err(format_err)?;
            let found =
                abstract_solve_in(&tiles, &Space::Torus(lattice), SearchConfig { node_limit })?;
            let Some(pl) = found else {
                println!("NO-ASSEMBLY {w}x{h}");
                return Err(CliError::Negative(String::new()));
            };
            emit(&out, &write_asm(&tiles, &pl))?;
            if let Some(path) = sol {
                let ts = compile_with_jobs(&ws, 1).map_err(format_err)?;
                let cells = refine(&ts, &pl)?;
                let names: Vec<String> = ts.pieces.iter().map(|p| p.name.clone()).collect();
                emit(&Some(path), &write_sol(&names, &cells))?;
            }
        }
        Command::Solve {
            pieces,
            region,
            torus,
            node_limit,
            out,
        } => {
            let pieces = read_pieces(&pieces)?;
            let region = region_of(&region, torus)?;
            let polys: Vec<Polyomino> = pieces.iter().map(|(_, p)| p.clone()).collect();
            let names: Vec<String> = pieces.into_iter().map(|(n, _)| n).collect();
            match solve_exact_cover(&polys, &region, &SolveConfig { node_limit })? {
                Some(pl) => emit(&out, &write_sol(&names, &pl))?,
                None => {
                    println!("NO-TILING");
                    return Err(CliError::Negative(String::new()));
                }
            }
        }
        Command::Verify {
            asm,
            wang,
            size,
            sol,
            pieces,
            region,
            torus,
            open,
        } => match (asm, wang, sol, pieces) {
            (Some(asm), Some(wang), None, _) => {
                let ws = read_wang(&wang)?;
                let tiles = compiler::abstract_tiles(&ws);
                let pl = parse_asm(&tiles, &read(&asm)?)?;
                let space = match size {
                    Some((w, h)) => Space::Torus(
                        Geometry::new(&ws)
                            .torus(w as i32, h as i32)
                            .map_err(format_err)?,
                    ),
                    None => Space::Window {
                        units: pl
                            .iter()
                            .flat_map(|p| tiles[p.tile].units.iter().map(move |&u| u + p.offset))
                            .collect(),
                        open: true,
                    },
                };
                let report = verify_in(&tiles, &pl, &space);
                print!("{report}");
                if !report.is_valid() {
                    return Err(CliError::Negative(String::new()));
                }
            }
            (None, _, Some(sol), Some(dir)) => {
                let pieces = read_pieces(&dir)?;
                let names: Vec<String> = pieces.iter().map(|(n, _)| n.clone()).collect();
                let polys: Vec<Polyomino> = pieces.into_iter().map(|(_, p)| p).collect();
                let pl = parse_sol(&names, &read(&sol)?).map_err(format_err)?;
                let region = region_of(&region, torus)?;
                let report = verify_tiling(&polys, &pl, &region, open);
                print!("{report}");
                if !report.is_clean() {
                    return Err(CliError::Negative(String::new()));
                }
            }
            _ => {
                return Err(CliError::Format(
                    "give either --asm with --wang, or --sol with --pieces".into(),
                ))
            }
        },
        Command::WangTorus {
            input,
            size: (w, h),
        } => {
            let ws = read_wang(&input)?;
            match wang_torus_solve(&ws, w, h) {
                Some(a) => {
                    // Top row first.
                    for row in a.iter().rev() {
                        let r: Vec<String> = row.iter().map(|k| k.to_string()).collect();
                        println!("{}", r.join(" "));
                    }
                }
                None => {
                    println!("NO-TILING {w}x{h}");
                    return Err(CliError::Negative(String::new()));
                }
            }
        }
        Command::Render {
            files,
            out,
            scale,
            palette,
            pieces,
        } => {
            let style = Style { scale, palette };
            let set = match &pieces {
                Some(dir) => read_pieces(dir)?,
                None => Vec::new(),
            };
            let names: Vec<String> = set.iter().map(|(n, _)| n.clone()).collect();
            let compiled: Vec<compiler::CompiledPiece> = set
                .into_iter()
                .map(|(name, polyomino)| compiler::CompiledPiece {
                    name,
                    tile: None,
                    polyomino,
                    origin: Cell::ORIGIN,
                })
                .collect();
            let mut loose: Vec<(String, Polyomino)> = Vec::new();
            let mut placed: Vec<Placement> = Vec::new();
            for f in &files {
                if f.extension().is_some_and(|x| x == "sol") {
                    if pieces.is_none() {
                        return Err(CliError::Format(format!(
                            "{}: .sol needs --pieces",
                            f.display()
                        )));
                    }
                    placed.extend(parse_sol(&names, &read(f)?).map_err(format_err)?);
                } else {
                    loose.push(read_poly(f)?);
                }
            }
            let mut items = placement_items(&compiled, &placed);
            let mut x = 0;
            for (name, p) in &loose {
                items.push(Item {
                    poly: p,
                    offset: Cell::new(x, 0) - p.bounds().0,
                    class: Class::of_name(name),
                });
                x += p.width() + 2;
            }
            fs::write(&out, render_svg(&items, &style)).map_err(format_err)?;
        }
        Command::Selftest => {
            let fx = Fixture::new(WangSet::sample()).map_err(format_err)?;
            let outcomes = run_all(&fx);
            for o in &outcomes {
                println!("{o}");
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            println!(
                "{}/{} criteria pass",
                outcomes.len() - failed,
                outcomes.len()
            );
            if failed > 0 {
                return Err(CliError::Negative(String::new()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    // Searches run on one thread either way; the flag pins that down.
    let _ = cli.deterministic;
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string();
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(e.code())
        }
    }
}
