//! Cell-level tiling: exact cover over windows and tori, verification of
//! placements, and refinement of abstract assemblies into cells.

pub mod adjacency;
mod dlx;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::assembly::{verify_in, AbstractPlacement, Space, Violation};
use crate::blocks::{
    filler_anchor, level2_vectors, level3_vectors, side_position, Side, ORDER, SIDE,
};
use crate::compiler::TileSet7;
use crate::grid::{Cell, CellSet, Polyomino, Span};
use crate::lattice::{DegenerateLattice, Lattice};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("search gave up after {0} nodes")]
    ResourceExhausted(u64),
    #[error("region has no cells")]
    EmptyRegion,
    #[error(transparent)]
    Degenerate(#[from] DegenerateLattice),
    #[error("abstract assembly is invalid: {0}")]
    Incompatible(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Region {
    Window(CellSet),
    Torus(Lattice),
}

impl Region {
    pub fn window(cells: CellSet) -> Result<Self, SolveError> {
        if cells.is_empty() {
            return Err(SolveError::EmptyRegion);
        }
        Ok(Region::Window(cells))
    }

    pub fn torus(p: Cell, q: Cell) -> Result<Self, SolveError> {
        Ok(Region::Torus(Lattice::new(p, q)?))
    }

    /// Cells to be covered, in (y, x) order for windows and by residue index
    /// for tori.
    fn items(&self) -> Vec<Cell> {
        match self {
            Region::Window(w) => w.cells().collect(),
            Region::Torus(l) => (0..l.area() as usize)
                .map(|i| l.representative(i))
                .collect(),
        }
    }

    pub fn area(&self) -> u64 {
        match self {
            Region::Window(w) => w.len(),
            Region::Torus(l) => l.area(),
        }
    }
}

/// A piece index and the translation applied to its normalized cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Placement {
    pub piece: usize,
    pub offset: Cell,
}

#[derive(Clone, Copy, Debug)]
pub struct SolveConfig {
    pub node_limit: u64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            node_limit: 5_000_000,
        }
    }
}

/// Every placement of every piece that fits in the region, as item lists.
fn options(
    pieces: &[Polyomino],
    region: &Region,
    items: &[Cell],
) -> (Vec<Placement>, Vec<Vec<usize>>) {
    let mut placements = Vec::new();
    let mut rows = Vec::new();
    match region {
        Region::Window(_) => {
            let index: HashMap<Cell, usize> =
                items.iter().enumerate().map(|(i, &c)| (c, i)).collect();
            for (pi, p) in pieces.iter().enumerate() {
                let first = p.first_cell();
                for &c in items {
                    let off = c - first;
                    let cells: Option<Vec<usize>> =
                        p.cells().map(|q| index.get(&(q + off)).copied()).collect();
                    if let Some(cells) = cells {
                        placements.push(Placement {
                            piece: pi,
                            offset: off,
                        });
                        rows.push(cells);
                    }
                }
            }
        }
        Region::Torus(l) => {
            for (pi, p) in pieces.iter().enumerate() {
                let first = p.first_cell();
                for &c in items {
                    let off = c - first;
                    let mut cells: Vec<usize> = p.cells().map(|q| l.index(q + off)).collect();
                    let n = cells.len();
                    cells.sort_unstable();
                    cells.dedup();
                    if cells.len() == n {
                        placements.push(Placement {
                            piece: pi,
                            offset: off,
                        });
                        rows.push(cells);
                    }
                }
            }
        }
    }
    (placements, rows)
}

/// Covers every region cell exactly once with translated copies of the
/// pieces. `Ok(None)` means no cover exists.
pub fn solve_exact_cover(
    pieces: &[Polyomino],
    region: &Region,
    config: &SolveConfig,
) -> Result<Option<Vec<Placement>>, SolveError> {
    let items = region.items();
    if items.is_empty() {
        return Err(SolveError::EmptyRegion);
    }
    let (placements, rows) = options(pieces, region, &items);
    let mut d = dlx::Dlx::new(items.len(), &rows);
    match d.solve(config.node_limit) {
        dlx::Outcome::Found(chosen) => {
            let mut out: Vec<Placement> = chosen.into_iter().map(|r| placements[r]).collect();
            out.sort();
            Ok(Some(out))
        }
        dlx::Outcome::None => Ok(None),
        dlx::Outcome::Exhausted => Err(SolveError::ResourceExhausted(config.node_limit)),
    }
}

/// Coverage defects of a set of placements. Torus cells are reported by
/// their canonical representatives.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TilingReport {
    pub double: CellSet,
    pub uncovered: CellSet,
    pub outside: CellSet,
    pub unknown_pieces: Vec<usize>,
}

impl TilingReport {
    pub fn is_clean(&self) -> bool {
        self.double.is_empty()
            && self.uncovered.is_empty()
            && self.outside.is_empty()
            && self.unknown_pieces.is_empty()
    }
}

impl fmt::Display for TilingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "double {} uncovered {} outside {} unknown {}",
            self.double.len(),
            self.uncovered.len(),
            self.outside.len(),
            self.unknown_pieces.len()
        )?;
        for (what, set) in [
            ("double", &self.double),
            ("uncovered", &self.uncovered),
            ("outside", &self.outside),
        ] {
            for (y, spans) in set.rows() {
                for s in spans {
                    writeln!(f, "{what} y {y} x {}..{}", s.start, s.end)?;
                }
            }
        }
        for p in &self.unknown_pieces {
            writeln!(f, "unknown piece in placement {p}")?;
        }
        Ok(())
    }
}

/// Cells covered at least once and at least twice, from per-row runs.
fn sweep(rows: HashMap<i32, Vec<Span>>) -> (CellSet, CellSet) {
    let mut once = Vec::new();
    let mut twice = Vec::new();
    for (y, spans) in rows {
        let mut ev: Vec<(i32, i32)> = spans
            .iter()
            .flat_map(|s| [(s.start, 1), (s.end, -1)])
            .collect();
        ev.sort_unstable();
        let mut depth = 0;
        let mut last = 0;
        for (x, d) in ev {
            if depth >= 1 && x > last {
                once.push((y, last, x));
            }
            if depth >= 2 && x > last {
                twice.push((y, last, x));
            }
            depth += d;
            last = x;
        }
    }
    (CellSet::from_spans(once), CellSet::from_spans(twice))
}

/// Checks that `placements` cover each region cell exactly once. In an open
/// window, cells outside the window are ignored; in a closed one they are
/// reported as `outside`.
pub fn verify_tiling(
    pieces: &[Polyomino],
    placements: &[Placement],
    region: &Region,
    boundary_open: bool,
) -> TilingReport {
    let mut report = TilingReport::default();
    match region {
        Region::Window(w) => {
            let (lo, hi) = match w.bounds() {
                Some(b) => b,
                None => (Cell::ORIGIN, Cell::new(0, -1)),
            };
            let mut rows: HashMap<i32, Vec<Span>> = HashMap::new();
            for (i, pl) in placements.iter().enumerate() {
                let Some(p) = pieces.get(pl.piece) else {
                    report.unknown_pieces.push(i);
                    continue;
                };
                let set = p.as_set();
                let (a, b) = if boundary_open {
                    (lo.y - pl.offset.y, hi.y + 1 - pl.offset.y)
                } else {
                    (i32::MIN, i32::MAX)
                };
                for (y, spans) in set.rows_between(a, b) {
                    let row = rows.entry(y + pl.offset.y).or_default();
                    row.extend(
                        spans
                            .iter()
                            .map(|s| Span::new(s.start + pl.offset.x, s.end + pl.offset.x)),
                    );
                }
            }
            let (once, twice) = sweep(rows);
            report.uncovered = w.difference(&once);
            if boundary_open {
                report.double = twice.intersection(w);
            } else {
                report.double = twice;
                report.outside = once.difference(w);
            }
        }
        Region::Torus(l) => {
            let mut count = vec![0u32; l.area() as usize];
            for (i, pl) in placements.iter().enumerate() {
                let Some(p) = pieces.get(pl.piece) else {
                    report.unknown_pieces.push(i);
                    continue;
                };
                for c in p.cells() {
                    count[l.index(c + pl.offset)] += 1;
                }
            }
            let pick = |f: &dyn Fn(u32) -> bool| {
                CellSet::from_cells(
                    count
                        .iter()
                        .enumerate()
                        .filter(|(_, &n)| f(n))
                        .map(|(i, _)| l.representative(i)),
                )
            };
            report.uncovered = pick(&|n| n == 0);
            report.double = pick(&|n| n >= 2);
        }
    }
    report
}

/// Cell offset of the normalized tiny filler for the gap below SE index
/// `index` of the unit whose bottom corner is at abstract `upper`.
pub fn filler_offset(upper: Cell, index: usize) -> Cell {
    let (big_i, big_j) = level3_vectors(ORDER, SIDE);
    let (i, j) = level2_vectors(ORDER);
    let (x, y) = side_position(Side::Se, index, SIDE);
    upper.x * big_i + upper.y * big_j + x * i + y * j + Cell::new(0, ORDER - 1) + filler_anchor()
}

/// Concrete placements for an abstract assembly: every big piece at its
/// lattice offset plus one tiny filler per dent-dent gap. Piece indices refer
/// to `ts.pieces`. Abstract tile indices refer to `ts.abstract_tiles()`.
pub fn refine(
    ts: &TileSet7,
    placements: &[AbstractPlacement],
) -> Result<Vec<Placement>, SolveError> {
    let big: Vec<usize> = (0..ts.pieces.len())
        .filter(|&i| ts.pieces[i].tile.is_some())
        .collect();
    let filler = (0..ts.pieces.len())
        .find(|&i| ts.pieces[i].tile.is_none())
        .ok_or_else(|| SolveError::Incompatible("piece set has no filler".into()))?;
    let tiles = ts.abstract_tiles();
    let units = placements
        .iter()
        .filter_map(|p| tiles.get(p.tile).map(|t| (t, p.offset)))
        .flat_map(|(t, off)| t.units.iter().map(move |&u| u + off))
        .collect();
    let report = verify_in(&tiles, placements, &Space::Window { units, open: true });
    if let Some(v) = report
        .violations
        .iter()
        .find(|v| !matches!(v, Violation::Uncovered { .. }))
    {
        return Err(SolveError::Incompatible(v.to_string()));
    }
    let mut out: Vec<Placement> = placements
        .iter()
        .map(|p| {
            let piece = big[p.tile];
            Placement {
                piece,
                offset: ts.pieces[piece].translation(p.offset),
            }
        })
        .collect();
    out.extend(report.filler_positions.iter().map(|f| Placement {
        piece: filler,
        offset: filler_offset(f.upper, f.index),
    }));
    Ok(out)
}

/// `.sol` text: one `piece <name> <x> <y>` line per placement.
pub fn write_sol(names: &[String], placements: &[Placement]) -> String {
    placements
        .iter()
        .map(|p| format!("piece {} {} {}\n", names[p.piece], p.offset.x, p.offset.y))
        .collect()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct SolParseError {
    pub line: usize,
    pub msg: String,
}

pub fn parse_sol(names: &[String], text: &str) -> Result<Vec<Placement>, SolParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| SolParseError {
            line: i + 1,
            msg: msg.to_string(),
        };
        let w: Vec<&str> = line.split_whitespace().collect();
        if w.len() != 4 || w[0] != "piece" {
            return Err(err("expected `piece <name> <x> <y>`"));
        }
        let piece = names
            .iter()
            .position(|n| n == w[1])
            .ok_or_else(|| err(&format!("unknown piece {}", w[1])))?;
        let x = w[2].parse().map_err(|_| err("bad x"))?;
        let y = w[3].parse().map_err(|_| err("bad y"))?;
        out.push(Placement {
            piece,
            offset: Cell::new(x, y),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::tiny_filler;

    fn unit() -> Polyomino {
        Polyomino::new([Cell::ORIGIN]).unwrap()
    }

    #[test]
    fn unit_cells_fill_a_square() {
        let region = Region::window(CellSet::rect(Cell::ORIGIN, 2, 2)).unwrap();
        let sol = solve_exact_cover(&[unit()], &region, &SolveConfig::default())
            .unwrap()
            .unwrap();
        assert_eq!(sol.len(), 4);
        assert!(verify_tiling(&[unit()], &sol, &region, false).is_clean());
    }

    #[test]
    fn duplicate_is_reported() {
        let region = Region::window(CellSet::rect(Cell::ORIGIN, 2, 2)).unwrap();
        let mut sol: Vec<Placement> = [(0, 0), (1, 0), (0, 1), (1, 1)]
            .iter()
            .map(|&(x, y)| Placement {
                piece: 0,
                offset: Cell::new(x, y),
            })
            .collect();
        sol.push(sol[0]);
        let r = verify_tiling(&[unit()], &sol, &region, false);
        assert_eq!(r.double, CellSet::from_cells([Cell::ORIGIN]));
        assert!(r.uncovered.is_empty() && r.outside.is_empty());
        sol.pop();
        sol.pop();
        sol.push(Placement {
            piece: 0,
            offset: Cell::new(5, 5),
        });
        let r = verify_tiling(&[unit()], &sol, &region, false);
        assert_eq!(r.uncovered.len(), 1);
        assert_eq!(r.outside.len(), 1);
        assert!(verify_tiling(&[unit()], &sol, &region, true)
            .outside
            .is_empty());
    }

    #[test]
    fn filler_covers_its_footprint() {
        let f = tiny_filler();
        let region = Region::window(f.as_set().translate(Cell::new(3, -2))).unwrap();
        let sol = solve_exact_cover(std::slice::from_ref(&f), &region, &SolveConfig::default())
            .unwrap()
            .unwrap();
        assert_eq!(
            sol,
            vec![Placement {
                piece: 0,
                offset: Cell::new(3, -2)
            }]
        );
    }

    #[test]
    fn filler_does_not_tile_small_tori() {
        let f = tiny_filler();
        let r = Region::torus(Cell::new(6, 0), Cell::new(0, 9)).unwrap();
        assert_eq!(
            solve_exact_cover(std::slice::from_ref(&f), &r, &SolveConfig::default()),
            Ok(None)
        );
        for (p, q) in [
            ((51, 0), (0, 1)),
            ((17, 0), (0, 3)),
            ((3, 0), (0, 17)),
            ((17, 0), (1, 3)),
            ((17, 1), (0, 6)),
        ] {
            let r = Region::torus(Cell::new(p.0, p.1), Cell::new(q.0, q.1)).unwrap();
            let sol =
                solve_exact_cover(std::slice::from_ref(&f), &r, &SolveConfig::default()).unwrap();
            assert_eq!(sol, None, "periods {p:?} {q:?}");
        }
    }

    #[test]
    fn unit_torus_and_limit() {
        let r = Region::torus(Cell::new(2, 1), Cell::new(0, 3)).unwrap();
        let sol = solve_exact_cover(&[unit()], &r, &SolveConfig::default())
            .unwrap()
            .unwrap();
        assert_eq!(sol.len(), 6);
        assert!(verify_tiling(&[unit()], &sol, &r, false).is_clean());
        let tight = SolveConfig { node_limit: 2 };
        assert_eq!(
            solve_exact_cover(&[unit()], &r, &tight),
            Err(SolveError::ResourceExhausted(2))
        );
    }

    #[test]
    fn extra_pieces_keep_windows_solvable() {
        let domino = Polyomino::new([Cell::ORIGIN, Cell::new(1, 0)]).unwrap();
        let tromino = Polyomino::new([Cell::ORIGIN, Cell::new(0, 1), Cell::new(0, 2)]).unwrap();
        for (w, h) in [(2, 3), (3, 3), (4, 2), (1, 3)] {
            let region = Region::window(CellSet::rect(Cell::ORIGIN, w, h)).unwrap();
            let cfg = SolveConfig::default();
            let small = solve_exact_cover(std::slice::from_ref(&domino), &region, &cfg)
                .unwrap()
                .is_some();
            let big = solve_exact_cover(&[domino.clone(), tromino.clone()], &region, &cfg)
                .unwrap()
                .is_some();
            assert!(!small || big);
            assert_eq!(big, (w * h) % 2 == 0 || h == 3, "{w}x{h}");
        }
    }

    #[test]
    fn sol_round_trip() {
        let names = vec!["a".to_string(), "b".to_string()];
        let pl = vec![
            Placement {
                piece: 1,
                offset: Cell::new(-3, 4),
            },
            Placement {
                piece: 0,
                offset: Cell::new(0, 0),
            },
        ];
        assert_eq!(parse_sol(&names, &write_sol(&names, &pl)).unwrap(), pl);
        assert!(parse_sol(&names, "piece c 0 0").is_err());
    }
}
