//! The periodic arrangement of locators, encoders and linkers that simulates
//! a Wang tiling.
//!
//! Locators sit on the lattice spanned by `P = (L+t, 6)` (one Wang cell up)
//! and `Q = (L+t, -6)` (one Wang cell right). The encoder of Wang cell
//! `(x, y)` shows tile `k` by sliding so that marker `k` fills the NE mouth of
//! the locator one cell to its left.

use std::collections::BTreeSet;

use crate::assembly::{AbstractPlacement, AbstractTile, Unit};
use crate::compiler::{color_code, Formulas};
use crate::grid::Cell;
use crate::lattice::{DegenerateLattice, Lattice};
use crate::wang::WangSet;

/// Registry indices of the six big abstract tiles, as produced by
/// `compiler::abstract_tiles`.
pub const ENCODER: usize = 0;
pub const A_LINKER: usize = 1;
pub const B_LINKER: usize = 2;
pub const LOWER: usize = 3;
pub const MIDDLE: usize = 4;
pub const UPPER: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Locator,
    Encoder,
    /// Carries bit `j` of a tile's top color to the encoder above.
    TopLinker(usize),
    /// Carries bit `j` of a tile's right color to the encoder on the right.
    RightLinker(usize),
    /// Fills the part of an excavation the encoder leaves empty.
    Filling,
}

#[derive(Clone, Debug, Default)]
pub struct Pattern {
    pub placements: Vec<AbstractPlacement>,
    /// Wang cell owning each placement.
    pub owner: Vec<(i32, i32)>,
    pub role: Vec<Role>,
}

#[derive(Clone, Copy, Debug)]
pub struct Geometry {
    pub f: Formulas,
}

impl Geometry {
    pub fn new(ws: &WangSet) -> Self {
        Geometry {
            f: Formulas::new(ws),
        }
    }

    pub fn up(&self) -> Unit {
        Cell::new(self.f.locator_len + self.f.t, 6)
    }

    pub fn right(&self) -> Unit {
        Cell::new(self.f.locator_len + self.f.t, -6)
    }

    pub fn locator(&self, x: i32, y: i32) -> Unit {
        x * self.right() + y * self.up()
    }

    /// Encoder offset for a locator at `at` showing tile `k`.
    pub fn encoder(&self, at: Unit, k: usize) -> Unit {
        at + Cell::new(-(k as i32 + 1) * (self.f.t + 1), 9)
    }

    /// Units per Wang cell.
    pub fn cell_area(&self) -> u64 {
        12 * (self.f.locator_len + self.f.t) as u64
    }

    /// Period lattice of a `w` by `h` Wang torus.
    pub fn torus(&self, w: i32, h: i32) -> Result<Lattice, DegenerateLattice> {
        Lattice::new(w * self.right(), h * self.up())
    }
}

fn bits(c: u32, t: u32) -> Vec<usize> {
    color_code(c, t)
        .expect("color fits")
        .into_iter()
        .map(|code| {
            if code == crate::compiler::bit_code(true) {
                B_LINKER
            } else {
                A_LINKER
            }
        })
        .collect()
}

/// Placements owned by Wang cells `(x, y)` with `x` in `xs` and `y` in `ys`.
/// `tile_at` gives the Wang tile at any cell, including neighbours of the range.
pub fn rigid_pattern(
    ws: &WangSet,
    xs: std::ops::Range<i32>,
    ys: std::ops::Range<i32>,
    tile_at: impl Fn(i32, i32) -> usize,
) -> Pattern {
    let g = Geometry::new(ws);
    let f = g.f;
    let (len, e, t) = (f.locator_len, f.excavation(), f.t);
    let mut pat = Pattern::default();
    let push = |p: &mut Pattern, tile, offset, owner, role| {
        p.placements.push(AbstractPlacement { tile, offset });
        p.owner.push(owner);
        p.role.push(role);
    };
    for y in ys.clone() {
        for x in xs.clone() {
            let at = g.locator(x, y);
            let k = tile_at(x, y);
            let tile = ws.tiles()[k];
            for part in [LOWER, MIDDLE, UPPER] {
                push(&mut pat, part, at, (x, y), Role::Locator);
            }
            push(&mut pat, ENCODER, g.encoder(at, k), (x, y), Role::Encoder);
            for (j, kind) in bits(tile.top, ws.t()).into_iter().enumerate() {
                let off = at + Cell::new(len + j as i32, 12);
                push(&mut pat, kind, off, (x, y), Role::TopLinker(j));
            }
            for (j, kind) in bits(tile.right, ws.t()).into_iter().enumerate() {
                let off = at + Cell::new(len + j as i32, 6);
                push(&mut pat, kind, off, (x, y), Role::RightLinker(j));
            }
            // NE excavation: the encoder of the cell to the right enters up to
            // and including local u = L-1-k'(t+1).
            let k_right = tile_at(x + 1, y) as i32;
            for u in e + 1..len - 1 - k_right * (t + 1) {
                push(
                    &mut pat,
                    A_LINKER,
                    at + Cell::new(u, 3),
                    (x, y),
                    Role::Filling,
                );
            }
            // SW excavation: the encoder of the cell below reaches local
            // u = E-1-k''(t+1).
            let k_below = tile_at(x, y - 1) as i32;
            for u in e - k_below * (t + 1)..e {
                push(
                    &mut pat,
                    A_LINKER,
                    at + Cell::new(u, 3),
                    (x, y),
                    Role::Filling,
                );
            }
        }
    }
    pat
}

/// Units covered by the placements of `pattern` whose owner satisfies `keep`.
pub fn owned_units(
    tiles: &[AbstractTile],
    pattern: &Pattern,
    keep: impl Fn((i32, i32)) -> bool,
) -> BTreeSet<Unit> {
    pattern
        .placements
        .iter()
        .zip(&pattern.owner)
        .filter(|(_, &o)| keep(o))
        .flat_map(|(p, _)| tiles[p.tile].units.iter().map(move |&u| u + p.offset))
        .collect()
}

/// Wang tile shown by each encoder of an assembly, read from which of its
/// bottom-left tile blocks has a linker directly below its first code unit.
pub fn exposed_tiles(
    tiles: &[AbstractTile],
    placements: &[AbstractPlacement],
    f: &Formulas,
    canon: impl Fn(Unit) -> Unit,
) -> Vec<(usize, Option<usize>)> {
    let mut owner = std::collections::HashMap::new();
    for (i, p) in placements.iter().enumerate() {
        for &u in &tiles[p.tile].units {
            owner.insert(canon(u + p.offset), i);
        }
    }
    placements
        .iter()
        .enumerate()
        .filter(|(_, p)| p.tile == ENCODER)
        .map(|(i, p)| {
            let shown: Vec<usize> = (0..f.n)
                .filter(|&k| {
                    let below = canon(p.offset + Cell::new(f.bottom_left_block(k), -1));
                    owner
                        .get(&below)
                        .is_some_and(|&o| matches!(placements[o].tile, A_LINKER | B_LINKER))
                })
                .map(|k| k as usize)
                .collect();
            (
                i,
                if shown.len() == 1 {
                    Some(shown[0])
                } else {
                    None
                },
            )
        })
        .collect()
}

/// Reads the Wang tiling simulated by a `w` by `h` torus assembly: the tile
/// shown by each encoder, placed at the Wang cell of the locator it docks
/// into, relative to the first encoder. `None` unless every cell shows
/// exactly one tile.
pub fn decode_torus(
    ws: &WangSet,
    tiles: &[AbstractTile],
    placements: &[AbstractPlacement],
    w: usize,
    h: usize,
) -> Option<crate::wang::Assignment> {
    let g = Geometry::new(ws);
    let lattice = g.torus(w as i32, h as i32).ok()?;
    let shown = exposed_tiles(tiles, placements, &g.f, |u| lattice.reduce(u));
    let mut grid = vec![vec![None; w]; h];
    let mut origin = None;
    for (i, k) in shown {
        let k = k?;
        let at = placements[i].offset - (g.encoder(Cell::ORIGIN, k));
        let base = *origin.get_or_insert(at);
        let (x, y) = (0..w as i32)
            .flat_map(|x| (0..h as i32).map(move |y| (x, y)))
            .find(|&(x, y)| lattice.contains(at - base - g.locator(x, y)))?;
        let slot = &mut grid[y as usize][x as usize];
        if slot.is_some() {
            return None;
        }
        *slot = Some(k);
    }
    grid.into_iter()
        .map(|row| row.into_iter().collect())
        .collect()
}
