//! Wang set to seven polyominoes: the tiny filler, an encoder, two linkers
//! and three partial locators.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::assembly::{AbstractError, AbstractTile, Unit};
use crate::blocks::{
    self, level3_vectors, realize_many, tiny_filler, BlockError, Level3Spec, SideCode, SideLabel,
    ORDER, SIDE,
};
use crate::grid::{union_disjoint, Cell, GridError, Polyomino};
use crate::wang::WangSet;

#[derive(Debug, Error)]
pub enum CompileError {
    #[error("color {color} does not fit in {t} bits")]
    Domain { color: u32, t: u32 },
    #[error(transparent)]
    Block(#[from] BlockError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Abstract(#[from] AbstractError),
}

pub const TINY_FILLER: &str = "tiny-filler";
pub const ENCODER: &str = "encoder";
pub const A_LINKER: &str = "a-linker";
pub const B_LINKER: &str = "b-linker";
pub const LOCATOR_LOWER: &str = "locator-lower";
pub const LOCATOR_MIDDLE: &str = "locator-middle";
pub const LOCATOR_UPPER: &str = "locator-upper";

/// Unit counts derived from a Wang set with `n` tiles and `t` bits per color.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Formulas {
    pub n: i32,
    pub m: u32,
    pub t: i32,
    /// One encoding segment: a marker before each tile block and one closing marker.
    pub segment: i32,
    /// Padding between the two segments; also the depth of each excavation.
    pub padding: i32,
    pub encoder_len: i32,
    /// Long side of the locator; equals the distance between the two portions
    /// of the encoder that describe the same tile.
    pub locator_len: i32,
}

impl Formulas {
    pub fn new(ws: &WangSet) -> Self {
        let n = ws.n() as i32;
        let t = ws.t() as i32;
        Formulas {
            n,
            m: ws.m(),
            t,
            segment: n * (t + 1) + 1,
            padding: (n - 1) * (t + 1) + 1,
            encoder_len: (3 * n - 1) * (t + 1) + 3,
            locator_len: 2 * (n - 1) * (t + 1) + 3,
        }
    }

    pub fn excavation(&self) -> i32 {
        self.padding
    }

    /// Local `u` of the first unit of tile `k`'s block in the bottom-left segment.
    pub fn bottom_left_block(&self, k: i32) -> i32 {
        k * (self.t + 1) + 1
    }

    /// Local `u` of the first unit of tile `k`'s block in the top-right segment.
    pub fn top_right_block(&self, k: i32) -> i32 {
        self.segment + self.padding + k * (self.t + 1) + 1
    }
}

pub fn marker() -> SideCode {
    SideCode::new(&[SideLabel::M], &[SideLabel::L])
}

pub fn selector() -> SideCode {
    SideCode::new(&[SideLabel::L], &[SideLabel::M])
}

pub fn padding_code() -> SideCode {
    SideCode::default()
}

pub fn glue_one() -> SideCode {
    use SideLabel::*;
    SideCode::new(&[L, M], &[L, M])
}

pub fn glue_two() -> SideCode {
    use SideLabel::*;
    SideCode::new(&[A, L, M], &[A, L, M])
}

fn corner_code() -> SideCode {
    use SideLabel::*;
    SideCode::new(&[], &[C, M])
}

fn edge_code() -> SideCode {
    use SideLabel::*;
    SideCode::new(&[], &[A, B, C, M])
}

pub fn bit_code(bit: bool) -> SideCode {
    if bit {
        SideCode::new(&[SideLabel::C], &[SideLabel::B])
    } else {
        SideCode::new(&[SideLabel::C], &[SideLabel::A])
    }
}

/// Big-endian binary expansion of `c`, one code per bit.
pub fn color_code(c: u32, t: u32) -> Result<Vec<SideCode>, CompileError> {
    if t < 32 && (c as u64) >= (1u64 << t) {
        return Err(CompileError::Domain { color: c, t });
    }
    Ok((0..t).rev().map(|b| bit_code((c >> b) & 1 == 1)).collect())
}

/// Inverse of `color_code`, when every code is a bit code.
pub fn decode_color(codes: &[SideCode]) -> Option<u32> {
    codes.iter().try_fold(0u32, |acc, &c| {
        if c == bit_code(false) {
            Some(acc << 1)
        } else if c == bit_code(true) {
            Some(acc << 1 | 1)
        } else {
            None
        }
    })
}

fn rect_units(u0: i32, len: i32, v0: i32, width: i32) -> BTreeSet<Unit> {
    (u0..u0 + len)
        .flat_map(|u| (v0..v0 + width).map(move |v| Cell::new(u, v)))
        .collect()
}

pub fn build_encoder(ws: &WangSet) -> AbstractTile {
    let f = Formulas::new(ws);
    let t = ws.t();
    let mut nw = BTreeMap::new();
    let mut se = BTreeMap::new();
    let colors = |c: u32| color_code(c, t).expect("colors fit in t bits");
    for u in 0..f.encoder_len {
        let (nw_code, se_code) = if u >= f.segment && u < f.segment + f.padding {
            (padding_code(), padding_code())
        } else {
            let top_right = u >= f.segment;
            let w = if top_right {
                u - f.segment - f.padding
            } else {
                u
            };
            let (k, r) = (w / (f.t + 1), w % (f.t + 1));
            if r == 0 {
                (marker(), marker())
            } else {
                let tile = ws.tiles()[k as usize];
                let j = (r - 1) as usize;
                if top_right {
                    (colors(tile.top)[j], colors(tile.right)[j])
                } else {
                    (colors(tile.left)[j], colors(tile.bottom)[j])
                }
            }
        };
        nw.insert(Cell::new(u, 2), nw_code);
        se.insert(Cell::new(u, 0), se_code);
    }
    AbstractTile::new(ENCODER, rect_units(0, f.encoder_len, 0, 3), nw, se)
        .expect("encoder is well formed")
}

fn linker(name: &str, label: SideLabel) -> AbstractTile {
    let code = SideCode::new(&[label], &[SideLabel::C]);
    AbstractTile::new(
        name,
        rect_units(0, 1, 0, 3),
        [(Cell::new(0, 2), code)].into(),
        [(Cell::new(0, 0), code)].into(),
    )
    .expect("linker is well formed")
}

pub fn build_linkers() -> (AbstractTile, AbstractTile) {
    (
        linker(A_LINKER, SideLabel::A),
        linker(B_LINKER, SideLabel::B),
    )
}

/// Lower, middle and upper parts in one frame: the lower part fills
/// `v in 0..3`, the middle part is the column `u = E, v in 3..6`, the upper
/// part fills `v in 6..9`, and `u` runs over `0..L`. The two excavations on
/// either side of the middle part receive the ends of encoders.
pub fn build_locator(ws: &WangSet) -> (AbstractTile, AbstractTile, AbstractTile) {
    let f = Formulas::new(ws);
    let (len, e) = (f.locator_len, f.excavation());
    let end = |u: i32| u == 0 || u == len - 1;
    let mut lower_nw = BTreeMap::new();
    let mut lower_se = BTreeMap::new();
    let mut upper_nw = BTreeMap::new();
    let mut upper_se = BTreeMap::new();
    for u in 0..len {
        let outer = if end(u) { selector() } else { corner_code() };
        let inner = if end(u) {
            selector()
        } else if u == e {
            glue_two()
        } else {
            edge_code()
        };
        lower_se.insert(Cell::new(u, 0), outer);
        lower_nw.insert(Cell::new(u, 2), if u == e { glue_two() } else { inner });
        upper_se.insert(Cell::new(u, 6), if u == e { glue_one() } else { inner });
        upper_nw.insert(Cell::new(u, 8), outer);
    }
    let lower = AbstractTile::new(LOCATOR_LOWER, rect_units(0, len, 0, 3), lower_nw, lower_se);
    let middle = AbstractTile::new(
        LOCATOR_MIDDLE,
        rect_units(e, 1, 3, 3),
        [(Cell::new(e, 5), glue_one())].into(),
        [(Cell::new(e, 3), glue_two())].into(),
    );
    let upper = AbstractTile::new(LOCATOR_UPPER, rect_units(0, len, 6, 3), upper_nw, upper_se);
    (
        lower.expect("lower locator is well formed"),
        middle.expect("middle locator is well formed"),
        upper.expect("upper locator is well formed"),
    )
}

/// One compiled piece. `origin` is where the bottom corner of unit `(0, 0)`
/// lands in the normalized polyomino.
#[derive(Clone, Debug)]
pub struct CompiledPiece {
    pub name: String,
    pub tile: Option<AbstractTile>,
    pub polyomino: Polyomino,
    pub origin: Cell,
}

impl CompiledPiece {
    /// Translation that puts the normalized polyomino at abstract offset `offset`.
    pub fn translation(&self, offset: Unit) -> Cell {
        let (i, j) = level3_vectors(ORDER, SIDE);
        offset.x * i + offset.y * j - self.origin
    }
}

#[derive(Clone, Debug)]
pub struct TileSet7 {
    pub pieces: Vec<CompiledPiece>,
    pub formulas: Formulas,
}

impl TileSet7 {
    pub fn piece(&self, name: &str) -> &CompiledPiece {
        self.pieces
            .iter()
            .find(|p| p.name == name)
            .unwrap_or_else(|| panic!("no piece {name}"))
    }

    /// The six abstract tiles, in registry order.
    pub fn abstract_tiles(&self) -> Vec<AbstractTile> {
        self.pieces.iter().filter_map(|p| p.tile.clone()).collect()
    }

    pub fn polyominoes(&self) -> Vec<&Polyomino> {
        self.pieces.iter().map(|p| &p.polyomino).collect()
    }

    /// Every code carried by the six big pieces, without repeats.
    pub fn emitted_codes(&self) -> BTreeSet<SideCode> {
        self.pieces
            .iter()
            .filter_map(|p| p.tile.as_ref())
            .flat_map(|t| t.codes())
            .collect()
    }

    /// The three partial locators realized in their shared frame and glued.
    pub fn glued_locator(&self) -> Result<Polyomino, CompileError> {
        let parts: Vec<Polyomino> = [LOCATOR_LOWER, LOCATOR_MIDDLE, LOCATOR_UPPER]
            .iter()
            .map(|n| {
                let p = self.piece(n);
                p.polyomino.translate(-p.origin)
            })
            .collect();
        Ok(union_disjoint(&parts)?)
    }

    pub fn manifest(&self) -> String {
        let f = &self.formulas;
        let mut s = String::new();
        let _ = writeln!(s, "tiles n = {}", f.n);
        let _ = writeln!(s, "colors m = {}", f.m);
        let _ = writeln!(s, "bits t = max(1, ceil(log2 m)) = {}", f.t);
        let _ = writeln!(s, "segment n(t+1)+1 = {}", f.segment);
        let _ = writeln!(s, "padding (n-1)(t+1)+1 = {}", f.padding);
        let _ = writeln!(s, "encoder length (3n-1)(t+1)+3 = {}", f.encoder_len);
        let _ = writeln!(s, "locator length 2(n-1)(t+1)+3 = {}", f.locator_len);
        let _ = writeln!(s, "excavation depth (n-1)(t+1)+1 = {}", f.excavation());
        let _ = writeln!(s, "level-3 order = ({ORDER}, {SIDE})");
        for p in &self.pieces {
            let units = p.tile.as_ref().map_or(0, |t| t.len());
            let dims = p.tile.as_ref().map_or((0, 0), |t| t.dims());
            let _ = writeln!(
                s,
                "piece {} units {} dims {}x{} cells {} origin {} {}",
                p.name,
                units,
                dims.0,
                dims.1,
                p.polyomino.len(),
                p.origin.x,
                p.origin.y
            );
        }
        s
    }
}

/// Level-3 specs of every unit of `tile` at abstract offset `offset`.
pub fn unit_specs(tile: &AbstractTile, offset: Unit) -> Vec<Level3Spec> {
    let (i, j) = level3_vectors(ORDER, SIDE);
    tile.units
        .iter()
        .map(|&u| {
            let g = u + offset;
            Level3Spec::coded(
                g.x * i + g.y * j,
                tile.code(u, blocks::Side::Nw),
                tile.code(u, blocks::Side::Se),
            )
        })
        .collect()
}

pub fn realize_tile(tile: &AbstractTile) -> Result<CompiledPiece, CompileError> {
    let raw = realize_many(&unit_specs(tile, Cell::ORIGIN))?;
    let origin = raw.normalizing_shift();
    Ok(CompiledPiece {
        name: tile.name.clone(),
        tile: Some(tile.clone()),
        polyomino: raw.translate(origin),
        origin,
    })
}

/// The six abstract tiles in registry order: encoder, A-linker, B-linker,
/// then the lower, middle and upper locator parts.
pub fn abstract_tiles(ws: &WangSet) -> Vec<AbstractTile> {
    let (a, b) = build_linkers();
    let (lo, mid, up) = build_locator(ws);
    vec![build_encoder(ws), a, b, lo, mid, up]
}

pub fn compile(ws: &WangSet) -> Result<TileSet7, CompileError> {
    compile_with_jobs(ws, 1)
}

/// Realizes the six big pieces on up to `jobs` threads. The result does not
/// depend on `jobs`.
pub fn compile_with_jobs(ws: &WangSet, jobs: usize) -> Result<TileSet7, CompileError> {
    let tiles = abstract_tiles(ws);
    let realized: Vec<Result<CompiledPiece, CompileError>> = if jobs <= 1 {
        tiles.iter().map(realize_tile).collect()
    } else {
        let chunk = tiles.len().div_ceil(jobs);
        std::thread::scope(|s| {
            let handles: Vec<_> = tiles
                .chunks(chunk)
                .map(|c| s.spawn(move || c.iter().map(realize_tile).collect::<Vec<_>>()))
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("realization thread"))
                .collect()
        })
    };
    let filler = tiny_filler();
    let mut pieces = vec![CompiledPiece {
        name: TINY_FILLER.to_string(),
        tile: None,
        polyomino: filler,
        origin: Cell::ORIGIN,
    }];
    for r in realized {
        pieces.push(r?);
    }
    Ok(TileSet7 {
        pieces,
        formulas: Formulas::new(ws),
    })
}

/// Edge colors `(top, bottom, left, right)` of every tile as read back from
/// the encoder's codes.
pub fn decode_encoder(encoder: &AbstractTile, f: &Formulas) -> Option<Vec<[u32; 4]>> {
    let read = |u0: i32, v: i32, side: blocks::Side| {
        let codes: Option<Vec<SideCode>> = (0..f.t)
            .map(|j| encoder.code(Cell::new(u0 + j, v), side))
            .collect();
        decode_color(&codes?)
    };
    (0..f.n)
        .map(|k| {
            let bl = f.bottom_left_block(k);
            let tr = f.top_right_block(k);
            Some([
                read(tr, 2, blocks::Side::Nw)?,
                read(bl, 0, blocks::Side::Se)?,
                read(bl, 2, blocks::Side::Nw)?,
                read(tr, 0, blocks::Side::Se)?,
            ])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wang::WangTile;

    #[test]
    fn color_codes() {
        let ca = bit_code(false);
        let cb = bit_code(true);
        assert_eq!(color_code(0, 2).unwrap(), vec![ca, ca]);
        assert_eq!(color_code(1, 2).unwrap(), vec![ca, cb]);
        assert_eq!(color_code(2, 2).unwrap(), vec![cb, ca]);
        assert_eq!(color_code(3, 2).unwrap(), vec![cb, cb]);
        assert_eq!(color_code(0, 1).unwrap(), vec![ca]);
        assert!(color_code(4, 2).is_err());
        assert_eq!(ca.to_string(), "{C|A}");
    }

    #[test]
    fn sample_formulas() {
        let f = Formulas::new(&WangSet::sample());
        assert_eq!(
            (f.segment, f.padding, f.encoder_len, f.locator_len),
            (10, 7, 27, 15)
        );
        assert_eq!(f.encoder_len, 2 * f.segment + f.padding);
        // The units strictly between the two portions of a tile span the locator.
        for k in 0..f.n {
            assert_eq!(
                f.top_right_block(k) - (f.bottom_left_block(k) + f.t),
                f.locator_len
            );
        }
    }

    #[test]
    fn encoder_markers_sit_between_blocks() {
        let ws = WangSet::sample();
        let enc = build_encoder(&ws);
        let markers: Vec<i32> = (0..27)
            .filter(|&u| enc.code(Cell::new(u, 0), blocks::Side::Se) == Some(marker()))
            .collect();
        assert_eq!(markers, vec![0, 3, 6, 9, 17, 20, 23, 26]);
        assert!(enc.fully_coded());
    }

    #[test]
    fn encoder_round_trip() {
        let ws = WangSet::new(
            vec![WangTile::new(4, 1, 2, 3), WangTile::new(0, 5, 1, 4)],
            6,
        )
        .unwrap();
        let f = Formulas::new(&ws);
        let got = decode_encoder(&build_encoder(&ws), &f).unwrap();
        assert_eq!(got, vec![[4, 1, 2, 3], [0, 5, 1, 4]]);
    }

    #[test]
    fn locator_shapes() {
        let ws = WangSet::sample();
        let (lo, mid, up) = build_locator(&ws);
        assert_eq!((lo.len(), mid.len(), up.len()), (45, 3, 45));
        assert_eq!(lo.dims(), (15, 3));
        assert_eq!(mid.dims(), (1, 3));
        for t in [&lo, &mid, &up] {
            assert!(t.fully_coded(), "{}", t.name);
        }
    }

    #[test]
    fn linkers_are_fixed() {
        let (a, b) = build_linkers();
        assert_eq!(
            a.codes().map(|c| c.to_string()).collect::<Vec<_>>(),
            vec!["{A|C}", "{A|C}"]
        );
        assert_eq!(
            b.codes().map(|c| c.to_string()).collect::<Vec<_>>(),
            vec!["{B|C}", "{B|C}"]
        );
        assert_eq!(a.len(), 3);
    }
}
