//! Diamonds (level-2 squares), their lattice arrangements (level-3 squares),
//! side decorations and the tiny filler.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

use crate::grid::{Cell, CellSet, GridError, Polyomino, SpanBuffer};

/// Diamond order used by every compiled piece.
pub const ORDER: i32 = 13;
/// Diamonds along one side of a compiled level-3 square.
pub const SIDE: i32 = 22;
pub const SIDE_LEN: usize = SIDE as usize;

const TABLE: &str = include_str!("../data/decorations.txt");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlockError {
    #[error("{0}")]
    Domain(String),
    #[error("decorations exist only for order-13 diamonds")]
    UnsupportedOrder,
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Nw,
    Se,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Nw => "NW",
            Side::Se => "SE",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Dent,
    Bump,
    Plain,
}

impl Kind {
    pub fn bit(self) -> char {
        match self {
            Kind::Dent => '0',
            Kind::Bump => '1',
            Kind::Plain => '-',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Decoration {
    pub kind: Kind,
    pub side: Side,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SideLabel {
    A,
    B,
    C,
    L,
    M,
}

impl SideLabel {
    pub const ALL: [SideLabel; 5] = [
        SideLabel::A,
        SideLabel::B,
        SideLabel::C,
        SideLabel::L,
        SideLabel::M,
    ];

    fn bit(self) -> u8 {
        1 << self as u8
    }

    pub fn letter(self) -> char {
        ['A', 'B', 'C', 'L', 'M'][self as usize]
    }
}

/// Subset of {A, B, C, L, M}.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelSet(u8);

impl LabelSet {
    pub const EMPTY: LabelSet = LabelSet(0);

    pub fn of(labels: &[SideLabel]) -> Self {
        LabelSet(labels.iter().fold(0, |acc, l| acc | l.bit()))
    }

    pub fn contains(self, l: SideLabel) -> bool {
        self.0 & l.bit() != 0
    }

    pub fn is_subset(self, other: LabelSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = SideLabel> {
        SideLabel::ALL
            .into_iter()
            .filter(move |l| self.contains(*l))
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", l.letter())?;
        }
        Ok(())
    }
}

/// Label of one NW or SE side of a level-3 square: `left` lists the bumps of
/// part one, `right` the dents of part three.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SideCode {
    pub left: LabelSet,
    pub right: LabelSet,
}

impl SideCode {
    pub fn new(left: &[SideLabel], right: &[SideLabel]) -> Self {
        SideCode {
            left: LabelSet::of(left),
            right: LabelSet::of(right),
        }
    }
}

impl fmt::Display for SideCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}|{}}}", self.left, self.right)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("malformed side code `{0}`")]
pub struct CodeParseError(pub String);

impl FromStr for SideCode {
    type Err = CodeParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CodeParseError(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(bad)?;
        let (l, r) = inner.split_once('|').ok_or_else(bad)?;
        let parse = |part: &str| -> Result<LabelSet, CodeParseError> {
            let mut set = LabelSet::EMPTY;
            for tok in part.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let label = match tok {
                    "A" => SideLabel::A,
                    "B" => SideLabel::B,
                    "C" => SideLabel::C,
                    "L" => SideLabel::L,
                    "M" => SideLabel::M,
                    _ => return Err(bad()),
                };
                set.0 |= label.bit();
            }
            Ok(set)
        };
        Ok(SideCode {
            left: parse(l)?,
            right: parse(r)?,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Level2Spec {
    pub order: i32,
    pub center: Cell,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Level3Spec {
    pub order: (i32, i32),
    pub bottom_corner: Cell,
    pub nw_code: Option<SideCode>,
    pub se_code: Option<SideCode>,
}

impl Level3Spec {
    pub fn plain(order: (i32, i32), bottom_corner: Cell) -> Self {
        Level3Spec {
            order,
            bottom_corner,
            nw_code: None,
            se_code: None,
        }
    }

    pub fn coded(
        bottom_corner: Cell,
        nw_code: Option<SideCode>,
        se_code: Option<SideCode>,
    ) -> Self {
        Level3Spec {
            order: (ORDER, SIDE),
            bottom_corner,
            nw_code,
            se_code,
        }
    }
}

fn check_order(a: i32) -> Result<(), BlockError> {
    if a < 1 {
        Err(BlockError::Domain(format!(
            "order must be positive, got {a}"
        )))
    } else {
        Ok(())
    }
}

fn diamond_set(a: i32, center: Cell) -> CellSet {
    CellSet::from_spans((1 - a..a).map(|dy| {
        let half = a - 1 - dy.abs();
        (center.y + dy, center.x - half, center.x + half + 1)
    }))
}

/// Cells with `|x| + |y| < a`.
pub fn level2(a: i32) -> Result<Polyomino, BlockError> {
    check_order(a)?;
    Ok(Polyomino::from_set(diamond_set(a, Cell::ORIGIN))?)
}

pub fn level2_at(spec: Level2Spec) -> Result<Polyomino, BlockError> {
    Ok(level2(spec.order)?.translate(spec.center))
}

/// Neighbouring diamond displacements `i = (a, a-1)` and `j = (1-a, a)`.
pub fn level2_vectors(a: i32) -> (Cell, Cell) {
    (Cell::new(a, a - 1), Cell::new(1 - a, a))
}

/// Neighbouring level-3 square displacements `I = b*i` and `J = b*j`.
pub fn level3_vectors(a: i32, b: i32) -> (Cell, Cell) {
    let (i, j) = level2_vectors(a);
    (b * i, b * j)
}

/// Diamond centres of a level-3 square whose bottom corner cell is the origin,
/// listed row by row (`y` outer, `x` inner).
pub fn level3_centers(a: i32, b: i32) -> Result<Vec<Cell>, BlockError> {
    check_order(a)?;
    if b < 1 {
        return Err(BlockError::Domain(format!(
            "side must be positive, got {b}"
        )));
    }
    let (i, j) = level2_vectors(a);
    let lift = Cell::new(0, a - 1);
    Ok((0..b)
        .flat_map(|y| (0..b).map(move |x| x * i + y * j + lift))
        .collect())
}

struct Table {
    deltas: [[CellSet; 2]; 2],
    outline: Vec<Cell>,
}

fn table() -> &'static Table {
    static T: OnceLock<Table> = OnceLock::new();
    T.get_or_init(|| {
        let mut sections: Vec<(String, Vec<Cell>)> = Vec::new();
        for line in TABLE.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                sections.push((name.to_string(), Vec::new()));
                continue;
            }
            let mut it = line
                .split_whitespace()
                .map(|t| t.parse::<i32>().expect("table entry"));
            let (x, y) = (it.next().unwrap(), it.next().unwrap());
            sections
                .last_mut()
                .expect("entry inside a section")
                .1
                .push(Cell::new(x, y));
        }
        let get = |name: &str| -> Vec<Cell> {
            sections
                .iter()
                .find(|(n, _)| n == name)
                .unwrap_or_else(|| panic!("section {name} missing"))
                .1
                .clone()
        };
        let set = |name: &str| CellSet::from_cells(get(name));
        Table {
            deltas: [
                [set("nw-dent"), set("nw-bump")],
                [set("se-dent"), set("se-bump")],
            ],
            outline: get("filler-outline"),
        }
    })
}

/// Offsets, relative to the diamond centre, removed by a dent or added by a bump.
pub fn decoration_delta(side: Side, kind: Kind) -> Option<&'static CellSet> {
    let s = match side {
        Side::Nw => 0,
        Side::Se => 1,
    };
    match kind {
        Kind::Dent => Some(&table().deltas[s][0]),
        Kind::Bump => Some(&table().deltas[s][1]),
        Kind::Plain => None,
    }
}

fn decorate(base: &CellSet, center: Cell, decos: &[Decoration]) -> CellSet {
    let mut out = base.clone();
    for d in decos {
        if let Some(delta) = decoration_delta(d.side, d.kind) {
            let moved = delta.translate(center);
            out = match d.kind {
                Kind::Dent => out.difference(&moved),
                _ => out.union(&moved),
            };
        }
    }
    out
}

/// Adds or removes the decoration on one side of an order-13 diamond.
pub fn apply_decoration(base: &Polyomino, side: Side, kind: Kind) -> Result<Polyomino, BlockError> {
    let (lo, _) = base.bounds();
    let center = lo + Cell::new(ORDER - 1, ORDER - 1);
    if base.as_set() != &diamond_set(ORDER, center) {
        return Err(BlockError::UnsupportedOrder);
    }
    let set = decorate(base.as_set(), center, &[Decoration { kind, side }]);
    Ok(Polyomino::from_set(set)?)
}

/// Vertices of the tiny filler outline, in the frame where the upper diamond
/// of the dent pair is centred at `(0, 12)`.
pub fn tiny_filler_outline() -> &'static [Cell] {
    &table().outline
}

fn fill_rectilinear(outline: &[Cell]) -> CellSet {
    let lo_y = outline.iter().map(|c| c.y).min().unwrap();
    let hi_y = outline.iter().map(|c| c.y).max().unwrap();
    let mut spans = Vec::new();
    for y in lo_y..hi_y {
        let mut xs: Vec<i32> = Vec::new();
        for k in 0..outline.len() {
            let (p, q) = (outline[k], outline[(k + 1) % outline.len()]);
            if p.x == q.x && p.y.min(q.y) <= y && y < p.y.max(q.y) {
                xs.push(p.x);
            }
        }
        xs.sort_unstable();
        for pair in xs.chunks(2) {
            spans.push((y, pair[0], pair[1]));
        }
    }
    CellSet::from_spans(spans)
}

fn filler_in_frame() -> &'static CellSet {
    static F: OnceLock<CellSet> = OnceLock::new();
    F.get_or_init(|| fill_rectilinear(tiny_filler_outline()))
}

pub fn tiny_filler() -> Polyomino {
    Polyomino::from_set(filler_in_frame().clone())
        .expect("outline encloses cells")
        .normalize()
}

/// Where the normalized tiny filler goes, relative to the centre of the upper
/// diamond of a dent-dent pair (the one whose SE side is dented).
pub fn filler_anchor() -> Cell {
    let (lo, _) = filler_in_frame().bounds().unwrap();
    lo - Cell::new(0, ORDER - 1)
}

/// The 22 decorations of a coded side, listed clockwise around the square.
pub fn side_decorations(code: SideCode, side: Side) -> [Kind; SIDE_LEN] {
    use SideLabel::*;
    let bump_if = |b: bool| if b { Kind::Bump } else { Kind::Dent };
    let mut out = [Kind::Dent; SIDE_LEN];
    for (k, l) in [A, B, C, L, M].into_iter().enumerate() {
        out[k] = bump_if(code.left.contains(l));
    }
    let middle = match side {
        Side::Nw => "011111111110",
        Side::Se => "100000000001",
    };
    for (k, ch) in middle.chars().enumerate() {
        out[5 + k] = bump_if(ch == '1');
    }
    for (k, l) in [M, L, C, B, A].into_iter().enumerate() {
        out[17 + k] = bump_if(!code.right.contains(l));
    }
    out
}

/// Grid position `(x, y)` inside a level-3 square of side `b` of the `k`-th
/// diamond along a side, counted clockwise.
pub fn side_position(side: Side, k: usize, b: i32) -> (i32, i32) {
    match side {
        Side::Nw => (k as i32, b - 1),
        Side::Se => (b - 1 - k as i32, 0),
    }
}

pub fn bits(seq: &[Kind]) -> String {
    seq.iter().map(|k| k.bit()).collect()
}

/// Realizes many level-3 squares at once and glues them. Part indices in an
/// overlap error count diamonds in input order.
pub fn realize_many(specs: &[Level3Spec]) -> Result<Polyomino, BlockError> {
    let mut buf = SpanBuffer::new();
    let mut part = 0usize;
    let mut plain_cache: Vec<(i32, CellSet)> = Vec::new();
    for spec in specs {
        let (a, b) = spec.order;
        let centers = level3_centers(a, b)?;
        let coded = spec.nw_code.is_some() || spec.se_code.is_some();
        if coded && spec.order != (ORDER, SIDE) {
            return Err(BlockError::UnsupportedOrder);
        }
        let plain = match plain_cache.iter().find(|(o, _)| *o == a) {
            Some((_, s)) => s.clone(),
            None => {
                let s = diamond_set(a, Cell::ORIGIN);
                plain_cache.push((a, s.clone()));
                s
            }
        };
        let nw = spec.nw_code.map(|c| side_decorations(c, Side::Nw));
        let se = spec.se_code.map(|c| side_decorations(c, Side::Se));
        for (idx, &c) in centers.iter().enumerate() {
            let (x, y) = (idx as i32 % b, idx as i32 / b);
            let mut decos = Vec::new();
            if let (Some(seq), true) = (&nw, y == b - 1) {
                decos.push(Decoration {
                    kind: seq[x as usize],
                    side: Side::Nw,
                });
            }
            if let (Some(seq), true) = (&se, y == 0) {
                decos.push(Decoration {
                    kind: seq[(b - 1 - x) as usize],
                    side: Side::Se,
                });
            }
            let at = spec.bottom_corner + c;
            if decos.is_empty() {
                buf.push_set(&plain, at, part);
            } else {
                buf.push_set(&decorate(&plain, Cell::ORIGIN, &decos), at, part);
            }
            part += 1;
        }
    }
    Ok(Polyomino::from_set(buf.into_disjoint()?)?)
}

pub fn realize_level3(spec: &Level3Spec) -> Result<Polyomino, BlockError> {
    realize_many(std::slice::from_ref(spec))
}

/// Every code the label alphabet allows, in a fixed order.
pub fn all_codes() -> Vec<SideCode> {
    let mut out = BTreeSet::new();
    for l in 0..32u8 {
        for r in 0..32u8 {
            out.insert(SideCode {
                left: LabelSet(l),
                right: LabelSet(r),
            });
        }
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(s: &str) -> SideCode {
        s.parse().unwrap()
    }

    #[test]
    fn diamond_counts() {
        assert_eq!(level2(1).unwrap().len(), 1);
        assert_eq!(level2(7).unwrap().len(), 85);
        assert_eq!(level2(13).unwrap().len(), 313);
        assert!(level2(0).is_err());
        for a in 1..20 {
            assert_eq!(level2(a).unwrap().len() as i32, a * a + (a - 1) * (a - 1));
        }
    }

    #[test]
    fn center_counts() {
        assert_eq!(level3_centers(7, 3).unwrap().len(), 9);
        assert_eq!(level3_centers(13, 22).unwrap().len(), 484);
        assert_eq!(level3_centers(5, 1).unwrap(), vec![Cell::new(0, 4)]);
        assert_eq!(
            level3_vectors(13, 22),
            (Cell::new(286, 264), Cell::new(-264, 286))
        );
    }

    #[test]
    fn plain_squares() {
        let small = realize_level3(&Level3Spec::plain((7, 3), Cell::ORIGIN)).unwrap();
        assert_eq!(small.len(), 765);
        let big = realize_level3(&Level3Spec::plain((13, 22), Cell::ORIGIN)).unwrap();
        assert_eq!(big.len(), 151_492);
        assert!(big.is_connected());
        let (lo, _) = big.bounds();
        assert_eq!(lo.y, 0);
        assert!(big.contains(Cell::ORIGIN));
    }

    #[test]
    fn code_bits() {
        assert_eq!(
            bits(&side_decorations(code("{A|C}"), Side::Nw)),
            "1000001111111111011011"
        );
        assert_eq!(
            bits(&side_decorations(code("{|}"), Side::Se)),
            "0000010000000000111111"
        );
        assert_eq!(
            bits(&side_decorations(code("{M|L}"), Side::Nw)),
            "0000101111111111010111"
        );
    }

    #[test]
    fn code_text_round_trip() {
        for c in all_codes() {
            assert_eq!(c.to_string().parse::<SideCode>().unwrap(), c);
        }
        assert_eq!(code("{L,M|A,L,M}").to_string(), "{L,M|A,L,M}");
        assert!("{Q|}".parse::<SideCode>().is_err());
        assert!("A|B".parse::<SideCode>().is_err());
    }

    #[test]
    fn filler_shape() {
        let f = tiny_filler();
        assert_eq!(f.len(), 51);
        assert!(f.is_orthogonally_convex());
        assert!(f.is_connected());
        assert_eq!((f.width(), f.height()), (9, 9));
        assert_eq!(f.boundary_word().unwrap().len(), 36);
        assert_eq!(filler_anchor(), Cell::new(2, -11));
    }

    #[test]
    fn deltas_have_expected_sizes() {
        let n = |s, k| decoration_delta(s, k).unwrap().len();
        assert_eq!(n(Side::Se, Kind::Dent), 21);
        assert_eq!(n(Side::Nw, Kind::Bump), 21);
        assert_eq!(n(Side::Se, Kind::Bump), 30);
        assert_eq!(n(Side::Nw, Kind::Dent), 30);
    }

    #[test]
    fn decoration_rejects_other_orders() {
        let d = level2(7).unwrap();
        assert_eq!(
            apply_decoration(&d, Side::Nw, Kind::Dent),
            Err(BlockError::UnsupportedOrder)
        );
    }

    fn pair(upper: Kind, lower: Kind) -> (Polyomino, Polyomino, CellSet) {
        let (_, j) = level2_vectors(ORDER);
        let top = Cell::new(0, ORDER - 1);
        let p = level2(ORDER).unwrap().translate(top);
        let q = p.translate(-j);
        let footprint = p.as_set().union(q.as_set());
        (
            apply_decoration(&p, Side::Se, upper).unwrap(),
            apply_decoration(&q, Side::Nw, lower).unwrap(),
            footprint,
        )
    }

    #[test]
    fn bump_fills_dent() {
        for (u, l) in [(Kind::Bump, Kind::Dent), (Kind::Dent, Kind::Bump)] {
            let (p, q, foot) = pair(u, l);
            assert!(!p.overlaps(&q));
            assert_eq!(p.as_set().union(q.as_set()), foot);
        }
    }

    #[test]
    fn dent_pair_leaves_filler() {
        let (p, q, foot) = pair(Kind::Dent, Kind::Dent);
        let gap = foot.difference(&p.as_set().union(q.as_set()));
        assert_eq!(&gap, filler_in_frame());
        let anchor = Cell::new(0, ORDER - 1) + filler_anchor();
        assert_eq!(tiny_filler().translate(anchor).as_set(), &gap);
    }

    #[test]
    fn bump_pair_overlaps() {
        let (p, q, _) = pair(Kind::Bump, Kind::Bump);
        assert!(p.overlaps(&q));
    }

    #[test]
    fn coded_squares_stay_convex() {
        for c in [
            "{A|C}",
            "{M|L}",
            "{|}",
            "{A,L,M|A,L,M}",
            "{C,L,M,A|A,B,C,M}",
        ] {
            let spec = Level3Spec::coded(Cell::ORIGIN, Some(code(c)), Some(code(c)));
            let sq = realize_level3(&spec).unwrap();
            assert!(sq.is_orthogonally_convex(), "{c}");
            assert!(sq.is_connected(), "{c}");
        }
    }
}
