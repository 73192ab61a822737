//! Tiles and tilings at the granularity of level-3 squares ("units").
//!
//! A unit position `(u, v)` stands for the level-3 square with bottom corner
//! `u*I + v*J`. The NW neighbour of `(u, v)` is `(u, v+1)` and the SE
//! neighbour is `(u, v-1)`; NE/SW contacts are always plain against plain.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::blocks::{side_decorations, Kind, Side, SideCode, SideLabel, SIDE_LEN};
use crate::grid::Cell;
use crate::lattice::Lattice;

/// Level-3 lattice position, `x` for `u` and `y` for `v`.
pub type Unit = Cell;

pub const NW: Unit = Cell::new(0, 1);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AbstractError {
    #[error("tile {tile}: {msg}")]
    BadTile { tile: String, msg: String },
    #[error("{se} cannot sit above {nw}")]
    Incompatible { se: SideCode, nw: SideCode },
    #[error("search stopped after {0} nodes")]
    ResourceExhausted(u64),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbstractTile {
    pub name: String,
    pub units: BTreeSet<Unit>,
    pub nw_codes: BTreeMap<Unit, SideCode>,
    pub se_codes: BTreeMap<Unit, SideCode>,
}

impl AbstractTile {
    pub fn new(
        name: &str,
        units: BTreeSet<Unit>,
        nw_codes: BTreeMap<Unit, SideCode>,
        se_codes: BTreeMap<Unit, SideCode>,
    ) -> Result<Self, AbstractError> {
        let bad = |msg: String| AbstractError::BadTile {
            tile: name.to_string(),
            msg,
        };
        if units.is_empty() {
            return Err(bad("no units".into()));
        }
        for &u in nw_codes.keys() {
            if !units.contains(&u) || units.contains(&(u + NW)) {
                return Err(bad(format!("NW code at {u} is not on the NW boundary")));
            }
        }
        for &u in se_codes.keys() {
            if !units.contains(&u) || units.contains(&(u - NW)) {
                return Err(bad(format!("SE code at {u} is not on the SE boundary")));
            }
            if nw_codes.contains_key(&u) {
                return Err(bad(format!("unit {u} carries both NW and SE codes")));
            }
        }
        Ok(AbstractTile {
            name: name.to_string(),
            units,
            nw_codes,
            se_codes,
        })
    }

    /// Rectangle of units `u in 0..len`, `v in 0..width`, without codes.
    pub fn strip(name: &str, len: i32, width: i32) -> Self {
        let units = (0..len)
            .flat_map(|u| (0..width).map(move |v| Cell::new(u, v)))
            .collect();
        AbstractTile::new(name, units, BTreeMap::new(), BTreeMap::new()).expect("plain strip")
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    /// Extent along `u` and along `v`.
    pub fn dims(&self) -> (i32, i32) {
        let us = self.units.iter().map(|c| c.x);
        let vs = self.units.iter().map(|c| c.y);
        let (u0, u1) = (us.clone().min().unwrap(), us.max().unwrap());
        let (v0, v1) = (vs.clone().min().unwrap(), vs.max().unwrap());
        (u1 - u0 + 1, v1 - v0 + 1)
    }

    pub fn code(&self, unit: Unit, side: Side) -> Option<SideCode> {
        match side {
            Side::Nw => self.nw_codes.get(&unit).copied(),
            Side::Se => self.se_codes.get(&unit).copied(),
        }
    }

    /// Every exposed NW and SE side carries a code.
    pub fn fully_coded(&self) -> bool {
        self.units.iter().all(|&u| {
            (self.units.contains(&(u + NW)) || self.nw_codes.contains_key(&u))
                && (self.units.contains(&(u - NW)) || self.se_codes.contains_key(&u))
        })
    }

    /// All codes, NW first, each in unit order.
    pub fn codes(&self) -> impl Iterator<Item = SideCode> + '_ {
        self.nw_codes
            .values()
            .chain(self.se_codes.values())
            .copied()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbstractPlacement {
    pub tile: usize,
    pub offset: Unit,
}

/// Whether `s` (an SE side) can sit on `t` (an NW side) without overlap.
pub fn compatible(s: SideCode, t: SideCode) -> bool {
    s.left.is_subset(t.right) && t.left.is_subset(s.right)
}

/// Label of the `k`-th diamond along a side, when it belongs to part one or
/// part three.
pub fn slot_label(k: usize) -> Option<SideLabel> {
    use SideLabel::*;
    match k {
        0..=4 => Some([A, B, C, L, M][k]),
        17..=21 => Some([M, L, C, B, A][k - 17]),
        _ => None,
    }
}

/// Diamonds along `s`'s SE side (clockwise index) that meet a dent of `t`'s
/// NW side with a dent of their own.
pub fn filler_needs(s: SideCode, t: SideCode) -> Result<Vec<usize>, AbstractError> {
    if !compatible(s, t) {
        return Err(AbstractError::Incompatible { se: s, nw: t });
    }
    let a = side_decorations(s, Side::Se);
    let b = side_decorations(t, Side::Nw);
    Ok((0..SIDE_LEN)
        .filter(|&k| a[k] == Kind::Dent && b[SIDE_LEN - 1 - k] == Kind::Dent)
        .collect())
}

/// Where a tiny filler is needed: below the upper unit's SE side at the given index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FillerPosition {
    pub upper: Unit,
    pub index: usize,
}

impl FillerPosition {
    pub fn label(&self) -> Option<SideLabel> {
        slot_label(self.index)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Overlap {
        unit: Unit,
        placements: Vec<usize>,
    },
    Uncovered {
        unit: Unit,
    },
    SelfOverlap {
        placement: usize,
    },
    Uncoded {
        upper: Unit,
        side: Side,
    },
    Incompatible {
        upper: Unit,
        se: SideCode,
        nw: SideCode,
    },
    UnknownTile {
        placement: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Overlap { unit, placements } => {
                write!(f, "overlap at {unit} by placements {placements:?}")
            }
            Violation::Uncovered { unit } => write!(f, "uncovered {unit}"),
            Violation::SelfOverlap { placement } => {
                write!(f, "placement {placement} wraps onto itself")
            }
            Violation::Uncoded { upper, side } => {
                write!(f, "uncoded {side} side in contact below {upper}")
            }
            Violation::Incompatible { upper, se, nw } => {
                write!(f, "incompatible contact below {upper}: {se} over {nw}")
            }
            Violation::UnknownTile { placement } => {
                write!(f, "placement {placement} names no tile")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AssemblyReport {
    /// Every covered unit with the placement covering it (the first, if several).
    pub covered: BTreeMap<Unit, usize>,
    pub violations: Vec<Violation>,
    /// Every NW/SE contact between distinct placements: upper unit, upper
    /// placement, lower placement and the two codes.
    pub contacts: Vec<Contact>,
    pub filler_positions: Vec<FillerPosition>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Contact {
    pub upper: Unit,
    pub upper_placement: usize,
    pub lower_placement: usize,
    pub se: Option<SideCode>,
    pub nw: Option<SideCode>,
}

impl AssemblyReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn conflicts(&self) -> impl Iterator<Item = &Violation> {
        self.violations
            .iter()
            .filter(|v| matches!(v, Violation::Overlap { .. } | Violation::SelfOverlap { .. }))
    }

    pub fn incompatibilities(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| {
            matches!(
                v,
                Violation::Incompatible { .. } | Violation::Uncoded { .. }
            )
        })
    }
}

impl fmt::Display for AssemblyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "units {} contacts {} fillers {} violations {}",
            self.covered.len(),
            self.contacts.len(),
            self.filler_positions.len(),
            self.violations.len()
        )?;
        for v in &self.violations {
            writeln!(f, "violation {v}")?;
        }
        Ok(())
    }
}

/// Where an assembly lives: a window of the plane, or a torus. Placements may
/// cross the frontier of an open window but must stay inside a closed one.
#[derive(Clone, Debug)]
pub enum Space {
    Window { units: BTreeSet<Unit>, open: bool },
    Torus(Lattice),
}

impl Space {
    fn canon(&self, u: Unit) -> Unit {
        match self {
            Space::Window { .. } => u,
            Space::Torus(l) => l.reduce(u),
        }
    }

    /// Units that must be covered exactly once, in increasing order.
    pub fn targets(&self) -> Vec<Unit> {
        match self {
            Space::Window { units, .. } => units.iter().copied().collect(),
            Space::Torus(l) => {
                let mut v: Vec<Unit> = (0..l.area() as usize)
                    .map(|i| l.representative(i))
                    .collect();
                v.sort();
                v
            }
        }
    }

    fn in_scope(&self, u: Unit) -> bool {
        match self {
            Space::Window { units, .. } => units.contains(&u),
            Space::Torus(_) => true,
        }
    }
}

pub fn verify_assembly(
    tiles: &[AbstractTile],
    placements: &[AbstractPlacement],
    window: &BTreeSet<Unit>,
) -> AssemblyReport {
    verify_in(
        tiles,
        placements,
        &Space::Window {
            units: window.clone(),
            open: true,
        },
    )
}

pub fn verify_in(
    tiles: &[AbstractTile],
    placements: &[AbstractPlacement],
    space: &Space,
) -> AssemblyReport {
    let mut report = AssemblyReport::default();
    let mut owners: HashMap<Unit, Vec<(usize, Unit)>> = HashMap::new();
    for (pi, p) in placements.iter().enumerate() {
        let Some(tile) = tiles.get(p.tile) else {
            report
                .violations
                .push(Violation::UnknownTile { placement: pi });
            continue;
        };
        let mut seen = BTreeSet::new();
        for &u in &tile.units {
            let g = space.canon(u + p.offset);
            if !seen.insert(g) {
                report
                    .violations
                    .push(Violation::SelfOverlap { placement: pi });
                break;
            }
            owners.entry(g).or_default().push((pi, u));
        }
    }
    let mut keys: Vec<Unit> = owners.keys().copied().collect();
    keys.sort();
    for &g in &keys {
        let list = &owners[&g];
        report.covered.insert(g, list[0].0);
        if list.len() > 1 {
            report.violations.push(Violation::Overlap {
                unit: g,
                placements: list.iter().map(|o| o.0).collect(),
            });
        }
    }
    for unit in space.targets() {
        if !owners.contains_key(&unit) {
            report.violations.push(Violation::Uncovered { unit });
        }
    }
    for &g in &keys {
        let below = space.canon(g - NW);
        if !space.in_scope(g) && !space.in_scope(below) {
            continue;
        }
        let (Some(up), Some(down)) = (owners.get(&g), owners.get(&below)) else {
            continue;
        };
        let ((pu, lu), (pd, ld)) = (up[0], down[0]);
        if pu == pd && tiles[placements[pu].tile].units.contains(&(lu - NW)) {
            continue;
        }
        let se = tiles[placements[pu].tile].code(lu, Side::Se);
        let nw = tiles[placements[pd].tile].code(ld, Side::Nw);
        report.contacts.push(Contact {
            upper: g,
            upper_placement: pu,
            lower_placement: pd,
            se,
            nw,
        });
        match (se, nw) {
            (Some(s), Some(t)) => {
                if compatible(s, t) {
                    for index in filler_needs(s, t).expect("compatible") {
                        report
                            .filler_positions
                            .push(FillerPosition { upper: g, index });
                    }
                } else {
                    report.violations.push(Violation::Incompatible {
                        upper: g,
                        se: s,
                        nw: t,
                    });
                }
            }
            (None, _) => report.violations.push(Violation::Uncoded {
                upper: g,
                side: Side::Se,
            }),
            (_, None) => report.violations.push(Violation::Uncoded {
                upper: g,
                side: Side::Nw,
            }),
        }
    }
    report
}

/// Search limits.
#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    pub node_limit: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_limit: 2_000_000,
        }
    }
}

struct Prepared {
    units: Vec<Unit>,
    /// Per unit: NW code if the NW side is exposed, `Err(())` when exposed
    /// but uncoded, `None` when interior.
    nw: Vec<Option<Option<SideCode>>>,
    se: Vec<Option<Option<SideCode>>>,
}

fn prepare(t: &AbstractTile) -> Prepared {
    let units: Vec<Unit> = t.units.iter().copied().collect();
    let side = |u: Unit, d: Unit, s: Side| {
        if t.units.contains(&(u + d)) {
            None
        } else {
            Some(t.code(u, s))
        }
    };
    Prepared {
        nw: units.iter().map(|&u| side(u, NW, Side::Nw)).collect(),
        se: units.iter().map(|&u| side(u, -NW, Side::Se)).collect(),
        units,
    }
}

struct Search<'a> {
    tiles: &'a [Prepared],
    space: &'a Space,
    /// Occupied unit -> (tile, local unit index).
    occ: HashMap<Unit, (usize, usize)>,
    open: BTreeSet<Unit>,
    placed: Vec<AbstractPlacement>,
    nodes: u64,
    limit: u64,
}

impl Search<'_> {
    fn fits(&self, ti: usize, offset: Unit) -> bool {
        let t = &self.tiles[ti];
        let mut mine: Vec<Unit> = Vec::with_capacity(t.units.len());
        for &u in &t.units {
            let g = self.space.canon(u + offset);
            if self.occ.contains_key(&g) {
                return false;
            }
            if let Space::Window { open: false, units } = self.space {
                if !units.contains(&g) {
                    return false;
                }
            }
            mine.push(g);
        }
        if let Space::Torus(_) = self.space {
            let mut s = mine.clone();
            s.sort();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return false;
            }
        }
        for (k, &g) in mine.iter().enumerate() {
            if let Some(my) = t.nw[k] {
                if let Some(&(oti, ok)) = self.occ.get(&self.space.canon(g + NW)) {
                    match (self.tiles[oti].se[ok], my) {
                        (Some(Some(s)), Some(n)) if compatible(s, n) => {}
                        _ => return false,
                    }
                }
            }
            if let Some(my) = t.se[k] {
                if let Some(&(oti, ok)) = self.occ.get(&self.space.canon(g - NW)) {
                    match (my, self.tiles[oti].nw[ok]) {
                        (Some(s), Some(Some(n))) if compatible(s, n) => {}
                        _ => return false,
                    }
                }
            }
        }
        true
    }

    fn candidates(&self, target: Unit, cap: usize) -> Vec<AbstractPlacement> {
        let mut out = Vec::new();
        for (ti, t) in self.tiles.iter().enumerate() {
            for &u in &t.units {
                let offset = target - u;
                if self.fits(ti, offset) {
                    out.push(AbstractPlacement { tile: ti, offset });
                    if out.len() > cap {
                        return out;
                    }
                }
            }
        }
        out
    }

    fn place(&mut self, p: AbstractPlacement) {
        for (k, &u) in self.tiles[p.tile].units.iter().enumerate() {
            let g = self.space.canon(u + p.offset);
            self.occ.insert(g, (p.tile, k));
            self.open.remove(&g);
        }
        self.placed.push(p);
    }

    fn unplace(&mut self) {
        let p = self.placed.pop().expect("something placed");
        for &u in &self.tiles[p.tile].units {
            let g = self.space.canon(u + p.offset);
            self.occ.remove(&g);
            if self.space.in_scope(g) {
                self.open.insert(g);
            }
        }
    }

    /// Open target with fewest candidates among those touching placed units,
    /// or the least open target when nothing touches.
    fn choose(&self) -> Option<(Unit, Vec<AbstractPlacement>)> {
        let mut best: Option<(Unit, Vec<AbstractPlacement>)> = None;
        for &g in &self.open {
            let touching = [NW, -NW, Cell::new(1, 0), Cell::new(-1, 0)]
                .iter()
                .any(|&d| self.occ.contains_key(&self.space.canon(g + d)));
            if !touching {
                continue;
            }
            let cap = best.as_ref().map_or(usize::MAX, |b| b.1.len());
            let c = self.candidates(g, cap);
            if best.as_ref().is_none_or(|b| c.len() < b.1.len()) {
                let done = c.len() <= 1;
                best = Some((g, c));
                if done {
                    break;
                }
            }
        }
        if best.is_none() {
            let &g = self.open.iter().next()?;
            best = Some((g, self.candidates(g, usize::MAX)));
        }
        best
    }

    fn run(&mut self) -> Result<bool, AbstractError> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(AbstractError::ResourceExhausted(self.limit));
        }
        let Some((_, cands)) = self.choose() else {
            return Ok(true);
        };
        for p in cands {
            self.place(p);
            if self.run()? {
                return Ok(true);
            }
            self.unplace();
        }
        Ok(false)
    }
}

/// Depth-first search for an exact cover of the space's targets. Tiles are
/// tried in registry order and anchor units in increasing order, so the
/// result is deterministic.
pub fn abstract_solve_in(
    tiles: &[AbstractTile],
    space: &Space,
    config: SearchConfig,
) -> Result<Option<Vec<AbstractPlacement>>, AbstractError> {
    let prepared: Vec<Prepared> = tiles.iter().map(prepare).collect();
    let mut s = Search {
        tiles: &prepared,
        space,
        occ: HashMap::new(),
        open: space.targets().into_iter().collect(),
        placed: Vec::new(),
        nodes: 0,
        limit: config.node_limit,
    };
    Ok(if s.run()? { Some(s.placed) } else { None })
}

pub fn abstract_solve(
    tiles: &[AbstractTile],
    window: &BTreeSet<Unit>,
) -> Result<Option<Vec<AbstractPlacement>>, AbstractError> {
    let space = Space::Window {
        units: window.clone(),
        open: false,
    };
    abstract_solve_in(tiles, &space, SearchConfig::default())
}

/// Writes `place <tile-name> <u> <v>` lines.
pub fn write_asm(tiles: &[AbstractTile], placements: &[AbstractPlacement]) -> String {
    placements
        .iter()
        .map(|p| {
            format!(
                "place {} {} {}\n",
                tiles[p.tile].name, p.offset.x, p.offset.y
            )
        })
        .collect()
}

pub fn parse_asm(
    tiles: &[AbstractTile],
    text: &str,
) -> Result<Vec<AbstractPlacement>, AbstractError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| AbstractError::Parse {
            line: i + 1,
            msg: msg.to_string(),
        };
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 4 || f[0] != "place" {
            return Err(err("expected `place <tile> <u> <v>`"));
        }
        let tile = tiles
            .iter()
            .position(|t| t.name == f[1])
            .ok_or_else(|| err(&format!("unknown tile `{}`", f[1])))?;
        let u = f[2].parse().map_err(|_| err("bad u"))?;
        let v = f[3].parse().map_err(|_| err("bad v"))?;
        out.push(AbstractPlacement {
            tile,
            offset: Cell::new(u, v),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> SideCode {
        s.parse().unwrap()
    }

    #[test]
    fn compatibility_examples() {
        assert!(compatible(c("{M|L}"), c("{L|M}")));
        assert!(!compatible(c("{M|L}"), c("{M|L}")));
        assert!(compatible(c("{C|A}"), c("{A|C}")));
        assert!(!compatible(c("{C|B}"), c("{A|C}")));
    }

    #[test]
    fn filler_need_examples() {
        assert_eq!(
            filler_needs(c("{|}"), c("{|}")).unwrap(),
            Vec::<usize>::new()
        );
        let v = filler_needs(c("{|A,B,C,M}"), c("{|C,M}")).unwrap();
        let labels: Vec<_> = v.iter().map(|&k| slot_label(k).unwrap()).collect();
        use SideLabel::*;
        assert_eq!(labels, vec![C, M, M, C, B, A]);
        assert!(filler_needs(c("{M|L}"), c("{M|L}")).is_err());
        assert_eq!(
            filler_needs(c("{M|L}"), c("{L|M}")).unwrap(),
            Vec::<usize>::new()
        );
    }

    fn bar(name: &str, top: &str, bottom: &str) -> AbstractTile {
        let units: BTreeSet<Unit> = (0..3).map(|v| Cell::new(0, v)).collect();
        AbstractTile::new(
            name,
            units,
            [(Cell::new(0, 2), c(top))].into(),
            [(Cell::new(0, 0), c(bottom))].into(),
        )
        .unwrap()
    }

    #[test]
    fn tile_validation() {
        let units: BTreeSet<Unit> = (0..3).map(|v| Cell::new(0, v)).collect();
        let bad = AbstractTile::new(
            "x",
            units,
            [(Cell::new(0, 1), c("{|}"))].into(),
            BTreeMap::new(),
        );
        assert!(bad.is_err());
        assert!(bar("a", "{A|C}", "{A|C}").fully_coded());
    }

    #[test]
    fn stacked_linkers_conflict() {
        let tiles = vec![bar("a", "{A|C}", "{A|C}")];
        let window: BTreeSet<Unit> = (0..6).map(|v| Cell::new(0, v)).collect();
        let p = |v| AbstractPlacement {
            tile: 0,
            offset: Cell::new(0, v),
        };
        let r = verify_assembly(&tiles, &[p(0), p(3)], &window);
        assert!(r.incompatibilities().count() == 1);
        let r = verify_assembly(&tiles, &[p(0), p(2)], &window);
        assert!(r.conflicts().count() > 0);
        assert!(abstract_solve(&tiles, &window).unwrap().is_none());
    }

    #[test]
    fn solve_trivial_windows() {
        let strip = AbstractTile::strip("s", 3, 1);
        let window: BTreeSet<Unit> = strip.units.clone();
        let sol = abstract_solve(std::slice::from_ref(&strip), &window)
            .unwrap()
            .unwrap();
        assert_eq!(
            sol,
            vec![AbstractPlacement {
                tile: 0,
                offset: Cell::ORIGIN
            }]
        );
        let two: BTreeSet<Unit> = [Cell::new(0, 0), Cell::new(1, 0)].into();
        let a = bar("a", "{A|C}", "{A|C}");
        let r = verify_assembly(std::slice::from_ref(&a), &[], &two);
        assert_eq!(r.violations.len(), 2);
        assert_eq!(abstract_solve(&[a], &two).unwrap(), None);
    }

    #[test]
    fn asm_round_trip() {
        let tiles = vec![bar("a", "{A|C}", "{A|C}"), bar("b", "{B|C}", "{B|C}")];
        let ps = vec![
            AbstractPlacement {
                tile: 1,
                offset: Cell::new(3, -2),
            },
            AbstractPlacement {
                tile: 0,
                offset: Cell::new(0, 0),
            },
        ];
        let text = write_asm(&tiles, &ps);
        assert_eq!(parse_asm(&tiles, &text).unwrap(), ps);
        assert!(parse_asm(&tiles, "place z 0 0").is_err());
    }
}
