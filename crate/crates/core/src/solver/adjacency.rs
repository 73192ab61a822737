//! Two tiny fillers never touch along an edge in a tiling by the seven pieces.
//!
//! Each edge-adjacent pair is refuted by a bounded search: pick the cell near
//! the pair with the fewest ways to be covered, and refute every way in turn.
//! A way is either another filler or a big piece seen through its local
//! shape: one of the distinct `(2r+1)`-square windows around a cell of some
//! big piece. Only windows around cells within `r` of the piece boundary are
//! kept; a deeper cell would bring the whole window inside the piece, which
//! must then meet the occupied cell next to it. Occupied cells outside a
//! window are ignored and big pieces are only placed partially, so the search
//! can only ever admit too much, never refute too much.

use std::collections::{BTreeSet, HashSet};

use crate::compiler::TileSet7;
use crate::grid::{Cell, CellSet, Polyomino};

#[derive(Clone, Copy, Debug)]
pub struct AdjacencyConfig {
    /// Half side of the local windows.
    pub radius: i32,
    /// Pieces that may be added around a pair before a branch counts as
    /// unresolved.
    pub max_pieces: usize,
    /// Only cells within this distance of the pair are forced.
    pub focus: i32,
    /// Search nodes allowed per pair.
    pub node_limit: u64,
}

impl Default for AdjacencyConfig {
    fn default() -> Self {
        AdjacencyConfig {
            radius: 12,
            max_pieces: 3,
            focus: 3,
            node_limit: 20_000,
        }
    }
}

/// Local shapes of big pieces as bitsets over the window `[-r, r]²`.
pub struct PatchLibrary {
    radius: i32,
    words: usize,
    patches: Vec<Vec<u64>>,
}

impl PatchLibrary {
    pub fn new(pieces: &[&Polyomino], radius: i32) -> Self {
        let side = (2 * radius + 1) as usize;
        let words = (side * side).div_ceil(64);
        let mut keys: HashSet<Vec<i32>> = HashSet::new();
        let mut patches = Vec::new();
        for p in pieces {
            let set = p.as_set();
            let rows: Vec<(i32, Vec<(i32, i32)>)> = set
                .rows()
                .map(|(y, s)| (y, s.iter().map(|s| (s.start, s.end)).collect()))
                .collect();
            let y0 = rows[0].0;
            let single = |y: i32| -> Option<(i32, i32)> {
                let i = y - y0;
                if i < 0 || i as usize >= rows.len() {
                    return None;
                }
                let r = &rows[i as usize].1;
                (r.len() == 1).then(|| r[0])
            };
            for (y, spans) in &rows {
                // Tightest single-span interval over the window rows, if any.
                let mut inner: Option<(i32, i32)> = Some((i32::MIN, i32::MAX));
                for dy in -radius..=radius {
                    inner = match (inner, single(y + dy)) {
                        (Some((a, b)), Some((l, r))) => Some((a.max(l), b.min(r))),
                        _ => None,
                    };
                }
                for &(s, e) in spans {
                    for x in s..e {
                        let deep = inner.is_some_and(|(l, r)| x - radius >= l && x + radius < r);
                        if deep {
                            continue;
                        }
                        let mut key = Vec::with_capacity(4 * radius as usize + 8);
                        for dy in -radius..=radius {
                            if let Some(row) =
                                rows.get((y + dy - y0) as usize).filter(|_| y + dy >= y0)
                            {
                                for &(a, b) in &row.1 {
                                    let (a, b) = ((a - x).max(-radius), (b - x).min(radius + 1));
                                    if a < b {
                                        key.push(a);
                                        key.push(b);
                                    }
                                }
                            }
                            key.push(i32::MIN);
                        }
                        if keys.contains(&key) {
                            continue;
                        }
                        let mut bits = vec![0u64; words];
                        let mut row = 0usize;
                        let mut it = key.iter();
                        while let Some(&a) = it.next() {
                            if a == i32::MIN {
                                row += 1;
                                continue;
                            }
                            let b = *it.next().expect("spans come in pairs");
                            for cx in a..b {
                                let bit = row * side + (cx + radius) as usize;
                                bits[bit / 64] |= 1 << (bit % 64);
                            }
                        }
                        patches.push(bits);
                        keys.insert(key);
                    }
                }
            }
        }
        PatchLibrary {
            radius,
            words,
            patches,
        }
    }

    pub fn len(&self) -> usize {
        self.patches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patches.is_empty()
    }

    fn mask(&self, c: Cell, occupied: &CellSet) -> Vec<u64> {
        let side = (2 * self.radius + 1) as usize;
        let mut mask = vec![0u64; self.words];
        for (y, spans) in occupied.rows_between(c.y - self.radius, c.y + self.radius + 1) {
            for s in spans {
                for x in s.start.max(c.x - self.radius)..s.end.min(c.x + self.radius + 1) {
                    let bit =
                        (y - c.y + self.radius) as usize * side + (x - c.x + self.radius) as usize;
                    mask[bit / 64] |= 1 << (bit % 64);
                }
            }
        }
        mask
    }

    /// Patches that can sit with their centre on `c` without meeting
    /// `occupied`. Occupied cells outside the window are ignored, which only
    /// ever admits more patches.
    pub fn fitting(&self, c: Cell, occupied: &CellSet) -> Vec<usize> {
        let mask = self.mask(c, occupied);
        let live: Vec<usize> = (0..self.words).filter(|&w| mask[w] != 0).collect();
        (0..self.patches.len())
            .filter(|&i| live.iter().all(|&w| self.patches[i][w] & mask[w] == 0))
            .collect()
    }

    pub fn coverable(&self, c: Cell, occupied: &CellSet) -> bool {
        let mask = self.mask(c, occupied);
        let live: Vec<usize> = (0..self.words).filter(|&w| mask[w] != 0).collect();
        self.patches
            .iter()
            .any(|p| live.iter().all(|&w| p[w] & mask[w] == 0))
    }

    /// Cells of patch `i` centred on `c`.
    pub fn cells(&self, i: usize, c: Cell) -> CellSet {
        let side = (2 * self.radius + 1) as usize;
        let p = &self.patches[i];
        CellSet::from_cells(
            (0..side * side)
                .filter(|&b| p[b / 64] >> (b % 64) & 1 == 1)
                .map(|b| {
                    Cell::new(
                        c.x + (b % side) as i32 - self.radius,
                        c.y + (b / side) as i32 - self.radius,
                    )
                }),
        )
    }
}

#[derive(Clone, Debug, Default)]
pub struct AdjacencyReport {
    /// Offsets of the second filler relative to the first.
    pub pairs: Vec<Cell>,
    /// Offsets whose configuration could not be refuted.
    pub survivors: Vec<Cell>,
    pub patches: usize,
    /// Partial configurations examined over all pairs.
    pub nodes: u64,
    /// Most pieces placed around a pair before it was refuted.
    pub deepest: usize,
}

impl AdjacencyReport {
    pub fn holds(&self) -> bool {
        !self.pairs.is_empty() && self.survivors.is_empty()
    }
}

struct Search<'a> {
    filler: &'a Polyomino,
    lib: &'a PatchLibrary,
    config: AdjacencyConfig,
    focus: CellSet,
    nodes: u64,
    deepest: usize,
    refuted: HashSet<CellSet>,
}

impl Search<'_> {
    /// Ways to cover `c`, as the cells each one adds.
    fn options(&self, c: Cell, occupied: &CellSet) -> Vec<CellSet> {
        let mut out: Vec<CellSet> = self
            .filler
            .cells()
            .map(|f| self.filler.as_set().translate(c - f))
            .filter(|s| !s.intersects(occupied))
            .collect();
        out.extend(
            self.lib
                .fitting(c, occupied)
                .into_iter()
                .map(|i| self.lib.cells(i, c)),
        );
        out
    }

    /// `Some(true)` when no tiling contains `occupied` as a set of whole
    /// pieces, `Some(false)` when the depth bound stops the search and `None`
    /// when the node budget runs out.
    fn refute(&mut self, occupied: &CellSet, placed: usize) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > self.config.node_limit {
            return None;
        }
        if self.refuted.contains(occupied) {
            return Some(true);
        }
        let frontier: BTreeSet<Cell> = occupied
            .cells()
            .flat_map(|c| c.neighbors())
            .filter(|&c| self.focus.contains(c) && !occupied.contains(c))
            .collect();
        let mut best: Option<Vec<CellSet>> = None;
        for c in frontier {
            let opts = self.options(c, occupied);
            if opts.is_empty() {
                self.deepest = self.deepest.max(placed);
                self.refuted.insert(occupied.clone());
                return Some(true);
            }
            if best.as_ref().is_none_or(|b| opts.len() < b.len()) {
                best = Some(opts);
            }
        }
        let Some(best) = best else {
            return Some(false);
        };
        if placed >= self.config.max_pieces {
            return Some(false);
        }
        for add in best {
            if !self.refute(&occupied.union(&add), placed + 1)? {
                return Some(false);
            }
        }
        self.refuted.insert(occupied.clone());
        Some(true)
    }
}

/// Offsets `d` where the filler moved by `d` is disjoint from the filler and
/// shares an edge with it.
pub fn adjacent_offsets(filler: &Polyomino) -> Vec<Cell> {
    let set = filler.as_set();
    let mut out = BTreeSet::new();
    for a in filler.cells() {
        for n in a.neighbors() {
            if set.contains(n) {
                continue;
            }
            for b in filler.cells() {
                let d = n - b;
                if !set.translate(d).intersects(set) {
                    out.insert(d);
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Exhaustive check over every edge-adjacent placement of two fillers.
pub fn check_filler_adjacency(ts: &TileSet7, config: AdjacencyConfig) -> AdjacencyReport {
    let filler = &ts
        .pieces
        .iter()
        .find(|p| p.tile.is_none())
        .expect("filler")
        .polyomino;
    let big: Vec<&Polyomino> = ts
        .pieces
        .iter()
        .filter(|p| p.tile.is_some())
        .map(|p| &p.polyomino)
        .collect();
    let lib = PatchLibrary::new(&big, config.radius);
    let mut report = AdjacencyReport {
        patches: lib.len(),
        ..Default::default()
    };
    for d in adjacent_offsets(filler) {
        let (verdict, nodes, deepest) = refute_fillers(&lib, filler, &[Cell::ORIGIN, d], config);
        report.nodes += nodes;
        report.deepest = report.deepest.max(deepest);
        report.pairs.push(d);
        if verdict != Some(true) {
            report.survivors.push(d);
        }
    }
    report
}

/// Tries to show that fillers at `offsets` cannot all occur in one tiling.
/// Returns the verdict as in the search (`Some(true)` refuted, `Some(false)`
/// not refuted, `None` out of budget), the nodes used and the depth reached.
pub fn refute_fillers(
    lib: &PatchLibrary,
    filler: &Polyomino,
    offsets: &[Cell],
    config: AdjacencyConfig,
) -> (Option<bool>, u64, usize) {
    let start = offsets.iter().fold(CellSet::new(), |acc, &o| {
        acc.union(filler.translate(o).as_set())
    });
    let mut focus = CellSet::new();
    for dy in -config.focus..=config.focus {
        for dx in -config.focus..=config.focus {
            focus = focus.union(&start.translate(Cell::new(dx, dy)));
        }
    }
    let mut s = Search {
        filler,
        lib,
        config,
        focus,
        nodes: 0,
        deepest: 0,
        refuted: HashSet::new(),
    };
    let verdict = s.refute(&start, 0);
    (verdict, s.nodes, s.deepest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::tiny_filler;

    #[test]
    fn square_patches() {
        let sq = Polyomino::from_set(CellSet::rect(Cell::ORIGIN, 10, 10)).unwrap();
        let lib = PatchLibrary::new(&[&sq], 2);
        // Cells at least two away from every side are deep.
        assert!(lib.len() < 100 - 36);
        let occ = CellSet::from_cells([Cell::new(1, 0)]);
        assert!(lib.coverable(Cell::ORIGIN, &occ));
        let ring = CellSet::from_cells([
            Cell::new(1, 0),
            Cell::new(-1, 0),
            Cell::new(0, 1),
            Cell::new(0, -1),
        ]);
        assert!(!lib.coverable(Cell::ORIGIN, &ring));
        let far = CellSet::from_cells([Cell::new(3, 0)]);
        // Cells beyond the window are ignored.
        assert!(lib.coverable(Cell::ORIGIN, &far.union(&ring.translate(Cell::new(9, 9)))));
    }

    #[test]
    fn offsets_are_symmetric() {
        let f = tiny_filler();
        let d = adjacent_offsets(&f);
        assert!(!d.is_empty());
        for &v in &d {
            assert!(d.contains(&-v));
        }
    }

    #[test]
    fn lone_filler_survives() {
        // A filler in a dent-dent gap occurs in real tilings, so the search
        // must not refute it.
        let ts = crate::compiler::compile(&crate::wang::WangSet::sample()).unwrap();
        let big: Vec<&Polyomino> = ts.pieces[1..].iter().map(|p| &p.polyomino).collect();
        let cfg = AdjacencyConfig::default();
        let lib = PatchLibrary::new(&big, cfg.radius);
        let (verdict, _, _) = refute_fillers(&lib, &tiny_filler(), &[Cell::ORIGIN], cfg);
        assert_ne!(verdict, Some(true));
    }
}
