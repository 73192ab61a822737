//! Unit cells, run-encoded cell sets and polyominoes.
//!
//! A cell is the closed unit square whose lower-left corner is `(x, y)`.
//! Sets are stored as sorted rows of half-open spans so that pieces with
//! millions of cells stay cheap to translate, intersect and compare.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use thiserror::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub x: i32,
    pub y: i32,
}

impl Cell {
    pub const ORIGIN: Cell = Cell { x: 0, y: 0 };

    pub const fn new(x: i32, y: i32) -> Self {
        Cell { x, y }
    }

    /// Key for the (y, x) order used by files and search.
    pub fn row_major(self) -> (i32, i32) {
        (self.y, self.x)
    }

    pub fn neighbors(self) -> [Cell; 4] {
        let Cell { x, y } = self;
        [
            Cell::new(x + 1, y),
            Cell::new(x, y + 1),
            Cell::new(x - 1, y),
            Cell::new(x, y - 1),
        ]
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for Cell {
    type Output = Cell;
    fn add(self, o: Cell) -> Cell {
        Cell::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Cell {
    fn add_assign(&mut self, o: Cell) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Cell {
    type Output = Cell;
    fn sub(self, o: Cell) -> Cell {
        Cell::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Cell {
    type Output = Cell;
    fn neg(self) -> Cell {
        Cell::new(-self.x, -self.y)
    }
}

impl Mul<Cell> for i32 {
    type Output = Cell;
    fn mul(self, c: Cell) -> Cell {
        Cell::new(self * c.x, self * c.y)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("polyomino has no cells")]
    Empty,
    #[error("cell {0} listed twice")]
    DuplicateCell(Cell),
    #[error("parts {first} and {second} overlap at {cell}")]
    Overlap {
        first: usize,
        second: usize,
        cell: Cell,
    },
    #[error("polyomino is not simply connected")]
    Hole,
    #[error("polyomino is not connected")]
    Disconnected,
}

/// Half-open run `[start, end)` of cells on one row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Span {
    pub start: i32,
    pub end: i32,
}

impl Span {
    pub fn new(start: i32, end: i32) -> Self {
        debug_assert!(start < end);
        Span { start, end }
    }

    pub fn len(self) -> u32 {
        (self.end - self.start) as u32
    }

    pub fn is_empty(self) -> bool {
        self.end <= self.start
    }

    pub fn contains(self, x: i32) -> bool {
        self.start <= x && x < self.end
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Row {
    y: i32,
    spans: Vec<Span>,
}

/// A finite, possibly empty set of cells kept as merged row spans.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CellSet {
    rows: Vec<Row>,
}

fn merge_sorted(spans: &mut Vec<Span>) {
    spans.sort_unstable();
    let mut out: Vec<Span> = Vec::with_capacity(spans.len());
    for s in spans.drain(..) {
        match out.last_mut() {
            Some(last) if s.start <= last.end => last.end = last.end.max(s.end),
            _ => out.push(s),
        }
    }
    *spans = out;
}

impl CellSet {
    pub fn new() -> Self {
        CellSet::default()
    }

    /// Builds the union of the given `(y, start, end)` runs. Empty runs are dropped.
    pub fn from_spans<I: IntoIterator<Item = (i32, i32, i32)>>(spans: I) -> Self {
        let mut all: Vec<(i32, i32, i32)> = spans.into_iter().filter(|s| s.1 < s.2).collect();
        all.sort_unstable();
        let mut rows: Vec<Row> = Vec::new();
        for (y, s, e) in all {
            match rows.last_mut() {
                Some(r) if r.y == y => match r.spans.last_mut() {
                    Some(last) if s <= last.end => last.end = last.end.max(e),
                    _ => r.spans.push(Span::new(s, e)),
                },
                _ => rows.push(Row {
                    y,
                    spans: vec![Span::new(s, e)],
                }),
            }
        }
        CellSet { rows }
    }

    pub fn from_cells<I: IntoIterator<Item = Cell>>(cells: I) -> Self {
        CellSet::from_spans(cells.into_iter().map(|c| (c.y, c.x, c.x + 1)))
    }

    /// Axis-aligned rectangle with lower-left cell `origin`.
    pub fn rect(origin: Cell, width: i32, height: i32) -> Self {
        CellSet::from_spans((0..height).map(|dy| (origin.y + dy, origin.x, origin.x + width)))
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn len(&self) -> u64 {
        self.rows
            .iter()
            .flat_map(|r| r.spans.iter())
            .map(|s| s.len() as u64)
            .sum()
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn span_count(&self) -> usize {
        self.rows.iter().map(|r| r.spans.len()).sum()
    }

    /// Rows in increasing `y`, each with its sorted, non-touching spans.
    pub fn rows(&self) -> impl Iterator<Item = (i32, &[Span])> + '_ {
        self.rows.iter().map(|r| (r.y, r.spans.as_slice()))
    }

    pub fn row(&self, y: i32) -> &[Span] {
        match self.rows.binary_search_by_key(&y, |r| r.y) {
            Ok(i) => &self.rows[i].spans,
            Err(_) => &[],
        }
    }

    /// Rows with `lo <= y < hi`.
    pub fn rows_between(&self, lo: i32, hi: i32) -> impl Iterator<Item = (i32, &[Span])> + '_ {
        let a = self.rows.partition_point(|r| r.y < lo);
        let b = self.rows.partition_point(|r| r.y < hi);
        self.rows[a..b].iter().map(|r| (r.y, r.spans.as_slice()))
    }

    pub fn contains(&self, c: Cell) -> bool {
        let spans = self.row(c.y);
        let i = spans.partition_point(|s| s.end <= c.x);
        i < spans.len() && spans[i].start <= c.x
    }

    /// Cells in (y, x) order.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.rows.iter().flat_map(|r| {
            r.spans
                .iter()
                .flat_map(move |s| (s.start..s.end).map(move |x| Cell::new(x, r.y)))
        })
    }

    /// Least and greatest coordinates, or `None` when empty.
    pub fn bounds(&self) -> Option<(Cell, Cell)> {
        let first = self.rows.first()?;
        let last = self.rows.last()?;
        let mut lo = i32::MAX;
        let mut hi = i32::MIN;
        for r in &self.rows {
            lo = lo.min(r.spans[0].start);
            hi = hi.max(r.spans[r.spans.len() - 1].end - 1);
        }
        Some((Cell::new(lo, first.y), Cell::new(hi, last.y)))
    }

    pub fn translate(&self, v: Cell) -> CellSet {
        CellSet {
            rows: self
                .rows
                .iter()
                .map(|r| Row {
                    y: r.y + v.y,
                    spans: r
                        .spans
                        .iter()
                        .map(|s| Span::new(s.start + v.x, s.end + v.x))
                        .collect(),
                })
                .collect(),
        }
    }

    fn combine(&self, other: &CellSet, op: fn(&[Span], &[Span]) -> Vec<Span>) -> CellSet {
        let mut rows = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.rows.len() || j < other.rows.len() {
            let (y, a, b): (i32, &[Span], &[Span]) = match (self.rows.get(i), other.rows.get(j)) {
                (Some(r), Some(s)) if r.y == s.y => {
                    i += 1;
                    j += 1;
                    (r.y, &r.spans, &s.spans)
                }
                (Some(r), Some(s)) if r.y < s.y => {
                    i += 1;
                    (r.y, &r.spans, &[])
                }
                (Some(r), None) => {
                    i += 1;
                    (r.y, &r.spans, &[])
                }
                (_, Some(s)) => {
                    j += 1;
                    (s.y, &[], &s.spans)
                }
                (None, None) => unreachable!(),
            };
            let spans = op(a, b);
            if !spans.is_empty() {
                rows.push(Row { y, spans });
            }
        }
        CellSet { rows }
    }

    pub fn union(&self, other: &CellSet) -> CellSet {
        self.combine(other, |a, b| {
            let mut v: Vec<Span> = a.iter().chain(b.iter()).copied().collect();
            merge_sorted(&mut v);
            v
        })
    }

    pub fn intersection(&self, other: &CellSet) -> CellSet {
        self.combine(other, span_intersection)
    }

    pub fn difference(&self, other: &CellSet) -> CellSet {
        self.combine(other, span_difference)
    }

    pub fn intersects(&self, other: &CellSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.rows.len() && j < other.rows.len() {
            let (r, s) = (&self.rows[i], &other.rows[j]);
            if r.y < s.y {
                i += 1;
            } else if s.y < r.y {
                j += 1;
            } else {
                if spans_meet(&r.spans, &s.spans) {
                    return true;
                }
                i += 1;
                j += 1;
            }
        }
        false
    }

    pub fn is_subset(&self, other: &CellSet) -> bool {
        self.difference(other).is_empty()
    }

    /// Edge-connected components, ordered by their least cell in (y, x) order.
    pub fn components(&self) -> Vec<CellSet> {
        let (labels, count) = self.span_components();
        let mut parts: Vec<Vec<(i32, i32, i32)>> = vec![Vec::new(); count];
        let mut k = 0;
        for r in &self.rows {
            for s in &r.spans {
                parts[labels[k]].push((r.y, s.start, s.end));
                k += 1;
            }
        }
        parts.into_iter().map(CellSet::from_spans).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.span_components().1 == 1
    }

    /// Component label per span (in storage order) and the component count.
    /// Labels are numbered in order of first appearance.
    fn span_components(&self) -> (Vec<usize>, usize) {
        let total = self.span_count();
        let mut uf = UnionFind::new(total);
        let mut base = 0;
        for w in 0..self.rows.len() {
            let r = &self.rows[w];
            if w + 1 < self.rows.len() && self.rows[w + 1].y == r.y + 1 {
                let next = &self.rows[w + 1];
                let nbase = base + r.spans.len();
                let (mut i, mut j) = (0, 0);
                while i < r.spans.len() && j < next.spans.len() {
                    let (a, b) = (r.spans[i], next.spans[j]);
                    if a.start < b.end && b.start < a.end {
                        uf.union(base + i, nbase + j);
                    }
                    if a.end <= b.end {
                        i += 1;
                    } else {
                        j += 1;
                    }
                }
            }
            base += r.spans.len();
        }
        let mut label = vec![usize::MAX; total];
        let mut out = Vec::with_capacity(total);
        let mut count = 0;
        for k in 0..total {
            let root = uf.find(k);
            if label[root] == usize::MAX {
                label[root] = count;
                count += 1;
            }
            out.push(label[root]);
        }
        (out, count)
    }

    /// Every row is one run and every column is one run.
    pub fn is_orthogonally_convex(&self) -> bool {
        if self.rows.iter().any(|r| r.spans.len() != 1) {
            return false;
        }
        let Some((lo, hi)) = self.bounds() else {
            return true;
        };
        let mut last = vec![i32::MIN; (hi.x - lo.x + 1) as usize];
        for r in &self.rows {
            let s = r.spans[0];
            for x in s.start..s.end {
                let slot = &mut last[(x - lo.x) as usize];
                if *slot != i32::MIN && *slot != r.y - 1 {
                    return false;
                }
                *slot = r.y;
            }
        }
        true
    }
}

fn spans_meet(a: &[Span], b: &[Span]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i].start < b[j].end && b[j].start < a[i].end {
            return true;
        }
        if a[i].end <= b[j].end {
            i += 1;
        } else {
            j += 1;
        }
    }
    false
}

pub(crate) fn span_intersection(a: &[Span], b: &[Span]) -> Vec<Span> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let s = a[i].start.max(b[j].start);
        let e = a[i].end.min(b[j].end);
        if s < e {
            out.push(Span::new(s, e));
        }
        if a[i].end <= b[j].end {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

pub(crate) fn span_difference(a: &[Span], b: &[Span]) -> Vec<Span> {
    let mut out = Vec::new();
    let mut j = 0;
    for &s in a {
        let mut cur = s.start;
        while j < b.len() && b[j].end <= cur {
            j += 1;
        }
        let mut k = j;
        while k < b.len() && b[k].start < s.end {
            if b[k].start > cur {
                out.push(Span::new(cur, b[k].start));
            }
            cur = cur.max(b[k].end);
            k += 1;
        }
        if cur < s.end {
            out.push(Span::new(cur, s.end));
        }
    }
    out
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Tagged runs whose union must be disjoint; used to glue many parts at once.
#[derive(Default)]
pub struct SpanBuffer {
    spans: Vec<(i32, i32, i32, usize)>,
}

impl SpanBuffer {
    pub fn new() -> Self {
        SpanBuffer::default()
    }

    pub fn push(&mut self, y: i32, start: i32, end: i32, part: usize) {
        if start < end {
            self.spans.push((y, start, end, part));
        }
    }

    pub fn push_set(&mut self, set: &CellSet, offset: Cell, part: usize) {
        for (y, spans) in set.rows() {
            for s in spans {
                self.push(y + offset.y, s.start + offset.x, s.end + offset.x, part);
            }
        }
    }

    /// Union of all runs. The overlap reported is the least overlapping cell in
    /// (y, x) order together with two parts covering it.
    pub fn into_disjoint(mut self) -> Result<CellSet, GridError> {
        self.spans.sort_unstable();
        let mut rows: Vec<Row> = Vec::new();
        let mut reach = (i32::MIN, i32::MIN, 0usize);
        for &(y, s, e, part) in &self.spans {
            if reach.0 == y && s < reach.1 {
                let (first, second) = (reach.2.min(part), reach.2.max(part));
                return Err(GridError::Overlap {
                    first,
                    second,
                    cell: Cell::new(s, y),
                });
            }
            if reach.0 != y || e > reach.1 {
                reach = (y, e, part);
            }
            match rows.last_mut() {
                Some(r) if r.y == y => match r.spans.last_mut() {
                    Some(last) if last.end == s => last.end = e,
                    _ => r.spans.push(Span::new(s, e)),
                },
                _ => rows.push(Row {
                    y,
                    spans: vec![Span::new(s, e)],
                }),
            }
        }
        Ok(CellSet { rows })
    }
}

/// A non-empty finite set of cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polyomino {
    set: CellSet,
}

impl Polyomino {
    /// Fails on an empty list or a repeated cell.
    pub fn new<I: IntoIterator<Item = Cell>>(cells: I) -> Result<Self, GridError> {
        let mut v: Vec<Cell> = cells.into_iter().collect();
        v.sort_unstable_by_key(|c| c.row_major());
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(GridError::DuplicateCell(w[0]));
        }
        Polyomino::from_set(CellSet::from_cells(v))
    }

    pub fn from_set(set: CellSet) -> Result<Self, GridError> {
        if set.is_empty() {
            Err(GridError::Empty)
        } else {
            Ok(Polyomino { set })
        }
    }

    pub fn as_set(&self) -> &CellSet {
        &self.set
    }

    pub fn into_set(self) -> CellSet {
        self.set
    }

    pub fn len(&self) -> u64 {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.set.contains(c)
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.set.cells()
    }

    pub fn bounds(&self) -> (Cell, Cell) {
        self.set.bounds().expect("polyomino is non-empty")
    }

    pub fn width(&self) -> i32 {
        let (lo, hi) = self.bounds();
        hi.x - lo.x + 1
    }

    pub fn height(&self) -> i32 {
        let (lo, hi) = self.bounds();
        hi.y - lo.y + 1
    }

    /// Least cell in (y, x) order.
    pub fn first_cell(&self) -> Cell {
        self.set.cells().next().expect("polyomino is non-empty")
    }

    pub fn translate(&self, v: Cell) -> Polyomino {
        Polyomino {
            set: self.set.translate(v),
        }
    }

    /// Offset that `normalize` applies.
    pub fn normalizing_shift(&self) -> Cell {
        -self.bounds().0
    }

    pub fn normalize(&self) -> Polyomino {
        self.translate(self.normalizing_shift())
    }

    pub fn is_normalized(&self) -> bool {
        self.bounds().0 == Cell::ORIGIN
    }

    pub fn overlaps(&self, other: &Polyomino) -> bool {
        self.set.intersects(&other.set)
    }

    pub fn is_connected(&self) -> bool {
        self.set.is_connected()
    }

    pub fn is_orthogonally_convex(&self) -> bool {
        self.set.is_orthogonally_convex()
    }

    pub fn boundary_word(&self) -> Result<BoundaryWord, GridError> {
        boundary_word(self)
    }
}

pub fn translate(p: &Polyomino, v: Cell) -> Polyomino {
    p.translate(v)
}

pub fn overlaps(p: &Polyomino, q: &Polyomino) -> bool {
    p.overlaps(q)
}

pub fn union_disjoint(parts: &[Polyomino]) -> Result<Polyomino, GridError> {
    let mut buf = SpanBuffer::new();
    for (i, p) in parts.iter().enumerate() {
        buf.push_set(&p.set, Cell::ORIGIN, i);
    }
    Polyomino::from_set(buf.into_disjoint()?)
}

pub fn is_connected(p: &Polyomino) -> bool {
    p.is_connected()
}

pub fn is_orthogonally_convex(p: &Polyomino) -> bool {
    p.is_orthogonally_convex()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    Right,
    Up,
    Left,
    Down,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::Right, Dir::Up, Dir::Left, Dir::Down];

    pub fn delta(self) -> Cell {
        match self {
            Dir::Right => Cell::new(1, 0),
            Dir::Up => Cell::new(0, 1),
            Dir::Left => Cell::new(-1, 0),
            Dir::Down => Cell::new(0, -1),
        }
    }

    pub fn opposite(self) -> Dir {
        match self {
            Dir::Right => Dir::Left,
            Dir::Up => Dir::Down,
            Dir::Left => Dir::Right,
            Dir::Down => Dir::Up,
        }
    }

    pub fn ccw(self) -> Dir {
        match self {
            Dir::Right => Dir::Up,
            Dir::Up => Dir::Left,
            Dir::Left => Dir::Down,
            Dir::Down => Dir::Right,
        }
    }

    pub fn cw(self) -> Dir {
        self.ccw().opposite()
    }

    pub fn letter(self) -> char {
        match self {
            Dir::Right => 'R',
            Dir::Up => 'U',
            Dir::Left => 'L',
            Dir::Down => 'D',
        }
    }

    pub fn from_letter(c: char) -> Option<Dir> {
        match c {
            'R' => Some(Dir::Right),
            'U' => Some(Dir::Up),
            'L' => Some(Dir::Left),
            'D' => Some(Dir::Down),
            _ => None,
        }
    }
}

/// Counterclockwise outer boundary, one letter per unit edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundaryWord {
    pub start: Cell,
    pub letters: Vec<Dir>,
}

impl BoundaryWord {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn displacement(letters: &[Dir]) -> Cell {
        letters.iter().fold(Cell::ORIGIN, |acc, d| acc + d.delta())
    }

    pub fn is_closed(&self) -> bool {
        BoundaryWord::displacement(&self.letters) == Cell::ORIGIN
    }

    /// Vertices visited, starting and ending at `start`.
    pub fn vertices(&self) -> impl Iterator<Item = Cell> + '_ {
        std::iter::once(self.start).chain(self.letters.iter().scan(self.start, |p, d| {
            *p += d.delta();
            Some(*p)
        }))
    }

    /// Signed area enclosed; positive for counterclockwise words.
    pub fn shoelace_area(&self) -> i64 {
        let mut twice = 0i64;
        let mut p = self.start;
        for d in &self.letters {
            let q = p + d.delta();
            twice += p.x as i64 * q.y as i64 - q.x as i64 * p.y as i64;
            p = q;
        }
        twice / 2
    }
}

impl fmt::Display for BoundaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.letters {
            write!(f, "{}", d.letter())?;
        }
        Ok(())
    }
}

/// Whether the unit edge leaving vertex `v` in direction `d` has the piece on its left.
fn boundary_edge(p: &Polyomino, v: Cell, d: Dir) -> bool {
    let Cell { x, y } = v;
    let has = |cx, cy| p.contains(Cell::new(cx, cy));
    match d {
        Dir::Right => has(x, y) && !has(x, y - 1),
        Dir::Up => has(x - 1, y) && !has(x, y),
        Dir::Left => has(x - 1, y - 1) && !has(x - 1, y),
        Dir::Down => has(x, y - 1) && !has(x - 1, y - 1),
    }
}

/// Traces the outer boundary counterclockwise from the least vertex in (x, y)
/// order. A boundary that passes a vertex twice, or encloses more area than
/// the piece has cells, is reported as `Hole`.
pub fn boundary_word(p: &Polyomino) -> Result<BoundaryWord, GridError> {
    if !p.is_connected() {
        return Err(GridError::Disconnected);
    }
    let (lo, _) = p.bounds();
    let start_y = p
        .set
        .rows()
        .find(|(_, spans)| spans[0].start == lo.x)
        .map(|(y, _)| y)
        .expect("some row reaches the least column");
    let start = Cell::new(lo.x, start_y);
    let mut letters = Vec::new();
    let mut v = start;
    let mut d = Dir::Right;
    loop {
        letters.push(d);
        v += d.delta();
        if v == start {
            break;
        }
        d = [d.ccw(), d, d.cw()]
            .into_iter()
            .find(|&nd| boundary_edge(p, v, nd))
            .expect("boundary continues at every vertex");
    }
    let word = BoundaryWord { start, letters };
    let mut seen = std::collections::HashSet::with_capacity(word.len());
    if !word.vertices().skip(1).all(|v| seen.insert(v)) || word.shoelace_area() != p.len() as i64 {
        return Err(GridError::Hole);
    }
    Ok(word)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("header announces {expected} cells, found {found}")]
    Count { expected: u64, found: u64 },
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Writes `poly <name> <count>` and one `x y` line per cell of the
/// normalized polyomino, in (y, x) order.
pub fn write_poly<W: std::io::Write>(
    out: &mut W,
    name: &str,
    p: &Polyomino,
) -> std::io::Result<()> {
    let p = p.normalize();
    writeln!(out, "poly {name} {}", p.len())?;
    for (y, spans) in p.as_set().rows() {
        for s in spans {
            for x in s.start..s.end {
                writeln!(out, "{x} {y}")?;
            }
        }
    }
    Ok(())
}

pub fn poly_to_string(name: &str, p: &Polyomino) -> String {
    let mut buf = Vec::new();
    write_poly(&mut buf, name, p).expect("writing to memory");
    String::from_utf8(buf).expect("ascii")
}

/// Reads a `.poly` text. Cells may come in any order but must not repeat.
pub fn parse_poly(text: &str) -> Result<(String, Polyomino), PolyParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let err = |line: usize, msg: &str| PolyParseError::Syntax {
        line: line + 1,
        msg: msg.to_string(),
    };
    let (hl, header) = lines.next().ok_or_else(|| err(0, "missing header"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 3 || h[0] != "poly" {
        return Err(err(hl, "expected `poly <name> <cell-count>`"));
    }
    let expected: u64 = h[2].parse().map_err(|_| err(hl, "bad cell count"))?;
    let mut cells = Vec::with_capacity(expected.min(1 << 26) as usize);
    for (i, line) in lines {
        let mut it = line.split_whitespace();
        let mut num = || -> Result<i32, PolyParseError> {
            it.next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| err(i, "expected `x y`"))
        };
        let c = Cell::new(num()?, num()?);
        if it.next().is_some() {
            return Err(err(i, "expected `x y`"));
        }
        cells.push(c);
    }
    if cells.len() as u64 != expected {
        return Err(PolyParseError::Count {
            expected,
            found: cells.len() as u64,
        });
    }
    Ok((h[1].to_string(), Polyomino::new(cells)?))
}
