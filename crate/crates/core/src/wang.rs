//! Wang tile sets and an exhaustive torus solver.

use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WangTile {
    pub top: u32,
    pub bottom: u32,
    pub left: u32,
    pub right: u32,
}

impl WangTile {
    pub const fn new(top: u32, bottom: u32, left: u32, right: u32) -> Self {
        WangTile {
            top,
            bottom,
            left,
            right,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WangError {
    #[error("a Wang set needs at least one tile and one color")]
    Empty,
    #[error("tile {tile} uses color {color}, but only {m} colors are declared")]
    ColorOutOfRange { tile: usize, color: u32, m: u32 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WangSet {
    tiles: Vec<WangTile>,
    m: u32,
}

impl WangSet {
    pub fn new(tiles: Vec<WangTile>, m: u32) -> Result<Self, WangError> {
        if tiles.is_empty() || m == 0 {
            return Err(WangError::Empty);
        }
        for (i, t) in tiles.iter().enumerate() {
            for color in [t.top, t.bottom, t.left, t.right] {
                if color >= m {
                    return Err(WangError::ColorOutOfRange { tile: i, color, m });
                }
            }
        }
        Ok(WangSet { tiles, m })
    }

    /// Three tiles over red (0), green (1), blue (2) and yellow (3).
    pub fn sample() -> Self {
        WangSet::new(
            vec![
                WangTile::new(0, 0, 1, 3),
                WangTile::new(2, 2, 3, 0),
                WangTile::new(3, 3, 0, 1),
            ],
            4,
        )
        .expect("fixed set is well formed")
    }

    pub fn tiles(&self) -> &[WangTile] {
        &self.tiles
    }

    pub fn n(&self) -> usize {
        self.tiles.len()
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Bits per color, at least one.
    pub fn t(&self) -> u32 {
        let mut t = 1;
        while (1u64 << t) < self.m as u64 {
            t += 1;
        }
        t
    }

    /// Reads `wang <n> <m>` followed by `n` lines `top bottom left right`.
    /// Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self, WangError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let err = |line, msg: &str| WangError::Parse {
            line,
            msg: msg.to_string(),
        };
        let (hl, header) = lines.next().ok_or_else(|| err(1, "missing header"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 3 || h[0] != "wang" {
            return Err(err(hl, "expected `wang <n> <m>`"));
        }
        let n: usize = h[1].parse().map_err(|_| err(hl, "bad tile count"))?;
        let m: u32 = h[2].parse().map_err(|_| err(hl, "bad color count"))?;
        let mut tiles = Vec::with_capacity(n);
        for (ln, line) in lines {
            let v: Vec<u32> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| err(ln, "bad color")))
                .collect::<Result<_, _>>()?;
            if v.len() != 4 {
                return Err(err(ln, "expected `top bottom left right`"));
            }
            tiles.push(WangTile::new(v[0], v[1], v[2], v[3]));
        }
        if tiles.len() != n {
            return Err(err(
                hl,
                &format!("header announces {n} tiles, found {}", tiles.len()),
            ));
        }
        WangSet::new(tiles, m)
    }
}

impl fmt::Display for WangSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "wang {} {}", self.n(), self.m)?;
        for t in &self.tiles {
            writeln!(f, "{} {} {} {}", t.top, t.bottom, t.left, t.right)?;
        }
        Ok(())
    }
}

/// Tile indices indexed `[y][x]`, rows bottom to top.
pub type Assignment = Vec<Vec<usize>>;

/// Whether every horizontal and vertical contact of the torus matches.
pub fn check_torus(ws: &WangSet, a: &Assignment) -> bool {
    let h = a.len();
    if h == 0
        || a.iter()
            .any(|row| row.len() != a[0].len() || row.is_empty())
    {
        return false;
    }
    let w = a[0].len();
    let t = |x: usize, y: usize| ws.tiles.get(a[y][x]);
    (0..h).all(|y| {
        (0..w).all(|x| match (t(x, y), t((x + 1) % w, y), t(x, (y + 1) % h)) {
            (Some(c), Some(r), Some(u)) => c.right == r.left && c.top == u.bottom,
            _ => false,
        })
    })
}

/// First toroidal `w` by `h` assignment in row-major lexicographic order.
pub fn wang_torus_solve(ws: &WangSet, w: usize, h: usize) -> Option<Assignment> {
    if w == 0 || h == 0 {
        return None;
    }
    let n = ws.n();
    let cells = w * h;
    let mut pick = vec![0usize; cells];
    let mut k = 0usize;
    let fits = |pick: &[usize], k: usize| {
        let (x, y) = (k % w, k / w);
        let me = ws.tiles[pick[k]];
        (x == 0 || ws.tiles[pick[k - 1]].right == me.left)
            && (y == 0 || ws.tiles[pick[k - w]].top == me.bottom)
            && (x + 1 < w || ws.tiles[pick[k + 1 - w]].left == me.right)
            && (y + 1 < h || ws.tiles[pick[x]].bottom == me.top)
    };
    loop {
        if pick[k] < n && fits(&pick, k) {
            k += 1;
            if k == cells {
                return Some(pick.chunks(w).map(|r| r.to_vec()).collect());
            }
            pick[k] = 0;
            continue;
        }
        loop {
            pick[k] += 1;
            if pick[k] < n {
                break;
            }
            if k == 0 {
                return None;
            }
            k -= 1;
        }
    }
}

/// Least-area solvable torus with both sides at most `max`, ties broken by width.
pub fn smallest_torus(ws: &WangSet, max: usize) -> Option<(usize, usize, Assignment)> {
    let mut sizes: Vec<(usize, usize)> = (1..=max)
        .flat_map(|w| (1..=max).map(move |h| (w, h)))
        .collect();
    sizes.sort_by_key(|&(w, h)| (w * h, w));
    sizes
        .into_iter()
        .find_map(|(w, h)| wang_torus_solve(ws, w, h).map(|a| (w, h, a)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_tile_tori() {
        let all0 = WangSet::new(vec![WangTile::new(0, 0, 0, 0)], 1).unwrap();
        assert_eq!(wang_torus_solve(&all0, 1, 1), Some(vec![vec![0]]));
        let skew = WangSet::new(vec![WangTile::new(0, 1, 0, 0)], 2).unwrap();
        assert_eq!(wang_torus_solve(&skew, 1, 1), None);
    }

    #[test]
    fn sample_bits() {
        let ws = WangSet::sample();
        assert_eq!((ws.n(), ws.m(), ws.t()), (3, 4, 2));
    }

    #[test]
    fn t_is_clamped() {
        let one = WangSet::new(vec![WangTile::new(0, 0, 0, 0)], 1).unwrap();
        assert_eq!(one.t(), 1);
        let five = WangSet::new(vec![WangTile::new(4, 0, 0, 0)], 5).unwrap();
        assert_eq!(five.t(), 3);
    }

    #[test]
    fn text_round_trip() {
        let ws = WangSet::sample();
        assert_eq!(WangSet::parse(&ws.to_string()).unwrap(), ws);
        assert!(WangSet::parse("wang 1 2\n0 0 0\n").is_err());
        assert!(WangSet::parse("wang 1 2\n0 0 0 2\n").is_err());
        assert!(WangSet::parse("wang 2 2\n0 0 0 1\n").is_err());
        assert!(WangSet::parse("tiles 1 1\n0 0 0 0\n").is_err());
    }

    #[test]
    fn solutions_check_out() {
        let ws = WangSet::sample();
        for w in 1..=4 {
            for h in 1..=4 {
                if let Some(a) = wang_torus_solve(&ws, w, h) {
                    assert!(check_torus(&ws, &a));
                }
            }
        }
    }
}
