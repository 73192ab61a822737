//! Translational monotile test on boundary words: a simply connected
//! polyomino tiles the plane by translations exactly when some conjugate of
//! its boundary word factors as `X Y Z X^ Y^ Z^`, where `^` reverses a factor
//! and replaces every step by its opposite. One pair may be empty.

use std::fmt;

use crate::grid::{BoundaryWord, Cell, Dir, GridError, Polyomino};

/// A factorization of a boundary word. Factor `k` (in the order X, Y, Z,
/// X^, Y^, Z^) starts at `start + sum of earlier lengths`, modulo the word
/// length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BNFactorization {
    pub start: usize,
    pub lengths: [usize; 3],
    pub word_len: usize,
}

impl BNFactorization {
    /// `(offset, length)` of the six factors, offsets reduced modulo the word length.
    pub fn factors(&self) -> [(usize, usize); 6] {
        let [a, b, c] = self.lengths;
        let lens = [a, b, c, a, b, c];
        let mut out = [(0, 0); 6];
        let mut at = self.start;
        for (k, len) in lens.into_iter().enumerate() {
            out[k] = (at % self.word_len, len);
            at += len;
        }
        out
    }

    pub fn is_pseudo_square(&self) -> bool {
        self.lengths.contains(&0)
    }

    /// Letterwise check that every hatted factor mirrors its mate.
    pub fn holds(&self, word: &[Dir]) -> bool {
        let [a, b, c] = self.lengths;
        word.len() == self.word_len
            && 2 * (a + b + c) == word.len()
            && self.lengths.iter().filter(|&&l| l == 0).count() <= 1
            && factors_mirror(word, self.start, a)
            && factors_mirror(word, self.start + a, b)
            && factors_mirror(word, self.start + a + b, c)
    }

    /// Generators of the translation lattice of the induced tiling:
    /// `vec(X) + vec(Y)` and `vec(Y) + vec(Z)`.
    pub fn periods(&self, word: &[Dir]) -> (Cell, Cell) {
        let n = word.len();
        let disp = |from: usize, len: usize| {
            (0..len).fold(Cell::ORIGIN, |acc, k| acc + word[(from + k) % n].delta())
        };
        let [a, b, c] = self.lengths;
        let x = disp(self.start, a);
        let y = disp(self.start + a, b);
        let z = disp(self.start + a + b, c);
        (x + y, y + z)
    }
}

impl fmt::Display for BNFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["X", "Y", "Z", "X^", "Y^", "Z^"];
        for (k, (off, len)) in self.factors().into_iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}=[{},{})", names[k], off, off + len)?;
        }
        Ok(())
    }
}

/// Whether the factor of length `len` at `from` and the one `n/2` later are mates.
fn factors_mirror(word: &[Dir], from: usize, len: usize) -> bool {
    let n = word.len();
    let mate = from + n / 2;
    (0..len).all(|k| word[(from + k) % n] == word[(mate + len - 1 - k) % n].opposite())
}

/// First factorization in (start, |X|, |Y|) order, if any.
pub fn factorize(word: &[Dir]) -> Option<BNFactorization> {
    let n = word.len();
    if n < 4 || n % 2 == 1 {
        return None;
    }
    let h = n / 2;
    for start in 0..n {
        for a in 0..=h {
            if !factors_mirror(word, start, a) {
                continue;
            }
            for b in 0..=h - a {
                if !factors_mirror(word, start + a, b) {
                    continue;
                }
                let c = h - a - b;
                let zeros = [a, b, c].iter().filter(|&&l| l == 0).count();
                if zeros <= 1 && factors_mirror(word, start + a + b, c) {
                    return Some(BNFactorization {
                        start,
                        lengths: [a, b, c],
                        word_len: n,
                    });
                }
            }
        }
    }
    None
}

pub fn is_translational_monotile(
    p: &Polyomino,
) -> Result<(bool, Option<BNFactorization>), GridError> {
    let w: BoundaryWord = p.boundary_word()?;
    let f = factorize(&w.letters);
    Ok((f.is_some(), f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{level2, tiny_filler};
    use crate::grid::CellSet;

    fn rect(w: i32, h: i32) -> Polyomino {
        Polyomino::from_set(CellSet::rect(Cell::ORIGIN, w, h)).unwrap()
    }

    #[test]
    fn unit_square_is_pseudo_square() {
        let (tiles, f) = is_translational_monotile(&rect(1, 1)).unwrap();
        assert!(tiles);
        let f = f.unwrap();
        assert!(f.is_pseudo_square());
        assert_eq!(f.lengths, [0, 1, 1]);
    }

    #[test]
    fn rectangles_tile() {
        for w in 1..=4 {
            for h in 1..=4 {
                let p = rect(w, h);
                let word = p.boundary_word().unwrap();
                let f = factorize(&word.letters).expect("rectangle tiles");
                assert!(f.holds(&word.letters));
                let (u, v) = f.periods(&word.letters);
                assert_eq!((u.x * v.y - u.y * v.x).abs(), w * h);
            }
        }
    }

    #[test]
    fn filler_does_not_tile() {
        let (tiles, f) = is_translational_monotile(&tiny_filler()).unwrap();
        assert!(!tiles);
        assert!(f.is_none());
    }

    #[test]
    fn diamond_tiles() {
        let d = level2(13).unwrap();
        let word = d.boundary_word().unwrap();
        assert_eq!(word.len(), 100);
        let f = factorize(&word.letters).unwrap();
        assert!(f.holds(&word.letters));
        let (u, v) = f.periods(&word.letters);
        assert_eq!((u.x * v.y - u.y * v.x).unsigned_abs() as u64, d.len());
    }

    #[test]
    fn l_tromino_tiles_and_s_shape_too() {
        let l = Polyomino::new([Cell::new(0, 0), Cell::new(1, 0), Cell::new(0, 1)]).unwrap();
        assert!(is_translational_monotile(&l).unwrap().0);
        let s = Polyomino::new([
            Cell::new(0, 0),
            Cell::new(1, 0),
            Cell::new(1, 1),
            Cell::new(2, 1),
        ])
        .unwrap();
        assert!(is_translational_monotile(&s).unwrap().0);
    }
}
