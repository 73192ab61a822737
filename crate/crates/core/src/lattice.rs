//! Rank-two sublattices of Z² and canonical residues modulo them.

use num_integer::Integer;
use thiserror::Error;

use crate::grid::Cell;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("periods {0} and {1} are linearly dependent")]
pub struct DegenerateLattice(pub Cell, pub Cell);

/// Lattice in lower-triangular Hermite normal form: generated by `(a, b)` and
/// `(0, d)` with `a, d > 0` and `0 <= b < d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    a: i64,
    b: i64,
    d: i64,
}

impl Lattice {
    pub fn new(p: Cell, q: Cell) -> Result<Self, DegenerateLattice> {
        let (px, py, qx, qy) = (p.x as i64, p.y as i64, q.x as i64, q.y as i64);
        let det = px * qy - py * qx;
        if det == 0 {
            return Err(DegenerateLattice(p, q));
        }
        let e = px.extended_gcd(&qx);
        let (mut a, mut b) = (e.gcd, e.x * py + e.y * qy);
        if a == 0 {
            unreachable!("independent periods cannot both be vertical");
        }
        if a < 0 {
            a = -a;
            b = -b;
        }
        let d = det.abs() / a;
        Ok(Lattice {
            a,
            b: b.rem_euclid(d),
            d,
        })
    }

    pub fn basis(&self) -> (Cell, Cell) {
        (
            Cell::new(self.a as i32, self.b as i32),
            Cell::new(0, self.d as i32),
        )
    }

    /// Index of Z² / lattice.
    pub fn area(&self) -> u64 {
        (self.a * self.d) as u64
    }

    /// Canonical representative with `0 <= x < a` and `0 <= y < d`.
    pub fn reduce(&self, c: Cell) -> Cell {
        let x = c.x as i64;
        let rx = x.rem_euclid(self.a);
        let k = (x - rx) / self.a;
        let ry = (c.y as i64 - k * self.b).rem_euclid(self.d);
        Cell::new(rx as i32, ry as i32)
    }

    /// Dense index of the representative of `c`, in `0..area()`.
    pub fn index(&self, c: Cell) -> usize {
        let r = self.reduce(c);
        (r.x as i64 * self.d + r.y as i64) as usize
    }

    pub fn representative(&self, index: usize) -> Cell {
        let i = index as i64;
        Cell::new((i / self.d) as i32, (i % self.d) as i32)
    }

    pub fn contains(&self, v: Cell) -> bool {
        self.reduce(v) == Cell::ORIGIN
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rectangle_torus() {
        let l = Lattice::new(Cell::new(6, 0), Cell::new(0, 9)).unwrap();
        assert_eq!(l.area(), 54);
        assert_eq!(l.reduce(Cell::new(-1, 10)), Cell::new(5, 1));
    }

    #[test]
    fn dependent_rejected() {
        assert!(Lattice::new(Cell::new(2, 4), Cell::new(1, 2)).is_err());
    }

    proptest! {
        #[test]
        fn reduction_is_canonical(
            px in -20i32..20, py in -20i32..20, qx in -20i32..20, qy in -20i32..20,
            x in -100i32..100, y in -100i32..100, m in -3i32..3, n in -3i32..3,
        ) {
            let p = Cell::new(px, py);
            let q = Cell::new(qx, qy);
            prop_assume!(px * qy - py * qx != 0);
            let l = Lattice::new(p, q).unwrap();
            prop_assert_eq!(l.area() as i64, (px as i64 * qy as i64 - py as i64 * qx as i64).abs());
            let c = Cell::new(x, y);
            let shifted = c + m * p + n * q;
            prop_assert_eq!(l.reduce(c), l.reduce(shifted));
            prop_assert!(l.contains(c - l.reduce(c)));
            prop_assert!(l.contains(p) && l.contains(q));
            prop_assert_eq!(l.representative(l.index(c)), l.reduce(c));
        }
    }
}
