//! Compiling Wang tile sets into seven orthogonally convex polyominoes, and
//! checking the resulting tilings at the level of cells and of level-3 units.

pub mod assembly;
pub mod blocks;
pub mod bn;
pub mod checks;
pub mod compiler;
pub mod grid;
pub mod lattice;
pub mod pattern;
pub mod render;
pub mod solver;
pub mod wang;
