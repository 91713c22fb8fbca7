//! HEX boards: the rhombic 2-D board with its edge-following winner walk,
//! and the d-dimensional board `H(n,d)` with the simplex-chain walk through
//! its Freudenthal triangulation.

mod board2d;
mod ddim;
mod geometry;

pub use board2d::{winner_2d, winner_by_connectivity, Cell, Coloring2D, HexBoard2D, Player, Win2D};
pub use ddim::{
    winner_ddim, winners_by_connectivity, DBoard, DColoring, DWin, KuhnSimplex,
};
pub use geometry::{simplex_of_point, simplex_of_point_f64, triangulation_check, TriangulationReport};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HexError {
    #[error("tile ({0}, {1}) is grey")]
    GreyTile(usize, usize),
    #[error("interior vertex {0:?} is uncolored")]
    Uncolored(Vec<i64>),
    #[error("point {0:?} lies outside the cube")]
    OutsideCube(Vec<String>),
    #[error("color {color} out of range 1..={d}")]
    BadColor { color: u8, d: usize },
    #[error("board dimensions must be positive")]
    EmptyBoard,
    #[error("walk revisited a simplex at base {0:?}")]
    Revisit(Vec<i64>),
    #[error("walk ended on a facet outside every upper hyperplane")]
    BadTerminal,
    #[error("edge-following and connectivity disagree")]
    Disagreement,
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}
