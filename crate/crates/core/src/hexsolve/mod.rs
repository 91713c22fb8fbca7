//! Exact solving of 2-D HEX positions and the pairing strategy on
//! `(n+1)×n` boards.

mod pairing;

pub use pairing::{pairing_exhaustive, pairing_move, pairing_partner, pairing_playouts, PairingReport};

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hexboard::{winner_2d, Cell, Coloring2D, HexBoard2D, HexError, Player};

pub const DEFAULT_TILE_CAP: usize = 16;
pub const LARGE_TILE_CAP: usize = 25;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("illegal position: {0}")]
    Illegal(String),
    #[error("board has {tiles} tiles, cap is {cap}")]
    CapExceeded { tiles: usize, cap: usize },
    #[error("time budget exhausted after {nodes} nodes")]
    Budget { nodes: u64 },
    #[error("no opponent move to answer")]
    NoLastMove,
    #[error("pairing needs an (n+1)×n board, got {rows}×{cols}")]
    NotPairingBoard { rows: usize, cols: usize },
    #[error(transparent)]
    Board(#[from] HexError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Position {
    pub coloring: Coloring2D,
    pub to_move: Player,
}

impl Position {
    /// White moves first, so either the counts agree and White is to move,
    /// or White has one tile more and Black is to move.
    pub fn new(coloring: Coloring2D, to_move: Player) -> Result<Self, SolveError> {
        let w = coloring.count(Cell::White);
        let b = coloring.count(Cell::Black);
        let ok = match to_move {
            Player::White => w == b,
            Player::Black => w == b + 1,
        };
        if !ok {
            return Err(SolveError::Illegal(format!(
                "{w} white and {b} black tiles with {to_move} to move"
            )));
        }
        Ok(Position { coloring, to_move })
    }

    /// The mover is read off the tile counts.
    pub fn infer(coloring: Coloring2D) -> Result<Self, SolveError> {
        let w = coloring.count(Cell::White);
        let b = coloring.count(Cell::Black);
        let to_move = if w == b { Player::White } else { Player::Black };
        Self::new(coloring, to_move)
    }

    pub fn empty(board: HexBoard2D) -> Self {
        Position {
            coloring: Coloring2D::empty(board),
            to_move: Player::White,
        }
    }

    pub fn play(&self, tile: (usize, usize)) -> Result<Position, SolveError> {
        let (i, j) = tile;
        let b = self.coloring.board;
        if i >= b.rows || j >= b.cols || self.coloring.get(i, j) != Cell::Grey {
            return Err(SolveError::Illegal(format!("tile ({i}, {j}) is not a free tile")));
        }
        let mut c = self.coloring.clone();
        c.set(i, j, self.to_move.cell());
        Ok(Position {
            coloring: c,
            to_move: self.to_move.other(),
        })
    }

    pub fn grey_count(&self) -> usize {
        self.coloring.count(Cell::Grey)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub winner: Player,
    /// A move for the mover reaching `winner` if the mover wins, otherwise
    /// the first free tile. `None` on full boards.
    #[serde(rename = "move")]
    pub best_move: Option<(usize, usize)>,
    pub nodes: u64,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub tile_cap: usize,
    pub time_budget: Option<Duration>,
    /// Shuffles the move order; the value never depends on it.
    pub order_seed: Option<u64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tile_cap: DEFAULT_TILE_CAP,
            time_budget: None,
            order_seed: None,
        }
    }
}

impl SolveOptions {
    /// Allows 5×5 boards under a time budget.
    pub fn large(budget: Duration) -> Self {
        SolveOptions {
            tile_cap: LARGE_TILE_CAP,
            time_budget: Some(budget),
            order_seed: None,
        }
    }
}

/// Retrograde minimax over one board, memoized on
/// `(white mask, black mask, mover)`.
pub struct Solver {
    board: HexBoard2D,
    nbr: Vec<u32>,
    top: u32,
    bottom: u32,
    left: u32,
    right: u32,
    order: Vec<usize>,
    memo: HashMap<(u32, u32, bool), bool>,
    nodes: u64,
    deadline: Option<Instant>,
}

impl Solver {
    pub fn new(board: HexBoard2D, opts: &SolveOptions) -> Result<Self, SolveError> {
        let n = board.tiles();
        if n > opts.tile_cap || n > 32 {
            return Err(SolveError::CapExceeded {
                tiles: n,
                cap: opts.tile_cap.min(32),
            });
        }
        let mut nbr = vec![0u32; n];
        let (mut top, mut bottom, mut left, mut right) = (0, 0, 0, 0);
        for t in 0..n {
            let (i, j) = board.coords(t);
            for (a, b) in board.neighbors(i, j) {
                nbr[t] |= 1 << board.index(a, b);
            }
            if i == 0 {
                top |= 1 << t;
            }
            if i + 1 == board.rows {
                bottom |= 1 << t;
            }
            if j == 0 {
                left |= 1 << t;
            }
            if j + 1 == board.cols {
                right |= 1 << t;
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        if let Some(seed) = opts.order_seed {
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        }
        Ok(Solver {
            board,
            nbr,
            top,
            bottom,
            left,
            right,
            order,
            memo: HashMap::new(),
            nodes: 0,
            deadline: opts.time_budget.map(|d| Instant::now() + d),
        })
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    fn full(&self) -> u32 {
        if self.board.tiles() == 32 {
            u32::MAX
        } else {
            (1u32 << self.board.tiles()) - 1
        }
    }

    fn spans(&self, own: u32, from: u32, to: u32) -> bool {
        let mut reach = own & from;
        loop {
            if reach & to != 0 {
                return true;
            }
            let mut grow = reach;
            let mut r = reach;
            while r != 0 {
                let t = r.trailing_zeros() as usize;
                r &= r - 1;
                grow |= self.nbr[t] & own;
            }
            if grow == reach {
                return false;
            }
            reach = grow;
        }
    }

    /// `Some(true)` if White already has a top-bottom chain, `Some(false)`
    /// for a Black left-right chain.
    fn settled(&self, w: u32, b: u32) -> Option<bool> {
        if self.spans(w, self.top, self.bottom) {
            Some(true)
        } else if self.spans(b, self.left, self.right) {
            Some(false)
        } else {
            None
        }
    }

    fn masks(&self, c: &Coloring2D) -> Result<(u32, u32), SolveError> {
        if c.board != self.board {
            return Err(SolveError::Illegal("position is on a different board".into()));
        }
        let mut w = 0;
        let mut b = 0;
        for (t, cell) in c.cells.iter().enumerate() {
            match cell {
                Cell::White => w |= 1 << t,
                Cell::Black => b |= 1 << t,
                Cell::Grey => {}
            }
        }
        Ok((w, b))
    }

    /// Whether White wins with `white_moves` to move. No count legality is
    /// enforced here.
    fn white_wins(&mut self, w: u32, b: u32, white_moves: bool) -> Result<bool, SolveError> {
        self.nodes += 1;
        if let Some(v) = self.memo.get(&(w, b, white_moves)) {
            return Ok(*v);
        }
        if let Some(dl) = self.deadline {
            if self.nodes % 4096 == 0 && Instant::now() > dl {
                return Err(SolveError::Budget { nodes: self.nodes });
            }
        }
        let free = self.full() & !(w | b);
        let v = if free == 0 {
            let c = self.coloring(w, b);
            winner_2d(&c)?.winner == Player::White
        } else if let Some(v) = self.settled(w, b) {
            v
        } else {
            let mut v = !white_moves;
            for k in 0..self.order.len() {
                let t = self.order[k];
                if free >> t & 1 == 0 {
                    continue;
                }
                let child = if white_moves {
                    self.white_wins(w | 1 << t, b, false)?
                } else {
                    self.white_wins(w, b | 1 << t, true)?
                };
                if child == white_moves {
                    v = white_moves;
                    break;
                }
            }
            v
        };
        self.memo.insert((w, b, white_moves), v);
        Ok(v)
    }

    fn coloring(&self, w: u32, b: u32) -> Coloring2D {
        let mut c = Coloring2D::empty(self.board);
        for t in 0..self.board.tiles() {
            c.cells[t] = if w >> t & 1 == 1 {
                Cell::White
            } else if b >> t & 1 == 1 {
                Cell::Black
            } else {
                Cell::Grey
            };
        }
        c
    }

    /// Game value of `c` with `to_move` to move, without legality checks.
    pub fn value(&mut self, c: &Coloring2D, to_move: Player) -> Result<Player, SolveError> {
        let (w, b) = self.masks(c)?;
        Ok(if self.white_wins(w, b, to_move == Player::White)? {
            Player::White
        } else {
            Player::Black
        })
    }

    pub fn solve(&mut self, p: &Position) -> Result<SolveResult, SolveError> {
        let start = self.nodes;
        let (w, b) = self.masks(&p.coloring)?;
        let wm = p.to_move == Player::White;
        let white = self.white_wins(w, b, wm)?;
        let winner = if white { Player::White } else { Player::Black };
        let free = self.full() & !(w | b);
        let mut best = None;
        if free != 0 {
            let mut first = None;
            for k in 0..self.order.len() {
                let t = self.order[k];
                if free >> t & 1 == 0 {
                    continue;
                }
                first.get_or_insert(t);
                if winner != p.to_move {
                    break;
                }
                let child = if wm {
                    self.white_wins(w | 1 << t, b, false)?
                } else {
                    self.white_wins(w, b | 1 << t, true)?
                };
                if child == white {
                    best = Some(t);
                    break;
                }
            }
            best = best.or(first);
        }
        Ok(SolveResult {
            winner,
            best_move: best.map(|t| self.board.coords(t)),
            nodes: self.nodes - start,
        })
    }
}

pub fn solve(p: &Position) -> Result<SolveResult, SolveError> {
    solve_with(p, &SolveOptions::default())
}

pub fn solve_with(p: &Position, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    Position::new(p.coloring.clone(), p.to_move)?;
    Solver::new(p.coloring.board, opts)?.solve(p)
}

/// Number of distinct legal positions reachable from the empty board,
/// counting full boards and positions where someone has already won.
pub fn tree_size(rows: usize, cols: usize) -> Result<u64, SolveError> {
    let board = HexBoard2D::new(rows, cols)?;
    let n = board.tiles();
    if n > DEFAULT_TILE_CAP {
        return Err(SolveError::CapExceeded {
            tiles: n,
            cap: DEFAULT_TILE_CAP,
        });
    }
    let mut seen: HashSet<(u32, u32)> = HashSet::new();
    let mut stack = vec![(0u32, 0u32)];
    seen.insert((0, 0));
    while let Some((w, b)) = stack.pop() {
        let white = w.count_ones() == b.count_ones();
        for t in 0..n {
            if (w | b) >> t & 1 == 1 {
                continue;
            }
            let next = if white { (w | 1 << t, b) } else { (w, b | 1 << t) };
            if seen.insert(next) {
                stack.push(next);
            }
        }
    }
    Ok(seen.len() as u64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyStealingReport {
    pub n: usize,
    pub empty_board_winner: Player,
    /// Positions on which monotonicity was checked (0 when skipped).
    pub positions_checked: u64,
    pub monotonicity_violations: u64,
}

/// Solves the empty `n×n` board and, for `n ≤ 3`, checks over every
/// position and mover that turning one grey tile White never turns a
/// White win into a Black win.
pub fn strategy_stealing_report(n: usize) -> Result<StrategyStealingReport, SolveError> {
    let board = HexBoard2D::new(n, n)?;
    let mut solver = Solver::new(board, &SolveOptions::default())?;
    let empty = solver.solve(&Position::empty(board))?.winner;
    let mut checked = 0;
    let mut violations = 0;
    if n <= 3 {
        let tiles = board.tiles();
        let total = 3u32.pow(tiles as u32);
        for code in 0..total {
            let (mut w, mut b, mut x) = (0u32, 0u32, code);
            for t in 0..tiles {
                match x % 3 {
                    1 => w |= 1 << t,
                    2 => b |= 1 << t,
                    _ => {}
                }
                x /= 3;
            }
            for white_moves in [true, false] {
                if !solver.white_wins(w, b, white_moves)? {
                    continue;
                }
                for t in 0..tiles {
                    if (w | b) >> t & 1 == 0 {
                        checked += 1;
                        if !solver.white_wins(w | 1 << t, b, white_moves)? {
                            violations += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(StrategyStealingReport {
        n,
        empty_board_winner: empty,
        positions_checked: checked,
        monotonicity_violations: violations,
    })
}
