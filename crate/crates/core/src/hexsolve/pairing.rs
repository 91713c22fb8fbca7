use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Position, SolveError, SolveOptions, Solver};
use crate::hexboard::{winner_2d, Cell, HexBoard2D, Player};

fn check_board(b: HexBoard2D) -> Result<(), SolveError> {
    if b.rows != b.cols + 1 {
        return Err(SolveError::NotPairingBoard {
            rows: b.rows,
            cols: b.cols,
        });
    }
    Ok(())
}

/// Partner of a tile on an `(n+1)×n` board: `(i,j) ↔ (j+1,i)` for `i ≤ j`.
pub fn pairing_partner(b: HexBoard2D, tile: (usize, usize)) -> Result<(usize, usize), SolveError> {
    check_board(b)?;
    let (i, j) = tile;
    if i >= b.rows || j >= b.cols {
        return Err(SolveError::Illegal(format!("tile ({i}, {j}) is off the board")));
    }
    Ok(if i <= j { (j + 1, i) } else { (j, i - 1) })
}

/// Black's reply: the partner of White's last move, or the first free tile
/// if the partner is taken.
pub fn pairing_move(p: &Position, last: Option<(usize, usize)>) -> Result<(usize, usize), SolveError> {
    let b = p.coloring.board;
    check_board(b)?;
    if p.to_move != Player::Black {
        return Err(SolveError::Illegal("pairing plays Black".into()));
    }
    let last = last.ok_or(SolveError::NoLastMove)?;
    let (a, c) = pairing_partner(b, last)?;
    if p.coloring.get(a, c) == Cell::Grey {
        return Ok((a, c));
    }
    (0..b.tiles())
        .map(|t| b.coords(t))
        .find(|&(i, j)| p.coloring.get(i, j) == Cell::Grey)
        .ok_or_else(|| SolveError::Illegal("board is full".into()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingReport {
    pub rows: usize,
    pub cols: usize,
    /// Complete games (or White deviations) examined.
    pub lines: u64,
    pub black_wins: u64,
    /// Every position after a Black pairing reply that the exact solver
    /// still rates as Black-winning (exhaustive mode only).
    pub solver_agrees: bool,
}

/// Every sequence of White moves against the pairing reply, each line
/// played to a full board; with `check_solver` every position reached
/// after Black's reply is also solved.
pub fn pairing_exhaustive(b: HexBoard2D, check_solver: bool) -> Result<PairingReport, SolveError> {
    check_board(b)?;
    let mut solver = Solver::new(b, &SolveOptions::default())?;
    let mut rep = PairingReport {
        rows: b.rows,
        cols: b.cols,
        lines: 0,
        black_wins: 0,
        solver_agrees: true,
    };
    fn walk(
        p: &Position,
        solver: &mut Solver,
        check: bool,
        rep: &mut PairingReport,
    ) -> Result<(), SolveError> {
        let b = p.coloring.board;
        let free: Vec<(usize, usize)> = (0..b.tiles())
            .map(|t| b.coords(t))
            .filter(|&(i, j)| p.coloring.get(i, j) == Cell::Grey)
            .collect();
        if free.is_empty() {
            rep.lines += 1;
            if winner_2d(&p.coloring)?.winner == Player::Black {
                rep.black_wins += 1;
            }
            return Ok(());
        }
        for mv in free {
            let after_white = p.play(mv)?;
            let reply = pairing_move(&after_white, Some(mv))?;
            let q = after_white.play(reply)?;
            if check && solver.value(&q.coloring, Player::White)? != Player::Black {
                rep.solver_agrees = false;
            }
            walk(&q, solver, check, rep)?;
        }
        Ok(())
    }
    walk(&Position::empty(b), &mut solver, check_solver, &mut rep)?;
    Ok(rep)
}

/// Seeded uniformly random White play against the pairing reply.
pub fn pairing_playouts(b: HexBoard2D, games: u64, seed: u64) -> Result<PairingReport, SolveError> {
    check_board(b)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = PairingReport {
        rows: b.rows,
        cols: b.cols,
        lines: 0,
        black_wins: 0,
        solver_agrees: true,
    };
    for _ in 0..games {
        let mut p = Position::empty(b);
        let mut order: Vec<usize> = (0..b.tiles()).collect();
        order.shuffle(&mut rng);
        while p.grey_count() > 0 {
            let mv = order
                .iter()
                .map(|&t| b.coords(t))
                .find(|&(i, j)| p.coloring.get(i, j) == Cell::Grey)
                .expect("grey tile left");
            p = p.play(mv)?;
            let reply = pairing_move(&p, Some(mv))?;
            p = p.play(reply)?;
        }
        rep.lines += 1;
        if winner_2d(&p.coloring)?.winner == Player::Black {
            rep.black_wins += 1;
        }
    }
    Ok(rep)
}
