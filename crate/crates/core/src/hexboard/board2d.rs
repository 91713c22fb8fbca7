use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::HexError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    White,
    Black,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::White => Player::Black,
            Player::Black => Player::White,
        }
    }

    pub fn cell(self) -> Cell {
        match self {
            Player::White => Cell::White,
            Player::Black => Cell::Black,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::White => "White",
            Player::Black => "Black",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Cell {
    #[default]
    Grey,
    White,
    Black,
}

/// A rhombic board of `rows × cols` hexagonal tiles.
///
/// White owns the top and bottom rows (`W`, `W′`), Black the left and right
/// columns (`B`, `B′`). Tile `(i,j)` touches `(i±1,j)`, `(i,j±1)`,
/// `(i+1,j−1)` and `(i−1,j+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HexBoard2D {
    pub rows: usize,
    pub cols: usize,
}

const STENCIL: [(isize, isize); 6] = [(-1, 0), (1, 0), (0, -1), (0, 1), (1, -1), (-1, 1)];

impl HexBoard2D {
    pub fn new(rows: usize, cols: usize) -> Result<Self, HexError> {
        if rows == 0 || cols == 0 {
            return Err(HexError::EmptyBoard);
        }
        Ok(HexBoard2D { rows, cols })
    }

    pub fn tiles(&self) -> usize {
        self.rows * self.cols
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.cols + j
    }

    pub fn coords(&self, t: usize) -> (usize, usize) {
        (t / self.cols, t % self.cols)
    }

    pub fn neighbors(&self, i: usize, j: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        STENCIL.iter().filter_map(move |&(di, dj)| {
            let a = i as isize + di;
            let b = j as isize + dj;
            (a >= 0 && b >= 0 && (a as usize) < self.rows && (b as usize) < self.cols)
                .then_some((a as usize, b as usize))
        })
    }

    /// Neighbor lists by tile index.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.tiles())
            .map(|t| {
                let (i, j) = self.coords(t);
                self.neighbors(i, j).map(|(a, b)| self.index(a, b)).collect()
            })
            .collect()
    }

    fn touches_start(&self, p: Player, t: usize) -> bool {
        let (i, j) = self.coords(t);
        match p {
            Player::White => i == 0,
            Player::Black => j == 0,
        }
    }

    fn touches_end(&self, p: Player, t: usize) -> bool {
        let (i, j) = self.coords(t);
        match p {
            Player::White => i == self.rows - 1,
            Player::Black => j == self.cols - 1,
        }
    }
}

/// Cell states of one board.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coloring2D {
    pub board: HexBoard2D,
    pub cells: Vec<Cell>,
}

impl Coloring2D {
    pub fn empty(board: HexBoard2D) -> Self {
        Coloring2D {
            board,
            cells: vec![Cell::Grey; board.tiles()],
        }
    }

    /// Bit `t` of `white_mask` set means tile `t` is White, otherwise Black.
    pub fn from_mask(board: HexBoard2D, white_mask: u64) -> Self {
        Coloring2D {
            board,
            cells: (0..board.tiles())
                .map(|t| if white_mask >> t & 1 == 1 { Cell::White } else { Cell::Black })
                .collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Cell {
        self.cells[self.board.index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, c: Cell) {
        let t = self.board.index(i, j);
        self.cells[t] = c;
    }

    pub fn count(&self, c: Cell) -> usize {
        self.cells.iter().filter(|&&x| x == c).count()
    }

    /// Text form: `hex <rows> <cols>` then one row per line over `W`, `B`, `.`.
    pub fn to_text(&self) -> String {
        let mut out = format!("hex {} {}\n", self.board.rows, self.board.cols);
        for i in 0..self.board.rows {
            for j in 0..self.board.cols {
                out.push(match self.get(i, j) {
                    Cell::White => 'W',
                    Cell::Black => 'B',
                    Cell::Grey => '.',
                });
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, HexError> {
        let perr = |line: usize, message: &str| HexError::Parse {
            line,
            message: message.to_string(),
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or_else(|| perr(1, "missing header"))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 || parts[0] != "hex" {
            return Err(perr(hl, "expected `hex <rows> <cols>`"));
        }
        let rows: usize = parts[1].parse().map_err(|_| perr(hl, "bad row count"))?;
        let cols: usize = parts[2].parse().map_err(|_| perr(hl, "bad column count"))?;
        let board = HexBoard2D::new(rows, cols)?;
        let mut cells = Vec::with_capacity(board.tiles());
        let mut seen = 0;
        for (ln, line) in lines {
            if line.chars().count() != cols {
                return Err(perr(ln, "row has the wrong length"));
            }
            for ch in line.chars() {
                cells.push(match ch {
                    'W' | 'w' => Cell::White,
                    'B' | 'b' => Cell::Black,
                    '.' => Cell::Grey,
                    _ => return Err(perr(ln, "expected one of W, B, .")),
                });
            }
            seen += 1;
        }
        if seen != rows {
            return Err(perr(hl, "wrong number of rows"));
        }
        Ok(Coloring2D { board, cells })
    }
}

/// Winner of a full coloring with a tile path between the winner's borders.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Win2D {
    pub winner: Player,
    pub path: Vec<(usize, usize)>,
}

/// Does `p` connect its two borders?
pub fn winner_by_connectivity(c: &Coloring2D, p: Player) -> Option<Vec<(usize, usize)>> {
    let b = c.board;
    let mut prev = vec![usize::MAX; b.tiles()];
    let mut queue = VecDeque::new();
    for t in 0..b.tiles() {
        if c.cells[t] == p.cell() && b.touches_start(p, t) {
            prev[t] = t;
            queue.push_back(t);
        }
    }
    while let Some(t) = queue.pop_front() {
        if b.touches_end(p, t) {
            let mut path = vec![b.coords(t)];
            let mut x = t;
            while prev[x] != x {
                x = prev[x];
                path.push(b.coords(x));
            }
            path.reverse();
            return Some(path);
        }
        let (i, j) = b.coords(t);
        for (a, d) in b.neighbors(i, j) {
            let u = b.index(a, d);
            if prev[u] == usize::MAX && c.cells[u] == p.cell() {
                prev[u] = t;
                queue.push_back(u);
            }
        }
    }
    None
}

/// Color of a tile on the board extended by one ring of border tiles:
/// row `−1` and row `rows` are White, column `−1` and column `cols` Black,
/// with the corners `(−1,·)` and `(rows,−1)` White.
fn extended(c: &Coloring2D, i: isize, j: isize) -> Player {
    let (r, k) = (c.board.rows as isize, c.board.cols as isize);
    if i == -1 {
        Player::White
    } else if j == k {
        Player::Black
    } else if i == r {
        Player::White
    } else if j == -1 {
        Player::Black
    } else {
        match c.cells[c.board.index(i as usize, j as usize)] {
            Cell::White => Player::White,
            Cell::Black => Player::Black,
            Cell::Grey => unreachable!("checked before the walk"),
        }
    }
}

/// Follows the path between white and black tiles from the corner where the
/// top border meets the right border, and reads off the winner from where it
/// leaves the board. Cross-checked against breadth-first connectivity.
pub fn winner_2d(c: &Coloring2D) -> Result<Win2D, HexError> {
    let b = c.board;
    if let Some(t) = c.cells.iter().position(|&x| x == Cell::Grey) {
        let (i, j) = b.coords(t);
        return Err(HexError::GreyTile(i, j));
    }
    let (r, k) = (b.rows as isize, b.cols as isize);
    let inside = |t: (isize, isize)| t.0 >= -1 && t.0 <= r && t.1 >= -1 && t.1 <= k;
    let color = |t: (isize, isize)| extended(c, t.0, t.1);

    // Door between (−1,k) [White] and (0,k) [Black]; the triangle behind it
    // has its third corner at (0,k−1).
    let mut p = (-1, k);
    let mut q = (0, k);
    let mut third = (0, k - 1);
    let mut white_side = vec![p];
    let mut black_side = vec![q];
    let mut steps = 0usize;
    let limit = 2 * ((b.rows + 2) * (b.cols + 2)) + 4;
    loop {
        // exactly one of the two edges {p,third}, {q,third} is bichromatic
        let (np, nq, other) = if color(third) == color(p) {
            (third, q, p)
        } else {
            (p, third, q)
        };
        let (w, bl) = if color(np) == Player::White { (np, nq) } else { (nq, np) };
        if white_side.last() != Some(&w) {
            white_side.push(w);
        }
        if black_side.last() != Some(&bl) {
            black_side.push(bl);
        }
        let next = (np.0 + nq.0 - other.0, np.1 + nq.1 - other.1);
        p = np;
        q = nq;
        steps += 1;
        assert!(steps <= limit, "edge walk did not terminate");
        if !inside(next) {
            break;
        }
        third = next;
    }
    let (w, bl) = if color(p) == Player::White { (p, q) } else { (q, p) };
    let white_wins = w.0 == r;
    let black_wins = bl.1 == -1;
    let winner = match (white_wins, black_wins) {
        (true, false) => Player::White,
        (false, true) => Player::Black,
        _ => return Err(HexError::Disagreement),
    };
    // keep the stretch between the last start-border tile and the first
    // end-border tile
    let (side, from, to) = match winner {
        Player::White => {
            let from = white_side.iter().rposition(|t| t.0 == -1);
            let to = white_side.iter().position(|t| t.0 == r);
            (white_side, from, to)
        }
        Player::Black => {
            let from = black_side.iter().rposition(|t| t.1 == k);
            let to = black_side.iter().position(|t| t.1 == -1);
            (black_side, from, to)
        }
    };
    let from = from.map_or(0, |x| x + 1);
    let to = to.unwrap_or(side.len());
    let path: Vec<(usize, usize)> = side[from..to]
        .iter()
        .map(|&(i, j)| (i as usize, j as usize))
        .collect();

    let other = winner_by_connectivity(c, winner.other());
    if other.is_some() || winner_by_connectivity(c, winner).is_none() {
        return Err(HexError::Disagreement);
    }
    Ok(Win2D { winner, path })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_path(c: &Coloring2D, w: &Win2D) {
        let b = c.board;
        assert!(!w.path.is_empty());
        for &(i, j) in &w.path {
            assert_eq!(c.get(i, j), w.winner.cell());
        }
        for pair in w.path.windows(2) {
            let (i, j) = pair[0];
            assert!(b.neighbors(i, j).any(|t| t == pair[1]));
        }
        let (s, e) = (w.path[0], *w.path.last().unwrap());
        match w.winner {
            Player::White => assert!(s.0 == 0 && e.0 == b.rows - 1),
            Player::Black => assert!(s.1 == b.cols - 1 && e.1 == 0),
        }
    }

    #[test]
    fn monochrome_boards() {
        let b = HexBoard2D::new(3, 3).unwrap();
        let all_white = Coloring2D::from_mask(b, u64::MAX);
        let w = winner_2d(&all_white).unwrap();
        assert_eq!(w.winner, Player::White);
        check_path(&all_white, &w);
        let all_black = Coloring2D::from_mask(b, 0);
        let w = winner_2d(&all_black).unwrap();
        assert_eq!(w.winner, Player::Black);
        check_path(&all_black, &w);
    }

    #[test]
    fn exhaustive_small_boards() {
        for (r, k) in [(1, 1), (1, 3), (2, 2), (3, 2), (2, 3), (3, 3)] {
            let b = HexBoard2D::new(r, k).unwrap();
            for mask in 0..(1u64 << b.tiles()) {
                let c = Coloring2D::from_mask(b, mask);
                let w = winner_2d(&c).unwrap();
                check_path(&c, &w);
            }
        }
    }

    #[test]
    fn grey_tile_rejected() {
        let b = HexBoard2D::new(2, 2).unwrap();
        assert_eq!(winner_2d(&Coloring2D::empty(b)), Err(HexError::GreyTile(0, 0)));
    }

    #[test]
    fn adjacency_is_symmetric() {
        let b = HexBoard2D::new(4, 5).unwrap();
        let adj = b.adjacency();
        for (t, ns) in adj.iter().enumerate() {
            for &u in ns {
                assert!(adj[u].contains(&t));
            }
        }
        assert_eq!(adj[b.index(1, 1)].len(), 6);
    }

    #[test]
    fn text_round_trip() {
        let mut c = Coloring2D::empty(HexBoard2D::new(2, 3).unwrap());
        c.set(0, 1, Cell::White);
        c.set(1, 2, Cell::Black);
        let t = c.to_text();
        assert_eq!(t, "hex 2 3\n.W.\n..B\n");
        assert_eq!(Coloring2D::parse(&t).unwrap(), c);
        assert!(Coloring2D::parse("hex 2 3\n.W.\n").is_err());
    }
}
