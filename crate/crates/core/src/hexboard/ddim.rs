use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{Cell, Coloring2D, HexError};

/// The board `H(n,d)` on `{−1,…,n+1}^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DBoard {
    pub n: usize,
    pub d: usize,
}

impl DBoard {
    pub fn new(n: usize, d: usize) -> Result<Self, HexError> {
        if d == 0 {
            return Err(HexError::EmptyBoard);
        }
        Ok(DBoard { n, d })
    }

    pub fn interior_count(&self) -> usize {
        (self.n + 1).pow(self.d as u32)
    }

    pub fn in_range(&self, v: &[i64]) -> bool {
        v.iter().all(|&x| x >= -1 && x <= self.n as i64 + 1)
    }

    pub fn is_interior(&self, v: &[i64]) -> bool {
        v.iter().all(|&x| x >= 0 && x <= self.n as i64)
    }

    /// Position of an interior vertex, first coordinate fastest.
    pub fn interior_index(&self, v: &[i64]) -> usize {
        v.iter()
            .rev()
            .fold(0, |acc, &x| acc * (self.n + 1) + x as usize)
    }

    pub fn interior_vertex(&self, mut idx: usize) -> Vec<i64> {
        (0..self.d)
            .map(|_| {
                let x = idx % (self.n + 1);
                idx /= self.n + 1;
                x as i64
            })
            .collect()
    }

    /// Preassigned boundary color: the first coordinate at `−1`, else the
    /// first at `n+1`. `None` on interior vertices.
    pub fn kappa(&self, v: &[i64]) -> Option<u8> {
        if let Some(i) = v.iter().position(|&x| x == -1) {
            return Some(i as u8 + 1);
        }
        v.iter()
            .position(|&x| x == self.n as i64 + 1)
            .map(|i| i as u8 + 1)
    }

    /// Neighbors `v ± δ`, `δ ∈ {0,1}^d ∖ {0}`, inside the board.
    pub fn neighbors(&self, v: &[i64]) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        for bits in 1u32..(1 << self.d) {
            for s in [1i64, -1] {
                let w: Vec<i64> = v
                    .iter()
                    .enumerate()
                    .map(|(i, &x)| x + if bits >> i & 1 == 1 { s } else { 0 })
                    .collect();
                if self.in_range(&w) {
                    out.push(w);
                }
            }
        }
        out
    }

    /// All vertices of the board.
    pub fn vertices(&self) -> Vec<Vec<i64>> {
        let side = self.n + 3;
        (0..side.pow(self.d as u32))
            .map(|mut idx| {
                (0..self.d)
                    .map(|_| {
                        let x = idx % side;
                        idx /= side;
                        x as i64 - 1
                    })
                    .collect()
            })
            .collect()
    }
}

/// Colors `1..=d` on interior vertices (`0` = uncolored).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DColoring {
    pub board: DBoard,
    pub colors: Vec<u8>,
}

impl DColoring {
    pub fn uncolored(board: DBoard) -> Self {
        DColoring {
            board,
            colors: vec![0; board.interior_count()],
        }
    }

    pub fn from_colors(board: DBoard, colors: Vec<u8>) -> Result<Self, HexError> {
        if colors.len() != board.interior_count() {
            return Err(HexError::Parse {
                line: 0,
                message: format!("expected {} colors", board.interior_count()),
            });
        }
        for &c in &colors {
            if c as usize > board.d {
                return Err(HexError::BadColor { color: c, d: board.d });
            }
        }
        Ok(DColoring { board, colors })
    }

    pub fn monochrome(board: DBoard, color: u8) -> Result<Self, HexError> {
        Self::from_colors(board, vec![color; board.interior_count()])
    }

    /// The dual picture of a square `(n+1)×(n+1)` tile board on `H(n,2)`:
    /// tile `(i,j)` is vertex `(i, n−j)`, White is color 1, Black color 2.
    pub fn from_hex(c: &Coloring2D) -> Result<Self, HexError> {
        let b = c.board;
        if b.rows != b.cols {
            return Err(HexError::Parse {
                line: 0,
                message: "dual board needs a square tile board".into(),
            });
        }
        let n = b.rows - 1;
        let board = DBoard::new(n, 2)?;
        let mut out = DColoring::uncolored(board);
        for i in 0..b.rows {
            for j in 0..b.cols {
                let col = match c.get(i, j) {
                    Cell::White => 1,
                    Cell::Black => 2,
                    Cell::Grey => 0,
                };
                out.set(&[i as i64, (n - j) as i64], col);
            }
        }
        Ok(out)
    }

    pub fn set(&mut self, v: &[i64], color: u8) {
        let idx = self.board.interior_index(v);
        self.colors[idx] = color;
    }

    /// Color of any vertex, boundary included.
    pub fn color(&self, v: &[i64]) -> u8 {
        match self.board.kappa(v) {
            Some(c) => c,
            None => self.colors[self.board.interior_index(v)],
        }
    }

    /// Text form: `dhex n d` then `v_1 … v_d : color` per interior vertex.
    pub fn to_text(&self) -> String {
        let mut out = format!("dhex {} {}\n", self.board.n, self.board.d);
        for (idx, &c) in self.colors.iter().enumerate() {
            let v = self.board.interior_vertex(idx);
            let vs: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("{} : {}\n", vs.join(" "), c));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, HexError> {
        let perr = |line: usize, m: &str| HexError::Parse {
            line,
            message: m.to_string(),
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or_else(|| perr(1, "missing header"))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 || parts[0] != "dhex" {
            return Err(perr(hl, "expected `dhex <n> <d>`"));
        }
        let n = parts[1].parse().map_err(|_| perr(hl, "bad n"))?;
        let d = parts[2].parse().map_err(|_| perr(hl, "bad d"))?;
        let board = DBoard::new(n, d)?;
        let mut out = DColoring::uncolored(board);
        for (ln, line) in lines {
            let (lhs, rhs) = line.split_once(':').ok_or_else(|| perr(ln, "missing ':'"))?;
            let v: Vec<i64> = lhs
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| perr(ln, "bad coordinate")))
                .collect::<Result<_, _>>()?;
            if v.len() != d || !board.is_interior(&v) {
                return Err(perr(ln, "not an interior vertex"));
            }
            let c: u8 = rhs.trim().parse().map_err(|_| perr(ln, "bad color"))?;
            if c == 0 || c as usize > d {
                return Err(HexError::BadColor { color: c, d });
            }
            out.set(&v, c);
        }
        Ok(out)
    }
}

/// The simplex `conv{a, a+e_{π₁}, a+e_{π₁}+e_{π₂}, …, a+𝟙}` of the
/// Freudenthal triangulation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KuhnSimplex {
    pub base: Vec<i64>,
    pub perm: Vec<usize>,
}

impl KuhnSimplex {
    pub fn vertices(&self) -> Vec<Vec<i64>> {
        let mut v = self.base.clone();
        let mut out = vec![v.clone()];
        for &axis in &self.perm {
            v[axis] += 1;
            out.push(v.clone());
        }
        out
    }

    /// The simplex across the facet opposite vertex `k`, and the position
    /// of its new vertex.
    pub fn neighbor(&self, k: usize) -> (KuhnSimplex, usize) {
        let d = self.perm.len();
        let mut base = self.base.clone();
        let mut perm = self.perm.clone();
        let idx = if k == 0 {
            base[perm[0]] += 1;
            perm.rotate_left(1);
            d
        } else if k == d {
            base[perm[d - 1]] -= 1;
            perm.rotate_right(1);
            0
        } else {
            perm.swap(k - 1, k);
            k
        };
        (KuhnSimplex { base, perm }, idx)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DWin {
    /// Winning color in `1..=d`.
    pub color: usize,
    /// Vertices of the winning color from `{x_i = −1}` to `{x_i = n+1}`.
    pub path: Vec<Vec<i64>>,
    /// Completely colored simplices, starting at `Δ₀`.
    pub chain: Vec<KuhnSimplex>,
}

/// Walks the chain of completely colored simplices from `Δ₀` to the
/// boundary and reads off the winner.
pub fn winner_ddim(c: &DColoring) -> Result<DWin, HexError> {
    let b = c.board;
    let d = b.d;
    if let Some(idx) = c.colors.iter().position(|&x| x == 0) {
        return Err(HexError::Uncolored(b.interior_vertex(idx)));
    }
    let mut s = KuhnSimplex {
        base: vec![-1; d],
        perm: (0..d).collect(),
    };
    let mut entry = d;
    let mut visited = HashSet::from([s.clone()]);
    let mut chain = vec![s.clone()];
    let mut facets: Vec<Vec<Vec<i64>>> = Vec::new();
    let terminal = loop {
        let verts = s.vertices();
        let colors: Vec<u8> = verts.iter().map(|v| c.color(v)).collect();
        let mut facet = verts.clone();
        facet.remove(entry);
        facets.push(facet);
        let exit = (0..=d)
            .find(|&k| k != entry && colors[k] == colors[entry])
            .expect("entry facet is completely colored");
        let (next, idx) = s.neighbor(exit);
        if next.base.iter().any(|&x| x < -1 || x > b.n as i64) {
            let mut facet = verts;
            facet.remove(exit);
            break facet;
        }
        if !visited.insert(next.clone()) {
            return Err(HexError::Revisit(next.base));
        }
        chain.push(next.clone());
        s = next;
        entry = idx;
    };
    let top = b.n as i64 + 1;
    let i = (0..d)
        .find(|&i| terminal.iter().all(|v| v[i] == top))
        .ok_or(HexError::BadTerminal)?;
    facets.push(terminal);
    let color = i as u8 + 1;
    let mut path: Vec<Vec<i64>> = Vec::new();
    for f in &facets {
        let v = f
            .iter()
            .find(|v| c.color(v) == color)
            .expect("complete facet has every color")
            .clone();
        if path.last() != Some(&v) {
            path.push(v);
        }
    }
    debug_assert_eq!(path[0], {
        let mut s = vec![-1i64; d];
        for x in s.iter_mut().take(i) {
            *x = 0;
        }
        s
    });
    Ok(DWin {
        color: i + 1,
        path,
        chain,
    })
}

/// Colors `i` with a color-`i` path from `{x_i = −1}` to `{x_i = n+1}`.
pub fn winners_by_connectivity(c: &DColoring) -> Vec<usize> {
    let b = c.board;
    let top = b.n as i64 + 1;
    let all = b.vertices();
    let mut out = Vec::new();
    for i in 0..b.d {
        let color = i as u8 + 1;
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut queue: VecDeque<Vec<i64>> = all
            .iter()
            .filter(|v| v[i] == -1 && c.color(v) == color)
            .cloned()
            .collect();
        seen.extend(queue.iter().cloned());
        let mut won = false;
        while let Some(v) = queue.pop_front() {
            if v[i] == top {
                won = true;
                break;
            }
            for w in b.neighbors(&v) {
                if c.color(&w) == color && seen.insert(w.clone()) {
                    queue.push_back(w);
                }
            }
        }
        if won {
            out.push(i + 1);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hexboard::{winner_2d, HexBoard2D, Player};

    fn check(c: &DColoring, w: &DWin) {
        let b = c.board;
        let i = w.color - 1;
        assert_eq!(w.path[0][i], -1);
        assert_eq!(w.path.last().unwrap()[i], b.n as i64 + 1);
        for v in &w.path {
            assert_eq!(c.color(v) as usize, w.color);
        }
        for pair in w.path.windows(2) {
            assert!(b.neighbors(&pair[0]).contains(&pair[1]));
        }
        assert!(winners_by_connectivity(c).contains(&w.color));
    }

    #[test]
    fn kappa_values() {
        let b = DBoard::new(2, 3).unwrap();
        assert_eq!(b.kappa(&[0, -1, -1]), Some(2));
        assert_eq!(b.kappa(&[3, 0, 3]), Some(1));
        assert_eq!(b.kappa(&[0, 1, 3]), Some(3));
        assert_eq!(b.kappa(&[0, 1, 2]), None);
    }

    #[test]
    fn delta0_facet_is_complete() {
        for d in 1..=4 {
            let b = DBoard::new(2, d).unwrap();
            let s = KuhnSimplex {
                base: vec![-1; d],
                perm: (0..d).collect(),
            };
            let v = s.vertices();
            for (k, vk) in v.iter().enumerate().take(d) {
                assert_eq!(b.kappa(vk), Some(k as u8 + 1));
            }
            assert!(b.is_interior(&v[d]));
        }
    }

    #[test]
    fn neighbor_is_an_involution() {
        let s = KuhnSimplex {
            base: vec![0, 1, 0],
            perm: vec![2, 0, 1],
        };
        for k in 0..=3 {
            let (t, idx) = s.neighbor(k);
            let (back, _) = t.neighbor(idx);
            assert_eq!(back, s);
            let mut shared = s.vertices();
            shared.remove(k);
            let mut other = t.vertices();
            other.remove(idx);
            shared.sort();
            other.sort();
            assert_eq!(shared, other);
        }
    }

    #[test]
    fn monochrome_winner() {
        for d in 1..=3 {
            let b = DBoard::new(2, d).unwrap();
            for col in 1..=d as u8 {
                let c = DColoring::monochrome(b, col).unwrap();
                let w = winner_ddim(&c).unwrap();
                assert_eq!(w.color, col as usize);
                check(&c, &w);
            }
        }
    }

    #[test]
    fn agrees_with_tile_board() {
        let tb = HexBoard2D::new(3, 3).unwrap();
        for mask in 0..512u64 {
            let c2 = Coloring2D::from_mask(tb, mask);
            let w2 = winner_2d(&c2).unwrap();
            let cd = DColoring::from_hex(&c2).unwrap();
            let wd = winner_ddim(&cd).unwrap();
            check(&cd, &wd);
            let expect = if w2.winner == Player::White { 1 } else { 2 };
            assert_eq!(wd.color, expect, "mask {mask}");
        }
    }

    #[test]
    fn uncolored_rejected() {
        let c = DColoring::uncolored(DBoard::new(1, 2).unwrap());
        assert!(matches!(winner_ddim(&c), Err(HexError::Uncolored(_))));
    }

    #[test]
    fn text_round_trip() {
        let mut c = DColoring::monochrome(DBoard::new(1, 2).unwrap(), 1).unwrap();
        c.set(&[1, 0], 2);
        let t = c.to_text();
        assert_eq!(DColoring::parse(&t).unwrap(), c);
        assert!(DColoring::parse("dhex 1 2\n0 0 : 3\n").is_err());
    }
}
