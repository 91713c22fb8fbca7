use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::hexboard::{DColoring, HexError, KuhnSimplex};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisplacementReport {
    /// Vertices sent outside `[0,n]^d`; nonzero exactly when some color
    /// has a winning path.
    pub escaping: usize,
    pub simplices: usize,
    /// Simplices whose displacement vectors do not share a closed orthant.
    pub orthant_violations: usize,
    pub first_violation: Option<KuhnSimplex>,
}

impl DisplacementReport {
    pub fn consistent(&self) -> bool {
        self.orthant_violations == 0
    }
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(d - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, d - 1);
            out.push(q);
        }
    }
    out
}

/// Builds the map `v ↦ v ± e_i` on `{0,…,n}^d` (plus when a path of color
/// `i` joins `v` to `{x_i = 0}`) and checks every simplex of the cube's
/// triangulation for a common orthant. `corrupt` flips the sign at one
/// vertex.
pub fn displacement_consistency_check(
    c: &DColoring,
    corrupt: Option<&[i64]>,
) -> Result<DisplacementReport, HexError> {
    let b = c.board;
    let d = b.d;
    let n = b.n as i64;
    if let Some(idx) = c.colors.iter().position(|&x| x == 0) {
        return Err(HexError::Uncolored(b.interior_vertex(idx)));
    }
    let mut reach = vec![false; b.interior_count()];
    for i in 0..d {
        let col = i as u8 + 1;
        let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
        for idx in 0..b.interior_count() {
            let v = b.interior_vertex(idx);
            if v[i] == 0 && c.colors[idx] == col {
                reach[idx] = true;
                queue.push_back(v);
            }
        }
        while let Some(v) = queue.pop_front() {
            for w in b.neighbors(&v) {
                if !b.is_interior(&w) {
                    continue;
                }
                let k = b.interior_index(&w);
                if c.colors[k] == col && !reach[k] {
                    reach[k] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let sign = |v: &[i64]| -> (usize, i64) {
        let k = b.interior_index(v);
        let mut s = if reach[k] { 1 } else { -1 };
        if corrupt == Some(v) {
            s = -s;
        }
        (c.colors[k] as usize - 1, s)
    };
    let mut escaping = 0;
    for idx in 0..b.interior_count() {
        let v = b.interior_vertex(idx);
        let (i, s) = sign(&v);
        let moved = v[i] + s;
        if moved < 0 || moved > n {
            escaping += 1;
        }
    }
    let perms = permutations(d);
    let mut simplices = 0;
    let mut violations = 0;
    let mut first = None;
    if n > 0 {
        for idx in 0..(b.n).pow(d as u32) {
            let mut t = idx;
            let base: Vec<i64> = (0..d)
                .map(|_| {
                    let x = t % b.n;
                    t /= b.n;
                    x as i64
                })
                .collect();
            for p in &perms {
                let s = KuhnSimplex {
                    base: base.clone(),
                    perm: p.clone(),
                };
                simplices += 1;
                let mut pos = vec![false; d];
                let mut neg = vec![false; d];
                for v in s.vertices() {
                    let (i, sg) = sign(&v);
                    if sg > 0 {
                        pos[i] = true;
                    } else {
                        neg[i] = true;
                    }
                }
                if (0..d).any(|i| pos[i] && neg[i]) {
                    violations += 1;
                    first.get_or_insert(s);
                }
            }
        }
    }
    Ok(DisplacementReport {
        escaping,
        simplices,
        orthant_violations: violations,
        first_violation: first,
    })
}
