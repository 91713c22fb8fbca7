use std::collections::HashMap;

use super::{ComplexError, SimplicialComplex};

pub const DEFAULT_VERTEX_CAP: usize = 12;

/// Relabel over all permutations below this many ground elements.
const CANONICAL_LIMIT: usize = 6;

/// Non-evasiveness through the link/deletion recursion.
///
/// The recursion runs over ground sets: the link of `e` keeps every other
/// element, vertex or not, so "non-evasive" agrees with `c(K) < m` for
/// `m ≥ 1`. On the empty ground set only `{∅}` counts.
pub fn is_nonevasive(k: &SimplicialComplex) -> Result<bool, ComplexError> {
    is_nonevasive_with(k, DEFAULT_VERTEX_CAP)
}

pub fn is_nonevasive_with(k: &SimplicialComplex, cap: usize) -> Result<bool, ComplexError> {
    let n = k.num_vertices();
    if n > cap {
        return Err(ComplexError::TooManyVertices { count: n, cap });
    }
    let (_, mut masks) = k.masks()?;
    masks.sort_unstable();
    let mut search = Search {
        memo: HashMap::new(),
        perms: (0..=CANONICAL_LIMIT).map(permutations).collect(),
    };
    Ok(search.run(n, masks))
}

struct Search {
    memo: HashMap<(usize, Vec<u32>), bool>,
    perms: Vec<Vec<Vec<usize>>>,
}

impl Search {
    fn canonical(&self, n: usize, masks: Vec<u32>) -> Vec<u32> {
        if n > CANONICAL_LIMIT {
            return masks;
        }
        let mut best: Option<Vec<u32>> = None;
        for p in &self.perms[n] {
            let mut img: Vec<u32> = masks
                .iter()
                .map(|&a| {
                    let mut out = 0;
                    for (e, &pe) in p.iter().enumerate() {
                        if a >> e & 1 == 1 {
                            out |= 1 << pe;
                        }
                    }
                    out
                })
                .collect();
            img.sort_unstable();
            if best.as_ref().map_or(true, |b| img < *b) {
                best = Some(img);
            }
        }
        best.unwrap()
    }

    fn run(&mut self, n: usize, masks: Vec<u32>) -> bool {
        if n == 0 {
            return masks == [0];
        }
        if masks.is_empty() || masks.len() == 1 << n {
            return true;
        }
        let key = self.canonical(n, masks);
        if let Some(&v) = self.memo.get(&(n, key.clone())) {
            return v;
        }
        let mut result = false;
        for e in 0..n {
            let low = (1u32 << e) - 1;
            let squeeze = |a: u32| (a & low) | ((a >> 1) & !low);
            let mut del = Vec::new();
            let mut lk = Vec::new();
            for &a in &key {
                if a >> e & 1 == 1 {
                    lk.push(squeeze(a));
                } else {
                    del.push(squeeze(a));
                }
            }
            del.sort_unstable();
            lk.sort_unstable();
            if self.run(n - 1, lk) && self.run(n - 1, del) {
                result = true;
                break;
            }
        }
        self.memo.insert((n, key), result);
        result
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    heap(n, &mut cur, &mut out);
    out
}

fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(cur.clone());
        return;
    }
    for i in 0..k {
        heap(k - 1, cur, out);
        if k % 2 == 0 {
            cur.swap(i, k - 1);
        } else {
            cur.swap(0, k - 1);
        }
    }
}
