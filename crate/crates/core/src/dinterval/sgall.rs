use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::exact::{nu, tau, EXACT_CAP};
use super::{rat, DInterval, DIntervalError, DIntervalFamily, Mode, Part};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SgallError {
    #[error("b must be at least 1")]
    BadB,
    #[error("n = {n} exceeds the bound {bound:.3} for b = {b}")]
    TooLarge { n: usize, b: usize, bound: f64 },
    #[error("verification needs {needed} subset checks, budget is {budget}")]
    VerificationBudget { needed: u128, budget: u128 },
    #[error("no graph with the property after {0} attempts")]
    AttemptsExhausted(usize),
    #[error("lower-bound construction needs 3 ≤ d ≤ 8, got {0}")]
    BadDimension(usize),
}

/// Simple graph on `0..n`, `n ≤ 64`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub n: usize,
    pub adj: Vec<u64>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { n, adj: vec![0; n] }
    }

    pub fn complete(n: usize) -> Self {
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Graph {
            n,
            adj: (0..n).map(|v| all & !(1 << v)).collect(),
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&u| self.adj[v] >> u & 1 == 1).collect()
    }

    /// Every two disjoint `b`-sets are joined by an edge: for every
    /// `b`-set `A`, fewer than `b` vertices lie outside `A ∪ N(A)`.
    pub fn has_expander_property(&self, b: usize) -> bool {
        subsets(self.n, b).all(|a| {
            let mut cover = a;
            for v in 0..self.n {
                if a >> v & 1 == 1 {
                    cover |= self.adj[v];
                }
            }
            (self.n as u32 - cover.count_ones()) < b as u32
        })
    }
}

/// All `b`-subsets of `0..n` as bitmasks (Gosper's hack).
fn subsets(n: usize, b: usize) -> impl Iterator<Item = u64> {
    let limit = if n >= 64 { u64::MAX } else { 1u64 << n };
    let first = if b == 0 { 0 } else { (1u64 << b) - 1 };
    let mut cur = if b > n { None } else { Some(first) };
    std::iter::from_fn(move || {
        let c = cur?;
        cur = if c == 0 {
            None
        } else {
            let low = c & c.wrapping_neg();
            let r = c + low;
            let next = (((r ^ c) >> 2) / low) | r;
            (next < limit && r != 0).then_some(next)
        };
        Some(c)
    })
}

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

pub const DEFAULT_C: f64 = 0.25;
pub const VERIFY_BUDGET: u128 = 5_000_000;

pub fn sgall_expander(n: usize, b: usize, seed: u64, attempts: usize) -> Result<Graph, SgallError> {
    sgall_expander_with(n, b, DEFAULT_C, seed, attempts)
}

/// Random graph of maximum degree `b` in which any two disjoint `b`-sets
/// are joined by an edge. Requires `n ≤ c·b²/ln b` (`n ≤ 2` for `b = 1`).
pub fn sgall_expander_with(n: usize, b: usize, c: f64, seed: u64, attempts: usize) -> Result<Graph, SgallError> {
    if b == 0 {
        return Err(SgallError::BadB);
    }
    let bound = if b == 1 { 2.0 } else { c * (b * b) as f64 / (b as f64).ln() };
    if n as f64 > bound || n > 64 {
        return Err(SgallError::TooLarge { n, b, bound });
    }
    let needed = binom(n, b);
    if needed > VERIFY_BUDGET {
        return Err(SgallError::VerificationBudget {
            needed,
            budget: VERIFY_BUDGET,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    for _ in 0..attempts.max(1) {
        pairs.shuffle(&mut rng);
        let mut g = Graph::empty(n);
        for &(u, v) in &pairs {
            if g.degree(u) < b && g.degree(v) < b {
                g.add_edge(u, v);
            }
        }
        if g.has_expander_property(b) {
            return Ok(g);
        }
    }
    Err(SgallError::AttemptsExhausted(attempts))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SgallSets {
    pub a: Vec<Vec<usize>>,
    /// Every `|A_i| ≤ 3b`.
    pub size_ok: bool,
    /// Pairs `(i₁, i₂)` with `A_{i₁} ∩ B_{i₂} = ∅ = A_{i₂} ∩ B_{i₁}`.
    pub c2_violations: Vec<(usize, usize)>,
}

/// `A_i = B_i ∪ N(v_i) ∪ (V ∖ ⋃_{u∈B_i} N(u))` with `v_i = min B_i`.
pub fn sgall_sets(bs: &[Vec<usize>], g: &Graph) -> SgallSets {
    let all = if g.n == 64 { u64::MAX } else { (1u64 << g.n) - 1 };
    let mask = |s: &[usize]| s.iter().fold(0u64, |m, &v| m | 1 << v);
    let bmask: Vec<u64> = bs.iter().map(|b| mask(b)).collect();
    let amask: Vec<u64> = bs
        .iter()
        .zip(&bmask)
        .map(|(b, &bm)| {
            let v = *b.iter().min().expect("nonempty B");
            let covered = b.iter().fold(0u64, |m, &u| m | g.adj[u]);
            bm | g.adj[v] | (all & !covered)
        })
        .collect();
    let bsize = bs.iter().map(|b| b.len()).max().unwrap_or(0);
    let size_ok = amask.iter().all(|a| a.count_ones() as usize <= 3 * bsize);
    let mut viol = Vec::new();
    for i in 0..bs.len() {
        for j in i + 1..bs.len() {
            if amask[i] & bmask[j] == 0 && amask[j] & bmask[i] == 0 {
                viol.push((i, j));
            }
        }
    }
    SgallSets {
        a: amask
            .iter()
            .map(|&m| (0..g.n).filter(|&v| m >> v & 1 == 1).collect())
            .collect(),
        size_ok,
        c2_violations: viol,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerBound {
    pub family: DIntervalFamily,
    pub b: usize,
    pub n: usize,
    pub graph: Graph,
    /// Members within one copy pairwise intersect.
    pub pairwise_intersecting: bool,
    pub nu: Option<usize>,
    pub tau: Option<usize>,
}

/// Homogeneous `d`-intervals `J^i = ⋃_{v∈B_i} I_v ∪ {x_{u,i} : u ∈ A_i∖B_i}`
/// over all `b`-subsets `B_i` of `[n]`, `b = ⌊d/3⌋`, in `k` disjoint
/// copies. For `b = 1` the graph is `K_d` on `n = d` vertices.
pub fn lower_bound_family(d: usize, k: usize) -> Result<LowerBound, DIntervalError> {
    if !(3..=8).contains(&d) {
        return Err(SgallError::BadDimension(d).into());
    }
    let b = d / 3;
    let (n, g) = if b == 1 {
        (d, Graph::complete(d))
    } else {
        let n = ((b * b) as f64 / (b as f64).ln()).floor() as usize;
        (n, sgall_expander_with(n, b, 1.0, 0, 1000)?)
    };
    let bs: Vec<Vec<usize>> = subsets(n, b)
        .map(|m| (0..n).filter(|&v| m >> v & 1 == 1).collect())
        .collect();
    let sets = sgall_sets(&bs, &g);
    let big_n = bs.len() as i64;
    let members: Vec<DInterval> = bs
        .iter()
        .zip(&sets.a)
        .enumerate()
        .map(|(i, (bi, ai))| {
            let mut parts: Vec<Part> = bi
                .iter()
                .map(|&v| Part::new(0, rat(2 * v as i64, 1), rat(2 * v as i64 + 1, 1)))
                .collect();
            for &u in ai.iter().filter(|u| !bi.contains(u)) {
                parts.push(Part::point(0, rat(2 * u as i64 * (big_n + 1) + i as i64 + 1, big_n + 1)));
            }
            DInterval::new(parts)
        })
        .collect();
    let one = DIntervalFamily::new(d, Mode::Homogeneous, members)?;
    let pairwise_intersecting = one
        .members
        .iter()
        .enumerate()
        .all(|(i, a)| one.members[i + 1..].iter().all(|c| a.meets(c)));
    let family = one.copies(k);
    let (nu_v, tau_v) = if family.len() <= EXACT_CAP {
        (Some(nu(&family)?.size), Some(tau(&family)?.size))
    } else {
        (None, None)
    };
    Ok(LowerBound {
        family,
        b,
        n,
        graph: g,
        pairwise_intersecting,
        nu: nu_v,
        tau: tau_v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_property(g: &Graph, b: usize) -> bool {
        let sets: Vec<u64> = subsets(g.n, b).collect();
        sets.iter().all(|&a| {
            sets.iter().all(|&c| {
                a & c != 0 || (0..g.n).any(|v| a >> v & 1 == 1 && g.adj[v] & c != 0)
            })
        })
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(6, 3).count(), 20);
        assert_eq!(subsets(5, 0).count(), 1);
        assert_eq!(subsets(2, 3).count(), 0);
        assert!(subsets(7, 2).all(|m| m.count_ones() == 2 && m < 128));
    }

    #[test]
    fn expanders() {
        let g = sgall_expander_with(3, 2, 1.0, 0, 10).unwrap();
        assert!(g.max_degree() <= 2);
        let g = sgall_expander_with(6, 3, 1.0, 0, 200).unwrap();
        assert!(g.max_degree() <= 3);
        assert!(brute_property(&g, 3));
        assert!(matches!(sgall_expander_with(10, 2, 1.0, 0, 10), Err(SgallError::TooLarge { .. })));
        assert!(matches!(sgall_expander(6, 3, 0, 10), Err(SgallError::TooLarge { .. })));
    }

    #[test]
    fn property_check_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let n = 7;
            let mut g = Graph::empty(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rand::Rng::gen_bool(&mut rng, 0.4) {
                        g.add_edge(u, v);
                    }
                }
            }
            for b in 1..=3 {
                assert_eq!(g.has_expander_property(b), brute_property(&g, b));
            }
        }
    }

    #[test]
    fn sets_from_expander() {
        let g = sgall_expander_with(6, 3, 1.0, 0, 200).unwrap();
        let bs: Vec<Vec<usize>> = subsets(6, 3).map(|m| (0..6).filter(|&v| m >> v & 1 == 1).collect()).collect();
        let s = sgall_sets(&bs, &g);
        assert!(s.size_ok);
        assert!(s.c2_violations.is_empty());
        for (a, b) in s.a.iter().zip(&bs) {
            assert!(b.iter().all(|v| a.contains(v)));
        }
        let single = sgall_sets(&bs[..1], &g);
        assert!(single.c2_violations.is_empty());
    }

    #[test]
    fn edgeless_graph_breaks_size_bound() {
        let g = Graph::empty(9);
        let bs: Vec<Vec<usize>> = subsets(9, 2).map(|m| (0..9).filter(|&v| m >> v & 1 == 1).collect()).collect();
        let s = sgall_sets(&bs, &g);
        assert!(!s.size_ok);
    }

    #[test]
    fn lower_bound_small() {
        let lb = lower_bound_family(3, 1).unwrap();
        assert!(lb.pairwise_intersecting);
        assert_eq!(lb.nu, Some(1));
        assert!(lb.tau.unwrap() >= 2);
        let lb2 = lower_bound_family(3, 2).unwrap();
        assert_eq!(lb2.nu, Some(2));
        let lb6 = lower_bound_family(6, 1).unwrap();
        assert_eq!(lb6.b, 2);
        assert!(lb6.pairwise_intersecting);
        assert_eq!(lb6.nu, Some(1));
        assert!(lb6.family.members.iter().all(|m| m.parts.len() <= 6));
    }

    #[test]
    fn point_components_pierced_by_any_member() {
        // lines of the Fano plane as homogeneous 3-intervals made of points
        let lines = [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]];
        let f = DIntervalFamily::new(
            3,
            Mode::Homogeneous,
            lines
                .iter()
                .map(|l| DInterval::new(l.iter().map(|&p| Part::point(0, rat(p, 1))).collect()))
                .collect(),
        )
        .unwrap();
        assert_eq!(nu(&f).unwrap().size, 1);
        assert!(tau(&f).unwrap().size <= 3);
    }
}
