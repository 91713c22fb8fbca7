use std::collections::{BTreeMap, HashSet};

use super::{ComplexError, Face, SimplicialComplex};

/// Node budget for the backtracking search.
pub const DEFAULT_COLLAPSE_BUDGET: usize = 2_000_000;

/// An elementary collapse removing `free` and its unique proper coface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collapse {
    pub free: Face,
    pub coface: Face,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CollapseOutcome {
    /// A sequence ending in a single vertex.
    Collapsible(Vec<Collapse>),
    NotCollapsible,
    /// The budget ran out before the search space was exhausted.
    Unknown { nodes: usize },
}

impl CollapseOutcome {
    pub fn is_collapsible(&self) -> Option<bool> {
        match self {
            CollapseOutcome::Collapsible(_) => Some(true),
            CollapseOutcome::NotCollapsible => Some(false),
            CollapseOutcome::Unknown { .. } => None,
        }
    }
}

pub fn is_collapsible(k: &SimplicialComplex) -> CollapseOutcome {
    is_collapsible_with(k, DEFAULT_COLLAPSE_BUDGET)
}

/// Backtracking over elementary collapses with a memo of dead-end states.
///
/// Collapsing an interval `[A₀, A₁]` with `A₁` the unique facet above `A₀`
/// factors into elementary collapses, so searching those loses nothing.
pub fn is_collapsible_with(k: &SimplicialComplex, budget: usize) -> CollapseOutcome {
    let faces: Vec<Face> = k.faces().filter(|f| !f.is_empty()).cloned().collect();
    if faces.is_empty() {
        return CollapseOutcome::NotCollapsible;
    }
    let index: BTreeMap<&Face, usize> = faces.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let n = faces.len();
    let mut up: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut down: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, f) in faces.iter().enumerate() {
        if f.len() < 2 {
            continue;
        }
        for skip in 0..f.len() {
            let mut g = f.clone();
            g.remove(skip);
            let j = index[&g];
            up[j].push(i);
            down[i].push(j);
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(faces[i].len()));
    let mut s = Searcher {
        up,
        down,
        order,
        alive: vec![true; n],
        up_count: Vec::new(),
        remaining: n,
        failed: HashSet::new(),
        nodes: 0,
        budget,
        path: Vec::new(),
    };
    s.up_count = s.up.iter().map(Vec::len).collect();
    match s.dfs() {
        Some(true) => CollapseOutcome::Collapsible(
            s.path
                .iter()
                .map(|&(a, b)| Collapse {
                    free: faces[a].clone(),
                    coface: faces[b].clone(),
                })
                .collect(),
        ),
        Some(false) => CollapseOutcome::NotCollapsible,
        None => CollapseOutcome::Unknown { nodes: s.nodes },
    }
}

struct Searcher {
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    order: Vec<usize>,
    alive: Vec<bool>,
    up_count: Vec<usize>,
    remaining: usize,
    failed: HashSet<Vec<u64>>,
    nodes: usize,
    budget: usize,
    path: Vec<(usize, usize)>,
}

impl Searcher {
    fn key(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.alive.len().div_ceil(64)];
        for (i, &a) in self.alive.iter().enumerate() {
            if a {
                out[i / 64] |= 1 << (i % 64);
            }
        }
        out
    }

    fn free_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &b in &self.order {
            if !self.alive[b] || self.up_count[b] != 0 {
                continue;
            }
            for &a in &self.down[b] {
                if self.alive[a] && self.up_count[a] == 1 {
                    out.push((a, b));
                }
            }
        }
        out
    }

    fn remove(&mut self, a: usize, b: usize) {
        self.alive[a] = false;
        self.alive[b] = false;
        for &x in &self.down[b] {
            self.up_count[x] -= 1;
        }
        for &x in &self.down[a] {
            self.up_count[x] -= 1;
        }
        self.remaining -= 2;
    }

    fn restore(&mut self, a: usize, b: usize) {
        self.alive[a] = true;
        self.alive[b] = true;
        for &x in &self.down[b] {
            self.up_count[x] += 1;
        }
        for &x in &self.down[a] {
            self.up_count[x] += 1;
        }
        self.remaining += 2;
    }

    /// `Some(found)`, or `None` once the budget is spent.
    fn dfs(&mut self) -> Option<bool> {
        if self.remaining == 1 {
            return Some(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        let key = self.key();
        if self.failed.contains(&key) {
            return Some(false);
        }
        for (a, b) in self.free_pairs() {
            self.remove(a, b);
            self.path.push((a, b));
            match self.dfs() {
                Some(true) => return Some(true),
                Some(false) => {}
                None => return None,
            }
            self.path.pop();
            self.restore(a, b);
        }
        self.failed.insert(key);
        Some(false)
    }
}

/// Applies the collapses in order, checking each one, and returns the result.
pub fn replay_collapses(
    k: &SimplicialComplex,
    seq: &[Collapse],
) -> Result<SimplicialComplex, ComplexError> {
    let mut faces = k.faces.clone();
    for c in seq {
        let ok = c.coface.len() == c.free.len() + 1
            && !c.free.is_empty()
            && super::is_subset(&c.free, &c.coface)
            && faces.contains(&c.free)
            && faces.contains(&c.coface)
            && faces
                .iter()
                .filter(|f| f.len() > c.free.len() && super::is_subset(&c.free, f))
                .count()
                == 1;
        if !ok {
            return Err(ComplexError::NotSimplicial {
                face: c.free.clone(),
            });
        }
        faces.remove(&c.free);
        faces.remove(&c.coface);
    }
    Ok(SimplicialComplex { faces })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn collapses_to_point(k: &SimplicialComplex) -> bool {
        match is_collapsible(k) {
            CollapseOutcome::Collapsible(seq) => {
                let end = replay_collapses(k, &seq).unwrap();
                assert_eq!(end.num_faces(), 2);
                true
            }
            _ => false,
        }
    }

    #[test]
    fn simplices_collapse() {
        for n in 1..=5 {
            assert!(collapses_to_point(&SimplicialComplex::simplex(n)));
        }
    }

    #[test]
    fn cycles_and_spheres_do_not() {
        assert_eq!(
            is_collapsible(&SimplicialComplex::cycle(5)),
            CollapseOutcome::NotCollapsible
        );
        assert_eq!(
            is_collapsible(&SimplicialComplex::simplex_boundary(4)),
            CollapseOutcome::NotCollapsible
        );
        assert_eq!(
            is_collapsible(&SimplicialComplex::from_facets([[0u32], [1]])),
            CollapseOutcome::NotCollapsible
        );
    }

    #[test]
    fn tree_collapses() {
        let t = SimplicialComplex::from_facets([[0u32, 1], [1, 2], [1, 3], [3, 4]]);
        assert!(collapses_to_point(&t));
    }

    #[test]
    fn bad_replay_is_rejected() {
        let k = SimplicialComplex::simplex(3);
        let bad = [Collapse {
            free: vec![0],
            coface: vec![0, 1],
        }];
        assert!(replay_collapses(&k, &bad).is_err());
    }

    #[test]
    fn tiny_budget_gives_unknown() {
        let k = SimplicialComplex::simplex(4);
        assert!(matches!(
            is_collapsible_with(&k, 1),
            CollapseOutcome::Unknown { .. }
        ));
    }
}
