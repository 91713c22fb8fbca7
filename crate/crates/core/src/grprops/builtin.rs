use serde::{Deserialize, Serialize};

use super::{build_property, PropertyError, PropertyFamily, PropertyKind};
use crate::setfam::{argument_complexity, Mask, SetFamily};

pub const BUILTIN_NAMES: &[&str] = &[
    "no_edge",
    "at_most_k_edges",
    "connected",
    "planar",
    "scorpion",
    "star_union",
    "has_sink",
    "has_directed_cycle",
    "complete_bipartite_threshold",
];

fn need_graph(kind: PropertyKind, name: &str) -> Result<usize, PropertyError> {
    match kind {
        PropertyKind::Graph { n } => Ok(n),
        _ => Err(PropertyError::BadParameter(format!("{name} is a graph property"))),
    }
}

fn need_digraph(kind: PropertyKind, name: &str) -> Result<usize, PropertyError> {
    match kind {
        PropertyKind::Digraph { n } => Ok(n),
        _ => Err(PropertyError::BadParameter(format!("{name} is a digraph property"))),
    }
}

fn need_param(param: Option<usize>, name: &str) -> Result<usize, PropertyError> {
    param.ok_or_else(|| PropertyError::BadParameter(format!("{name} needs a parameter")))
}

/// A named property. `param` is `k` for `at_most_k_edges` and `r` for
/// `complete_bipartite_threshold`.
pub fn builtin(name: &str, kind: PropertyKind, param: Option<usize>) -> Result<PropertyFamily, PropertyError> {
    kind.validate()?;
    match name {
        "no_edge" => build_property(kind, |a| a == 0),
        "at_most_k_edges" => {
            let k = need_param(param, name)?;
            build_property(kind, |a| a.count_ones() as usize <= k)
        }
        "connected" => {
            need_graph(kind, name)?;
            build_property(kind, |a| connected(&kind.adjacency(a)))
        }
        "planar" => {
            let n = need_graph(kind, name)?;
            PropertyFamily::new(kind, planar_family(n)?)
        }
        "scorpion" => {
            let n = need_graph(kind, name)?;
            build_property(kind, |a| is_scorpion(&kind.adjacency(a), n))
        }
        "star_union" => {
            let n = need_graph(kind, name)?;
            if n < 4 {
                return Err(PropertyError::BadParameter("star_union needs n ≥ 4".into()));
            }
            build_property(kind, |a| {
                let adj = kind.adjacency(a);
                (0..n).any(|k| adj[k].len() == n - 4 && adj[k].iter().all(|&v| adj[v].len() == 1))
            })
        }
        "has_sink" => {
            let n = need_digraph(kind, name)?;
            build_property(kind, |a| {
                let adj = kind.adjacency(a);
                let mut indeg = vec![0; n];
                for out in &adj {
                    for &v in out {
                        indeg[v] += 1;
                    }
                }
                (0..n).any(|k| adj[k].is_empty() && indeg[k] == n - 1)
            })
        }
        "has_directed_cycle" => {
            need_digraph(kind, name)?;
            build_property(kind, |a| has_cycle(&kind.adjacency(a)))
        }
        "complete_bipartite_threshold" => {
            let (m, n) = match kind {
                PropertyKind::Bipartite { m, n } => (m, n),
                _ => return Err(PropertyError::BadParameter(format!("{name} is a bipartite property"))),
            };
            let r = need_param(param, name)?;
            // at most r vertices of V are joined to all of W
            let full: Mask = (1 << n) - 1;
            build_property(kind, |a| (0..m).filter(|v| a >> (v * n) & full == full).count() <= r)
        }
        _ => Err(PropertyError::Unknown(name.to_string())),
    }
}

fn connected(adj: &[Vec<usize>]) -> bool {
    if adj.is_empty() {
        return true;
    }
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// A degree-1 vertex adjacent to a degree-2 vertex whose other neighbor
/// has degree `n − 2`.
fn is_scorpion(adj: &[Vec<usize>], n: usize) -> bool {
    (0..n).any(|s| {
        adj[s].len() == 1 && {
            let b = adj[s][0];
            adj[b].len() == 2 && {
                let t = if adj[b][0] == s { adj[b][1] } else { adj[b][0] };
                adj[t].len() + 2 == n
            }
        }
    })
}

fn has_cycle(adj: &[Vec<usize>]) -> bool {
    // 0 = new, 1 = on stack, 2 = done
    fn visit(v: usize, adj: &[Vec<usize>], state: &mut [u8]) -> bool {
        state[v] = 1;
        for &w in &adj[v] {
            if state[w] == 1 || (state[w] == 0 && visit(w, adj, state)) {
                return true;
            }
        }
        state[v] = 2;
        false
    }
    let mut state = vec![0u8; adj.len()];
    (0..adj.len()).any(|v| state[v] == 0 && visit(v, adj, &mut state))
}

/// Edge sets of all subdivisions of `K_5` and `K_{3,3}` on `[n]`.
fn kuratowski_subgraphs(n: usize) -> Vec<Mask> {
    let mut idx = vec![vec![0usize; n]; n];
    let mut e = 0;
    for i in 0..n {
        for j in i + 1..n {
            idx[i][j] = e;
            idx[j][i] = e;
            e += 1;
        }
    }
    let mut out = Vec::new();
    let k5: Vec<(usize, usize)> = (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).collect();
    let k33: Vec<(usize, usize)> = (0..3).flat_map(|i| (3..6).map(move |j| (i, j))).collect();
    for set in combinations(n, 5) {
        embed(&set, &k5, n, &idx, &mut out);
    }
    for set in combinations(n, 6) {
        // the side containing set[0]
        for pair in combinations(5, 2) {
            let left = [set[0], set[1 + pair[0]], set[1 + pair[1]]];
            let right: Vec<usize> = set.iter().copied().filter(|v| !left.contains(v)).collect();
            let branch = [left[0], left[1], left[2], right[0], right[1], right[2]];
            embed(&branch, &k33, n, &idx, &mut out);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Every way of routing the edges of `h` (on `branch`) through the spare
/// vertices as paths.
fn embed(branch: &[usize], h: &[(usize, usize)], n: usize, idx: &[Vec<usize>], out: &mut Vec<Mask>) {
    let spare: Vec<usize> = (0..n).filter(|v| !branch.contains(v)).collect();
    let choices = h.len() + 1;
    let total = choices.pow(spare.len() as u32);
    for code in 0..total {
        let mut on_edge: Vec<Vec<usize>> = vec![Vec::new(); h.len()];
        let mut c = code;
        for &s in &spare {
            let pick = c % choices;
            c /= choices;
            if pick > 0 {
                on_edge[pick - 1].push(s);
            }
        }
        let mut partial = vec![0 as Mask];
        for (k, &(a, b)) in h.iter().enumerate() {
            let mut next = Vec::new();
            for order in permutations(&on_edge[k]) {
                let mut path = vec![branch[a]];
                path.extend(order);
                path.push(branch[b]);
                let m = path.windows(2).fold(0 as Mask, |m, w| m | 1 << idx[w[0]][w[1]]);
                next.extend(partial.iter().map(|p| p | m));
            }
            partial = next;
        }
        out.extend(partial);
    }
}

fn permutations(xs: &[usize]) -> Vec<Vec<usize>> {
    if xs.len() <= 1 {
        return vec![xs.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..xs.len() {
        let mut rest = xs.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Planar graphs on `[n]`: no edge set contains a Kuratowski subgraph.
/// The containing sets are found by a superset sweep over all masks.
fn planar_family(n: usize) -> Result<SetFamily, PropertyError> {
    let m = n * n.saturating_sub(1) / 2;
    let mut bad = vec![false; 1usize << m];
    for k in kuratowski_subgraphs(n) {
        bad[k as usize] = true;
    }
    for e in 0..m {
        let bit = 1usize << e;
        for a in 0..bad.len() {
            if a & bit != 0 && bad[a ^ bit] {
                bad[a] = true;
            }
        }
    }
    Ok(SetFamily::from_fn(m, |a| !bad[a as usize])?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScorpionProbe {
    pub n: usize,
    pub m: usize,
    pub members: usize,
    pub c: usize,
    pub evasive: bool,
}

/// Exact `c` of "being a scorpion graph", for `4 ≤ n ≤ 6`.
pub fn scorpion_complexity_probe(n: usize) -> Result<ScorpionProbe, PropertyError> {
    if !(4..=6).contains(&n) {
        return Err(PropertyError::SizeOutOfRange {
            kind: "graph",
            detail: format!("exact scorpion complexity needs 4 ≤ n ≤ 6, got {n}"),
        });
    }
    let p = builtin("scorpion", PropertyKind::Graph { n }, None)?;
    let c = argument_complexity(&p.family)?;
    Ok(ScorpionProbe {
        n,
        m: p.m(),
        members: p.family.len(),
        c,
        evasive: c == p.m(),
    })
}
