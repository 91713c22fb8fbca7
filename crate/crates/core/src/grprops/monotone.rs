use serde::{Deserialize, Serialize};

use super::{PropertyError, PropertyKind};
use crate::setfam::{argument_complexity, Mask, SetFamily};

fn vertex_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for k in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=k).map(move |i| {
                    let mut q = p.clone();
                    q.insert(i, k);
                    q
                })
            })
            .collect();
    }
    out
}

/// Edge permutations induced by all vertex permutations of `[n]`.
fn edge_permutations(n: usize) -> Vec<Vec<usize>> {
    let edges = PropertyKind::Graph { n }.edges();
    let index = |i: usize, j: usize| edges.iter().position(|&e| e == (i.min(j), i.max(j))).unwrap();
    vertex_permutations(n)
        .into_iter()
        .map(|s| edges.iter().map(|&(i, j)| index(s[i], s[j])).collect())
        .collect()
}

/// `class[a]` for every edge mask and the canonical (smallest) mask of each
/// class, ordered by edge count.
pub fn isomorphism_classes(n: usize) -> Result<(Vec<usize>, Vec<Mask>), PropertyError> {
    PropertyKind::Graph { n }.validate()?;
    if n > 5 {
        return Err(PropertyError::SizeOutOfRange {
            kind: "graph",
            detail: format!("isomorphism classes computed for n ≤ 5, got {n}"),
        });
    }
    let m = n * n.saturating_sub(1) / 2;
    let perms = edge_permutations(n);
    let canon: Vec<Mask> = (0..1u32 << m)
        .map(|a| perms.iter().map(|p| SetFamily::permute_mask(a, p)).min().unwrap())
        .collect();
    let mut reps: Vec<Mask> = canon.clone();
    reps.sort_by_key(|&a| (a.count_ones(), a));
    reps.dedup();
    let class = canon
        .iter()
        .map(|c| reps.iter().position(|r| r == c).unwrap())
        .collect();
    Ok((class, reps))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotoneSweep {
    pub n: usize,
    pub m: usize,
    pub classes: usize,
    /// All monotone invariant families, trivial ones included.
    pub families: usize,
    pub nontrivial: usize,
    pub evasive_nontrivial: usize,
    /// Each non-evasive non-trivial family as its maximal classes.
    pub violations: Vec<Vec<Mask>>,
    /// Largest `c` among the trivial families.
    pub trivial_max_c: usize,
}

/// Every monotone (closed under edge deletion) graph property on `n ≤ 4`
/// vertices with its exact complexity. Families are down-sets in the poset
/// of isomorphism classes ordered by subgraph containment.
pub fn monotone_sweep(n: usize) -> Result<MonotoneSweep, PropertyError> {
    if !(1..=4).contains(&n) {
        return Err(PropertyError::SizeOutOfRange {
            kind: "graph",
            detail: format!("monotone sweep needs 1 ≤ n ≤ 4, got {n}"),
        });
    }
    let m = n * (n - 1) / 2;
    let (class, reps) = isomorphism_classes(n)?;
    let k = reps.len();
    // below[b] = classes properly contained in class b
    let mut below = vec![0u64; k];
    for a in 0..1u32 << m {
        for e in 0..m {
            if a >> e & 1 == 1 {
                below[class[a as usize]] |= 1 << class[(a & !(1 << e)) as usize];
            }
        }
    }
    // transitive closure; classes are ordered by edge count
    for b in 0..k {
        let mut acc = below[b];
        for a in 0..b {
            if below[b] >> a & 1 == 1 {
                acc |= below[a];
            }
        }
        below[b] = acc;
    }
    let mut downsets = Vec::new();
    fn rec(i: usize, k: usize, cur: u64, below: &[u64], out: &mut Vec<u64>) {
        if i == k {
            out.push(cur);
            return;
        }
        rec(i + 1, k, cur, below, out);
        if below[i] & !cur == 0 {
            rec(i + 1, k, cur | 1 << i, below, out);
        }
    }
    rec(0, k, 0, &below, &mut downsets);

    let mut nontrivial = 0;
    let mut evasive_nontrivial = 0;
    let mut violations = Vec::new();
    let mut trivial_max_c = 0;
    for &d in &downsets {
        let f = SetFamily::from_fn(m, |a| d >> class[a as usize] & 1 == 1)?;
        let c = argument_complexity(&f)?;
        if f.is_trivial() {
            trivial_max_c = trivial_max_c.max(c);
            continue;
        }
        nontrivial += 1;
        if c == m {
            evasive_nontrivial += 1;
        } else {
            let maximal: Vec<Mask> = (0..k)
                .filter(|&i| d >> i & 1 == 1 && (0..k).all(|j| d >> j & 1 == 0 || below[j] >> i & 1 == 0))
                .map(|i| reps[i])
                .collect();
            violations.push(maximal);
        }
    }
    Ok(MonotoneSweep {
        n,
        m,
        classes: k,
        families: downsets.len(),
        nontrivial,
        evasive_nontrivial,
        violations,
        trivial_max_c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts() {
        // unlabelled graphs on 1..5 vertices
        for (n, c) in [(1, 1), (2, 2), (3, 4), (4, 11), (5, 34)] {
            assert_eq!(isomorphism_classes(n).unwrap().1.len(), c, "n = {n}");
        }
    }

    #[test]
    fn sweeps() {
        let s3 = monotone_sweep(3).unwrap();
        assert_eq!(s3.classes, 4);
        // down-sets of a 4-chain
        assert_eq!(s3.families, 5);
        assert_eq!(s3.nontrivial, 3);
        assert!(s3.violations.is_empty());
        let s4 = monotone_sweep(4).unwrap();
        assert_eq!(s4.classes, 11);
        assert!(s4.violations.is_empty());
        assert_eq!(s4.evasive_nontrivial, s4.nontrivial);
        assert_eq!(s4.trivial_max_c, 0);
        assert_eq!(s4.families, s4.nontrivial + 2);
    }

    /// Down-set count against brute force over all invariant unions of
    /// classes.
    #[test]
    fn downsets_match_brute_force() {
        let (class, reps) = isomorphism_classes(4).unwrap();
        let mut count = 0;
        for pick in 0..1u32 << reps.len() {
            let f = SetFamily::from_fn(6, |a| pick >> class[a as usize] & 1 == 1).unwrap();
            if f.is_downward_closed() {
                count += 1;
            }
        }
        assert_eq!(monotone_sweep(4).unwrap().families, count);
    }
}
