use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::lp::{self, Cmp, Lp, LpOutcome};
use super::{DIntervalError, DIntervalFamily, Rat};

pub const EXACT_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pub size: usize,
    /// Indices of pairwise disjoint members.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transversal {
    pub size: usize,
    /// `(line, x)` piercing points.
    pub points: Vec<(usize, Rat)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionalSolution {
    /// `ν* = τ*`
    pub value: Rat,
    /// Weight per member.
    pub packing: Vec<Rat>,
    pub points: Vec<(usize, Rat)>,
    /// Weight per entry of `points`.
    pub transversal: Vec<Rat>,
}

fn check_cap(f: &DIntervalFamily) -> Result<(), DIntervalError> {
    if f.len() > EXACT_CAP {
        return Err(DIntervalError::CapExceeded {
            size: f.len(),
            cap: EXACT_CAP,
        });
    }
    Ok(())
}

/// Every component endpoint, per line. Some minimum transversal uses only
/// these: a piercing point slides right to the nearest right endpoint of
/// the components containing it.
fn candidates(f: &DIntervalFamily) -> Vec<(usize, Rat)> {
    let mut s: BTreeSet<(usize, Rat)> = BTreeSet::new();
    for m in &f.members {
        for p in &m.parts {
            s.insert((p.line, p.lo.clone()));
            s.insert((p.line, p.hi.clone()));
        }
    }
    s.into_iter().collect()
}

fn pierced_mask(f: &DIntervalFamily, line: usize, x: &Rat) -> u32 {
    f.members
        .iter()
        .enumerate()
        .filter(|(_, m)| m.contains(line, x))
        .fold(0, |acc, (k, _)| acc | 1 << k)
}

pub fn is_transversal(f: &DIntervalFamily, points: &[(usize, Rat)]) -> bool {
    f.members
        .iter()
        .all(|m| points.iter().any(|(l, x)| m.contains(*l, x)))
}

/// Maximum set of pairwise disjoint members, by branch and bound.
pub fn nu(f: &DIntervalFamily) -> Result<Matching, DIntervalError> {
    check_cap(f)?;
    let n = f.len();
    let meets: Vec<u32> = (0..n)
        .map(|a| {
            (0..n)
                .filter(|&b| f.members[a].meets(&f.members[b]))
                .fold(0, |acc, b| acc | 1 << b)
        })
        .collect();
    fn go(cand: u32, cur: u32, meets: &[u32], best: &mut u32) {
        if cur.count_ones() + cand.count_ones() <= best.count_ones() {
            return;
        }
        if cand == 0 {
            *best = cur;
            return;
        }
        let v = cand.trailing_zeros() as usize;
        go(cand & !meets[v] & !(1 << v), cur | 1 << v, meets, best);
        go(cand & !(1 << v), cur, meets, best);
    }
    let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut best = 0;
    if n > 0 {
        go(all, 0, &meets, &mut best);
    }
    let members: Vec<usize> = (0..n).filter(|&k| best >> k & 1 == 1).collect();
    Ok(Matching {
        size: members.len(),
        members,
    })
}

/// Minimum transversal by exact set cover over the endpoint candidates.
pub fn tau(f: &DIntervalFamily) -> Result<Transversal, DIntervalError> {
    check_cap(f)?;
    let n = f.len();
    if n == 0 {
        return Ok(Transversal {
            size: 0,
            points: vec![],
        });
    }
    let cand = candidates(f);
    let mut masks: Vec<(u32, usize)> = cand
        .iter()
        .enumerate()
        .map(|(k, (l, x))| (pierced_mask(f, *l, x), k))
        .filter(|(m, _)| *m != 0)
        .collect();
    // drop dominated candidates
    masks.sort_by(|a, b| b.0.count_ones().cmp(&a.0.count_ones()).then(a.1.cmp(&b.1)));
    let mut kept: Vec<(u32, usize)> = Vec::new();
    for (m, k) in masks {
        if !kept.iter().any(|(o, _)| m & !o == 0) {
            kept.push((m, k));
        }
    }
    let all = ((1u64 << n) - 1) as u32;
    let widest = kept.iter().map(|(m, _)| m.count_ones()).max().unwrap_or(1).max(1);
    // greedy upper bound
    let mut best: Vec<usize> = {
        let mut cov = 0u32;
        let mut pick = Vec::new();
        while cov != all {
            let &(m, k) = kept
                .iter()
                .max_by_key(|(m, _)| (m & !cov).count_ones())
                .expect("every member has an endpoint");
            cov |= m;
            pick.push(k);
        }
        pick
    };
    fn go(cov: u32, all: u32, cur: &mut Vec<usize>, kept: &[(u32, usize)], widest: u32, best: &mut Vec<usize>) {
        if cov == all {
            if cur.len() < best.len() {
                *best = cur.clone();
            }
            return;
        }
        let left = (all & !cov).count_ones();
        if cur.len() + left.div_ceil(widest) as usize >= best.len() {
            return;
        }
        // uncovered member with fewest covering candidates
        let mut pick = None;
        let mut fewest = usize::MAX;
        let mut r = all & !cov;
        while r != 0 {
            let v = r.trailing_zeros();
            r &= r - 1;
            let c = kept.iter().filter(|(m, _)| m >> v & 1 == 1).count();
            if c < fewest {
                fewest = c;
                pick = Some(v);
            }
        }
        let v = pick.expect("uncovered member");
        for &(m, k) in kept.iter().filter(|(m, _)| m >> v & 1 == 1) {
            cur.push(k);
            go(cov | m, all, cur, kept, widest, best);
            cur.pop();
        }
    }
    go(0, all, &mut Vec::new(), &kept, widest, &mut best);
    let points: Vec<(usize, Rat)> = best.iter().map(|&k| cand[k].clone()).collect();
    debug_assert!(is_transversal(f, &points));
    Ok(Transversal {
        size: points.len(),
        points,
    })
}

/// Solves the fractional packing LP and the fractional transversal LP
/// separately over the member/endpoint incidence matrix and checks that
/// the optima agree.
pub fn nu_star_tau_star(f: &DIntervalFamily) -> Result<FractionalSolution, DIntervalError> {
    check_cap(f)?;
    let n = f.len();
    let pts = candidates(f);
    let inc: Vec<Vec<bool>> = pts
        .iter()
        .map(|(l, x)| f.members.iter().map(|m| m.contains(*l, x)).collect())
        .collect();
    let one = Rat::one();
    let zero = Rat::zero();
    let b01 = |b: bool| if b { one.clone() } else { zero.clone() };
    let pack = Lp {
        c: vec![one.clone(); n],
        rows: inc
            .iter()
            .map(|row| (row.iter().map(|&b| b01(b)).collect(), Cmp::Le, one.clone()))
            .collect(),
    };
    let cover = Lp {
        c: vec![-one.clone(); pts.len()],
        rows: (0..n)
            .map(|k| (inc.iter().map(|row| b01(row[k])).collect(), Cmp::Ge, one.clone()))
            .collect(),
    };
    let (nu_s, w) = match lp::solve(&pack) {
        LpOutcome::Optimal { value, x } => (value, x),
        other => return Err(DIntervalError::Lp(format!("packing LP: {other:?}"))),
    };
    let (tau_s, phi) = match lp::solve(&cover) {
        LpOutcome::Optimal { value, x } => (-value, x),
        other => return Err(DIntervalError::Lp(format!("transversal LP: {other:?}"))),
    };
    if nu_s != tau_s {
        return Err(DIntervalError::Lp(format!("duality gap: ν* = {nu_s}, τ* = {tau_s}")));
    }
    Ok(FractionalSolution {
        value: nu_s,
        packing: w,
        points: pts,
        transversal: phi,
    })
}

/// A point shared by all the given members, if any. The largest left
/// endpoint on a line is a common point whenever one exists there.
pub fn common_point(f: &DIntervalFamily, members: &[usize]) -> Option<(usize, Rat)> {
    if members.is_empty() {
        return None;
    }
    for line in 0..f.lines() {
        let ends: Vec<&Rat> = members
            .iter()
            .flat_map(|&k| f.members[k].parts.iter().filter(|p| p.line == line).map(|p| &p.lo))
            .collect();
        for x in ends {
            if members.iter().all(|&k| f.members[k].contains(line, x)) {
                return Some((line, x.clone()));
            }
        }
    }
    None
}

/// Whether every subfamily of at most `k` members has a common point.
pub fn has_kwise_common_point(f: &DIntervalFamily, k: usize) -> bool {
    fn go(f: &DIntervalFamily, start: usize, k: usize, cur: &mut Vec<usize>) -> bool {
        if !cur.is_empty() && common_point(f, cur).is_none() {
            return false;
        }
        if cur.len() == k {
            return true;
        }
        for j in start..f.len() {
            cur.push(j);
            let ok = go(f, j + 1, k, cur);
            cur.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    go(f, 0, k, &mut Vec::new())
}
