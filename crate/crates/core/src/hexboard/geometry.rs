use std::collections::BTreeSet;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{DBoard, HexError, KuhnSimplex};

/// The Kuhn simplex of `H(n,d)` containing `x ∈ [−1, n+1]^d`.
///
/// On shared faces the lexicographically smallest permutation and the
/// largest admissible base win.
pub fn simplex_of_point(n: usize, x: &[Rational64]) -> Result<KuhnSimplex, HexError> {
    let hi = n as i64 + 1;
    let lo = Rational64::from_integer(-1);
    if x.is_empty() || x.iter().any(|v| *v < lo || *v > Rational64::from_integer(hi)) {
        return Err(HexError::OutsideCube(x.iter().map(|v| v.to_string()).collect()));
    }
    let base: Vec<i64> = x.iter().map(|v| v.floor().to_integer().min(hi - 1)).collect();
    let frac: Vec<Rational64> = x
        .iter()
        .zip(&base)
        .map(|(v, &a)| v - Rational64::from_integer(a))
        .collect();
    let mut perm: Vec<usize> = (0..x.len()).collect();
    perm.sort_by(|&a, &b| frac[b].cmp(&frac[a]).then(a.cmp(&b)));
    Ok(KuhnSimplex { base, perm })
}

/// Float front end: coordinates are snapped to multiples of `1/denom`.
pub fn simplex_of_point_f64(n: usize, x: &[f64], denom: i64) -> Result<KuhnSimplex, HexError> {
    let denom = denom.max(1);
    if x.iter().any(|v| !v.is_finite()) {
        return Err(HexError::OutsideCube(x.iter().map(|v| v.to_string()).collect()));
    }
    let q: Vec<Rational64> = x
        .iter()
        .map(|v| Rational64::new((v * denom as f64).round() as i64, denom))
        .collect();
    simplex_of_point(n, &q)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationReport {
    pub n: usize,
    pub d: usize,
    /// `(d+1)`-cliques of the board graph.
    pub simplices: usize,
    /// Every clique has volume `1/d!`.
    pub unit_volumes: bool,
    pub total_volume: String,
    pub expected_volume: String,
    pub samples: usize,
    /// Samples lying strictly inside no simplex or inside more than one.
    pub bad_samples: usize,
    /// Cliques whose barycenter is not located by `simplex_of_point`.
    pub locate_mismatches: usize,
    pub ok: bool,
}

fn cliques(b: &DBoard) -> Vec<Vec<Vec<i64>>> {
    let verts = b.vertices();
    let pos = |v: &[i64]| -> usize {
        v.iter()
            .rev()
            .fold(0usize, |acc, &x| acc * (b.n + 3) + (x + 1) as usize)
    };
    let adj: Vec<BTreeSet<usize>> = verts
        .iter()
        .map(|v| b.neighbors(v).iter().map(|w| pos(w)).collect())
        .collect();
    let mut idx = Vec::new();
    let mut stack = Vec::new();
    for v in 0..verts.len() {
        stack.push(v);
        let nb: Vec<usize> = adj[v].iter().copied().filter(|&w| w > v).collect();
        grow_from(b.d + 1, &nb, &adj, &mut stack, &mut idx);
        stack.pop();
    }
    idx.into_iter()
        .map(|c| c.into_iter().map(|i| verts[i].clone()).collect())
        .collect()
}

fn grow_from(
    k: usize,
    cand: &[usize],
    adj: &[BTreeSet<usize>],
    stack: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if stack.len() == k {
        out.push(stack.clone());
        return;
    }
    for (t, &c) in cand.iter().enumerate() {
        if stack.iter().all(|&s| adj[s].contains(&c)) {
            stack.push(c);
            grow_from(k, &cand[t + 1..], adj, stack, out);
            stack.pop();
        }
    }
}

fn det(mut m: Vec<Vec<i128>>) -> i128 {
    // Bareiss
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Barycentric coordinates of `x` in the simplex `verts`, exact.
fn barycentric(verts: &[Vec<i64>], x: &[Rational64]) -> Vec<Rational64> {
    let d = x.len();
    // Solve Σ λ_k (v_k − v_0) = x − v_0 for λ_1..λ_d.
    let mut a: Vec<Vec<Rational64>> = (0..d)
        .map(|i| {
            let mut row: Vec<Rational64> = (1..=d)
                .map(|k| Rational64::from_integer(verts[k][i] - verts[0][i]))
                .collect();
            row.push(x[i] - Rational64::from_integer(verts[0][i]));
            row
        })
        .collect();
    for col in 0..d {
        let p = (col..d).find(|&r| !a[r][col].is_zero()).expect("nondegenerate");
        a.swap(col, p);
        let piv = a[col][col];
        for j in col..=d {
            a[col][j] /= piv;
        }
        for r in 0..d {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for j in col..=d {
                    let t = a[col][j] * f;
                    a[r][j] -= t;
                }
            }
        }
    }
    let mut lam: Vec<Rational64> = a.iter().map(|row| row[d]).collect();
    let s: Rational64 = lam.iter().sum();
    lam.insert(0, Rational64::from_integer(1) - s);
    lam
}

fn factorial(d: usize) -> i64 {
    (1..=d as i64).product()
}

/// Checks that the `(d+1)`-cliques of `H(n,d)` triangulate `[−1, n+1]^d`:
/// unit volumes summing to the cube, and seeded random points strictly
/// inside exactly one clique.
pub fn triangulation_check(n: usize, d: usize, samples: usize, seed: u64) -> Result<TriangulationReport, HexError> {
    let b = DBoard::new(n, d)?;
    let cl = cliques(&b);
    let fact = factorial(d);
    let mut unit = true;
    let mut total = Rational64::zero();
    for c in &cl {
        let m: Vec<Vec<i128>> = (1..=d)
            .map(|k| (0..d).map(|i| (c[k][i] - c[0][i]) as i128).collect())
            .collect();
        let v = Rational64::new(det(m).abs() as i64, fact);
        if v != Rational64::new(1, fact) {
            unit = false;
        }
        total += v;
    }
    let expected = Rational64::from_integer((n as i64 + 2).pow(d as u32));

    let mut locate_mismatches = 0;
    for c in &cl {
        let bary: Vec<Rational64> = (0..d)
            .map(|i| Rational64::new(c.iter().map(|v| v[i]).sum(), d as i64 + 1))
            .collect();
        let s = simplex_of_point(n, &bary)?;
        let mut got = s.vertices();
        got.sort();
        let mut want = c.clone();
        want.sort();
        if got != want {
            locate_mismatches += 1;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let den = 1009i64;
    let span = (n as i64 + 2) * den;
    let mut bad = 0;
    for _ in 0..samples {
        let x: Vec<Rational64> = (0..d)
            .map(|_| Rational64::new(rng.gen_range(1..span) - den, den))
            .collect();
        let inside = cl
            .iter()
            .filter(|c| barycentric(c, &x).iter().all(|l| l.is_positive()))
            .count();
        let on_boundary = x.iter().any(|v| v.is_integer())
            || cl.iter().any(|c| {
                let l = barycentric(c, &x);
                l.iter().all(|t| !t.is_negative()) && l.iter().any(|t| t.is_zero())
            });
        if !on_boundary && inside != 1 {
            bad += 1;
        }
        if !on_boundary {
            let s = simplex_of_point(n, &x)?;
            if !barycentric(&s.vertices(), &x).iter().all(|l| l.is_positive()) {
                bad += 1;
            }
        }
    }
    let ok = unit && total == expected && bad == 0 && locate_mismatches == 0;
    Ok(TriangulationReport {
        n,
        d,
        simplices: cl.len(),
        unit_volumes: unit,
        total_volume: total.to_string(),
        expected_volume: expected.to_string(),
        samples,
        bad_samples: bad,
        locate_mismatches,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_triangulations() {
        let r = triangulation_check(1, 2, 200, 7).unwrap();
        assert_eq!(r.simplices, 18);
        assert_eq!(r.total_volume, "9");
        assert!(r.ok, "{r:?}");
        let r = triangulation_check(1, 3, 100, 7).unwrap();
        assert_eq!(r.simplices, 27 * 6);
        assert!(r.ok, "{r:?}");
        let r = triangulation_check(2, 2, 100, 1).unwrap();
        assert_eq!(r.simplices, 32);
        assert!(r.ok, "{r:?}");
    }

    #[test]
    fn locate_points() {
        let q = |a, b| Rational64::new(a, b);
        let s = simplex_of_point(2, &[q(1, 2), q(1, 3)]).unwrap();
        assert_eq!(s.base, vec![0, 0]);
        assert_eq!(s.perm, vec![0, 1]);
        let s = simplex_of_point(2, &[q(3, 1), q(3, 1)]).unwrap();
        assert_eq!(s.base, vec![2, 2]);
        assert!(simplex_of_point(2, &[q(4, 1), q(0, 1)]).is_err());
        let s = simplex_of_point_f64(2, &[-0.25, 0.75], 1000).unwrap();
        assert_eq!(s.base, vec![-1, 0]);
        assert_eq!(s.perm, vec![0, 1]);
    }
}
