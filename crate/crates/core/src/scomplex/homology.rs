use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{ComplexError, Face, SimplicialComplex};

/// Dense integer matrix, row-major.
type IntMatrix = Vec<Vec<i64>>;

/// Faces of each dimension `0..=dim` with their positions.
struct Bases {
    faces: Vec<Vec<Face>>,
    index: Vec<BTreeMap<Face, usize>>,
}

impl Bases {
    fn new(k: &SimplicialComplex) -> Self {
        let dim = k.dim().unwrap_or(-1);
        let faces: Vec<Vec<Face>> = (0..=dim).map(|i| k.faces_of_dim(i)).collect();
        let index = faces
            .iter()
            .map(|fs| fs.iter().enumerate().map(|(j, f)| (f.clone(), j)).collect())
            .collect();
        Bases { faces, index }
    }

    fn top(&self) -> usize {
        self.faces.len()
    }

    /// `∂_i : C_i → C_{i−1}` for `i ≥ 1`, rows indexed by `(i−1)`-faces.
    fn boundary(&self, i: usize) -> IntMatrix {
        let rows = self.faces[i - 1].len();
        let cols = self.faces[i].len();
        let mut m = vec![vec![0i64; cols]; rows];
        for (c, f) in self.faces[i].iter().enumerate() {
            for skip in 0..f.len() {
                let mut g = f.clone();
                g.remove(skip);
                let r = self.index[i - 1][&g];
                m[r][c] = if skip % 2 == 0 { 1 } else { -1 };
            }
        }
        m
    }
}

fn rank_rational(m: &IntMatrix) -> usize {
    // Bareiss fraction-free elimination.
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for j in c + 1..cols {
                let v = (&a[rank][c] * &a[r][j] - &a[r][c] * &a[rank][j]) / &prev;
                a[r][j] = v;
            }
            a[r][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}

fn rank_mod_p(m: &IntMatrix, p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect())
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let inv = |x: u64| -> u64 {
        // Fermat, p prime
        let (mut base, mut e, mut acc) = (x % p, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let iv = inv(a[rank][c]);
        for j in c..cols {
            a[rank][j] = a[rank][j] * iv % p;
        }
        for r in 0..rows {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c];
                for j in c..cols {
                    a[r][j] = (a[r][j] + p * p - f * a[rank][j] % p) % p;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn reduced_betti_with(k: &SimplicialComplex, rank: impl Fn(&IntMatrix) -> usize) -> Vec<usize> {
    if k.num_vertices() == 0 {
        return Vec::new();
    }
    let b = Bases::new(k);
    // ranks[i] = rank ∂_i, with ∂_0 the augmentation of rank 1
    let mut ranks = vec![1usize];
    for i in 1..b.top() {
        ranks.push(rank(&b.boundary(i)));
    }
    ranks.push(0);
    (0..b.top())
        .map(|i| b.faces[i].len() - ranks[i] - ranks[i + 1])
        .collect()
}

/// Reduced Betti numbers `β̃_0, …, β̃_dim` over `Q`; empty without vertices.
pub fn rational_betti(k: &SimplicialComplex) -> Vec<usize> {
    reduced_betti_with(k, rank_rational)
}

/// Reduced Betti numbers over `GF(p)`, `p` prime.
pub fn mod_p_betti(k: &SimplicialComplex, p: u64) -> Vec<usize> {
    reduced_betti_with(k, |m| rank_mod_p(m, p))
}

/// Vanishing reduced homology over `GF(p)`; complexes without vertices are
/// not acyclic.
pub fn mod_p_acyclic(k: &SimplicialComplex, p: u64) -> bool {
    k.num_vertices() > 0 && mod_p_betti(k, p).iter().all(|&b| b == 0)
}

/// A vertex map sending every face onto a face.
#[derive(Debug, Clone)]
pub struct SimplicialMap {
    map: BTreeMap<u32, u32>,
}

impl SimplicialMap {
    pub fn new(k: &SimplicialComplex, map: BTreeMap<u32, u32>) -> Result<Self, ComplexError> {
        for v in k.vertices() {
            if !map.contains_key(&v) {
                return Err(ComplexError::NotSimplicial { face: vec![v] });
            }
        }
        let f = SimplicialMap { map };
        for face in k.faces() {
            if !k.contains(&f.image(face)) {
                return Err(ComplexError::NotSimplicial { face: face.clone() });
            }
        }
        Ok(f)
    }

    pub fn identity(k: &SimplicialComplex) -> Self {
        SimplicialMap {
            map: k.vertices().into_iter().map(|v| (v, v)).collect(),
        }
    }

    pub fn apply(&self, v: u32) -> u32 {
        self.map[&v]
    }

    /// Image of a face as a vertex set.
    pub fn image(&self, face: &[u32]) -> Face {
        let mut out: Vec<u32> = face.iter().map(|v| self.map[v]).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Image as an oriented simplex: `None` if two vertices collide,
    /// otherwise the sorted face and the sign of the sorting permutation.
    fn oriented_image(&self, face: &[u32]) -> Option<(Face, i64)> {
        let mut img: Vec<u32> = face.iter().map(|v| self.map[v]).collect();
        let mut sign = 1;
        // insertion sort counting swaps
        for i in 1..img.len() {
            let mut j = i;
            while j > 0 && img[j - 1] > img[j] {
                img.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if img.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((img, sign))
    }
}

/// The chain maps `f_{#i}` of a simplicial self-map, `i = 0..=dim`.
#[derive(Debug, Clone)]
pub struct ChainMap {
    pub matrices: Vec<IntMatrix>,
}

impl ChainMap {
    /// Builds the matrices and checks `∂ f_# = f_# ∂` in every dimension.
    pub fn new(k: &SimplicialComplex, f: &SimplicialMap) -> Result<Self, ComplexError> {
        let b = Bases::new(k);
        Self::with_bases(&b, f)
    }

    fn with_bases(b: &Bases, f: &SimplicialMap) -> Result<Self, ComplexError> {
        let mut matrices = Vec::new();
        for i in 0..b.top() {
            let n = b.faces[i].len();
            let mut m = vec![vec![0i64; n]; n];
            for (c, face) in b.faces[i].iter().enumerate() {
                if let Some((img, sign)) = f.oriented_image(face) {
                    let r = *b.index[i]
                        .get(&img)
                        .ok_or_else(|| ComplexError::NotSimplicial { face: face.clone() })?;
                    m[r][c] = sign;
                }
            }
            matrices.push(m);
        }
        for i in 1..b.top() {
            let d = b.boundary(i);
            if mat_mul(&d, &matrices[i]) != mat_mul(&matrices[i - 1], &d) {
                return Err(ComplexError::NotAChainMap { dim: i });
            }
        }
        Ok(ChainMap { matrices })
    }

    pub fn traces(&self) -> Vec<i64> {
        self.matrices
            .iter()
            .map(|m| (0..m.len()).map(|i| m[i][i]).sum())
            .collect()
    }
}

fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![0i64; m]; n];
    for i in 0..n {
        for (l, bl) in b.iter().enumerate().take(k) {
            let x = a[i][l];
            if x != 0 {
                for j in 0..m {
                    out[i][j] += x * bl[j];
                }
            }
        }
    }
    out
}

type QMatrix = Vec<Vec<BigRational>>;

fn to_q(m: &IntMatrix) -> QMatrix {
    m.iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect()
}

/// In-place reduced row echelon form; returns the pivot columns.
fn rref(a: &mut QMatrix) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for j in c..cols {
            a[r][j] = &a[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let v = &a[r][j] * &f;
                    a[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Kernel basis as column vectors.
fn kernel(m: &IntMatrix, cols: usize) -> Vec<Vec<BigRational>> {
    let mut a = to_q(m);
    let pivots = if a.is_empty() { Vec::new() } else { rref(&mut a) };
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[row][free].clone();
        }
        out.push(v);
    }
    out
}

/// Basis of the column space, taken from the original columns.
fn column_space(m: &IntMatrix) -> Vec<Vec<BigRational>> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut a = to_q(m);
    let pivots = rref(&mut a);
    pivots
        .into_iter()
        .map(|c| m.iter().map(|r| BigRational::from_integer(r[c].into())).collect())
        .collect()
}

/// Trace of `F` restricted to the invariant subspace spanned by `basis`.
fn restricted_trace(f: &IntMatrix, basis: &[Vec<BigRational>]) -> BigRational {
    let k = basis.len();
    if k == 0 {
        return BigRational::zero();
    }
    let n = basis[0].len();
    let fq = to_q(f);
    // augmented [V | F V]
    let mut aug: QMatrix = (0..n)
        .map(|r| {
            let mut row: Vec<BigRational> = basis.iter().map(|v| v[r].clone()).collect();
            for v in basis {
                let mut s = BigRational::zero();
                for (l, x) in v.iter().enumerate() {
                    if !x.is_zero() && !fq[r][l].is_zero() {
                        s += &fq[r][l] * x;
                    }
                }
                row.push(s);
            }
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    debug_assert_eq!(&pivots[..k], &(0..k).collect::<Vec<_>>()[..]);
    debug_assert!(pivots.len() == k, "subspace is not invariant");
    (0..k).map(|j| aug[j][k + j].clone()).sum()
}

/// Alternating sums of chain traces and homology traces.
#[derive(Debug, Clone, PartialEq)]
pub struct HopfReport {
    pub chain_traces: Vec<i64>,
    pub homology_traces: Vec<BigRational>,
    pub chain_sum: BigRational,
    pub lefschetz: BigRational,
    pub holds: bool,
}

pub fn hopf_trace_check(k: &SimplicialComplex, f: &SimplicialMap) -> Result<HopfReport, ComplexError> {
    let b = Bases::new(k);
    let cm = ChainMap::with_bases(&b, f)?;
    let chain_traces = cm.traces();
    let mut homology_traces = Vec::new();
    for i in 0..b.top() {
        let n = b.faces[i].len();
        let z = if i == 0 {
            (0..n)
                .map(|j| {
                    let mut v = vec![BigRational::zero(); n];
                    v[j] = BigRational::one();
                    v
                })
                .collect()
        } else {
            kernel(&b.boundary(i), n)
        };
        let bd = if i + 1 < b.top() {
            column_space(&b.boundary(i + 1))
        } else {
            Vec::new()
        };
        let m = &cm.matrices[i];
        homology_traces.push(restricted_trace(m, &z) - restricted_trace(m, &bd));
    }
    let alt = |xs: Vec<BigRational>| -> BigRational {
        xs.into_iter()
            .enumerate()
            .map(|(i, x)| if i % 2 == 0 { x } else { -x })
            .sum()
    };
    let chain_sum = alt(chain_traces
        .iter()
        .map(|&t| BigRational::from_integer(t.into()))
        .collect());
    let lefschetz = alt(homology_traces.clone());
    let holds = chain_sum == lefschetz;
    Ok(HopfReport {
        chain_traces,
        homology_traces,
        chain_sum,
        lefschetz,
        holds,
    })
}

/// `L(f) = Σ (−1)^i trace f_{*i}` over rational homology.
pub fn lefschetz_number(k: &SimplicialComplex, f: &SimplicialMap) -> Result<BigRational, ComplexError> {
    Ok(hopf_trace_check(k, f)?.lefschetz)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scomplex::catalog;

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    #[test]
    fn betti_of_basic_spaces() {
        assert_eq!(rational_betti(&SimplicialComplex::simplex(4)), vec![0, 0, 0, 0]);
        assert_eq!(rational_betti(&SimplicialComplex::simplex_boundary(3)), vec![0, 1]);
        assert_eq!(
            rational_betti(&SimplicialComplex::from_facets([[0u32], [1], [2]])),
            vec![2]
        );
        assert_eq!(rational_betti(&SimplicialComplex::simplex_boundary(4)), vec![0, 0, 1]);
    }

    #[test]
    fn projective_plane() {
        let rp2 = catalog::rp2_6();
        assert_eq!(rational_betti(&rp2), vec![0, 0, 0]);
        assert!(!mod_p_acyclic(&rp2, 2));
        assert_eq!(mod_p_betti(&rp2, 2), vec![0, 1, 1]);
        assert!(mod_p_acyclic(&rp2, 3));
    }

    #[test]
    fn identity_lefschetz_is_euler() {
        for k in [
            SimplicialComplex::simplex(3),
            SimplicialComplex::simplex_boundary(3),
            catalog::rp2_6(),
            SimplicialComplex::from_facets([[0u32], [1]]),
        ] {
            let r = hopf_trace_check(&k, &SimplicialMap::identity(&k)).unwrap();
            assert!(r.holds);
            assert_eq!(r.lefschetz, q(k.euler_characteristic()));
        }
    }

    #[test]
    fn rotation_of_triangle() {
        let k = SimplicialComplex::simplex(3);
        let f = SimplicialMap::new(&k, BTreeMap::from([(0, 1), (1, 2), (2, 0)])).unwrap();
        let r = hopf_trace_check(&k, &f).unwrap();
        assert_eq!(r.chain_traces, vec![0, 0, 1]);
        assert_eq!(r.lefschetz, q(1));
        assert!(r.holds);
    }

    #[test]
    fn edge_swap() {
        let k = SimplicialComplex::simplex(2);
        let f = SimplicialMap::new(&k, BTreeMap::from([(0, 1), (1, 0)])).unwrap();
        let r = hopf_trace_check(&k, &f).unwrap();
        assert_eq!(r.chain_traces, vec![0, -1]);
        assert_eq!(r.lefschetz, q(1));
        assert!(r.holds);
    }

    #[test]
    fn reflection_of_circle() {
        let k = SimplicialComplex::cycle(4);
        let f = SimplicialMap::new(&k, BTreeMap::from([(0, 0), (1, 3), (2, 2), (3, 1)])).unwrap();
        let r = hopf_trace_check(&k, &f).unwrap();
        // H_1 is negated by a reflection
        assert_eq!(r.homology_traces, vec![q(1), q(-1)]);
        assert_eq!(r.lefschetz, q(2));
        assert!(r.holds);
    }

    #[test]
    fn non_simplicial_map_rejected() {
        let k = SimplicialComplex::cycle(4);
        assert!(SimplicialMap::new(&k, BTreeMap::from([(0, 0), (1, 2), (2, 2), (3, 3)])).is_err());
    }

    #[test]
    fn chain_map_commutes_for_collapsing_map() {
        let k = SimplicialComplex::simplex(3);
        let f = SimplicialMap::new(&k, BTreeMap::from([(0, 0), (1, 0), (2, 1)])).unwrap();
        let cm = ChainMap::new(&k, &f).unwrap();
        assert_eq!(cm.traces(), vec![1, 0, 0]);
    }

    #[test]
    fn rank_agreement() {
        let m = vec![vec![2, 4, 6], vec![1, 2, 3], vec![0, 3, 3]];
        assert_eq!(rank_rational(&m), 2);
        assert_eq!(rank_mod_p(&m, 3), 1);
        assert_eq!(rank_mod_p(&m, 5), 2);
    }
}
