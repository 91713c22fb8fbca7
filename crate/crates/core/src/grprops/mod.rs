//! Graph, digraph and bipartite-graph properties as symmetric set families
//! over their sets of potential edges.

mod builtin;
mod galois;
mod monotone;
mod orbits;
mod yao;

pub use builtin::{builtin, scorpion_complexity_probe, ScorpionProbe, BUILTIN_NAMES};
pub use galois::{kss_group_data, Gf, KssGroupData};
pub use monotone::{isomorphism_classes, monotone_sweep, MonotoneSweep};
pub use orbits::{
    illies_family, orbit_congruence_check, orbit_decomposition, CongruenceReport, IlliesReport,
    Orbit, OrbitDecomposition,
};
pub use yao::{yao_fixed_complex, YaoReport};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scomplex::ComplexError;
use crate::setfam::{mask_elements, Mask, SetFamily, SetFamilyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PropertyError {
    #[error("{kind} size out of range: {detail}")]
    SizeOutOfRange { kind: &'static str, detail: String },
    #[error("not invariant: {member:?} is in the family but its image {image:?} is not")]
    NotInvariant { member: Vec<usize>, image: Vec<usize> },
    #[error("ground set size {0} is not a prime power")]
    NotPrimePower(usize),
    #[error("unknown property {0:?}")]
    Unknown(String),
    #[error("{0}")]
    BadParameter(String),
    #[error("no field of order {0} available")]
    UnsupportedField(usize),
    #[error(transparent)]
    SetFamily(#[from] SetFamilyError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Which structures the edge masks describe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PropertyKind {
    /// Simple graphs on `n` vertices, `E = C([n], 2)`.
    Graph { n: usize },
    /// Loopless digraphs on `n` vertices, `|E| = n² − n`.
    Digraph { n: usize },
    /// Bipartite graphs on `V ⊎ W`, `|V| = m`, `|W| = n`, `E = V × W`.
    Bipartite { m: usize, n: usize },
    /// `E = Z_m` under the cyclic shift.
    Cyclic { m: usize },
}

impl PropertyKind {
    pub fn name(&self) -> &'static str {
        match self {
            PropertyKind::Graph { .. } => "graph",
            PropertyKind::Digraph { .. } => "digraph",
            PropertyKind::Bipartite { .. } => "bipartite",
            PropertyKind::Cyclic { .. } => "cyclic",
        }
    }

    pub fn validate(&self) -> Result<(), PropertyError> {
        let err = |detail: String| PropertyError::SizeOutOfRange {
            kind: self.name(),
            detail,
        };
        match *self {
            PropertyKind::Graph { n } if !(1..=7).contains(&n) => Err(err(format!("n = {n}, need 1 ≤ n ≤ 7"))),
            PropertyKind::Digraph { n } if !(1..=5).contains(&n) => Err(err(format!("n = {n}, need 1 ≤ n ≤ 5"))),
            PropertyKind::Bipartite { m, n } if m == 0 || n == 0 || m * n > 24 => {
                Err(err(format!("{m}×{n}, need 1 ≤ m·n ≤ 24")))
            }
            PropertyKind::Cyclic { m } if !(1..=24).contains(&m) => Err(err(format!("m = {m}, need 1 ≤ m ≤ 24"))),
            _ => Ok(()),
        }
    }

    /// Number of vertices of the underlying structure.
    pub fn vertices(&self) -> usize {
        match *self {
            PropertyKind::Graph { n } | PropertyKind::Digraph { n } => n,
            PropertyKind::Bipartite { m, n } => m + n,
            PropertyKind::Cyclic { m } => m,
        }
    }

    /// Potential edges as vertex pairs. Graph pairs are `(i, j)` with
    /// `i < j` in lexicographic order; digraph arcs `(i, j)` with `i ≠ j`
    /// row by row; bipartite edges `(v, w)` with `w` counted from 0 and
    /// index `v·n + w`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        match *self {
            PropertyKind::Graph { n } => (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect(),
            PropertyKind::Digraph { n } => (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .collect(),
            PropertyKind::Bipartite { m, n } => (0..m).flat_map(|v| (0..n).map(move |w| (v, w))).collect(),
            PropertyKind::Cyclic { m } => (0..m).map(|i| (i, i)).collect(),
        }
    }

    pub fn ground_size(&self) -> usize {
        match *self {
            PropertyKind::Graph { n } => n * n.saturating_sub(1) / 2,
            PropertyKind::Digraph { n } => n * n.saturating_sub(1),
            PropertyKind::Bipartite { m, n } => m * n,
            PropertyKind::Cyclic { m } => m,
        }
    }

    /// Generators of the symmetry group acting on `E`: adjacent vertex
    /// transpositions (on each side for bipartite graphs), or the shift.
    pub fn generators(&self) -> Vec<Vec<usize>> {
        let edges = self.edges();
        let index = |e: (usize, usize)| edges.iter().position(|&f| f == e).expect("edge");
        let induced = |sigma: &dyn Fn(usize) -> usize, undirected: bool| -> Vec<usize> {
            edges
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = (sigma(a), sigma(b));
                    index(if undirected && x > y { (y, x) } else { (x, y) })
                })
                .collect()
        };
        let swap = |i: usize| move |v: usize| if v == i { i + 1 } else if v == i + 1 { i } else { v };
        match *self {
            PropertyKind::Graph { n } => (0..n.saturating_sub(1)).map(|i| induced(&swap(i), true)).collect(),
            PropertyKind::Digraph { n } => (0..n.saturating_sub(1)).map(|i| induced(&swap(i), false)).collect(),
            PropertyKind::Bipartite { m, n } => {
                let mut gens = Vec::new();
                for i in 0..m.saturating_sub(1) {
                    gens.push(edges.iter().map(|&(v, w)| index((swap(i)(v), w))).collect());
                }
                for i in 0..n.saturating_sub(1) {
                    gens.push(edges.iter().map(|&(v, w)| index((v, swap(i)(w)))).collect());
                }
                gens
            }
            PropertyKind::Cyclic { m } => {
                if m <= 1 {
                    Vec::new()
                } else {
                    vec![(0..m).map(|i| (i + 1) % m).collect()]
                }
            }
        }
    }

    /// Adjacency lists of the structure encoded by `a` (out-neighbors for
    /// digraphs, `W` shifted by `m` for bipartite graphs).
    pub fn adjacency(&self, a: Mask) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices()];
        for (e, (x, y)) in self.edges().into_iter().enumerate() {
            if a >> e & 1 == 0 {
                continue;
            }
            match *self {
                PropertyKind::Graph { .. } | PropertyKind::Cyclic { .. } => {
                    adj[x].push(y);
                    adj[y].push(x);
                }
                PropertyKind::Digraph { .. } => adj[x].push(y),
                PropertyKind::Bipartite { m, .. } => {
                    adj[x].push(m + y);
                    adj[m + y].push(x);
                }
            }
        }
        adj
    }
}

/// A symmetric family on the potential edges of some kind of structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyFamily {
    pub kind: PropertyKind,
    pub family: SetFamily,
    pub generators: Vec<Vec<usize>>,
}

impl PropertyFamily {
    /// Wraps a family, checking invariance on every generator.
    pub fn new(kind: PropertyKind, family: SetFamily) -> Result<Self, PropertyError> {
        kind.validate()?;
        if family.m() != kind.ground_size() {
            return Err(PropertyError::BadParameter(format!(
                "family has ground set {}, expected {}",
                family.m(),
                kind.ground_size()
            )));
        }
        let generators = kind.generators();
        for g in &generators {
            if let Some(a) = family.members().find(|&a| !family.contains(SetFamily::permute_mask(a, g))) {
                return Err(PropertyError::NotInvariant {
                    member: mask_elements(a),
                    image: mask_elements(SetFamily::permute_mask(a, g)),
                });
            }
        }
        Ok(PropertyFamily {
            kind,
            family,
            generators,
        })
    }

    pub fn m(&self) -> usize {
        self.family.m()
    }
}

/// Enumerates `{A ⊆ E : pred(A)}` and checks that it is a property.
pub fn build_property(kind: PropertyKind, pred: impl FnMut(Mask) -> bool) -> Result<PropertyFamily, PropertyError> {
    kind.validate()?;
    let f = SetFamily::from_fn(kind.ground_size(), pred)?;
    PropertyFamily::new(kind, f)
}

/// `(p, t)` with `m = p^t`, `t ≥ 1`.
pub fn prime_power(m: usize) -> Option<(usize, u32)> {
    if m < 2 {
        return None;
    }
    let p = (2..=m).find(|d| m % d == 0)?;
    let mut r = m;
    let mut t = 0;
    while r % p == 0 {
        r /= p;
        t += 1;
    }
    (r == 1).then_some((p, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setfam::{argument_complexity, is_evasive};

    #[test]
    fn ground_sets() {
        assert_eq!(PropertyKind::Graph { n: 4 }.edges().len(), 6);
        assert_eq!(PropertyKind::Digraph { n: 3 }.edges().len(), 6);
        assert_eq!(PropertyKind::Bipartite { m: 2, n: 3 }.edges().len(), 6);
        for k in [
            PropertyKind::Graph { n: 5 },
            PropertyKind::Digraph { n: 4 },
            PropertyKind::Bipartite { m: 3, n: 2 },
            PropertyKind::Cyclic { m: 7 },
        ] {
            assert_eq!(k.edges().len(), k.ground_size());
            for g in k.generators() {
                let mut s = g.clone();
                s.sort();
                assert_eq!(s, (0..k.ground_size()).collect::<Vec<_>>());
            }
        }
        assert!(PropertyKind::Graph { n: 8 }.validate().is_err());
        assert!(PropertyKind::Digraph { n: 6 }.validate().is_err());
        assert!(PropertyKind::Bipartite { m: 5, n: 5 }.validate().is_err());
    }

    #[test]
    fn no_edge_is_evasive() {
        let p = build_property(PropertyKind::Graph { n: 4 }, |a| a == 0).unwrap();
        assert_eq!(p.family.len(), 1);
        assert_eq!(argument_complexity(&p.family).unwrap(), 6);
    }

    #[test]
    fn vertex_one_not_isolated_is_rejected() {
        let kind = PropertyKind::Graph { n: 3 };
        let err = build_property(kind, |a| !kind.adjacency(a)[0].is_empty()).unwrap_err();
        match err {
            PropertyError::NotInvariant { member, image } => {
                assert_ne!(member, image);
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn at_most_k_edges() {
        let kind = PropertyKind::Graph { n: 4 };
        for k in 0..8u32 {
            let p = build_property(kind, |a| a.count_ones() <= k).unwrap();
            if k >= 6 {
                assert!(p.family.is_trivial());
            } else {
                assert!(is_evasive(&p.family).unwrap());
            }
        }
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }
}
