//! Finite abstract simplicial complexes: links, cones, non-evasiveness,
//! collapsibility, rational and mod-p homology, simplicial self-maps, group
//! actions with their fixed subcomplexes and quotients.

mod action;
pub mod catalog;
mod collapse;
mod evasive;
mod homology;

pub use action::{
    floyd_check, fixed_subcomplex, quotient_complex, vertex_transitive_fixed_point_check,
    FloydReport, GroupAction, TransitivityVerdict, DEFAULT_GROUP_CAP,
};
pub use collapse::{
    is_collapsible, is_collapsible_with, replay_collapses, Collapse, CollapseOutcome,
    DEFAULT_COLLAPSE_BUDGET,
};
pub use evasive::{is_nonevasive, is_nonevasive_with, DEFAULT_VERTEX_CAP};
pub use homology::{
    hopf_trace_check, lefschetz_number, mod_p_acyclic, mod_p_betti, rational_betti, ChainMap,
    HopfReport, SimplicialMap,
};

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::setfam::{mask_elements, SetFamily};

/// A face as its strictly increasing vertex list.
pub type Face = Vec<u32>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("{0} is not a vertex of the complex")]
    NotAVertex(u32),
    #[error("family is not closed under taking subsets")]
    NotDownwardClosed,
    #[error("vertex count {count} exceeds cap {cap}")]
    TooManyVertices { count: usize, cap: usize },
    #[error("too many vertices to encode as a set family: {0}")]
    FamilyTooLarge(usize),
    #[error("map is not simplicial: image of {face:?} is not a face")]
    NotSimplicial { face: Face },
    #[error("map does not commute with the boundary in dimension {dim}")]
    NotAChainMap { dim: usize },
    #[error("permutation has length {len}, expected {expected}")]
    BadPermutation { len: usize, expected: usize },
    #[error("permutation does not preserve the complex")]
    NotAnAutomorphism,
    #[error("group closure exceeds {0} elements")]
    GroupTooLarge(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

/// A downward-closed set of finite vertex sets.
///
/// Nonempty complexes always contain the empty face. The void complex has no
/// faces at all.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    faces: BTreeSet<Face>,
}

impl std::fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.facets()).finish()
    }
}

fn sorted(mut v: Vec<u32>) -> Face {
    v.sort_unstable();
    v.dedup();
    v
}

/// All subsets of a sorted face, each sorted.
fn subfaces(face: &[u32]) -> impl Iterator<Item = Face> + '_ {
    let k = face.len();
    (0u64..1 << k).map(move |bits| {
        (0..k)
            .filter(|i| bits >> i & 1 == 1)
            .map(|i| face[i])
            .collect()
    })
}

impl SimplicialComplex {
    /// The void complex (no faces, not even `∅`).
    pub fn void() -> Self {
        SimplicialComplex {
            faces: BTreeSet::new(),
        }
    }

    /// `{∅}`.
    pub fn empty_face_only() -> Self {
        SimplicialComplex {
            faces: BTreeSet::from([Vec::new()]),
        }
    }

    /// Downward closure of the given faces.
    pub fn from_facets<I, F>(facets: I) -> Self
    where
        I: IntoIterator<Item = F>,
        F: AsRef<[u32]>,
    {
        let mut faces = BTreeSet::new();
        for f in facets {
            let f = sorted(f.as_ref().to_vec());
            if faces.contains(&f) {
                continue;
            }
            faces.extend(subfaces(&f));
        }
        SimplicialComplex { faces }
    }

    /// The full simplex on vertices `0..n`.
    pub fn simplex(n: u32) -> Self {
        Self::from_facets([(0..n).collect::<Vec<_>>()])
    }

    /// The boundary of the simplex on `0..n`.
    pub fn simplex_boundary(n: u32) -> Self {
        Self::skeleton_of_simplex(n, n as usize - 2)
    }

    /// All faces of dimension at most `k` of the simplex on `0..n`.
    pub fn skeleton_of_simplex(n: u32, k: usize) -> Self {
        let mut faces = BTreeSet::new();
        for f in subfaces(&(0..n).collect::<Vec<_>>()) {
            if f.len() <= k + 1 {
                faces.insert(f);
            }
        }
        SimplicialComplex { faces }
    }

    /// The cycle `0-1-…-(n−1)-0` as a 1-dimensional complex.
    pub fn cycle(n: u32) -> Self {
        Self::from_facets((0..n).map(|i| [i, (i + 1) % n]))
    }

    /// Reads a downward-closed family; element `e` becomes vertex `e`.
    pub fn from_family(f: &SetFamily) -> Result<Self, ComplexError> {
        if !f.is_downward_closed() {
            return Err(ComplexError::NotDownwardClosed);
        }
        let faces = f
            .members()
            .map(|a| mask_elements(a).into_iter().map(|e| e as u32).collect())
            .collect();
        Ok(SimplicialComplex { faces })
    }

    /// The membership family over the sorted vertex list, vertex `k` of that
    /// list becoming element `k`.
    pub fn to_family(&self) -> Result<SetFamily, ComplexError> {
        let verts = self.vertices();
        if verts.len() > crate::setfam::MAX_GROUND_SET {
            return Err(ComplexError::FamilyTooLarge(verts.len()));
        }
        let index: BTreeMap<u32, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let masks = self
            .faces
            .iter()
            .map(|f| f.iter().fold(0u32, |m, v| m | 1 << index[v]));
        SetFamily::from_members(verts.len(), masks).map_err(|_| ComplexError::FamilyTooLarge(verts.len()))
    }

    pub fn faces(&self) -> impl Iterator<Item = &Face> {
        self.faces.iter()
    }

    pub fn contains(&self, face: &[u32]) -> bool {
        self.faces.contains(face)
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn is_void(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn vertices(&self) -> Vec<u32> {
        self.faces
            .iter()
            .filter(|f| f.len() == 1)
            .map(|f| f[0])
            .collect()
    }

    pub fn num_vertices(&self) -> usize {
        self.faces.iter().filter(|f| f.len() == 1).count()
    }

    /// Dimension, `−1` for `{∅}` and `None` for the void complex.
    pub fn dim(&self) -> Option<isize> {
        self.faces.iter().map(|f| f.len() as isize - 1).max()
    }

    /// Faces of dimension `i`, sorted.
    pub fn faces_of_dim(&self, i: isize) -> Vec<Face> {
        self.faces
            .iter()
            .filter(|f| f.len() as isize - 1 == i)
            .cloned()
            .collect()
    }

    /// `f_i` for `i = 0..=dim`.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for f in self.faces.iter().filter(|f| !f.is_empty()) {
            let i = f.len() - 1;
            if out.len() <= i {
                out.resize(i + 1, 0);
            }
            out[i] += 1;
        }
        out
    }

    /// Inclusion-maximal faces.
    pub fn facets(&self) -> Vec<Face> {
        let mut out: Vec<Face> = Vec::new();
        let mut by_size: Vec<&Face> = self.faces.iter().collect();
        by_size.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        for f in by_size {
            if !out.iter().any(|g| is_subset(f, g)) {
                out.push(f.clone());
            }
        }
        out.sort();
        out
    }

    /// `K` equals the full simplex on its vertex set (`{∅}` included).
    pub fn is_simplex(&self) -> bool {
        if self.is_void() {
            return false;
        }
        let n = self.num_vertices();
        n < 64 && self.faces.len() as u64 == 1u64 << n
    }

    /// `χ(K) = f_0 − f_1 + f_2 − ⋯`; the void complex and `{∅}` give 0.
    pub fn euler_characteristic(&self) -> i64 {
        self.faces
            .iter()
            .filter(|f| !f.is_empty())
            .map(|f| if f.len() % 2 == 1 { 1 } else { -1 })
            .sum()
    }

    /// `χ(K) − 1`, with `χ̃(void) = 0`.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        if self.is_void() {
            0
        } else {
            self.euler_characteristic() - 1
        }
    }

    fn check_vertex(&self, v: u32) -> Result<(), ComplexError> {
        if self.faces.contains(&vec![v]) {
            Ok(())
        } else {
            Err(ComplexError::NotAVertex(v))
        }
    }

    /// Faces `A` with `v ∉ A` and `A ∪ {v} ∈ K`.
    pub fn link(&self, v: u32) -> Result<Self, ComplexError> {
        self.check_vertex(v)?;
        let faces = self
            .faces
            .iter()
            .filter(|f| f.binary_search(&v).is_ok())
            .map(|f| f.iter().copied().filter(|&u| u != v).collect())
            .collect();
        Ok(SimplicialComplex { faces })
    }

    /// Faces not containing `v`.
    pub fn deletion(&self, v: u32) -> Result<Self, ComplexError> {
        self.check_vertex(v)?;
        let faces = self
            .faces
            .iter()
            .filter(|f| f.binary_search(&v).is_err())
            .cloned()
            .collect();
        Ok(SimplicialComplex { faces })
    }

    /// The lowest vertex lying in every facet, if any.
    pub fn is_cone(&self) -> Option<u32> {
        let facets = self.facets();
        self.vertices()
            .into_iter()
            .find(|v| facets.iter().all(|f| f.binary_search(v).is_ok()))
    }

    /// Image under a vertex relabeling, given as `vertex -> new vertex`.
    pub fn relabeled(&self, map: impl Fn(u32) -> u32) -> Self {
        SimplicialComplex {
            faces: self
                .faces
                .iter()
                .map(|f| sorted(f.iter().map(|&v| map(v)).collect()))
                .collect(),
        }
    }

    /// Subcomplex induced on a vertex subset.
    pub fn induced(&self, keep: impl Fn(u32) -> bool) -> Self {
        SimplicialComplex {
            faces: self
                .faces
                .iter()
                .filter(|f| f.iter().all(|&v| keep(v)))
                .cloned()
                .collect(),
        }
    }

    /// Faces as bitmasks over the sorted vertex list (at most 32 vertices).
    pub(crate) fn masks(&self) -> Result<(Vec<u32>, Vec<u32>), ComplexError> {
        let verts = self.vertices();
        if verts.len() > 32 {
            return Err(ComplexError::TooManyVertices {
                count: verts.len(),
                cap: 32,
            });
        }
        let index: BTreeMap<u32, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let masks = self
            .faces
            .iter()
            .map(|f| f.iter().fold(0u32, |m, v| m | 1 << index[v]))
            .collect();
        Ok((verts, masks))
    }

    /// Barycentric subdivision.
    pub fn barycentric_subdivision(&self) -> Subdivision {
        let labels: Vec<Face> = self.faces.iter().filter(|f| !f.is_empty()).cloned().collect();
        let mut faces = BTreeSet::new();
        if !self.is_void() {
            faces.insert(Vec::new());
        }
        // Extend chains one face at a time, always by a strict superset.
        let mut frontier: Vec<Vec<u32>> = Vec::new();
        for (i, _) in labels.iter().enumerate() {
            frontier.push(vec![i as u32]);
        }
        let mut supersets: Vec<Vec<u32>> = vec![Vec::new(); labels.len()];
        for (i, a) in labels.iter().enumerate() {
            for (j, b) in labels.iter().enumerate() {
                if a.len() < b.len() && is_subset(a, b) {
                    supersets[i].push(j as u32);
                }
            }
        }
        while let Some(chain) = frontier.pop() {
            let top = *chain.last().unwrap();
            for &j in &supersets[top as usize] {
                let mut c = chain.clone();
                c.push(j);
                frontier.push(c);
            }
            faces.insert(sorted(chain));
        }
        Subdivision {
            complex: SimplicialComplex { faces },
            labels,
        }
    }

    /// Text form shared with set families: `m=<n> complex` followed by one
    /// facet-closed face per line. Vertices must be `0..n`.
    pub fn to_text(&self) -> String {
        let n = self.vertices().last().map_or(0, |&v| v as usize + 1);
        let mut out = format!("m={n} complex\n");
        for f in &self.faces {
            if f.is_empty() {
                out.push('-');
            } else {
                let s: Vec<String> = f.iter().map(|v| v.to_string()).collect();
                out.push_str(&s.join(" "));
            }
            out.push('\n');
        }
        out
    }

    /// Parses either the full family format or a list of facets (one per
    /// line) after an `m=<n> complex` header; subsets are closed downward.
    pub fn parse(text: &str) -> Result<Self, ComplexError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| ComplexError::Parse("missing header".into()))?;
        let mut parts = header.split_whitespace();
        let m: u32 = parts
            .next()
            .and_then(|p| p.strip_prefix("m="))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| ComplexError::Parse(format!("bad header {header:?}")))?;
        if parts.next() != Some("complex") {
            return Err(ComplexError::Parse("header must carry the `complex` flag".into()));
        }
        let mut facets = Vec::new();
        for line in lines {
            let mut face = Vec::new();
            if line != "-" {
                for tok in line.split_whitespace() {
                    let v: u32 = tok
                        .parse()
                        .map_err(|_| ComplexError::Parse(format!("bad vertex {tok:?}")))?;
                    if v >= m {
                        return Err(ComplexError::Parse(format!("vertex {v} out of range")));
                    }
                    face.push(v);
                }
            }
            facets.push(face);
        }
        Ok(Self::from_facets(facets))
    }
}

/// `sd(K)` with vertex `k` standing for the face `labels[k]` of `K`.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub complex: SimplicialComplex,
    pub labels: Vec<Face>,
}

pub(crate) fn is_subset(a: &[u32], b: &[u32]) -> bool {
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}
