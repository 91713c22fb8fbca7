use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use super::{ComplexError, Face, SimplicialComplex, Subdivision};

pub const DEFAULT_GROUP_CAP: usize = 10_080;

/// A finite group of vertex permutations, stored as its full element list.
///
/// Permutations act on labels `0..degree`; `elements[0]` is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    degree: usize,
    generators: Vec<Vec<u32>>,
    elements: Vec<Vec<u32>>,
}

fn check_perm(p: &[u32], degree: usize) -> Result<(), ComplexError> {
    if p.len() != degree {
        return Err(ComplexError::BadPermutation {
            len: p.len(),
            expected: degree,
        });
    }
    let mut seen = vec![false; degree];
    for &x in p {
        let x = x as usize;
        if x >= degree || seen[x] {
            return Err(ComplexError::BadPermutation {
                len: p.len(),
                expected: degree,
            });
        }
        seen[x] = true;
    }
    Ok(())
}

impl GroupAction {
    /// Closes the generators under composition.
    pub fn generate(degree: usize, generators: Vec<Vec<u32>>) -> Result<Self, ComplexError> {
        Self::generate_with_cap(degree, generators, DEFAULT_GROUP_CAP)
    }

    pub fn generate_with_cap(
        degree: usize,
        generators: Vec<Vec<u32>>,
        cap: usize,
    ) -> Result<Self, ComplexError> {
        for g in &generators {
            check_perm(g, degree)?;
        }
        let id: Vec<u32> = (0..degree as u32).collect();
        let mut seen: HashSet<Vec<u32>> = HashSet::from([id.clone()]);
        let mut elements = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &generators {
                let y: Vec<u32> = x.iter().map(|&v| g[v as usize]).collect();
                if seen.insert(y.clone()) {
                    if elements.len() == cap {
                        return Err(ComplexError::GroupTooLarge(cap));
                    }
                    elements.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(GroupAction {
            degree,
            generators,
            elements,
        })
    }

    /// The group generated by `generators`, checked to preserve `k`.
    pub fn on_complex(k: &SimplicialComplex, generators: Vec<Vec<u32>>) -> Result<Self, ComplexError> {
        let degree = k.vertices().last().map_or(0, |&v| v as usize + 1);
        let g = Self::generate(degree, generators)?;
        for p in &g.generators {
            for f in k.faces() {
                if !k.contains(&apply_face(p, f)) {
                    return Err(ComplexError::NotAnAutomorphism);
                }
            }
        }
        Ok(g)
    }

    pub fn trivial(degree: usize) -> Self {
        Self::generate(degree, Vec::new()).expect("identity only")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Vec<u32>] {
        &self.elements
    }

    pub fn generators(&self) -> &[Vec<u32>] {
        &self.generators
    }

    /// Orbit of a label, sorted.
    pub fn orbit(&self, v: u32) -> Vec<u32> {
        let set: BTreeSet<u32> = self.elements.iter().map(|g| g[v as usize]).collect();
        set.into_iter().collect()
    }

    /// Smallest label in the orbit of `v`.
    pub fn orbit_min(&self, v: u32) -> u32 {
        self.elements.iter().map(|g| g[v as usize]).min().unwrap()
    }

    /// `g(A) = A` for every group element.
    pub fn fixes_setwise(&self, face: &[u32]) -> bool {
        self.generators.iter().all(|g| apply_face(g, face) == face)
    }

    /// The induced action on the vertices of a barycentric subdivision.
    pub fn induced(&self, sub: &Subdivision) -> Result<GroupAction, ComplexError> {
        let index: BTreeMap<&Face, u32> = sub
            .labels
            .iter()
            .enumerate()
            .map(|(i, f)| (f, i as u32))
            .collect();
        let lift = |g: &Vec<u32>| -> Result<Vec<u32>, ComplexError> {
            sub.labels
                .iter()
                .map(|f| {
                    index
                        .get(&apply_face(g, f))
                        .copied()
                        .ok_or(ComplexError::NotAnAutomorphism)
                })
                .collect()
        };
        let generators = self.generators.iter().map(lift).collect::<Result<Vec<_>, _>>()?;
        let elements = self.elements.iter().map(lift).collect::<Result<Vec<_>, _>>()?;
        Ok(GroupAction {
            degree: sub.labels.len(),
            generators,
            elements,
        })
    }

    /// Reads permutations in cycle notation, one per line, e.g. `(0 1 2)(3 4)`.
    pub fn parse_generators(text: &str, degree: usize) -> Result<Vec<Vec<u32>>, ComplexError> {
        let mut out = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let mut perm: Vec<u32> = (0..degree as u32).collect();
            for cyc in line.split('(').skip(1) {
                let body = cyc
                    .split(')')
                    .next()
                    .ok_or_else(|| ComplexError::Parse(format!("bad cycle in {line:?}")))?;
                let pts: Vec<u32> = body
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse().map_err(|_| ComplexError::Parse(format!("bad point {s:?}"))))
                    .collect::<Result<_, _>>()?;
                for (i, &p) in pts.iter().enumerate() {
                    let next = pts[(i + 1) % pts.len()];
                    if p as usize >= degree || next as usize >= degree {
                        return Err(ComplexError::Parse(format!("point {p} out of range")));
                    }
                    perm[p as usize] = next;
                }
            }
            check_perm(&perm, degree)?;
            out.push(perm);
        }
        Ok(out)
    }

    /// Cycle notation of a permutation, fixed points omitted, `()` for the identity.
    pub fn cycle_notation(perm: &[u32]) -> String {
        let mut seen = vec![false; perm.len()];
        let mut out = String::new();
        for start in 0..perm.len() {
            if seen[start] || perm[start] as usize == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x.to_string());
                x = perm[x] as usize;
            }
            out.push_str(&format!("({})", cyc.join(" ")));
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

fn apply_face(g: &[u32], face: &[u32]) -> Face {
    let mut out: Vec<u32> = face.iter().map(|&v| g[v as usize]).collect();
    out.sort_unstable();
    out
}

/// `K^G` as the subcomplex of `sd(K)` spanned by the setwise fixed faces;
/// void when nothing is fixed.
pub fn fixed_subcomplex(k: &SimplicialComplex, g: &GroupAction) -> SimplicialComplex {
    let sd = k.barycentric_subdivision();
    let fixed: Vec<bool> = sd.labels.iter().map(|f| g.fixes_setwise(f)).collect();
    let out = sd.complex.induced(|v| fixed[v as usize]);
    if out.num_vertices() == 0 {
        SimplicialComplex::void()
    } else {
        out
    }
}

/// `|K|/G` realized on `sd²(K)`: each face is sent to its set of vertex orbits.
pub fn quotient_complex(k: &SimplicialComplex, g: &GroupAction) -> Result<SimplicialComplex, ComplexError> {
    let sd1 = k.barycentric_subdivision();
    let g1 = g.induced(&sd1)?;
    let sd2 = sd1.complex.barycentric_subdivision();
    let g2 = g1.induced(&sd2)?;
    let rep: Vec<u32> = (0..g2.degree() as u32).map(|v| g2.orbit_min(v)).collect();
    Ok(sd2.complex.relabeled(|v| rep[v as usize]))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FloydReport {
    pub p: usize,
    pub chi: i64,
    pub chi_fixed: i64,
    pub chi_quotient: i64,
    /// `χ(K) + (p−1)·χ(K^G) = p·χ(K/G)`.
    pub holds: bool,
}

/// Checks Floyd's formula for an action of order `p`.
pub fn floyd_check(k: &SimplicialComplex, g: &GroupAction) -> Result<FloydReport, ComplexError> {
    let p = g.order();
    let chi = k.euler_characteristic();
    let chi_fixed = fixed_subcomplex(k, g).euler_characteristic();
    let chi_quotient = quotient_complex(k, g)?.euler_characteristic();
    let pi = p as i64;
    Ok(FloydReport {
        p,
        chi,
        chi_fixed,
        chi_quotient,
        holds: chi + (pi - 1) * chi_fixed == pi * chi_quotient,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransitivityVerdict {
    /// Vertex-transitive with a fixed point, and `K` is a simplex.
    Holds,
    /// Hypothesis satisfied but `K` is not a simplex.
    Violated,
    HypothesisFails { transitive: bool, has_fixed_point: bool },
}

/// "Vertex-transitive with a fixed point implies simplex", evaluated on one
/// instance.
pub fn vertex_transitive_fixed_point_check(k: &SimplicialComplex, g: &GroupAction) -> TransitivityVerdict {
    let verts = k.vertices();
    let transitive = match verts.first() {
        Some(&v) => g.orbit(v) == verts,
        None => false,
    };
    let has_fixed_point = fixed_subcomplex(k, g).num_vertices() > 0;
    if !(transitive && has_fixed_point) {
        return TransitivityVerdict::HypothesisFails {
            transitive,
            has_fixed_point,
        };
    }
    if k.is_simplex() {
        TransitivityVerdict::Holds
    } else {
        TransitivityVerdict::Violated
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rot3() -> Vec<u32> {
        vec![1, 2, 0]
    }

    #[test]
    fn closure_orders() {
        assert_eq!(GroupAction::generate(3, vec![rot3()]).unwrap().order(), 3);
        let s4 = GroupAction::generate(4, vec![vec![1, 0, 2, 3], vec![1, 2, 3, 0]]).unwrap();
        assert_eq!(s4.order(), 24);
        assert!(matches!(
            GroupAction::generate_with_cap(4, vec![vec![1, 0, 2, 3], vec![1, 2, 3, 0]], 10),
            Err(ComplexError::GroupTooLarge(10))
        ));
        assert!(GroupAction::generate(3, vec![vec![0, 0, 1]]).is_err());
    }

    #[test]
    fn automorphism_check() {
        let k = SimplicialComplex::from_facets([[0u32, 1], [1, 2]]);
        assert!(matches!(
            GroupAction::on_complex(&k, vec![rot3()]),
            Err(ComplexError::NotAnAutomorphism)
        ));
        assert!(GroupAction::on_complex(&k, vec![vec![2, 1, 0]]).is_ok());
    }

    #[test]
    fn rotation_fixes_barycenter_only() {
        let k = SimplicialComplex::simplex(3);
        let g = GroupAction::on_complex(&k, vec![rot3()]).unwrap();
        let fixed = fixed_subcomplex(&k, &g);
        assert_eq!(fixed.f_vector(), vec![1]);
        let hollow = SimplicialComplex::simplex_boundary(3);
        assert!(fixed_subcomplex(&hollow, &g).is_void());
    }

    #[test]
    fn trivial_group_fixes_everything() {
        let k = SimplicialComplex::simplex_boundary(4);
        let g = GroupAction::trivial(4);
        let fixed = fixed_subcomplex(&k, &g);
        assert_eq!(fixed, k.barycentric_subdivision().complex);
        let q = quotient_complex(&k, &g).unwrap();
        let sd2 = k
            .barycentric_subdivision()
            .complex
            .barycentric_subdivision()
            .complex;
        assert_eq!(q, sd2);
    }

    #[test]
    fn quotients() {
        let g = GroupAction::generate(3, vec![rot3()]).unwrap();
        let circle = SimplicialComplex::simplex_boundary(3);
        assert_eq!(quotient_complex(&circle, &g).unwrap().euler_characteristic(), 0);
        let disk = SimplicialComplex::simplex(3);
        assert_eq!(quotient_complex(&disk, &g).unwrap().euler_characteristic(), 1);
        let seg = SimplicialComplex::simplex(2);
        let swap = GroupAction::generate(2, vec![vec![1, 0]]).unwrap();
        let half = quotient_complex(&seg, &swap).unwrap();
        assert_eq!(half.euler_characteristic(), 1);
        assert_eq!(half.dim(), Some(1));
        // sd² of an edge is a 5-vertex path, folded at its middle vertex
        assert_eq!(half.num_vertices(), 3);
    }

    #[test]
    fn floyd_examples() {
        let g = GroupAction::generate(3, vec![rot3()]).unwrap();
        let r = floyd_check(&SimplicialComplex::simplex(3), &g).unwrap();
        assert_eq!((r.chi, r.chi_fixed, r.chi_quotient), (1, 1, 1));
        assert!(r.holds);
        let hex = SimplicialComplex::cycle(6);
        let rot2 = GroupAction::generate(6, vec![vec![2, 3, 4, 5, 0, 1]]).unwrap();
        let r = floyd_check(&hex, &rot2).unwrap();
        assert_eq!((r.chi, r.chi_fixed, r.chi_quotient, r.holds), (0, 0, 0, true));
    }

    #[test]
    fn transitivity_verdicts() {
        let s3 = GroupAction::generate(3, vec![rot3(), vec![1, 0, 2]]).unwrap();
        assert_eq!(
            vertex_transitive_fixed_point_check(&SimplicialComplex::simplex(3), &s3),
            TransitivityVerdict::Holds
        );
        let z3 = GroupAction::generate(3, vec![rot3()]).unwrap();
        assert_eq!(
            vertex_transitive_fixed_point_check(&SimplicialComplex::simplex_boundary(3), &z3),
            TransitivityVerdict::HypothesisFails {
                transitive: true,
                has_fixed_point: false
            }
        );
    }

    #[test]
    fn cycle_notation_round_trip() {
        let p = vec![1, 2, 0, 4, 3, 5];
        let s = GroupAction::cycle_notation(&p);
        assert_eq!(s, "(0 1 2)(3 4)");
        assert_eq!(GroupAction::parse_generators(&s, 6).unwrap(), vec![p]);
        assert_eq!(GroupAction::cycle_notation(&[0, 1]), "()");
    }
}
