use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{prime_power, PropertyError, PropertyFamily, PropertyKind};
use crate::setfam::{argument_complexity, euler_count, mask_elements, Mask, SetFamily, DEFAULT_MAX_STATES};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    /// Cardinality of every member.
    pub k: usize,
    pub size: usize,
    pub representative: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitDecomposition {
    pub orbits: Vec<Orbit>,
}

impl OrbitDecomposition {
    /// Orbit sizes grouped by cardinality.
    pub fn by_cardinality(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for o in &self.orbits {
            out.entry(o.k).or_default().push(o.size);
        }
        out
    }

    pub fn total(&self) -> usize {
        self.orbits.iter().map(|o| o.size).sum()
    }
}

/// Orbits of the symmetry group on the members of the family.
pub fn orbit_decomposition(p: &PropertyFamily) -> OrbitDecomposition {
    let mut seen = SetFamily::empty(p.m()).expect("same size");
    let mut orbits = Vec::new();
    for a in p.family.members() {
        if seen.contains(a) {
            continue;
        }
        seen.insert(a).expect("in range");
        let mut stack = vec![a];
        let mut size = 0;
        while let Some(b) = stack.pop() {
            size += 1;
            for g in &p.generators {
                let c = SetFamily::permute_mask(b, g);
                if !seen.contains(c) {
                    seen.insert(c).expect("in range");
                    stack.push(c);
                }
            }
        }
        orbits.push(Orbit {
            k: a.count_ones() as usize,
            size,
            representative: mask_elements(a),
        });
    }
    orbits.sort_by_key(|o| (o.k, o.representative.clone()));
    OrbitDecomposition { orbits }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub m: usize,
    pub p: usize,
    pub t: u32,
    pub orbits: usize,
    /// Orbits with `0 < k < m` whose size is not a multiple of `p`.
    pub violations: Vec<Orbit>,
    /// `∅ ∈ F` and `E ∉ F`.
    pub hypothesis: bool,
    /// `−f_{−1} + f_0 − f_1 + ⋯`.
    pub alternating_sum: i64,
    pub alternating_mod_p: i64,
    /// `alternating_sum ≡ −1 (mod p)` whenever the hypothesis holds.
    pub congruence_holds: bool,
    /// Exact `c(F)` when `3^m` fits the default budget.
    pub c: Option<usize>,
    pub evasive: Option<bool>,
    pub ok: bool,
}

/// Orbit-size divisibility and the alternating-sum congruence for a family
/// over a ground set of declared size `p^t`.
pub fn orbit_congruence_check(f: &PropertyFamily, p: usize, t: u32) -> Result<CongruenceReport, PropertyError> {
    let m = f.m();
    match prime_power(m) {
        Some((pp, tt)) if pp == p && tt == t => {}
        _ => return Err(PropertyError::NotPrimePower(m)),
    }
    let dec = orbit_decomposition(f);
    let violations: Vec<Orbit> = dec
        .orbits
        .iter()
        .filter(|o| o.k > 0 && o.k < m && o.size % p != 0)
        .cloned()
        .collect();
    let full = f.family.ground();
    let hypothesis = f.family.contains(0) && !f.family.contains(full);
    let alternating_sum = -euler_count(&f.family);
    let alternating_mod_p = alternating_sum.rem_euclid(p as i64);
    let congruence_holds = !hypothesis || alternating_mod_p == p as i64 - 1;
    let c = if 3u64.pow(m as u32) <= DEFAULT_MAX_STATES {
        Some(argument_complexity(&f.family)?)
    } else {
        None
    };
    let evasive = c.map(|c| c == m);
    let ok = violations.is_empty() && congruence_holds && (!hypothesis || evasive != Some(false));
    Ok(CongruenceReport {
        m,
        p,
        t,
        orbits: dec.orbits.len(),
        violations,
        hypothesis,
        alternating_sum,
        alternating_mod_p,
        congruence_holds,
        c,
        evasive,
        ok,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IlliesReport {
    /// `f_{−1}, f_0, …`: members by cardinality.
    pub counts: Vec<u64>,
    /// `p_F(−1)`.
    pub euler: i64,
    pub c: usize,
    /// `A ∈ F`, `B ⊆ A`, `B ∉ F` (element `i` stands for `i + 1`).
    pub non_monotone_witness: (Vec<usize>, Vec<usize>),
    pub hypothesis: bool,
}

/// The twelve-element `Z_12`-invariant family with `∅ ∈ F`, `E ∉ F` that is
/// not evasive. Element `i` stands for `i + 1`.
pub fn illies_family() -> Result<(PropertyFamily, IlliesReport), PropertyError> {
    let m = 12;
    let shifts = |base: &[usize]| -> Vec<Mask> {
        (0..m)
            .map(|s| base.iter().fold(0 as Mask, |acc, &e| acc | 1 << ((e + s) % m)))
            .collect()
    };
    let mut members = vec![0 as Mask];
    for base in [&[0][..], &[0, 3], &[0, 4], &[0, 3, 6], &[0, 4, 8], &[0, 3, 6, 9]] {
        members.extend(shifts(base));
    }
    let family = SetFamily::from_members(m, members)?;
    let pf = PropertyFamily::new(PropertyKind::Cyclic { m }, family)?;
    let counts: Vec<u64> = pf.family.size_counts().into_iter().take(5).collect();
    let euler = euler_count(&pf.family);
    let c = argument_complexity(&pf.family)?;
    let witness = pf
        .family
        .members()
        .find_map(|a| {
            let mut rest = a;
            while rest != 0 {
                let e = rest & rest.wrapping_neg();
                rest &= rest - 1;
                if !pf.family.contains(a & !e) {
                    return Some((mask_elements(a), mask_elements(a & !e)));
                }
            }
            None
        })
        .expect("not downward closed");
    let hypothesis = pf.family.contains(0) && !pf.family.contains(pf.family.ground());
    Ok((
        pf,
        IlliesReport {
            counts,
            euler,
            c,
            non_monotone_witness: witness,
            hypothesis,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grprops::builtin;
    use crate::setfam::is_evasive;

    #[test]
    fn illies_numbers() {
        let (pf, r) = illies_family().unwrap();
        assert_eq!(r.counts, vec![1, 12, 24, 16, 3]);
        assert_eq!(pf.family.len(), 56);
        assert_eq!(r.euler, 0);
        assert!(r.c <= 11);
        assert!(r.hypothesis);
        assert!(pf.family.contains(0b1001001));
        assert!(!pf.family.contains(0b1000001));
        let (a, b) = r.non_monotone_witness;
        assert!(b.iter().all(|e| a.contains(e)));
        // orbit sizes 1; 12; 12, 12; 12, 4; 3
        let dec = orbit_decomposition(&pf);
        let by = dec.by_cardinality();
        assert_eq!(by[&2], vec![12, 12]);
        let mut three = by[&3].clone();
        three.sort();
        assert_eq!(three, vec![4, 12]);
        assert_eq!(by[&4], vec![3]);
    }

    #[test]
    fn graph_properties_on_four_vertices_rejected() {
        let p = builtin("connected", PropertyKind::Graph { n: 4 }, None).unwrap();
        assert!(matches!(orbit_congruence_check(&p, 2, 3), Err(PropertyError::NotPrimePower(6))));
        let q = builtin("connected", PropertyKind::Graph { n: 3 }, None).unwrap();
        assert!(orbit_congruence_check(&q, 2, 2).is_err());
        let r = orbit_congruence_check(&q, 3, 1).unwrap();
        assert!(r.ok);
    }

    /// Every `Z_4`-invariant family on 4 points, as a union of subset orbits.
    #[test]
    fn all_cyclic_families_on_four_points() {
        let kind = PropertyKind::Cyclic { m: 4 };
        let shift = &kind.generators()[0];
        let mut orbit_of = [usize::MAX; 16];
        let mut orbits: Vec<Vec<Mask>> = Vec::new();
        for a in 0..16u32 {
            if orbit_of[a as usize] != usize::MAX {
                continue;
            }
            let mut o = vec![a];
            let mut b = SetFamily::permute_mask(a, shift);
            while b != a {
                o.push(b);
                b = SetFamily::permute_mask(b, shift);
            }
            for &x in &o {
                orbit_of[x as usize] = orbits.len();
            }
            orbits.push(o);
        }
        assert_eq!(orbits.len(), 6);
        let mut with_hypothesis = 0;
        for pick in 0..(1u32 << orbits.len()) {
            let members = (0..orbits.len()).filter(|i| pick >> i & 1 == 1).flat_map(|i| orbits[i].clone());
            let f = SetFamily::from_members(4, members).unwrap();
            let pf = PropertyFamily::new(kind, f).unwrap();
            let r = orbit_congruence_check(&pf, 2, 2).unwrap();
            assert!(r.violations.is_empty());
            assert!(r.ok);
            if r.hypothesis {
                with_hypothesis += 1;
                assert_eq!(r.alternating_mod_p, 1);
                assert!(is_evasive(&pf.family).unwrap());
            }
        }
        assert_eq!(with_hypothesis, 16);
    }

    #[test]
    fn bipartite_two_by_two_monotone() {
        let kind = PropertyKind::Bipartite { m: 2, n: 2 };
        for k in 0..4 {
            let p = builtin("at_most_k_edges", kind, Some(k)).unwrap();
            let r = orbit_congruence_check(&p, 2, 2).unwrap();
            assert!(r.hypothesis && r.ok);
            assert_eq!(r.c, Some(4));
        }
    }
}
