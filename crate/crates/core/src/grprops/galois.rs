use serde::{Deserialize, Serialize};

use super::{prime_power, PropertyError};

/// `GF(q)` for `q ∈ {2, 3, 4, 5, 7, 8, 9}` with elements `0..q`.
///
/// Extension fields use base-`p` digits of the element as polynomial
/// coefficients, reduced by a fixed irreducible polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf {
    pub q: usize,
    pub p: usize,
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
}

impl Gf {
    pub fn new(q: usize) -> Result<Self, PropertyError> {
        // monic modulus, low coefficient first without the leading 1
        let modulus: &[usize] = match q {
            2 | 3 | 5 | 7 => &[],
            4 => &[1, 1],    // x² + x + 1
            8 => &[1, 1, 0], // x³ + x + 1
            9 => &[1, 0],    // x² + 1
            _ => return Err(PropertyError::UnsupportedField(q)),
        };
        let (p, t) = prime_power(q).expect("listed orders are prime powers");
        let t = t as usize;
        let digits = |x: usize| -> Vec<usize> { (0..t).map(|i| x / p.pow(i as u32) % p).collect() };
        let value = |d: &[usize]| -> usize { d.iter().rev().fold(0, |acc, &c| acc * p + c) };
        let add: Vec<Vec<usize>> = (0..q)
            .map(|a| {
                (0..q)
                    .map(|b| {
                        let s: Vec<usize> = digits(a).iter().zip(digits(b)).map(|(x, y)| (x + y) % p).collect();
                        value(&s)
                    })
                    .collect()
            })
            .collect();
        let mul: Vec<Vec<usize>> = (0..q)
            .map(|a| {
                (0..q)
                    .map(|b| {
                        let (da, db) = (digits(a), digits(b));
                        let mut prod = vec![0usize; 2 * t];
                        for i in 0..t {
                            for j in 0..t {
                                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
                            }
                        }
                        // x^t ≡ −(modulus)
                        for k in (t..2 * t).rev() {
                            let c = prod[k];
                            if c == 0 {
                                continue;
                            }
                            prod[k] = 0;
                            for (i, &mc) in modulus.iter().enumerate() {
                                prod[k - t + i] = (prod[k - t + i] + (p - c) * mc) % p;
                            }
                        }
                        value(&prod[..t])
                    })
                    .collect()
            })
            .collect();
        Ok(Gf { q, p, add, mul })
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a][b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn neg(&self, a: usize) -> usize {
        (0..self.q).find(|&b| self.add(a, b) == 0).expect("additive inverse")
    }

    pub fn inv(&self, a: usize) -> Option<usize> {
        (1..self.q).find(|&b| self.mul(a, b) == 1)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Checks the field axioms by exhaustion.
    pub fn is_field(&self) -> bool {
        let q = self.q;
        let all = 0..q;
        all.clone().all(|a| {
            self.add(a, 0) == a
                && self.mul(a, 1) == a
                && (a == 0 || self.inv(a).is_some())
                && all.clone().all(|b| {
                    self.add(a, b) == self.add(b, a)
                        && self.mul(a, b) == self.mul(b, a)
                        && all.clone().all(|c| {
                            self.mul(a, self.add(b, c)) == self.add(self.mul(a, b), self.mul(a, c))
                                && self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
                                && self.add(self.add(a, b), c) == self.add(a, self.add(b, c))
                        })
                })
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KssGroupData {
    pub q: usize,
    pub p: usize,
    /// `|G| = q(q−1)`.
    pub order: usize,
    /// `C(q, 2)`.
    pub pairs: usize,
    pub field_ok: bool,
    pub doubly_transitive: bool,
    pub edge_transitive: bool,
    /// The translations form a normal subgroup of order `q`.
    pub translations_normal: bool,
    /// `G/P ≅ GF(q)^*` is generated by one element.
    pub quotient_cyclic: bool,
    pub primitive_element: usize,
    /// Generators `x ↦ x+1` and `x ↦ ωx` acting on the pairs, in
    /// lexicographic pair order.
    pub pair_generators: Vec<Vec<usize>>,
}

/// The affine group `{x ↦ ax + b}` of `GF(q)` and its action on the
/// potential edges of the complete graph on `GF(q)`.
pub fn kss_group_data(q: usize) -> Result<KssGroupData, PropertyError> {
    let f = Gf::new(q)?;
    let maps: Vec<(usize, usize)> = (1..q).flat_map(|a| (0..q).map(move |b| (a, b))).collect();
    let apply = |(a, b): (usize, usize), x: usize| f.add(f.mul(a, x), b);
    let pairs: Vec<(usize, usize)> = (0..q).flat_map(|i| (i + 1..q).map(move |j| (i, j))).collect();
    let pair_index = |x: usize, y: usize| pairs.iter().position(|&p| p == (x.min(y), x.max(y))).unwrap();

    let ordered: Vec<(usize, usize)> = (0..q).flat_map(|i| (0..q).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let doubly_transitive = ordered.iter().all(|&(u, v)| {
        ordered
            .iter()
            .all(|&(x, y)| maps.iter().any(|&g| apply(g, u) == x && apply(g, v) == y))
    });
    let edge_transitive = pairs.is_empty() || {
        let mut hit = vec![false; pairs.len()];
        for &g in &maps {
            hit[pair_index(apply(g, pairs[0].0), apply(g, pairs[0].1))] = true;
        }
        hit.iter().all(|&h| h)
    };
    // g∘t∘g⁻¹ for a translation t is again a translation
    let compose = |g: (usize, usize), h: (usize, usize)| (f.mul(g.0, h.0), f.add(f.mul(g.0, h.1), g.1));
    let inverse = |g: (usize, usize)| {
        let ai = f.inv(g.0).unwrap();
        (ai, f.neg(f.mul(ai, g.1)))
    };
    let translations_normal = maps
        .iter()
        .all(|&g| (0..q).all(|b| compose(compose(g, (1, b)), inverse(g)).0 == 1));
    let primitive_element = (1..q).find(|&a| f.order(a) == q - 1).unwrap_or(1);
    let quotient_cyclic = f.order(primitive_element) == q - 1;
    let pair_generators = if pairs.is_empty() {
        Vec::new()
    } else {
        [(1, 1), (primitive_element, 0)]
            .iter()
            .map(|&g| pairs.iter().map(|&(x, y)| pair_index(apply(g, x), apply(g, y))).collect())
            .collect()
    };
    Ok(KssGroupData {
        q,
        p: f.p,
        order: maps.len(),
        pairs: pairs.len(),
        field_ok: f.is_field(),
        doubly_transitive,
        edge_transitive,
        translations_normal,
        quotient_cyclic,
        primitive_element,
        pair_generators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fields() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let f = Gf::new(q).unwrap();
            assert!(f.is_field(), "q = {q}");
        }
        assert!(Gf::new(6).is_err());
        assert!(Gf::new(16).is_err());
        let f4 = Gf::new(4).unwrap();
        // x·x = x + 1
        assert_eq!(f4.mul(2, 2), 3);
        assert_eq!(f4.add(2, 3), 1);
    }

    #[test]
    fn affine_groups() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let d = kss_group_data(q).unwrap();
            assert_eq!(d.order, q * (q - 1));
            assert_eq!(d.pairs, q * (q - 1) / 2);
            assert!(d.doubly_transitive && d.edge_transitive, "q = {q}");
            assert!(d.translations_normal && d.quotient_cyclic);
        }
        let d3 = kss_group_data(3).unwrap();
        assert_eq!((d3.order, d3.pairs), (6, 3));
        let d4 = kss_group_data(4).unwrap();
        assert_eq!((d4.order, d4.pairs), (12, 6));
        let d2 = kss_group_data(2).unwrap();
        assert_eq!(d2.pairs, 1);
    }
}
