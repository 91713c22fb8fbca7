use serde::{Deserialize, Serialize};

use super::{builtin, PropertyError, PropertyKind};
use crate::scomplex::{fixed_subcomplex, GroupAction, SimplicialComplex};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct YaoReport {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    /// f-vector of the subdivided skeleton.
    pub f_vector: Vec<usize>,
    /// `χ̃` counted on the complex.
    pub chi_tilde: i64,
    /// `(−1)^{r−1}·C(m−1, r)`.
    pub formula: i64,
    /// `χ̃` of the actual fixed complex of the threshold property under
    /// `Z_n`, when `m·n ≤ 6`.
    pub fixed_complex_chi_tilde: Option<i64>,
    pub agrees: bool,
}

fn binom(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

/// The fixed complex in the bipartite evasiveness argument: barycentric
/// subdivision of the `(r−1)`-skeleton of the `(m−1)`-simplex.
pub fn yao_fixed_complex(m: usize, n: usize, r: usize) -> Result<YaoReport, PropertyError> {
    if r >= m || n == 0 {
        return Err(PropertyError::BadParameter(format!("need 0 ≤ r < m and n ≥ 1, got m={m} n={n} r={r}")));
    }
    let skeleton = if r == 0 {
        SimplicialComplex::empty_face_only()
    } else {
        SimplicialComplex::skeleton_of_simplex(m as u32, r - 1)
    };
    let sd = skeleton.barycentric_subdivision().complex;
    let chi_tilde = sd.reduced_euler_characteristic();
    let sign = if r % 2 == 1 { 1 } else { -1 };
    let formula = sign * binom(m - 1, r);

    let fixed_complex_chi_tilde = if m * n <= 6 {
        let kind = PropertyKind::Bipartite { m, n };
        let p = builtin("complete_bipartite_threshold", kind, Some(r))?;
        let k = SimplicialComplex::from_family(&p.family)?;
        // cyclic shift of W
        let shift: Vec<u32> = (0..m)
            .flat_map(|v| (0..n).map(move |w| (v * n + (w + 1) % n) as u32))
            .collect();
        let g = GroupAction::generate(m * n, vec![shift])?;
        let fixed = fixed_subcomplex(&k, &g);
        // nothing fixed means the empty space, χ̃ = −1
        Some(if fixed.is_void() { -1 } else { fixed.reduced_euler_characteristic() })
    } else {
        None
    };
    let agrees = chi_tilde == formula && fixed_complex_chi_tilde.map_or(true, |c| c == chi_tilde);
    Ok(YaoReport {
        m,
        n,
        r,
        f_vector: sd.f_vector(),
        chi_tilde,
        formula,
        fixed_complex_chi_tilde,
        agrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let a = yao_fixed_complex(3, 2, 1).unwrap();
        assert_eq!(a.chi_tilde, 2);
        assert!(a.agrees);
        let b = yao_fixed_complex(4, 1, 2).unwrap();
        assert_eq!(b.chi_tilde, -3);
        assert!(b.agrees);
        assert!(yao_fixed_complex(3, 2, 3).is_err());
    }

    #[test]
    fn all_small_parameters() {
        for m in 1..=6 {
            for r in 0..m {
                let y = yao_fixed_complex(m, 1, r).unwrap();
                assert!(y.agrees, "{y:?}");
                if r == m - 1 && m >= 2 {
                    // sd of the boundary of the simplex is an (m−2)-sphere
                    let sign = if m % 2 == 0 { 1 } else { -1 };
                    assert_eq!(y.chi_tilde, sign);
                }
            }
        }
    }

    #[test]
    fn fixed_complex_cross_check() {
        for (m, n) in [(2, 2), (3, 2), (2, 3), (3, 1)] {
            for r in 0..m {
                let y = yao_fixed_complex(m, n, r).unwrap();
                assert!(y.fixed_complex_chi_tilde.is_some());
                assert!(y.agrees, "{y:?}");
            }
        }
    }
}
