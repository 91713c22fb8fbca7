use super::{argument_complexity, SetFamily, SetFamilyError};

/// `p_F(t) = Σ_{A∈F} t^{|A|}`, trailing zero coefficients removed.
pub fn generating_polynomial(f: &SetFamily) -> Vec<i64> {
    trim(f.size_counts().into_iter().map(|c| c as i64).collect())
}

/// `Σ_{A∈F} (−1)^{|A|}`, i.e. `p_F(−1)`.
pub fn euler_count(f: &SetFamily) -> i64 {
    f.members()
        .map(|a| if a.count_ones() % 2 == 0 { 1 } else { -1 })
        .sum()
}

fn trim(mut p: Vec<i64>) -> Vec<i64> {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

/// Exact quotient `p / (1+t)^k`, or `DivisionFailure` if a remainder is left.
pub fn divide_by_one_plus_t_pow(p: &[i64], k: usize) -> Result<Vec<i64>, SetFamilyError> {
    let mut cur = trim(p.to_vec());
    for _ in 0..k {
        if cur.is_empty() {
            return Ok(cur);
        }
        let n = cur.len() - 1;
        if n == 0 {
            return Err(SetFamilyError::DivisionFailure { exponent: k });
        }
        let mut q = vec![0i64; n];
        q[0] = cur[0];
        for i in 1..n {
            q[i] = cur[i] - q[i - 1];
        }
        if cur[n] != q[n - 1] {
            return Err(SetFamilyError::DivisionFailure { exponent: k });
        }
        cur = q;
    }
    Ok(cur)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisibilityCertificate {
    pub m: usize,
    pub complexity: usize,
    pub polynomial: Vec<i64>,
    /// `p_F / (1+t)^{m−c}`.
    pub quotient: Vec<i64>,
}

/// Computes `c(F)` and divides `p_F` by `(1+t)^{m−c}`.
pub fn divisibility_certificate(f: &SetFamily) -> Result<DivisibilityCertificate, SetFamilyError> {
    let c = argument_complexity(f)?;
    let p = generating_polynomial(f);
    let quotient = divide_by_one_plus_t_pow(&p, f.m() - c)?;
    Ok(DivisibilityCertificate {
        m: f.m(),
        complexity: c,
        polynomial: p,
        quotient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul_one_plus_t(p: &[i64]) -> Vec<i64> {
        let mut out = vec![0; p.len() + 1];
        for (i, &c) in p.iter().enumerate() {
            out[i] += c;
            out[i + 1] += c;
        }
        out
    }

    #[test]
    fn power_set_polynomial_is_binomial() {
        let f = SetFamily::power_set(2).unwrap();
        assert_eq!(generating_polynomial(&f), vec![1, 2, 1]);
        let cert = divisibility_certificate(&f).unwrap();
        assert_eq!(cert.quotient, vec![1]);
    }

    #[test]
    fn empty_set_only() {
        let f = SetFamily::from_members(3, [0]).unwrap();
        assert_eq!(generating_polynomial(&f), vec![1]);
        assert_eq!(euler_count(&f), 1);
        let cert = divisibility_certificate(&f).unwrap();
        assert_eq!(cert.complexity, 3);
        assert_eq!(cert.quotient, vec![1]);
    }

    #[test]
    fn odd_subsets() {
        let f = SetFamily::from_fn(2, |a| a.count_ones() % 2 == 1).unwrap();
        assert_eq!(euler_count(&f), -2);
    }

    #[test]
    fn division_round_trip() {
        let p = vec![3, -1, 4, 1, -5];
        let mut q = p.clone();
        for _ in 0..3 {
            q = mul_one_plus_t(&q);
        }
        assert_eq!(divide_by_one_plus_t_pow(&q, 3).unwrap(), p);
        assert!(divide_by_one_plus_t_pow(&q, 4).is_err());
        assert!(divide_by_one_plus_t_pow(&[1], 1).is_err());
        assert_eq!(divide_by_one_plus_t_pow(&[], 5).unwrap(), Vec::<i64>::new());
    }
}
