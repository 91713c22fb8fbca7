//! Set systems over a finite ground set `[m]`, argument complexity and the
//! counting certificates that come with optimal decision trees.
//!
//! A subset of the ground set is an `m`-bit [`Mask`]. Families are stored as a
//! dense membership bitmap over all `2^m` masks, so membership is total.

mod complexity;
mod format;
mod poly;
mod tree;

pub use complexity::{
    argument_complexity, argument_complexity_with, is_evasive, optimal_tree, ComplexityOptions,
    ComplexityTable, DEFAULT_MAX_STATES,
};
pub use format::parse_family;
pub use poly::{
    divide_by_one_plus_t_pow, divisibility_certificate, euler_count, generating_polynomial,
    DivisibilityCertificate,
};
pub use tree::{DecisionTree, IntervalCell};

use thiserror::Error;

/// A subset of the ground set `[m]`, bit `e` set iff `e` is a member.
pub type Mask = u32;

/// Largest ground set that can be stored.
pub const MAX_GROUND_SET: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SetFamilyError {
    #[error("ground set size {0} exceeds the storage limit of {MAX_GROUND_SET}")]
    GroundSetTooLarge(usize),
    #[error("element {element} out of range for ground set of size {m}")]
    ElementOutOfRange { element: usize, m: usize },
    #[error("state budget exceeded: 3^{m} states > cap {cap}")]
    BudgetExceeded { m: usize, cap: u64 },
    #[error("malformed decision tree: {0}")]
    MalformedTree(String),
    #[error("(1+t)^{exponent} does not divide the generating polynomial")]
    DivisionFailure { exponent: usize },
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A family `F ⊆ 2^[m]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    m: usize,
    bits: Vec<u64>,
}

impl std::fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SetFamily")
            .field("m", &self.m)
            .field("len", &self.len())
            .finish()
    }
}

impl SetFamily {
    /// The empty family on `[m]`.
    pub fn empty(m: usize) -> Result<Self, SetFamilyError> {
        if m > MAX_GROUND_SET {
            return Err(SetFamilyError::GroundSetTooLarge(m));
        }
        let words = (1usize << m).div_ceil(64);
        Ok(SetFamily {
            m,
            bits: vec![0; words],
        })
    }

    /// The full power set `2^[m]`.
    pub fn power_set(m: usize) -> Result<Self, SetFamilyError> {
        Self::from_fn(m, |_| true)
    }

    pub fn from_fn(m: usize, mut pred: impl FnMut(Mask) -> bool) -> Result<Self, SetFamilyError> {
        let mut f = Self::empty(m)?;
        for mask in 0..(1u64 << m) {
            if pred(mask as Mask) {
                f.set(mask as Mask, true);
            }
        }
        Ok(f)
    }

    pub fn from_members(
        m: usize,
        members: impl IntoIterator<Item = Mask>,
    ) -> Result<Self, SetFamilyError> {
        let mut f = Self::empty(m)?;
        for a in members {
            f.insert(a)?;
        }
        Ok(f)
    }

    /// Builds a family from explicit element lists.
    pub fn from_sets<I, S>(m: usize, sets: I) -> Result<Self, SetFamilyError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[usize]>,
    {
        let mut f = Self::empty(m)?;
        for s in sets {
            let mut mask = 0;
            for &e in s.as_ref() {
                if e >= m {
                    return Err(SetFamilyError::ElementOutOfRange { element: e, m });
                }
                mask |= 1 << e;
            }
            f.set(mask, true);
        }
        Ok(f)
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    /// The mask of the whole ground set.
    #[inline]
    pub fn ground(&self) -> Mask {
        ((1u64 << self.m) - 1) as Mask
    }

    #[inline]
    pub fn contains(&self, a: Mask) -> bool {
        let a = a as usize;
        debug_assert!(a < (1usize << self.m));
        (self.bits[a >> 6] >> (a & 63)) & 1 == 1
    }

    #[inline]
    fn set(&mut self, a: Mask, value: bool) {
        let a = a as usize;
        if value {
            self.bits[a >> 6] |= 1 << (a & 63);
        } else {
            self.bits[a >> 6] &= !(1 << (a & 63));
        }
    }

    pub fn insert(&mut self, a: Mask) -> Result<(), SetFamilyError> {
        if (a as u64) >> self.m != 0 {
            return Err(SetFamilyError::ElementOutOfRange {
                element: 31 - a.leading_zeros() as usize,
                m: self.m,
            });
        }
        self.set(a, true);
        Ok(())
    }

    pub fn remove(&mut self, a: Mask) {
        if (a as u64) >> self.m == 0 {
            self.set(a, false);
        }
    }

    /// Number of members `|F|`.
    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Members in increasing mask order.
    pub fn members(&self) -> impl Iterator<Item = Mask> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some((i * 64 + b as usize) as Mask)
            })
        })
    }

    /// `F = ∅` or `F = 2^E`, i.e. `c(F) = 0`.
    pub fn is_trivial(&self) -> bool {
        let total = 1usize << self.m;
        let n = self.len();
        n == 0 || n == total
    }

    /// Closed under taking subsets.
    pub fn is_downward_closed(&self) -> bool {
        self.members().all(|a| {
            let mut rest = a;
            while rest != 0 {
                let e = rest & rest.wrapping_neg();
                rest &= rest - 1;
                if !self.contains(a & !e) {
                    return false;
                }
            }
            true
        })
    }

    /// Fixes the answer for element `e` and re-indexes the remaining
    /// elements onto `[m-1]`.
    ///
    /// A YES answer keeps `{A∖{e} : e ∈ A ∈ F}`; a NO answer keeps
    /// `{A ∈ F : e ∉ A}`.
    pub fn restrict(&self, e: usize, answer: bool) -> Result<SetFamily, SetFamilyError> {
        if e >= self.m {
            return Err(SetFamilyError::ElementOutOfRange {
                element: e,
                m: self.m,
            });
        }
        let low = (1u32 << e) - 1;
        let bit = if answer { 1u32 << e } else { 0 };
        SetFamily::from_fn(self.m - 1, |b| {
            let orig = (b & low) | ((b & !low) << 1) | bit;
            self.contains(orig)
        })
    }

    /// Applies a permutation of the ground set to a mask.
    pub fn permute_mask(a: Mask, perm: &[usize]) -> Mask {
        let mut out = 0;
        let mut rest = a;
        while rest != 0 {
            let e = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out |= 1 << perm[e];
        }
        out
    }

    /// Image of the family under a permutation of the ground set.
    pub fn permuted(&self, perm: &[usize]) -> SetFamily {
        let mut out = SetFamily::empty(self.m).expect("same size");
        for a in self.members() {
            out.set(Self::permute_mask(a, perm), true);
        }
        out
    }

    /// Number of members of each cardinality.
    pub fn size_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.m + 1];
        for a in self.members() {
            counts[a.count_ones() as usize] += 1;
        }
        counts
    }
}

/// Elements of a mask in increasing order.
pub fn mask_elements(a: Mask) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.count_ones() as usize);
    let mut rest = a;
    while rest != 0 {
        out.push(rest.trailing_zeros() as usize);
        rest &= rest - 1;
    }
    out
}
