use super::{DecisionTree, Mask, SetFamily, SetFamilyError};

/// `3^15`: the default number of partial-answer states the exact search may
/// allocate.
pub const DEFAULT_MAX_STATES: u64 = 14_348_907;

#[derive(Debug, Clone, Copy)]
pub struct ComplexityOptions {
    /// Upper bound on `3^m`.
    pub max_states: u64,
}

impl Default for ComplexityOptions {
    fn default() -> Self {
        ComplexityOptions {
            max_states: DEFAULT_MAX_STATES,
        }
    }
}

/// Exact argument complexity for every partial-answer state of a family.
///
/// A state assigns each element one of unknown / NO / YES and is indexed in
/// base 3 with digit `0`, `1`, `2` respectively for element `e` at place
/// `3^e`. The table is filled from fully answered states upward, so every
/// state only reads states with a larger index.
pub struct ComplexityTable {
    m: usize,
    pow3: Vec<usize>,
    /// Number of members inside the cube of each state.
    count: Vec<u32>,
    /// Remaining worst-case number of questions.
    depth: Vec<u8>,
}

impl ComplexityTable {
    pub fn build(f: &SetFamily, opts: &ComplexityOptions) -> Result<Self, SetFamilyError> {
        let m = f.m();
        let states = 3u64.checked_pow(m as u32).unwrap_or(u64::MAX);
        if states > opts.max_states {
            return Err(SetFamilyError::BudgetExceeded {
                m,
                cap: opts.max_states,
            });
        }
        let states = states as usize;
        let pow3: Vec<usize> = (0..=m).map(|e| 3usize.pow(e as u32)).collect();
        let mut count = vec![0u32; states];
        let mut depth = vec![0u8; states];

        // Odometer running from the all-YES state down to the all-unknown
        // state, tracking the YES and unknown masks incrementally.
        let mut digits = vec![2u8; m];
        let mut yes: Mask = f.ground();
        let mut unknown: Mask = 0;
        let mut s = states - 1;
        loop {
            if unknown == 0 {
                count[s] = f.contains(yes) as u32;
                depth[s] = 0;
            } else {
                let e = unknown.trailing_zeros() as usize;
                let c = count[s + pow3[e]] + count[s + 2 * pow3[e]];
                count[s] = c;
                let free = unknown.count_ones();
                if c == 0 || c == 1u32 << free {
                    depth[s] = 0;
                } else {
                    let mut best = u8::MAX;
                    let mut rest = unknown;
                    while rest != 0 {
                        let e = rest.trailing_zeros() as usize;
                        rest &= rest - 1;
                        let worst = depth[s + pow3[e]].max(depth[s + 2 * pow3[e]]);
                        best = best.min(worst);
                    }
                    depth[s] = best + 1;
                }
            }
            if s == 0 {
                break;
            }
            s -= 1;
            // decrement the odometer
            let mut i = 0;
            while digits[i] == 0 {
                digits[i] = 2;
                unknown &= !(1 << i);
                yes |= 1 << i;
                i += 1;
            }
            digits[i] -= 1;
            match digits[i] {
                1 => yes &= !(1 << i),
                0 => unknown |= 1 << i,
                _ => unreachable!(),
            }
        }
        Ok(ComplexityTable {
            m,
            pow3,
            count,
            depth,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `c(F)`, the value at the all-unknown state.
    pub fn value(&self) -> usize {
        self.depth[0] as usize
    }

    /// Remaining complexity after the given answers.
    pub fn value_at(&self, yes: Mask, no: Mask) -> usize {
        self.depth[self.index(yes, no)] as usize
    }

    fn index(&self, yes: Mask, no: Mask) -> usize {
        debug_assert_eq!(yes & no, 0);
        let mut s = 0;
        for e in 0..self.m {
            if yes >> e & 1 == 1 {
                s += 2 * self.pow3[e];
            } else if no >> e & 1 == 1 {
                s += self.pow3[e];
            }
        }
        s
    }

    /// An optimal tree; ties go to the lowest element index.
    pub fn optimal_tree(&self) -> DecisionTree {
        self.subtree(0, 0)
    }

    fn subtree(&self, s: usize, unknown_done: Mask) -> DecisionTree {
        let d = self.depth[s];
        if d == 0 {
            return DecisionTree::Leaf(self.count[s] > 0);
        }
        for e in 0..self.m {
            if unknown_done >> e & 1 == 1 {
                continue;
            }
            let no = s + self.pow3[e];
            let yes = s + 2 * self.pow3[e];
            if self.depth[no].max(self.depth[yes]) + 1 == d {
                let done = unknown_done | 1 << e;
                return DecisionTree::Query {
                    element: e,
                    no: Box::new(self.subtree(no, done)),
                    yes: Box::new(self.subtree(yes, done)),
                };
            }
        }
        unreachable!("depth table is inconsistent")
    }
}

pub fn argument_complexity(f: &SetFamily) -> Result<usize, SetFamilyError> {
    argument_complexity_with(f, &ComplexityOptions::default())
}

pub fn argument_complexity_with(
    f: &SetFamily,
    opts: &ComplexityOptions,
) -> Result<usize, SetFamilyError> {
    if f.is_trivial() {
        return Ok(0);
    }
    Ok(ComplexityTable::build(f, opts)?.value())
}

/// `c(F) = m`.
pub fn is_evasive(f: &SetFamily) -> Result<bool, SetFamilyError> {
    Ok(argument_complexity(f)? == f.m())
}

pub fn optimal_tree(f: &SetFamily) -> Result<DecisionTree, SetFamilyError> {
    if f.is_trivial() {
        return Ok(DecisionTree::Leaf(!f.is_empty()));
    }
    Ok(ComplexityTable::build(f, &ComplexityOptions::default())?.optimal_tree())
}
