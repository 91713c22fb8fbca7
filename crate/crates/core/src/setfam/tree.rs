use std::fmt;
use std::str::FromStr;

use super::{Mask, SetFamilyError};

/// A decision tree over element queries "is `e ∈ A`?".
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecisionTree {
    Leaf(bool),
    Query {
        element: usize,
        no: Box<DecisionTree>,
        yes: Box<DecisionTree>,
    },
}

/// The interval `{A : yes_set ⊆ A ⊆ E ∖ no_set}` reached by one leaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntervalCell {
    pub yes_set: Mask,
    pub no_set: Mask,
    pub label: bool,
}

impl IntervalCell {
    /// `log2` of the cell size for ground set size `m`.
    pub fn free(&self, m: usize) -> usize {
        m - (self.yes_set.count_ones() + self.no_set.count_ones()) as usize
    }

    pub fn contains(&self, a: Mask) -> bool {
        a & self.yes_set == self.yes_set && a & self.no_set == 0
    }
}

impl DecisionTree {
    pub fn depth(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 0,
            DecisionTree::Query { no, yes, .. } => 1 + no.depth().max(yes.depth()),
        }
    }

    /// Walks the tree on `a`. Fails if some path asks the same element twice.
    pub fn evaluate(&self, a: Mask) -> Result<bool, SetFamilyError> {
        let mut node = self;
        let mut asked: u64 = 0;
        loop {
            match node {
                DecisionTree::Leaf(v) => return Ok(*v),
                DecisionTree::Query { element, no, yes } => {
                    let e = *element;
                    if e >= 64 || asked >> e & 1 == 1 {
                        return Err(SetFamilyError::MalformedTree(format!(
                            "element {e} queried twice on a path"
                        )));
                    }
                    asked |= 1 << e;
                    node = if e < 32 && a >> e & 1 == 1 { yes } else { no };
                }
            }
        }
    }

    /// Checks that no path repeats a query and every element is below `m`.
    pub fn validate(&self, m: usize) -> Result<(), SetFamilyError> {
        fn go(t: &DecisionTree, m: usize, asked: u64) -> Result<(), SetFamilyError> {
            match t {
                DecisionTree::Leaf(_) => Ok(()),
                DecisionTree::Query { element, no, yes } => {
                    let e = *element;
                    if e >= m {
                        return Err(SetFamilyError::ElementOutOfRange { element: e, m });
                    }
                    if asked >> e & 1 == 1 {
                        return Err(SetFamilyError::MalformedTree(format!(
                            "element {e} queried twice on a path"
                        )));
                    }
                    go(no, m, asked | 1 << e)?;
                    go(yes, m, asked | 1 << e)
                }
            }
        }
        go(self, m, 0)
    }

    /// One cell per leaf, in NO-before-YES depth-first order.
    pub fn interval_partition(&self) -> Result<Vec<IntervalCell>, SetFamilyError> {
        let mut out = Vec::new();
        let mut stack = vec![(self, 0 as Mask, 0 as Mask)];
        while let Some((t, y, n)) = stack.pop() {
            match t {
                DecisionTree::Leaf(label) => out.push(IntervalCell {
                    yes_set: y,
                    no_set: n,
                    label: *label,
                }),
                DecisionTree::Query { element, no, yes } => {
                    let e = *element;
                    if e >= 32 || (y | n) >> e & 1 == 1 {
                        return Err(SetFamilyError::MalformedTree(format!(
                            "element {e} queried twice on a path"
                        )));
                    }
                    stack.push((yes, y | 1 << e, n));
                    stack.push((no, y, n | 1 << e));
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for DecisionTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecisionTree::Leaf(true) => write!(f, "YES"),
            DecisionTree::Leaf(false) => write!(f, "NO"),
            DecisionTree::Query { element, no, yes } => write!(f, "({element} {no} {yes})"),
        }
    }
}

impl FromStr for DecisionTree {
    type Err = SetFamilyError;

    /// Parses the `(e NO-subtree YES-subtree)` form written by `Display`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let spaced = s.replace('(', " ( ").replace(')', " ) ");
        let tokens: Vec<&str> = spaced.split_whitespace().collect();
        let mut pos = 0;
        let t = parse_node(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(SetFamilyError::MalformedTree(format!(
                "trailing input at token {pos}"
            )));
        }
        Ok(t)
    }
}

fn parse_node(tokens: &[&str], pos: &mut usize) -> Result<DecisionTree, SetFamilyError> {
    let bad = |msg: &str| SetFamilyError::MalformedTree(msg.to_string());
    let tok = *tokens.get(*pos).ok_or_else(|| bad("unexpected end of input"))?;
    *pos += 1;
    match tok {
        "YES" => Ok(DecisionTree::Leaf(true)),
        "NO" => Ok(DecisionTree::Leaf(false)),
        "(" => {
            let e = tokens
                .get(*pos)
                .and_then(|t| t.parse::<usize>().ok())
                .ok_or_else(|| bad("expected element index"))?;
            *pos += 1;
            let no = parse_node(tokens, pos)?;
            let yes = parse_node(tokens, pos)?;
            if tokens.get(*pos) != Some(&")") {
                return Err(bad("expected ')'"));
            }
            *pos += 1;
            Ok(DecisionTree::Query {
                element: e,
                no: Box::new(no),
                yes: Box::new(yes),
            })
        }
        other => Err(bad(&format!("unexpected token {other:?}"))),
    }
}
