//! Families of d-intervals: exact packing and piercing numbers, the
//! fractional LP, escape hypergraphs of traps, multipoints and the
//! homogeneous lower-bound construction.

mod exact;
pub mod lp;
mod sgall;
mod trap;

pub use exact::{
    common_point, has_kwise_common_point, is_transversal, nu, nu_star_tau_star, tau, FractionalSolution,
    Matching, Transversal, EXACT_CAP,
};
pub use sgall::{
    lower_bound_family, sgall_expander, sgall_expander_with, sgall_sets, Graph, LowerBound, SgallError,
    SgallSets,
};
pub use trap::{
    equalize_trap, escape_hypergraph, greedy_matching, kaiser_transversal, lift_matching, multipoint_search,
    EqualizeOptions, EqualizeOutcome, EscapeHypergraph, KaiserResult, MultipointResult, Trap,
};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Rat = BigRational;

pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p`, `p/q` or a decimal such as `0.25`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches('-'), frac);
        let num: BigInt = digits.parse().ok()?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let v = Rat::new(num, den);
        return Some(if neg { -v } else { v });
    }
    Rat::from_str(s).ok()
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DIntervalError {
    #[error("family has {size} members, exact routines are capped at {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("invalid member {index}: {message}")]
    BadMember { index: usize, message: String },
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("operation needs a d-partite family")]
    NeedsPartite,
    #[error("linear program failed: {0}")]
    Lp(String),
    #[error("trap must have t ≥ 1")]
    BadTrapSize,
    #[error("equalization failed; best spread {best_spread}")]
    Equalize { best_spread: f64 },
    #[error(transparent)]
    Sgall(#[from] SgallError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// Component `i` lives on its own unit segment `I_i`.
    Partite,
    /// All components share one real line.
    Homogeneous,
}

/// A closed interval `[lo, hi]` on line `line` (always 0 in homogeneous mode).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Part {
    pub line: usize,
    pub lo: Rat,
    pub hi: Rat,
}

impl Part {
    pub fn new(line: usize, lo: Rat, hi: Rat) -> Self {
        Part { line, lo, hi }
    }

    pub fn point(line: usize, x: Rat) -> Self {
        Part {
            line,
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn meets(&self, o: &Part) -> bool {
        self.line == o.line && self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn contains(&self, line: usize, x: &Rat) -> bool {
        self.line == line && &self.lo <= x && x <= &self.hi
    }

    /// Distance to a point on the same line.
    pub fn dist(&self, x: &Rat) -> Rat {
        if x < &self.lo {
            &self.lo - x
        } else if x > &self.hi {
            x - &self.hi
        } else {
            Rat::zero()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DInterval {
    pub parts: Vec<Part>,
}

impl DInterval {
    pub fn new(mut parts: Vec<Part>) -> Self {
        parts.sort();
        DInterval { parts }
    }

    pub fn meets(&self, o: &DInterval) -> bool {
        self.parts.iter().any(|p| o.parts.iter().any(|q| p.meets(q)))
    }

    pub fn contains(&self, line: usize, x: &Rat) -> bool {
        self.parts.iter().any(|p| p.contains(line, x))
    }

    /// Component on `line` in a d-partite family.
    pub fn component(&self, line: usize) -> Option<&Part> {
        self.parts.iter().find(|p| p.line == line)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DIntervalFamily {
    pub d: usize,
    pub mode: Mode,
    pub members: Vec<DInterval>,
}

impl DIntervalFamily {
    pub fn new(d: usize, mode: Mode, members: Vec<DInterval>) -> Result<Self, DIntervalError> {
        let bad = |index: usize, m: &str| DIntervalError::BadMember {
            index,
            message: m.to_string(),
        };
        for (k, m) in members.iter().enumerate() {
            if m.parts.is_empty() {
                return Err(bad(k, "no components"));
            }
            if m.parts.len() > d {
                return Err(bad(k, "more than d components"));
            }
            for p in &m.parts {
                if p.lo > p.hi {
                    return Err(bad(k, "interval with lo > hi"));
                }
                match mode {
                    Mode::Partite => {
                        if p.line >= d {
                            return Err(bad(k, "line index out of range"));
                        }
                        if p.lo < Rat::zero() || p.hi > Rat::one() {
                            return Err(bad(k, "component leaves [0,1]"));
                        }
                    }
                    Mode::Homogeneous => {
                        if p.line != 0 {
                            return Err(bad(k, "homogeneous parts live on line 0"));
                        }
                    }
                }
            }
            if mode == Mode::Partite {
                let mut lines: Vec<usize> = m.parts.iter().map(|p| p.line).collect();
                lines.dedup();
                if lines.len() != m.parts.len() {
                    return Err(bad(k, "two components on one line"));
                }
            }
        }
        Ok(DIntervalFamily { d, mode, members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Number of lines carrying components.
    pub fn lines(&self) -> usize {
        match self.mode {
            Mode::Partite => self.d,
            Mode::Homogeneous => 1,
        }
    }

    /// `A = ⟨[0,½],[½,1]⟩`, `B = ⟨[½,1],[0,½]⟩`, `C = ⟨[1/5,3/10],[1/5,3/10]⟩`:
    /// pairwise intersecting 2-intervals with no common point.
    pub fn canonical_f2() -> Self {
        let h = rat(1, 2);
        let m = |a: (Rat, Rat), b: (Rat, Rat)| DInterval::new(vec![Part::new(0, a.0, a.1), Part::new(1, b.0, b.1)]);
        let members = vec![
            m((rat(0, 1), h.clone()), (h.clone(), rat(1, 1))),
            m((h.clone(), rat(1, 1)), (rat(0, 1), h.clone())),
            m((rat(1, 5), rat(3, 10)), (rat(1, 5), rat(3, 10))),
        ];
        DIntervalFamily::new(2, Mode::Partite, members).expect("valid")
    }

    /// `k` pairwise disjoint copies. Partite copies are squeezed into
    /// separated blocks of each segment; homogeneous copies are shifted.
    pub fn copies(&self, k: usize) -> Self {
        let mut members = Vec::new();
        match self.mode {
            Mode::Partite => {
                // copy c occupies [2c, 2c+1] / (2k−1)
                let kk = rat(2 * k as i64 - 1, 1).max(Rat::one());
                for c in 0..k {
                    let off = rat(2 * c as i64, 1);
                    for m in &self.members {
                        members.push(DInterval::new(
                            m.parts
                                .iter()
                                .map(|p| Part::new(p.line, (&p.lo + &off) / &kk, (&p.hi + &off) / &kk))
                                .collect(),
                        ));
                    }
                }
            }
            Mode::Homogeneous => {
                let lo = self.members.iter().flat_map(|m| m.parts.iter().map(|p| p.lo.clone())).min();
                let hi = self.members.iter().flat_map(|m| m.parts.iter().map(|p| p.hi.clone())).max();
                let span = match (lo, hi) {
                    (Some(a), Some(b)) => b - a + Rat::one(),
                    _ => Rat::one(),
                };
                for c in 0..k {
                    let off = &span * rat(c as i64, 1);
                    for m in &self.members {
                        members.push(DInterval::new(
                            m.parts
                                .iter()
                                .map(|p| Part::new(p.line, &p.lo + &off, &p.hi + &off))
                                .collect(),
                        ));
                    }
                }
            }
        }
        DIntervalFamily {
            d: self.d,
            mode: self.mode,
            members,
        }
    }

    /// Seeded random d-partite family with endpoints in `{0, 1/q, …, 1}`;
    /// each component is present with probability 3/4 (at least one is).
    pub fn random(d: usize, size: usize, q: i64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let members = (0..size)
            .map(|_| {
                let keep = loop {
                    let k: Vec<bool> = (0..d).map(|_| rng.gen_bool(0.75)).collect();
                    if k.iter().any(|&b| b) {
                        break k;
                    }
                };
                DInterval::new(
                    (0..d)
                        .filter(|&i| keep[i])
                        .map(|i| {
                            let a = rng.gen_range(0..=q);
                            let b = rng.gen_range(0..=q);
                            Part::new(i, rat(a.min(b), q), rat(a.max(b), q))
                        })
                        .collect(),
                )
            })
            .collect();
        DIntervalFamily::new(d, Mode::Partite, members).expect("valid by construction")
    }

    /// Text form: `dint d mode`, then one member per line as `i:a,b`
    /// entries (1-based line index; in homogeneous mode any index).
    pub fn to_text(&self) -> String {
        let mode = match self.mode {
            Mode::Partite => "partite",
            Mode::Homogeneous => "homogeneous",
        };
        let mut out = format!("dint {} {}\n", self.d, mode);
        for m in &self.members {
            let entries: Vec<String> = m
                .parts
                .iter()
                .enumerate()
                .map(|(k, p)| {
                    let i = match self.mode {
                        Mode::Partite => p.line + 1,
                        Mode::Homogeneous => k + 1,
                    };
                    format!("{}:{},{}", i, p.lo, p.hi)
                })
                .collect();
            out.push_str(&entries.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, DIntervalError> {
        let perr = |line: usize, m: &str| DIntervalError::Parse {
            line,
            message: m.to_string(),
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or_else(|| perr(1, "missing header"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 3 || h[0] != "dint" {
            return Err(perr(hl, "expected `dint <d> <mode>`"));
        }
        let d: usize = h[1].parse().map_err(|_| perr(hl, "bad d"))?;
        let mode = match h[2] {
            "partite" => Mode::Partite,
            "homogeneous" => Mode::Homogeneous,
            _ => return Err(perr(hl, "mode is `partite` or `homogeneous`")),
        };
        let mut members = Vec::new();
        for (ln, line) in lines {
            let mut parts = Vec::new();
            for e in line.split_whitespace() {
                let (i, ab) = e.split_once(':').ok_or_else(|| perr(ln, "entry needs `i:a,b`"))?;
                let (a, b) = ab.split_once(',').ok_or_else(|| perr(ln, "entry needs `i:a,b`"))?;
                let i: usize = i.parse().map_err(|_| perr(ln, "bad index"))?;
                if i == 0 {
                    return Err(perr(ln, "indices are 1-based"));
                }
                let a = parse_rat(a).ok_or_else(|| perr(ln, "bad rational"))?;
                let b = parse_rat(b).ok_or_else(|| perr(ln, "bad rational"))?;
                let line = if mode == Mode::Partite { i - 1 } else { 0 };
                parts.push(Part::new(line, a, b));
            }
            members.push(DInterval::new(parts));
        }
        DIntervalFamily::new(d, mode, members)
    }
}

impl fmt::Display for DIntervalFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rat("0.25"), Some(rat(1, 4)));
        assert_eq!(parse_rat("-1.5"), Some(rat(-3, 2)));
        assert_eq!(parse_rat("3/6"), Some(rat(1, 2)));
        assert_eq!(parse_rat("2"), Some(rat(2, 1)));
        assert_eq!(parse_rat("x"), None);
    }

    #[test]
    fn f2_shape() {
        let f = DIntervalFamily::canonical_f2();
        for a in &f.members {
            for b in &f.members {
                assert!(a.meets(b));
            }
        }
    }

    #[test]
    fn copies_are_disjoint() {
        let f = DIntervalFamily::canonical_f2().copies(3);
        assert_eq!(f.len(), 9);
        for (x, a) in f.members.iter().enumerate() {
            for (y, b) in f.members.iter().enumerate() {
                assert_eq!(a.meets(b), x / 3 == y / 3);
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let f = DIntervalFamily::random(3, 6, 7, 1);
        assert_eq!(DIntervalFamily::parse(&f.to_text()).unwrap(), f);
        let g = DIntervalFamily::parse("dint 2 homogeneous\n1:0,1 2:3,4\n1:1/2,2\n").unwrap();
        assert_eq!(g.members[0].parts.len(), 2);
        assert!(DIntervalFamily::parse("dint 2 partite\n3:0,1\n").is_err());
        assert!(DIntervalFamily::parse("dint 2 partite\n1:1,0\n").is_err());
    }
}
