//! Exact two-phase simplex with Bland's rule over the rationals.

use num_traits::{Signed, Zero};

use super::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

/// Maximize `c·x` subject to `rows` and `x ≥ 0`.
#[derive(Debug, Clone)]
pub struct Lp {
    pub c: Vec<Rat>,
    pub rows: Vec<(Vec<Rat>, Cmp, Rat)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rat, x: Vec<Rat> },
    Infeasible,
    Unbounded,
}

struct Tableau {
    t: Vec<Vec<Rat>>,
    basis: Vec<usize>,
}

impl Tableau {
    fn cols(&self) -> usize {
        self.t.first().map_or(0, |r| r.len() - 1)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.t[r][c].clone();
        for v in self.t[r].iter_mut() {
            *v /= &piv;
        }
        let prow = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost` over the allowed columns. `false` when unbounded.
    fn run(&mut self, cost: &[Rat], allowed: &[bool]) -> bool {
        let n = self.cols();
        loop {
            let mut enter = None;
            for j in 0..n {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut r = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.t[i][j].is_zero() {
                        r -= &cost[b] * &self.t[i][j];
                    }
                }
                if r.is_positive() {
                    enter = Some(j);
                    break;
                }
            }
            let Some(j) = enter else { return true };
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.t.len() {
                let a = &self.t[i][j];
                if a.is_positive() {
                    let ratio = &self.t[i][n] / a;
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                None => return false,
                Some((i, _)) => self.pivot(i, j),
            }
        }
    }
}

pub fn solve(lp: &Lp) -> LpOutcome {
    let n = lp.c.len();
    let m = lp.rows.len();
    // normalize to nonnegative right-hand sides
    let rows: Vec<(Vec<Rat>, Cmp, Rat)> = lp
        .rows
        .iter()
        .map(|(a, cmp, b)| {
            if b.is_negative() {
                let flip = match cmp {
                    Cmp::Le => Cmp::Ge,
                    Cmp::Ge => Cmp::Le,
                    Cmp::Eq => Cmp::Eq,
                };
                (a.iter().map(|v| -v).collect(), flip, -b)
            } else {
                (a.clone(), *cmp, b.clone())
            }
        })
        .collect();
    let slacks = rows.iter().filter(|r| r.1 != Cmp::Eq).count();
    let arts = rows.iter().filter(|r| r.1 != Cmp::Le).count();
    let total = n + slacks + arts;
    let mut t = vec![vec![Rat::zero(); total + 1]; m];
    let mut basis = vec![0; m];
    let (mut s, mut a) = (n, n + slacks);
    for (i, (coef, cmp, b)) in rows.iter().enumerate() {
        for (j, v) in coef.iter().enumerate() {
            t[i][j] = v.clone();
        }
        t[i][total] = b.clone();
        match cmp {
            Cmp::Le => {
                t[i][s] = Rat::from_integer(1.into());
                basis[i] = s;
                s += 1;
            }
            Cmp::Ge => {
                t[i][s] = Rat::from_integer((-1).into());
                s += 1;
                t[i][a] = Rat::from_integer(1.into());
                basis[i] = a;
                a += 1;
            }
            Cmp::Eq => {
                t[i][a] = Rat::from_integer(1.into());
                basis[i] = a;
                a += 1;
            }
        }
    }
    let mut tab = Tableau { t, basis };
    let is_art = |j: usize| j >= n + slacks && j < total;
    if arts > 0 {
        let cost: Vec<Rat> = (0..total)
            .map(|j| if is_art(j) { Rat::from_integer((-1).into()) } else { Rat::zero() })
            .collect();
        tab.run(&cost, &vec![true; total]);
        let infeas = tab
            .basis
            .iter()
            .enumerate()
            .any(|(i, &b)| is_art(b) && !tab.t[i][total].is_zero());
        if infeas {
            return LpOutcome::Infeasible;
        }
        // drive zero-level artificials out, dropping redundant rows
        let mut i = 0;
        while i < tab.t.len() {
            if is_art(tab.basis[i]) {
                match (0..n + slacks).find(|&j| !tab.t[i][j].is_zero()) {
                    Some(j) => {
                        tab.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        tab.t.remove(i);
                        tab.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }
    let cost: Vec<Rat> = (0..total)
        .map(|j| if j < n { lp.c[j].clone() } else { Rat::zero() })
        .collect();
    let allowed: Vec<bool> = (0..total).map(|j| !is_art(j)).collect();
    if !tab.run(&cost, &allowed) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rat::zero(); n];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] = tab.t[i][total].clone();
        }
    }
    let value = x.iter().zip(&lp.c).map(|(a, b)| a * b).sum();
    LpOutcome::Optimal { value, x }
}
