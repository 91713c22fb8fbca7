//! Approximate fixed points of self-maps of `[0,1]^d` read off HEX
//! colorings, plus a projected iteration for hitting targets on products
//! of simplices.

mod displacement;
mod target;

pub use displacement::{displacement_consistency_check, DisplacementReport};
pub use target::{project_simplex, solve_to_target, ProductOfSimplices, TargetOptions, TargetResult};

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hexboard::{winner_ddim, DBoard, DColoring, HexError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BrouwerError {
    #[error("epsilon must be positive, got {0}")]
    BadEpsilon(f64),
    #[error("map returned {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("map returned a non-finite value at {0:?}")]
    NonFinite(Vec<f64>),
    #[error("budget exhausted at grid size {n}; best residual {best_residual}")]
    Budget { n: usize, best_residual: f64 },
    #[error("map moves face {coord} of block {block} off itself")]
    FaceViolation { block: usize, coord: usize },
    #[error("target is not an interior point of the product")]
    BadTarget,
    #[error("unknown map `{0}`")]
    UnknownMap(String),
    #[error(transparent)]
    Hex(#[from] HexError),
}

type Eval = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;

/// A black-box self-map of `[0,1]^d`. Outputs are clamped into the cube.
#[derive(Clone)]
pub struct CubeMap {
    dim: usize,
    eval: Arc<Eval>,
}

impl fmt::Debug for CubeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CubeMap(d = {})", self.dim)
    }
}

impl CubeMap {
    pub fn new(dim: usize, f: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        CubeMap {
            dim,
            eval: Arc::new(f),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>, BrouwerError> {
        let y = (self.eval)(x);
        if y.len() != self.dim {
            return Err(BrouwerError::DimensionMismatch {
                expected: self.dim,
                got: y.len(),
            });
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(BrouwerError::NonFinite(x.to_vec()));
        }
        Ok(y.into_iter().map(|v| v.clamp(0.0, 1.0)).collect())
    }

    /// `|f(x) − x|_∞`
    pub fn residual(&self, x: &[f64]) -> Result<f64, BrouwerError> {
        Ok(self
            .eval(x)?
            .iter()
            .zip(x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub fn identity(dim: usize) -> Self {
        CubeMap::new(dim, |x| x.to_vec())
    }

    /// `x ↦ 1 − x` in every coordinate.
    pub fn reflection(dim: usize) -> Self {
        CubeMap::new(dim, |x| x.iter().map(|v| 1.0 - v).collect())
    }

    /// Quarter turn of the square about its center.
    pub fn rotation() -> Self {
        CubeMap::new(2, |x| vec![1.0 - x[1], x[0]])
    }

    /// `x ↦ A x + b`.
    pub fn affine(a: Vec<Vec<f64>>, b: Vec<f64>) -> Self {
        let dim = b.len();
        CubeMap::new(dim, move |x| {
            a.iter()
                .zip(&b)
                .map(|(row, bi)| row.iter().zip(x).map(|(r, v)| r * v).sum::<f64>() + bi)
                .collect()
        })
    }

    pub fn builtin(name: &str, dim: usize) -> Result<Self, BrouwerError> {
        match name {
            "identity" => Ok(Self::identity(dim)),
            "reflection" => Ok(Self::reflection(dim)),
            "rotation" if dim == 2 => Ok(Self::rotation()),
            _ => Err(BrouwerError::UnknownMap(name.to_string())),
        }
    }
}

fn grid_point(v: &[i64], n: usize) -> Vec<f64> {
    v.iter().map(|&x| x as f64 / n as f64).collect()
}

/// Colors interior vertices of `H(n,d)` by the first coordinate moved by at
/// least `eps`; vertices moved by less in every coordinate stay uncolored
/// and are returned as witnesses.
pub fn coloring_from_map(f: &CubeMap, n: usize, eps: f64) -> Result<(DColoring, Vec<Vec<i64>>), BrouwerError> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(BrouwerError::BadEpsilon(eps));
    }
    let board = DBoard::new(n, f.dim())?;
    let mut c = DColoring::uncolored(board);
    let mut witnesses = Vec::new();
    for idx in 0..board.interior_count() {
        let v = board.interior_vertex(idx);
        let x = grid_point(&v, n);
        let y = f.eval(&x)?;
        match (0..f.dim()).find(|&i| (y[i] - x[i]).abs() >= eps) {
            Some(i) => c.colors[idx] = i as u8 + 1,
            None => witnesses.push(v),
        }
    }
    Ok((c, witnesses))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FoundBy {
    /// A grid vertex had residual below `eps`.
    Witness,
    /// Bisection along a sign-change edge of a winning chain.
    Bisection,
}

/// Adjacent interior chain vertices whose `i`-th residuals are `≥ ε` and
/// `≤ −ε`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignChange {
    pub color: usize,
    pub from: Vec<i64>,
    pub to: Vec<i64>,
    pub from_residual: f64,
    pub to_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub n: usize,
    pub witnesses: usize,
    pub sign_change: Option<SignChange>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub point: Vec<f64>,
    pub residual: f64,
    pub n: usize,
    pub found_by: FoundBy,
    pub levels: Vec<Level>,
}

#[derive(Debug, Clone)]
pub struct FixOptions {
    /// Upper bound on map evaluations over all grid levels.
    pub max_evals: u64,
    pub bisect_steps: usize,
}

impl Default for FixOptions {
    fn default() -> Self {
        FixOptions {
            max_evals: 4_000_000,
            bisect_steps: 60,
        }
    }
}

/// The interior part of the winning chain and its sign change.
pub fn chain_sign_change(f: &CubeMap, c: &DColoring) -> Result<SignChange, BrouwerError> {
    let w = winner_ddim(c)?;
    let n = c.board.n;
    let i = w.color - 1;
    let interior: Vec<&Vec<i64>> = w.path.iter().filter(|v| c.board.is_interior(v)).collect();
    let res = |v: &[i64]| -> Result<f64, BrouwerError> {
        let x = grid_point(v, n);
        Ok(f.eval(&x)?[i] - x[i])
    };
    for pair in interior.windows(2) {
        let a = res(pair[0])?;
        let b = res(pair[1])?;
        if a > 0.0 && b < 0.0 {
            return Ok(SignChange {
                color: w.color,
                from: pair[0].clone(),
                to: pair[1].clone(),
                from_residual: a,
                to_residual: b,
            });
        }
    }
    unreachable!("a winning chain of a map into the cube always changes sign")
}

/// Finds `x` with `|f(x) − x|_∞ < eps` on grids `n = 2, 4, 8, …`.
pub fn approx_fixed_point(f: &CubeMap, eps: f64) -> Result<FixedPoint, BrouwerError> {
    approx_fixed_point_with(f, eps, &FixOptions::default())
}

pub fn approx_fixed_point_with(f: &CubeMap, eps: f64, opts: &FixOptions) -> Result<FixedPoint, BrouwerError> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(BrouwerError::BadEpsilon(eps));
    }
    let d = f.dim();
    let mut levels = Vec::new();
    let mut spent = 0u64;
    let mut best = f64::INFINITY;
    let mut n = 2usize;
    loop {
        let cost = (n as u64 + 1).saturating_pow(d as u32);
        if spent.saturating_add(cost) > opts.max_evals {
            return Err(BrouwerError::Budget { n, best_residual: best });
        }
        spent += cost;
        let (c, witnesses) = coloring_from_map(f, n, eps)?;
        if !witnesses.is_empty() {
            let mut pick = None;
            for v in &witnesses {
                let x = grid_point(v, n);
                let r = f.residual(&x)?;
                if pick.as_ref().map_or(true, |(_, pr)| r < *pr) {
                    pick = Some((x, r));
                }
            }
            let (point, residual) = pick.expect("nonempty");
            levels.push(Level {
                n,
                witnesses: witnesses.len(),
                sign_change: None,
            });
            return Ok(FixedPoint {
                point,
                residual,
                n,
                found_by: FoundBy::Witness,
                levels,
            });
        }
        let sc = chain_sign_change(f, &c)?;
        levels.push(Level {
            n,
            witnesses: 0,
            sign_change: Some(sc.clone()),
        });
        let i = sc.color - 1;
        let (mut lo, mut hi) = (grid_point(&sc.from, n), grid_point(&sc.to, n));
        for _ in 0..opts.bisect_steps {
            let mid: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| (a + b) / 2.0).collect();
            let y = f.eval(&mid)?;
            spent += 1;
            let r = y.iter().zip(&mid).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            best = best.min(r);
            if r < eps {
                return Ok(FixedPoint {
                    point: mid,
                    residual: r,
                    n,
                    found_by: FoundBy::Bisection,
                    levels,
                });
            }
            if y[i] - mid[i] > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        n *= 2;
    }
}
