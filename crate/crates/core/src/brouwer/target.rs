use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::BrouwerError;

/// `Δ^{k_1−1} × … × Δ^{k_r−1}`, each block given in barycentric coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductOfSimplices {
    pub blocks: Vec<usize>,
}

impl ProductOfSimplices {
    pub fn new(blocks: Vec<usize>) -> Self {
        ProductOfSimplices { blocks }
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().sum()
    }

    fn ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut at = 0;
        self.blocks
            .iter()
            .map(|&k| {
                let r = at..at + k;
                at += k;
                r
            })
            .collect()
    }

    pub fn barycenter(&self) -> Vec<f64> {
        self.blocks
            .iter()
            .flat_map(|&k| std::iter::repeat(1.0 / k as f64).take(k))
            .collect()
    }

    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        self.ranges()
            .into_iter()
            .flat_map(|r| project_simplex(&x[r]))
            .collect()
    }

    pub fn is_interior(&self, y: &[f64], tol: f64) -> bool {
        y.len() == self.dim()
            && self.ranges().into_iter().all(|r| {
                y[r.clone()].iter().all(|&v| v > 0.0) && (y[r].iter().sum::<f64>() - 1.0).abs() <= tol
            })
    }

    fn random_point(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        self.blocks
            .iter()
            .flat_map(|&k| {
                let raw: Vec<f64> = (0..k).map(|_| -rng.gen_range(1e-9f64..1.0).ln()).collect();
                let s: f64 = raw.iter().sum();
                raw.into_iter().map(move |v| v / s)
            })
            .collect()
    }
}

/// Euclidean projection onto the standard simplex (sort-based).
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    let mut css = 0.0;
    let mut theta = 0.0;
    for (k, &uk) in u.iter().enumerate() {
        css += uk;
        let t = (css - 1.0) / (k + 1) as f64;
        if uk - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

#[derive(Debug, Clone)]
pub struct TargetOptions {
    pub tol: f64,
    pub lambda: f64,
    pub max_iters: usize,
    pub starts: usize,
    pub seed: u64,
    /// Random face points used to validate that `g` keeps faces.
    pub face_samples: usize,
}

impl Default for TargetOptions {
    fn default() -> Self {
        TargetOptions {
            tol: 1e-9,
            lambda: 0.5,
            max_iters: 20_000,
            starts: 8,
            seed: 0,
            face_samples: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetResult {
    pub point: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Finds `x` with `|g(x) − y|_∞ ≤ tol` by `x ← Π(x + λ(y − g(x)))`,
/// halving `λ` whenever a step fails to lower the residual.
pub fn solve_to_target(
    p: &ProductOfSimplices,
    g: &dyn Fn(&[f64]) -> Vec<f64>,
    y: &[f64],
    opts: &TargetOptions,
) -> Result<TargetResult, BrouwerError> {
    if !p.is_interior(y, 1e-9) {
        return Err(BrouwerError::BadTarget);
    }
    let dim = p.dim();
    let eval = |x: &[f64]| -> Result<Vec<f64>, BrouwerError> {
        let v = g(x);
        if v.len() != dim {
            return Err(BrouwerError::DimensionMismatch { expected: dim, got: v.len() });
        }
        if v.iter().any(|t| !t.is_finite()) {
            return Err(BrouwerError::NonFinite(x.to_vec()));
        }
        Ok(v)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for (bi, r) in p.ranges().into_iter().enumerate() {
        for j in r.clone() {
            for _ in 0..opts.face_samples {
                let mut x = p.random_point(&mut rng);
                if r.len() > 1 {
                    x[j] = 0.0;
                    let s: f64 = x[r.clone()].iter().sum();
                    for t in r.clone() {
                        x[t] /= s;
                    }
                }
                if eval(&x)?[j].abs() > 1e-9 && r.len() > 1 {
                    return Err(BrouwerError::FaceViolation { block: bi, coord: j - r.start });
                }
            }
        }
    }
    let mut best = f64::INFINITY;
    let mut total = 0;
    for s in 0..opts.starts.max(1) {
        let mut x = if s == 0 { p.barycenter() } else { p.random_point(&mut rng) };
        let mut gx = eval(&x)?;
        let mut res = dist(&gx, y);
        let mut lambda = opts.lambda;
        for _ in 0..opts.max_iters {
            total += 1;
            best = best.min(res);
            if res <= opts.tol {
                return Ok(TargetResult {
                    point: x,
                    residual: res,
                    iterations: total,
                });
            }
            let step: Vec<f64> = x.iter().zip(y).zip(&gx).map(|((a, b), c)| a + lambda * (b - c)).collect();
            let cand = p.project(&step);
            let gc = eval(&cand)?;
            let rc = dist(&gc, y);
            if rc < res {
                x = cand;
                gx = gc;
                res = rc;
            } else {
                lambda *= 0.5;
                if lambda < 1e-14 {
                    break;
                }
            }
        }
        if res <= opts.tol {
            return Ok(TargetResult {
                point: x,
                residual: res,
                iterations: total,
            });
        }
    }
    Err(BrouwerError::Budget {
        n: total,
        best_residual: best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_hits_target() {
        let p = ProductOfSimplices::new(vec![3, 2]);
        let y = vec![0.2, 0.3, 0.5, 0.6, 0.4];
        let r = solve_to_target(&p, &|x: &[f64]| x.to_vec(), &y, &TargetOptions::default()).unwrap();
        assert!(dist(&r.point, &y) <= 1e-9);
    }

    #[test]
    fn squares_on_a_segment() {
        let p = ProductOfSimplices::new(vec![2]);
        let g = |x: &[f64]| {
            let s = x[0] * x[0] + x[1] * x[1];
            vec![x[0] * x[0] / s, x[1] * x[1] / s]
        };
        let target = 0.3;
        let r = solve_to_target(&p, &g, &[target, 1.0 - target], &TargetOptions { tol: 1e-10, ..Default::default() }).unwrap();
        // bisection on a ↦ a²/(a²+(1−a)²), increasing on [0,1]
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let m = (lo + hi) / 2.0;
            if m * m / (m * m + (1.0 - m) * (1.0 - m)) < target {
                lo = m;
            } else {
                hi = m;
            }
        }
        assert!(r.residual <= 1e-8);
        assert!((r.point[0] - lo).abs() < 1e-8);
    }

    #[test]
    fn face_violation_rejected() {
        let p = ProductOfSimplices::new(vec![2]);
        let g = |_: &[f64]| vec![0.5, 0.5];
        assert!(matches!(
            solve_to_target(&p, &g, &[0.5, 0.5], &TargetOptions::default()),
            Err(BrouwerError::FaceViolation { .. })
        ));
    }

    #[test]
    fn projection_lands_on_simplex() {
        for v in [vec![0.3, 0.3, 0.3], vec![2.0, -1.0, 0.5], vec![-3.0, -3.0]] {
            let p = project_simplex(&v);
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(p.iter().all(|&x| x >= 0.0));
        }
        assert_eq!(project_simplex(&[2.0, 0.0]), vec![1.0, 0.0]);
    }
}
