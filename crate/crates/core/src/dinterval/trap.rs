use std::cell::RefCell;
use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::exact::{is_transversal, nu, tau};
use super::{DIntervalError, DIntervalFamily, Mode, Part, Rat};
use crate::brouwer::{solve_to_target, ProductOfSimplices, TargetOptions};

/// `t` points (a multiset) on each of the `d` lines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trap {
    pub t: usize,
    /// Sorted points per line.
    pub points: Vec<Vec<Rat>>,
}

impl Trap {
    pub fn new(mut points: Vec<Vec<Rat>>) -> Result<Self, DIntervalError> {
        let t = points.first().map_or(0, |p| p.len());
        if t == 0 || points.iter().any(|p| p.len() != t) {
            return Err(DIntervalError::BadTrapSize);
        }
        for p in points.iter_mut() {
            p.sort();
        }
        Ok(Trap { t, points })
    }

    /// `z_k = x_1 + … + x_k` per block of `(σ^t)^d`.
    pub fn from_simplex(x: &[Vec<Rat>]) -> Result<Self, DIntervalError> {
        let pts = x
            .iter()
            .map(|b| {
                let mut acc = Rat::zero();
                b[..b.len().saturating_sub(1)]
                    .iter()
                    .map(|v| {
                        acc += v;
                        acc.clone()
                    })
                    .collect()
            })
            .collect();
        Self::new(pts)
    }

    pub fn to_simplex(&self) -> Vec<Vec<Rat>> {
        self.points
            .iter()
            .map(|z| {
                let mut prev = Rat::zero();
                let mut out: Vec<Rat> = z
                    .iter()
                    .map(|v| {
                        let d = v - &prev;
                        prev = v.clone();
                        d
                    })
                    .collect();
                out.push(Rat::one() - prev);
                out
            })
            .collect()
    }

    pub fn d(&self) -> usize {
        self.points.len()
    }

    /// Distinct `(line, x)` points.
    pub fn distinct_points(&self) -> Vec<(usize, Rat)> {
        let mut out: Vec<(usize, Rat)> = Vec::new();
        for (i, z) in self.points.iter().enumerate() {
            for x in z {
                if !out.iter().any(|(l, y)| *l == i && y == x) {
                    out.push((i, x.clone()));
                }
            }
        }
        out
    }

    /// 0-based hole of line `i` containing the part, if no trap point
    /// touches it.
    fn hole_of(&self, p: &Part) -> Option<usize> {
        let z = &self.points[p.line];
        let j = z.iter().filter(|x| **x < p.lo).count();
        if j == self.t || z[j] > p.hi {
            Some(j)
        } else {
            None
        }
    }

    fn dist(&self, p: &Part) -> Rat {
        self.points[p.line]
            .iter()
            .map(|x| p.dist(x))
            .min()
            .expect("t ≥ 1")
    }
}

/// Escape hypergraph of a trap: edges are hole types `(j_1, …, j_d)`
/// (0-based) with positive weight `q_H`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EscapeHypergraph {
    pub d: usize,
    pub t: usize,
    /// Weight and a member escaping through the hole with that clearance.
    pub edges: BTreeMap<Vec<usize>, (Rat, usize)>,
    /// `w_(i,j)`, indexed `[i][j]`.
    pub vertex_weights: Vec<Vec<Rat>>,
}

impl EscapeHypergraph {
    pub fn from_edges(d: usize, t: usize, edges: Vec<(Vec<usize>, Rat)>) -> Self {
        let mut w = vec![vec![Rat::zero(); t + 1]; d];
        let mut map = BTreeMap::new();
        for (k, (e, q)) in edges.into_iter().enumerate() {
            for (i, &j) in e.iter().enumerate() {
                w[i][j] += &q;
            }
            map.insert(e, (q, k));
        }
        EscapeHypergraph {
            d,
            t,
            edges: map,
            vertex_weights: w,
        }
    }

    pub fn total_edge_weight(&self) -> Rat {
        self.edges.values().map(|(q, _)| q).sum()
    }

    pub fn total_vertex_weight(&self) -> Rat {
        self.vertex_weights.iter().flatten().sum()
    }

    /// The common vertex weight, when all are equal.
    pub fn common_weight(&self) -> Option<Rat> {
        let first = self.vertex_weights.first()?.first()?.clone();
        self.vertex_weights
            .iter()
            .flatten()
            .all(|w| *w == first)
            .then_some(first)
    }

    /// Lower bound `⌈(t+1)/d⌉` on greedy matchings, valid when all vertex
    /// weights equal some `W > 0`.
    pub fn greedy_bound(&self) -> Option<usize> {
        match self.common_weight() {
            Some(w) if w > Rat::zero() => Some((self.t + 1).div_ceil(self.d)),
            _ => None,
        }
    }
}

pub fn escape_hypergraph(f: &DIntervalFamily, trap: &Trap) -> Result<EscapeHypergraph, DIntervalError> {
    if f.mode != Mode::Partite {
        return Err(DIntervalError::NeedsPartite);
    }
    if trap.d() != f.d {
        return Err(DIntervalError::BadTrapSize);
    }
    let d = f.d;
    let t = trap.t;
    let mut edges: BTreeMap<Vec<usize>, (Rat, usize)> = BTreeMap::new();
    for (k, m) in f.members.iter().enumerate() {
        let mut choices: Vec<Vec<usize>> = Vec::with_capacity(d);
        let mut escapes = true;
        let mut dist = Rat::zero();
        for i in 0..d {
            match m.component(i) {
                Some(p) => match trap.hole_of(p) {
                    Some(j) => {
                        choices.push(vec![j]);
                        dist = dist.max(trap.dist(p));
                    }
                    None => {
                        escapes = false;
                        break;
                    }
                },
                None => choices.push((0..=t).collect()),
            }
        }
        if !escapes {
            continue;
        }
        let mut types: Vec<Vec<usize>> = vec![vec![]];
        for c in &choices {
            types = types
                .into_iter()
                .flat_map(|p| {
                    c.iter().map(move |&j| {
                        let mut q = p.clone();
                        q.push(j);
                        q
                    })
                })
                .collect();
        }
        for ty in types {
            let e = edges.entry(ty).or_insert((Rat::zero(), k));
            if dist > e.0 {
                *e = (dist.clone(), k);
            }
        }
    }
    let mut w = vec![vec![Rat::zero(); t + 1]; d];
    for (ty, (q, _)) in &edges {
        for (i, &j) in ty.iter().enumerate() {
            w[i][j] += q;
        }
    }
    Ok(EscapeHypergraph {
        d,
        t,
        edges,
        vertex_weights: w,
    })
}

/// Greedy matching by descending weight.
pub fn greedy_matching(h: &EscapeHypergraph) -> Vec<Vec<usize>> {
    let mut es: Vec<(&Vec<usize>, &Rat)> = h.edges.iter().map(|(e, (q, _))| (e, q)).collect();
    es.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (e, _) in es {
        if out.iter().all(|o| o.iter().zip(e).all(|(a, b)| a != b)) {
            out.push(e.clone());
        }
    }
    out
}

/// One escaping member per matched edge; these are pairwise disjoint.
pub fn lift_matching(f: &DIntervalFamily, h: &EscapeHypergraph, matching: &[Vec<usize>]) -> Option<Vec<usize>> {
    let members: Vec<usize> = matching.iter().map(|e| h.edges.get(e).map(|x| x.1)).collect::<Option<_>>()?;
    let ok = members
        .iter()
        .enumerate()
        .all(|(a, &x)| members[a + 1..].iter().all(|&y| !f.members[x].meets(&f.members[y])));
    ok.then_some(members)
}

#[derive(Debug, Clone)]
pub struct EqualizeOptions {
    /// Accept when `max w − min w ≤ tol · max(W, 1)`.
    pub tol: f64,
    pub max_iters: usize,
    pub starts: usize,
    pub seed: u64,
}

impl Default for EqualizeOptions {
    fn default() -> Self {
        EqualizeOptions {
            tol: 1e-6,
            max_iters: 4000,
            starts: 4,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualizeOutcome {
    pub trap: Trap,
    /// Exact vertex weights of `trap`.
    pub weights: Vec<Vec<Rat>>,
    pub w_max: Rat,
    pub w_min: Rat,
    /// Spread bound met (checked exactly).
    pub equalized: bool,
    /// No member escapes (checked exactly).
    pub transversal: bool,
}

struct FloatFamily {
    d: usize,
    t: usize,
    members: Vec<Vec<(usize, f64, f64)>>,
}

impl FloatFamily {
    /// Vertex weights of the trap encoded by `x ∈ (σ^t)^d`, flattened.
    fn weights(&self, x: &[f64]) -> Vec<f64> {
        let (d, t) = (self.d, self.t);
        let z: Vec<Vec<f64>> = (0..d)
            .map(|i| {
                let b = &x[i * (t + 1)..(i + 1) * (t + 1)];
                let mut acc = 0.0;
                b[..t]
                    .iter()
                    .map(|v| {
                        acc += v;
                        acc
                    })
                    .collect()
            })
            .collect();
        let mut edges: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        for m in &self.members {
            let mut choices: Vec<Vec<usize>> = vec![(0..=t).collect(); d];
            let mut dist: f64 = 0.0;
            let mut escapes = true;
            for &(i, lo, hi) in m {
                let zi = &z[i];
                let j = zi.iter().filter(|&&v| v < lo).count();
                let open = x[i * (t + 1) + j] > 0.0;
                if open && (j == t || zi[j] > hi) {
                    choices[i] = vec![j];
                    let dd = zi.iter().map(|&v| if v < lo { lo - v } else { v - hi }).fold(f64::INFINITY, f64::min);
                    dist = dist.max(dd);
                } else {
                    escapes = false;
                    break;
                }
            }
            if !escapes {
                continue;
            }
            let mut types: Vec<Vec<usize>> = vec![vec![]];
            for c in &choices {
                types = types
                    .into_iter()
                    .flat_map(|p| {
                        c.iter().map(move |&j| {
                            let mut q = p.clone();
                            q.push(j);
                            q
                        })
                    })
                    .collect();
            }
            for ty in types {
                let e = edges.entry(ty).or_insert(0.0);
                *e = e.max(dist);
            }
        }
        let mut w = vec![0.0; d * (t + 1)];
        for (ty, q) in edges {
            for (i, j) in ty.into_iter().enumerate() {
                w[i * (t + 1) + j] += q;
            }
        }
        w
    }
}

fn to_rat(v: f64) -> Rat {
    Rat::from_float(v.clamp(0.0, 1.0)).expect("finite")
}

/// Searches for a trap with equal vertex weights via the normalized weight
/// map `f = g / S` on `(σ^t)^d` and a damped projected iteration aimed at
/// the barycenter. The returned trap is always re-checked exactly.
pub fn equalize_trap(f: &DIntervalFamily, t: usize, opts: &EqualizeOptions) -> Result<EqualizeOutcome, DIntervalError> {
    if f.mode != Mode::Partite {
        return Err(DIntervalError::NeedsPartite);
    }
    if t == 0 {
        return Err(DIntervalError::BadTrapSize);
    }
    let d = f.d;
    let ff = FloatFamily {
        d,
        t,
        members: f
            .members
            .iter()
            .map(|m| {
                m.parts
                    .iter()
                    .map(|p| (p.line, p.lo.to_f64().unwrap_or(0.0), p.hi.to_f64().unwrap_or(0.0)))
                    .collect()
            })
            .collect(),
    };
    let zero_at: RefCell<Option<Vec<f64>>> = RefCell::new(None);
    let map = |x: &[f64]| -> Vec<f64> {
        let g = ff.weights(x);
        let s: f64 = g[..t + 1].iter().sum();
        if s <= 0.0 {
            zero_at.borrow_mut().get_or_insert_with(|| x.to_vec());
            return x.to_vec();
        }
        g.iter().map(|v| v / s).collect()
    };
    let p = ProductOfSimplices::new(vec![t + 1; d]);
    let y = p.barycenter();
    let topts = TargetOptions {
        tol: opts.tol / (2.0 * (t + 1) as f64),
        lambda: 0.5,
        max_iters: opts.max_iters,
        starts: opts.starts,
        seed: opts.seed,
        face_samples: 4,
    };
    let x = match solve_to_target(&p, &map, &y, &topts) {
        Ok(r) => zero_at.borrow().clone().unwrap_or(r.point),
        Err(_) => zero_at.borrow().clone().unwrap_or(y.clone()),
    };
    let blocks: Vec<Vec<Rat>> = (0..d)
        .map(|i| x[i * (t + 1)..(i + 1) * (t + 1)].iter().map(|&v| to_rat(v)).collect())
        .collect();
    let trap = Trap::from_simplex(&blocks)?;
    let trap = Trap::new(
        trap.points
            .into_iter()
            .map(|z| z.into_iter().map(|v| v.min(Rat::one())).collect())
            .collect(),
    )?;
    let h = escape_hypergraph(f, &trap)?;
    let all: Vec<&Rat> = h.vertex_weights.iter().flatten().collect();
    let w_max = all.iter().map(|v| (*v).clone()).max().unwrap_or_else(Rat::zero);
    let w_min = all.iter().map(|v| (*v).clone()).min().unwrap_or_else(Rat::zero);
    let tol = Rat::from_float(opts.tol).unwrap_or_else(Rat::zero);
    let scale = w_max.clone().max(Rat::one());
    let equalized = &w_max - &w_min <= tol * scale;
    let transversal = is_transversal(f, &trap.distinct_points());
    Ok(EqualizeOutcome {
        trap,
        weights: h.vertex_weights,
        w_max,
        w_min,
        equalized,
        transversal,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KaiserResult {
    pub nu: usize,
    pub t: usize,
    /// Verified transversal after dropping redundant points.
    pub points: Vec<(usize, Rat)>,
    pub size: usize,
    /// Distinct points of the trap before pruning.
    pub trap_size: usize,
    /// The trap search failed and the exact minimum transversal was used.
    pub fallback: bool,
}

fn prune(f: &DIntervalFamily, mut pts: Vec<(usize, Rat)>) -> Vec<(usize, Rat)> {
    let mut k = 0;
    while k < pts.len() {
        let p = pts.remove(k);
        if !is_transversal(f, &pts) {
            pts.insert(k, p);
            k += 1;
        }
    }
    pts
}

/// Trap of `t = d·ν` points per line; by the equal-weight argument its
/// weights vanish, so it is a transversal of size at most `d²ν`.
pub fn kaiser_transversal(f: &DIntervalFamily, opts: &EqualizeOptions) -> Result<KaiserResult, DIntervalError> {
    if f.mode != Mode::Partite {
        return Err(DIntervalError::NeedsPartite);
    }
    let k = nu(f)?.size;
    if k == 0 {
        return Ok(KaiserResult {
            nu: 0,
            t: 0,
            points: vec![],
            size: 0,
            trap_size: 0,
            fallback: false,
        });
    }
    let t = f.d * k;
    for attempt in 0..3u64 {
        let o = EqualizeOptions {
            seed: opts.seed.wrapping_add(attempt),
            max_iters: opts.max_iters << attempt,
            starts: opts.starts + 2 * attempt as usize,
            ..opts.clone()
        };
        let out = equalize_trap(f, t, &o)?;
        if out.transversal {
            let raw = out.trap.distinct_points();
            let trap_size = raw.len();
            let points = prune(f, raw);
            debug_assert!(is_transversal(f, &points));
            return Ok(KaiserResult {
                nu: k,
                t,
                size: points.len(),
                points,
                trap_size,
                fallback: false,
            });
        }
    }
    let w = tau(f)?;
    Ok(KaiserResult {
        nu: k,
        t,
        size: w.size,
        trap_size: w.size,
        points: w.points,
        fallback: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MultipointSource {
    Trap,
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultipointResult {
    /// `⌈log₂(d+2)⌉`
    pub k: usize,
    /// Every `k` or fewer members share a point.
    pub hypothesis: bool,
    /// One point per line piercing every member, verified exactly.
    pub multipoint: Option<Vec<Rat>>,
    pub source: Option<MultipointSource>,
}

const EXHAUSTIVE_LIMIT: u64 = 1_000_000;

fn exhaustive_multipoint(f: &DIntervalFamily) -> Option<Vec<Rat>> {
    let d = f.d;
    let cands: Vec<Vec<Rat>> = (0..d)
        .map(|i| {
            let mut c: Vec<Rat> = f
                .members
                .iter()
                .filter_map(|m| m.component(i).map(|p| p.hi.clone()))
                .collect();
            c.sort();
            c.dedup();
            if c.is_empty() {
                c.push(Rat::zero());
            }
            c
        })
        .collect();
    let size = cands.iter().fold(1u64, |a, c| a.saturating_mul(c.len() as u64));
    if size > EXHAUSTIVE_LIMIT {
        return None;
    }
    let mut idx = vec![0usize; d];
    loop {
        let pts: Vec<(usize, Rat)> = (0..d).map(|i| (i, cands[i][idx[i]].clone())).collect();
        if is_transversal(f, &pts) {
            return Some(pts.into_iter().map(|p| p.1).collect());
        }
        let mut i = 0;
        loop {
            if i == d {
                return None;
            }
            idx[i] += 1;
            if idx[i] < cands[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Trap with one point per line; falls back to an exhaustive search over
/// right endpoints when the equalization does not produce a transversal.
pub fn multipoint_search(f: &DIntervalFamily, opts: &EqualizeOptions) -> Result<MultipointResult, DIntervalError> {
    if f.mode != Mode::Partite {
        return Err(DIntervalError::NeedsPartite);
    }
    let k = ((f.d + 2) as f64).log2().ceil() as usize;
    let hypothesis = super::exact::has_kwise_common_point(f, k);
    let out = equalize_trap(f, 1, opts)?;
    let (multipoint, source) = if out.transversal {
        (
            Some(out.trap.points.iter().map(|z| z[0].clone()).collect()),
            Some(MultipointSource::Trap),
        )
    } else {
        match exhaustive_multipoint(f) {
            Some(m) => (Some(m), Some(MultipointSource::Exhaustive)),
            None => (None, None),
        }
    };
    if let Some(m) = &multipoint {
        let pts: Vec<(usize, Rat)> = m.iter().cloned().enumerate().collect();
        assert!(is_transversal(f, &pts));
    }
    Ok(MultipointResult {
        k,
        hypothesis,
        multipoint,
        source,
    })
}
