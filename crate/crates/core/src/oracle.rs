//! Brute-force verification of robust feasibility in small decision spaces.
//!
//! For a radius vector `r`, the robust feasible set is nonempty iff some `x`
//! has worst-case margin
//!
//! ```text
//! M(x) = sup_{λ∈B} λᵀ(Āx + b̄) + (Σᵢ |λᵢ| rᵢ)·‖(x, 1)‖ ≤ 0.
//! ```
//!
//! `M` is convex, so it is minimized by a grid scan over a box, local
//! refinement and a central-cut ellipsoid pass driven by subgradients. The
//! supremum over `B` has a closed form for the simplex, SOC slice and SVM
//! product bases, and for the spectraplex when every radius is zero. Otherwise
//! the spectraplex supremum runs over sampled rank-one extremes, refined by
//! local ascent at the candidate point.

use log::debug;
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{eigh, sample_extreme};
use crate::model::{natural_base, BaseKind, NominalProblem, SvecMap, UncertaintyRadii};

/// Margins at or below this value count as feasible.
pub const FEASIBLE_TOL: f64 = 1e-9;
const MAX_N: usize = 3;
const MAX_ALPHA: f64 = 1024.0;
const MAX_CUTS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Half-width of the search box in decision space.
    pub x_box: f64,
    /// Grid points per axis; odd so that the origin is on the grid.
    pub x_grid: usize,
    pub refine_iters: usize,
    pub lambda_samples: usize,
    pub seed: u64,
    pub bisect_tol: f64,
    /// Attempt a covering certificate of infeasibility on simplex bases.
    pub certify: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            x_box: 10.0,
            x_grid: 201,
            refine_iters: 3,
            lambda_samples: 512,
            seed: 0,
            bisect_tol: 1e-3,
            certify: false,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.into()));
        if !(self.x_box.is_finite() && self.x_box > 0.0) {
            return bad("x_box must be positive");
        }
        if self.x_grid < 3 || self.x_grid.is_multiple_of(2) {
            return bad("x_grid must be odd and at least 3");
        }
        if self.refine_iters == 0 || self.lambda_samples == 0 {
            return bad("refine_iters and lambda_samples must be positive");
        }
        if !(self.bisect_tol.is_finite() && self.bisect_tol > 0.0) {
            return bad("bisect_tol must be positive");
        }
        Ok(())
    }

    fn spacing(&self) -> f64 {
        2.0 * self.x_box / (self.x_grid - 1) as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "x", rename_all = "snake_case")]
pub enum FeasibilityStatus {
    FeasibleWitness(Vec<f64>),
    LikelyInfeasible,
    CertifiedInfeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityVerdict {
    pub status: FeasibilityStatus,
    /// Smallest worst-case margin found over the box.
    pub margin: f64,
    /// The supremum over the base was evaluated exactly rather than sampled.
    pub exact: bool,
}

impl FeasibilityVerdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self.status, FeasibilityStatus::FeasibleWitness(_))
    }

    pub fn witness(&self) -> Option<&[f64]> {
        match &self.status {
            FeasibilityStatus::FeasibleWitness(x) => Some(x),
            _ => None,
        }
    }
}

/// Oracle estimate of the radius with the bisection bracket `[lo, hi]`:
/// `α·1` is feasible at `lo` and was not found feasible at `hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RrfEstimate {
    pub estimate: f64,
    pub lo: f64,
    pub hi: f64,
}

/// `max_{λ∈λ_set} λᵀ(Āx + b̄) + (Σᵢ |λᵢ| rᵢ)·‖(x, 1)‖`.
pub fn worst_case_margin(
    p: &NominalProblem,
    x: &[f64],
    r: &UncertaintyRadii,
    lambda_set: &[DVector<f64>],
) -> Result<f64> {
    if x.len() != p.n() {
        return Err(Error::DimensionMismatch(format!(
            "x has length {}, problem has {} variables",
            x.len(),
            p.n()
        )));
    }
    if r.len() != p.m() {
        return Err(Error::DimensionMismatch(format!(
            "{} radii for {} rows",
            r.len(),
            p.m()
        )));
    }
    if lambda_set.is_empty() {
        return Err(Error::InvalidConfig("lambda set is empty".into()));
    }
    let v = &p.a_bar * DVector::from_column_slice(x) + &p.b_bar;
    let norm = (1.0 + x.iter().map(|t| t * t).sum::<f64>()).sqrt();
    let mut best = f64::NEG_INFINITY;
    for l in lambda_set {
        if l.len() != p.m() {
            return Err(Error::DimensionMismatch("lambda length".into()));
        }
        let weight: f64 = l.iter().zip(r.as_slice()).map(|(a, b)| a.abs() * b).sum();
        best = best.max(l.dot(&v) + weight * norm);
    }
    Ok(best)
}

type Point = [f64; MAX_N];

/// Precomputed `(Āᵀλ, b̄ᵀλ, Σ|λᵢ|rᵢ)` for one `λ`.
#[derive(Debug, Clone, Copy)]
struct Row {
    c: Point,
    d: f64,
    w: f64,
}

impl Row {
    /// `λᵀ(Āx + b̄)` over the first `n` coordinates of `x`.
    fn linear(&self, x: &Point, n: usize) -> f64 {
        self.d + self.c[..n].iter().zip(x).map(|(c, x)| c * x).sum::<f64>()
    }
}

#[derive(Debug, Clone)]
enum Sup {
    Rows(Vec<Row>),
    SocSlice,
    SvmProduct {
        s: usize,
    },
    /// `scale·λ_max(smat(Āx + b̄))`, exact for zero radii.
    TopEigen {
        map: SvecMap,
        scale: f64,
    },
}

/// Worst-case margin as a function of `x` for fixed data and radii.
struct MarginModel<'a> {
    p: &'a NominalProblem,
    r: Vec<f64>,
    n: usize,
    sup: Sup,
    /// Side length of the spectraplex when the rows are sampled.
    spectral: Option<usize>,
    lambdas: Vec<DVector<f64>>,
}

impl<'a> MarginModel<'a> {
    fn new(p: &'a NominalProblem, r: &[f64], cfg: &OracleConfig) -> Self {
        let base = natural_base(p.cone);
        let m = p.m();
        let (sup, spectral, lambdas) = match base.kind {
            BaseKind::Simplex { .. } => {
                let lambdas: Vec<_> = (0..m)
                    .map(|i| {
                        let mut e = DVector::zeros(m);
                        e[i] = 1.0;
                        e
                    })
                    .collect();
                (Sup::Rows(Vec::new()), None, lambdas)
            }
            BaseKind::SocSlice { .. } => (Sup::SocSlice, None, Vec::new()),
            BaseKind::SvmProduct { s, .. } => (Sup::SvmProduct { s }, None, Vec::new()),
            BaseKind::Spectraplex { q } if r.iter().all(|v| *v == 0.0) => (
                Sup::TopEigen {
                    map: SvecMap::new(q),
                    scale: base.scale,
                },
                None,
                Vec::new(),
            ),
            BaseKind::Spectraplex { q } => {
                let mut lambdas = sample_extreme(&base, cfg.seed, cfg.lambda_samples);
                dedup(&mut lambdas);
                (Sup::Rows(Vec::new()), Some(q), lambdas)
            }
        };
        let mut model = MarginModel {
            p,
            r: r.to_vec(),
            n: p.n(),
            sup,
            spectral,
            lambdas: Vec::new(),
        };
        for l in lambdas {
            model.push(l);
        }
        model
    }

    fn exact(&self) -> bool {
        self.spectral.is_none()
    }

    fn push(&mut self, l: DVector<f64>) {
        let c_vec = self.p.a_bar.tr_mul(&l);
        let mut c = [0.0; MAX_N];
        c[..self.n].copy_from_slice(c_vec.as_slice());
        let row = Row {
            c,
            d: self.p.b_bar.dot(&l),
            w: l.iter().zip(&self.r).map(|(a, b)| a.abs() * b).sum(),
        };
        if let Sup::Rows(rows) = &mut self.sup {
            rows.push(row);
        }
        self.lambdas.push(l);
    }

    fn residual(&self, x: &Point) -> DVector<f64> {
        let a = &self.p.a_bar;
        DVector::from_fn(self.p.m(), |i, _| {
            let mut v = self.p.b_bar[i];
            for j in 0..self.n {
                v += a[(i, j)] * x[j];
            }
            v
        })
    }

    /// Margin at `x` with every radius multiplied by `scale`.
    fn value(&self, x: &Point, scale: f64) -> f64 {
        let norm = (1.0 + x[..self.n].iter().map(|t| t * t).sum::<f64>()).sqrt();
        match &self.sup {
            Sup::Rows(rows) => rows
                .iter()
                .map(|row| row.linear(x, self.n) + scale * row.w * norm)
                .fold(f64::NEG_INFINITY, f64::max),
            Sup::SocSlice => {
                let v = self.residual(x);
                let m = v.len();
                self.ball_part(&v, 0..m - 1, scale * norm) + v[m - 1] + scale * self.r[m - 1] * norm
            }
            Sup::SvmProduct { s } => {
                let s = *s;
                let v = self.residual(x);
                let head = self.ball_part(&v, 0..s, scale * norm) + v[s] + scale * self.r[s] * norm;
                (s + 1..v.len())
                    .map(|j| v[j] + scale * self.r[j] * norm)
                    .fold(head, f64::max)
            }
            Sup::TopEigen { .. } => self.top_eigen(x).0,
        }
    }

    /// Supremum and maximizing `λ` for [`Sup::TopEigen`].
    fn top_eigen(&self, x: &Point) -> (f64, DVector<f64>) {
        let Sup::TopEigen { map, scale } = &self.sup else {
            unreachable!("only called for the top-eigenvalue supremum")
        };
        let mat = map
            .smat(&self.residual(x))
            .expect("residual has svec length");
        let (w, v) = eigh(&mat).expect("smat output is symmetric");
        let q = w.len();
        let top = v.column(q - 1);
        let l = map
            .svec(&(top * top.transpose()))
            .expect("outer products are symmetric");
        (scale * w[q - 1], l * *scale)
    }

    /// A subgradient of `value` at `x`, from the maximizing `λ`.
    fn subgradient(&self, x: &Point, scale: f64) -> Point {
        let n = self.n;
        let norm = (1.0 + x[..n].iter().map(|t| t * t).sum::<f64>()).sqrt();
        let a = &self.p.a_bar;
        let mut g = [0.0; MAX_N];
        // Adds `coef·(±Āᵢ) + coef·rᵢ·scale·x/N` for row `i`.
        let mut add = |g: &mut Point, i: usize, sign: f64, coef: f64| {
            for j in 0..n {
                g[j] += coef * (sign * a[(i, j)] + scale * self.r[i] * x[j] / norm);
            }
        };
        match &self.sup {
            Sup::Rows(rows) => {
                let eval = |row: &Row| row.linear(x, n) + scale * row.w * norm;
                if let Some(row) = rows.iter().max_by(|p, q| eval(p).total_cmp(&eval(q))) {
                    for j in 0..n {
                        g[j] = row.c[j] + scale * row.w * x[j] / norm;
                    }
                }
            }
            Sup::SocSlice => {
                let v = self.residual(x);
                let m = v.len();
                self.ball_subgradient(&v, 0..m - 1, scale * norm, &mut g, &mut add);
                add(&mut g, m - 1, 1.0, 1.0);
            }
            Sup::SvmProduct { s } => {
                let s = *s;
                let v = self.residual(x);
                let head = self.ball_part(&v, 0..s, scale * norm) + v[s] + scale * self.r[s] * norm;
                let tail = (s + 1..v.len())
                    .map(|j| (v[j] + scale * self.r[j] * norm, j))
                    .max_by(|p, q| p.0.total_cmp(&q.0));
                match tail {
                    Some((val, j)) if val > head => add(&mut g, j, 1.0, 1.0),
                    _ => {
                        self.ball_subgradient(&v, 0..s, scale * norm, &mut g, &mut add);
                        add(&mut g, s, 1.0, 1.0);
                    }
                }
            }
            Sup::TopEigen { .. } => {
                let c = self.p.a_bar.tr_mul(&self.top_eigen(x).1);
                g[..n].copy_from_slice(c.as_slice());
            }
        }
        g
    }

    fn ball_subgradient<F>(
        &self,
        v: &DVector<f64>,
        idx: std::ops::Range<usize>,
        t: f64,
        g: &mut Point,
        add: &mut F,
    ) where
        F: FnMut(&mut Point, usize, f64, f64),
    {
        let total = self.ball_part(v, idx.clone(), t);
        if total <= 0.0 {
            return;
        }
        for i in idx {
            let sign = if v[i] >= 0.0 { 1.0 } else { -1.0 };
            add(g, i, sign, (v[i].abs() + self.r[i] * t) / total);
        }
    }

    /// `max_{‖u‖≤1} Σ uᵢvᵢ + |uᵢ|·rᵢ·t` over the given coordinates.
    fn ball_part(&self, v: &DVector<f64>, idx: std::ops::Range<usize>, t: f64) -> f64 {
        idx.map(|i| {
            let a = v[i].abs() + self.r[i] * t;
            a * a
        })
        .sum::<f64>()
        .sqrt()
    }

    /// Largest `α ≥ 0` with margin `≤ 0` at `x` under radii `α·r`, or a
    /// negative value when even `α = 0` fails.
    fn pointwise_alpha(&self, x: &Point) -> f64 {
        if let Sup::Rows(rows) = &self.sup {
            let norm = (1.0 + x[..self.n].iter().map(|t| t * t).sum::<f64>()).sqrt();
            let mut best = f64::INFINITY;
            for row in rows {
                let v = row.linear(x, self.n);
                if row.w > 0.0 {
                    best = best.min(-v / (row.w * norm));
                } else if v > 0.0 {
                    return -1.0;
                }
            }
            return best.min(MAX_ALPHA);
        }
        if self.value(x, 0.0) > 0.0 {
            return -1.0;
        }
        let (mut lo, mut hi) = (0.0, MAX_ALPHA);
        if self.value(x, hi) <= 0.0 {
            return hi;
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.value(x, mid) <= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Local ascent over rank-one extremes `svec(vvᵀ)` at `x`, started from
    /// the best current row. Returns the improved `λ` if it raises the margin.
    fn spectral_cut(&self, x: &Point) -> Option<DVector<f64>> {
        let q = self.spectral?;
        let map = SvecMap::new(q);
        let resid = self.residual(x);
        let norm = (1.0 + x[..self.n].iter().map(|t| t * t).sum::<f64>()).sqrt();
        let g = |l: &DVector<f64>| {
            l.dot(&resid) + norm * l.iter().zip(&self.r).map(|(a, b)| a.abs() * b).sum::<f64>()
        };
        let rank_one = |v: &DVector<f64>| {
            let v = v.normalize();
            map.svec(&(&v * v.transpose()))
                .expect("outer products are symmetric")
        };
        let start = self.lambdas.iter().max_by(|a, b| g(a).total_cmp(&g(b)))?;
        let current = g(start);
        let (_, vecs) = eigh(&map.smat(start).ok()?).ok()?;
        let mut v = vecs.column(q - 1).into_owned();
        let mut best = g(&rank_one(&v));
        let mut step = 0.5;
        while step > 1e-12 {
            let mut moved = false;
            for j in 0..q {
                for sign in [1.0, -1.0] {
                    let mut cand = v.clone();
                    cand[j] += sign * step;
                    if cand.norm() < 1e-12 {
                        continue;
                    }
                    let val = g(&rank_one(&cand));
                    if val > best {
                        best = val;
                        v = cand.normalize();
                        moved = true;
                    }
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        (best > current + 1e-12).then(|| rank_one(&v))
    }
}

fn dedup(points: &mut Vec<DVector<f64>>) {
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(points.len());
    for p in points.drain(..) {
        if !out.iter().any(|q| (q - &p).amax() <= 1e-15) {
            out.push(p);
        }
    }
    *points = out;
}

fn check_n(p: &NominalProblem) -> Result<()> {
    if p.n() > MAX_N {
        return Err(Error::DimensionTooLarge(p.n()));
    }
    Ok(())
}

fn grid_point(idx: usize, n: usize, cfg: &OracleConfig) -> Point {
    let h = cfg.spacing();
    let mut x = [0.0; MAX_N];
    let mut rest = idx;
    for xj in x.iter_mut().take(n) {
        *xj = -cfg.x_box + h * (rest % cfg.x_grid) as f64;
        rest /= cfg.x_grid;
    }
    x
}

fn on_boundary(idx: usize, n: usize, cfg: &OracleConfig) -> bool {
    let mut rest = idx;
    for _ in 0..n {
        let k = rest % cfg.x_grid;
        if k == 0 || k == cfg.x_grid - 1 {
            return true;
        }
        rest /= cfg.x_grid;
    }
    false
}

fn min_pair(a: (f64, usize), b: (f64, usize)) -> (f64, usize) {
    match a.0.total_cmp(&b.0) {
        std::cmp::Ordering::Less => a,
        std::cmp::Ordering::Greater => b,
        std::cmp::Ordering::Equal => {
            if a.1 <= b.1 {
                a
            } else {
                b
            }
        }
    }
}

/// Minimum of `f` over the grid, ties broken by lowest index.
fn grid_min<F>(n: usize, cfg: &OracleConfig, filter: Option<bool>, f: F) -> (f64, usize)
where
    F: Fn(&Point) -> f64 + Sync,
{
    let total = cfg.x_grid.pow(n as u32);
    let keep = |i: &usize| filter.is_none_or(|b| on_boundary(*i, n, cfg) == b);
    let eval = |i: usize| (f(&grid_point(i, n, cfg)), i);
    let init = (f64::INFINITY, usize::MAX);
    // A single worker only adds hand-off overhead, which is severe when
    // other threads compete for the same core.
    if rayon::current_num_threads() <= 1 {
        return (0..total).filter(keep).map(eval).fold(init, min_pair);
    }
    (0..total)
        .into_par_iter()
        .filter(keep)
        .map(eval)
        .reduce(|| init, min_pair)
}

fn clamp_box(x: &mut Point, n: usize, bound: f64) {
    for xj in x.iter_mut().take(n) {
        *xj = xj.clamp(-bound, bound);
    }
}

/// Zoom-grid and coordinate golden-section refinement of a minimizer of `f`.
fn refine<F>(f: &F, start: Point, n: usize, cfg: &OracleConfig) -> (Point, f64)
where
    F: Fn(&Point) -> f64,
{
    const K: usize = 9;
    let mut best = start;
    let mut best_val = f(&best);
    let h0 = cfg.spacing();
    for _ in 0..cfg.refine_iters {
        let mut h = h0;
        let mut rounds = 0;
        while h > 1e-12 * (1.0 + cfg.x_box) && rounds < 200 {
            rounds += 1;
            let center = best;
            let mut moved_to_edge = false;
            for idx in 0..K.pow(n as u32) {
                let mut x = center;
                let mut rest = idx;
                let mut edge = false;
                for xj in x.iter_mut().take(n) {
                    let k = rest % K;
                    rest /= K;
                    edge |= k == 0 || k == K - 1;
                    *xj += h * (k as f64 / (K - 1) as f64 * 2.0 - 1.0);
                }
                clamp_box(&mut x, n, cfg.x_box);
                let v = f(&x);
                if v < best_val {
                    best_val = v;
                    best = x;
                    moved_to_edge = edge;
                }
            }
            if !moved_to_edge {
                h /= 4.0;
            }
        }
        for j in 0..n {
            let (mut a, mut b) = (
                (best[j] - h0).max(-cfg.x_box),
                (best[j] + h0).min(cfg.x_box),
            );
            let phi = 0.5 * (5f64.sqrt() - 1.0);
            let at = |t: f64| {
                let mut x = best;
                x[j] = t;
                f(&x)
            };
            for _ in 0..80 {
                let c = b - phi * (b - a);
                let d = a + phi * (b - a);
                if at(c) < at(d) {
                    b = d;
                } else {
                    a = c;
                }
            }
            let t = 0.5 * (a + b);
            let v = at(t);
            if v < best_val {
                best_val = v;
                best[j] = t;
            }
        }
    }
    (best, best_val)
}

/// Central-cut ellipsoid method over the box for the convex margin, which
/// unlike the local searches cannot stall at kinks. One dimension reduces to
/// bisection on the subgradient sign.
fn ellipsoid(model: &MarginModel, scale: f64, cfg: &OracleConfig) -> (Point, f64) {
    const ITERS: usize = 1500;
    let n = model.n;
    let bound = cfg.x_box;
    let mut best = [0.0; MAX_N];
    let mut best_val = model.value(&best, scale);
    let consider = |x: &Point, best: &mut Point, best_val: &mut f64| {
        let v = model.value(x, scale);
        if v < *best_val {
            *best_val = v;
            *best = *x;
        }
    };
    if n == 1 {
        let (mut lo, mut hi) = (-bound, bound);
        for _ in 0..100 {
            let x = [0.5 * (lo + hi), 0.0, 0.0];
            consider(&x, &mut best, &mut best_val);
            let g = model.subgradient(&x, scale)[0];
            if g > 0.0 {
                hi = x[0];
            } else if g < 0.0 {
                lo = x[0];
            } else {
                break;
            }
        }
        for x in [[lo, 0.0, 0.0], [hi, 0.0, 0.0]] {
            consider(&x, &mut best, &mut best_val);
        }
        return (best, best_val);
    }

    let nf = n as f64;
    let mut c = DVector::<f64>::zeros(n);
    let mut shape = DMatrix::<f64>::identity(n, n) * (nf * bound * bound);
    for _ in 0..ITERS {
        let mut x = [0.0; MAX_N];
        x[..n].copy_from_slice(c.as_slice());
        let g = match (0..n).find(|&j| x[j].abs() > bound) {
            Some(j) => {
                let mut e = DVector::zeros(n);
                e[j] = x[j].signum();
                e
            }
            None => {
                consider(&x, &mut best, &mut best_val);
                DVector::from_column_slice(&model.subgradient(&x, scale)[..n])
            }
        };
        let pg = &shape * &g;
        let gpg = g.dot(&pg);
        let width = shape.diagonal().max().sqrt();
        if gpg.is_nan() || gpg <= 1e-26 || width <= 1e-12 * (1.0 + bound) {
            break;
        }
        let gt = pg / gpg.sqrt();
        c -= &gt / (nf + 1.0);
        shape = (shape - (&gt * gt.transpose()) * (2.0 / (nf + 1.0))) * (nf * nf / (nf * nf - 1.0));
    }
    (best, best_val)
}

/// Minimizes the margin model over the box; for sampled bases, alternates
/// with ascent cuts until the supremum at the minimizer stops improving.
fn minimize(model: &mut MarginModel, cfg: &OracleConfig, scale: f64) -> (Point, f64, f64) {
    let n = model.n;
    let (gmin, gidx) = grid_min(n, cfg, None, |x| model.value(x, scale));
    let (mut x, mut val) = refine(
        &|y: &Point| model.value(y, scale),
        grid_point(gidx, n, cfg),
        n,
        cfg,
    );
    let (ex, ev) = ellipsoid(model, scale, cfg);
    if ev < val {
        (x, val) = (ex, ev);
    }
    for _ in 0..MAX_CUTS {
        match model.spectral_cut(&x) {
            Some(l) => {
                model.push(l);
                (x, val) = ellipsoid(model, scale, cfg);
            }
            None => break,
        }
    }
    (x, val, gmin)
}

/// Covering argument on the simplex: the margin is Lipschitz, so a positive
/// grid minimum minus the covering slack excludes feasible points in the box,
/// and a boundary bound above the best value puts the box minimum in the
/// interior, where by convexity it is global.
fn covering_certificate(
    model: &MarginModel,
    cfg: &OracleConfig,
    scale: f64,
    gmin: f64,
    best: f64,
) -> bool {
    let n = model.n;
    let h = cfg.spacing();
    let lip = (0..model.p.m())
        .map(|i| model.p.row(i).norm() + scale * model.r[i])
        .fold(0.0, f64::max);
    if gmin - lip * h * (n as f64).sqrt() / 2.0 <= 0.0 {
        return false;
    }
    let (bmin, _) = grid_min(n, cfg, Some(true), |x| model.value(x, scale));
    bmin - lip * h * ((n - 1) as f64).sqrt() / 2.0 > best
}

fn feasibility(p: &NominalProblem, r: &[f64], cfg: &OracleConfig) -> FeasibilityVerdict {
    let mut model = MarginModel::new(p, r, cfg);
    let (x, margin, gmin) = minimize(&mut model, cfg, 1.0);
    let exact = model.exact();
    let status = if margin <= FEASIBLE_TOL {
        FeasibilityStatus::FeasibleWitness(x[..model.n].to_vec())
    } else if cfg.certify
        && matches!(natural_base(p.cone).kind, BaseKind::Simplex { .. })
        && covering_certificate(&model, cfg, 1.0, gmin, margin)
    {
        FeasibilityStatus::CertifiedInfeasible
    } else {
        FeasibilityStatus::LikelyInfeasible
    };
    FeasibilityVerdict {
        status,
        margin,
        exact,
    }
}

/// Searches the box for a robustly feasible `x` under radii `r`.
pub fn is_robust_feasible(
    p: &NominalProblem,
    r: &UncertaintyRadii,
    cfg: &OracleConfig,
) -> Result<FeasibilityVerdict> {
    cfg.validate()?;
    p.validate()?;
    check_n(p)?;
    if r.len() != p.m() {
        return Err(Error::DimensionMismatch(format!(
            "{} radii for {} rows",
            r.len(),
            p.m()
        )));
    }
    Ok(feasibility(p, r.as_slice(), cfg))
}

/// `min_x max_{λ∈B} λᵀ(Āx + b̄)` over the box. Negative values certify a
/// strictly feasible point.
pub fn slater_margin(p: &NominalProblem, cfg: &OracleConfig) -> Result<f64> {
    cfg.validate()?;
    p.validate()?;
    check_n(p)?;
    let mut model = MarginModel::new(p, &vec![0.0; p.m()], cfg);
    Ok(minimize(&mut model, cfg, 0.0).1)
}

/// Bisection on `α` for the uniform radii `α·1`.
pub fn rrf_estimate(p: &NominalProblem, cfg: &OracleConfig) -> Result<RrfEstimate> {
    cfg.validate()?;
    p.validate()?;
    check_n(p)?;
    let ones = vec![1.0; p.m()];
    let feasible_at = |alpha: f64| {
        let r: Vec<f64> = ones.iter().map(|v| v * alpha).collect();
        feasibility(p, &r, cfg).is_feasible()
    };

    if !feasible_at(0.0) {
        return Ok(RrfEstimate {
            estimate: 0.0,
            lo: 0.0,
            hi: 0.0,
        });
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while feasible_at(hi) {
        if hi >= MAX_ALPHA {
            return Err(Error::UnboundedEstimate(hi));
        }
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > cfg.bisect_tol {
        let mid = 0.5 * (lo + hi);
        if feasible_at(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let mut estimate = 0.5 * (lo + hi);
    if slater_margin(p, cfg)? < 0.0 {
        let mut model = MarginModel::new(p, &ones, cfg);
        let n = model.n;
        let coarse = OracleConfig {
            x_grid: cfg.x_grid.min(41),
            ..*cfg
        };
        // Cuts at the bisection witness sharpen the sampled supremum.
        let witness = feasibility(p, &ones.iter().map(|v| v * lo).collect::<Vec<_>>(), cfg);
        if let Some(w) = witness.witness() {
            let mut x = [0.0; MAX_N];
            x[..n].copy_from_slice(w);
            while let Some(l) = model.spectral_cut(&x) {
                model.push(l);
                if model.lambdas.len() > cfg.lambda_samples + MAX_CUTS {
                    break;
                }
            }
        }
        let neg = |x: &Point| -model.pointwise_alpha(x);
        let (_, gidx) = grid_min(n, &coarse, None, neg);
        let (_, val) = refine(&neg, grid_point(gidx, n, &coarse), n, &coarse);
        let pointwise = -val;
        debug!("pointwise radius {pointwise:.6} within bracket [{lo:.6}, {hi:.6}]");
        if pointwise.is_finite() {
            estimate = pointwise.clamp(lo, hi);
        }
    }
    Ok(RrfEstimate { estimate, lo, hi })
}

/// Feasibility verdicts for a batch of radius vectors.
pub fn admissibility_probe(
    p: &NominalProblem,
    r_list: &[UncertaintyRadii],
    cfg: &OracleConfig,
) -> Result<Vec<FeasibilityVerdict>> {
    r_list
        .iter()
        .map(|r| is_robust_feasible(p, r, cfg))
        .collect()
}
