//! Oracles for the compact bases of `K*`: linear minimization, projection,
//! membership, ℓ1 extremes, the bound constants and an extreme-point sampler.
//!
//! A scaled base `μB` is handled by rescaling inputs and outputs of the unit
//! base oracles.

mod eigen;
mod simplex;

pub use eigen::eigh;
pub use simplex::project_simplex;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BaseKind, CompactBaseSpec, SvecMap};

/// Below this norm the ball part of a cost vector is treated as zero.
pub const LMO_ZERO_TOL: f64 = 1e-14;
pub const DYKSTRA_TOL: f64 = 1e-10;
pub const DYKSTRA_MAX_SWEEPS: usize = 10_000;

/// The constants `C1 ≤ C2` with `C1·dist ≤ ρ ≤ C2·dist`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaseConstants {
    pub c1: f64,
    pub c2: f64,
    /// `c1 = 1/max{‖λ‖₁ : λ ∈ B}` exactly, rather than a weaker valid constant.
    pub c1_exact: bool,
}

/// `min` and `max` of `‖λ‖₁` over the base. For the spectraplex the minimum
/// is a lower bound and the maximum is not computed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct L1Extremes {
    pub min: f64,
    pub max: Option<f64>,
}

fn check_len(base: &CompactBaseSpec, len: usize) -> Result<()> {
    if base.dim() != len {
        return Err(Error::DimensionMismatch(format!(
            "{} base has dimension {}, vector has length {len}",
            base.kind.name(),
            base.dim()
        )));
    }
    Ok(())
}

/// A minimizer of `cᵀλ` over the base.
pub fn lmo(base: &CompactBaseSpec, c: &DVector<f64>) -> Result<DVector<f64>> {
    check_len(base, c.len())?;
    Ok(unit_lmo(&base.kind, c)? * base.scale)
}

fn unit_lmo(kind: &BaseKind, c: &DVector<f64>) -> Result<DVector<f64>> {
    let m = kind.dim();
    let mut out = DVector::zeros(m);
    match *kind {
        BaseKind::Simplex { .. } => {
            out[argmin_first(c.as_slice())] = 1.0;
        }
        BaseKind::SocSlice { .. } => {
            ball_lmo(&c.as_slice()[..m - 1], &mut out.as_mut_slice()[..m - 1]);
            out[m - 1] = 1.0;
        }
        BaseKind::Spectraplex { q } => {
            let map = SvecMap::new(q);
            let (_, vecs) = eigh(&map.smat(c)?)?;
            let v = vecs.column(0);
            out = map.svec(&(v * v.transpose()))?;
        }
        BaseKind::SvmProduct { s, .. } => {
            let head = &c.as_slice()[..s];
            let norm = norm_of(head);
            let mut reduced = c.as_slice()[s..].to_vec();
            reduced[0] -= norm;
            let j = argmin_first(&reduced);
            if j == 0 {
                ball_lmo(head, &mut out.as_mut_slice()[..s]);
            }
            out[s + j] = 1.0;
        }
    }
    Ok(out)
}

fn argmin_first(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x < v[best] {
            best = i;
        }
    }
    best
}

fn norm_of(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn ball_lmo(c: &[f64], out: &mut [f64]) {
    let norm = norm_of(c);
    if norm > LMO_ZERO_TOL {
        for (o, x) in out.iter_mut().zip(c) {
            *o = -x / norm;
        }
    } else {
        out.fill(0.0);
    }
}

/// Euclidean projection of `y` onto the base.
pub fn project(base: &CompactBaseSpec, y: &DVector<f64>) -> Result<DVector<f64>> {
    check_len(base, y.len())?;
    let mu = base.scale;
    Ok(unit_project(&base.kind, &(y / mu))? * mu)
}

fn unit_project(kind: &BaseKind, y: &DVector<f64>) -> Result<DVector<f64>> {
    let m = kind.dim();
    match *kind {
        BaseKind::Simplex { .. } => Ok(DVector::from_vec(project_simplex(y.as_slice(), 1.0))),
        BaseKind::SocSlice { .. } => {
            let mut out = y.clone();
            clip_to_ball(&mut out.as_mut_slice()[..m - 1]);
            out[m - 1] = 1.0;
            Ok(out)
        }
        BaseKind::Spectraplex { q } => {
            let map = SvecMap::new(q);
            let (w, v) = eigh(&map.smat(y)?)?;
            let w = DVector::from_vec(project_simplex(w.as_slice(), 1.0));
            let mat = &v * DMatrix::from_diagonal(&w) * v.transpose();
            let sym = (&mat + mat.transpose()) * 0.5;
            map.svec(&sym)
        }
        BaseKind::SvmProduct { s, .. } => dykstra_svm(s, y),
    }
}

fn clip_to_ball(v: &mut [f64]) {
    let norm = norm_of(v);
    if norm > 1.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

/// Projection of `(u, t)` onto `{‖u‖ ≤ t}`.
fn project_soc(v: &mut [f64]) {
    let (u, t) = v.split_at_mut(v.len() - 1);
    let t0 = t[0];
    let norm = norm_of(u);
    if norm <= t0 {
        return;
    }
    if norm <= -t0 {
        v.fill(0.0);
        return;
    }
    let a = 0.5 * (norm + t0);
    u.iter_mut().for_each(|x| *x *= a / norm);
    t[0] = a;
}

/// Dykstra alternation between the SOC factor on coordinates `0..=s` and the
/// simplex factor on coordinates `s..`. Both factor iterates must settle, since
/// one can stall while the correction terms are still moving.
fn dykstra_svm(s: usize, y: &DVector<f64>) -> Result<DVector<f64>> {
    let mut x = y.clone();
    let mut p = DVector::zeros(y.len());
    let mut q = DVector::zeros(y.len());
    let mut prev_a: Option<DVector<f64>> = None;
    for _ in 0..DYKSTRA_MAX_SWEEPS {
        let mut a = &x + &p;
        project_soc(&mut a.as_mut_slice()[..=s]);
        p = &x + &p - &a;

        let mut b = &a + &q;
        let tail = project_simplex(&b.as_slice()[s..], 1.0);
        b.as_mut_slice()[s..].copy_from_slice(&tail);
        q = &a + &q - &b;

        let moved = (&b - &x).norm();
        let moved_a = prev_a.map_or(f64::INFINITY, |pa| (&a - pa).norm());
        x = b;
        prev_a = Some(a);
        if moved.max(moved_a) < DYKSTRA_TOL {
            return Ok(x);
        }
    }
    Err(Error::DykstraNoConvergence(DYKSTRA_MAX_SWEEPS))
}

/// True iff `λ` lies within distance `tol` of the base.
pub fn membership(base: &CompactBaseSpec, lambda: &DVector<f64>, tol: f64) -> Result<bool> {
    check_len(base, lambda.len())?;
    let mu = base.scale;
    unit_membership(&base.kind, &(lambda / mu), tol / mu)
}

fn unit_membership(kind: &BaseKind, l: &DVector<f64>, tol: f64) -> Result<bool> {
    let m = kind.dim();
    let ok = match *kind {
        BaseKind::Simplex { .. } | BaseKind::Spectraplex { .. } => {
            (unit_project(kind, l)? - l).norm() <= tol
        }
        BaseKind::SocSlice { .. } => {
            let excess = (norm_of(&l.as_slice()[..m - 1]) - 1.0).max(0.0);
            excess.hypot(l[m - 1] - 1.0) <= tol
        }
        BaseKind::SvmProduct { s, .. } => {
            let tail = &l.as_slice()[s..];
            let sum: f64 = tail.iter().sum();
            norm_of(&l.as_slice()[..s]) <= l[s] + tol
                && tail.iter().all(|v| *v >= -tol)
                && (sum - 1.0).abs() <= tol
        }
    };
    Ok(ok)
}

pub fn l1_extremes(base: &CompactBaseSpec) -> L1Extremes {
    let mu = base.scale;
    let unit = match base.kind {
        BaseKind::Simplex { .. } => L1Extremes {
            min: 1.0,
            max: Some(1.0),
        },
        BaseKind::SocSlice { m } => L1Extremes {
            min: 1.0,
            max: Some(((m - 1) as f64).sqrt() + 1.0),
        },
        BaseKind::Spectraplex { q } => L1Extremes {
            min: 1.0 / (q as f64).sqrt(),
            max: None,
        },
        BaseKind::SvmProduct { s, .. } => L1Extremes {
            min: 1.0,
            max: Some((s as f64).sqrt() + 1.0),
        },
    };
    L1Extremes {
        min: unit.min * mu,
        max: unit.max.map(|v| v * mu),
    }
}

pub fn base_constants(base: &CompactBaseSpec) -> BaseConstants {
    let mu = base.scale;
    let (c1, c2, c1_exact) = match base.kind {
        BaseKind::Spectraplex { q } => {
            let qf = q as f64;
            (2.0 / (qf * (qf + 1.0)), qf.sqrt(), false)
        }
        _ => {
            let l1 = l1_extremes(&CompactBaseSpec::new(base.kind));
            (1.0 / l1.max.unwrap_or(f64::INFINITY), 1.0 / l1.min, true)
        }
    };
    BaseConstants {
        c1: c1 / mu,
        c2: c2 / mu,
        c1_exact,
    }
}

/// The finite vertex list of a polyhedral base, in a fixed order.
pub fn vertices(base: &CompactBaseSpec) -> Option<Vec<DVector<f64>>> {
    if !base.kind.is_polyhedral() {
        return None;
    }
    let mu = base.scale;
    let m = base.dim();
    let unit = |i: usize| {
        let mut v = DVector::zeros(m);
        v[i] = mu;
        v
    };
    let verts = match base.kind {
        BaseKind::Simplex { .. } | BaseKind::Spectraplex { .. } => (0..m).map(unit).collect(),
        BaseKind::SocSlice { .. } => vec![
            DVector::from_vec(vec![-mu, mu]),
            DVector::from_vec(vec![mu, mu]),
        ],
        BaseKind::SvmProduct { .. } => {
            let mut out = Vec::with_capacity(m);
            for sign in [-1.0, 1.0] {
                let mut v = unit(1);
                v[0] = sign * mu;
                out.push(v);
            }
            out.extend((2..m).map(unit));
            out
        }
    };
    Some(verts)
}

/// Canonical extreme points of the unit base.
fn canonical_extremes(kind: &BaseKind) -> Vec<DVector<f64>> {
    let m = kind.dim();
    let unit = |i: usize| {
        let mut v = DVector::zeros(m);
        v[i] = 1.0;
        v
    };
    match *kind {
        BaseKind::Simplex { .. } => (0..m).map(unit).collect(),
        BaseKind::SocSlice { .. } => {
            let mut out = Vec::new();
            for i in 0..m - 1 {
                for sign in [1.0, -1.0] {
                    let mut v = unit(m - 1);
                    v[i] = sign;
                    out.push(v);
                }
            }
            out
        }
        BaseKind::Spectraplex { q } => {
            let map = SvecMap::new(q);
            let mut out = Vec::new();
            for i in 0..q {
                out.push(unit(map.index(i, i)));
            }
            for i in 0..q {
                for j in (i + 1)..q {
                    for sign in [1.0, -1.0] {
                        let mut v = DVector::zeros(q);
                        v[i] = std::f64::consts::FRAC_1_SQRT_2;
                        v[j] = sign * std::f64::consts::FRAC_1_SQRT_2;
                        out.push(rank_one(&map, &v));
                    }
                }
            }
            out
        }
        BaseKind::SvmProduct { s, .. } => {
            let mut out = Vec::new();
            for i in 0..s {
                for sign in [1.0, -1.0] {
                    let mut v = unit(s);
                    v[i] = sign;
                    out.push(v);
                }
            }
            out.extend((s + 1..m).map(unit));
            out
        }
    }
}

fn rank_one(map: &SvecMap, v: &DVector<f64>) -> DVector<f64> {
    let mut out = DVector::zeros(map.len());
    for k in 0..map.len() {
        let (i, j) = map.position(k);
        out[k] = if i == j {
            v[i] * v[i]
        } else {
            std::f64::consts::SQRT_2 * v[i] * v[j]
        };
    }
    out
}

fn unit_sphere(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let norm = norm_of(&v);
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// `count` extreme points of the base, deterministic for `seed`. The canonical
/// extremes come first; simplex vertices are cycled.
pub fn sample_extreme(base: &CompactBaseSpec, seed: u64, count: usize) -> Vec<DVector<f64>> {
    let kind = base.kind;
    let m = kind.dim();
    let canonical = canonical_extremes(&kind);
    let mut out: Vec<DVector<f64>> = canonical.iter().take(count).cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut k = 0;
    while out.len() < count {
        let point = match kind {
            BaseKind::Simplex { .. } => canonical[k % m].clone(),
            BaseKind::SocSlice { .. } => {
                let mut v = unit_sphere(&mut rng, m - 1);
                v.push(1.0);
                DVector::from_vec(v)
            }
            BaseKind::Spectraplex { q } => {
                let v = DVector::from_vec(unit_sphere(&mut rng, q));
                rank_one(&SvecMap::new(q), &v)
            }
            BaseKind::SvmProduct { s, m_svm } => {
                let j = rng.random_range(0..=m_svm);
                let mut v = DVector::zeros(m);
                if j == 0 {
                    v.as_mut_slice()[..s].copy_from_slice(&unit_sphere(&mut rng, s));
                }
                v[s + j] = 1.0;
                v
            }
        };
        out.push(point);
        k += 1;
    }
    out.into_iter().map(|v| v * base.scale).collect()
}
