//! Frank–Wolfe minimization of the reduced epigraph objective
//! `f(λ) = ‖Āᵀλ‖² + max(−b̄ᵀλ, 0)²` over a compact base, with the duality gap
//! as a two-sided certificate on `dist² = min_B f`.

use log::{debug, trace};
use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::lmo;
use crate::model::{CompactBaseSpec, NominalProblem};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Stopping tolerance on the Frank–Wolfe gap of `f` (squared distance).
    pub gap_tol: f64,
    pub max_iters: usize,
    /// Use pairwise steps over the active set on polyhedral bases.
    pub pairwise: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            gap_tol: 1e-8,
            max_iters: 50_000,
            pairwise: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gap_tol.is_finite() && self.gap_tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "gap_tol must be positive, got {}",
                self.gap_tol
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
        }
        Ok(())
    }
}

/// Certified interval `[dist_lo, dist_hi]` for the distance from the origin to
/// the epigraphical set, with the certificate point `lambda_star`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceResult {
    pub f_hi: f64,
    pub f_lo: f64,
    pub dist_lo: f64,
    pub dist_hi: f64,
    pub lambda_star: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// `f(λ)` and its gradient.
pub fn reduced_objective(p: &NominalProblem, lambda: &DVector<f64>) -> Result<(f64, DVector<f64>)> {
    if lambda.len() != p.m() {
        return Err(Error::DimensionMismatch(format!(
            "lambda has length {}, problem has {} rows",
            lambda.len(),
            p.m()
        )));
    }
    let z = p.a_bar.tr_mul(lambda);
    let s = (-p.b_bar.dot(lambda)).max(0.0);
    let f = z.norm_squared() + s * s;
    let grad = (&p.a_bar * &z) * 2.0 - &p.b_bar * (2.0 * s);
    Ok((f, grad))
}

/// `φ(γ) = ‖z0 + γ·z1‖² + max(β0 + γ·βd, 0)²` through the inner products it needs.
#[derive(Debug, Clone, Copy)]
struct LineData {
    zd: f64,
    dd: f64,
    b0: f64,
    bd: f64,
}

impl LineData {
    fn new(p: &NominalProblem, lambda: &DVector<f64>, d: &DVector<f64>) -> Self {
        let z0 = p.a_bar.tr_mul(lambda);
        let z1 = p.a_bar.tr_mul(d);
        LineData {
            zd: z0.dot(&z1),
            dd: z1.norm_squared(),
            b0: -p.b_bar.dot(lambda),
            bd: -p.b_bar.dot(d),
        }
    }

    /// `φ(γ) − φ(0)`, formed without the constant term so that decreases
    /// far below the rounding of `φ` itself still compare correctly.
    fn delta(&self, g: f64) -> f64 {
        let s = self.b0 + g * self.bd;
        let hinge = if s > 0.0 && self.b0 > 0.0 {
            g * self.bd * (2.0 * self.b0 + g * self.bd)
        } else {
            s.max(0.0).powi(2) - self.b0.max(0.0).powi(2)
        };
        g * (2.0 * self.zd + g * self.dd) + hinge
    }

    fn argmin(&self, gamma_max: f64) -> f64 {
        let mut cuts = vec![0.0, gamma_max];
        if self.bd != 0.0 {
            let gb = -self.b0 / self.bd;
            if gb > 0.0 && gb < gamma_max {
                cuts.insert(1, gb);
            }
        }
        let mut candidates = cuts.clone();
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let active = self.b0 + 0.5 * (lo + hi) * self.bd > 0.0;
            let (a, b) = if active {
                (self.dd + self.bd * self.bd, self.zd + self.b0 * self.bd)
            } else {
                (self.dd, self.zd)
            };
            if a > 0.0 {
                candidates.push((-b / a).clamp(lo, hi));
            }
        }
        let mut best = 0.0;
        let mut best_val = 0.0;
        for g in candidates {
            let v = self.delta(g);
            if v < best_val {
                best = g;
                best_val = v;
            }
        }
        best
    }
}

/// Exact minimizer of `f(λ + γd)` over `γ ∈ [0, γ_max]`.
pub fn exact_line_search(
    p: &NominalProblem,
    lambda: &DVector<f64>,
    d: &DVector<f64>,
    gamma_max: f64,
) -> Result<f64> {
    if lambda.len() != p.m() || d.len() != p.m() {
        return Err(Error::DimensionMismatch(
            "line search vectors must have one entry per row".into(),
        ));
    }
    Ok(LineData::new(p, lambda, d).argmin(gamma_max))
}

/// Outcome of one Frank–Wolfe iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step {
    /// Objective before the step.
    pub f: f64,
    /// Frank–Wolfe gap before the step.
    pub gap: f64,
    pub gamma: f64,
    /// The step moved weight between two atoms.
    pub pairwise: bool,
}

/// Stepwise Frank–Wolfe state. `epigraph_distance` drives it to completion.
pub struct FrankWolfe<'a> {
    p: &'a NominalProblem,
    base: CompactBaseSpec,
    lambda: DVector<f64>,
    /// Convex weights over the atoms returned by the LMO, tracked on
    /// polyhedral bases when pairwise steps are enabled.
    active: Option<Vec<(DVector<f64>, f64)>>,
    f_lo: f64,
    iterations: usize,
}

impl<'a> FrankWolfe<'a> {
    pub fn new(p: &'a NominalProblem, base: CompactBaseSpec, pairwise: bool) -> Result<Self> {
        if base.dim() != p.m() {
            return Err(Error::DimensionMismatch(format!(
                "base dimension {} does not match {} rows",
                base.dim(),
                p.m()
            )));
        }
        let lambda = lmo(&base, &DVector::zeros(p.m()))?;
        let active = (pairwise && base.kind.is_polyhedral()).then(|| vec![(lambda.clone(), 1.0)]);
        Ok(FrankWolfe {
            p,
            base,
            lambda,
            active,
            f_lo: 0.0,
            iterations: 0,
        })
    }

    pub fn lambda(&self) -> &DVector<f64> {
        &self.lambda
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Largest certified lower bound on `min_B f` seen so far.
    pub fn f_lo(&self) -> f64 {
        self.f_lo
    }

    /// Current objective and Frank–Wolfe gap, with the FW vertex.
    pub fn gap(&self) -> Result<(f64, f64, DVector<f64>, DVector<f64>)> {
        let (f, grad) = reduced_objective(self.p, &self.lambda)?;
        let s = lmo(&self.base, &grad)?;
        let gap = grad.dot(&(&self.lambda - &s)).max(0.0);
        Ok((f, gap, grad, s))
    }

    /// Folds the current gap into the lower bound; true if it is at most
    /// `gap_tol`.
    pub fn certify(&mut self, gap_tol: f64) -> Result<bool> {
        let (f, gap, _, _) = self.gap()?;
        self.f_lo = self.f_lo.max(f - gap);
        Ok(gap <= gap_tol)
    }

    /// Takes one step unless the gap is already at most `gap_tol`, in which
    /// case `None` is returned.
    pub fn step(&mut self, gap_tol: f64) -> Result<Option<Step>> {
        let (f, gap, grad, s) = self.gap()?;
        self.f_lo = self.f_lo.max(f - gap);
        if gap <= gap_tol {
            return Ok(None);
        }

        // Pairwise step: shift weight from the worst active atom to `s`.
        let pair = self.active.as_ref().and_then(|atoms| {
            atoms
                .iter()
                .enumerate()
                .max_by(|a, b| grad.dot(&a.1 .0).total_cmp(&grad.dot(&b.1 .0)))
                .map(|(idx, (_, w))| (idx, *w))
        });

        let (d, gamma_max) = match pair {
            Some((idx, w)) => (&s - &self.active.as_ref().unwrap()[idx].0, w),
            None => (&s - &self.lambda, 1.0),
        };
        let gamma = LineData::new(self.p, &self.lambda, &d).argmin(gamma_max);
        self.lambda += &d * gamma;
        self.iterations += 1;

        if let (Some(atoms), Some((idx, _))) = (self.active.as_mut(), pair) {
            atoms[idx].1 -= gamma;
            if gamma >= gamma_max {
                atoms[idx].1 = 0.0;
            }
            match atoms.iter_mut().find(|(a, _)| *a == s) {
                Some(entry) => entry.1 += gamma,
                None => atoms.push((s, gamma)),
            }
            atoms.retain(|(_, w)| *w > 0.0);
        }

        let step = Step {
            f,
            gap,
            gamma,
            pairwise: pair.is_some(),
        };
        trace!("fw step {}: {:?}", self.iterations, step);
        Ok(Some(step))
    }
}

/// Certified interval for `dist(0, E)` via Frank–Wolfe over `base`.
///
/// Hitting `max_iters` is not an error: the interval is still valid and the
/// result carries `converged = false`.
pub fn epigraph_distance(
    p: &NominalProblem,
    base: &CompactBaseSpec,
    cfg: &SolverConfig,
) -> Result<DistanceResult> {
    cfg.validate()?;
    p.validate()?;
    let mut fw = FrankWolfe::new(p, *base, cfg.pairwise)?;
    let converged = loop {
        if fw.iterations() >= cfg.max_iters {
            break fw.certify(cfg.gap_tol)?;
        }
        if fw.step(cfg.gap_tol)?.is_none() {
            break true;
        }
    };
    let lambda = fw.lambda().clone();
    let (f_hi, _) = reduced_objective(p, &lambda)?;
    let f_lo = fw.f_lo().clamp(0.0, f_hi);
    debug!(
        "epigraph distance: f in [{f_lo:.3e}, {f_hi:.3e}] after {} iterations",
        fw.iterations()
    );
    Ok(DistanceResult {
        f_hi,
        f_lo,
        dist_lo: f_lo.sqrt(),
        dist_hi: f_hi.sqrt(),
        lambda_star: lambda.as_slice().to_vec(),
        iterations: fw.iterations(),
        converged,
    })
}
