//! RRF bounds `c1·dist_lo ≤ ρ ≤ c2·dist_hi` assembled from the certified
//! distance interval and the base constants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::base_constants;
use crate::model::{natural_base, CompactBaseSpec, ConeKind, NominalProblem};
use crate::oracle::{slater_margin, OracleConfig};
use crate::solver::{epigraph_distance, SolverConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostic {
    /// The lower bound is zero. A negative `slater_margin` means a strictly
    /// feasible point exists, so the true radius is positive.
    VacuousLowerBound { slater_margin: Option<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RrfReport {
    pub base: CompactBaseSpec,
    pub c1: f64,
    pub c2: f64,
    pub c1_exact: bool,
    pub dist_lo: f64,
    pub dist_hi: f64,
    pub rrf_lower: f64,
    pub rrf_upper: f64,
    /// `c1 = c2` and the solve converged, so the interval pins `ρ` down.
    pub exact: bool,
    pub iterations: usize,
    pub converged: bool,
    pub diagnostics: Vec<Diagnostic>,
}

/// Bounds with the natural base of the problem's cone.
pub fn rrf_bounds(p: &NominalProblem, cfg: &SolverConfig) -> Result<RrfReport> {
    rrf_bounds_with_base(p, &natural_base(p.cone), cfg)
}

pub fn rrf_bounds_with_base(
    p: &NominalProblem,
    base: &CompactBaseSpec,
    cfg: &SolverConfig,
) -> Result<RrfReport> {
    let k = base_constants(base);
    let d = epigraph_distance(p, base, cfg)?;
    let rrf_lower = k.c1 * d.dist_lo;
    let rrf_upper = k.c2 * d.dist_hi;

    let mut diagnostics = Vec::new();
    if rrf_lower <= 0.0 {
        let slater = if p.n() <= 3 {
            // The margin is convex, so a coarse grid only seeds the
            // ellipsoid pass.
            let cfg = OracleConfig {
                x_grid: 21,
                ..OracleConfig::default()
            };
            Some(slater_margin(p, &cfg)?)
        } else {
            None
        };
        diagnostics.push(Diagnostic::VacuousLowerBound {
            slater_margin: slater,
        });
    }

    Ok(RrfReport {
        base: *base,
        c1: k.c1,
        c2: k.c2,
        c1_exact: k.c1_exact,
        dist_lo: d.dist_lo,
        dist_hi: d.dist_hi,
        rrf_lower,
        rrf_upper,
        exact: k.c1 == k.c2 && d.converged,
        iterations: d.iterations,
        converged: d.converged,
        diagnostics,
    })
}

/// The exact radius of an LP, which equals the distance for the simplex base.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LpRadius {
    /// Midpoint of `[lo, hi]`.
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    pub converged: bool,
}

pub fn rrf_exact_lp(p: &NominalProblem, cfg: &SolverConfig) -> Result<LpRadius> {
    if !matches!(p.cone, ConeKind::NonnegOrthant { .. }) {
        return Err(Error::WrongCone(p.cone.name().into()));
    }
    let d = epigraph_distance(p, &natural_base(p.cone), cfg)?;
    Ok(LpRadius {
        value: 0.5 * (d.dist_lo + d.dist_hi),
        lo: d.dist_lo,
        hi: d.dist_hi,
        converged: d.converged,
    })
}

/// `τ = c1/c2`, the worst-case ratio of the lower to the upper bound.
pub fn gap_ratio(base: &CompactBaseSpec) -> f64 {
    let k = base_constants(base);
    k.c1 / k.c2
}
