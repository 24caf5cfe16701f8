//! Robust linear separability of labeled data.
//!
//! Separation `αᵢ(uᵢᵀw + γ) ≥ 1` for every `uᵢ` in a ball of radius `r` is the
//! conic system in `(w, γ, t)`
//!
//! ```text
//! ‖w‖ ≤ t,   αᵢ(uᵢᵀw + γ) ≥ 1,
//! ```
//!
//! whose data perturbations bound the point perturbations, so the lifted
//! problem's lower radius bound is a certified separability radius.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::base_constants;
use crate::model::{natural_base, ConeKind, NominalProblem};
use crate::solver::{epigraph_distance, SolverConfig};

/// Slack allowed by [`verify_separation`].
pub const SEPARATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingSet {
    points: Vec<Vec<f64>>,
    labels: Vec<f64>,
}

impl TrainingSet {
    /// Labels must be exactly `-1` or `1`, and both classes must appear.
    pub fn new(points: Vec<Vec<f64>>, labels: Vec<f64>) -> Result<Self> {
        if points.len() != labels.len() {
            return Err(Error::InvalidTrainingSet(format!(
                "{} points but {} labels",
                points.len(),
                labels.len()
            )));
        }
        if let Some((i, l)) = labels
            .iter()
            .enumerate()
            .find(|(_, l)| **l != 1.0 && **l != -1.0)
        {
            return Err(Error::BadLabels {
                line: i + 1,
                label: l.to_string(),
            });
        }
        if points.len() < 2 {
            return Err(Error::InvalidTrainingSet("need at least 2 points".into()));
        }
        let s = points[0].len();
        if s == 0 {
            return Err(Error::InvalidTrainingSet(
                "points have no coordinates".into(),
            ));
        }
        if let Some((i, p)) = points.iter().enumerate().find(|(_, p)| p.len() != s) {
            return Err(Error::RaggedRows {
                line: i + 1,
                expected: s + 1,
                found: p.len() + 1,
            });
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteEntry("training points".into()));
        }
        if !(labels.contains(&1.0) && labels.contains(&-1.0)) {
            return Err(Error::InvalidTrainingSet(
                "both labels must be present".into(),
            ));
        }
        Ok(TrainingSet { points, labels })
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    /// Dimension `s` of the points.
    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// The conic system in `(w, γ, t)` over `K_p^{s+1} × ℝ₊^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedProblem {
    pub problem: NominalProblem,
    pub s: usize,
    pub m: usize,
}

pub fn lift_svm(t: &TrainingSet) -> Result<LiftedProblem> {
    let s = t.dim();
    let m = t.len();
    let n = s + 2;
    let rows = s + 1 + m;
    let mut a = DMatrix::zeros(rows, n);
    let mut b = DVector::zeros(rows);
    for i in 0..s {
        a[(i, i)] = -1.0;
    }
    a[(s, s + 1)] = -1.0;
    for (j, (u, alpha)) in t.points.iter().zip(&t.labels).enumerate() {
        let row = s + 1 + j;
        for (k, uk) in u.iter().enumerate() {
            a[(row, k)] = -alpha * uk;
        }
        a[(row, s)] = -alpha;
        b[row] = 1.0;
    }
    let cone = ConeKind::Product {
        soc_dim: s + 1,
        orthant_dim: m,
    };
    Ok(LiftedProblem {
        problem: NominalProblem::new(a, b, cone)?,
        s,
        m,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparabilityRadius {
    /// Every perturbation radius up to this value admits a robust separator.
    pub r_star_lo: f64,
    pub dist_lo: f64,
    pub dist_hi: f64,
    /// `c2·dist_hi`, an upper bound on the lifted problem's radius (which is
    /// not the separability radius).
    pub lifted_rrf_upper: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub fn separability_radius(t: &TrainingSet, cfg: &SolverConfig) -> Result<SeparabilityRadius> {
    let lifted = lift_svm(t)?;
    let base = natural_base(lifted.problem.cone);
    let k = base_constants(&base);
    let d = epigraph_distance(&lifted.problem, &base, cfg)?;
    Ok(SeparabilityRadius {
        r_star_lo: d.dist_lo / ((lifted.s as f64).sqrt() + 1.0),
        dist_lo: d.dist_lo,
        dist_hi: d.dist_hi,
        lifted_rrf_upper: k.c2 * d.dist_hi,
        iterations: d.iterations,
        converged: d.converged,
    })
}

/// Checks `αᵢ(uᵢᵀw + γ) − r‖w‖ ≥ 1` for every point, the exact worst case
/// over the ball of radius `r` around `uᵢ`.
pub fn verify_separation(t: &TrainingSet, r: f64, w: &[f64], gamma: f64) -> bool {
    if w.len() != t.dim() {
        return false;
    }
    let wn = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    t.points.iter().zip(&t.labels).all(|(u, alpha)| {
        let dot: f64 = u.iter().zip(w).map(|(a, b)| a * b).sum();
        alpha * (dot + gamma) - r * wn >= 1.0 - SEPARATION_TOL
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::dmatrix;

    fn two_points() -> TrainingSet {
        TrainingSet::new(vec![vec![1.0], vec![-1.0]], vec![1.0, -1.0]).unwrap()
    }

    #[test]
    fn lifts_two_point_set() {
        let l = lift_svm(&two_points()).unwrap();
        assert_eq!(
            l.problem.a_bar,
            dmatrix![
                -1.0, 0.0, 0.0;
                0.0, 0.0, -1.0;
                -1.0, -1.0, 0.0;
                -1.0, 1.0, 0.0
            ]
        );
        assert_eq!(l.problem.b_bar.as_slice(), &[0.0, 0.0, 1.0, 1.0]);
        assert_eq!(
            l.problem.cone,
            ConeKind::Product {
                soc_dim: 2,
                orthant_dim: 2
            }
        );
    }

    #[test]
    fn flipped_labels_negate_data_rows() {
        let t = TrainingSet::new(
            vec![vec![1.0, 2.0], vec![-1.0, 0.5], vec![3.0, -1.0]],
            vec![1.0, -1.0, 1.0],
        )
        .unwrap();
        let f = TrainingSet::new(t.points.clone(), t.labels.iter().map(|l| -l).collect()).unwrap();
        let (a, b) = (lift_svm(&t).unwrap().problem, lift_svm(&f).unwrap().problem);
        assert_eq!(a.a_bar.rows(0, 3), b.a_bar.rows(0, 3));
        for i in 3..6 {
            for j in 0..3 {
                assert_eq!(a.a_bar[(i, j)], -b.a_bar[(i, j)]);
            }
        }
    }

    #[test]
    fn rejects_bad_sets() {
        assert!(matches!(
            TrainingSet::new(vec![vec![1.0], vec![2.0]], vec![1.0, 0.0]),
            Err(Error::BadLabels { line: 2, .. })
        ));
        assert!(matches!(
            TrainingSet::new(vec![vec![1.0], vec![2.0]], vec![1.0, 1.0]),
            Err(Error::InvalidTrainingSet(_))
        ));
        assert!(TrainingSet::new(vec![vec![1.0]], vec![1.0]).is_err());
    }

    #[test]
    fn separation_checks() {
        let t = two_points();
        assert!(verify_separation(&t, 0.0, &[1.0], 0.0));
        assert!(verify_separation(&t, 0.5, &[2.0], 0.0));
        for k in 0..=200 {
            let w = k as f64 * 0.1;
            for g in [-1.0, -0.1, 0.0, 0.1, 1.0] {
                assert!(!verify_separation(&t, 1.1, &[w], g));
            }
        }
    }

    #[test]
    fn two_point_radius() {
        let r = separability_radius(&two_points(), &SolverConfig::default()).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.r_star_lo, 0.2f64.sqrt() / 2.0, epsilon = 1e-4);
    }

    #[test]
    fn duplicate_point_keeps_distance() {
        let cfg = SolverConfig::default();
        let base = separability_radius(&two_points(), &cfg).unwrap();
        let dup =
            TrainingSet::new(vec![vec![1.0], vec![-1.0], vec![1.0]], vec![1.0, -1.0, 1.0]).unwrap();
        let r = separability_radius(&dup, &cfg).unwrap();
        assert_abs_diff_eq!(
            r.dist_hi.powi(2),
            base.dist_hi.powi(2),
            epsilon = 2.0 * cfg.gap_tol
        );
    }
}
