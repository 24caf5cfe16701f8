#![allow(dead_code)]

use std::path::PathBuf;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rrf_core::{
    io::parse_problem, is_robust_feasible, rrf_estimate, slater_margin, ConeKind, NominalProblem,
    OracleConfig, RrfEstimate, UncertaintyRadii,
};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> NominalProblem {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap();
    parse_problem(&text).unwrap()
}

pub fn lp(rows: &[Vec<f64>], b: &[f64]) -> NominalProblem {
    NominalProblem::from_rows(rows, b, ConeKind::NonnegOrthant { m: b.len() }).unwrap()
}

/// A strictly feasible LP with its oracle estimate.
pub struct RandomLp {
    pub problem: NominalProblem,
    pub slater: f64,
    pub estimate: RrfEstimate,
}

/// Seeded LPs with `n ≤ 2`, `m ≤ 4` and entries in `[−3, 3]`, strictly
/// feasible at a known point. Instances whose robust solutions sit near the
/// edge of the oracle's search box are skipped.
pub fn random_lps(seed: u64, count: usize, cfg: &OracleConfig) -> Vec<RandomLp> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let n = rng.random_range(1..=2usize);
        let m = rng.random_range(n + 1..=4usize);
        let a = DMatrix::from_fn(m, n, |_, _| rng.random_range(-3.0..3.0));
        let x0 = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        let slack = DVector::from_fn(m, |_, _| rng.random_range(0.2..2.0));
        let b = -(&a * &x0) - slack;
        if b.iter().any(|v: &f64| v.abs() > 3.0) {
            continue;
        }
        let problem = NominalProblem::new(a, b, ConeKind::NonnegOrthant { m }).unwrap();
        let Ok(estimate) = rrf_estimate(&problem, cfg) else {
            continue;
        };
        let r = UncertaintyRadii::uniform(estimate.lo, m).unwrap();
        let verdict = is_robust_feasible(&problem, &r, cfg).unwrap();
        let inside = verdict
            .witness()
            .is_some_and(|x| x.iter().all(|v| v.abs() <= 0.5 * cfg.x_box));
        if !inside {
            continue;
        }
        let slater = slater_margin(&problem, cfg).unwrap();
        out.push(RandomLp {
            problem,
            slater,
            estimate,
        });
    }
    out
}

/// Small random problem over any cone, for derivative and solver checks.
pub fn random_problem(rng: &mut ChaCha8Rng) -> NominalProblem {
    let n = rng.random_range(1..=3usize);
    let cone = match rng.random_range(0..3) {
        0 => ConeKind::NonnegOrthant {
            m: rng.random_range(1..=5),
        },
        1 => ConeKind::SecondOrderCone {
            m: rng.random_range(2..=5),
        },
        _ => ConeKind::PsdCone {
            q: rng.random_range(1..=3),
        },
    };
    let m = cone.dim();
    let a = DMatrix::from_fn(m, n, |_, _| rng.random_range(-2.0..2.0));
    let b = DVector::from_fn(m, |_, _| rng.random_range(-2.0..2.0));
    NominalProblem::new(a, b, cone).unwrap()
}
