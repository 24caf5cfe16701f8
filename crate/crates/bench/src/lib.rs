//! Seeded problem builders shared by the benchmarks.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rrf_core::{ConeKind, NominalProblem};

pub fn lp_example() -> NominalProblem {
    NominalProblem::from_rows(
        &[vec![2.0], vec![-1.0]],
        &[0.0, -3.0],
        ConeKind::NonnegOrthant { m: 2 },
    )
    .expect("valid data")
}

/// A random problem over `cone` with `n` variables and entries in `[−1, 1]`.
pub fn random_problem(cone: ConeKind, n: usize, seed: u64) -> NominalProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = cone.dim();
    let a = DMatrix::from_fn(m, n, |_, _| rng.random_range(-1.0..1.0));
    let b = DVector::from_fn(m, |_, _| rng.random_range(-1.0..1.0));
    NominalProblem::new(a, b, cone).expect("valid data")
}

pub fn random_vector(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.random_range(-1.0..1.0)).collect()
}

pub fn random_symmetric(q: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::from_fn(q, q, |_, _| rng.random_range(-1.0..1.0));
    (&g + g.transpose()) * 0.5
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders_are_seeded() {
        let cone = ConeKind::SecondOrderCone { m: 6 };
        assert_eq!(random_problem(cone, 3, 1), random_problem(cone, 3, 1));
        assert_ne!(random_problem(cone, 3, 1), random_problem(cone, 3, 2));
        let s = random_symmetric(4, 0);
        assert_eq!(s, s.transpose());
    }
}
