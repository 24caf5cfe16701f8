//! Cyclic Jacobi eigensolver for small dense symmetric matrices.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::check_symmetric;

pub const MAX_SWEEPS: usize = 100;
const OFF_TOL: f64 = 1e-12;

/// Eigenvalues in ascending order and the matching orthonormal eigenvectors
/// as columns. Equal eigenvalues keep their diagonal order, so the lowest
/// index wins ties.
pub fn eigh(mat: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    if !mat.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigh needs a square matrix, got {:?}",
            mat.shape()
        )));
    }
    if mat.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteEntry("matrix".into()));
    }
    check_symmetric(mat)?;

    let q = mat.nrows();
    let mut a = mat.clone();
    for i in 0..q {
        for j in (i + 1)..q {
            let avg = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = avg;
            a[(j, i)] = avg;
        }
    }
    let mut v = DMatrix::<f64>::identity(q, q);
    let norm = a.norm();
    let target = OFF_TOL * norm;

    let mut converged = off_norm(&a) <= target;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        sweeps += 1;
        for p in 0..q {
            for r in (p + 1)..q {
                rotate(&mut a, &mut v, p, r);
            }
        }
        converged = off_norm(&a) <= target;
    }

    let mut order: Vec<usize> = (0..q).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values = DVector::from_iterator(q, order.iter().map(|&i| a[(i, i)]));
    let vectors = DMatrix::from_fn(q, q, |row, col| v[(row, order[col])]);
    Ok((values, vectors))
}

fn off_norm(a: &DMatrix<f64>) -> f64 {
    let q = a.nrows();
    let mut s = 0.0;
    for i in 0..q {
        for j in 0..q {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

fn rotate(a: &mut DMatrix<f64>, v: &mut DMatrix<f64>, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = if theta.is_infinite() {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = a.nrows();

    for r in 0..n {
        if r != p && r != q {
            let arp = a[(r, p)];
            let arq = a[(r, q)];
            let new_rp = c * arp - s * arq;
            let new_rq = s * arp + c * arq;
            a[(r, p)] = new_rp;
            a[(p, r)] = new_rp;
            a[(r, q)] = new_rq;
            a[(q, r)] = new_rq;
        }
    }
    a[(p, p)] -= t * apq;
    a[(q, q)] += t * apq;
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;

    for r in 0..n {
        let vrp = v[(r, p)];
        let vrq = v[(r, q)];
        v[(r, p)] = c * vrp - s * vrq;
        v[(r, q)] = s * vrp + c * vrq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::dmatrix;
    use proptest::prelude::*;

    fn residual(m: &DMatrix<f64>, w: &DVector<f64>, v: &DMatrix<f64>) -> f64 {
        let recon = v * DMatrix::from_diagonal(w) * v.transpose();
        (recon - m).norm()
    }

    #[test]
    fn two_by_two_known_spectrum() {
        let m = dmatrix![2.0, 1.0; 1.0, 2.0];
        let (w, v) = eigh(&m).unwrap();
        assert_abs_diff_eq!(w[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w[1], 3.0, epsilon = 1e-12);
        assert!(residual(&m, &w, &v) < 1e-12);
    }

    #[test]
    fn diagonal_ties_keep_index_order() {
        let m = dmatrix![1.0, 0.0, 0.0; 0.0, 1.0, 0.0; 0.0, 0.0, -2.0];
        let (w, v) = eigh(&m).unwrap();
        assert_eq!(w.as_slice(), &[-2.0, 1.0, 1.0]);
        assert_eq!(v[(0, 1)], 1.0);
        assert_eq!(v[(1, 2)], 1.0);
    }

    #[test]
    fn zero_and_one_by_one() {
        let (w, _) = eigh(&DMatrix::zeros(3, 3)).unwrap();
        assert_eq!(w.as_slice(), &[0.0; 3]);
        let (w, v) = eigh(&dmatrix![-4.5]).unwrap();
        assert_eq!(w[0], -4.5);
        assert_eq!(v[(0, 0)], 1.0);
    }

    #[test]
    fn rejects_asymmetric_and_non_finite() {
        assert!(matches!(
            eigh(&dmatrix![1.0, 2.0; 0.0, 1.0]),
            Err(Error::NotSymmetric(_))
        ));
        assert!(matches!(
            eigh(&dmatrix![f64::NAN]),
            Err(Error::NonFiniteEntry(_))
        ));
    }

    proptest! {
        #[test]
        fn reconstructs_random_symmetric(
            q in 1usize..8,
            entries in prop::collection::vec(-10.0f64..10.0, 64),
        ) {
            let mut m = DMatrix::zeros(q, q);
            for i in 0..q {
                for j in i..q {
                    m[(i, j)] = entries[i * 8 + j];
                    m[(j, i)] = entries[i * 8 + j];
                }
            }
            let (w, v) = eigh(&m).unwrap();
            let scale = m.norm().max(1.0);
            prop_assert!(residual(&m, &w, &v) <= 1e-9 * scale);
            let orth = (v.transpose() * &v - DMatrix::identity(q, q)).norm();
            prop_assert!(orth <= 1e-9);
            for k in 1..q {
                prop_assert!(w[k - 1] <= w[k]);
            }
        }
    }
}
