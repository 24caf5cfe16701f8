//! Problem data: the nominal system `Āx + b̄ ∈ −K`, its cone, the ball radii of
//! the uncertainty sets, and the compact bases of the dual cone used by the
//! bounds.
//!
//! Every supported cone is self-dual, so only `K` is stored and `K* = K` is
//! implied throughout.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when checking that a matrix is symmetric.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// The closed convex cone `K` of the constraint `Āx + b̄ ∈ −K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConeKind {
    /// `ℝ₊^m`.
    NonnegOrthant { m: usize },
    /// `{x ∈ ℝ^m : x_m ≥ ‖(x_1, …, x_{m−1})‖}`.
    SecondOrderCone { m: usize },
    /// Positive semidefinite `q × q` matrices, vectorized with [`svec`].
    PsdCone { q: usize },
    /// `K_p^{soc_dim} × ℝ₊^{orthant_dim}`, as produced by the robust SVM lifting.
    Product { soc_dim: usize, orthant_dim: usize },
}

impl ConeKind {
    /// Ambient dimension `m` of the cone.
    pub fn dim(&self) -> usize {
        match *self {
            ConeKind::NonnegOrthant { m } | ConeKind::SecondOrderCone { m } => m,
            ConeKind::PsdCone { q } => q * (q + 1) / 2,
            ConeKind::Product {
                soc_dim,
                orthant_dim,
            } => soc_dim + orthant_dim,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ConeKind::NonnegOrthant { m: 0 } => Err(Error::InvalidCone(
                "nonnegative orthant needs m >= 1".into(),
            )),
            ConeKind::SecondOrderCone { m } if m < 2 => {
                Err(Error::InvalidCone("second-order cone needs m >= 2".into()))
            }
            ConeKind::PsdCone { q: 0 } => Err(Error::InvalidCone("PSD cone needs q >= 1".into())),
            ConeKind::Product {
                soc_dim,
                orthant_dim,
            } if soc_dim < 2 || orthant_dim == 0 => Err(Error::InvalidCone(
                "product cone needs soc_dim >= 2 and orthant_dim >= 1".into(),
            )),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ConeKind::NonnegOrthant { .. } => "nonneg",
            ConeKind::SecondOrderCone { .. } => "soc",
            ConeKind::PsdCone { .. } => "psd",
            ConeKind::Product { .. } => "svm_product",
        }
    }
}

/// Nominal data `(Ā, b̄, K)` of an uncertain linear conic program.
///
/// Row `i` of `a_bar` is `āᵢᵀ`; `n` is the number of decision variables and `m`
/// the number of rows.
#[derive(Debug, Clone, PartialEq)]
pub struct NominalProblem {
    pub a_bar: DMatrix<f64>,
    pub b_bar: DVector<f64>,
    pub cone: ConeKind,
}

impl NominalProblem {
    /// Builds and validates a problem.
    pub fn new(a_bar: DMatrix<f64>, b_bar: DVector<f64>, cone: ConeKind) -> Result<Self> {
        let p = NominalProblem { a_bar, b_bar, cone };
        p.validate()?;
        Ok(p)
    }

    /// Builds a problem from row slices. Ragged rows are a dimension mismatch.
    pub fn from_rows(rows: &[Vec<f64>], b_bar: &[f64], cone: ConeKind) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "row {i} of A has {} entries, expected {n}",
                row.len()
            )));
        }
        let a_bar = DMatrix::from_fn(m, n, |i, j| rows[i][j]);
        NominalProblem::new(a_bar, DVector::from_column_slice(b_bar), cone)
    }

    pub fn n(&self) -> usize {
        self.a_bar.ncols()
    }

    pub fn m(&self) -> usize {
        self.a_bar.nrows()
    }

    pub fn validate(&self) -> Result<()> {
        self.cone.validate()?;
        let (m, n) = self.a_bar.shape();
        if n == 0 || m == 0 {
            return Err(Error::DimensionMismatch(format!(
                "A must be non-empty, got {m}x{n}"
            )));
        }
        if self.b_bar.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "A has {m} rows but b has length {}",
                self.b_bar.len()
            )));
        }
        if let ConeKind::PsdCone { q } = self.cone {
            let expected = q * (q + 1) / 2;
            if expected != m {
                return Err(Error::PsdDimInvalid {
                    q,
                    expected,
                    got: m,
                });
            }
        } else if self.cone.dim() != m {
            return Err(Error::DimensionMismatch(format!(
                "cone dimension {} does not match {m} rows",
                self.cone.dim()
            )));
        }
        if self.a_bar.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteEntry("A".into()));
        }
        if self.b_bar.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteEntry("b".into()));
        }
        Ok(())
    }

    /// Row `āᵢ` as a vector.
    pub fn row(&self, i: usize) -> DVector<f64> {
        self.a_bar.row(i).transpose()
    }
}

/// Checks every invariant of `p` and hands it back unchanged.
pub fn validate_problem(p: NominalProblem) -> Result<NominalProblem> {
    p.validate()?;
    Ok(p)
}

/// Per-row radii `r` of the uncertainty balls `(āᵢ, b̄ᵢ) + rᵢ·𝔹`.
#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyRadii(Vec<f64>);

impl UncertaintyRadii {
    pub fn new(r: Vec<f64>) -> Result<Self> {
        if let Some(v) = r.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidRadii(format!(
                "radii must be finite and nonnegative, got {v}"
            )));
        }
        Ok(UncertaintyRadii(r))
    }

    /// `α·1_m`.
    pub fn uniform(alpha: f64, m: usize) -> Result<Self> {
        UncertaintyRadii::new(vec![alpha; m])
    }

    pub fn zeros(m: usize) -> Self {
        UncertaintyRadii(vec![0.0; m])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Shape of a compact base `B` of `K*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseKind {
    /// Unit simplex `Δ_m`.
    Simplex { m: usize },
    /// `{λ : ‖(λ₁..λ_{m−1})‖ ≤ 1, λ_m = 1}`.
    SocSlice { m: usize },
    /// `{svec(Λ) : Λ ⪰ 0, Tr Λ = 1}`.
    Spectraplex { q: usize },
    /// `{λ : ‖λ_{1:s}‖ ≤ λ_{s+1}, Σ_{j=1}^{m_svm+1} λ_{s+j} = 1, λ_{s+j} ≥ 0}`.
    SvmProduct { s: usize, m_svm: usize },
}

impl BaseKind {
    pub fn dim(&self) -> usize {
        match *self {
            BaseKind::Simplex { m } | BaseKind::SocSlice { m } => m,
            BaseKind::Spectraplex { q } => q * (q + 1) / 2,
            BaseKind::SvmProduct { s, m_svm } => s + 1 + m_svm,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BaseKind::Simplex { .. } => "simplex",
            BaseKind::SocSlice { .. } => "soc_slice",
            BaseKind::Spectraplex { .. } => "spectraplex",
            BaseKind::SvmProduct { .. } => "svm_product",
        }
    }

    /// True when the base is a polytope with finitely many extreme points.
    pub fn is_polyhedral(&self) -> bool {
        match *self {
            BaseKind::Simplex { .. } => true,
            BaseKind::SocSlice { m } => m == 2,
            BaseKind::Spectraplex { q } => q == 1,
            BaseKind::SvmProduct { s, .. } => s == 1,
        }
    }
}

/// A compact base `scale·B` of the dual cone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompactBaseSpec {
    pub kind: BaseKind,
    pub scale: f64,
}

impl CompactBaseSpec {
    pub fn new(kind: BaseKind) -> Self {
        CompactBaseSpec { kind, scale: 1.0 }
    }

    pub fn scaled(kind: BaseKind, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "base scale must be positive, got {scale}"
            )));
        }
        Ok(CompactBaseSpec { kind, scale })
    }

    pub fn dim(&self) -> usize {
        self.kind.dim()
    }
}

/// The base each corollary pairs with its cone.
pub fn natural_base(cone: ConeKind) -> CompactBaseSpec {
    let kind = match cone {
        ConeKind::NonnegOrthant { m } => BaseKind::Simplex { m },
        ConeKind::SecondOrderCone { m } => BaseKind::SocSlice { m },
        ConeKind::PsdCone { q } => BaseKind::Spectraplex { q },
        ConeKind::Product {
            soc_dim,
            orthant_dim,
        } => BaseKind::SvmProduct {
            s: soc_dim - 1,
            m_svm: orthant_dim,
        },
    };
    CompactBaseSpec::new(kind)
}

/// Row-major upper-triangle vectorization of symmetric `q × q` matrices with
/// off-diagonal entries scaled by `√2`, so that `⟨svec(M₁), svec(M₂)⟩ = Tr(M₁M₂)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SvecMap {
    q: usize,
    ordering: Vec<(usize, usize)>,
}

impl SvecMap {
    pub fn new(q: usize) -> Self {
        let ordering = (0..q).flat_map(|i| (i..q).map(move |j| (i, j))).collect();
        SvecMap { q, ordering }
    }

    /// Recovers `q` from a vector length `q(q+1)/2`.
    pub fn for_len(len: usize) -> Result<Self> {
        let mut q = 0;
        while q * (q + 1) / 2 < len {
            q += 1;
        }
        if q * (q + 1) / 2 != len {
            return Err(Error::DimensionMismatch(format!(
                "length {len} is not a triangular number"
            )));
        }
        Ok(SvecMap::new(q))
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn len(&self) -> usize {
        self.ordering.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordering.is_empty()
    }

    /// Matrix position `(i, j)`, `i ≤ j`, of vector slot `k`.
    pub fn position(&self, k: usize) -> (usize, usize) {
        self.ordering[k]
    }

    /// Vector slot of matrix position `(i, j)`.
    pub fn index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        // Rows 0..i contribute q + (q-1) + ... + (q-i+1) slots.
        i * self.q - i * (i.saturating_sub(1)) / 2 + (j - i)
    }

    pub fn svec(&self, mat: &DMatrix<f64>) -> Result<DVector<f64>> {
        if mat.shape() != (self.q, self.q) {
            return Err(Error::DimensionMismatch(format!(
                "expected a {q}x{q} matrix, got {:?}",
                mat.shape(),
                q = self.q
            )));
        }
        check_symmetric(mat)?;
        Ok(DVector::from_iterator(
            self.len(),
            self.ordering.iter().map(|&(i, j)| {
                if i == j {
                    mat[(i, i)]
                } else {
                    std::f64::consts::SQRT_2 * 0.5 * (mat[(i, j)] + mat[(j, i)])
                }
            }),
        ))
    }

    pub fn smat(&self, v: &DVector<f64>) -> Result<DMatrix<f64>> {
        if v.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "expected a vector of length {}, got {}",
                self.len(),
                v.len()
            )));
        }
        let mut mat = DMatrix::zeros(self.q, self.q);
        for (k, &(i, j)) in self.ordering.iter().enumerate() {
            if i == j {
                mat[(i, i)] = v[k];
            } else {
                let x = v[k] / std::f64::consts::SQRT_2;
                mat[(i, j)] = x;
                mat[(j, i)] = x;
            }
        }
        Ok(mat)
    }
}

/// [`SvecMap::svec`] for the matrix's own size.
pub fn svec(mat: &DMatrix<f64>) -> Result<DVector<f64>> {
    if !mat.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "svec needs a square matrix, got {:?}",
            mat.shape()
        )));
    }
    SvecMap::new(mat.nrows()).svec(mat)
}

/// Inverse of [`svec`]; the side length is inferred from the vector length.
pub fn smat(v: &DVector<f64>) -> Result<DMatrix<f64>> {
    SvecMap::for_len(v.len())?.smat(v)
}

pub(crate) fn check_symmetric(mat: &DMatrix<f64>) -> Result<()> {
    let scale = mat.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    let mut dev = 0.0f64;
    for i in 0..mat.nrows() {
        for j in (i + 1)..mat.ncols() {
            dev = dev.max((mat[(i, j)] - mat[(j, i)]).abs());
        }
    }
    if dev.is_nan() || dev > SYMMETRY_TOL * scale {
        return Err(Error::NotSymmetric(dev));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::dmatrix;

    fn example21() -> NominalProblem {
        NominalProblem::from_rows(
            &[vec![2.0], vec![-1.0]],
            &[0.0, -3.0],
            ConeKind::NonnegOrthant { m: 2 },
        )
        .unwrap()
    }

    #[test]
    fn validates_example_problem() {
        let p = example21();
        assert_eq!((p.m(), p.n()), (2, 1));
        let again = validate_problem(p.clone()).unwrap();
        assert_eq!(again, p);
        assert_eq!(validate_problem(again.clone()).unwrap(), again);
    }

    #[test]
    fn rejects_length_disagreement() {
        let a = DMatrix::from_element(3, 2, 1.0);
        let b = DVector::from_element(2, 0.0);
        let err = NominalProblem::new(a, b, ConeKind::NonnegOrthant { m: 3 }).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(_)), "{err}");
    }

    #[test]
    fn rejects_cone_dimension_disagreement() {
        let a = DMatrix::from_element(3, 2, 1.0);
        let b = DVector::from_element(3, 0.0);
        let err = NominalProblem::new(a, b, ConeKind::SecondOrderCone { m: 2 }).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(_)));
    }

    #[test]
    fn rejects_bad_psd_dimension() {
        let a = DMatrix::from_element(4, 2, 1.0);
        let b = DVector::from_element(4, 0.0);
        let err = NominalProblem::new(a, b, ConeKind::PsdCone { q: 2 }).unwrap_err();
        assert!(matches!(
            err,
            Error::PsdDimInvalid {
                q: 2,
                expected: 3,
                got: 4
            }
        ));
    }

    #[test]
    fn rejects_non_finite_and_empty() {
        let err = NominalProblem::from_rows(
            &[vec![f64::NAN], vec![1.0]],
            &[0.0, 0.0],
            ConeKind::NonnegOrthant { m: 2 },
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonFiniteEntry(_)));

        let a = DMatrix::<f64>::zeros(2, 0);
        let err = NominalProblem::new(a, DVector::zeros(2), ConeKind::NonnegOrthant { m: 2 })
            .unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(_)));
    }

    #[test]
    fn natural_bases() {
        assert_eq!(
            natural_base(ConeKind::NonnegOrthant { m: 2 }).kind,
            BaseKind::Simplex { m: 2 }
        );
        assert_eq!(
            natural_base(ConeKind::SecondOrderCone { m: 2 }).kind,
            BaseKind::SocSlice { m: 2 }
        );
        assert_eq!(
            natural_base(ConeKind::PsdCone { q: 3 }).kind,
            BaseKind::Spectraplex { q: 3 }
        );
        assert_eq!(
            natural_base(ConeKind::Product {
                soc_dim: 3,
                orthant_dim: 5
            })
            .kind,
            BaseKind::SvmProduct { s: 2, m_svm: 5 }
        );
    }

    #[test]
    fn svec_two_by_two() {
        let v = svec(&dmatrix![1.0, 2.0; 2.0, 3.0]).unwrap();
        assert_abs_diff_eq!(v[0], 1.0);
        assert_abs_diff_eq!(v[1], std::f64::consts::SQRT_2 * 2.0);
        assert_abs_diff_eq!(v[2], 3.0);

        let id = svec(&DMatrix::identity(2, 2)).unwrap();
        assert_eq!(id.as_slice(), &[1.0, 0.0, 1.0]);
    }

    #[test]
    fn svec_rejects_asymmetric() {
        let err = svec(&dmatrix![1.0, 2.0; 2.5, 3.0]).unwrap_err();
        assert!(matches!(err, Error::NotSymmetric(_)));
    }

    #[test]
    fn svec_index_matches_ordering() {
        for q in 1..6 {
            let map = SvecMap::new(q);
            for k in 0..map.len() {
                let (i, j) = map.position(k);
                assert_eq!(map.index(i, j), k);
                assert_eq!(map.index(j, i), k);
            }
        }
    }

    #[test]
    fn smat_rejects_non_triangular_length() {
        assert!(smat(&DVector::zeros(4)).is_err());
        assert_eq!(smat(&DVector::zeros(6)).unwrap().shape(), (3, 3));
    }

    #[test]
    fn radii_validation() {
        assert!(UncertaintyRadii::new(vec![1.0, -0.1]).is_err());
        assert!(UncertaintyRadii::new(vec![f64::INFINITY]).is_err());
        assert_eq!(
            UncertaintyRadii::uniform(0.5, 3).unwrap().as_slice(),
            &[0.5; 3]
        );
    }
}
