//! Covariance-based multivariate statistics: RV coefficient and first canonical correlation.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::matrix::{check_paired, DataMatrix};

use super::StatValue;

/// Relative ridge added to a rank-deficient covariance block before inversion.
pub const CCA_RIDGE: f64 = 1e-10;

fn centered_columns(x: &DataMatrix) -> DMatrix<f64> {
    let (n, p) = (x.n(), x.p());
    let v = x.values();
    let mut m = DMatrix::from_fn(n, p, |i, j| v[[i, j]]);
    for mut col in m.column_iter_mut() {
        let mean = col.mean();
        col.add_scalar_mut(-mean);
    }
    m
}

/// RV coefficient `tr(Sxy Syx) / sqrt(tr(Sxx^2) tr(Syy^2))` on column-centered data.
pub fn rv(x: &DataMatrix, y: &DataMatrix) -> Result<StatValue> {
    check_paired(x, y)?;
    x.require_rows(2, "rv")?;
    let (cx, cy) = (centered_columns(x), centered_columns(y));
    let sxy = cx.tr_mul(&cy);
    let sxx = cx.tr_mul(&cx);
    let syy = cy.tr_mul(&cy);
    // tr(A A^T) = ||A||_F^2 for Sxy Syx = Sxy Sxy^T, and Sxx is symmetric.
    let denom = sxx.norm_squared() * syy.norm_squared();
    if denom == 0.0 {
        return Err(Error::ZeroVariance("centered data is identically zero".into()));
    }
    Ok(StatValue::scalar(sxy.norm_squared() / denom.sqrt()))
}

/// `s^{-1/2}`. The ridge is only added when the block is numerically rank
/// deficient (smallest eigenvalue at or below the ridge itself).
fn inverse_sqrt(s: DMatrix<f64>) -> Result<DMatrix<f64>> {
    let p = s.nrows();
    let ridge = CCA_RIDGE * s.trace() / p as f64;
    let mut eig = SymmetricEigen::new(s.clone());
    if eig.eigenvalues.min() <= ridge {
        eig = SymmetricEigen::new(s + DMatrix::identity(p, p) * ridge);
    }
    if eig.eigenvalues.iter().any(|&l| l.is_nan() || l <= 0.0 || !l.is_finite()) {
        return Err(Error::Numerical(
            "covariance is singular after regularization".into(),
        ));
    }
    let inv_sqrt = eig.eigenvalues.map(|l| 1.0 / l.sqrt());
    Ok(&eig.eigenvectors * DMatrix::from_diagonal(&inv_sqrt) * eig.eigenvectors.transpose())
}

/// First canonical correlation, the largest singular value of
/// `Sxx^{-1/2} Sxy Syy^{-1/2}`; rank-deficient blocks are ridge-regularized.
pub fn cca(x: &DataMatrix, y: &DataMatrix) -> Result<StatValue> {
    check_paired(x, y)?;
    x.require_rows(2, "cca")?;
    let (cx, cy) = (centered_columns(x), centered_columns(y));
    let wx = inverse_sqrt(cx.tr_mul(&cx))?;
    let wy = inverse_sqrt(cy.tr_mul(&cy))?;
    let m = wx * cx.tr_mul(&cy) * wy;
    let sv = m.singular_values();
    let first = sv.iter().copied().fold(0.0, f64::max);
    if !first.is_finite() {
        return Err(Error::Numerical("non-finite canonical correlation".into()));
    }
    Ok(StatValue::scalar(first.min(1.0)))
}
