//! Distance- and kernel-based statistics: Mantel, distance covariance/correlation and HSIC.

use crate::error::{Error, Result};
use crate::matrix::{check_paired, DataMatrix};
use crate::pairwise::{center, euclidean_distances, gaussian_kernel, CenteringScheme, PairwiseMatrix};

use super::StatValue;

fn normalize(cross: f64, self_x: f64, self_y: f64, what: &str) -> Result<f64> {
    let denom = self_x * self_y;
    if denom.is_nan() || denom <= 0.0 {
        return Err(Error::ZeroVariance(format!("{what} self-statistic is not positive")));
    }
    Ok(cross / denom.sqrt())
}

/// Mantel coefficient on global-mean-centered Euclidean distance matrices.
pub fn mantel(x: &DataMatrix, y: &DataMatrix) -> Result<StatValue> {
    check_paired(x, y)?;
    let cx = center(&euclidean_distances(x)?, CenteringScheme::GlobalMean)?;
    let cy = center(&euclidean_distances(y)?, CenteringScheme::GlobalMean)?;
    normalize(cx.inner(&cy), cx.inner(&cx), cy.inner(&cy), "mantel").map(StatValue::scalar)
}

/// Cross and self covariances `(xy, xx, yy)` of two pairwise matrices.
///
/// Biased: `(1/n^2) tr(A H B H)`. Unbiased: `(1/(n(n-3))) tr(Ca Cb)` with U-centering.
fn covariances(a: &PairwiseMatrix, b: &PairwiseMatrix, unbiased: bool) -> Result<(f64, f64, f64)> {
    let n = a.n() as f64;
    let (scheme, scale) = if unbiased {
        (CenteringScheme::Unbiased, 1.0 / (n * (n - 3.0)))
    } else {
        (CenteringScheme::DoubleHCenter, 1.0 / (n * n))
    };
    let ca = center(a, scheme)?;
    let cb = center(b, scheme)?;
    Ok((
        scale * ca.inner(&cb),
        scale * ca.inner(&ca),
        scale * cb.inner(&cb),
    ))
}

fn require_size(x: &DataMatrix, y: &DataMatrix, unbiased: bool, what: &str) -> Result<()> {
    check_paired(x, y)?;
    x.require_rows(if unbiased { 4 } else { 2 }, what)
}

/// Distance covariance (biased `Dcov` or unbiased `UDcov`).
pub fn dcov(x: &DataMatrix, y: &DataMatrix, unbiased: bool) -> Result<f64> {
    require_size(x, y, unbiased, "dcov")?;
    let (xy, _, _) = covariances(&euclidean_distances(x)?, &euclidean_distances(y)?, unbiased)?;
    Ok(xy)
}

/// Distance correlation, biased or unbiased. The unbiased value may be negative.
pub fn dcorr(x: &DataMatrix, y: &DataMatrix, unbiased: bool) -> Result<StatValue> {
    require_size(x, y, unbiased, "dcorr")?;
    let (xy, xx, yy) = covariances(&euclidean_distances(x)?, &euclidean_distances(y)?, unbiased)?;
    normalize(xy, xx, yy, "dcorr").map(StatValue::scalar)
}

/// Raw HSIC with Gaussian median-bandwidth kernels.
pub fn hsic_covariance(x: &DataMatrix, y: &DataMatrix, unbiased: bool) -> Result<f64> {
    require_size(x, y, unbiased, "hsic")?;
    let (xy, _, _) = covariances(&gaussian_kernel(x)?, &gaussian_kernel(y)?, unbiased)?;
    Ok(xy)
}

/// HSIC normalized by the square root of the two self-statistics.
pub fn hsic(x: &DataMatrix, y: &DataMatrix, unbiased: bool) -> Result<StatValue> {
    require_size(x, y, unbiased, "hsic")?;
    let (xy, xx, yy) = covariances(&gaussian_kernel(x)?, &gaussian_kernel(y)?, unbiased)?;
    normalize(xy, xx, yy, "hsic").map(StatValue::scalar)
}
