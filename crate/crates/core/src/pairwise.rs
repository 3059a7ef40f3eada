//! Distance and kernel matrices, and the centering schemes the statistics build on.

use ndarray::{Array2, ArrayView2};

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairwiseKind {
    Distance,
    Kernel,
}

/// An `n x n` symmetric matrix of pairwise distances or kernel values.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseMatrix {
    values: Array2<f64>,
    kind: PairwiseKind,
}

impl PairwiseMatrix {
    /// Validates symmetry (1e-12 relative) and the per-kind diagonal rules.
    pub fn new(values: Array2<f64>, kind: PairwiseKind) -> Result<Self> {
        let n = values.nrows();
        if values.ncols() != n {
            return Err(Error::Size(format!(
                "pairwise matrix must be square, got {}x{}",
                n,
                values.ncols()
            )));
        }
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (values[[i, j]], values[[j, i]]);
                if !a.is_finite() {
                    return Err(Error::InvalidData(format!("non-finite entry at ({i}, {j})")));
                }
                if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::InvalidData(format!("not symmetric at ({i}, {j})")));
                }
            }
            match kind {
                PairwiseKind::Distance => {
                    if values[[i, i]] != 0.0 {
                        return Err(Error::InvalidData(format!(
                            "distance matrix has non-zero diagonal at {i}"
                        )));
                    }
                    if values.row(i).iter().any(|&v| v < 0.0) {
                        return Err(Error::InvalidData(format!(
                            "distance matrix has a negative entry in row {i}"
                        )));
                    }
                }
                PairwiseKind::Kernel => {
                    if values[[i, i]] <= 0.0 {
                        return Err(Error::InvalidData(format!(
                            "kernel matrix has non-positive diagonal at {i}"
                        )));
                    }
                }
            }
        }
        Ok(Self { values, kind })
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn kind(&self) -> PairwiseKind {
        self.kind
    }

    pub fn values(&self) -> ArrayView2<'_, f64> {
        self.values.view()
    }

    /// Relabels observations: entry `(i, j)` of the result is entry
    /// `(order[i], order[j])` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let n = self.n();
        let values = Array2::from_shape_fn((n, n), |(i, j)| self.values[[order[i], order[j]]]);
        Self {
            values,
            kind: self.kind,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CenteringScheme {
    /// Subtract the off-diagonal mean (Mantel).
    GlobalMean,
    /// `H M H` with `H = I - J/n`.
    DoubleHCenter,
    /// U-centering with divisors `n - 2` and `(n - 1)(n - 2)`, zero diagonal.
    Unbiased,
    /// Subtract each column's off-diagonal mean, zero diagonal (MGC).
    ColumnMean,
}

impl CenteringScheme {
    fn min_size(self) -> usize {
        match self {
            CenteringScheme::GlobalMean | CenteringScheme::ColumnMean => 2,
            CenteringScheme::DoubleHCenter => 1,
            CenteringScheme::Unbiased => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CenteredMatrix {
    values: Array2<f64>,
    scheme: CenteringScheme,
}

impl CenteredMatrix {
    pub fn values(&self) -> ArrayView2<'_, f64> {
        self.values.view()
    }

    pub fn scheme(&self) -> CenteringScheme {
        self.scheme
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    /// `sum_ij self_ij * other_ij`, i.e. `trace(self * other^T)`.
    pub fn inner(&self, other: &CenteredMatrix) -> f64 {
        frobenius_inner(self.values.view(), other.values.view())
    }
}

pub(crate) fn frobenius_inner(a: ArrayView2<'_, f64>, b: ArrayView2<'_, f64>) -> f64 {
    match (a.as_slice(), b.as_slice()) {
        (Some(a), Some(b)) => a.iter().zip(b).map(|(u, v)| u * v).sum(),
        _ => a.iter().zip(b.iter()).map(|(u, v)| u * v).sum(),
    }
}

/// Pairwise Euclidean distances between the rows of `x`.
pub fn euclidean_distances(x: &DataMatrix) -> Result<PairwiseMatrix> {
    x.require_rows(2, "a distance matrix")?;
    let data = x.values();
    let data = data.as_standard_layout();
    let flat = data.as_slice().expect("standard layout");
    let (n, p) = (x.n(), x.p());
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        let ri = &flat[i * p..(i + 1) * p];
        for j in (i + 1)..n {
            let rj = &flat[j * p..(j + 1) * p];
            let s: f64 = ri.iter().zip(rj).map(|(a, b)| (a - b) * (a - b)).sum();
            let v = s.sqrt();
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    Ok(PairwiseMatrix {
        values: Array2::from_shape_vec((n, n), d).expect("n x n"),
        kind: PairwiseKind::Distance,
    })
}

/// Median of the strictly upper-triangular entries; midpoint of the two
/// middle values for an even count.
pub(crate) fn median_offdiagonal(d: &PairwiseMatrix) -> f64 {
    let n = d.n();
    let mut upper: Vec<f64> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            upper.push(d.values[[i, j]]);
        }
    }
    let m = upper.len();
    let mid = m / 2;
    let (_, &mut hi, _) = upper.select_nth_unstable_by(mid, f64::total_cmp);
    if m % 2 == 1 {
        hi
    } else {
        let lo = upper[..mid].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lo + hi)
    }
}

/// Gaussian kernel `exp(-d^2 / (2 sigma^2))` with `sigma` the median pairwise distance.
pub fn gaussian_kernel(x: &DataMatrix) -> Result<PairwiseMatrix> {
    let d = euclidean_distances(x)?;
    let sigma = median_offdiagonal(&d);
    if sigma <= 0.0 {
        if d.values.iter().all(|&v| v == 0.0) {
            return Err(Error::DegenerateBandwidth);
        }
        // Over half the pairs coincide; fall back to the median of the positive distances.
        let positive: Vec<f64> = d.values.iter().copied().filter(|&v| v > 0.0).collect();
        let mut sorted = positive;
        sorted.sort_by(f64::total_cmp);
        return Ok(kernel_from_distances(&d, sorted[sorted.len() / 2]));
    }
    Ok(kernel_from_distances(&d, sigma))
}

fn kernel_from_distances(d: &PairwiseMatrix, sigma: f64) -> PairwiseMatrix {
    let scale = -1.0 / (2.0 * sigma * sigma);
    PairwiseMatrix {
        values: d.values.mapv(|v| (v * v * scale).exp()),
        kind: PairwiseKind::Kernel,
    }
}

/// Centers a pairwise matrix under `scheme`.
pub fn center(m: &PairwiseMatrix, scheme: CenteringScheme) -> Result<CenteredMatrix> {
    let n = m.n();
    if n < scheme.min_size() {
        return Err(Error::Size(format!(
            "{scheme:?} centering needs n >= {}, got {n}",
            scheme.min_size()
        )));
    }
    let v = &m.values;
    let nf = n as f64;
    let row_sums: Vec<f64> = v.rows().into_iter().map(|r| r.sum()).collect();
    let total: f64 = row_sums.iter().sum();
    let values = match scheme {
        CenteringScheme::GlobalMean => {
            let mean = total / (nf * (nf - 1.0));
            Array2::from_shape_fn((n, n), |(i, j)| if i == j { 0.0 } else { v[[i, j]] - mean })
        }
        CenteringScheme::DoubleHCenter => {
            // Symmetric input, so column means equal row means.
            let means: Vec<f64> = row_sums.iter().map(|s| s / nf).collect();
            let grand = total / (nf * nf);
            Array2::from_shape_fn((n, n), |(i, j)| v[[i, j]] - means[i] - means[j] + grand)
        }
        CenteringScheme::Unbiased => {
            let a = 1.0 / (nf - 2.0);
            let b = total / ((nf - 1.0) * (nf - 2.0));
            Array2::from_shape_fn((n, n), |(i, j)| {
                if i == j {
                    0.0
                } else {
                    v[[i, j]] - a * row_sums[i] - a * row_sums[j] + b
                }
            })
        }
        CenteringScheme::ColumnMean => {
            let col_means: Vec<f64> = (0..n)
                .map(|j| (v.column(j).sum() - v[[j, j]]) / (nf - 1.0))
                .collect();
            Array2::from_shape_fn((n, n), |(i, j)| if i == j { 0.0 } else { v[[i, j]] - col_means[j] })
        }
    };
    Ok(CenteredMatrix { values, scheme })
}
