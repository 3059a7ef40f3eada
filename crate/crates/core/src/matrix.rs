//! Sample matrices: rows are observations, columns are dimensions.

use ndarray::{Array2, ArrayView1, ArrayView2, Axis};

use crate::error::{Error, Result};

/// An `n x p` matrix of finite real-valued samples.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    values: Array2<f64>,
}

impl DataMatrix {
    /// Wraps `values`, rejecting empty matrices and non-finite entries.
    pub fn new(values: Array2<f64>) -> Result<Self> {
        if values.nrows() == 0 || values.ncols() == 0 {
            return Err(Error::InvalidData(format!(
                "matrix must be non-empty, got {}x{}",
                values.nrows(),
                values.ncols()
            )));
        }
        if let Some(((i, j), v)) = values.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidData(format!(
                "non-finite entry {v} at row {i}, column {j}"
            )));
        }
        Ok(Self { values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let p = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != p) {
            return Err(Error::InvalidData("ragged rows".into()));
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        let values = Array2::from_shape_vec((n, p), flat)
            .map_err(|e| Error::InvalidData(e.to_string()))?;
        Self::new(values)
    }

    /// A single-column matrix.
    pub fn from_column(column: &[f64]) -> Result<Self> {
        let values = Array2::from_shape_vec((column.len(), 1), column.to_vec())
            .map_err(|e| Error::InvalidData(e.to_string()))?;
        Self::new(values)
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn p(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> ArrayView2<'_, f64> {
        self.values.view()
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.values.row(i)
    }

    pub fn column(&self, j: usize) -> ArrayView1<'_, f64> {
        self.values.column(j)
    }

    pub fn into_inner(self) -> Array2<f64> {
        self.values
    }

    /// Returns the matrix whose row `i` is row `order[i]` of `self`.
    pub fn select_rows(&self, order: &[usize]) -> Self {
        Self {
            values: self.values.select(Axis(0), order),
        }
    }

    pub(crate) fn require_rows(&self, min: usize, what: &str) -> Result<()> {
        if self.n() < min {
            return Err(Error::Size(format!(
                "{what} needs at least {min} observations, got {}",
                self.n()
            )));
        }
        Ok(())
    }

    pub(crate) fn require_univariate(&self, what: &str) -> Result<()> {
        if self.p() != 1 {
            return Err(Error::Dimension(format!(
                "{what} is defined for one-dimensional data, got {} columns",
                self.p()
            )));
        }
        Ok(())
    }
}

/// Checks that two samples have the same number of observations.
pub(crate) fn check_paired(x: &DataMatrix, y: &DataMatrix) -> Result<()> {
    if x.n() != y.n() {
        return Err(Error::Size(format!(
            "x has {} rows but y has {} rows",
            x.n(),
            y.n()
        )));
    }
    Ok(())
}
