//! Independence test statistics. Every function here is pure: it never
//! permutes or resamples, inference lives in [`crate::inference`].

use std::fmt;
use std::str::FromStr;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;

pub mod correlation;
pub mod distance;
pub mod hhg;
pub mod linear;
pub mod mgc;
pub(crate) mod permuted;

pub use correlation::{average_ranks, kendall, pearson, spearman};
pub use distance::{dcorr, dcov, hsic, hsic_covariance, mantel};
pub use hhg::hhg;
pub use linear::{cca, rv};
pub use mgc::{column_centered_correlation, local_correlations, mgc, smoothed_maximum};

/// Value of a statistic. `scale` and `local_map` are only filled by MGC.
#[derive(Debug, Clone, PartialEq)]
pub struct StatValue {
    pub value: f64,
    /// Optimal `(k, l)` neighbourhood sizes, 1-based.
    pub scale: Option<(usize, usize)>,
    pub local_map: Option<Array2<f64>>,
}

impl StatValue {
    pub fn scalar(value: f64) -> Self {
        Self {
            value,
            scale: None,
            local_map: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistic {
    Pearson,
    Rv,
    Cca,
    Kendall,
    Spearman,
    Mantel,
    Hhg,
    Hsic,
    Dcorr,
    Udcorr,
    Mgc,
}

impl Statistic {
    pub const ALL: [Statistic; 11] = [
        Statistic::Pearson,
        Statistic::Rv,
        Statistic::Cca,
        Statistic::Kendall,
        Statistic::Spearman,
        Statistic::Mantel,
        Statistic::Hhg,
        Statistic::Hsic,
        Statistic::Dcorr,
        Statistic::Udcorr,
        Statistic::Mgc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Statistic::Pearson => "pearson",
            Statistic::Rv => "rv",
            Statistic::Cca => "cca",
            Statistic::Kendall => "kendall",
            Statistic::Spearman => "spearman",
            Statistic::Mantel => "mantel",
            Statistic::Hhg => "hhg",
            Statistic::Hsic => "hsic",
            Statistic::Dcorr => "dcorr",
            Statistic::Udcorr => "udcorr",
            Statistic::Mgc => "mgc",
        }
    }

    /// Statistics whose sign carries direction; permutation tests compare
    /// their absolute values.
    pub fn is_signed(self) -> bool {
        matches!(
            self,
            Statistic::Pearson | Statistic::Kendall | Statistic::Spearman | Statistic::Udcorr
        )
    }

    /// Whether the statistic only accepts one-dimensional `x` and `y`.
    pub fn is_univariate(self) -> bool {
        matches!(
            self,
            Statistic::Pearson | Statistic::Kendall | Statistic::Spearman
        )
    }

    pub fn compute(self, x: &DataMatrix, y: &DataMatrix) -> Result<StatValue> {
        match self {
            Statistic::Pearson => pearson(x, y),
            Statistic::Rv => rv(x, y),
            Statistic::Cca => cca(x, y),
            Statistic::Kendall => kendall(x, y),
            Statistic::Spearman => spearman(x, y),
            Statistic::Mantel => mantel(x, y),
            Statistic::Hhg => hhg(x, y),
            Statistic::Hsic => hsic(x, y, false),
            Statistic::Dcorr => dcorr(x, y, false),
            Statistic::Udcorr => dcorr(x, y, true),
            Statistic::Mgc => mgc(x, y),
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

pub fn statistic_names() -> Vec<&'static str> {
    Statistic::ALL.iter().map(|s| s.name()).collect()
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Statistic::ALL
            .iter()
            .copied()
            .find(|st| st.name() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown statistic '{s}'; valid names: {}",
                    statistic_names().join(", ")
                ))
            })
    }
}
