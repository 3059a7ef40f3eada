//! Multivariate independence and k-sample hypothesis testing.
//!
//! Eleven dependence statistics ([`stats`]), permutation p-values and the
//! k-sample reduction ([`inference`]), twenty synthetic dependence
//! structures ([`simulations`]) and Monte Carlo power estimation
//! ([`power`]). See the crate's `examples/` directory for one runnable
//! program per capability.
//!
//! ```
//! use depstat::{permutation_test, simulate, SimulationKind, SimulationSpec, Statistic};
//!
//! let pair = simulate(&SimulationSpec::new(SimulationKind::Linear, 60, 1, 0.5, 7)).unwrap();
//! let result = permutation_test(&Statistic::Dcorr, &pair.x, &pair.y, 199, 1).unwrap();
//! assert!(result.p_value < 0.05);
//! ```

pub mod cli;
pub mod error;
pub mod inference;
pub mod io;
pub mod matrix;
pub mod pairwise;
pub mod power;
pub mod simulations;
pub mod stats;

pub use error::{Error, Result};
pub use inference::{
    exact_permutation_test, ksample_test, ksample_transform, permutation_test, FnStatistic,
    KSampleInput, TestResult, TestStatistic,
};
pub use io::{read_csv, write_result, Dataset, OutputFormat, RunConfig};
pub use matrix::DataMatrix;
pub use pairwise::{
    center, euclidean_distances, gaussian_kernel, CenteredMatrix, CenteringScheme, PairwiseKind,
    PairwiseMatrix,
};
pub use power::{estimate_power, wall_time_bench, PowerAxis, PowerConfig, PowerCurve};
pub use simulations::{list_simulations, simulate, SimulatedPair, SimulationKind, SimulationSpec};
pub use stats::{StatValue, Statistic};
