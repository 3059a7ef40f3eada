//! Monte Carlo power estimation and wall-time benchmarks.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::{permutation_test, TestStatistic};
use crate::simulations::{simulate, SimulationKind, SimulationSpec};

/// Sample size used on the dimension axis.
pub const DIMENSION_AXIS_N: usize = 100;
/// Dimension used on the sample-size axis.
pub const SAMPLE_SIZE_AXIS_P: usize = 1;

pub const DEFAULT_REPLICATES: usize = 500;
pub const DEFAULT_POWER_PERMUTATIONS: usize = 200;
pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerAxis {
    SampleSize,
    Dimension,
}

impl FromStr for PowerAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sample_size" | "sample-size" | "n" => Ok(PowerAxis::SampleSize),
            "dimension" | "p" => Ok(PowerAxis::Dimension),
            _ => Err(Error::Config(format!(
                "unknown axis '{s}'; valid axes: sample_size, dimension"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerConfig {
    pub kind: SimulationKind,
    pub axis: PowerAxis,
    pub grid: Vec<usize>,
    pub alpha: f64,
    pub replicates: usize,
    pub n_permutations: usize,
    pub kappa: f64,
    pub seed: u64,
}

impl PowerConfig {
    pub fn new(kind: SimulationKind, axis: PowerAxis, grid: Vec<usize>) -> Self {
        Self {
            kind,
            axis,
            grid,
            alpha: DEFAULT_ALPHA,
            replicates: DEFAULT_REPLICATES,
            n_permutations: DEFAULT_POWER_PERMUTATIONS,
            kappa: 1.0,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!("alpha must be in (0, 1), got {}", self.alpha)));
        }
        if self.replicates == 0 || self.n_permutations == 0 {
            return Err(Error::Config(
                "replicates and n_permutations must be at least 1".into(),
            ));
        }
        if self.grid.is_empty() {
            return Err(Error::Config("grid must not be empty".into()));
        }
        if self.grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("grid must be strictly increasing".into()));
        }
        Ok(())
    }

    fn spec_at(&self, value: usize, seed: u64) -> SimulationSpec {
        let (n, p) = match self.axis {
            PowerAxis::SampleSize => (value, SAMPLE_SIZE_AXIS_P),
            PowerAxis::Dimension => (DIMENSION_AXIS_N, value),
        };
        SimulationSpec::new(self.kind, n, p, self.kappa, seed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerCurve {
    pub statistic_name: String,
    pub sim_kind: String,
    pub axis: PowerAxis,
    pub grid: Vec<usize>,
    pub power: Vec<f64>,
    pub alpha: f64,
    pub replicates: usize,
    pub n_permutations: usize,
    pub kappa: f64,
    pub seed: u64,
}

impl PowerCurve {
    /// Binomial standard error of each power estimate.
    pub fn stderr(&self) -> Vec<f64> {
        let r = self.replicates as f64;
        self.power.iter().map(|p| (p * (1.0 - p) / r).sqrt()).collect()
    }

    /// `grid_value,power,stderr` table.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("grid_value,power,stderr\n");
        for ((g, p), se) in self.grid.iter().zip(&self.power).zip(self.stderr()) {
            writeln!(out, "{g},{p},{se}").expect("write to string");
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("power curve serializes")
    }
}

/// SplitMix64 finalizer, used to derive independent seeds from counters.
pub(crate) fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn derive_seed(seed: u64, grid_index: usize, replicate: usize, stream: u64) -> u64 {
    mix(mix(mix(seed ^ stream) ^ grid_index as u64) ^ replicate as u64)
}

/// Fraction of simulate -> permutation test trials with `p <= alpha`, per grid point.
pub fn estimate_power<S: TestStatistic + ?Sized>(stat: &S, config: &PowerConfig) -> Result<PowerCurve> {
    config.validate()?;
    let mut power = Vec::with_capacity(config.grid.len());
    for (gi, &value) in config.grid.iter().enumerate() {
        let rejections = (0..config.replicates)
            .into_par_iter()
            .map(|r| {
                let spec = config.spec_at(value, derive_seed(config.seed, gi, r, 0));
                let pair = simulate(&spec)?;
                let perm_seed = derive_seed(config.seed, gi, r, 1);
                let result = permutation_test(stat, &pair.x, &pair.y, config.n_permutations, perm_seed)?;
                Ok::<usize, Error>(usize::from(result.p_value <= config.alpha))
            })
            .try_reduce(|| 0, |a, b| Ok(a + b))?;
        power.push(rejections as f64 / config.replicates as f64);
    }
    Ok(PowerCurve {
        statistic_name: stat.name(),
        sim_kind: config.kind.name().to_string(),
        axis: config.axis,
        grid: config.grid.clone(),
        power,
        alpha: config.alpha,
        replicates: config.replicates,
        n_permutations: config.n_permutations,
        kappa: config.kappa,
        seed: config.seed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimingRow {
    pub n: usize,
    pub mean_seconds: f64,
}

/// Mean wall time per `n` on a univariate noisy linear simulation.
///
/// With `n_permutations = None` only the statistic is timed; otherwise the
/// full permutation p-value.
pub fn wall_time_bench<S: TestStatistic + ?Sized>(
    stat: &S,
    grid: &[usize],
    repetitions: usize,
    n_permutations: Option<usize>,
    seed: u64,
) -> Result<Vec<TimingRow>> {
    if repetitions == 0 {
        return Err(Error::Config("repetitions must be at least 1".into()));
    }
    if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("grid must be non-empty and increasing".into()));
    }
    grid.iter()
        .map(|&n| {
            let pair = simulate(&SimulationSpec::new(SimulationKind::Linear, n, 1, 1.0, seed))?;
            let mut total = 0.0;
            for rep in 0..repetitions {
                let start = Instant::now();
                match n_permutations {
                    None => {
                        std::hint::black_box(stat.evaluate(&pair.x, &pair.y)?);
                    }
                    Some(b) => {
                        std::hint::black_box(permutation_test(stat, &pair.x, &pair.y, b, seed ^ rep as u64)?);
                    }
                }
                total += start.elapsed().as_secs_f64();
            }
            Ok(TimingRow {
                n,
                mean_seconds: total / repetitions as f64,
            })
        })
        .collect()
}

/// Least-squares slope of `log(time)` against `log(n)`.
pub fn loglog_slope(rows: &[TimingRow]) -> f64 {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| ((r.n as f64).ln(), r.mean_seconds.ln()))
        .collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inference::FnStatistic;
    use crate::matrix::DataMatrix;
    use crate::stats::Statistic;

    #[test]
    fn constant_statistic_never_rejects() {
        let stat = FnStatistic::new("const", |_: &DataMatrix, _: &DataMatrix| Ok(1.0));
        let mut cfg = PowerConfig::new(SimulationKind::Linear, PowerAxis::SampleSize, vec![10, 20]);
        cfg.replicates = 20;
        cfg.n_permutations = 19;
        let curve = estimate_power(&stat, &cfg).unwrap();
        assert_eq!(curve.power, vec![0.0, 0.0]);
    }

    #[test]
    fn reproducible_under_fixed_seed() {
        let mut cfg = PowerConfig::new(SimulationKind::Quadratic, PowerAxis::SampleSize, vec![15]);
        cfg.replicates = 30;
        cfg.n_permutations = 39;
        cfg.seed = 4;
        let a = estimate_power(&Statistic::Dcorr, &cfg).unwrap();
        let b = estimate_power(&Statistic::Dcorr, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn csv_has_one_row_per_grid_point() {
        let curve = PowerCurve {
            statistic_name: "dcorr".into(),
            sim_kind: "linear".into(),
            axis: PowerAxis::SampleSize,
            grid: vec![10, 50, 100],
            power: vec![0.2, 0.5, 1.0],
            alpha: 0.05,
            replicates: 100,
            n_permutations: 10,
            kappa: 1.0,
            seed: 0,
        };
        let csv = curve.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "grid_value,power,stderr");
        assert_eq!(lines[2], "50,0.5,0.05");
        assert!(curve.to_json().contains("\"axis\": \"sample_size\""));
    }

    #[test]
    fn config_validation() {
        let mut cfg = PowerConfig::new(SimulationKind::Linear, PowerAxis::SampleSize, vec![50, 10]);
        assert!(cfg.validate().is_err());
        cfg.grid = vec![10];
        cfg.alpha = 1.0;
        assert!(cfg.validate().is_err());
        assert!("diagonal".parse::<PowerAxis>().is_err());
    }

    #[test]
    fn bench_single_row() {
        let rows = wall_time_bench(&Statistic::Dcorr, &[100], 1, None, 0).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].mean_seconds > 0.0);
    }

    #[test]
    fn slope_of_exact_power_law() {
        let rows: Vec<TimingRow> = [10, 20, 40]
            .iter()
            .map(|&n| TimingRow {
                n,
                mean_seconds: 1e-6 * (n as f64).powi(2),
            })
            .collect();
        assert!((loglog_slope(&rows) - 2.0).abs() < 1e-12);
    }
}
