//! CSV data ingestion, result serialization and run configuration.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::inference::TestResult;
use crate::matrix::{check_paired, DataMatrix};
use crate::stats::Statistic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(Error::Config(format!("unknown format '{s}'; valid formats: json, csv"))),
        }
    }
}

/// Parses comma-separated numeric text. Rows are numbered from 1 by file line.
pub fn parse_csv(text: &str, has_header: bool) -> Result<(DataMatrix, Option<Vec<String>>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = if has_header {
        let h = reader.headers().map_err(|e| Error::Parse {
            row: 1,
            message: e.to_string(),
        })?;
        Some(h.iter().map(str::to_string).collect())
    } else {
        None
    };

    let mut values = Vec::new();
    let mut width: Option<usize> = None;
    let mut rows = 0;
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            row: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(rows + 1, |p| p.line() as usize);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        match width {
            None => width = Some(record.len()),
            Some(w) if w != record.len() => {
                return Err(Error::Parse {
                    row: line,
                    message: format!("expected {w} fields, found {}", record.len()),
                })
            }
            _ => {}
        }
        for (col, cell) in record.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                row: line,
                message: format!("non-numeric cell '{cell}' in column {}", col + 1),
            })?;
            values.push(v);
        }
        rows += 1;
    }
    let p = width.ok_or_else(|| Error::InvalidData("no data rows".into()))?;
    let m = Array2::from_shape_vec((rows, p), values).map_err(|e| Error::InvalidData(e.to_string()))?;
    Ok((DataMatrix::new(m)?, header))
}

/// Reads an `n x p` numeric matrix from a CSV file.
pub fn read_csv(path: impl AsRef<Path>, has_header: bool) -> Result<DataMatrix> {
    let text = fs::read_to_string(path)?;
    parse_csv(&text, has_header).map(|(m, _)| m)
}

/// One row per observation, shortest round-trip decimals.
pub fn write_matrix_csv(m: &DataMatrix) -> String {
    let mut out = String::new();
    for row in m.values().rows() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Serializes a test result. JSON keeps field order; CSV is one header and one data row.
pub fn write_result(result: &TestResult, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(result).expect("result serializes");
            s.push('\n');
            s
        }
        OutputFormat::Csv => {
            let (k, l) = result
                .scale
                .map_or((String::new(), String::new()), |(k, l)| (k.to_string(), l.to_string()));
            let mut s = String::from("statistic_name,statistic,p_value,n_permutations,seed,scale_k,scale_l\n");
            writeln!(
                s,
                "{},{},{},{},{},{},{}",
                result.statistic_name,
                result.statistic,
                result.p_value,
                result.n_permutations,
                result.seed,
                k,
                l
            )
            .expect("write to string");
            s
        }
    }
}

/// Parses the JSON form produced by [`write_result`].
pub fn read_result_json(text: &str) -> Result<TestResult> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        row: e.line(),
        message: e.to_string(),
    })
}

/// Paired samples loaded from disk or produced by a simulation.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub x: DataMatrix,
    pub y: DataMatrix,
    pub source: String,
    pub column_names: Option<(Vec<String>, Vec<String>)>,
}

impl Dataset {
    pub fn new(x: DataMatrix, y: DataMatrix, source: impl Into<String>) -> Result<Self> {
        check_paired(&x, &y)?;
        Ok(Self {
            x,
            y,
            source: source.into(),
            column_names: None,
        })
    }

    pub fn from_csv(x_path: &Path, y_path: &Path, has_header: bool) -> Result<Self> {
        let (x, hx) = parse_csv(&fs::read_to_string(x_path)?, has_header)?;
        let (y, hy) = parse_csv(&fs::read_to_string(y_path)?, has_header)?;
        let mut ds = Self::new(x, y, format!("{} + {}", x_path.display(), y_path.display()))?;
        ds.column_names = hx.zip(hy);
        Ok(ds)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub statistic_name: String,
    pub n_permutations: usize,
    pub seed: u64,
    pub alpha: f64,
    pub format: OutputFormat,
}

impl RunConfig {
    /// Checks every field and resolves the statistic.
    pub fn validate(&self) -> Result<Statistic> {
        let stat = self.statistic_name.parse::<Statistic>()?;
        if self.n_permutations == 0 {
            return Err(Error::Config("n_permutations must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!("alpha must be in (0, 1), got {}", self.alpha)));
        }
        Ok(stat)
    }
}

/// `<prefix>_x.csv` and `<prefix>_y.csv`.
pub fn simulation_paths(prefix: &str) -> (PathBuf, PathBuf) {
    (
        PathBuf::from(format!("{prefix}_x.csv")),
        PathBuf::from(format!("{prefix}_y.csv")),
    )
}
