//! Command-line front end. Exit codes: 0 success, 1 runtime error, 2 validation error.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::{Error, Result};
use crate::inference::permutation_test;
use crate::io::{simulation_paths, write_matrix_csv, write_result, Dataset, OutputFormat, RunConfig};
use crate::power::{estimate_power, wall_time_bench, PowerAxis, PowerConfig};
use crate::simulations::{list_simulations, simulate, SimulationKind, SimulationSpec};
use crate::stats::Statistic;

#[derive(Debug, Parser)]
#[command(name = "depstat", version, about = "Independence and k-sample hypothesis tests")]
pub struct Cli {
    /// Worker threads for permutation replicates (default: available cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Permutation test of independence between two CSV files.
    Test {
        #[arg(long)]
        stat: Statistic,
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long, default_value_t = 1000)]
        perms: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value = "json")]
        format: OutputFormat,
        /// Input files start with a header row.
        #[arg(long)]
        header: bool,
    },
    /// Draw a simulated dataset and write `<out>_x.csv` and `<out>_y.csv`.
    Simulate {
        #[arg(long)]
        kind: SimulationKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "simulation")]
        out: String,
    },
    /// Estimate power over a grid of sample sizes or dimensions.
    Power {
        #[arg(long)]
        stat: Statistic,
        #[arg(long)]
        kind: SimulationKind,
        #[arg(long, default_value = "sample_size")]
        axis: PowerAxis,
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<usize>,
        #[arg(long, default_value_t = crate::power::DEFAULT_ALPHA)]
        alpha: f64,
        #[arg(long, default_value_t = crate::power::DEFAULT_REPLICATES)]
        replicates: usize,
        #[arg(long, default_value_t = crate::power::DEFAULT_POWER_PERMUTATIONS)]
        perms: usize,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "csv")]
        format: OutputFormat,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time statistic evaluation over a grid of sample sizes.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "dcorr")]
        stats: Vec<Statistic>,
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        /// Time full p-value computations with this many permutations.
        #[arg(long)]
        perms: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the available statistics and simulations.
    List,
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<String> {
    match out {
        Some(path) => {
            fs::write(path, text)?;
            Ok(String::new())
        }
        None => Ok(text.to_string()),
    }
}

/// Runs one command and returns what it prints to stdout.
pub fn execute(command: &Command) -> Result<String> {
    match command {
        Command::Test {
            stat,
            x,
            y,
            perms,
            seed,
            alpha,
            format,
            header,
        } => {
            let config = RunConfig {
                statistic_name: stat.name().to_string(),
                n_permutations: *perms,
                seed: *seed,
                alpha: *alpha,
                format: *format,
            };
            let stat = config.validate()?;
            let data = Dataset::from_csv(x, y, *header)?;
            let result = permutation_test(&stat, &data.x, &data.y, config.n_permutations, config.seed)?;
            Ok(write_result(&result, config.format))
        }
        Command::Simulate {
            kind,
            n,
            p,
            kappa,
            seed,
            out,
        } => {
            let pair = simulate(&SimulationSpec::new(*kind, *n, *p, *kappa, *seed))?;
            let (xp, yp) = simulation_paths(out);
            fs::write(&xp, write_matrix_csv(&pair.x))?;
            fs::write(&yp, write_matrix_csv(&pair.y))?;
            Ok(String::new())
        }
        Command::Power {
            stat,
            kind,
            axis,
            grid,
            alpha,
            replicates,
            perms,
            kappa,
            seed,
            format,
            out,
        } => {
            let config = PowerConfig {
                kind: *kind,
                axis: *axis,
                grid: grid.clone(),
                alpha: *alpha,
                replicates: *replicates,
                n_permutations: *perms,
                kappa: *kappa,
                seed: *seed,
            };
            let curve = estimate_power(stat, &config)?;
            let text = match format {
                OutputFormat::Csv => curve.to_csv(),
                OutputFormat::Json => curve.to_json() + "\n",
            };
            emit(&text, out.as_ref())
        }
        Command::Bench {
            stats,
            grid,
            reps,
            perms,
            seed,
            out,
        } => {
            let mut text = String::from("statistic,n,mean_seconds\n");
            for stat in stats {
                for row in wall_time_bench(stat, grid, *reps, *perms, *seed)? {
                    writeln!(text, "{stat},{},{}", row.n, row.mean_seconds).expect("write to string");
                }
            }
            emit(&text, out.as_ref())
        }
        Command::List => {
            let mut text = String::from("statistics:\n");
            for s in Statistic::ALL {
                writeln!(text, "  {s}").expect("write to string");
            }
            text.push_str("simulations:\n");
            for (kind, xs, ys) in list_simulations() {
                writeln!(text, "  {kind} ({xs} x {ys})").expect("write to string");
            }
            Ok(text)
        }
    }
}

fn exit_code(err: &Error) -> i32 {
    if err.is_validation() {
        2
    } else {
        1
    }
}

/// Parses `args`, runs the command, prints results, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return 2;
        }
        // Only fails if the global pool already exists, which is harmless here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match execute(&cli.command) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
