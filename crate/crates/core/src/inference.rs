//! Permutation p-values and the k-sample to independence reduction.

use ndarray::{concatenate, Array2, Axis};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{check_paired, DataMatrix};
use crate::stats::permuted::Permuted;
use crate::stats::{StatValue, Statistic};

/// Largest sample size accepted by [`exact_permutation_test`].
pub const EXACT_MAX_N: usize = 7;

/// Anything that can be evaluated on a paired sample and permutation-tested.
pub trait TestStatistic: Sync {
    fn name(&self) -> String;

    fn evaluate(&self, x: &DataMatrix, y: &DataMatrix) -> Result<StatValue>;

    /// Compare absolute values in the permutation test.
    fn two_sided(&self) -> bool {
        false
    }

    /// Optional precomputation shared by every permutation of `y`. The
    /// default re-evaluates the statistic on permuted rows.
    fn permutation_evaluator(&self, _x: &DataMatrix, _y: &DataMatrix) -> Result<Option<Box<dyn PermutationEvaluator>>> {
        Ok(None)
    }
}

/// Statistic value for a fixed `x` paired with reordered rows of a fixed `y`.
pub trait PermutationEvaluator: Sync {
    fn evaluate(&self, order: &[usize]) -> Result<f64>;
}

impl PermutationEvaluator for Permuted {
    fn evaluate(&self, order: &[usize]) -> Result<f64> {
        Ok(Permuted::evaluate(self, order))
    }
}

struct Recompute<'a, S: ?Sized> {
    stat: &'a S,
    x: &'a DataMatrix,
    y: &'a DataMatrix,
}

impl<S: TestStatistic + ?Sized> PermutationEvaluator for Recompute<'_, S> {
    fn evaluate(&self, order: &[usize]) -> Result<f64> {
        Ok(self.stat.evaluate(self.x, &self.y.select_rows(order))?.value)
    }
}

fn evaluator<'a, S: TestStatistic + ?Sized>(
    stat: &'a S,
    x: &'a DataMatrix,
    y: &'a DataMatrix,
) -> Result<Box<dyn PermutationEvaluator + 'a>> {
    Ok(match stat.permutation_evaluator(x, y)? {
        Some(fast) => fast,
        None => Box::new(Recompute { stat, x, y }),
    })
}

impl TestStatistic for Statistic {
    fn name(&self) -> String {
        Statistic::name(*self).to_string()
    }

    fn evaluate(&self, x: &DataMatrix, y: &DataMatrix) -> Result<StatValue> {
        self.compute(x, y)
    }

    fn two_sided(&self) -> bool {
        self.is_signed()
    }

    fn permutation_evaluator(&self, x: &DataMatrix, y: &DataMatrix) -> Result<Option<Box<dyn PermutationEvaluator>>> {
        Ok(Permuted::new(*self, x, y)?.map(|p| Box::new(p) as Box<dyn PermutationEvaluator>))
    }
}

/// Adapts a closure returning a plain number into a [`TestStatistic`].
pub struct FnStatistic<F> {
    name: String,
    func: F,
}

impl<F> FnStatistic<F>
where
    F: Fn(&DataMatrix, &DataMatrix) -> Result<f64> + Sync,
{
    pub fn new(name: impl Into<String>, func: F) -> Self {
        Self {
            name: name.into(),
            func,
        }
    }
}

impl<F> TestStatistic for FnStatistic<F>
where
    F: Fn(&DataMatrix, &DataMatrix) -> Result<f64> + Sync,
{
    fn name(&self) -> String {
        self.name.clone()
    }

    fn evaluate(&self, x: &DataMatrix, y: &DataMatrix) -> Result<StatValue> {
        (self.func)(x, y).map(StatValue::scalar)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic_name: String,
    pub statistic: f64,
    pub p_value: f64,
    pub n_permutations: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<(usize, usize)>,
}

fn comparable<S: TestStatistic + ?Sized>(stat: &S, value: f64) -> f64 {
    if stat.two_sided() {
        value.abs()
    } else {
        value
    }
}

/// `t >= observed`, allowing for rounding differences from summation order.
fn at_least(t: f64, observed: f64) -> bool {
    t >= observed - 1e-12 * observed.abs().max(1.0)
}

/// The permutation used by replicate `replicate` of a test seeded with `seed`.
///
/// Each replicate draws from its own ChaCha stream, so the result does not
/// depend on which worker runs it or in what order.
pub fn replicate_permutation(n: usize, seed: u64, replicate: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    order
}

/// Monte Carlo permutation test: `p = (1 + #{t_r >= t_0}) / (1 + B)`.
///
/// Rows of `y` are permuted; replicates run on the rayon pool.
pub fn permutation_test<S: TestStatistic + ?Sized>(
    stat: &S,
    x: &DataMatrix,
    y: &DataMatrix,
    n_permutations: usize,
    seed: u64,
) -> Result<TestResult> {
    check_paired(x, y)?;
    if n_permutations == 0 {
        return Err(Error::Config("n_permutations must be at least 1".into()));
    }
    let observed = stat.evaluate(x, y)?;
    let t0 = comparable(stat, observed.value);
    let n = y.n();
    let eval = evaluator(stat, x, y)?;
    let exceed = (1..=n_permutations as u64)
        .into_par_iter()
        .map(|r| {
            let t = eval.evaluate(&replicate_permutation(n, seed, r))?;
            Ok::<usize, Error>(usize::from(at_least(comparable(stat, t), t0)))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(TestResult {
        statistic_name: stat.name(),
        statistic: observed.value,
        p_value: (1 + exceed) as f64 / (1 + n_permutations) as f64,
        n_permutations,
        seed,
        scale: observed.scale,
    })
}

/// Advances `v` to the next permutation in lexicographic order.
fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Exact permutation test over all `n!` orderings of `y` (identity included),
/// `p = #{t_pi >= t_0} / n!`. Only for `n <= 7`.
pub fn exact_permutation_test<S: TestStatistic + ?Sized>(
    stat: &S,
    x: &DataMatrix,
    y: &DataMatrix,
) -> Result<TestResult> {
    check_paired(x, y)?;
    let n = x.n();
    if n > EXACT_MAX_N {
        return Err(Error::Size(format!(
            "exact permutation test supports n <= {EXACT_MAX_N}, got {n}"
        )));
    }
    let observed = stat.evaluate(x, y)?;
    let t0 = comparable(stat, observed.value);
    let eval = evaluator(stat, x, y)?;
    let mut order: Vec<usize> = (0..n).collect();
    let (mut total, mut exceed) = (0usize, 0usize);
    loop {
        let t = eval.evaluate(&order)?;
        total += 1;
        exceed += usize::from(at_least(comparable(stat, t), t0));
        if !next_permutation(&mut order) {
            break;
        }
    }
    Ok(TestResult {
        statistic_name: stat.name(),
        statistic: observed.value,
        p_value: exceed as f64 / total as f64,
        n_permutations: total,
        seed: 0,
        scale: observed.scale,
    })
}

/// Samples for a k-sample test, all with the same column count.
#[derive(Debug, Clone)]
pub struct KSampleInput {
    samples: Vec<DataMatrix>,
}

impl KSampleInput {
    pub fn new(samples: Vec<DataMatrix>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Size(format!(
                "k-sample testing needs at least 2 samples, got {}",
                samples.len()
            )));
        }
        let p = samples[0].p();
        if let Some((i, s)) = samples.iter().enumerate().find(|(_, s)| s.p() != p) {
            return Err(Error::Dimension(format!(
                "sample {i} has {} columns, expected {p}",
                s.p()
            )));
        }
        Ok(Self { samples })
    }

    pub fn k(&self) -> usize {
        self.samples.len()
    }

    pub fn total_rows(&self) -> usize {
        self.samples.iter().map(DataMatrix::n).sum()
    }

    pub fn samples(&self) -> &[DataMatrix] {
        &self.samples
    }
}

/// Stacks the samples into `x` and builds the one-hot group-label matrix `y`.
pub fn ksample_transform(input: &KSampleInput) -> Result<(DataMatrix, DataMatrix)> {
    let views: Vec<_> = input.samples.iter().map(DataMatrix::values).collect();
    let x = concatenate(Axis(0), &views).map_err(|e| Error::Dimension(e.to_string()))?;
    let mut labels = Array2::zeros((input.total_rows(), input.k()));
    let mut row = 0;
    for (group, s) in input.samples.iter().enumerate() {
        for _ in 0..s.n() {
            labels[[row, group]] = 1.0;
            row += 1;
        }
    }
    Ok((DataMatrix::new(x)?, DataMatrix::new(labels)?))
}

/// k-sample test: permutation test of independence between data and labels.
pub fn ksample_test<S: TestStatistic + ?Sized>(
    stat: &S,
    input: &KSampleInput,
    n_permutations: usize,
    seed: u64,
) -> Result<TestResult> {
    let (x, y) = ksample_transform(input)?;
    permutation_test(stat, &x, &y, n_permutations, seed)
}
