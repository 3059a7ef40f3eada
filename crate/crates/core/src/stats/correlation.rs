//! Univariate correlation coefficients: Pearson, Spearman and Kendall.

use crate::error::{Error, Result};
use crate::matrix::{check_paired, DataMatrix};

use super::StatValue;

fn centered(v: &[f64]) -> Vec<f64> {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|x| x - mean).collect()
}

pub(crate) fn pearson_slices(x: &[f64], y: &[f64]) -> Result<f64> {
    let (cx, cy) = (centered(x), centered(y));
    let sxx: f64 = cx.iter().map(|v| v * v).sum();
    let syy: f64 = cy.iter().map(|v| v * v).sum();
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroVariance("constant column".into()));
    }
    let sxy: f64 = cx.iter().zip(&cy).map(|(a, b)| a * b).sum();
    Ok(sxy / (sxx.sqrt() * syy.sqrt()))
}

fn univariate_pair(x: &DataMatrix, y: &DataMatrix, what: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    check_paired(x, y)?;
    x.require_univariate(what)?;
    y.require_univariate(what)?;
    x.require_rows(2, what)?;
    Ok((x.column(0).to_vec(), y.column(0).to_vec()))
}

/// Sample Pearson product-moment correlation of two one-dimensional samples.
pub fn pearson(x: &DataMatrix, y: &DataMatrix) -> Result<StatValue> {
    let (a, b) = univariate_pair(x, y, "pearson")?;
    pearson_slices(&a, &b).map(StatValue::scalar)
}

/// 1-based ranks with ties replaced by their average rank.
pub fn average_ranks(v: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut ranks = vec![0.0; v.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && v[order[end]] == v[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = avg;
        }
        start = end;
    }
    ranks
}

/// Spearman's rho: Pearson correlation of the average ranks.
pub fn spearman(x: &DataMatrix, y: &DataMatrix) -> Result<StatValue> {
    let (a, b) = univariate_pair(x, y, "spearman")?;
    pearson_slices(&average_ranks(&a), &average_ranks(&b)).map(StatValue::scalar)
}

fn tie_pairs(v: &[f64]) -> u64 {
    let mut sorted = v.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut pairs = 0u64;
    let mut start = 0;
    while start < sorted.len() {
        let mut end = start + 1;
        while end < sorted.len() && sorted[end] == sorted[start] {
            end += 1;
        }
        let t = (end - start) as u64;
        pairs += t * (t - 1) / 2;
        start = end;
    }
    pairs
}

/// Kendall's tau: tau-a without ties, tau-b when either variable has ties.
pub fn kendall(x: &DataMatrix, y: &DataMatrix) -> Result<StatValue> {
    let (a, b) = univariate_pair(x, y, "kendall")?;
    let n = a.len();
    let (mut concordant, mut discordant) = (0i64, 0i64);
    for i in 0..n {
        for j in (i + 1)..n {
            if a[i] == a[j] || b[i] == b[j] {
                continue;
            }
            if (a[i] < a[j]) == (b[i] < b[j]) {
                concordant += 1;
            } else {
                discordant += 1;
            }
        }
    }
    let n0 = (n * (n - 1) / 2) as f64;
    let (n1, n2) = (tie_pairs(&a) as f64, tie_pairs(&b) as f64);
    let numer = (concordant - discordant) as f64;
    if n1 == 0.0 && n2 == 0.0 {
        return Ok(StatValue::scalar(numer / n0));
    }
    let denom = (n0 - n1) * (n0 - n2);
    if denom <= 0.0 {
        return Err(Error::ZeroVariance("all values tied".into()));
    }
    Ok(StatValue::scalar(numer / denom.sqrt()))
}
