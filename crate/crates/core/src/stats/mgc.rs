//! Multiscale graph correlation.
//!
//! Distance matrices are column-centered (diagonal excluded, then zeroed).
//! For every pair of neighbourhood sizes `(k, l)` the local correlation
//! `c^{kl}` restricts the centered entries to each row's `k` nearest
//! neighbours in `x` and `l` nearest neighbours in `y`. Neighbour ranks put
//! the diagonal zero among the candidates and break distance ties by column
//! index, so `k = 1` keeps only the self entry.
//!
//! All `n^2` local correlations come from one 2-D prefix sum over the
//! (x-rank, y-rank) grid, so the full map costs `O(n^2 log n)`.

use ndarray::{Array2, ArrayView2};

use crate::error::Result;
use crate::matrix::{check_paired, DataMatrix};
use crate::pairwise::{center, euclidean_distances, CenteredMatrix, CenteringScheme, PairwiseMatrix};

use super::StatValue;

/// Row-wise neighbour ranks, 0-based: `ranks[i * n + j]` is the position of
/// column `j` when row `i` is sorted by `(distance, column)`.
pub(crate) fn neighbour_ranks(d: &PairwiseMatrix) -> Vec<usize> {
    let n = d.n();
    let v = d.values();
    let mut ranks = vec![0; n * n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    for i in 0..n {
        order.clear();
        order.extend(0..n);
        let row = v.row(i);
        // stable sort keeps column order within ties
        order.sort_by(|&a, &b| row[a].total_cmp(&row[b]));
        for (r, &j) in order.iter().enumerate() {
            ranks[i * n + j] = r;
        }
    }
    ranks
}

/// Rows whose distances contain a repeated value (the zero diagonal included).
/// Only these rows have ranks that depend on column order.
pub(crate) fn rows_with_ties(d: &PairwiseMatrix) -> Vec<bool> {
    d.values()
        .rows()
        .into_iter()
        .map(|row| {
            let mut v = row.to_vec();
            v.sort_by(f64::total_cmp);
            v.windows(2).any(|w| w[0] == w[1])
        })
        .collect()
}

/// Local correlation map; entry `[k - 1, l - 1]` is `c^{kl}`.
pub(crate) fn local_map(vx: ArrayView2<'_, f64>, vy: ArrayView2<'_, f64>, rx: &[usize], ry: &[usize]) -> Array2<f64> {
    let n = vx.nrows();
    let mut cross = Array2::<f64>::zeros((n, n));
    let mut sxx = vec![0.0; n];
    let mut syy = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (vx[[i, j]], vy[[i, j]]);
            let (kr, lr) = (rx[i * n + j], ry[i * n + j]);
            cross[[kr, lr]] += a * b;
            sxx[kr] += a * a;
            syy[lr] += b * b;
        }
    }
    for k in 0..n {
        for l in 0..n {
            let mut v = cross[[k, l]];
            if k > 0 {
                v += cross[[k - 1, l]];
            }
            if l > 0 {
                v += cross[[k, l - 1]];
            }
            if k > 0 && l > 0 {
                v -= cross[[k - 1, l - 1]];
            }
            cross[[k, l]] = v;
        }
    }
    for k in 1..n {
        sxx[k] += sxx[k - 1];
        syy[k] += syy[k - 1];
    }
    Array2::from_shape_fn((n, n), |(k, l)| {
        let denom = sxx[k] * syy[l];
        if denom > 0.0 {
            cross[[k, l]] / denom.sqrt()
        } else {
            0.0
        }
    })
}

/// Size and best cell of the largest 4-connected region of `mask` over the
/// row-major `rows x cols` grid `values`. Size ties keep the region found
/// first; value ties keep the earliest cell.
fn largest_region(values: &[f64], mask: &[bool], cols: usize) -> (usize, usize) {
    let mut seen = vec![false; mask.len()];
    let mut stack = Vec::new();
    let (mut best_size, mut best_cell) = (0, 0);
    for start in 0..mask.len() {
        if !mask[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let (mut size, mut cell) = (0, start);
        while let Some(idx) = stack.pop() {
            size += 1;
            if values[idx] > values[cell] || (values[idx] == values[cell] && idx < cell) {
                cell = idx;
            }
            let (r, c) = (idx / cols, idx % cols);
            let neighbours = [
                (r > 0).then(|| idx - cols),
                (idx + cols < mask.len()).then(|| idx + cols),
                (c > 0).then(|| idx - 1),
                (c + 1 < cols).then(|| idx + 1),
            ];
            for next in neighbours.into_iter().flatten() {
                if mask[next] && !seen[next] {
                    seen[next] = true;
                    stack.push(next);
                }
            }
        }
        if size > best_size {
            (best_size, best_cell) = (size, cell);
        }
    }
    (best_size, best_cell)
}

/// Smoothed maximum of a local correlation map and its 1-based scale.
///
/// Entries above `max(2/n, -min negative entry)` form a binary map. When its
/// largest connected region has more than `2n` cells the statistic is the
/// largest entry inside it, otherwise the global entry `c^{nn}`.
pub fn smoothed_maximum(map: &Array2<f64>) -> (f64, (usize, usize)) {
    let (n, cols) = map.dim();
    let values = map.as_standard_layout();
    let values = values.as_slice().expect("standard layout");
    let most_negative = values.iter().copied().fold(0.0, f64::min);
    let threshold = (-most_negative).max(2.0 / n as f64);
    let mask: Vec<bool> = values.iter().map(|&c| c > threshold).collect();
    let (size, cell) = largest_region(values, &mask, cols);
    if size > 2 * n {
        (values[cell], (cell / cols + 1, cell % cols + 1))
    } else {
        (values[n * cols - 1], (n, cols))
    }
}

fn prepared(x: &DataMatrix, y: &DataMatrix) -> Result<(CenteredMatrix, CenteredMatrix, Vec<usize>, Vec<usize>)> {
    check_paired(x, y)?;
    x.require_rows(4, "mgc")?;
    let dx = euclidean_distances(x)?;
    let dy = euclidean_distances(y)?;
    Ok((
        center(&dx, CenteringScheme::ColumnMean)?,
        center(&dy, CenteringScheme::ColumnMean)?,
        neighbour_ranks(&dx),
        neighbour_ranks(&dy),
    ))
}

/// The full `n x n` local correlation map.
pub fn local_correlations(x: &DataMatrix, y: &DataMatrix) -> Result<Array2<f64>> {
    let (cx, cy, rx, ry) = prepared(x, y)?;
    Ok(local_map(cx.values(), cy.values(), &rx, &ry))
}

/// Correlation of the column-centered distance matrices without masking; equals `c^{nn}`.
pub fn column_centered_correlation(x: &DataMatrix, y: &DataMatrix) -> Result<f64> {
    check_paired(x, y)?;
    x.require_rows(2, "column-centered correlation")?;
    let cx = center(&euclidean_distances(x)?, CenteringScheme::ColumnMean)?;
    let cy = center(&euclidean_distances(y)?, CenteringScheme::ColumnMean)?;
    let denom = cx.inner(&cx) * cy.inner(&cy);
    Ok(if denom > 0.0 { cx.inner(&cy) / denom.sqrt() } else { 0.0 })
}

/// MGC statistic with its optimal scale and the local correlation map.
pub fn mgc(x: &DataMatrix, y: &DataMatrix) -> Result<StatValue> {
    let (cx, cy, rx, ry) = prepared(x, y)?;
    let map = local_map(cx.values(), cy.values(), &rx, &ry);
    let (value, scale) = smoothed_maximum(&map);
    Ok(StatValue {
        value,
        scale: Some(scale),
        local_map: Some(map),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(n: usize, p: usize, rng: &mut ChaCha8Rng) -> DataMatrix {
        DataMatrix::new(Array2::from_shape_fn((n, p), |_| rng.random_range(-1.0..1.0))).unwrap()
    }

    #[test]
    fn global_scale_matches_unmasked_correlation() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let x = random(12, 2, &mut rng);
        let y = random(12, 3, &mut rng);
        let map = local_correlations(&x, &y).unwrap();
        let global = column_centered_correlation(&x, &y).unwrap();
        assert!((map[[11, 11]] - global).abs() < 1e-10);
    }

    #[test]
    fn self_correlation_reaches_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let x = random(15, 2, &mut rng);
        let s = mgc(&x, &x).unwrap();
        assert!((s.value - 1.0).abs() < 1e-10);
        let (k, l) = s.scale.unwrap();
        assert!((1..=15).contains(&k) && (1..=15).contains(&l));
    }

    #[test]
    fn first_scale_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let x = random(8, 1, &mut rng);
        let y = random(8, 1, &mut rng);
        let map = local_correlations(&x, &y).unwrap();
        assert!(map.row(0).iter().all(|&c| c == 0.0));
        assert!(map.column(0).iter().all(|&c| c == 0.0));
    }

    #[test]
    fn map_entries_are_correlations() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let x = random(10, 2, &mut rng);
        let y = random(10, 2, &mut rng);
        let map = local_correlations(&x, &y).unwrap();
        assert!(map.iter().all(|c| (-1.0 - 1e-12..=1.0 + 1e-12).contains(c)));
    }

    #[test]
    fn small_region_falls_back_to_global() {
        let mut map = Array2::from_elem((5, 5), 0.0);
        map[[1, 1]] = 0.9;
        map[[4, 4]] = 0.3;
        assert_eq!(smoothed_maximum(&map), (0.3, (5, 5)));
    }

    #[test]
    fn large_region_uses_its_maximum() {
        // 15 connected cells > 2n = 10
        let mut map = Array2::from_elem((5, 5), 0.0);
        for k in 2..5 {
            for l in 0..5 {
                map[[k, l]] = 0.6;
            }
        }
        map[[3, 1]] = 0.8;
        map[[0, 0]] = 0.95; // isolated, ignored
        assert_eq!(smoothed_maximum(&map), (0.8, (4, 2)));
    }

    #[test]
    fn negative_entries_raise_threshold() {
        let mut map = Array2::from_elem((4, 4), 0.7);
        map[[0, 0]] = -0.75;
        // threshold 0.75 removes everything, so the global entry is used
        assert_eq!(smoothed_maximum(&map).1, (4, 4));
    }
}
