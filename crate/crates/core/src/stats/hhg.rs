//! Heller-Heller-Gorfine statistic.
//!
//! For every ordered pair `(i, j)`, the remaining `n - 2` points are
//! cross-classified by whether they fall inside the ball around `x_i` of
//! radius `d(x_i, x_j)` and the ball around `y_i` of radius `d(y_i, y_j)`.
//! The statistic sums the Pearson chi-square score of every such 2x2 table.
//!
//! Counting is `O(n^2 log n)`: for a fixed centre `i` the inside/inside cell is
//! a 2-D dominance count, answered with a Fenwick tree over the `y` radii.

use crate::error::Result;
use crate::matrix::{check_paired, DataMatrix};
use crate::pairwise::{euclidean_distances, PairwiseMatrix};

use super::StatValue;

struct Fenwick {
    tree: Vec<u32>,
}

impl Fenwick {
    fn new(size: usize) -> Self {
        Self {
            tree: vec![0; size + 1],
        }
    }

    fn clear(&mut self) {
        self.tree.fill(0);
    }

    fn add(&mut self, mut idx: usize) {
        idx += 1;
        while idx < self.tree.len() {
            self.tree[idx] += 1;
            idx += idx & idx.wrapping_neg();
        }
    }

    /// Number of inserted ranks `<= idx`.
    fn prefix(&self, idx: usize) -> u32 {
        let mut idx = idx + 1;
        let mut s = 0;
        while idx > 0 {
            s += self.tree[idx];
            idx -= idx & idx.wrapping_neg();
        }
        s
    }
}

/// Chi-square score of one cross-classification table; zero when a margin is empty.
pub(crate) fn table_score(n_rest: f64, a11: f64, a12: f64, a21: f64, a22: f64) -> f64 {
    let (r1, r2) = (a11 + a12, a21 + a22);
    let (c1, c2) = (a11 + a21, a12 + a22);
    let margins = r1 * r2 * c1 * c2;
    if margins == 0.0 {
        return 0.0;
    }
    let det = a12 * a21 - a11 * a22;
    n_rest * det * det / margins
}

/// For each entry, the number of entries `<=` it (itself included), plus
/// dense ranks for use as Fenwick indices.
fn le_counts_and_ranks(v: &[f64]) -> (Vec<usize>, Vec<usize>) {
    let m = v.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut counts = vec![0; m];
    let mut ranks = vec![0; m];
    let mut start = 0;
    let mut dense = 0;
    while start < m {
        let mut end = start + 1;
        while end < m && v[order[end]] == v[order[start]] {
            end += 1;
        }
        for &k in &order[start..end] {
            counts[k] = end;
            ranks[k] = dense;
        }
        dense += 1;
        start = end;
    }
    (counts, ranks)
}

/// Per-centre counting tables. `x` tables are indexed by the centre, `y`
/// tables by the original row, so a permutation of `y` only reindexes them.
pub(crate) struct HhgTables {
    n: usize,
    /// For centre `i`, the other points sorted by distance to `x_i`.
    x_sorted: Vec<usize>,
    /// `le_x[i * n + k]`: points other than `i` at least as close to `x_i` as `x_k`.
    le_x: Vec<usize>,
    le_y: Vec<usize>,
    rank_y: Vec<usize>,
}

/// Index `k` skipping the centre `i`, for rows of `n - 1` entries.
fn slot(i: usize, k: usize) -> usize {
    if k < i {
        k
    } else {
        k - 1
    }
}

fn row_tables(d: &PairwiseMatrix) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let n = d.n();
    let v = d.values();
    let m = n - 1;
    let mut le = vec![0; n * n];
    let mut ranks = vec![0; n * n];
    let mut sorted = Vec::with_capacity(n * m);
    let mut rest = vec![0.0; m];
    for i in 0..n {
        for k in (0..n).filter(|&k| k != i) {
            rest[slot(i, k)] = v[[i, k]];
        }
        let (counts, dense) = le_counts_and_ranks(&rest);
        let mut order: Vec<usize> = (0..n).filter(|&k| k != i).collect();
        order.sort_by(|&a, &b| rest[slot(i, a)].total_cmp(&rest[slot(i, b)]));
        sorted.extend(order);
        for k in (0..n).filter(|&k| k != i) {
            le[i * n + k] = counts[slot(i, k)];
            ranks[i * n + k] = dense[slot(i, k)];
        }
    }
    (sorted, le, ranks)
}

impl HhgTables {
    pub(crate) fn new(dx: &PairwiseMatrix, dy: &PairwiseMatrix) -> Self {
        let (x_sorted, le_x, _) = row_tables(dx);
        let (_, le_y, rank_y) = row_tables(dy);
        Self {
            n: dx.n(),
            x_sorted,
            le_x,
            le_y,
            rank_y,
        }
    }

    /// Statistic for `x` paired with the rows of `y` reordered by `order`.
    pub(crate) fn evaluate(&self, order: &[usize]) -> f64 {
        let n = self.n;
        let m = n - 1;
        let n_rest = (n - 2) as f64;
        let mut fenwick = Fenwick::new(m);
        let mut both = vec![0usize; n];
        let mut total = 0.0;
        for i in 0..n {
            let r = order[i];
            let ry = &self.rank_y[r * n..(r + 1) * n];
            let sorted = &self.x_sorted[i * m..(i + 1) * m];
            fenwick.clear();
            let mut start = 0;
            while start < m {
                // le_x of the group's first member is the group's end position.
                let end = self.le_x[i * n + sorted[start]];
                for &k in &sorted[start..end] {
                    fenwick.add(ry[order[k]]);
                }
                for &k in &sorted[start..end] {
                    both[k] = fenwick.prefix(ry[order[k]]) as usize;
                }
                start = end;
            }
            for k in (0..n).filter(|&k| k != i) {
                // Remove point k itself from every count.
                let row1 = (self.le_x[i * n + k] - 1) as f64;
                let col1 = (self.le_y[r * n + order[k]] - 1) as f64;
                let a11 = (both[k] - 1) as f64;
                let a12 = row1 - a11;
                let a21 = col1 - a11;
                let a22 = n_rest - row1 - col1 + a11;
                total += table_score(n_rest, a11, a12, a21, a22);
            }
        }
        total
    }
}

/// HHG statistic `sum_{i != j} S(i, j)` on Euclidean distances.
pub fn hhg(x: &DataMatrix, y: &DataMatrix) -> Result<StatValue> {
    check_paired(x, y)?;
    x.require_rows(2, "hhg")?;
    let tables = HhgTables::new(&euclidean_distances(x)?, &euclidean_distances(y)?);
    let identity: Vec<usize> = (0..x.n()).collect();
    Ok(StatValue::scalar(tables.evaluate(&identity)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn triple_loop(x: &DataMatrix, y: &DataMatrix) -> f64 {
        let n = x.n();
        let dx = euclidean_distances(x).unwrap();
        let dy = euclidean_distances(y).unwrap();
        let (dx, dy) = (dx.values(), dy.values());
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let mut t = [[0.0; 2]; 2];
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    let r = usize::from(dx[[i, k]] > dx[[i, j]]);
                    let c = usize::from(dy[[i, k]] > dy[[i, j]]);
                    t[r][c] += 1.0;
                }
                total += table_score((n - 2) as f64, t[0][0], t[0][1], t[1][0], t[1][1]);
            }
        }
        total
    }

    #[test]
    fn three_points_is_zero() {
        let x = DataMatrix::from_column(&[0.0, 1.0, 3.0]).unwrap();
        let y = DataMatrix::from_column(&[2.0, -1.0, 0.5]).unwrap();
        assert_eq!(hhg(&x, &y).unwrap().value, 0.0);
    }

    #[test]
    fn matches_triple_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in [4, 5, 9, 14] {
            let x = DataMatrix::new(Array2::from_shape_fn((n, 2), |_| rng.random_range(-1.0..1.0)))
                .unwrap();
            let y = DataMatrix::new(Array2::from_shape_fn((n, 1), |_| rng.random_range(-1.0..1.0)))
                .unwrap();
            let fast = hhg(&x, &y).unwrap().value;
            let slow = triple_loop(&x, &y);
            assert!((fast - slow).abs() <= 1e-10 * slow.abs().max(1.0), "{fast} vs {slow}");
        }
    }

    #[test]
    fn matches_triple_loop_with_tied_distances() {
        // Integer grid data produces many equal radii.
        let x = DataMatrix::from_column(&[0.0, 1.0, 2.0, 1.0, 3.0, 0.0, 2.0]).unwrap();
        let y = DataMatrix::from_column(&[1.0, 1.0, 0.0, 2.0, 2.0, 0.0, 1.0]).unwrap();
        let fast = hhg(&x, &y).unwrap().value;
        assert!((fast - triple_loop(&x, &y)).abs() < 1e-10);
    }
}
