//! Evaluation of a statistic under many row permutations of `y`.
//!
//! Pairwise matrices, their centering and the neighbour ranks are computed
//! once. Permuting the rows of `y` permutes the rows and columns of every
//! matrix derived from it, so each replicate only reindexes the `y` side.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::matrix::{check_paired, DataMatrix};
use crate::pairwise::{center, euclidean_distances, gaussian_kernel, CenteringScheme, PairwiseMatrix};

use super::hhg::HhgTables;
use super::mgc::{local_map, neighbour_ranks, rows_with_ties, smoothed_maximum};
use super::Statistic;

pub(crate) enum Permuted {
    /// `scale * <cx, cy_perm> / sqrt(scale * xx * scale * yy)`.
    Inner {
        cx: Array2<f64>,
        cy: Array2<f64>,
        scale: f64,
        xx: f64,
        yy: f64,
    },
    Mgc {
        cx: Array2<f64>,
        cy: Array2<f64>,
        rx: Vec<usize>,
        ry: Vec<usize>,
        dy: Array2<f64>,
        tied: Vec<bool>,
    },
    Hhg(HhgTables),
}

fn inner_form(a: &PairwiseMatrix, b: &PairwiseMatrix, scheme: CenteringScheme, scale: f64, what: &str) -> Result<Permuted> {
    let ca = center(a, scheme)?;
    let cb = center(b, scheme)?;
    let (xx, yy) = (scale * ca.inner(&ca), scale * cb.inner(&cb));
    if (xx * yy).is_nan() || xx * yy <= 0.0 {
        return Err(Error::ZeroVariance(format!("{what} self-statistic is not positive")));
    }
    Ok(Permuted::Inner {
        cx: ca.values().to_owned(),
        cy: cb.values().to_owned(),
        scale,
        xx,
        yy,
    })
}

impl Permuted {
    /// `None` for statistics that are cheap enough to recompute directly.
    pub(crate) fn new(stat: Statistic, x: &DataMatrix, y: &DataMatrix) -> Result<Option<Self>> {
        check_paired(x, y)?;
        let nf = x.n() as f64;
        let prepared = match stat {
            Statistic::Mantel => {
                x.require_rows(2, "mantel")?;
                let (dx, dy) = (euclidean_distances(x)?, euclidean_distances(y)?);
                inner_form(&dx, &dy, CenteringScheme::GlobalMean, 1.0, "mantel")?
            }
            Statistic::Dcorr | Statistic::Udcorr => {
                let unbiased = stat == Statistic::Udcorr;
                x.require_rows(if unbiased { 4 } else { 2 }, "dcorr")?;
                let (dx, dy) = (euclidean_distances(x)?, euclidean_distances(y)?);
                if unbiased {
                    inner_form(&dx, &dy, CenteringScheme::Unbiased, 1.0 / (nf * (nf - 3.0)), "dcorr")?
                } else {
                    inner_form(&dx, &dy, CenteringScheme::DoubleHCenter, 1.0 / (nf * nf), "dcorr")?
                }
            }
            Statistic::Hsic => {
                x.require_rows(2, "hsic")?;
                let (kx, ky) = (gaussian_kernel(x)?, gaussian_kernel(y)?);
                inner_form(&kx, &ky, CenteringScheme::DoubleHCenter, 1.0 / (nf * nf), "hsic")?
            }
            Statistic::Mgc => {
                x.require_rows(4, "mgc")?;
                let (dx, dy) = (euclidean_distances(x)?, euclidean_distances(y)?);
                Permuted::Mgc {
                    cx: center(&dx, CenteringScheme::ColumnMean)?.values().to_owned(),
                    cy: center(&dy, CenteringScheme::ColumnMean)?.values().to_owned(),
                    rx: neighbour_ranks(&dx),
                    ry: neighbour_ranks(&dy),
                    tied: rows_with_ties(&dy),
                    dy: dy.values().to_owned(),
                }
            }
            Statistic::Hhg => {
                x.require_rows(2, "hhg")?;
                Permuted::Hhg(HhgTables::new(&euclidean_distances(x)?, &euclidean_distances(y)?))
            }
            _ => return Ok(None),
        };
        Ok(Some(prepared))
    }

    /// Statistic for `x` paired with the rows of `y` reordered by `order`.
    pub(crate) fn evaluate(&self, order: &[usize]) -> f64 {
        match self {
            Permuted::Inner { cx, cy, scale, xx, yy } => {
                let n = cx.nrows();
                let mut cross = 0.0;
                for (i, row) in cx.rows().into_iter().enumerate() {
                    let other = cy.row(order[i]);
                    for j in 0..n {
                        cross += row[j] * other[order[j]];
                    }
                }
                scale * cross / (xx * yy).sqrt()
            }
            Permuted::Mgc { cx, cy, rx, ry, dy, tied } => {
                let n = cx.nrows();
                let cy_perm = Array2::from_shape_fn((n, n), |(i, j)| cy[[order[i], order[j]]]);
                let mut ry_perm = vec![0; n * n];
                let mut cols: Vec<usize> = Vec::with_capacity(n);
                for i in 0..n {
                    let r = order[i];
                    if tied[r] {
                        // Ties are broken by the new column positions.
                        cols.clear();
                        cols.extend(0..n);
                        cols.sort_by(|&a, &b| dy[[r, order[a]]].total_cmp(&dy[[r, order[b]]]));
                        for (rank, &j) in cols.iter().enumerate() {
                            ry_perm[i * n + j] = rank;
                        }
                    } else {
                        for j in 0..n {
                            ry_perm[i * n + j] = ry[r * n + order[j]];
                        }
                    }
                }
                smoothed_maximum(&local_map(cx.view(), cy_perm.view(), rx, &ry_perm)).0
            }
            Permuted::Hhg(tables) => tables.evaluate(order),
        }
    }
}
