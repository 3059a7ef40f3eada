//! Brute-force reference implementations shared by the integration tests.
//!
//! Everything here works on plain `Vec`s and follows the textbook formulas
//! directly (explicit centering matrices, pair enumeration, triple loops), so
//! it shares no code path with the library.
#![allow(dead_code, clippy::needless_range_loop)]

use depstat::DataMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type Mat = Vec<Vec<f64>>;

pub fn rows(m: &DataMatrix) -> Mat {
    (0..m.n()).map(|i| m.row(i).to_vec()).collect()
}

pub fn column(m: &DataMatrix, j: usize) -> Vec<f64> {
    m.column(j).to_vec()
}

pub fn normal_matrix(rng: &mut ChaCha8Rng, n: usize, p: usize) -> DataMatrix {
    let data: Mat = (0..n)
        .map(|_| (0..p).map(|_| rng.sample(StandardNormal)).collect())
        .collect();
    DataMatrix::from_rows(&data).unwrap()
}

pub fn uniform_matrix(rng: &mut ChaCha8Rng, n: usize, p: usize) -> DataMatrix {
    let data: Mat = (0..n)
        .map(|_| (0..p).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    DataMatrix::from_rows(&data).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `|a - b| <= tol * max(|a|, |b|)`, with a floor for values that are both ~0.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-4)
}

// ---------------------------------------------------------------- matrices

fn zeros(r: usize, c: usize) -> Mat {
    vec![vec![0.0; c]; r]
}

fn matmul(a: &Mat, b: &Mat) -> Mat {
    let (r, k, c) = (a.len(), b.len(), b[0].len());
    let mut out = zeros(r, c);
    for i in 0..r {
        for j in 0..c {
            for t in 0..k {
                out[i][j] += a[i][t] * b[t][j];
            }
        }
    }
    out
}

fn transpose(a: &Mat) -> Mat {
    let (r, c) = (a.len(), a[0].len());
    (0..c).map(|j| (0..r).map(|i| a[i][j]).collect()).collect()
}

fn trace(a: &Mat) -> f64 {
    (0..a.len()).map(|i| a[i][i]).sum()
}

fn centering(n: usize) -> Mat {
    let nf = n as f64;
    (0..n)
        .map(|i| (0..n).map(|j| f64::from(u8::from(i == j)) - 1.0 / nf).collect())
        .collect()
}

pub fn distances(x: &Mat) -> Mat {
    let n = x.len();
    let mut d = zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let s: f64 = x[i].iter().zip(&x[j]).map(|(a, b)| (a - b).powi(2)).sum();
            d[i][j] = s.sqrt();
        }
    }
    d
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = v.len();
    if m % 2 == 1 {
        v[m / 2]
    } else {
        0.5 * (v[m / 2 - 1] + v[m / 2])
    }
}

pub fn gaussian_kernel(x: &Mat) -> Mat {
    let d = distances(x);
    let n = d.len();
    let mut upper = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            upper.push(d[i][j]);
        }
    }
    let sigma = median(upper);
    d.iter()
        .map(|row| row.iter().map(|v| (-v * v / (2.0 * sigma * sigma)).exp()).collect())
        .collect()
}

// ------------------------------------------------------- scalar statistics

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let (mx, my) = (mean(x), mean(y));
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

/// Mid-ranks by counting: `1 + #{smaller} + (#{equal} - 1) / 2`.
pub fn ranks(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|&a| {
            let less = v.iter().filter(|&&b| b < a).count() as f64;
            let equal = v.iter().filter(|&&b| b == a).count() as f64;
            1.0 + less + (equal - 1.0) / 2.0
        })
        .collect()
}

pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    pearson(&ranks(x), &ranks(y))
}

/// -1, 0 or 1 (`f64::signum` maps 0 to 1).
fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Kendall tau-b from explicit pair enumeration.
pub fn kendall(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let (mut conc, mut disc, mut tied_x, mut tied_y) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        for j in (i + 1)..n {
            let s = sign(x[i] - x[j]) * sign(y[i] - y[j]);
            if x[i] == x[j] {
                tied_x += 1.0;
            }
            if y[i] == y[j] {
                tied_y += 1.0;
            }
            if s > 0.0 {
                conc += 1.0;
            } else if s < 0.0 {
                disc += 1.0;
            }
        }
    }
    let n0 = (n * (n - 1) / 2) as f64;
    (conc - disc) / ((n0 - tied_x) * (n0 - tied_y)).sqrt()
}

/// Kendall tau-a: `(concordant - discordant) / C(n, 2)`.
pub fn kendall_tau_a(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            s += sign(x[i] - x[j]) * sign(y[i] - y[j]);
        }
    }
    s / (n * (n - 1) / 2) as f64
}

// ---------------------------------------------------- covariance-based

fn centered_data(x: &Mat) -> Mat {
    let p = x[0].len();
    let means: Vec<f64> = (0..p).map(|j| mean(&x.iter().map(|r| r[j]).collect::<Vec<_>>())).collect();
    x.iter()
        .map(|r| r.iter().zip(&means).map(|(v, m)| v - m).collect())
        .collect()
}

fn cross_cov(a: &Mat, b: &Mat) -> Mat {
    matmul(&transpose(a), b)
}

pub fn rv(x: &Mat, y: &Mat) -> f64 {
    let (cx, cy) = (centered_data(x), centered_data(y));
    let sxy = cross_cov(&cx, &cy);
    let syx = transpose(&sxy);
    let sxx = cross_cov(&cx, &cx);
    let syy = cross_cov(&cy, &cy);
    trace(&matmul(&sxy, &syx)) / (trace(&matmul(&sxx, &sxx)) * trace(&matmul(&syy, &syy))).sqrt()
}

fn cholesky(a: &Mat) -> Mat {
    let p = a.len();
    let mut l = zeros(p, p);
    for i in 0..p {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                l[i][j] = (a[i][i] - s).sqrt();
            } else {
                l[i][j] = (a[i][j] - s) / l[j][j];
            }
        }
    }
    l
}

/// Inverse of a lower-triangular matrix by forward substitution.
fn lower_inverse(l: &Mat) -> Mat {
    let p = l.len();
    let mut inv = zeros(p, p);
    for c in 0..p {
        for i in 0..p {
            let rhs = f64::from(u8::from(i == c));
            let s: f64 = (0..i).map(|k| l[i][k] * inv[k][c]).sum();
            inv[i][c] = (rhs - s) / l[i][i];
        }
    }
    inv
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
fn jacobi_eigenvalues(mut a: Mat) -> Vec<f64> {
    let p = a.len();
    for _ in 0..100 {
        let off: f64 = (0..p)
            .flat_map(|i| (0..p).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for r in 0..p {
            for c in (r + 1)..p {
                if a[r][c].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[c][c] - a[r][r]) / (2.0 * a[r][c]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..p {
                    let (akr, akc) = (a[k][r], a[k][c]);
                    a[k][r] = cs * akr - sn * akc;
                    a[k][c] = sn * akr + cs * akc;
                }
                for k in 0..p {
                    let (ark, ack) = (a[r][k], a[c][k]);
                    a[r][k] = cs * ark - sn * ack;
                    a[c][k] = sn * ark + cs * ack;
                }
            }
        }
    }
    (0..p).map(|i| a[i][i]).collect()
}

/// First canonical correlation via `M = Lx^-1 Sxy Ly^-T`, the square root of
/// the top eigenvalue of `M M^T`.
pub fn cca(x: &Mat, y: &Mat) -> f64 {
    let (cx, cy) = (centered_data(x), centered_data(y));
    let lx = lower_inverse(&cholesky(&cross_cov(&cx, &cx)));
    let ly = lower_inverse(&cholesky(&cross_cov(&cy, &cy)));
    let m = matmul(&matmul(&lx, &cross_cov(&cx, &cy)), &transpose(&ly));
    let top = jacobi_eigenvalues(matmul(&m, &transpose(&m)))
        .into_iter()
        .fold(0.0, f64::max);
    top.sqrt().min(1.0)
}

// -------------------------------------------------- distance and kernel

pub fn mantel(x: &Mat, y: &Mat) -> f64 {
    let (dx, dy) = (distances(x), distances(y));
    let n = dx.len();
    let off_mean = |d: &Mat| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += d[i][j];
                }
            }
        }
        s / (n * (n - 1)) as f64
    };
    let (mx, my) = (off_mean(&dx), off_mean(&dy));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let (a, b) = (dx[i][j] - mx, dy[i][j] - my);
                sxy += a * b;
                sxx += a * a;
                syy += b * b;
            }
        }
    }
    sxy / (sxx * syy).sqrt()
}

/// `(1/n^2) tr(A H B H)`.
pub fn biased_cov(a: &Mat, b: &Mat) -> f64 {
    let n = a.len();
    let h = centering(n);
    trace(&matmul(&matmul(&matmul(a, &h), b), &h)) / (n * n) as f64
}

/// Four-term U-statistic: `[sum_{i!=j} a_ij b_ij + a.. b.. / ((n-1)(n-2))
/// - 2/(n-2) sum_i a_i. b_i.] / (n(n-3))`, diagonals excluded throughout.
pub fn unbiased_cov(a: &Mat, b: &Mat) -> f64 {
    let n = a.len();
    let nf = n as f64;
    let row = |m: &Mat, i: usize| -> f64 { (0..n).filter(|&j| j != i).map(|j| m[i][j]).sum() };
    let (mut cross, mut ta, mut tb, mut rows) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                cross += a[i][j] * b[i][j];
                ta += a[i][j];
                tb += b[i][j];
            }
        }
        rows += row(a, i) * row(b, i);
    }
    (cross + ta * tb / ((nf - 1.0) * (nf - 2.0)) - 2.0 * rows / (nf - 2.0)) / (nf * (nf - 3.0))
}

pub fn dcov(x: &Mat, y: &Mat, unbiased: bool) -> f64 {
    let (dx, dy) = (distances(x), distances(y));
    if unbiased {
        unbiased_cov(&dx, &dy)
    } else {
        biased_cov(&dx, &dy)
    }
}

pub fn dcorr(x: &Mat, y: &Mat, unbiased: bool) -> f64 {
    let (dx, dy) = (distances(x), distances(y));
    let cov = if unbiased { unbiased_cov } else { biased_cov };
    cov(&dx, &dy) / (cov(&dx, &dx) * cov(&dy, &dy)).sqrt()
}

pub fn hsic(x: &Mat, y: &Mat) -> f64 {
    let (kx, ky) = (gaussian_kernel(x), gaussian_kernel(y));
    biased_cov(&kx, &ky) / (biased_cov(&kx, &kx) * biased_cov(&ky, &ky)).sqrt()
}

// ------------------------------------------------------------------ HHG

pub fn hhg(x: &Mat, y: &Mat) -> f64 {
    let (dx, dy) = (distances(x), distances(y));
    let n = dx.len();
    let m = (n - 2) as f64;
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (mut a11, mut a12, mut a21, mut a22): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let inside_x = dx[i][k] <= dx[i][j];
                let inside_y = dy[i][k] <= dy[i][j];
                match (inside_x, inside_y) {
                    (true, true) => a11 += 1.0,
                    (true, false) => a12 += 1.0,
                    (false, true) => a21 += 1.0,
                    (false, false) => a22 += 1.0,
                }
            }
            let margins = (a11 + a12) * (a21 + a22) * (a11 + a21) * (a12 + a22);
            if margins > 0.0 {
                total += m * (a12 * a21 - a11 * a22).powi(2) / margins;
            }
        }
    }
    total
}

// ------------------------------------------------------------------ MGC

/// Column-centered distances: each column minus its off-diagonal mean, zero diagonal.
pub fn column_centered(d: &Mat) -> Mat {
    let n = d.len();
    let means: Vec<f64> = (0..n)
        .map(|j| (0..n).filter(|&i| i != j).map(|i| d[i][j]).sum::<f64>() / (n - 1) as f64)
        .collect();
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 0.0 } else { d[i][j] - means[j] }).collect())
        .collect()
}

/// 1 when `x_j` is among the `k` nearest neighbours of `x_i` (self included,
/// distance ties broken by index).
fn knn_mask(d: &Mat, k: usize) -> Mat {
    let n = d.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let closer = (0..n)
                        .filter(|&t| d[i][t] < d[i][j] || (d[i][t] == d[i][j] && t < j))
                        .count();
                    f64::from(u8::from(closer < k))
                })
                .collect()
        })
        .collect()
}

fn masked_correlation(a: &Mat, b: &Mat) -> f64 {
    let n = a.len();
    let (mut ab, mut aa, mut bb) = (0.0, 0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            ab += a[i][j] * b[i][j];
            aa += a[i][j] * a[i][j];
            bb += b[i][j] * b[i][j];
        }
    }
    if aa * bb > 0.0 {
        ab / (aa * bb).sqrt()
    } else {
        0.0
    }
}

/// Every `c^{kl}` recomputed from explicit masks; `map[k-1][l-1]`.
pub fn local_map(x: &Mat, y: &Mat) -> Mat {
    let (dx, dy) = (distances(x), distances(y));
    let (cx, cy) = (column_centered(&dx), column_centered(&dy));
    let n = dx.len();
    let apply = |c: &Mat, g: &Mat| -> Mat {
        (0..n).map(|i| (0..n).map(|j| c[i][j] * g[i][j]).collect()).collect()
    };
    let ax: Vec<Mat> = (1..=n).map(|k| apply(&cx, &knn_mask(&dx, k))).collect();
    let by: Vec<Mat> = (1..=n).map(|l| apply(&cy, &knn_mask(&dy, l))).collect();
    (0..n)
        .map(|k| (0..n).map(|l| masked_correlation(&ax[k], &by[l])).collect())
        .collect()
}

fn find(parent: &mut [usize], mut a: usize) -> usize {
    while parent[a] != a {
        parent[a] = parent[parent[a]];
        a = parent[a];
    }
    a
}

/// Thresholded largest-component maximum, via union-find. Size ties go to the
/// component containing the earliest row-major cell; value ties to the
/// earliest cell.
pub fn smooth(map: &Mat) -> (f64, (usize, usize)) {
    let n = map.len();
    let most_negative = map.iter().flatten().copied().fold(0.0, f64::min);
    let tau = (2.0 / n as f64).max(-most_negative);
    let on = |i: usize, j: usize| map[i][j] > tau;
    let mut parent: Vec<usize> = (0..n * n).collect();
    for i in 0..n {
        for j in 0..n {
            if !on(i, j) {
                continue;
            }
            if i + 1 < n && on(i + 1, j) {
                let (a, b) = (find(&mut parent, i * n + j), find(&mut parent, (i + 1) * n + j));
                parent[a.max(b)] = a.min(b);
            }
            if j + 1 < n && on(i, j + 1) {
                let (a, b) = (find(&mut parent, i * n + j), find(&mut parent, i * n + j + 1));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut size = vec![0usize; n * n];
    let mut first = vec![usize::MAX; n * n];
    for c in 0..n * n {
        if on(c / n, c % n) {
            let r = find(&mut parent, c);
            size[r] += 1;
            first[r] = first[r].min(c);
        }
    }
    let best_root = (0..n * n)
        .filter(|&r| size[r] > 0)
        .max_by(|&a, &b| size[a].cmp(&size[b]).then(first[b].cmp(&first[a])));
    match best_root {
        Some(root) if size[root] > 2 * n => {
            let mut best = (f64::NEG_INFINITY, (0, 0));
            for c in 0..n * n {
                if on(c / n, c % n) && find(&mut parent, c) == root && map[c / n][c % n] > best.0 {
                    best = (map[c / n][c % n], (c / n + 1, c % n + 1));
                }
            }
            best
        }
        _ => (map[n - 1][n - 1], (n, n)),
    }
}

pub fn mgc(x: &Mat, y: &Mat) -> (f64, (usize, usize)) {
    smooth(&local_map(x, y))
}

/// Unmasked correlation of the column-centered distance matrices.
pub fn column_centered_global(x: &Mat, y: &Mat) -> f64 {
    let (cx, cy) = (column_centered(&distances(x)), column_centered(&distances(y)));
    masked_correlation(&cx, &cy)
}
