//! Twenty seeded synthetic dependence structures.
//!
//! Every generator draws from a ChaCha8 stream seeded with the spec's seed,
//! in a fixed order: the `X` block first (row-major), then auxiliary
//! variables (`U`, `V`, ...), then the noise `eps`. Uniform draws are
//! `low + (high - low) * u` with `u` in `[0, 1)`, Bernoulli(0.5) draws are
//! `u < 0.5` mapped to `{0, 1}`, normal draws use the Ziggurat sampler of
//! `rand_distr::StandardNormal`.
//!
//! The weight vector is `w_d = 1 / d` for `d = 1..=p`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SimulationKind {
    Linear,
    Exponential,
    Cubic,
    JointNormal,
    StepFunction,
    Quadratic,
    WShape,
    Spiral,
    UncorrelatedBernoulli,
    Logarithmic,
    FourthRoot,
    SinePeriod4Pi,
    SinePeriod16Pi,
    Square,
    Diamond,
    TwoParabolas,
    Circle,
    Ellipse,
    MultiplicativeNoise,
    MultimodalIndependence,
}

/// Dimension of one side of a simulation: a scalar or a `p`-vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Signature {
    Scalar,
    Vector,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Signature::Scalar => "R",
            Signature::Vector => "R^p",
        })
    }
}

impl SimulationKind {
    pub const ALL: [SimulationKind; 20] = [
        SimulationKind::Linear,
        SimulationKind::Exponential,
        SimulationKind::Cubic,
        SimulationKind::JointNormal,
        SimulationKind::StepFunction,
        SimulationKind::Quadratic,
        SimulationKind::WShape,
        SimulationKind::Spiral,
        SimulationKind::UncorrelatedBernoulli,
        SimulationKind::Logarithmic,
        SimulationKind::FourthRoot,
        SimulationKind::SinePeriod4Pi,
        SimulationKind::SinePeriod16Pi,
        SimulationKind::Square,
        SimulationKind::Diamond,
        SimulationKind::TwoParabolas,
        SimulationKind::Circle,
        SimulationKind::Ellipse,
        SimulationKind::MultiplicativeNoise,
        SimulationKind::MultimodalIndependence,
    ];

    pub fn name(self) -> &'static str {
        use SimulationKind::*;
        match self {
            Linear => "linear",
            Exponential => "exponential",
            Cubic => "cubic",
            JointNormal => "joint_normal",
            StepFunction => "step_function",
            Quadratic => "quadratic",
            WShape => "w_shape",
            Spiral => "spiral",
            UncorrelatedBernoulli => "uncorrelated_bernoulli",
            Logarithmic => "logarithmic",
            FourthRoot => "fourth_root",
            SinePeriod4Pi => "sine_4pi",
            SinePeriod16Pi => "sine_16pi",
            Square => "square",
            Diamond => "diamond",
            TwoParabolas => "two_parabolas",
            Circle => "circle",
            Ellipse => "ellipse",
            MultiplicativeNoise => "multiplicative_noise",
            MultimodalIndependence => "multimodal_independence",
        }
    }

    /// `(x, y)` dimension signature.
    pub fn signature(self) -> (Signature, Signature) {
        use SimulationKind::*;
        let y = match self {
            JointNormal | Logarithmic | SinePeriod4Pi | SinePeriod16Pi | Square | Diamond
            | MultiplicativeNoise => Signature::Vector,
            _ => Signature::Scalar,
        };
        (Signature::Vector, y)
    }

    /// Kinds whose `y` is a deterministic function of `x` when `kappa = 0`.
    pub fn is_noiseless_functional(self) -> bool {
        use SimulationKind::*;
        matches!(self, Linear | Exponential | Cubic | Quadratic | FourthRoot)
    }
}

impl fmt::Display for SimulationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

pub fn simulation_names() -> Vec<&'static str> {
    SimulationKind::ALL.iter().map(|k| k.name()).collect()
}

impl FromStr for SimulationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SimulationKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                Error::Spec(format!(
                    "unknown simulation '{s}'; valid names: {}",
                    simulation_names().join(", ")
                ))
            })
    }
}

/// `(kind, x signature, y signature)` for all twenty generators.
pub fn list_simulations() -> Vec<(SimulationKind, Signature, Signature)> {
    SimulationKind::ALL
        .iter()
        .map(|&k| {
            let (x, y) = k.signature();
            (k, x, y)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationSpec {
    pub kind: SimulationKind,
    pub n: usize,
    pub p: usize,
    /// Noise level.
    pub kappa: f64,
    pub seed: u64,
}

impl SimulationSpec {
    pub fn new(kind: SimulationKind, n: usize, p: usize, kappa: f64, seed: u64) -> Self {
        Self {
            kind,
            n,
            p,
            kappa,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::Spec(format!("n must be at least 3, got {}", self.n)));
        }
        if self.p < 1 {
            return Err(Error::Spec("p must be at least 1".into()));
        }
        if !(self.kappa.is_finite() && self.kappa >= 0.0) {
            return Err(Error::Spec(format!(
                "kappa must be finite and non-negative, got {}",
                self.kappa
            )));
        }
        Ok(())
    }

    /// `w_d = 1/d`.
    pub fn weights(&self) -> Vec<f64> {
        weights(self.p)
    }
}

pub fn weights(p: usize) -> Vec<f64> {
    (1..=p).map(|d| 1.0 / d as f64).collect()
}

#[derive(Debug, Clone)]
pub struct SimulatedPair {
    pub x: DataMatrix,
    pub y: DataMatrix,
    pub spec: SimulationSpec,
}

struct Draws {
    rng: ChaCha8Rng,
}

impl Draws {
    fn uniform(&mut self, low: f64, high: f64) -> f64 {
        low + (high - low) * self.rng.random::<f64>()
    }

    fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    fn bernoulli(&mut self) -> f64 {
        if self.rng.random::<f64>() < 0.5 {
            1.0
        } else {
            0.0
        }
    }

    fn uniform_block(&mut self, n: usize, p: usize, low: f64, high: f64) -> Array2<f64> {
        Array2::from_shape_simple_fn((n, p), || self.uniform(low, high))
    }

    fn normal_block(&mut self, n: usize, p: usize) -> Array2<f64> {
        Array2::from_shape_simple_fn((n, p), || self.normal())
    }

    fn bernoulli_block(&mut self, n: usize, p: usize) -> Array2<f64> {
        Array2::from_shape_simple_fn((n, p), || self.bernoulli())
    }

    fn uniform_vec(&mut self, n: usize, low: f64, high: f64) -> Vec<f64> {
        (0..n).map(|_| self.uniform(low, high)).collect()
    }

    fn normal_vec(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.normal()).collect()
    }

    fn bernoulli_vec(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.bernoulli()).collect()
    }
}

fn project(x: &Array2<f64>, w: &[f64]) -> Vec<f64> {
    x.rows()
        .into_iter()
        .map(|r| r.iter().zip(w).map(|(a, b)| a * b).sum())
        .collect()
}

fn column(v: Vec<f64>) -> Array2<f64> {
    let n = v.len();
    Array2::from_shape_vec((n, 1), v).expect("n x 1")
}

/// `y = f(w^T x) + scale * eps` with `x ~ U(low, high)^p`, `eps ~ N(0, 1)`.
fn functional(
    d: &mut Draws,
    spec: &SimulationSpec,
    low: f64,
    high: f64,
    noise_scale: f64,
    f: impl Fn(f64) -> f64,
) -> (Array2<f64>, Array2<f64>) {
    let x = d.uniform_block(spec.n, spec.p, low, high);
    let eps = d.normal_vec(spec.n);
    let y = project(&x, &spec.weights())
        .into_iter()
        .zip(eps)
        .map(|(t, e)| f(t) + noise_scale * e)
        .collect();
    (x, column(y))
}

fn joint_normal(d: &mut Draws, spec: &SimulationSpec) -> Result<(Array2<f64>, Array2<f64>)> {
    let (n, p) = (spec.n, spec.p);
    let rho = 1.0 / (2.0 * p as f64);
    let sigma = DMatrix::from_fn(2 * p, 2 * p, |i, j| {
        let (bi, bj) = (i / p, j / p);
        match (bi, bj) {
            (0, 0) => f64::from(u8::from(i == j)),
            (1, 1) => {
                if i == j {
                    1.0 + 0.5 * spec.kappa
                } else {
                    0.0
                }
            }
            _ => rho,
        }
    });
    let chol = sigma
        .cholesky()
        .ok_or_else(|| Error::Spec("joint normal covariance is not positive definite".into()))?;
    let l = chol.l();
    let z = d.normal_block(n, 2 * p);
    let mut x = Array2::zeros((n, p));
    let mut y = Array2::zeros((n, p));
    for i in 0..n {
        for a in 0..2 * p {
            let v: f64 = (0..=a).map(|b| l[(a, b)] * z[[i, b]]).sum();
            if a < p {
                x[[i, a]] = v;
            } else {
                y[[i, a - p]] = v;
            }
        }
    }
    Ok((x, y))
}

fn rotated_square(d: &mut Draws, spec: &SimulationSpec, theta: f64) -> (Array2<f64>, Array2<f64>) {
    let (n, p) = (spec.n, spec.p);
    let u = d.uniform_vec(n, -1.0, 1.0);
    let v = d.uniform_vec(n, -1.0, 1.0);
    let eps = d.normal_block(n, p);
    let (s, c) = theta.sin_cos();
    let pf = p as f64;
    let x = Array2::from_shape_fn((n, p), |(i, k)| u[i] * c + v[i] * s + 0.05 * pf * eps[[i, k]]);
    let y = Array2::from_shape_fn((n, p), |(i, _)| -u[i] * s + v[i] * c);
    (x, y)
}

fn sine(d: &mut Draws, spec: &SimulationSpec, theta: f64, noise: f64) -> (Array2<f64>, Array2<f64>) {
    let (n, p) = (spec.n, spec.p);
    let u = d.uniform_vec(n, -1.0, 1.0);
    let v = d.normal_block(n, p);
    let eps = d.normal_block(n, p);
    let pf = p as f64;
    let x = Array2::from_shape_fn((n, p), |(i, k)| u[i] + 0.02 * pf * v[[i, k]]);
    let y = Array2::from_shape_fn((n, p), |(i, k)| {
        (theta * x[[i, k]]).sin() + noise * spec.kappa * eps[[i, k]]
    });
    (x, y)
}

fn circle(d: &mut Draws, spec: &SimulationSpec, radius: f64) -> (Array2<f64>, Array2<f64>) {
    let (n, p) = (spec.n, spec.p);
    let u = d.uniform_block(n, p, -1.0, 1.0);
    let eps = d.normal_block(n, p);
    let mut x = Array2::zeros((n, p));
    for i in 0..n {
        let mut cos_prod = 1.0;
        for k in 0..p {
            cos_prod *= (PI * u[[i, k]]).cos();
            let base = if k + 1 < p {
                (PI * u[[i, k + 1]]).sin() * cos_prod
            } else {
                cos_prod
            };
            x[[i, k]] = radius * (base + 0.4 * eps[[i, k]]);
        }
    }
    let y = column((0..n).map(|i| (PI * u[[i, 0]]).sin()).collect());
    (x, y)
}

/// Draws `(x, y)` for `spec`; the same spec always yields identical output.
pub fn simulate(spec: &SimulationSpec) -> Result<SimulatedPair> {
    use SimulationKind::*;
    spec.validate()?;
    let mut d = Draws {
        rng: ChaCha8Rng::seed_from_u64(spec.seed),
    };
    let (n, p, kappa) = (spec.n, spec.p, spec.kappa);
    let pf = p as f64;
    let w = spec.weights();
    let (x, y) = match spec.kind {
        Linear => functional(&mut d, spec, -1.0, 1.0, kappa, |t| t),
        Exponential => functional(&mut d, spec, 0.0, 3.0, 10.0 * kappa, f64::exp),
        Cubic => functional(&mut d, spec, -1.0, 1.0, 80.0 * kappa, |t| {
            let s = t - 1.0 / 3.0;
            128.0 * s.powi(3) + 48.0 * s.powi(2) - 12.0 * s
        }),
        JointNormal => joint_normal(&mut d, spec)?,
        StepFunction => functional(&mut d, spec, -1.0, 1.0, 1.0, |t| {
            if t > 0.0 {
                1.0
            } else {
                0.0
            }
        }),
        Quadratic => functional(&mut d, spec, -1.0, 1.0, 0.5 * kappa, |t| t * t),
        WShape => {
            let x = d.uniform_block(n, p, -1.0, 1.0);
            let u = d.uniform_block(n, p, -1.0, 1.0);
            let eps = d.normal_vec(n);
            let (wx, wu) = (project(&x, &w), project(&u, &w));
            let y = (0..n)
                .map(|i| {
                    4.0 * ((wx[i] * wx[i] - 0.5).powi(2) + wu[i] / 500.0) + 0.5 * kappa * eps[i]
                })
                .collect();
            (x, column(y))
        }
        Spiral => {
            let u = d.uniform_vec(n, 0.0, 5.0);
            let eps = d.normal_vec(n);
            let x = Array2::from_shape_fn((n, p), |(i, k)| {
                let (s, c) = (PI * u[i]).sin_cos();
                if k + 1 < p {
                    u[i] * s * c.powi(k as i32 + 1)
                } else {
                    u[i] * c.powi(p as i32)
                }
            });
            let y = (0..n)
                .map(|i| u[i] * (PI * u[i]).sin() + 0.4 * pf * eps[i])
                .collect();
            (x, column(y))
        }
        UncorrelatedBernoulli => {
            let b = d.bernoulli_block(n, p);
            let eps1 = d.normal_block(n, p);
            let x = &b + &(eps1 * 0.5);
            let u = d.bernoulli_vec(n);
            let eps2 = d.normal_vec(n);
            let wx = project(&x, &w);
            let y = (0..n)
                .map(|i| (2.0 * u[i] - 1.0) * wx[i] + 0.5 * eps2[i])
                .collect();
            (x, column(y))
        }
        Logarithmic => {
            let x = d.normal_block(n, p);
            let eps = d.normal_block(n, p);
            let y = Array2::from_shape_fn((n, p), |(i, k)| {
                2.0 * x[[i, k]].abs().log2() + 3.0 * kappa * eps[[i, k]]
            });
            (x, y)
        }
        FourthRoot => functional(&mut d, spec, -1.0, 1.0, kappa / 4.0, |t| t.abs().powf(0.25)),
        SinePeriod4Pi => sine(&mut d, spec, 4.0 * PI, 1.0),
        SinePeriod16Pi => sine(&mut d, spec, 16.0 * PI, 0.5),
        Square => rotated_square(&mut d, spec, -PI / 8.0),
        Diamond => rotated_square(&mut d, spec, PI / 4.0),
        TwoParabolas => {
            let x = d.uniform_block(n, p, -1.0, 1.0);
            let u = d.bernoulli_vec(n);
            let eps = d.uniform_vec(n, 0.0, 1.0);
            let wx = project(&x, &w);
            let y = (0..n)
                .map(|i| (wx[i] * wx[i] + 2.0 * kappa * eps[i]) * (u[i] - 0.5))
                .collect();
            (x, column(y))
        }
        Circle => circle(&mut d, spec, 1.0),
        Ellipse => circle(&mut d, spec, 5.0),
        MultiplicativeNoise => {
            let x = d.normal_block(n, p);
            let u = d.normal_block(n, p);
            (x.clone(), &u * &x)
        }
        MultimodalIndependence => {
            let u = d.normal_block(n, p);
            let u_mode = d.bernoulli_block(n, p);
            let v = d.normal_vec(n);
            let v_mode = d.bernoulli_vec(n);
            let x = u.mapv(|a| a / 3.0) + u_mode.mapv(|b| 2.0 * b - 1.0);
            let y = (0..n).map(|i| v[i] / 3.0 + 2.0 * v_mode[i] - 1.0).collect();
            (x, column(y))
        }
    };
    let x = DataMatrix::new(x)?;
    let y = DataMatrix::new(y).map_err(|e| Error::Spec(format!("{}: {e}", spec.kind)))?;
    Ok(SimulatedPair { x, y, spec: *spec })
}
