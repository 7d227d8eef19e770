//! Synthetic data streams and the losses evaluated on them.

use nalgebra::DMatrix;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::harness::spec::ExperimentSpec;
use crate::spectral::Matrix;

/// Identifier of the generator written into run metadata.
pub const RNG_ID: &str = "ChaCha8 (rand_chacha 0.9), seed_from_u64 + set_stream";

/// Lane of the data stream; estimator lanes start at 1.
pub const DATA_LANE: u64 = 0;

/// Independent generator for one `(trial, lane)` pair of a run.
pub fn substream(seed: u64, trial: usize, lane: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((trial as u64) << 16) | lane);
    rng
}

/// `ln(1 + e^z)` without overflow.
pub fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// `1 / (1 + e^{-z})`
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Logistic loss `ln(1 + exp(-y <w, x>))`.
pub fn logistic_loss(w: &[f64], x: &[f64], y: f64) -> f64 {
    softplus(-y * dot(w, x))
}

/// Gradient of [`logistic_loss`] in `w`.
pub fn logistic_grad(w: &[f64], x: &[f64], y: f64) -> Vec<f64> {
    let c = -y * sigmoid(-y * dot(w, x));
    x.iter().map(|xi| c * xi).collect()
}

fn uniform_vec<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

fn label<R: Rng>(rng: &mut R, margin: f64) -> f64 {
    if rng.random::<f64>() < sigmoid(margin) {
        1.0
    } else {
        -1.0
    }
}

/// Number of non-zeros `ceil((1 - s) d)`, robust to rounding in `1 - s`.
pub fn support_size(dim: usize, sparsity: f64) -> usize {
    let raw = (1.0 - sparsity) * dim as f64;
    ((raw - 1e-9).ceil().max(0.0) as usize).min(dim)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticStream {
    pub w_star: Vec<f64>,
    pub xs: Vec<Vec<f64>>,
    pub ys: Vec<f64>,
}

impl LogisticStream {
    pub fn loss(&self, t: usize, w: &[f64]) -> f64 {
        logistic_loss(w, &self.xs[t], self.ys[t])
    }

    pub fn grad(&self, t: usize, w: &[f64]) -> Vec<f64> {
        logistic_grad(w, &self.xs[t], self.ys[t])
    }
}

/// Sparse ground truth, uniform features and labels drawn from the logit model.
pub fn gen_logistic_stream<R: Rng>(spec: &ExperimentSpec, rng: &mut R) -> LogisticStream {
    let d = spec.dim;
    let mut w_star = vec![0.0; d];
    for i in sample(rng, d, support_size(d, spec.sparsity)).into_iter() {
        w_star[i] = rng.random_range(-1.0..=1.0);
    }
    let mut xs = Vec::with_capacity(spec.horizon);
    let mut ys = Vec::with_capacity(spec.horizon);
    for _ in 0..spec.horizon {
        let x = uniform_vec(rng, d);
        ys.push(label(rng, dot(&w_star, &x)));
        xs.push(x);
    }
    LogisticStream { w_star, xs, ys }
}

/// Haar-distributed orthogonal matrix from the QR factorisation of a Gaussian
/// matrix with the signs of `diag(R)` folded into `Q`.
pub fn random_orthogonal<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let g = DMatrix::from_fn(n, n, |_, _| StandardNormal.sample(rng));
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Multitask stream: `W* = U diag(sigma) V` is `d x k`; task `i` of every round
/// draws features for column `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultitaskStream {
    pub w_star: Matrix,
    /// `xs[t]` is `d x k`, one feature column per task.
    pub xs: Vec<Matrix>,
    /// `ys[t][i]` is the label of task `i`.
    pub ys: Vec<Vec<f64>>,
}

impl MultitaskStream {
    /// Sum over tasks of the logistic losses.
    pub fn loss(&self, t: usize, w: &Matrix) -> f64 {
        let x = &self.xs[t];
        (0..w.ncols())
            .map(|i| softplus(-self.ys[t][i] * w.column(i).dot(&x.column(i))))
            .sum()
    }

    pub fn grad(&self, t: usize, w: &Matrix) -> Matrix {
        let x = &self.xs[t];
        let mut g = Matrix::zeros(w.nrows(), w.ncols());
        for i in 0..w.ncols() {
            let y = self.ys[t][i];
            let c = -y * sigmoid(-y * w.column(i).dot(&x.column(i)));
            g.column_mut(i).axpy(c, &x.column(i), 0.0);
        }
        g
    }
}

pub fn gen_multitask_stream<R: Rng>(spec: &ExperimentSpec, rng: &mut R) -> MultitaskStream {
    let (d, k) = (spec.dim, spec.tasks);
    let u = random_orthogonal(rng, d);
    let v = random_orthogonal(rng, k);
    let mut sigma = vec![0.0; k.min(d)];
    for i in sample(rng, sigma.len(), spec.rank).into_iter() {
        sigma[i] = rng.random_range(0.0..=10.0);
    }
    let mut core = Matrix::zeros(d, k);
    for (i, s) in sigma.iter().enumerate() {
        core[(i, i)] = *s;
    }
    let w_star = &u * core * &v;
    let mut xs = Vec::with_capacity(spec.horizon);
    let mut ys = Vec::with_capacity(spec.horizon);
    for _ in 0..spec.horizon {
        let x = Matrix::from_fn(d, k, |_, _| rng.random_range(-1.0..=1.0));
        let y = (0..k)
            .map(|i| label(rng, w_star.column(i).dot(&x.column(i))))
            .collect();
        xs.push(x);
        ys.push(y);
    }
    MultitaskStream { w_star, xs, ys }
}

/// Hinge of quadratics `l(x) = max(-kappa, max_j q_j(x))` with
/// `q_j(x) = (1/2d) sum_i s_ji (x_i - c_ji)^2 - 1`. Only values of `l` are
/// exposed to the solvers; the composite part `g1 |x|_1 + g2/2 |x|^2` is known.
#[derive(Debug, Clone, PartialEq)]
pub struct BlackboxInstance {
    pub centers: Vec<Vec<f64>>,
    pub scales: Vec<Vec<f64>>,
    pub kappa: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

pub const BLACKBOX_PIECES: usize = 3;

impl BlackboxInstance {
    pub fn smooth_part(&self, x: &[f64]) -> f64 {
        let d = x.len() as f64;
        self.centers
            .iter()
            .zip(&self.scales)
            .map(|(c, s)| {
                let q: f64 = x
                    .iter()
                    .zip(c)
                    .zip(s)
                    .map(|((xi, ci), si)| si * (xi - ci).powi(2))
                    .sum();
                0.5 * q / d - 1.0
            })
            .fold(-self.kappa, f64::max)
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        let l1: f64 = x.iter().map(|v| v.abs()).sum();
        let l2: f64 = x.iter().map(|v| v * v).sum();
        self.smooth_part(x) + self.gamma1 * l1 + 0.5 * self.gamma2 * l2
    }
}

pub fn gen_blackbox_instance<R: Rng>(spec: &ExperimentSpec, rng: &mut R) -> BlackboxInstance {
    let d = spec.dim;
    let centers = (0..BLACKBOX_PIECES)
        .map(|_| uniform_vec(rng, d).into_iter().map(|c| 3.0 * c).collect())
        .collect();
    let scales = (0..BLACKBOX_PIECES)
        .map(|_| (0..d).map(|_| rng.random_range(0.5..=1.5)).collect())
        .collect();
    BlackboxInstance {
        centers,
        scales,
        kappa: 0.1,
        gamma1: spec.gamma1,
        gamma2: spec.gamma2,
    }
}
