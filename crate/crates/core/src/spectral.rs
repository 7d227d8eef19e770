//! Matrix learners with the spectral regulariser `Psi_t = psi_t ∘ sigma`.
//!
//! Every operation goes through one SVD: the mirror maps, the nuclear +
//! Frobenius prox and the nuclear-ball projection all act on singular values
//! and keep the singular vectors. The learners store the factors of their
//! current iterate, so each step needs a single decomposition of the dual
//! matrix (plus the cheap singular-value-only one for the spectral norm).

use nalgebra::{DMatrix, SVD};

use crate::entropy::{log_magnitude, psi_value, EntropyParams};
use crate::error::{Error, Result};
use crate::learners::{resolve, FeasibleMode, OnlineLearner};
use crate::prox::{elastic_net_prox, project_or_pass, BallConstraint, CompositeRegularizer};

pub type Matrix = DMatrix<f64>;

/// Thin SVD `x = u * diag(s) * vt` with `s` descending.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdFactors {
    pub u: Matrix,
    pub s: Vec<f64>,
    pub vt: Matrix,
}

impl SvdFactors {
    pub fn reconstruct(&self) -> Matrix {
        with_spectrum(&self.u, &self.s, &self.vt)
    }
}

/// `u * diag(s) * vt`
pub fn with_spectrum(u: &Matrix, s: &[f64], vt: &Matrix) -> Matrix {
    let mut us = u.clone();
    for (j, &sj) in s.iter().enumerate() {
        us.column_mut(j).scale_mut(sj);
    }
    us * vt
}

pub fn svd(x: &Matrix) -> Result<SvdFactors> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("SVD input has non-finite entries".into()));
    }
    let k = x.nrows().min(x.ncols());
    if k == 0 {
        return Ok(SvdFactors {
            u: Matrix::zeros(x.nrows(), 0),
            s: Vec::new(),
            vt: Matrix::zeros(0, x.ncols()),
        });
    }
    let dec = SVD::try_new(x.clone(), true, true, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let (u, vt) = match (dec.u, dec.v_t) {
        (Some(u), Some(vt)) => (u, vt),
        _ => return Err(Error::Numerical("SVD factors missing".into())),
    };
    Ok(SvdFactors {
        u,
        s: dec.singular_values.iter().copied().collect(),
        vt,
    })
}

pub fn singular_values(x: &Matrix) -> Result<Vec<f64>> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("SVD input has non-finite entries".into()));
    }
    if x.nrows().min(x.ncols()) == 0 {
        return Ok(Vec::new());
    }
    let dec = SVD::try_new(x.clone(), false, false, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let mut s: Vec<f64> = dec.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

pub fn nuclear_norm(x: &Matrix) -> Result<f64> {
    Ok(singular_values(x)?.iter().sum())
}

pub fn spectral_norm(x: &Matrix) -> Result<f64> {
    Ok(singular_values(x)?.first().copied().unwrap_or(0.0))
}

/// `Psi(x) = sum_i phi(sigma_i(x))`
pub fn spectral_psi_value(x: &Matrix, p: EntropyParams) -> Result<f64> {
    Ok(psi_value(&singular_values(x)?, p))
}

/// `grad Psi(x) = U diag(phi'(sigma)) V^T`
pub fn spectral_psi_grad(x: &Matrix, p: EntropyParams) -> Result<Matrix> {
    let f = svd(x)?;
    let g: Vec<f64> =
        f.s.iter()
            .map(|&s| p.alpha() * log_magnitude(s, p.beta()))
            .collect();
    Ok(with_spectrum(&f.u, &g, &f.vt))
}

/// `grad Psi*(theta) = U diag(phi*'(sigma(theta))) V^T`
pub fn spectral_psi_conj_grad(theta: &Matrix, p: EntropyParams) -> Result<Matrix> {
    let f = svd(theta)?;
    let s = crate::entropy::psi_conj_grad(&f.s, p)?;
    Ok(with_spectrum(&f.u, &s, &f.vt))
}

pub fn spectral_bregman(x: &Matrix, y: &Matrix, p: EntropyParams) -> Result<f64> {
    let gy = spectral_psi_grad(y, p)?;
    Ok(spectral_psi_value(x, p)? - spectral_psi_value(y, p)? - gy.dot(&(x - y)))
}

/// Nuclear + Frobenius Bregman prox: SVD, vector elastic-net prox on the
/// spectrum, reconstruct.
pub fn spectral_prox(y: &Matrix, r: CompositeRegularizer, p: EntropyParams) -> Result<Matrix> {
    let f = svd(y)?;
    let s = elastic_net_prox(&f.s, r, p)?;
    Ok(with_spectrum(&f.u, &s, &f.vt))
}

/// Bregman projection onto the nuclear ball; intended for `|y|_* > D`.
pub fn nuclear_ball_project(y: &Matrix, c: BallConstraint, p: EntropyParams) -> Result<Matrix> {
    let f = svd(y)?;
    let s = crate::prox::l1_ball_project(&f.s, c, p);
    Ok(with_spectrum(&f.u, &s, &f.vt))
}

/// Checked form: identity inside the ball.
pub fn nuclear_project_or_pass(y: &Matrix, c: BallConstraint, p: EntropyParams) -> Result<Matrix> {
    let f = svd(y)?;
    let s = project_or_pass(&f.s, c, p);
    Ok(with_spectrum(&f.u, &s, &f.vt))
}

/// Stepsize schedule of the matrix learners.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSchedule {
    pub m: usize,
    pub n: usize,
    pub radius: f64,
    pub eta: f64,
    pub beta: f64,
    pub epsilon0: f64,
}

impl SpectralSchedule {
    /// `beta = 1/min(m,n)`, `eta = (ln(D+1) + ln min(m,n))^{-1/2}`.
    pub fn new(m: usize, n: usize, radius: f64) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidParameter(
                "matrix dimensions must be positive".into(),
            ));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "radius must be positive, got {radius}"
            )));
        }
        let k = m.min(n) as f64;
        Ok(Self {
            m,
            n,
            radius,
            eta: (1.0 / ((radius + 1.0).ln() + k.ln())).sqrt(),
            beta: 1.0 / k,
            epsilon0: 1e-12,
        })
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_epsilon0(mut self, epsilon0: f64) -> Self {
        self.epsilon0 = epsilon0;
        self
    }

    fn entropy(&self, sum_sq: f64) -> Result<EntropyParams> {
        EntropyParams::new(self.eta * (self.epsilon0 + sum_sq).sqrt(), self.beta)
    }

    fn check(&self, x: &Matrix) -> Result<()> {
        if x.nrows() != self.m || x.ncols() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.m * self.n,
                got: x.len(),
            });
        }
        Ok(())
    }
}

fn check_shape(a: &Matrix, b: &Matrix) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    if b.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("non-finite matrix entry".into()));
    }
    Ok(())
}

/// Unit-scale mirror image `U diag(ln(sigma/beta + 1)) V^T` of a matrix with
/// known factors.
fn unit_dual(f: &SvdFactors, beta: f64) -> Matrix {
    let l: Vec<f64> = f.s.iter().map(|&s| log_magnitude(s, beta)).collect();
    with_spectrum(&f.u, &l, &f.vt)
}

/// Dual matrix -> SVD -> mode applied to the spectrum -> reconstruction.
fn resolve_matrix(
    theta: &Matrix,
    mode: &FeasibleMode,
    p: EntropyParams,
) -> Result<(Matrix, SvdFactors)> {
    let f = svd(theta)?;
    let s = resolve(&f.s, mode, p)?;
    let factors = SvdFactors {
        u: f.u,
        s,
        vt: f.vt,
    };
    Ok((factors.reconstruct(), factors))
}

/// Spectral AO-OMD state.
#[derive(Debug, Clone)]
pub struct SpectralOmdState {
    x: Matrix,
    factors: SvdFactors,
    sum_sq: f64,
    h_prev: Matrix,
    round: usize,
}

impl SpectralOmdState {
    pub fn new(x1: Matrix) -> Result<Self> {
        let factors = svd(&x1)?;
        let h_prev = Matrix::zeros(x1.nrows(), x1.ncols());
        Ok(Self {
            x: x1,
            factors,
            sum_sq: 0.0,
            h_prev,
            round: 1,
        })
    }

    pub fn with_initial_hint(mut self, h1: Matrix) -> Self {
        assert_eq!(h1.shape(), self.x.shape(), "hint shape");
        self.h_prev = h1;
        self
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    pub fn sum_sq(&self) -> f64 {
        self.sum_sq
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn step(
        &mut self,
        g: &Matrix,
        h_next: &Matrix,
        mode: &FeasibleMode,
        sched: &SpectralSchedule,
    ) -> Result<&Matrix> {
        sched.check(&self.x)?;
        check_shape(&self.x, g)?;
        check_shape(&self.x, h_next)?;
        let err = spectral_norm(&(g - &self.h_prev))?;
        let sum_sq = self.sum_sq + err * err;
        let p = sched.entropy(sum_sq)?;
        let theta = unit_dual(&self.factors, p.beta()) - (g - &self.h_prev + h_next) / p.alpha();
        let (x, factors) = resolve_matrix(&theta, mode, p)?;

        self.x = x;
        self.factors = factors;
        self.sum_sq = sum_sq;
        self.h_prev.copy_from(h_next);
        self.round += 1;
        Ok(&self.x)
    }
}

/// Spectral AO-FTRL state.
#[derive(Debug, Clone)]
pub struct SpectralFtrlState {
    x: Matrix,
    theta1: Matrix,
    g_accum: Matrix,
    reg_accum: CompositeRegularizer,
    sum_sq: f64,
    h_prev: Matrix,
    round: usize,
}

impl SpectralFtrlState {
    pub fn new(x1: Matrix, mode: &FeasibleMode, beta: f64) -> Result<Self> {
        let theta1 = unit_dual(&svd(&x1)?, beta);
        let zeros = Matrix::zeros(x1.nrows(), x1.ncols());
        Ok(Self {
            x: x1,
            theta1,
            g_accum: zeros.clone(),
            reg_accum: mode.regularizer(),
            sum_sq: 0.0,
            h_prev: zeros,
            round: 1,
        })
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    pub fn g_accum(&self) -> &Matrix {
        &self.g_accum
    }

    pub fn sum_sq(&self) -> f64 {
        self.sum_sq
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn step(
        &mut self,
        g: &Matrix,
        h_next: &Matrix,
        mode: &FeasibleMode,
        sched: &SpectralSchedule,
    ) -> Result<&Matrix> {
        sched.check(&self.x)?;
        check_shape(&self.x, g)?;
        check_shape(&self.x, h_next)?;
        let err = spectral_norm(&(g - &self.h_prev))?;
        let sum_sq = self.sum_sq + err * err;
        let g_accum = &self.g_accum + g;
        let p = sched.entropy(sum_sq)?;
        let theta = &self.theta1 - (&g_accum + h_next) / p.alpha();
        let (reg_accum, effective) = match mode {
            FeasibleMode::Regularized(r) => {
                let acc = self.reg_accum + *r;
                (acc, FeasibleMode::Regularized(acc))
            }
            other => (self.reg_accum, *other),
        };
        let (x, _) = resolve_matrix(&theta, &effective, p)?;

        self.x = x;
        self.g_accum = g_accum;
        self.reg_accum = reg_accum;
        self.sum_sq = sum_sq;
        self.h_prev.copy_from(h_next);
        self.round += 1;
        Ok(&self.x)
    }
}

/// Spectral Exp-MD learner.
#[derive(Debug, Clone)]
pub struct SpectralExpMd {
    state: SpectralOmdState,
    mode: FeasibleMode,
    sched: SpectralSchedule,
}

impl SpectralExpMd {
    pub fn new(x1: Matrix, mode: FeasibleMode, sched: SpectralSchedule) -> Result<Self> {
        Ok(Self {
            state: SpectralOmdState::new(x1)?,
            mode,
            sched,
        })
    }

    pub fn state(&self) -> &SpectralOmdState {
        &self.state
    }
}

impl OnlineLearner for SpectralExpMd {
    type Point = Matrix;

    fn current(&self) -> &Matrix {
        self.state.x()
    }

    fn update(&mut self, g: &Matrix, hint: &Matrix, reg_scale: f64) -> Result<()> {
        let mode = self.mode.scaled(reg_scale);
        self.state.step(g, hint, &mode, &self.sched).map(|_| ())
    }
}

/// Spectral Exp-FTRL learner.
#[derive(Debug, Clone)]
pub struct SpectralExpFtrl {
    state: SpectralFtrlState,
    mode: FeasibleMode,
    sched: SpectralSchedule,
}

impl SpectralExpFtrl {
    pub fn new(x1: Matrix, mode: FeasibleMode, sched: SpectralSchedule) -> Result<Self> {
        Ok(Self {
            state: SpectralFtrlState::new(x1, &mode, sched.beta)?,
            mode,
            sched,
        })
    }

    pub fn state(&self) -> &SpectralFtrlState {
        &self.state
    }
}

impl OnlineLearner for SpectralExpFtrl {
    type Point = Matrix;

    fn current(&self) -> &Matrix {
        self.state.x()
    }

    fn update(&mut self, g: &Matrix, hint: &Matrix, reg_scale: f64) -> Result<()> {
        let mode = self.mode.scaled(reg_scale);
        self.state.step(g, hint, &mode, &self.sched).map(|_| ())
    }
}

/// Embeds a vector as the leading diagonal of an `m x n` zero matrix.
pub fn diag_embed(v: &[f64], m: usize, n: usize) -> Matrix {
    let mut x = Matrix::zeros(m, n);
    for (i, &vi) in v.iter().enumerate().take(m.min(n)) {
        x[(i, i)] = vi;
    }
    x
}

/// Symmetric embedding `[[0, X], [X^T, 0]]`, whose eigenvalues are `±sigma(X)`
/// padded with zeros.
pub fn symmetric_embedding(x: &Matrix) -> Matrix {
    let (m, n) = x.shape();
    let mut s = Matrix::zeros(m + n, m + n);
    s.view_mut((0, m), (m, n)).copy_from(x);
    s.view_mut((m, 0), (n, m)).copy_from(&x.transpose());
    s
}
