//! Bregman proximal steps for the generalised entropy.
//!
//! Two solvers for `argmin_x R(x) + B_psi(x, y)`:
//!
//! * [`elastic_net_prox`] for `R = gamma1 |x|_1 + gamma2/2 |x|_2^2` on `R^d`,
//!   solved coordinatewise in closed form through the Lambert function;
//! * [`l1_ball_project`] for `R = 0` and the constraint `|x|_1 <= D`, solved by
//!   one sort and a few linear passes.
//!
//! Both also come in a `_log` flavour taking the point in the dual domain, i.e.
//! the signed values `sgn(y_i) ln(|y_i|/beta + 1)`. Learners hold their iterate
//! there, and the primal `y` may not be representable when the dual entries are
//! large.

use std::cell::Cell;

use crate::entropy::{log_magnitude, magnitude_from_log, EntropyParams, MAX_DUAL_EXPONENT};
use crate::error::{Error, Result};
use crate::lambert::w0_from_log;

/// `gamma1 |x|_1 + gamma2/2 |x|_2^2` (vectors) or nuclear + Frobenius (matrices).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CompositeRegularizer {
    pub gamma1: f64,
    pub gamma2: f64,
}

impl CompositeRegularizer {
    pub fn new(gamma1: f64, gamma2: f64) -> Result<Self> {
        if !(gamma1 >= 0.0 && gamma1.is_finite() && gamma2 >= 0.0 && gamma2.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "regulariser weights must be finite and non-negative, got ({gamma1}, {gamma2})"
            )));
        }
        Ok(Self { gamma1, gamma2 })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scaled(self, k: f64) -> Self {
        Self {
            gamma1: self.gamma1 * k,
            gamma2: self.gamma2 * k,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.gamma1 == 0.0 && self.gamma2 == 0.0
    }

    /// `gamma1 * l1 + gamma2/2 * sq_l2` given the two norms.
    pub fn value_from_norms(&self, l1: f64, sq_l2: f64) -> f64 {
        self.gamma1 * l1 + 0.5 * self.gamma2 * sq_l2
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let l1: f64 = x.iter().map(|v| v.abs()).sum();
        let sq: f64 = x.iter().map(|v| v * v).sum();
        self.value_from_norms(l1, sq)
    }
}

impl std::ops::Add for CompositeRegularizer {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            gamma1: self.gamma1 + rhs.gamma1,
            gamma2: self.gamma2 + rhs.gamma2,
        }
    }
}

/// The l1 ball (or nuclear ball) of radius `D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallConstraint {
    radius: f64,
}

impl BallConstraint {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "ball radius must be positive, got {radius}"
            )));
        }
        Ok(Self { radius })
    }

    #[inline]
    pub fn radius(&self) -> f64 {
        self.radius
    }
}

#[inline]
fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Magnitude of the prox output for one coordinate whose input has log
/// magnitude `l = ln(|y|/beta + 1)`.
///
/// Solves `l = ln(m/beta + 1) + gamma1/alpha + (gamma2/alpha) m` for `m > 0`,
/// or returns 0 when `l <= gamma1/alpha`.
pub fn prox_magnitude(l: f64, r: CompositeRegularizer, p: EntropyParams) -> Result<f64> {
    let (alpha, beta) = (p.alpha(), p.beta());
    let threshold = r.gamma1 / alpha;
    if l <= threshold {
        return Ok(0.0);
    }
    if r.gamma2 == 0.0 {
        return magnitude_from_log(l - threshold, beta);
    }
    let a = beta;
    let b = r.gamma2 / alpha;
    let c = threshold - l;
    // W0(ab * exp(ab - c)) with the argument kept in the log domain
    let ab = a * b;
    let s = ab.ln() + ab - c;
    let w = w0_from_log(s)?.w;
    Ok((w / b - a).max(0.0))
}

/// Elastic-net Bregman prox: `argmin_x gamma1|x|_1 + gamma2/2|x|^2 + B_psi(x, y)`.
pub fn elastic_net_prox(y: &[f64], r: CompositeRegularizer, p: EntropyParams) -> Result<Vec<f64>> {
    if r.is_zero() {
        return Ok(y.to_vec());
    }
    y.iter()
        .map(|&yi| Ok(sgn(yi) * prox_magnitude(log_magnitude(yi, p.beta()), r, p)?))
        .collect()
}

/// [`elastic_net_prox`] for a point given by its signed dual coordinates
/// `theta_i = sgn(y_i) ln(|y_i|/beta + 1)`.
pub fn elastic_net_prox_log(
    theta: &[f64],
    r: CompositeRegularizer,
    p: EntropyParams,
) -> Result<Vec<f64>> {
    theta
        .iter()
        .map(|&t| Ok(sgn(t) * prox_magnitude(t.abs(), r, p)?))
        .collect()
}

/// Work done by one projection; see [`l1_ball_project_counted`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ProjectionCounts {
    pub sorts: usize,
    pub comparisons: usize,
    /// Linear passes over the coordinates, excluding the sort.
    pub passes: usize,
}

/// Bregman projection of `y` onto `{x : |x|_1 <= D}`.
///
/// Meant for `|y|_1 > D`; see [`project_or_pass`] for the checked form.
pub fn l1_ball_project(y: &[f64], c: BallConstraint, p: EntropyParams) -> Vec<f64> {
    l1_ball_project_counted(y, c, p).0
}

pub fn l1_ball_project_counted(
    y: &[f64],
    c: BallConstraint,
    p: EntropyParams,
) -> (Vec<f64>, ProjectionCounts) {
    let d = y.len();
    let (radius, beta) = (c.radius(), p.beta());
    let mut counts = ProjectionCounts::default();
    if d == 0 {
        return (Vec::new(), counts);
    }

    let abs: Vec<f64> = y.iter().map(|v| v.abs()).collect();
    counts.passes += 1;

    let mut order: Vec<usize> = (0..d).collect();
    let cmp_count = Cell::new(0usize);
    order.sort_by(|&i, &j| {
        cmp_count.set(cmp_count.get() + 1);
        abs[i].total_cmp(&abs[j])
    });
    counts.sorts += 1;
    counts.comparisons = cmp_count.get();

    // suffix[k] = sum_{i >= k} |y_p(i)| (0-based)
    let mut suffix = vec![0.0; d + 1];
    for k in (0..d).rev() {
        suffix[k] = suffix[k + 1] + abs[order[k]];
    }
    counts.passes += 1;

    // theta(j) with j = k + 1, so d - j + 1 = d - k
    let mut rho = d - 1;
    for k in 0..d {
        let tail = (d - k) as f64;
        let theta = abs[order[k]] * (radius + tail * beta) + beta * radius - beta * suffix[k];
        if theta > 0.0 {
            rho = k;
            break;
        }
    }
    counts.passes += 1;

    let tail = (d - rho) as f64;
    let z = (suffix[rho] + tail * beta) / (radius + tail * beta);
    let x = y
        .iter()
        .zip(&abs)
        .map(|(&yi, &ai)| ((ai + beta) / z - beta).max(0.0) * sgn(yi))
        .collect();
    counts.passes += 1;
    (x, counts)
}

/// Returns `y` unchanged when it already lies in the ball, else projects it.
pub fn project_or_pass(y: &[f64], c: BallConstraint, p: EntropyParams) -> Vec<f64> {
    let norm: f64 = y.iter().map(|v| v.abs()).sum();
    if norm <= c.radius() {
        y.to_vec()
    } else {
        l1_ball_project(y, c, p)
    }
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Checked projection for a point in dual coordinates
/// `theta_i = sgn(y_i) ln(|y_i|/beta + 1)`.
///
/// Same result as [`project_or_pass`] on the primal point, but the sorted
/// threshold test and the normaliser are evaluated with log-sum-exp, so
/// entries far beyond the range of `exp` are handled.
pub fn l1_ball_project_log(theta: &[f64], c: BallConstraint, p: EntropyParams) -> Result<Vec<f64>> {
    let d = theta.len();
    let (radius, beta) = (c.radius(), p.beta());
    let logs: Vec<f64> = theta.iter().map(|t| t.abs()).collect();

    let fits = logs.iter().all(|&l| l <= MAX_DUAL_EXPONENT) && {
        let norm: f64 = logs.iter().map(|&l| beta * l.exp_m1()).sum();
        norm <= radius
    };
    if fits {
        return Ok(theta
            .iter()
            .zip(&logs)
            .map(|(&t, &l)| sgn(t) * beta * l.exp_m1())
            .collect());
    }
    if logs.iter().any(|l| l.is_nan()) {
        return Err(Error::Numerical("NaN in dual point".into()));
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| logs[i].total_cmp(&logs[j]));

    // suffix log-sum-exp of the log magnitudes in sorted order
    let mut lse = vec![f64::NEG_INFINITY; d + 1];
    for k in (0..d).rev() {
        lse[k] = log_add_exp(lse[k + 1], logs[order[k]]);
    }
    // theta(j) > 0  <=>  u_j (D + (d-j+1) beta) > beta * sum_{i>=j} u_i, u = |y| + beta = beta e^l
    let log_beta = beta.ln();
    let mut rho = d - 1;
    for k in 0..d {
        let tail = (d - k) as f64;
        if logs[order[k]] + (radius + tail * beta).ln() > log_beta + lse[k] {
            rho = k;
            break;
        }
    }
    let scale = radius + (d - rho) as f64 * beta;
    let norm = lse[rho];
    Ok(theta
        .iter()
        .zip(&logs)
        .map(|(&t, &l)| (scale * (l - norm).exp() - beta).max(0.0) * sgn(t))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn params(alpha: f64, beta: f64) -> EntropyParams {
        EntropyParams::new(alpha, beta).unwrap()
    }

    fn bisect_magnitude(l: f64, r: CompositeRegularizer, p: EntropyParams) -> f64 {
        let f =
            |m: f64| (m / p.beta()).ln_1p() + r.gamma1 / p.alpha() + r.gamma2 / p.alpha() * m - l;
        let (mut lo, mut hi) = (0.0, p.beta() * l.exp());
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                hi = mid
            } else {
                lo = mid
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn threshold_branch_zeroes() {
        let r = CompositeRegularizer::new(1.0, 0.0).unwrap();
        let x = elastic_net_prox(&[1.0, -1.0], r, params(1.0, 1.0)).unwrap();
        assert_eq!(x, vec![0.0, 0.0]);
    }

    #[test]
    fn l1_closed_form() {
        let r = CompositeRegularizer::new(std::f64::consts::LN_2, 0.0).unwrap();
        let x = elastic_net_prox(&[3.0], r, params(1.0, 1.0)).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_regulariser_is_identity() {
        let y = [0.3, -7.0, 0.0];
        let x = elastic_net_prox(&y, CompositeRegularizer::zero(), params(2.0, 0.5)).unwrap();
        assert_eq!(x, y.to_vec());
    }

    #[test]
    fn elastic_net_matches_bisection() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = CompositeRegularizer::new(0.2, 0.5).unwrap();
        let p = params(1.5, 0.1);
        let y: Vec<f64> = (0..20).map(|_| rng.random_range(-10.0..10.0)).collect();
        let x = elastic_net_prox(&y, r, p).unwrap();
        for (xi, yi) in x.iter().zip(&y) {
            let l = log_magnitude(*yi, p.beta());
            let expect = if l <= r.gamma1 / p.alpha() {
                0.0
            } else {
                bisect_magnitude(l, r, p)
            };
            assert!((xi.abs() - expect).abs() < 1e-9, "{xi} vs {expect}");
            assert!(xi * yi >= 0.0);
        }
    }

    #[test]
    fn log_form_survives_huge_dual() {
        let r = CompositeRegularizer::new(0.1, 0.1).unwrap();
        let p = params(1e-3, 0.01);
        // |y| would be beta * e^{900}
        let x = elastic_net_prox_log(&[900.0, -900.0], r, p).unwrap();
        assert!(x[0].is_finite() && x[0] > 0.0 && x[1] == -x[0]);
        let lhs = (x[0] / p.beta()).ln_1p() + r.gamma1 / p.alpha() + r.gamma2 / p.alpha() * x[0];
        assert!((lhs - 900.0).abs() < 1e-9 * 900.0);
    }

    #[test]
    fn constant_input_projects_to_uniform() {
        let c = BallConstraint::new(1.0).unwrap();
        let x = l1_ball_project(&[2.0; 5], c, params(1.0, 0.3));
        for xi in x {
            assert!((xi - 0.2).abs() < 1e-14);
        }
    }

    #[test]
    fn projection_norm_and_signs() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let d = rng.random_range(1..12);
            let y: Vec<f64> = (0..d).map(|_| rng.random_range(-5.0..5.0)).collect();
            let norm: f64 = y.iter().map(|v| v.abs()).sum();
            let c = BallConstraint::new(rng.random_range(0.05..1.0) * norm).unwrap();
            let x = l1_ball_project(&y, c, params(1.0, rng.random_range(0.01..2.0)));
            let xn: f64 = x.iter().map(|v| v.abs()).sum();
            assert!((xn - c.radius()).abs() <= 1e-10, "{xn} vs {}", c.radius());
            for (xi, yi) in x.iter().zip(&y) {
                assert!(*xi == 0.0 || xi.signum() == yi.signum());
            }
        }
    }

    #[test]
    fn pass_through_inside_ball() {
        let c = BallConstraint::new(3.0).unwrap();
        let y = [1.0, -1.0, 0.5];
        assert_eq!(project_or_pass(&y, c, params(1.0, 1.0)), y.to_vec());
        let theta: Vec<f64> = y
            .iter()
            .map(|v: &f64| v.signum() * log_magnitude(*v, 1.0))
            .collect();
        let x = l1_ball_project_log(&theta, c, params(1.0, 1.0)).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn log_projection_agrees_with_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let d = rng.random_range(1..9);
            let beta = rng.random_range(0.01..1.0);
            let y: Vec<f64> = (0..d).map(|_| rng.random_range(-20.0..20.0)).collect();
            let c = BallConstraint::new(rng.random_range(0.1..5.0)).unwrap();
            let p = params(1.0, beta);
            let theta: Vec<f64> = y
                .iter()
                .map(|v| v.signum() * log_magnitude(*v, beta))
                .collect();
            let a = project_or_pass(&y, c, p);
            let b = l1_ball_project_log(&theta, c, p).unwrap();
            for (ai, bi) in a.iter().zip(&b) {
                assert!((ai - bi).abs() < 1e-10, "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn log_projection_handles_overflowing_entries() {
        let c = BallConstraint::new(2.0).unwrap();
        let p = params(1.0, 0.1);
        let x = l1_ball_project_log(&[900.0, -899.0, 1.0], c, p).unwrap();
        let n: f64 = x.iter().map(|v| v.abs()).sum();
        assert!((n - 2.0).abs() < 1e-10);
        assert!(x[0] > 0.0 && x[1] < 0.0 && x[2] == 0.0);
        // ratio of (|x|+beta) follows e^{900-899}
        assert!(((x[0] + 0.1) / (-x[1] + 0.1) - 1f64.exp()).abs() < 1e-9);
    }

    #[test]
    fn projection_is_one_sort_plus_linear_passes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in [8usize, 64, 512, 4096] {
            let y: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
            let (_, counts) = l1_ball_project_counted(
                &y,
                BallConstraint::new(1.0).unwrap(),
                params(1.0, 1.0 / d as f64),
            );
            assert_eq!(counts.sorts, 1);
            assert_eq!(counts.passes, 4);
            let bound = 2.0 * d as f64 * (d as f64).log2() + d as f64;
            assert!(
                (counts.comparisons as f64) <= bound,
                "d={d}: {}",
                counts.comparisons
            );
        }
    }

    #[test]
    fn invalid_constructors() {
        assert!(CompositeRegularizer::new(-1.0, 0.0).is_err());
        assert!(BallConstraint::new(0.0).is_err());
    }
}
