//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, d: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(lo..hi)).collect()
}

pub fn l1(x: &[f64]) -> f64 {
    x.iter().map(|v| v.abs()).sum()
}

pub fn linf(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m: f64, v| m.max(v.abs()))
}

/// Root of an increasing function on `[lo, hi]`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn central_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

pub fn second_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
}

/// Direct generalised entropy, written from the formula without shared code.
pub fn phi_ref(x: f64, alpha: f64, beta: f64) -> f64 {
    let a = x.abs();
    alpha * ((a + beta) * (a / beta + 1.0).ln() - a)
}

pub fn phi_grad_ref(x: f64, alpha: f64, beta: f64) -> f64 {
    alpha * (x.abs() / beta + 1.0).ln() * x.signum()
}

pub fn bregman_ref(x: &[f64], y: &[f64], alpha: f64, beta: f64) -> f64 {
    x.iter()
        .zip(y)
        .map(|(&a, &b)| {
            phi_ref(a, alpha, beta)
                - phi_ref(b, alpha, beta)
                - phi_grad_ref(b, alpha, beta) * (a - b)
        })
        .sum()
}

/// Euclidean projection onto the l1 ball by sorting.
pub fn euclid_l1_project(v: &[f64], radius: f64) -> Vec<f64> {
    if l1(v) <= radius {
        return v.to_vec();
    }
    let mut u: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut tau = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        cum += uj;
        let t = (cum - radius) / (j + 1) as f64;
        if uj - t > 0.0 {
            tau = t;
        }
    }
    v.iter()
        .map(|x| x.signum() * (x.abs() - tau).max(0.0))
        .collect()
}

/// Projected gradient descent with Euclidean l1-ball projection for a smooth
/// objective with Lipschitz gradient constant `lip`.
pub fn pgd_l1<G: Fn(&[f64]) -> Vec<f64>>(
    grad: G,
    x0: Vec<f64>,
    radius: f64,
    lip: f64,
    iters: usize,
) -> Vec<f64> {
    let mut x = euclid_l1_project(&x0, radius);
    let step = 1.0 / lip;
    for _ in 0..iters {
        let g = grad(&x);
        let y: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a - step * b).collect();
        let next = euclid_l1_project(&y, radius);
        let moved = next
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        x = next;
        if moved < 1e-17 {
            break;
        }
    }
    x
}

/// Oracle for `argmin_{|x|_1 <= D} B_psi(x, y)`.
pub fn bregman_projection_oracle(y: &[f64], radius: f64, alpha: f64, beta: f64) -> Vec<f64> {
    let grad = |x: &[f64]| -> Vec<f64> {
        x.iter()
            .zip(y)
            .map(|(&a, &b)| phi_grad_ref(a, alpha, beta) - phi_grad_ref(b, alpha, beta))
            .collect()
    };
    pgd_l1(grad, vec![0.0; y.len()], radius, alpha / beta, 100_000)
}

/// Oracle for `argmin_{|x|_1 <= D} 1/2 sum s_i (x_i - v_i)^2` by projected
/// gradient descent.
pub fn weighted_projection_oracle(v: &[f64], s: &[f64], radius: f64) -> Vec<f64> {
    let lip = s.iter().cloned().fold(0.0, f64::max);
    let grad = |x: &[f64]| -> Vec<f64> {
        x.iter()
            .zip(v)
            .zip(s)
            .map(|((a, b), w)| w * (a - b))
            .collect()
    };
    pgd_l1(grad, vec![0.0; v.len()], radius, lip, 200_000)
}

/// Frank-Wolfe over the l1 ball for a smooth convex objective (offline
/// comparator of the regret tests). Returns the point, its value and the
/// duality gap there, so `value - gap` lower-bounds the minimum.
pub fn frank_wolfe_l1<F, G>(
    f: F,
    grad: G,
    d: usize,
    radius: f64,
    iters: usize,
) -> (Vec<f64>, f64, f64)
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> Vec<f64>,
{
    let mut x = vec![0.0; d];
    for k in 0..iters {
        let g = grad(&x);
        let (i, gi) = g.iter().enumerate().fold((0, 0.0f64), |(bi, bv), (i, &v)| {
            if v.abs() > bv.abs() {
                (i, v)
            } else {
                (bi, bv)
            }
        });
        let mut s = vec![0.0; d];
        s[i] = -radius * gi.signum();
        let step = 2.0 / (k as f64 + 2.0);
        // line search on [0, step]
        let dir: Vec<f64> = s.iter().zip(&x).map(|(a, b)| a - b).collect();
        let at = |t: f64| -> Vec<f64> { x.iter().zip(&dir).map(|(a, b)| a + t * b).collect() };
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..60 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if f(&at(m1)) <= f(&at(m2)) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        let t = if f(&at(0.5 * (lo + hi))) <= f(&at(step)) {
            0.5 * (lo + hi)
        } else {
            step
        };
        x = at(t);
    }
    let g = grad(&x);
    let gap = g.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() + radius * linf(&g);
    let v = f(&x);
    (x, v, gap)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    cov / var
}

/// Prints one acceptance line and returns whether it passed.
pub fn report(name: &str, passed: bool, detail: impl std::fmt::Display) -> bool {
    println!(
        "[{}] {name}: {detail}",
        if passed { "PASS" } else { "FAIL" }
    );
    passed
}
