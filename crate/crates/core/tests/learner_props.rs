mod common;

use std::f64::consts::E;

use common::*;
use exp_oco::baselines::{AdaFtrl, AdaGrad, DiagProxState, EgPm, EgPmState};
use exp_oco::learners::*;
use exp_oco::prox::{BallConstraint, CompositeRegularizer};
use exp_oco::Error;
use proptest::prelude::*;
use rand::Rng;

fn ball(r: f64) -> FeasibleMode {
    FeasibleMode::Ball(BallConstraint::new(r).unwrap())
}

fn unit_alpha_schedule(d: usize) -> ScheduleParams {
    ScheduleParams::new(d, 1.0)
        .unwrap()
        .with_eta(1.0)
        .with_beta(1.0)
        .with_epsilon0(0.0)
}

#[test]
fn analytic_mirror_step_from_origin() {
    let sched = unit_alpha_schedule(2);
    let mut omd = OmdState::new(vec![0.0, 0.0]);
    let x = omd
        .step(&[1.0, -1.0], &[0.0, 0.0], &FeasibleMode::Free, &sched)
        .unwrap()
        .to_vec();
    assert!((x[0] + (E - 1.0)).abs() < 1e-14 && (x[1] - (E - 1.0)).abs() < 1e-14);

    let mut ftrl = FtrlState::new(vec![0.0, 0.0], &FeasibleMode::Free, 1.0);
    let y = ftrl
        .step(&[1.0, -1.0], &[0.0, 0.0], &FeasibleMode::Free, &sched)
        .unwrap();
    assert_eq!(x, y);
}

#[test]
fn ftrl_anchor_before_any_step() {
    let f = FtrlState::new(vec![0.0; 3], &FeasibleMode::Free, 0.3);
    assert_eq!(f.x(), &[0.0; 3]);
    assert_eq!(f.round(), 1);
}

#[test]
fn perfect_hints_add_no_error_and_fix_the_point() {
    let d = 4;
    let sched = ScheduleParams::new(d, 2.0).unwrap().with_epsilon0(1.0);
    let g = vec![0.3, -0.1, 0.7, 0.0];
    let mut omd = OmdState::new(vec![0.1; d]).with_initial_hint(g.clone());
    for _ in 0..20 {
        omd.step(&g, &g, &FeasibleMode::Free, &sched).unwrap();
        assert_eq!(omd.sum_sq(), 0.0);
    }
    let before = omd.x().to_vec();
    omd.step(&g, &[0.0; 4], &FeasibleMode::Free, &sched)
        .unwrap();
    assert_eq!(omd.sum_sq(), 0.0);
    for (a, b) in omd.x().iter().zip(&before) {
        assert!((a - b).abs() <= 1e-13 * b.abs().max(1.0));
    }
}

#[test]
fn zero_hints_reproduce_plain_updates() {
    let d = 5;
    let sched = ScheduleParams::new(d, 3.0).unwrap();
    let mut r = rng(1);
    let mut a = ExpMd::new(vec![0.0; d], ball(3.0), sched);
    let mut b = OmdState::new(vec![0.0; d]);
    for _ in 0..100 {
        let g = uniform(&mut r, d, -2.0, 2.0);
        a.update(&g, &vec![0.0; d], 1.0).unwrap();
        b.step(&g, &[0.0; 5], &ball(3.0), &sched).unwrap();
        assert_eq!(a.current().as_slice(), b.x());
    }
}

#[test]
fn fixed_linear_loss_ftrl_goes_to_the_vertex() {
    let d = 6;
    let g = vec![0.2, -0.9, 0.4, 0.1, -0.3, 0.5];
    let sched = ScheduleParams::new(d, 1.0).unwrap();
    let mut f = ExpFtrl::new(vec![0.0; d], ball(1.0), sched);
    let mut total = 0.0;
    for _ in 0..500 {
        total += f.current().iter().zip(&g).map(|(a, b)| a * b).sum::<f64>();
        f.update(&g, &vec![0.0; d], 1.0).unwrap();
    }
    let best = -500.0 * linf(&g);
    assert!(total <= best * 0.95, "{total} vs {best}");
    let x = f.current();
    let i = x
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .unwrap()
        .0;
    assert_eq!(i, 1);
    assert!(x[1] > 0.0);
}

#[test]
fn ftrl_depends_only_on_sums() {
    let d = 4;
    let sched = ScheduleParams::new(d, 2.0).unwrap();
    let mut r = rng(8);
    let gs: Vec<Vec<f64>> = (0..30).map(|_| uniform(&mut r, d, -1.0, 1.0)).collect();
    let mut perm = gs.clone();
    perm.reverse();
    perm.swap(3, 17);
    let run = |seq: &[Vec<f64>]| {
        let mut f = FtrlState::new(vec![0.0; d], &ball(2.0), sched.beta);
        for g in seq {
            f.step(g, &[0.0; 4], &ball(2.0), &sched).unwrap();
        }
        f.x().to_vec()
    };
    let (a, b) = (run(&gs), run(&perm));
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn ftrl_cumulative_regulariser_counts_rounds() {
    let r = CompositeRegularizer::new(0.1, 0.2).unwrap();
    let mode = FeasibleMode::Regularized(r);
    let sched = ScheduleParams::new(3, 1.0).unwrap();
    let mut f = FtrlState::new(vec![0.0; 3], &mode, sched.beta);
    for _ in 0..7 {
        f.step(&[0.5, -0.5, 0.1], &[0.0; 3], &mode, &sched).unwrap();
    }
    let acc = f.cumulative_regularizer();
    assert!((acc.gamma1 - 0.8).abs() < 1e-12 && (acc.gamma2 - 1.6).abs() < 1e-12);
}

#[test]
fn trajectories_are_bitwise_deterministic() {
    let run = || {
        let mut r = rng(99);
        let sched = ScheduleParams::new(7, 1.5).unwrap();
        let mode = FeasibleMode::Regularized(CompositeRegularizer::new(0.05, 0.01).unwrap());
        let mut a = ExpMd::new(vec![0.0; 7], mode, sched);
        let mut out = Vec::new();
        for _ in 0..200 {
            let g = uniform(&mut r, 7, -1.0, 1.0);
            let h = uniform(&mut r, 7, -0.5, 0.5);
            a.update(&g, &h, 1.0).unwrap();
            out.extend(a.current().iter().map(|v| v.to_bits()));
        }
        out
    };
    assert_eq!(run(), run());
}

#[test]
fn dimension_mismatch_is_reported() {
    let sched = ScheduleParams::new(3, 1.0).unwrap();
    let mut s = OmdState::new(vec![0.0; 3]);
    assert!(matches!(
        s.step(&[1.0], &[0.0; 3], &FeasibleMode::Free, &sched),
        Err(Error::DimensionMismatch { .. })
    ));
    assert!(matches!(
        regret(&[1.0], &[1.0, 2.0]),
        Err(Error::LengthMismatch(..))
    ));
    assert_eq!(regret(&[1.0, 1.0], &[0.0, 0.0]).unwrap(), vec![1.0, 2.0]);
}

proptest! {
    #[test]
    fn ball_iterates_stay_feasible(seed in any::<u64>(), radius in 0.1f64..5.0, d in 1usize..12) {
        let mut r = rng(seed);
        let sched = ScheduleParams::new(d, radius).unwrap();
        let mut md = ExpMd::new(vec![0.0; d], ball(radius), sched);
        let mut ft = ExpFtrl::new(vec![0.0; d], ball(radius), sched);
        let mut ag = AdaGrad::new(vec![0.0; d], ball(radius));
        let mut af = AdaFtrl::new(d, ball(radius));
        let mut eg = EgPm::new(d, BallConstraint::new(radius).unwrap());
        for _ in 0..100 {
            let g = uniform(&mut r, d, -10.0, 10.0);
            let h = uniform(&mut r, d, -1.0, 1.0);
            md.update(&g, &h, 1.0).unwrap();
            ft.update(&g, &h, 1.0).unwrap();
            ag.update(&g, &h, 1.0).unwrap();
            af.update(&g, &h, 1.0).unwrap();
            eg.update(&g, &h, 1.0).unwrap();
            for x in [md.current(), ft.current(), ag.current(), af.current(), eg.current()] {
                prop_assert!(l1(x) <= radius * (1.0 + 1e-10) + 1e-12);
            }
        }
    }

    #[test]
    fn sum_sq_is_nondecreasing(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sched = ScheduleParams::new(3, 1.0).unwrap();
        let mut s = OmdState::new(vec![0.0; 3]);
        let mut last = 0.0;
        for _ in 0..50 {
            let g = uniform(&mut r, 3, -1.0, 1.0);
            let h = uniform(&mut r, 3, -1.0, 1.0);
            s.step(&g, &h, &ball(1.0), &sched).unwrap();
            prop_assert!(s.sum_sq() >= last);
            last = s.sum_sq();
        }
    }
}

#[test]
fn many_random_unit_ball_steps() {
    let mut r = rng(21);
    let sched = ScheduleParams::new(8, 1.0).unwrap();
    let mut s = OmdState::new(vec![0.0; 8]);
    for _ in 0..1000 {
        let scale = 10f64.powf(r.random_range(-3.0..3.0));
        let g = uniform(&mut r, 8, -scale, scale);
        let h = uniform(&mut r, 8, -scale, scale);
        s.step(&g, &h, &ball(1.0), &sched).unwrap();
        assert!(l1(s.x()) <= 1.0 + 1e-10);
    }
}

#[test]
fn adagrad_examples() {
    let mut s = DiagProxState::new(vec![0.0]);
    let x = s.adagrad_step(&[2.0], &FeasibleMode::Free).unwrap()[0];
    assert!((x + 2.0 / 4.000001f64.sqrt()).abs() < 1e-15);

    let mut s = DiagProxState::new(vec![0.5, -0.5]);
    s.adagrad_step(&[0.0, 0.0], &FeasibleMode::Free).unwrap();
    assert_eq!(s.x(), &[0.5, -0.5]);
    assert_eq!(s.h_diag(), &[1e-6, 1e-6]);

    let mut a = DiagProxState::new(vec![0.0; 3]);
    let mut b = DiagProxState::new(vec![0.0; 3]);
    let g = [0.4, -1.0, 0.2];
    let xa = a.adagrad_step(&g, &ball(0.5)).unwrap().to_vec();
    let xb = b.adaftrl_step(&g, &ball(0.5)).unwrap().to_vec();
    for (p, q) in xa.iter().zip(&xb) {
        assert!((p - q).abs() < 1e-15);
    }
}

#[test]
fn adagrad_stepsizes_shrink() {
    let mut r = rng(2);
    let mut s = DiagProxState::new(vec![0.0; 5]);
    let mut last = [f64::INFINITY; 5];
    for _ in 0..200 {
        let g = uniform(&mut r, 5, -1.0, 1.0);
        s.adagrad_step(&g, &ball(1.0)).unwrap();
        for (l, h) in last.iter_mut().zip(s.h_diag()) {
            let eff = 1.0 / h.sqrt();
            assert!(eff <= *l);
            *l = eff;
        }
    }
}

#[test]
fn eg_pm_examples() {
    let c = BallConstraint::new(2.0).unwrap();
    let mut s = EgPmState::new(3, c);
    let w0 = s.weights();
    s.eg_pm_step(&[0.0; 3], 0.7).unwrap();
    for (a, b) in s.weights().iter().zip(&w0) {
        assert!((a - b).abs() < 1e-15);
    }
    assert!((s.weights().iter().sum::<f64>() - 2.0).abs() < 1e-12);

    for g in [0.5, -3.0] {
        let mut one = EgPmState::new(1, c);
        let x = one.eg_pm_step(&[g], 1.0).unwrap()[0];
        assert!(x * g < 0.0);
    }
}
