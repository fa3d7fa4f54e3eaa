mod common;

use common::*;
use ndarray::Array2;
use proptest::prelude::*;
use rand::Rng;
use ttsprep::losses::{
    combined_acoustic_loss, huber, huber_derivative, huber_log_duration_loss, l1_loss, ssim,
    ssim_loss, LossConfig, LossError,
};

fn random_mel(r: &mut impl Rng, rows: usize, cols: usize) -> Array2<f64> {
    Array2::from_shape_fn((rows, cols), |_| r.gen_range(0.0..4.0))
}

#[test]
fn ssim_of_identical_inputs_is_exact() {
    let mut r = rng(1);
    let cfg = LossConfig::default();
    for _ in 0..10 {
        let x = random_mel(&mut r, 16, 20);
        assert_eq!(ssim_loss(&x, &x, &cfg, false).unwrap().value, 0.0);
    }
}

#[test]
fn constant_images_match_closed_form() {
    let cfg = LossConfig::default();
    let a = Array2::from_elem((16, 16), 1.0);
    let b = Array2::from_elem((16, 16), 2.0);
    let c1 = (0.01f64 * 4.0).powi(2);
    let expected = (2.0 * 1.0 * 2.0 + c1) / (1.0 + 4.0 + c1);
    let got = ssim(&a, &b, &cfg).unwrap();
    assert!((got - expected).abs() < 1e-4);
    assert!((got - 0.80006).abs() < 1e-4);
    let loss = ssim_loss(&a, &b, &cfg, false).unwrap().value;
    assert!((loss - 0.19994).abs() < 1e-4);
}

#[test]
fn ssim_rejects_bad_shapes() {
    let cfg = LossConfig::default();
    let small = Array2::zeros((10, 40));
    assert!(matches!(
        ssim_loss(&small, &small, &cfg, false),
        Err(LossError::SmallerThanWindow { .. })
    ));
    let a = Array2::zeros((12, 12));
    let b = Array2::zeros((12, 13));
    assert!(matches!(ssim_loss(&a, &b, &cfg, false), Err(LossError::ShapeMismatch { .. })));
}

/// Worst relative error of the SSIM gradient against central differences.
pub fn ssim_fd_error(r: &mut impl Rng, rows: usize, cols: usize) -> f64 {
    let cfg = LossConfig::default();
    let x = random_mel(r, rows, cols);
    let y = random_mel(r, rows, cols);
    let g = ssim_loss(&x, &y, &cfg, true).unwrap().grad.unwrap();
    let num = numeric_gradient(x.as_slice().unwrap(), 1e-5, |v| {
        let xv = Array2::from_shape_vec((rows, cols), v.to_vec()).unwrap();
        ssim_loss(&xv, &y, &cfg, false).unwrap().value
    });
    max_rel_error(g.as_slice().unwrap(), &num, FD_FLOOR)
}

#[test]
fn ssim_gradient_matches_finite_differences() {
    let mut r = rng(16);
    let worst = (0..3).map(|_| ssim_fd_error(&mut r, 16, 16)).fold(0.0, f64::max);
    assert!(worst < 1e-4, "worst relative error {worst}");
    let worst = ssim_fd_error(&mut r, 12, 19);
    assert!(worst < 1e-4, "worst relative error {worst}");
}

#[test]
fn l1_and_huber_gradients_match_finite_differences() {
    let mut r = rng(17);
    let x = random_mel(&mut r, 4, 5);
    let y = random_mel(&mut r, 4, 5);
    let g = l1_loss(&x, &y, true).unwrap().grad.unwrap();
    let num = numeric_gradient(x.as_slice().unwrap(), 1e-6, |v| {
        let xv = Array2::from_shape_vec((4, 5), v.to_vec()).unwrap();
        l1_loss(&xv, &y, false).unwrap().value
    });
    assert!(max_rel_error(g.as_slice().unwrap(), &num, FD_FLOOR) < 1e-4);

    let target: Vec<usize> = (0..8).map(|_| r.gen_range(0..12)).collect();
    // residuals on both sides of delta, away from the kink
    let pred: Vec<f64> = target
        .iter()
        .enumerate()
        .map(|(i, &d)| (d as f64).ln_1p() + [-2.5, -0.6, 0.3, 1.7][i % 4])
        .collect();
    let g = huber_log_duration_loss(&pred, &target, 1.0, true).unwrap().grad.unwrap();
    let num = numeric_gradient(&pred, 1e-6, |p| {
        huber_log_duration_loss(p, &target, 1.0, false).unwrap().value
    });
    assert!(max_rel_error(&g, &num, FD_FLOOR) < 1e-4);
}

#[test]
fn huber_is_smooth_at_delta() {
    for &delta in &[0.5, 1.0, 2.0] {
        for &sign in &[1.0, -1.0] {
            let below = sign * (delta - 1e-9);
            let above = sign * (delta + 1e-9);
            assert!((huber(below, delta) - huber(above, delta)).abs() < 1e-8);
            assert!((huber_derivative(below, delta) - huber_derivative(above, delta)).abs() < 1e-8);
        }
    }
}

#[test]
fn combined_examples() {
    let mut r = rng(18);
    let cfg = LossConfig::default();
    let mel = random_mel(&mut r, 12, 14);
    let dur = vec![3usize, 0, 5];
    let log_dur: Vec<f64> = dur.iter().map(|&d| (d as f64).ln_1p()).collect();
    let perfect = combined_acoustic_loss(&mel, &mel, &log_dur, &dur, &cfg, false).unwrap();
    assert_eq!(perfect.total, 0.0);
    assert_eq!(
        (perfect.breakdown.l1, perfect.breakdown.ssim, perfect.breakdown.duration),
        (0.0, 0.0, 0.0)
    );

    let pred = random_mel(&mut r, 12, 14);
    let pred_dur = vec![0.2, 1.9, -0.4];
    let parts = combined_acoustic_loss(&pred, &mel, &pred_dur, &dur, &cfg, false).unwrap();
    let l1 = l1_loss(&pred, &mel, false).unwrap().value;
    let s = ssim_loss(&pred, &mel, &cfg, false).unwrap().value;
    let h = huber_log_duration_loss(&pred_dur, &dur, 1.0, false).unwrap().value;
    assert!((parts.total - (l1 + s + h)).abs() < 1e-9);

    let l1_only = LossConfig {
        lambda_ssim: 0.0,
        lambda_dur: 0.0,
        ..cfg
    };
    let masked = combined_acoustic_loss(&pred, &mel, &pred_dur, &dur, &l1_only, false).unwrap();
    assert_eq!(masked.total, l1);
}

#[test]
fn combined_gradient_matches_finite_differences() {
    let mut r = rng(19);
    let cfg = LossConfig {
        lambda_l1: 0.7,
        lambda_ssim: 1.3,
        lambda_dur: 0.4,
        ..LossConfig::default()
    };
    let mel = random_mel(&mut r, 11, 12);
    let pred = random_mel(&mut r, 11, 12);
    let dur = vec![2usize, 7, 1, 4];
    let pred_dur = vec![0.1, 3.9, 0.8, 1.2];
    let out = combined_acoustic_loss(&pred, &mel, &pred_dur, &dur, &cfg, true).unwrap();
    let num = numeric_gradient(pred.as_slice().unwrap(), 1e-5, |v| {
        let p = Array2::from_shape_vec((11, 12), v.to_vec()).unwrap();
        combined_acoustic_loss(&p, &mel, &pred_dur, &dur, &cfg, false).unwrap().total
    });
    assert!(max_rel_error(out.grad_mel.unwrap().as_slice().unwrap(), &num, FD_FLOOR) < 1e-4);
    let num = numeric_gradient(&pred_dur, 1e-5, |v| {
        combined_acoustic_loss(&pred, &mel, v, &dur, &cfg, false).unwrap().total
    });
    assert!(max_rel_error(&out.grad_log_durations.unwrap(), &num, FD_FLOOR) < 1e-4);
}

#[test]
fn anti_correlated_structure_gives_negative_ssim() {
    // Non-negative inputs do not bound SSIM below by zero: the structure
    // term goes negative when local deviations oppose each other.
    let cfg = LossConfig::default();
    let pattern = Array2::from_shape_fn((16, 16), |(i, j)| if (i + j) % 2 == 0 { 1.5 } else { -1.5 });
    let x = pattern.mapv(|p| 2.0 + p);
    let y = pattern.mapv(|p| 2.0 - p);
    assert!(x.iter().chain(y.iter()).all(|&v| v >= 0.0));
    let s = ssim(&x, &y, &cfg).unwrap();
    assert!((-1.0..0.0).contains(&s), "{s}");
}

fn mel_pair() -> impl Strategy<Value = (Array2<f64>, Array2<f64>)> {
    (11usize..=16, 11usize..=16, any::<u64>()).prop_map(|(rows, cols, seed)| {
        let mut r = rng(seed);
        (random_mel(&mut r, rows, cols), random_mel(&mut r, rows, cols))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn losses_are_non_negative_and_symmetric((x, y) in mel_pair()) {
        let cfg = LossConfig::default();
        let l1_xy = l1_loss(&x, &y, false).unwrap().value;
        prop_assert!(l1_xy > 0.0);
        prop_assert_eq!(l1_xy, l1_loss(&y, &x, false).unwrap().value);
        let s_xy = ssim_loss(&x, &y, &cfg, false).unwrap().value;
        let s_yx = ssim_loss(&y, &x, &cfg, false).unwrap().value;
        prop_assert!(s_xy > 0.0);
        prop_assert!((s_xy - s_yx).abs() < 1e-12);
    }

    #[test]
    fn ssim_map_is_bounded((x, y) in mel_pair()) {
        let s = ssim(&x, &y, &LossConfig::default()).unwrap();
        prop_assert!((-1.0..=1.0).contains(&s));
    }

    #[test]
    fn huber_is_non_negative(pred in proptest::collection::vec(-5.0f64..5.0, 1..8), seed in any::<u64>()) {
        let mut r = rng(seed);
        let target: Vec<usize> = pred.iter().map(|_| r.gen_range(0..20)).collect();
        let v = huber_log_duration_loss(&pred, &target, 1.0, false).unwrap().value;
        prop_assert!(v >= 0.0);
    }
}
