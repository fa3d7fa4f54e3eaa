//! Acoustic-model objectives: L1 on spectrograms, SSIM, Huber on log
//! durations and their weighted sum, each with an analytic gradient.

mod ssim;

use ndarray::Array2;

pub use ssim::{ssim, ssim_loss};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum LossError {
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("{shape:?} input is smaller than the {window}x{window} SSIM window")]
    SmallerThanWindow { shape: (usize, usize), window: usize },
    #[error("invalid loss configuration: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossConfig {
    pub lambda_l1: f64,
    pub lambda_ssim: f64,
    pub lambda_dur: f64,
    /// Odd side length of the square Gaussian window.
    pub ssim_window: usize,
    pub ssim_sigma: f64,
    pub dynamic_range: f64,
    pub k1: f64,
    pub k2: f64,
    pub huber_delta: f64,
}

impl Default for LossConfig {
    fn default() -> Self {
        Self {
            lambda_l1: 1.0,
            lambda_ssim: 1.0,
            lambda_dur: 1.0,
            ssim_window: 11,
            ssim_sigma: 1.5,
            dynamic_range: 4.0,
            k1: 0.01,
            k2: 0.03,
            huber_delta: 1.0,
        }
    }
}

impl LossConfig {
    pub fn c1(&self) -> f64 {
        (self.k1 * self.dynamic_range).powi(2)
    }

    pub fn c2(&self) -> f64 {
        (self.k2 * self.dynamic_range).powi(2)
    }

    pub fn validate(&self) -> Result<(), LossError> {
        let fail = |m: &str| Err(LossError::Config(m.to_string()));
        if [self.lambda_l1, self.lambda_ssim, self.lambda_dur]
            .iter()
            .any(|l| !(*l >= 0.0))
        {
            return fail("loss weights must be non-negative");
        }
        if self.ssim_window == 0 || self.ssim_window.is_multiple_of(2) {
            return fail("ssim_window must be odd");
        }
        if !(self.ssim_sigma > 0.0) || !(self.dynamic_range > 0.0) {
            return fail("ssim_sigma and dynamic_range must be positive");
        }
        if !(self.k1 > 0.0 && self.k2 > 0.0) {
            return fail("k1 and k2 must be positive");
        }
        if !(self.huber_delta > 0.0) {
            return fail("huber_delta must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LossOutput {
    pub value: f64,
    pub grad: Option<Array2<f64>>,
}

/// Mean absolute error; the subgradient at equality is 0.
pub fn l1_loss(
    pred: &Array2<f64>,
    target: &Array2<f64>,
    with_grad: bool,
) -> Result<LossOutput, LossError> {
    if pred.dim() != target.dim() {
        return Err(LossError::ShapeMismatch {
            left: pred.dim(),
            right: target.dim(),
        });
    }
    let n = pred.len().max(1) as f64;
    let diff = pred - target;
    let value = diff.iter().map(|d| d.abs()).sum::<f64>() / n;
    let grad = with_grad.then(|| {
        diff.mapv(|d| {
            if d > 0.0 {
                1.0 / n
            } else if d < 0.0 {
                -1.0 / n
            } else {
                0.0
            }
        })
    });
    Ok(LossOutput { value, grad })
}

pub fn huber(e: f64, delta: f64) -> f64 {
    if e.abs() <= delta {
        0.5 * e * e
    } else {
        delta * (e.abs() - delta / 2.0)
    }
}

pub fn huber_derivative(e: f64, delta: f64) -> f64 {
    e.clamp(-delta, delta)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceLoss {
    pub value: f64,
    pub grad: Option<Vec<f64>>,
}

/// Mean Huber loss between predicted log durations and `ln(1 + d)`.
pub fn huber_log_duration_loss(
    pred_log: &[f64],
    target: &[usize],
    delta: f64,
    with_grad: bool,
) -> Result<SequenceLoss, LossError> {
    if pred_log.len() != target.len() {
        return Err(LossError::LengthMismatch {
            left: pred_log.len(),
            right: target.len(),
        });
    }
    if !(delta > 0.0) {
        return Err(LossError::Config("huber_delta must be positive".into()));
    }
    let n = pred_log.len().max(1) as f64;
    let residuals: Vec<f64> = pred_log
        .iter()
        .zip(target)
        .map(|(p, &d)| p - (d as f64).ln_1p())
        .collect();
    let value = residuals.iter().map(|&e| huber(e, delta)).sum::<f64>() / n;
    let grad = with_grad.then(|| {
        residuals
            .iter()
            .map(|&e| huber_derivative(e, delta) / n)
            .collect()
    });
    Ok(SequenceLoss { value, grad })
}

/// Unweighted terms of the combined objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossBreakdown {
    pub l1: f64,
    /// `1 - SSIM`
    pub ssim: f64,
    pub duration: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CombinedLoss {
    pub total: f64,
    pub breakdown: LossBreakdown,
    pub grad_mel: Option<Array2<f64>>,
    pub grad_log_durations: Option<Vec<f64>>,
}

/// `lambda_l1 * L1 + lambda_ssim * (1 - SSIM) + lambda_dur * Huber`.
pub fn combined_acoustic_loss(
    pred_mel: &Array2<f64>,
    target_mel: &Array2<f64>,
    pred_log_dur: &[f64],
    target_dur: &[usize],
    cfg: &LossConfig,
    with_grad: bool,
) -> Result<CombinedLoss, LossError> {
    cfg.validate()?;
    let l1 = l1_loss(pred_mel, target_mel, with_grad)?;
    let ssim = ssim_loss(pred_mel, target_mel, cfg, with_grad)?;
    let dur = huber_log_duration_loss(pred_log_dur, target_dur, cfg.huber_delta, with_grad)?;
    let total = cfg.lambda_l1 * l1.value + cfg.lambda_ssim * ssim.value + cfg.lambda_dur * dur.value;
    let grad_mel = match (l1.grad, ssim.grad) {
        (Some(a), Some(b)) => Some(a * cfg.lambda_l1 + b * cfg.lambda_ssim),
        _ => None,
    };
    let grad_log_durations = dur
        .grad
        .map(|g| g.into_iter().map(|v| v * cfg.lambda_dur).collect());
    Ok(CombinedLoss {
        total,
        breakdown: LossBreakdown {
            l1: l1.value,
            ssim: ssim.value,
            duration: dur.value,
        },
        grad_mel,
        grad_log_durations,
    })
}
