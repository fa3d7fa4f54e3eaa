//! CTC scoring over phoneme posteriorgrams and monotonic duration
//! extraction.

mod ctc;
mod path;

use ndarray::{Array2, ArrayView1};

pub use ctc::{ctc_loss, logits_gradient, min_frames, CtcOutput};
pub use path::{
    best_monotonic_path, best_monotonic_segmentation, durations_from_path, AlignmentPath,
};

/// Rows may deviate from a normalized log distribution by this much.
pub const ROW_TOLERANCE: f64 = 1e-4;

#[derive(Debug, thiserror::Error)]
pub enum AlignError {
    #[error("posteriorgram must have at least one frame and one class")]
    EmptyPosterior,
    #[error("frame {frame}: row is not a log-probability distribution (logsumexp = {lse})")]
    NotNormalized { frame: usize, lse: f64 },
    #[error("frame {frame}: NaN or +inf log-probability")]
    BadValue { frame: usize },
    #[error("label id {id} is outside the {n_phonemes}-phoneme inventory")]
    LabelOutOfRange { id: usize, n_phonemes: usize },
    #[error("no admissible alignment: {frames} frames, at least {required} required")]
    NoAdmissibleAlignment { frames: usize, required: usize },
    #[error("insufficient frames: {frames} frames for {labels} labels")]
    InsufficientFrames { frames: usize, labels: usize },
    #[error("label sequence is empty")]
    EmptyLabels,
    #[error("invalid alignment path: {0}")]
    InvalidPath(String),
}

pub(crate) fn logsumexp(values: impl IntoIterator<Item = f64>) -> f64 {
    let values: Vec<f64> = values.into_iter().collect();
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

fn row_lse(row: ArrayView1<'_, f64>) -> f64 {
    logsumexp(row.iter().copied())
}

/// Per-frame log-probabilities over `V` phonemes plus a blank in the last
/// column. Zero probabilities are `-inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorGram {
    log_probs: Array2<f64>,
}

impl PosteriorGram {
    pub fn new(log_probs: Array2<f64>) -> Result<Self, AlignError> {
        if log_probs.nrows() == 0 || log_probs.ncols() == 0 {
            return Err(AlignError::EmptyPosterior);
        }
        for (frame, row) in log_probs.rows().into_iter().enumerate() {
            if row.iter().any(|v| v.is_nan() || *v == f64::INFINITY) {
                return Err(AlignError::BadValue { frame });
            }
            let lse = row_lse(row);
            if !(lse.abs() <= ROW_TOLERANCE) {
                return Err(AlignError::NotNormalized { frame, lse });
            }
        }
        Ok(Self { log_probs })
    }

    /// Row-wise log-softmax of unnormalized scores.
    pub fn from_logits(logits: &Array2<f64>) -> Result<Self, AlignError> {
        let mut log_probs = logits.clone();
        for mut row in log_probs.rows_mut() {
            let lse = row_lse(row.view());
            row.mapv_inplace(|v| v - lse);
        }
        Self::new(log_probs)
    }

    pub fn log_probs(&self) -> &Array2<f64> {
        &self.log_probs
    }

    pub fn n_frames(&self) -> usize {
        self.log_probs.nrows()
    }

    /// Phoneme classes plus blank.
    pub fn n_classes(&self) -> usize {
        self.log_probs.ncols()
    }

    pub fn blank_id(&self) -> usize {
        self.log_probs.ncols() - 1
    }
}

/// Frames per phoneme.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DurationSequence(pub Vec<usize>);

impl DurationSequence {
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}
