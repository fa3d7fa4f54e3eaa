//! Connectionist temporal classification loss via log-space
//! forward-backward over the blank-interleaved label sequence.

use ndarray::Array2;

use super::{logsumexp, AlignError, PosteriorGram};

#[derive(Debug, Clone, PartialEq)]
pub struct CtcOutput {
    /// `-log P(labels | posterior)`; `+inf` when every admissible path has
    /// zero probability.
    pub loss: f64,
    /// `d loss / d log_probs`, same shape as the posteriorgram.
    pub grad: Option<Array2<f64>>,
}

/// Shortest posteriorgram that admits `labels`: one frame per label plus a
/// separating blank between equal neighbours.
pub fn min_frames(labels: &[usize]) -> usize {
    labels.len() + labels.windows(2).filter(|w| w[0] == w[1]).count()
}

fn extended(labels: &[usize], blank: usize) -> Vec<usize> {
    let mut ext = Vec::with_capacity(2 * labels.len() + 1);
    ext.push(blank);
    for &l in labels {
        ext.push(l);
        ext.push(blank);
    }
    ext
}

pub fn ctc_loss(
    posterior: &PosteriorGram,
    labels: &[usize],
    with_grad: bool,
) -> Result<CtcOutput, AlignError> {
    let x = posterior.log_probs();
    let blank = posterior.blank_id();
    if let Some(&id) = labels.iter().find(|&&l| l >= blank) {
        return Err(AlignError::LabelOutOfRange {
            id,
            n_phonemes: blank,
        });
    }
    let frames = posterior.n_frames();
    let required = min_frames(labels);
    if frames < required {
        return Err(AlignError::NoAdmissibleAlignment { frames, required });
    }

    let ext = extended(labels, blank);
    let s_len = ext.len();
    let neg_inf = f64::NEG_INFINITY;
    let can_skip = |s: usize| s >= 2 && ext[s] != blank && ext[s] != ext[s - 2];

    let mut alpha = Array2::from_elem((frames, s_len), neg_inf);
    alpha[[0, 0]] = x[[0, ext[0]]];
    if s_len > 1 {
        alpha[[0, 1]] = x[[0, ext[1]]];
    }
    for t in 1..frames {
        for s in 0..s_len {
            let mut acc = alpha[[t - 1, s]];
            if s >= 1 {
                acc = logsumexp([acc, alpha[[t - 1, s - 1]]]);
            }
            if can_skip(s) {
                acc = logsumexp([acc, alpha[[t - 1, s - 2]]]);
            }
            alpha[[t, s]] = acc + x[[t, ext[s]]];
        }
    }
    let last = frames - 1;
    let log_p = if s_len > 1 {
        logsumexp([alpha[[last, s_len - 1]], alpha[[last, s_len - 2]]])
    } else {
        alpha[[last, 0]]
    };

    if !with_grad {
        return Ok(CtcOutput {
            loss: -log_p,
            grad: None,
        });
    }
    let mut grad = Array2::zeros(x.dim());
    if log_p == neg_inf {
        return Ok(CtcOutput {
            loss: f64::INFINITY,
            grad: Some(grad),
        });
    }

    let mut beta = Array2::from_elem((frames, s_len), neg_inf);
    beta[[last, s_len - 1]] = x[[last, ext[s_len - 1]]];
    if s_len > 1 {
        beta[[last, s_len - 2]] = x[[last, ext[s_len - 2]]];
    }
    for t in (0..last).rev() {
        for s in 0..s_len {
            let mut acc = beta[[t + 1, s]];
            if s + 1 < s_len {
                acc = logsumexp([acc, beta[[t + 1, s + 1]]]);
            }
            if s + 2 < s_len && can_skip(s + 2) {
                acc = logsumexp([acc, beta[[t + 1, s + 2]]]);
            }
            beta[[t, s]] = acc + x[[t, ext[s]]];
        }
    }

    // alpha and beta both include the emission at t, so it is removed once.
    for t in 0..frames {
        for s in 0..s_len {
            let emit = x[[t, ext[s]]];
            if emit == neg_inf || alpha[[t, s]] == neg_inf || beta[[t, s]] == neg_inf {
                continue;
            }
            let occupancy = (alpha[[t, s]] + beta[[t, s]] - emit - log_p).exp();
            grad[[t, ext[s]]] -= occupancy;
        }
    }
    Ok(CtcOutput {
        loss: -log_p,
        grad: Some(grad),
    })
}

/// Chains a log-probability gradient through the row-wise log-softmax, giving
/// the gradient with respect to unnormalized logits.
pub fn logits_gradient(grad: &Array2<f64>, posterior: &PosteriorGram) -> Array2<f64> {
    let mut out = grad.clone();
    for (mut row, lp) in out.rows_mut().into_iter().zip(posterior.log_probs().rows()) {
        let total: f64 = row.sum();
        for (g, &l) in row.iter_mut().zip(lp.iter()) {
            *g -= l.exp() * total;
        }
    }
    out
}
