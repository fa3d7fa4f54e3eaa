//! Independent reference implementations shared by the integration tests
//! and the acceptance runner. None of these call into the library code
//! they check.
#![allow(dead_code)]

use ndarray::Array2;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// `|a - b| <= tol * max(|a|, |b|, floor)`
pub fn rel_close(a: f64, b: f64, tol: f64, floor: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(floor)
}

fn lse(values: &[f64]) -> f64 {
    let m = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + values.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

/// Random `T x C` log-probability matrix; rows are log-softmaxed Gaussian
/// logits with the given spread.
pub fn random_log_probs(rng: &mut impl Rng, frames: usize, classes: usize, spread: f64) -> Array2<f64> {
    let mut m = Array2::from_shape_fn((frames, classes), |_| spread * (rng.gen::<f64>() * 2.0 - 1.0));
    for mut row in m.rows_mut() {
        let z = lse(&row.to_vec());
        row.mapv_inplace(|v| v - z);
    }
    m
}

/// `log P(labels)` by enumerating every one of the `C^T` frame paths,
/// collapsing repeats, dropping blanks (the last class) and comparing.
pub fn ctc_brute_force_log_prob(log_probs: &Array2<f64>, labels: &[usize]) -> f64 {
    let (frames, classes) = log_probs.dim();
    let blank = classes - 1;
    let mut path = vec![0usize; frames];
    let mut matching = Vec::new();
    loop {
        let mut collapsed = Vec::new();
        let mut prev = None;
        for &c in &path {
            if Some(c) != prev && c != blank {
                collapsed.push(c);
            }
            prev = Some(c);
        }
        if collapsed == labels {
            matching.push((0..frames).map(|t| log_probs[[t, path[t]]]).sum::<f64>());
        }
        // odometer increment
        let mut k = 0;
        loop {
            if k == frames {
                return lse(&matching);
            }
            path[k] += 1;
            if path[k] < classes {
                break;
            }
            path[k] = 0;
            k += 1;
        }
    }
}

/// Every composition of `total` into `parts` positive integers, in
/// lexicographic order.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Segmentation score summed from the last frame backwards.
pub fn segmentation_score(scores: &Array2<f64>, durations: &[usize]) -> f64 {
    let mut labels = Vec::new();
    for (i, &d) in durations.iter().enumerate() {
        labels.extend(std::iter::repeat_n(i, d));
    }
    labels
        .iter()
        .enumerate()
        .rev()
        .fold(None, |acc: Option<f64>, (t, &i)| {
            let s = scores[[t, i]];
            Some(acc.map_or(s, |a| s + a))
        })
        .unwrap()
}

/// Exhaustive best segmentation of a `T x N` score matrix. Ties go to the
/// lexicographically largest duration vector.
pub fn best_segmentation_oracle(scores: &Array2<f64>) -> (f64, Vec<usize>) {
    let (frames, labels) = scores.dim();
    let mut best: Option<(f64, Vec<usize>)> = None;
    for d in compositions(frames, labels) {
        let s = segmentation_score(scores, &d);
        let better = match &best {
            None => true,
            Some((bs, bd)) => s > *bs || (s == *bs && d > *bd),
        };
        if better {
            best = Some((s, d));
        }
    }
    best.expect("at least one segmentation")
}

/// Central difference of `f` at `x` along each coordinate.
pub fn numeric_gradient(x: &[f64], step: f64, mut f: impl FnMut(&[f64]) -> f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|k| {
            probe[k] = x[k] + step;
            let up = f(&probe);
            probe[k] = x[k] - step;
            let down = f(&probe);
            probe[k] = x[k];
            (up - down) / (2.0 * step)
        })
        .collect()
}

/// Magnitude below which gradient entries are compared absolutely; keeps
/// near-cancelling entries from turning finite-difference roundoff into a
/// large relative error.
pub const FD_FLOOR: f64 = 1e-6;

/// Largest relative discrepancy `|a - b| / max(|a|, |b|, floor)`.
pub fn max_rel_error(a: &[f64], b: &[f64], floor: f64) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let diff = (x - y).abs();
            if diff == 0.0 {
                0.0
            } else {
                diff / x.abs().max(y.abs()).max(floor)
            }
        })
        .fold(0.0, f64::max)
}

/// Row-wise log-softmax, used to renormalize perturbed posteriors.
pub fn renormalize_rows(m: &mut Array2<f64>) {
    for mut row in m.rows_mut() {
        let z = lse(&row.to_vec());
        row.mapv_inplace(|v| v - z);
    }
}
