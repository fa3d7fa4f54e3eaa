use ndarray::{Array1, Array2};

use super::UpsampleError;

/// Durations `d_i` and Gaussian ranges `sigma_i` in frames.
#[derive(Debug, Clone, PartialEq)]
pub struct UpsampleSpec {
    durations: Vec<f64>,
    ranges: Vec<f64>,
}

/// `sigma_i = max(d_i / 3, 0.1)`
pub fn default_ranges(durations: &[f64]) -> Vec<f64> {
    durations.iter().map(|d| (d / 3.0).max(0.1)).collect()
}

fn check_positive(what: &'static str, values: &[f64]) -> Result<(), UpsampleError> {
    match values
        .iter()
        .enumerate()
        .find(|(_, v)| !(v.is_finite() && **v > 0.0))
    {
        Some((index, &value)) => Err(UpsampleError::NotPositive { what, index, value }),
        None => Ok(()),
    }
}

impl UpsampleSpec {
    /// Ranges default to [`default_ranges`] when `None`.
    pub fn new(durations: Vec<f64>, ranges: Option<Vec<f64>>) -> Result<Self, UpsampleError> {
        if durations.is_empty() {
            return Err(UpsampleError::EmptyDurations);
        }
        let ranges = ranges.unwrap_or_else(|| default_ranges(&durations));
        if ranges.len() != durations.len() {
            return Err(UpsampleError::LengthMismatch {
                expected: durations.len(),
                found: ranges.len(),
            });
        }
        check_positive("duration", &durations)?;
        check_positive("range", &ranges)?;
        Ok(Self { durations, ranges })
    }

    pub fn durations(&self) -> &[f64] {
        &self.durations
    }

    pub fn ranges(&self) -> &[f64] {
        &self.ranges
    }

    pub fn len(&self) -> usize {
        self.durations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.durations.is_empty()
    }

    /// Segment midpoints `c_i = sum_{j<=i} d_j - d_i / 2`.
    pub fn centers(&self) -> Vec<f64> {
        let mut end = 0.0;
        self.durations
            .iter()
            .map(|d| {
                end += d;
                end - d / 2.0
            })
            .collect()
    }

    /// `round(sum d_i)`, halves rounded up.
    pub fn total_frames(&self) -> usize {
        (self.durations.iter().sum::<f64>() + 0.5).floor() as usize
    }
}

/// Softmax-normalized Gaussian weights, `T x N`, for frame centers `t + 0.5`.
fn weights(spec: &UpsampleSpec, frames: usize) -> Array2<f64> {
    let centers = spec.centers();
    let mut w = Array2::zeros((frames, spec.len()));
    for t in 0..frames {
        let p = t as f64 + 0.5;
        let mut row = w.row_mut(t);
        for (i, (&c, &s)) in centers.iter().zip(&spec.ranges).enumerate() {
            row[i] = -(p - c).powi(2) / (2.0 * s * s);
        }
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        row.mapv_inplace(|z| (z - max).exp());
        let sum = row.sum();
        row.mapv_inplace(|v| v / sum);
    }
    w
}

fn check_hidden(hidden: &Array2<f64>, spec: &UpsampleSpec) -> Result<usize, UpsampleError> {
    if hidden.nrows() == 0 || hidden.ncols() == 0 {
        return Err(UpsampleError::EmptyHidden);
    }
    if hidden.nrows() != spec.len() {
        return Err(UpsampleError::LengthMismatch {
            expected: hidden.nrows(),
            found: spec.len(),
        });
    }
    match spec.total_frames() {
        0 => Err(UpsampleError::NoFrames),
        t => Ok(t),
    }
}

/// Frame `t` is `sum_i w[t, i] * hidden[i]`. Returns the `T x D` frames and
/// the `T x N` weights.
pub fn gaussian_upsample(
    hidden: &Array2<f64>,
    spec: &UpsampleSpec,
) -> Result<(Array2<f64>, Array2<f64>), UpsampleError> {
    let frames = check_hidden(hidden, spec)?;
    let w = weights(spec, frames);
    Ok((w.dot(hidden), w))
}

#[derive(Debug, Clone, PartialEq)]
pub struct UpsampleGrads {
    pub hidden: Array2<f64>,
    pub durations: Vec<f64>,
    pub ranges: Vec<f64>,
}

/// Vector-Jacobian product of [`gaussian_upsample`]: given `dF/dframes`,
/// returns `dF` with respect to the hidden rows, durations and ranges.
///
/// The frame count is treated as fixed; it only changes at rounding
/// boundaries of `sum d_i`, where the output is discontinuous anyway.
pub fn gaussian_upsample_backward(
    hidden: &Array2<f64>,
    spec: &UpsampleSpec,
    grad_frames: &Array2<f64>,
) -> Result<UpsampleGrads, UpsampleError> {
    let frames = check_hidden(hidden, spec)?;
    let expected = (frames, hidden.ncols());
    if grad_frames.dim() != expected {
        return Err(UpsampleError::GradShape {
            expected,
            found: grad_frames.dim(),
        });
    }
    let n = spec.len();
    let w = weights(spec, frames);
    let grad_hidden = w.t().dot(grad_frames);

    // dF/dw[t, i] = <g_t, h_i>, then back through the row softmax.
    let a = grad_frames.dot(&hidden.t());
    let centers = spec.centers();
    let mut grad_centers = Array1::<f64>::zeros(n);
    let mut grad_ranges = vec![0.0; n];
    for t in 0..frames {
        let p = t as f64 + 0.5;
        let mean: f64 = (0..n).map(|i| w[[t, i]] * a[[t, i]]).sum();
        for i in 0..n {
            let dz = w[[t, i]] * (a[[t, i]] - mean);
            let s = spec.ranges[i];
            let diff = p - centers[i];
            grad_centers[i] += dz * diff / (s * s);
            grad_ranges[i] += dz * diff * diff / (s * s * s);
        }
    }
    // c_i depends on d_j with weight 1 for j < i and 1/2 for j = i.
    let mut grad_durations = vec![0.0; n];
    let mut later = 0.0;
    for j in (0..n).rev() {
        grad_durations[j] = later + 0.5 * grad_centers[j];
        later += grad_centers[j];
    }
    Ok(UpsampleGrads {
        hidden: grad_hidden,
        durations: grad_durations,
        ranges: grad_ranges,
    })
}
