//! Phoneme-to-frame expansion by repetition or Gaussian weighting, plus
//! phoneme-relative sinusoidal positional embeddings.

mod gaussian;
mod positional;

use ndarray::Array2;

pub use gaussian::{
    default_ranges, gaussian_upsample, gaussian_upsample_backward, UpsampleGrads, UpsampleSpec,
};
pub use positional::{phoneme_relative_positions, sinusoidal_embedding};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum UpsampleError {
    #[error("expected {expected} durations, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("{what} {index} must be positive and finite, got {value}")]
    NotPositive {
        what: &'static str,
        index: usize,
        value: f64,
    },
    #[error("duration sequence is empty")]
    EmptyDurations,
    #[error("duration {0} is zero")]
    ZeroDuration(usize),
    #[error("embedding dimension {0} is odd")]
    OddDimension(usize),
    #[error("total duration rounds to zero frames")]
    NoFrames,
    #[error("hidden sequence needs at least one row and one column")]
    EmptyHidden,
    #[error("upstream gradient has shape {found:?}, expected {expected:?}")]
    GradShape {
        expected: (usize, usize),
        found: (usize, usize),
    },
}

/// Repeats row `i` of `hidden` `durations[i]` times; zero skips the row.
pub fn repeat_upsample(hidden: &Array2<f64>, durations: &[usize]) -> Result<Array2<f64>, UpsampleError> {
    if durations.len() != hidden.nrows() {
        return Err(UpsampleError::LengthMismatch {
            expected: hidden.nrows(),
            found: durations.len(),
        });
    }
    let total: usize = durations.iter().sum();
    let mut frames = Array2::zeros((total, hidden.ncols()));
    let mut t = 0;
    for (row, &d) in hidden.rows().into_iter().zip(durations) {
        for _ in 0..d {
            frames.row_mut(t).assign(&row);
            t += 1;
        }
    }
    Ok(frames)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn repetition() {
        let h = array![[1.0, 10.0], [2.0, 20.0]];
        let f = repeat_upsample(&h, &[2, 3]).unwrap();
        assert_eq!(
            f,
            array![[1.0, 10.0], [1.0, 10.0], [2.0, 20.0], [2.0, 20.0], [2.0, 20.0]]
        );
        assert_eq!(repeat_upsample(&h, &[0, 1]).unwrap(), array![[2.0, 20.0]]);
        assert!(matches!(
            repeat_upsample(&h, &[1]),
            Err(UpsampleError::LengthMismatch { expected: 2, found: 1 })
        ));
    }
}
