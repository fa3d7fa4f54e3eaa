use ndarray::Array2;

use super::UpsampleError;

/// Offset of every frame inside its phoneme's segment, by cumulative
/// durations.
pub fn phoneme_relative_positions(durations: &[usize]) -> Result<Vec<usize>, UpsampleError> {
    if durations.is_empty() {
        return Err(UpsampleError::EmptyDurations);
    }
    if let Some(i) = durations.iter().position(|&d| d == 0) {
        return Err(UpsampleError::ZeroDuration(i));
    }
    Ok(durations.iter().flat_map(|&d| 0..d).collect())
}

/// `E[t, 2k] = sin(pos / 10000^(2k/dim))`, `E[t, 2k+1] = cos(...)`.
pub fn sinusoidal_embedding(positions: &[usize], dim: usize) -> Result<Array2<f64>, UpsampleError> {
    if !dim.is_multiple_of(2) {
        return Err(UpsampleError::OddDimension(dim));
    }
    let scales: Vec<f64> = (0..dim / 2)
        .map(|k| 10000f64.powf((2 * k) as f64 / dim as f64))
        .collect();
    Ok(Array2::from_shape_fn((positions.len(), dim), |(t, j)| {
        let angle = positions[t] as f64 / scales[j / 2];
        if j % 2 == 0 {
            angle.sin()
        } else {
            angle.cos()
        }
    }))
}
