use std::f64::consts::PI;

use ndarray::{Array1, Array2};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::{DspError, FeatureConfig, Waveform};

pub fn hz_to_mel(hz: f64) -> f64 {
    2595.0 * (1.0 + hz / 700.0).log10()
}

pub fn mel_to_hz(mel: f64) -> f64 {
    700.0 * (10f64.powf(mel / 2595.0) - 1.0)
}

/// Log-mel matrix, one row per frame.
#[derive(Debug, Clone, PartialEq)]
pub struct MelSpectrogram {
    pub values: Array2<f64>,
    pub normalized: bool,
    pub config: FeatureConfig,
}

impl MelSpectrogram {
    pub fn n_frames(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_mels(&self) -> usize {
        self.values.ncols()
    }
}

/// Triangular HTK-scale filters, each scaled to unit area in Hz.
#[derive(Debug, Clone)]
pub struct MelFilterbank {
    /// `n_mels x (n_fft/2 + 1)`
    pub weights: Array2<f64>,
    /// `n_mels + 2` band edges in Hz; filter `m` peaks at `edges[m + 1]`.
    pub edges_hz: Vec<f64>,
}

impl MelFilterbank {
    pub fn new(cfg: &FeatureConfig) -> Self {
        let n_freq = cfg.n_fft / 2 + 1;
        let lo = hz_to_mel(cfg.fmin);
        let hi = hz_to_mel(cfg.fmax);
        let edges_hz: Vec<f64> = (0..cfg.n_mels + 2)
            .map(|i| mel_to_hz(lo + (hi - lo) * i as f64 / (cfg.n_mels + 1) as f64))
            .collect();
        let bin_hz = cfg.target_rate as f64 / cfg.n_fft as f64;
        let mut weights = Array2::zeros((cfg.n_mels, n_freq));
        for m in 0..cfg.n_mels {
            let (left, center, right) = (edges_hz[m], edges_hz[m + 1], edges_hz[m + 2]);
            let scale = 2.0 / (right - left);
            for k in 0..n_freq {
                let f = k as f64 * bin_hz;
                let rise = (f - left) / (center - left);
                let fall = (right - f) / (right - center);
                weights[[m, k]] = rise.min(fall).max(0.0) * scale;
            }
        }
        Self { weights, edges_hz }
    }

    pub fn centers_hz(&self) -> &[f64] {
        &self.edges_hz[1..self.edges_hz.len() - 1]
    }

    /// Continuous response of filter `m` at frequency `hz`.
    pub fn response(&self, m: usize, hz: f64) -> f64 {
        let (left, center, right) = (self.edges_hz[m], self.edges_hz[m + 1], self.edges_hz[m + 2]);
        let rise = (hz - left) / (center - left);
        let fall = (right - hz) / (right - center);
        rise.min(fall).max(0.0) * 2.0 / (right - left)
    }
}

fn reflect_index(i: isize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    let period = 2 * (n as isize - 1);
    let m = i.rem_euclid(period);
    if m < n as isize {
        m as usize
    } else {
        (period - m) as usize
    }
}

/// Periodic Hann window of `win_length`, centered in `n_fft` points.
fn padded_window(cfg: &FeatureConfig) -> Vec<f64> {
    let mut window = vec![0.0; cfg.n_fft];
    let offset = (cfg.n_fft - cfg.win_length) / 2;
    for i in 0..cfg.win_length {
        window[offset + i] = 0.5 - 0.5 * (2.0 * PI * i as f64 / cfg.win_length as f64).cos();
    }
    window
}

/// Unnormalized log-mel spectrogram with `1 + N / hop_length` frames.
///
/// The signal is reflect-padded by `n_fft / 2` on both sides, so frame `t` is
/// centered on sample `t * hop_length`.
pub fn mel_spectrogram(w: &Waveform, cfg: &FeatureConfig) -> Result<MelSpectrogram, DspError> {
    cfg.validate()?;
    if w.sample_rate != cfg.target_rate {
        return Err(DspError::RateMismatch {
            expected: cfg.target_rate,
            found: w.sample_rate,
        });
    }
    let n = w.samples.len();
    if n < cfg.hop_length {
        return Err(DspError::TooShort {
            len: n,
            hop: cfg.hop_length,
        });
    }

    let bank = MelFilterbank::new(cfg);
    let window = padded_window(cfg);
    let fft = FftPlanner::new().plan_fft_forward(cfg.n_fft);
    let pad = (cfg.n_fft / 2) as isize;
    let n_frames = cfg.frame_count(n);
    let n_freq = cfg.n_fft / 2 + 1;

    let mut values = Array2::zeros((n_frames, cfg.n_mels));
    let mut buf = vec![Complex::new(0.0, 0.0); cfg.n_fft];
    let mut scratch = vec![Complex::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    let mut magnitude = Array1::zeros(n_freq);
    for t in 0..n_frames {
        let start = (t * cfg.hop_length) as isize - pad;
        for (i, slot) in buf.iter_mut().enumerate() {
            let s = w.samples[reflect_index(start + i as isize, n)];
            *slot = Complex::new(s * window[i], 0.0);
        }
        fft.process_with_scratch(&mut buf, &mut scratch);
        for k in 0..n_freq {
            magnitude[k] = buf[k].norm();
        }
        let mel = bank.weights.dot(&magnitude);
        for (m, v) in mel.iter().enumerate() {
            values[[t, m]] = v.max(cfg.log_floor).ln();
        }
    }
    Ok(MelSpectrogram {
        values,
        normalized: false,
        config: *cfg,
    })
}
