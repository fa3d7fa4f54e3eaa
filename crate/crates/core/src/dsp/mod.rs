//! Audio loading, resampling, silence trimming and log-mel features.

mod mel;
mod norm;
mod resample;
mod trim;
mod wav;

pub use mel::{hz_to_mel, mel_spectrogram, mel_to_hz, MelFilterbank, MelSpectrogram};
pub use norm::{denormalize_mel, normalize_mel, NormStats};
pub use resample::resample;
pub use trim::trim_silence;
pub use wav::{load_wav, write_wav};

#[derive(Debug, thiserror::Error)]
pub enum DspError {
    #[error("wav: {0}")]
    Wav(String),
    #[error("wav: mono required, found {0} channels")]
    NotMono(u16),
    #[error("wav: 16-bit integer PCM required, found {0}")]
    NotPcm16(String),
    #[error("wav: truncated sample data")]
    Truncated,
    #[error("sample rate must be positive")]
    ZeroSampleRate,
    #[error("waveform at {found} Hz, features expect {expected} Hz")]
    RateMismatch { expected: u32, found: u32 },
    #[error("waveform of {len} samples is shorter than one hop ({hop})")]
    TooShort { len: usize, hop: usize },
    #[error("invalid feature configuration: {0}")]
    Config(String),
    #[error("degenerate normalization statistics: min {min} must be below max {max}")]
    DegenerateStats { min: f64, max: f64 },
    #[error("malformed normalization statistics: {0}")]
    StatsFormat(String),
}

/// Mono audio with samples in [-1, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    pub samples: Vec<f64>,
    pub sample_rate: u32,
}

impl Waveform {
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Self {
        Self {
            samples,
            sample_rate,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_secs(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }

    pub fn peak(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, s| m.max(s.abs()))
    }
}

/// Feature extraction settings. Defaults: 22050 Hz, 1024-point FFT and
/// Hann window, hop 276, 100 HTK mel bands over 0..11025 Hz, natural log
/// with floor 1e-5, normalization to [0, 4], trimming at -40 dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureConfig {
    pub target_rate: u32,
    pub n_fft: usize,
    pub win_length: usize,
    pub hop_length: usize,
    pub n_mels: usize,
    pub fmin: f64,
    pub fmax: f64,
    pub log_floor: f64,
    pub norm_lo: f64,
    pub norm_hi: f64,
    pub trim_threshold_db: f64,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            target_rate: 22050,
            n_fft: 1024,
            win_length: 1024,
            hop_length: 276,
            n_mels: 100,
            fmin: 0.0,
            fmax: 11025.0,
            log_floor: 1e-5,
            norm_lo: 0.0,
            norm_hi: 4.0,
            trim_threshold_db: -40.0,
        }
    }
}

impl FeatureConfig {
    pub fn validate(&self) -> Result<(), DspError> {
        let fail = |m: &str| Err(DspError::Config(m.to_string()));
        if self.target_rate == 0 {
            return fail("target_rate must be positive");
        }
        if self.n_fft < 2 || self.win_length == 0 || self.win_length > self.n_fft {
            return fail("need 0 < win_length <= n_fft and n_fft >= 2");
        }
        if self.hop_length == 0 || self.hop_length > self.win_length {
            return fail("need 0 < hop_length <= win_length");
        }
        if self.n_mels == 0 {
            return fail("n_mels must be positive");
        }
        if !(self.fmin >= 0.0 && self.fmin < self.fmax) {
            return fail("need 0 <= fmin < fmax");
        }
        if self.fmax > self.target_rate as f64 / 2.0 {
            return fail("fmax exceeds the Nyquist frequency");
        }
        if !(self.log_floor > 0.0) {
            return fail("log_floor must be positive");
        }
        if !(self.norm_lo < self.norm_hi) {
            return fail("need norm_lo < norm_hi");
        }
        if !(self.trim_threshold_db < 0.0) {
            return fail("trim_threshold_db must be negative");
        }
        Ok(())
    }

    /// Number of STFT frames for `n` samples.
    pub fn frame_count(&self, n: usize) -> usize {
        1 + n / self.hop_length
    }
}

/// Decode, resample, trim and extract unnormalized log-mel features.
pub fn features_from_wav(bytes: &[u8], cfg: &FeatureConfig) -> Result<MelSpectrogram, DspError> {
    let wav = load_wav(bytes)?;
    let wav = resample(&wav, cfg.target_rate)?;
    let wav = trim_silence(&wav, cfg.trim_threshold_db);
    mel_spectrogram(&wav, cfg)
}
