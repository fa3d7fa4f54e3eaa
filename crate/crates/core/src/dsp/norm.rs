use super::{DspError, MelSpectrogram};

/// Corpus-level extrema of the unnormalized log-mel values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormStats {
    pub min_val: f64,
    pub max_val: f64,
}

impl NormStats {
    pub fn new(min_val: f64, max_val: f64) -> Result<Self, DspError> {
        if !(min_val.is_finite() && max_val.is_finite() && min_val < max_val) {
            return Err(DspError::DegenerateStats {
                min: min_val,
                max: max_val,
            });
        }
        Ok(Self { min_val, max_val })
    }

    /// Extrema over every value of every spectrogram.
    pub fn from_spectrograms<'a, I>(mels: I) -> Result<Self, DspError>
    where
        I: IntoIterator<Item = &'a MelSpectrogram>,
    {
        let (lo, hi) = mels
            .into_iter()
            .flat_map(|m| m.values.iter())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        Self::new(lo, hi)
    }

    /// `min=<float>` and `max=<float>` lines.
    pub fn to_text(&self) -> String {
        format!("min={}\nmax={}\n", self.min_val, self.max_val)
    }

    pub fn from_text(text: &str) -> Result<Self, DspError> {
        let mut min = None;
        let mut max = None;
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| DspError::StatsFormat(format!("line {line:?}")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| DspError::StatsFormat(format!("value {value:?}")))?;
            match key.trim() {
                "min" => min = Some(value),
                "max" => max = Some(value),
                other => return Err(DspError::StatsFormat(format!("unknown key {other:?}"))),
            }
        }
        match (min, max) {
            (Some(lo), Some(hi)) => Self::new(lo, hi),
            _ => Err(DspError::StatsFormat("both min and max are required".into())),
        }
    }
}

/// Maps clamped values affinely onto `[norm_lo, norm_hi]` of the
/// spectrogram's config.
pub fn normalize_mel(m: &MelSpectrogram, stats: &NormStats) -> Result<MelSpectrogram, DspError> {
    let stats = NormStats::new(stats.min_val, stats.max_val)?;
    let (lo, hi) = (m.config.norm_lo, m.config.norm_hi);
    let span = stats.max_val - stats.min_val;
    let values = m.values.mapv(|v| {
        let c = v.clamp(stats.min_val, stats.max_val);
        lo + (hi - lo) * (c - stats.min_val) / span
    });
    Ok(MelSpectrogram {
        values,
        normalized: true,
        config: m.config,
    })
}

pub fn denormalize_mel(m: &MelSpectrogram, stats: &NormStats) -> Result<MelSpectrogram, DspError> {
    let stats = NormStats::new(stats.min_val, stats.max_val)?;
    let (lo, hi) = (m.config.norm_lo, m.config.norm_hi);
    let span = stats.max_val - stats.min_val;
    let values = m
        .values
        .mapv(|v| stats.min_val + (v.clamp(lo, hi) - lo) / (hi - lo) * span);
    Ok(MelSpectrogram {
        values,
        normalized: false,
        config: m.config,
    })
}
