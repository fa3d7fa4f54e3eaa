//! Flat `key = value` run configuration covering every feature and loss
//! setting.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::dsp::FeatureConfig;
use crate::losses::LossConfig;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),
    #[error("invalid value `{value}` for `{key}`")]
    BadValue { key: String, value: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PipelineConfig {
    pub features: FeatureConfig,
    pub loss: LossConfig,
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
    })
}

impl PipelineConfig {
    /// Every recognised key, feature settings first.
    pub const KEYS: [&'static str; 20] = [
        "target_rate",
        "n_fft",
        "win_length",
        "hop_length",
        "n_mels",
        "fmin",
        "fmax",
        "log_floor",
        "norm_lo",
        "norm_hi",
        "trim_threshold_db",
        "lambda_l1",
        "lambda_ssim",
        "lambda_dur",
        "ssim_window",
        "ssim_sigma",
        "dynamic_range",
        "k1",
        "k2",
        "huber_delta",
    ];

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let f = &mut self.features;
        let l = &mut self.loss;
        let v = value.trim();
        match key {
            "target_rate" => f.target_rate = parse(key, v)?,
            "n_fft" => f.n_fft = parse(key, v)?,
            "win_length" => f.win_length = parse(key, v)?,
            "hop_length" => f.hop_length = parse(key, v)?,
            "n_mels" => f.n_mels = parse(key, v)?,
            "fmin" => f.fmin = parse(key, v)?,
            "fmax" => f.fmax = parse(key, v)?,
            "log_floor" => f.log_floor = parse(key, v)?,
            "norm_lo" => f.norm_lo = parse(key, v)?,
            "norm_hi" => f.norm_hi = parse(key, v)?,
            "trim_threshold_db" => f.trim_threshold_db = parse(key, v)?,
            "lambda_l1" => l.lambda_l1 = parse(key, v)?,
            "lambda_ssim" => l.lambda_ssim = parse(key, v)?,
            "lambda_dur" => l.lambda_dur = parse(key, v)?,
            "ssim_window" => l.ssim_window = parse(key, v)?,
            "ssim_sigma" => l.ssim_sigma = parse(key, v)?,
            "dynamic_range" => l.dynamic_range = parse(key, v)?,
            "k1" => l.k1 = parse(key, v)?,
            "k2" => l.k2 = parse(key, v)?,
            "huber_delta" => l.huber_delta = parse(key, v)?,
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    /// Applies `key = value` lines on top of `self`. Blank lines and `#`
    /// comments are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or(ConfigError::Syntax { line: i + 1 })?;
            let key = key.trim();
            if key.is_empty() || value.trim().is_empty() {
                return Err(ConfigError::Syntax { line: i + 1 });
            }
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        cfg.apply_text(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.features
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.loss
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    /// All keys with their current values, parseable by [`Self::from_text`].
    pub fn to_text(&self) -> String {
        let f = &self.features;
        let l = &self.loss;
        let values: [String; 20] = [
            f.target_rate.to_string(),
            f.n_fft.to_string(),
            f.win_length.to_string(),
            f.hop_length.to_string(),
            f.n_mels.to_string(),
            f.fmin.to_string(),
            f.fmax.to_string(),
            f.log_floor.to_string(),
            f.norm_lo.to_string(),
            f.norm_hi.to_string(),
            f.trim_threshold_db.to_string(),
            l.lambda_l1.to_string(),
            l.lambda_ssim.to_string(),
            l.lambda_dur.to_string(),
            l.ssim_window.to_string(),
            l.ssim_sigma.to_string(),
            l.dynamic_range.to_string(),
            l.k1.to_string(),
            l.k2.to_string(),
            l.huber_delta.to_string(),
        ];
        let mut out = String::new();
        for (k, v) in Self::KEYS.iter().zip(values) {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}
