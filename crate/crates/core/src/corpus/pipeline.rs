//! Two-pass batch processing. Pass 1 runs the frontend, feature extraction
//! and alignment per utterance in parallel; the corpus-wide normalization
//! statistics are fixed at the barrier; pass 2 normalizes and writes.
//! Results are always merged in manifest order, so the output tree does not
//! depend on the worker count.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::{io_error, CorpusError, CorpusManifest, CorpusStats, ManifestEntry, PipelineConfig};
use crate::align::{best_monotonic_path, durations_from_path, PosteriorGram};
use crate::dsp::{
    load_wav, mel_spectrogram, normalize_mel, resample, trim_silence, MelSpectrogram, NormStats,
};
use crate::formats::{read_matrix, write_durations, write_matrix, MatrixKind};
use crate::frontend::{grapheme_to_phoneme, normalize_text, PhonemeInventory, PhonemeSequence};

/// Which artifacts a run produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stages {
    /// `<id>.txt`, the normalized transcript.
    pub text: bool,
    /// `<id>.phn` and `phonemes.txt`.
    pub phonemes: bool,
    /// `<id>.mel` and `norm_stats.txt`.
    pub features: bool,
    /// `<id>.dur` for every utterance with a posteriorgram.
    pub durations: bool,
}

impl Stages {
    pub const ALL: Stages = Stages {
        text: true,
        phonemes: true,
        features: true,
        durations: true,
    };

    fn needs_audio(&self) -> bool {
        self.features || self.durations
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOptions {
    pub stages: Stages,
    /// Thread count; 0 lets the thread pool decide.
    pub workers: usize,
    /// Directory holding `<id>.post` posteriorgram files.
    pub posteriors: Option<PathBuf>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            stages: Stages::ALL,
            workers: 0,
            posteriors: None,
        }
    }
}

/// What a successful utterance produced.
#[derive(Debug, Clone, PartialEq)]
pub struct UtteranceSummary {
    pub n_words: usize,
    pub n_phonemes: usize,
    /// Feature frames, when audio was processed.
    pub n_frames: Option<usize>,
    /// Trimmed duration at the native rate, when audio was processed.
    pub seconds: Option<f64>,
    pub has_durations: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineReport {
    /// One entry per manifest id, in manifest order.
    pub outcomes: Vec<(String, Result<UtteranceSummary, String>)>,
    pub norm_stats: Option<NormStats>,
    pub stages: Stages,
}

impl PipelineReport {
    pub fn n_failed(&self) -> usize {
        self.outcomes.iter().filter(|(_, r)| r.is_err()).count()
    }

    /// Statistics over the successful utterances; `None` when no audio was
    /// processed.
    pub fn stats(&self) -> Option<CorpusStats> {
        if !self.stages.needs_audio() {
            return None;
        }
        let ok: Vec<&UtteranceSummary> =
            self.outcomes.iter().filter_map(|(_, r)| r.as_ref().ok()).collect();
        let seconds: f64 = ok.iter().filter_map(|u| u.seconds).sum();
        Some(CorpusStats {
            n_samples: ok.len(),
            n_words: ok.iter().map(|u| u.n_words).sum(),
            total_hours: seconds / 3600.0,
        })
    }

    /// Contents of `summary.txt`.
    pub fn summary_text(&self) -> String {
        let mut out = String::new();
        let total = self.outcomes.len();
        let failed = self.n_failed();
        let _ = writeln!(out, "utterances\t{total}");
        let _ = writeln!(out, "succeeded\t{}", total - failed);
        let _ = writeln!(out, "failed\t{failed}");
        if let Some(stats) = self.stats() {
            let _ = writeln!(out, "{stats}");
        }
        if self.stages.durations {
            let aligned = self
                .outcomes
                .iter()
                .filter(|(_, r)| matches!(r, Ok(u) if u.has_durations))
                .count();
            let _ = writeln!(out, "aligned\t{aligned}");
        }
        out.push('\n');
        for (id, r) in &self.outcomes {
            match r {
                Ok(u) => {
                    let _ = write!(out, "{id}\tok\twords={} phonemes={}", u.n_words, u.n_phonemes);
                    if let Some(n) = u.n_frames {
                        let _ = write!(out, " frames={n}");
                    }
                    if self.stages.durations {
                        let _ = write!(out, " durations={}", if u.has_durations { "yes" } else { "no" });
                    }
                    out.push('\n');
                }
                Err(msg) => {
                    let _ = writeln!(out, "{id}\tfailed\t{}", msg.replace('\n', " "));
                }
            }
        }
        out
    }
}

struct FirstPass {
    text: String,
    phonemes: PhonemeSequence,
    n_words: usize,
    mel: Option<MelSpectrogram>,
    seconds: Option<f64>,
    durations: Option<Vec<usize>>,
}

fn first_pass(
    entry: &ManifestEntry,
    root: &Path,
    cfg: &PipelineConfig,
    inventory: &PhonemeInventory,
    opts: &PipelineOptions,
) -> Result<FirstPass, String> {
    let normalized = normalize_text(&entry.transcript);
    let n_words = normalized.words().count();
    if n_words == 0 {
        return Err("transcript is empty after normalization".into());
    }
    let phonemes = grapheme_to_phoneme(&normalized, inventory).map_err(|e| e.to_string())?;
    let mut out = FirstPass {
        text: normalized.into_string(),
        phonemes,
        n_words,
        mel: None,
        seconds: None,
        durations: None,
    };
    if !opts.stages.needs_audio() {
        return Ok(out);
    }

    let audio = root.join(&entry.audio_path);
    let bytes = fs::read(&audio)
        .map_err(|e| format!("cannot read {}: {e}", entry.audio_path.display()))?;
    let fc = &cfg.features;
    let wav = load_wav(&bytes).map_err(|e| e.to_string())?;
    out.seconds = Some(trim_silence(&wav, fc.trim_threshold_db).duration_secs());
    let wav = resample(&wav, fc.target_rate).map_err(|e| e.to_string())?;
    let wav = trim_silence(&wav, fc.trim_threshold_db);
    let mel = mel_spectrogram(&wav, fc).map_err(|e| e.to_string())?;

    if opts.stages.durations {
        if let Some(dir) = &opts.posteriors {
            let post_path = dir.join(format!("{}.post", entry.id));
            if post_path.exists() {
                out.durations = Some(align(&post_path, &out.phonemes, &mel, inventory)?);
            }
        }
    }
    out.mel = Some(mel);
    Ok(out)
}

fn align(
    path: &Path,
    phonemes: &PhonemeSequence,
    mel: &MelSpectrogram,
    inventory: &PhonemeInventory,
) -> Result<Vec<usize>, String> {
    let bytes = fs::read(path).map_err(|e| format!("cannot read posteriorgram: {e}"))?;
    let log_probs = read_matrix(MatrixKind::Posteriors, &bytes)
        .map_err(|e| format!("posteriorgram: {e}"))?;
    if log_probs.nrows() != mel.n_frames() {
        return Err(format!(
            "posteriorgram has {} frames but the features have {}",
            log_probs.nrows(),
            mel.n_frames()
        ));
    }
    if log_probs.ncols() != inventory.len() + 1 {
        return Err(format!(
            "posteriorgram has {} classes, expected {} phonemes plus blank",
            log_probs.ncols(),
            inventory.len()
        ));
    }
    let posterior = PosteriorGram::new(log_probs).map_err(|e| format!("posteriorgram: {e}"))?;
    let labels = phonemes.to_ids(inventory).map_err(|e| e.to_string())?;
    let path = best_monotonic_path(&posterior, &labels).map_err(|e| e.to_string())?;
    Ok(durations_from_path(&path).map_err(|e| e.to_string())?.0)
}

fn write(path: PathBuf, bytes: impl AsRef<[u8]>) -> Result<(), CorpusError> {
    fs::write(&path, bytes).map_err(io_error(&path))
}

/// Runs the selected stages over `manifest` and writes artifacts under
/// `out_dir`. Per-utterance failures are collected in the report; only
/// configuration, I/O on the output tree and degenerate corpus statistics
/// abort the run.
pub fn run_pipeline(
    manifest: &CorpusManifest,
    root: &Path,
    cfg: &PipelineConfig,
    out_dir: &Path,
    opts: &PipelineOptions,
) -> Result<PipelineReport, CorpusError> {
    cfg.validate()?;
    let inventory = PhonemeInventory::castilian();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()
        .map_err(|e| CorpusError::Stats(format!("cannot start worker pool: {e}")))?;

    let first: Vec<Result<FirstPass, String>> = pool.install(|| {
        manifest
            .entries()
            .par_iter()
            .map(|e| first_pass(e, root, cfg, &inventory, opts))
            .collect()
    });

    // barrier: corpus-wide extrema over every successful utterance
    let norm_stats = if opts.stages.features {
        let mels: Vec<&MelSpectrogram> = first
            .iter()
            .filter_map(|r| r.as_ref().ok().and_then(|p| p.mel.as_ref()))
            .collect();
        if mels.is_empty() {
            None
        } else {
            Some(
                NormStats::from_spectrograms(mels)
                    .map_err(|e| CorpusError::Stats(e.to_string()))?,
            )
        }
    } else {
        None
    };

    let encoded: Vec<Result<Option<Vec<u8>>, String>> = pool.install(|| {
        first
            .par_iter()
            .map(|r| match (r, &norm_stats) {
                (Ok(FirstPass { mel: Some(mel), .. }), Some(stats)) => {
                    let normalized = normalize_mel(mel, stats).map_err(|e| e.to_string())?;
                    write_matrix(MatrixKind::Features, &normalized.values)
                        .map(Some)
                        .map_err(|e| e.to_string())
                }
                _ => Ok(None),
            })
            .collect()
    });

    fs::create_dir_all(out_dir).map_err(io_error(out_dir))?;
    if opts.stages.phonemes {
        write(out_dir.join("phonemes.txt"), inventory.to_text())?;
    }
    if let Some(stats) = &norm_stats {
        write(out_dir.join("norm_stats.txt"), stats.to_text())?;
    }

    let mut outcomes = Vec::with_capacity(manifest.len());
    for ((entry, pass), mel_bytes) in manifest.entries().iter().zip(first).zip(encoded) {
        let result = pass.and_then(|p| mel_bytes.map(|b| (p, b)));
        let (p, mel_bytes) = match result {
            Ok(v) => v,
            Err(msg) => {
                outcomes.push((entry.id.clone(), Err(msg)));
                continue;
            }
        };
        let stem = |ext: &str| out_dir.join(format!("{}.{ext}", entry.id));
        if opts.stages.text {
            write(stem("txt"), format!("{}\n", p.text))?;
        }
        if opts.stages.phonemes {
            write(stem("phn"), format!("{}\n", p.phonemes))?;
        }
        if let Some(bytes) = mel_bytes {
            write(stem("mel"), bytes)?;
        }
        if let Some(d) = &p.durations {
            let text = write_durations(p.phonemes.symbols(), d).map_err(|e| CorpusError::Utterance {
                id: entry.id.clone(),
                msg: e.to_string(),
            })?;
            write(stem("dur"), text)?;
        }
        outcomes.push((
            entry.id.clone(),
            Ok(UtteranceSummary {
                n_words: p.n_words,
                n_phonemes: p.phonemes.len(),
                n_frames: p.mel.as_ref().map(|m| m.n_frames()),
                seconds: p.seconds,
                has_durations: p.durations.is_some(),
            }),
        ));
    }

    let report = PipelineReport {
        outcomes,
        norm_stats,
        stages: opts.stages,
    };
    write(out_dir.join("summary.txt"), report.summary_text())?;
    Ok(report)
}
