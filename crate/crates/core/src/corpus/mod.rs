//! Corpus manifests, run configuration, corpus statistics and the batch
//! pipeline that writes per-utterance artifacts.

mod config;
mod pipeline;

use std::fmt;
use std::ops::Add;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::dsp::{load_wav, trim_silence};
use crate::frontend::normalize_text;

pub use config::{ConfigError, PipelineConfig};
pub use pipeline::{run_pipeline, PipelineOptions, PipelineReport, Stages, UtteranceSummary};

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("manifest line {line}: {msg}")]
    ManifestLine { line: usize, msg: String },
    #[error("duplicate utterance id `{id}` (line {line})")]
    DuplicateId { id: String, line: usize },
    #[error("{id}: {msg}")]
    Utterance { id: String, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("normalization statistics: {0}")]
    Stats(String),
}

pub(crate) fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> CorpusError + '_ {
    move |source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub id: String,
    /// Relative to the corpus root.
    pub audio_path: PathBuf,
    pub transcript: String,
}

/// Utterances in a fixed order with unique ids.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CorpusManifest {
    entries: Vec<ManifestEntry>,
}

fn check_id(id: &str) -> Result<(), String> {
    if id.is_empty() {
        return Err("empty id".into());
    }
    if id == "." || id == ".." || id.contains(['/', '\\']) {
        return Err(format!("id `{id}` cannot be used as a file name"));
    }
    Ok(())
}

impl CorpusManifest {
    /// Builds a manifest from entries produced by any other layout; ids
    /// must be unique and usable as file names.
    pub fn from_entries(entries: Vec<ManifestEntry>) -> Result<Self, CorpusError> {
        let mut seen = std::collections::HashSet::new();
        for (i, e) in entries.iter().enumerate() {
            check_id(&e.id).map_err(|msg| CorpusError::ManifestLine { line: i + 1, msg })?;
            if !seen.insert(e.id.as_str()) {
                return Err(CorpusError::DuplicateId {
                    id: e.id.clone(),
                    line: i + 1,
                });
            }
        }
        Ok(Self { entries })
    }

    /// Parses `id<TAB>path<TAB>transcript` lines. Empty lines are skipped.
    pub fn parse(text: &str) -> Result<Self, CorpusError> {
        let mut entries = Vec::new();
        let mut lines = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.splitn(3, '\t');
            let (id, path, transcript) = match (fields.next(), fields.next(), fields.next()) {
                (Some(id), Some(path), Some(t)) => (id, path, t),
                _ => {
                    return Err(CorpusError::ManifestLine {
                        line: line_no,
                        msg: "expected id<TAB>path<TAB>transcript".into(),
                    })
                }
            };
            check_id(id).map_err(|msg| CorpusError::ManifestLine { line: line_no, msg })?;
            if path.is_empty() {
                return Err(CorpusError::ManifestLine {
                    line: line_no,
                    msg: "empty audio path".into(),
                });
            }
            entries.push(ManifestEntry {
                id: id.to_string(),
                audio_path: PathBuf::from(path),
                transcript: transcript.to_string(),
            });
            lines.push(line_no);
        }
        Self::from_entries(entries).map_err(|e| match e {
            CorpusError::DuplicateId { id, line } => CorpusError::DuplicateId {
                id,
                line: lines[line - 1],
            },
            other => other,
        })
    }

    pub fn load(path: &Path) -> Result<Self, CorpusError> {
        let text = std::fs::read_to_string(path).map_err(io_error(path))?;
        Self::parse(&text)
    }

    pub fn entries(&self) -> &[ManifestEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Manifest text in the same TSV layout [`Self::parse`] reads.
    pub fn to_text(&self) -> String {
        self.entries
            .iter()
            .map(|e| format!("{}\t{}\t{}\n", e.id, e.audio_path.display(), e.transcript))
            .collect()
    }
}

/// Sample count, normalized word count and trimmed audio duration.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CorpusStats {
    pub n_samples: usize,
    pub n_words: usize,
    pub total_hours: f64,
}

impl Add for CorpusStats {
    type Output = Self;

    fn add(self, other: Self) -> Self {
        Self {
            n_samples: self.n_samples + other.n_samples,
            n_words: self.n_words + other.n_words,
            total_hours: self.total_hours + other.total_hours,
        }
    }
}

impl fmt::Display for CorpusStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "samples\t{}", self.n_samples)?;
        writeln!(f, "words\t{}", self.n_words)?;
        write!(f, "hours\t{}", self.total_hours)
    }
}

/// Words in the normalized transcript and seconds of audio left after
/// trimming at the native sample rate.
pub fn utterance_stats(
    entry: &ManifestEntry,
    root: &Path,
    trim_threshold_db: f64,
) -> Result<(usize, f64), CorpusError> {
    let fail = |msg: String| CorpusError::Utterance {
        id: entry.id.clone(),
        msg,
    };
    let words = normalize_text(&entry.transcript).words().count();
    let bytes = std::fs::read(root.join(&entry.audio_path))
        .map_err(|e| fail(format!("cannot read {}: {e}", entry.audio_path.display())))?;
    let wav = load_wav(&bytes).map_err(|e| fail(e.to_string()))?;
    Ok((words, trim_silence(&wav, trim_threshold_db).duration_secs()))
}

/// Statistics over every manifest entry. Any unreadable file aborts with
/// an error naming its id.
pub fn corpus_stats(
    manifest: &CorpusManifest,
    root: &Path,
    trim_threshold_db: f64,
) -> Result<CorpusStats, CorpusError> {
    let per_file = manifest
        .entries
        .par_iter()
        .map(|e| utterance_stats(e, root, trim_threshold_db))
        .collect::<Result<Vec<_>, _>>()?;
    let seconds: f64 = per_file.iter().map(|(_, s)| s).sum();
    Ok(CorpusStats {
        n_samples: per_file.len(),
        n_words: per_file.iter().map(|(w, _)| w).sum(),
        total_hours: seconds / 3600.0,
    })
}
