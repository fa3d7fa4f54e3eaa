//! Regenerates the bundled demo corpus under `data/demo_corpus/`:
//! five synthetic 48 kHz recordings, a manifest, a default configuration
//! and one posteriorgram per utterance whose frame count matches the
//! extracted features.
//!
//! ```text
//! cargo run --example gen_demo_corpus
//! ```

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use anyhow::Result;
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ttsprep::corpus::PipelineConfig;
use ttsprep::dsp::{features_from_wav, write_wav, Waveform};
use ttsprep::formats::{write_matrix, MatrixKind};
use ttsprep::frontend::{grapheme_to_phoneme, normalize_text, PhonemeInventory};

const RATE: u32 = 48_000;

const UTTERANCES: [(&str, &str); 5] = [
    ("demo001", "Hola, ¿qué tal estás?"),
    ("demo002", "El tren sale a las 7 y llega a las 10."),
    ("demo003", "Compré 21 manzanas y 1500 gramos de queso."),
    ("demo004", "La lluvia en Sevilla es una maravilla."),
    ("demo005", "¡Qué bien! Mañana cumplo 42 años."),
];

/// Silence, then a harmonic tone with syllable-rate amplitude modulation
/// and a little noise, then silence again.
fn synth(rng: &mut ChaCha8Rng, seconds: f64, f0: f64) -> Waveform {
    let lead = (0.3 * RATE as f64) as usize;
    let tail = (0.4 * RATE as f64) as usize;
    let body = (seconds * RATE as f64) as usize;
    let mut samples = vec![0.0; lead];
    for i in 0..body {
        let t = i as f64 / RATE as f64;
        let pitch = f0 * (1.0 + 0.03 * (2.0 * PI * 5.0 * t).sin());
        let phase = 2.0 * PI * pitch * t;
        let voiced: f64 = (1..=8).map(|h| (h as f64 * phase).sin() / h as f64).sum();
        let syllables = 0.55 + 0.45 * (2.0 * PI * 4.0 * t).sin();
        let fade = (t / 0.02).min(1.0) * ((seconds - t) / 0.02).min(1.0);
        let noise = rng.gen_range(-1.0..1.0) * 0.02;
        samples.push(0.25 * fade * (syllables * voiced + noise));
    }
    samples.extend(std::iter::repeat_n(0.0, tail));
    Waveform::new(samples, RATE)
}

/// Log-posteriors that favour the labels spread evenly over the frames.
fn posteriorgram(rng: &mut ChaCha8Rng, labels: &[usize], frames: usize, classes: usize) -> Array2<f64> {
    let blank = classes - 1;
    let mut m = Array2::zeros((frames, classes));
    for t in 0..frames {
        let target = labels[t * labels.len() / frames];
        let mut row: Vec<f64> = (0..classes).map(|_| rng.gen_range(0.0..1.0)).collect();
        row[target] += 8.0;
        row[blank] += 3.0;
        let z = row.iter().map(|v| v.exp()).sum::<f64>().ln();
        for (c, v) in row.into_iter().enumerate() {
            m[[t, c]] = v - z;
        }
    }
    m
}

fn main() -> Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/demo_corpus");
    fs::create_dir_all(dir.join("wav"))?;
    fs::create_dir_all(dir.join("posteriors"))?;
    let cfg = PipelineConfig::default();
    let inventory = PhonemeInventory::castilian();
    let mut rng = ChaCha8Rng::seed_from_u64(2021);
    let mut manifest = String::new();

    for (k, (id, text)) in UTTERANCES.iter().enumerate() {
        let wav = synth(&mut rng, 1.6 + 0.3 * k as f64, 110.0 + 20.0 * k as f64);
        let bytes = write_wav(&wav)?;
        fs::write(dir.join(format!("wav/{id}.wav")), &bytes)?;
        manifest.push_str(&format!("{id}\twav/{id}.wav\t{text}\n"));

        let mel = features_from_wav(&bytes, &cfg.features)?;
        let phonemes = grapheme_to_phoneme(normalize_text(text), &inventory)?;
        let labels = phonemes.to_ids(&inventory)?;
        let post = posteriorgram(&mut rng, &labels, mel.n_frames(), inventory.len() + 1);
        fs::write(
            dir.join(format!("posteriors/{id}.post")),
            write_matrix(MatrixKind::Posteriors, &post)?,
        )?;
        println!("{id}: {} frames, {} phonemes", mel.n_frames(), labels.len());
    }
    fs::write(dir.join("manifest.tsv"), manifest)?;
    fs::write(dir.join("config.txt"), cfg.to_text())?;
    Ok(())
}
