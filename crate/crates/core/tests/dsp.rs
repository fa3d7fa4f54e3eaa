use std::f64::consts::PI;

use proptest::prelude::*;
use ttsprep::dsp::{
    denormalize_mel, features_from_wav, load_wav, mel_spectrogram, normalize_mel, resample,
    trim_silence, write_wav, FeatureConfig, MelFilterbank, NormStats, Waveform,
};

fn sine(freq: f64, rate: u32, n: usize, amp: f64) -> Waveform {
    Waveform::new(
        (0..n)
            .map(|i| amp * (2.0 * PI * freq * i as f64 / rate as f64).sin())
            .collect(),
        rate,
    )
}

/// Peak bin of a direct O(N^2) DFT magnitude, as a frequency in Hz.
fn dft_peak_hz(x: &[f64], rate: u32) -> (f64, f64) {
    let n = x.len();
    let (mut best_k, mut best) = (0, 0.0);
    for k in 1..n / 2 {
        let (mut re, mut im) = (0.0, 0.0);
        for (i, &v) in x.iter().enumerate() {
            let phi = -2.0 * PI * (k * i) as f64 / n as f64;
            re += v * phi.cos();
            im += v * phi.sin();
        }
        let mag = re.hypot(im);
        if mag > best {
            best = mag;
            best_k = k;
        }
    }
    let bin = rate as f64 / n as f64;
    (best_k as f64 * bin, bin)
}

#[test]
fn resampled_sine_keeps_its_frequency() {
    let w = sine(1000.0, 48000, 9600, 0.8);
    let r = resample(&w, 22050).unwrap();
    assert_eq!(r.len(), 4410);
    // Skip the filter transients at both ends.
    let body = &r.samples[200..200 + 2048];
    let (peak, bin) = dft_peak_hz(body, 22050);
    assert!((peak - 1000.0).abs() <= bin, "peak at {peak} Hz, bin {bin}");
}

#[test]
fn resampled_dc_level_within_tolerance() {
    let w = Waveform::new(vec![0.999; 48000], 48000);
    let r = resample(&w, 22050).unwrap();
    let edge = 64;
    for &s in &r.samples[edge..r.len() - edge] {
        assert!((s - 0.999).abs() < 1e-3);
    }
}

#[test]
fn zero_second_of_audio_gives_floor_frames() {
    let cfg = FeatureConfig::default();
    let w = Waveform::new(vec![0.0; 22050], 22050);
    let m = mel_spectrogram(&w, &cfg).unwrap();
    assert_eq!(m.values.dim(), (80, 100));
    let floor = 1e-5f64.ln();
    assert!((floor + 11.5129).abs() < 1e-4);
    assert!(m.values.iter().all(|&v| v == floor));
}

#[test]
fn sine_energy_lands_in_the_filter_covering_1khz() {
    let cfg = FeatureConfig::default();
    let bank = MelFilterbank::new(&cfg);
    // Oracle: the filter with the largest continuous response at 1 kHz.
    let expected = (0..cfg.n_mels)
        .max_by(|&a, &b| bank.response(a, 1000.0).total_cmp(&bank.response(b, 1000.0)))
        .unwrap();
    let edges = &bank.edges_hz;
    assert!(edges[expected] < 1000.0 && 1000.0 < edges[expected + 2]);

    let w = sine(1000.0, 22050, 22050, 0.5);
    let m = mel_spectrogram(&w, &cfg).unwrap();
    // interior frames only: the reflect padding distorts the first and last
    for t in 2..m.n_frames() - 2 {
        let row = m.values.row(t);
        let argmax = (0..row.len())
            .max_by(|&a, &b| row[a].total_cmp(&row[b]))
            .unwrap();
        assert_eq!(argmax, expected, "frame {t}");
    }
}

#[test]
fn quiet_lead_in_is_trimmed_by_threshold() {
    let rate = 22050;
    let frame = 220;
    let quiet = 10f64.powf(-60.0 / 20.0);
    let mut s: Vec<f64> = (0..frame * 5)
        .map(|i| quiet * (i as f64 * 0.1).sin().signum())
        .collect();
    let loud = sine(440.0, rate, frame * 10, 1.0).samples;
    s.extend(&loud);
    let w = Waveform::new(s, rate);
    let t = trim_silence(&w, -40.0);

    // Direct comparison of every 10 ms frame against the -40 dB threshold.
    let threshold = w.peak() * 10f64.powf(-40.0 / 20.0);
    let kept: Vec<usize> = w
        .samples
        .chunks(frame)
        .enumerate()
        .filter(|(_, c)| c.iter().any(|v| v.abs() >= threshold))
        .map(|(i, _)| i)
        .collect();
    let (first, last) = (kept[0], *kept.last().unwrap());
    assert_eq!(first, 5);
    assert_eq!(t.samples, w.samples[first * frame..((last + 1) * frame).min(w.len())]);
}

#[test]
fn full_feature_path_is_deterministic() {
    let w = sine(300.0, 48000, 24000, 0.3);
    let bytes = write_wav(&w).unwrap();
    let cfg = FeatureConfig::default();
    let a = features_from_wav(&bytes, &cfg).unwrap();
    let b = features_from_wav(&bytes, &cfg).unwrap();
    assert_eq!(a, b);
    let n = load_wav(&bytes).unwrap().len();
    assert_eq!(n, 24000);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn frame_count_law(n in 276usize..8000, seed in 0u64..1000) {
        let cfg = FeatureConfig::default();
        let samples = (0..n).map(|i| ((i as u64 * 2654435761 + seed) % 1000) as f64 / 2000.0 - 0.25).collect();
        let m = mel_spectrogram(&Waveform::new(samples, 22050), &cfg).unwrap();
        prop_assert_eq!(m.n_frames(), 1 + n / 276);
        prop_assert_eq!(m.n_mels(), 100);
    }

    #[test]
    fn normalized_values_stay_in_range(lo in -20.0f64..0.0, width in 0.1f64..20.0, vals in proptest::collection::vec(-40.0f64..40.0, 1..50)) {
        let stats = NormStats::new(lo, lo + width).unwrap();
        let m = ttsprep::dsp::MelSpectrogram {
            values: ndarray::Array2::from_shape_vec((1, vals.len()), vals).unwrap(),
            normalized: false,
            config: FeatureConfig::default(),
        };
        let n = normalize_mel(&m, &stats).unwrap();
        prop_assert!(n.values.iter().all(|&v| (0.0..=4.0).contains(&v)));
        let back = denormalize_mel(&n, &stats).unwrap();
        for (b, v) in back.values.iter().zip(m.values.iter()) {
            let c = v.clamp(stats.min_val, stats.max_val);
            prop_assert!((b - c).abs() < 1e-6);
        }
    }
}
