use super::Waveform;

/// Removes leading and trailing 10 ms frames whose peak stays below
/// `peak(w) * 10^(threshold_db / 20)`. Interior frames are kept as-is, and an
/// all-silent input yields an empty waveform.
pub fn trim_silence(w: &Waveform, threshold_db: f64) -> Waveform {
    let peak = w.peak();
    if peak == 0.0 {
        return Waveform::new(Vec::new(), w.sample_rate);
    }
    let threshold = peak * 10f64.powf(threshold_db / 20.0);
    let frame = (w.sample_rate as usize / 100).max(1);
    let loud = |chunk: &[f64]| chunk.iter().any(|s| s.abs() >= threshold);

    let frames: Vec<&[f64]> = w.samples.chunks(frame).collect();
    // The peak sample sits in some frame, so both searches succeed.
    let first = frames.iter().position(|c| loud(c)).unwrap_or(0);
    let last = frames.iter().rposition(|c| loud(c)).unwrap_or(0);
    let start = first * frame;
    let end = ((last + 1) * frame).min(w.samples.len());
    Waveform::new(w.samples[start..end].to_vec(), w.sample_rate)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_zero_is_empty() {
        let w = Waveform::new(vec![0.0; 1000], 22050);
        assert!(trim_silence(&w, -40.0).is_empty());
    }

    #[test]
    fn exact_zero_frames_removed() {
        let mut s = vec![0.0; 220];
        let burst: Vec<f64> = (0..500).map(|i| 0.5 * ((i as f64) * 0.3).sin() + 0.1).collect();
        s.extend(&burst);
        let w = Waveform::new(s, 22050);
        assert_eq!(trim_silence(&w, -40.0).samples, burst);
    }

    #[test]
    fn quiet_lead_removed_interior_kept() {
        // 10 ms frames at 1 kHz are 10 samples.
        let mut s = vec![0.001; 30]; // -60 dB
        s.extend(vec![1.0; 10]);
        s.extend(vec![0.001; 20]); // interior
        s.extend(vec![0.5; 10]);
        s.extend(vec![0.001; 10]);
        let w = Waveform::new(s.clone(), 1000);
        let t = trim_silence(&w, -40.0);
        assert_eq!(t.samples, s[30..70].to_vec());
        // -80 dB threshold keeps everything
        assert_eq!(trim_silence(&w, -80.0).samples, s);
    }
}
