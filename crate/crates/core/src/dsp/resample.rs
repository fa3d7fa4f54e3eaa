//! Rational-ratio polyphase resampling with a Kaiser-windowed sinc kernel.

use std::f64::consts::PI;

use super::{DspError, Waveform};

/// Zero crossings of the lowpass kernel on each side of its center.
const ZERO_CROSSINGS: f64 = 24.0;
/// Passband edge as a fraction of the lower Nyquist frequency.
const ROLLOFF: f64 = 0.95;
const KAISER_BETA: f64 = 8.0;
/// Above this many phases, coefficients are computed per output sample.
const MAX_TABLE_PHASES: u64 = 1024;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn bessel_i0(x: f64) -> f64 {
    let mut sum = 1.0;
    let mut term = 1.0;
    let half = x / 2.0;
    for k in 1..200 {
        term *= (half / k as f64) * (half / k as f64);
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

struct Kernel {
    cutoff: f64,
    half_width: f64,
    /// Taps on each side of the center.
    reach: i64,
    i0_beta: f64,
}

impl Kernel {
    fn new(up: u64, down: u64) -> Self {
        let cutoff = ROLLOFF * (up as f64 / down as f64).min(1.0);
        let half_width = ZERO_CROSSINGS / cutoff;
        Self {
            cutoff,
            half_width,
            reach: half_width.ceil() as i64,
            i0_beta: bessel_i0(KAISER_BETA),
        }
    }

    fn value(&self, tau: f64) -> f64 {
        let r = tau / self.half_width;
        if r.abs() >= 1.0 {
            return 0.0;
        }
        let window = bessel_i0(KAISER_BETA * (1.0 - r * r).sqrt()) / self.i0_beta;
        self.cutoff * sinc(self.cutoff * tau) * window
    }

    /// Unit-sum taps for input offsets `-reach+1 ..= reach` around the
    /// integer part of the read position, at fractional offset `frac`.
    fn taps(&self, frac: f64) -> Vec<f64> {
        let mut taps: Vec<f64> = (-self.reach + 1..=self.reach)
            .map(|j| self.value(frac - j as f64))
            .collect();
        let sum: f64 = taps.iter().sum();
        for t in &mut taps {
            *t /= sum;
        }
        taps
    }
}

/// Resamples to `target_rate`. Output length is `ceil(N * target / source)`;
/// equal rates return the input unchanged.
pub fn resample(w: &Waveform, target_rate: u32) -> Result<Waveform, DspError> {
    if w.sample_rate == 0 || target_rate == 0 {
        return Err(DspError::ZeroSampleRate);
    }
    if w.sample_rate == target_rate {
        return Ok(w.clone());
    }
    let g = gcd(w.sample_rate as u64, target_rate as u64);
    let up = target_rate as u64 / g;
    let down = w.sample_rate as u64 / g;
    let n = w.samples.len() as u64;
    let out_len = (n * up).div_ceil(down) as usize;

    let kernel = Kernel::new(up, down);
    let table: Option<Vec<Vec<f64>>> = (up <= MAX_TABLE_PHASES)
        .then(|| (0..up).map(|p| kernel.taps(p as f64 / up as f64)).collect());

    let x = &w.samples;
    let mut out = Vec::with_capacity(out_len);
    for k in 0..out_len as u64 {
        let pos = k * down;
        let base = (pos / up) as i64;
        let phase = pos % up;
        let computed;
        let taps = match &table {
            Some(t) => &t[phase as usize],
            None => {
                computed = kernel.taps(phase as f64 / up as f64);
                &computed
            }
        };
        let first = base - kernel.reach + 1;
        let mut acc = 0.0;
        for (j, &c) in taps.iter().enumerate() {
            let idx = first + j as i64;
            if idx >= 0 && (idx as usize) < x.len() {
                acc += c * x[idx as usize];
            }
        }
        out.push(acc);
    }
    Ok(Waveform::new(out, target_rate))
}
