use std::io::Cursor;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};

use super::{DspError, Waveform};

/// Decodes a mono 16-bit PCM RIFF/WAVE file; sample `s` maps to `s / 32768`.
pub fn load_wav(bytes: &[u8]) -> Result<Waveform, DspError> {
    let reader = WavReader::new(Cursor::new(bytes)).map_err(|e| match e {
        hound::Error::IoError(ref io) if io.kind() == std::io::ErrorKind::UnexpectedEof => {
            DspError::Truncated
        }
        other => DspError::Wav(other.to_string()),
    })?;
    let spec = reader.spec();
    if spec.channels != 1 {
        return Err(DspError::NotMono(spec.channels));
    }
    if spec.sample_format != SampleFormat::Int || spec.bits_per_sample != 16 {
        let kind = match spec.sample_format {
            SampleFormat::Int => "int",
            SampleFormat::Float => "float",
        };
        return Err(DspError::NotPcm16(format!(
            "{kind} {}-bit",
            spec.bits_per_sample
        )));
    }
    if spec.sample_rate == 0 {
        return Err(DspError::ZeroSampleRate);
    }
    let samples = reader
        .into_samples::<i16>()
        .map(|s| s.map(|v| v as f64 / 32768.0))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| DspError::Truncated)?;
    Ok(Waveform::new(samples, spec.sample_rate))
}

/// Encodes mono 16-bit PCM, clamping to the representable range.
pub fn write_wav(w: &Waveform) -> Result<Vec<u8>, DspError> {
    let spec = WavSpec {
        channels: 1,
        sample_rate: w.sample_rate,
        bits_per_sample: 16,
        sample_format: SampleFormat::Int,
    };
    let mut buf = Cursor::new(Vec::new());
    {
        let mut writer =
            WavWriter::new(&mut buf, spec).map_err(|e| DspError::Wav(e.to_string()))?;
        for &s in &w.samples {
            let v = (s * 32768.0).round().clamp(i16::MIN as f64, i16::MAX as f64) as i16;
            writer
                .write_sample(v)
                .map_err(|e| DspError::Wav(e.to_string()))?;
        }
        writer.finalize().map_err(|e| DspError::Wav(e.to_string()))?;
    }
    Ok(buf.into_inner())
}
