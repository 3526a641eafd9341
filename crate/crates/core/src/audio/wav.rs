use super::Waveform;
use crate::error::{Error, Result};
use std::io::Cursor;

const PCM16_SCALE: f32 = 32768.0;

/// Decodes a 16-bit PCM RIFF/WAVE file. Stereo is downmixed by channel mean.
pub fn read_wav(bytes: &[u8]) -> Result<Waveform> {
    let reader = hound::WavReader::new(Cursor::new(bytes))?;
    let spec = reader.spec();
    if spec.sample_format != hound::SampleFormat::Int {
        return Err(Error::Audio("only integer PCM is supported".into()));
    }
    if spec.bits_per_sample != 16 {
        return Err(Error::Audio(format!(
            "unsupported bit depth {} (expected 16)",
            spec.bits_per_sample
        )));
    }
    let channels = usize::from(spec.channels);
    if !(1..=2).contains(&channels) {
        return Err(Error::Audio(format!(
            "unsupported channel count {channels} (expected 1 or 2)"
        )));
    }
    let expected = reader.len() as usize;
    let raw = reader
        .into_samples::<i16>()
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if raw.len() != expected {
        return Err(Error::Audio(format!(
            "truncated data chunk: {} of {expected} samples",
            raw.len()
        )));
    }
    if raw.len() % channels != 0 {
        return Err(Error::Audio("truncated final frame".into()));
    }
    let samples = raw
        .chunks_exact(channels)
        .map(|frame| {
            let sum: f32 = frame.iter().map(|&s| f32::from(s) / PCM16_SCALE).sum();
            sum / channels as f32
        })
        .collect();
    Waveform::new(samples, spec.sample_rate)
}

/// Encodes a waveform as mono 16-bit PCM.
pub fn write_wav(w: &Waveform) -> Result<Vec<u8>> {
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: w.sample_rate(),
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let mut out = Cursor::new(Vec::with_capacity(44 + 2 * w.len()));
    {
        let mut writer = hound::WavWriter::new(&mut out, spec)?;
        let mut samples = writer.get_i16_writer(w.len() as u32);
        for &s in w.samples() {
            samples.write_sample(quantize(s));
        }
        samples.flush()?;
        writer.finalize()?;
    }
    Ok(out.into_inner())
}

fn quantize(s: f32) -> i16 {
    (s * PCM16_SCALE).round().clamp(-32768.0, 32767.0) as i16
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pcm16(channels: u16, rate: u32, samples: &[i16]) -> Vec<u8> {
        let spec = hound::WavSpec {
            channels,
            sample_rate: rate,
            bits_per_sample: 16,
            sample_format: hound::SampleFormat::Int,
        };
        let mut out = Cursor::new(Vec::new());
        let mut w = hound::WavWriter::new(&mut out, spec).unwrap();
        for &s in samples {
            w.write_sample(s).unwrap();
        }
        w.finalize().unwrap();
        out.into_inner()
    }

    #[test]
    fn one_second_of_silence() {
        let w = read_wav(&pcm16(1, 16_000, &vec![0; 16_000])).unwrap();
        assert_eq!(w.len(), 16_000);
        assert_eq!(w.sample_rate(), 16_000);
        assert!(w.samples().iter().all(|&s| s == 0.0));
    }

    #[test]
    fn stereo_is_mean_downmixed() {
        let frames: Vec<i16> = (0..100).flat_map(|_| [16384, -16384]).collect();
        let w = read_wav(&pcm16(2, 8_000, &frames)).unwrap();
        assert_eq!(w.len(), 100);
        assert!(w.samples().iter().all(|&s| s == 0.0));
    }

    #[test]
    fn pcm16_payload_survives_round_trip() {
        let raw: Vec<i16> = vec![-32768, -1, 0, 1, 12345, 32767];
        let bytes = pcm16(1, 22_050, &raw);
        assert_eq!(write_wav(&read_wav(&bytes).unwrap()).unwrap(), bytes);
    }

    #[test]
    fn rejects_other_encodings_and_truncation() {
        let spec = hound::WavSpec {
            channels: 1,
            sample_rate: 8000,
            bits_per_sample: 32,
            sample_format: hound::SampleFormat::Float,
        };
        let mut out = Cursor::new(Vec::new());
        let mut w = hound::WavWriter::new(&mut out, spec).unwrap();
        w.write_sample(0.5f32).unwrap();
        w.finalize().unwrap();
        assert!(read_wav(&out.into_inner()).is_err());

        let spec = hound::WavSpec {
            channels: 1,
            sample_rate: 8000,
            bits_per_sample: 8,
            sample_format: hound::SampleFormat::Int,
        };
        let mut out = Cursor::new(Vec::new());
        let mut w = hound::WavWriter::new(&mut out, spec).unwrap();
        w.write_sample(3i8).unwrap();
        w.finalize().unwrap();
        assert!(read_wav(&out.into_inner()).is_err());

        let full = pcm16(1, 8000, &[1, 2, 3, 4, 5, 6]);
        assert!(read_wav(&full[..full.len() - 3]).is_err());
        assert!(read_wav(&full[..20]).is_err());
        assert!(read_wav(b"not a wav file at all").is_err());
    }
}
