//! PCM-16 adapter: samples become a zero-padded byte matrix and go through
//! the image pipeline.

use super::envelope::{CipherEnvelope, PayloadKind};
use super::{decrypt_image, encrypt_image, CipherConfig, ImageBuffer};
use crate::error::{Error, Result};

/// `(rows, cols)` for an `n`-byte stream: `rows = max(2, ⌊√n⌋)`,
/// `cols = max(2, ⌈n / rows⌉)`.
pub fn audio_shape(n: usize) -> (usize, usize) {
    let rows = n.isqrt().max(2);
    let cols = n.div_ceil(rows).max(2);
    (rows, cols)
}

pub fn pcm16_to_bytes(samples: &[i16]) -> Vec<u8> {
    samples.iter().flat_map(|s| s.to_le_bytes()).collect()
}

pub fn pcm16_from_bytes(bytes: &[u8]) -> Result<Vec<i16>> {
    if !bytes.len().is_multiple_of(2) {
        return Err(Error::MalformedEnvelope(format!(
            "odd PCM-16 byte count {}",
            bytes.len()
        )));
    }
    Ok(bytes
        .chunks_exact(2)
        .map(|c| i16::from_le_bytes([c[0], c[1]]))
        .collect())
}

pub fn encrypt_audio(samples: &[i16], cfg: &CipherConfig) -> Result<CipherEnvelope> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut bytes = pcm16_to_bytes(samples);
    let (rows, cols) = audio_shape(bytes.len());
    let padding = rows * cols - bytes.len();
    bytes.resize(rows * cols, 0);
    let mut env = encrypt_image(&ImageBuffer::new(cols, rows, bytes)?, cfg)?;
    env.header.payload = PayloadKind::Audio {
        padding: padding as u32,
    };
    Ok(env)
}

pub fn decrypt_audio(env: &CipherEnvelope, secret: Option<&[u8]>) -> Result<Vec<i16>> {
    let PayloadKind::Audio { padding } = env.header.payload else {
        return Err(Error::MalformedEnvelope("envelope does not hold audio".into()));
    };
    let mut bytes = decrypt_image(env, secret)?.into_pixels();
    let keep = bytes
        .len()
        .checked_sub(padding as usize)
        .ok_or_else(|| Error::MalformedEnvelope("padding exceeds body".into()))?;
    bytes.truncate(keep);
    pcm16_from_bytes(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sine(frames: usize) -> Vec<i16> {
        (0..frames)
            .map(|i| ((i as f64 * 0.05).sin() * 20_000.0) as i16)
            .collect()
    }

    #[test]
    fn shapes() {
        assert_eq!(audio_shape(2), (2, 2));
        assert_eq!(audio_shape(1024), (32, 32));
        assert_eq!(audio_shape(76_800), (277, 278));
        for n in 1..2000 {
            let (r, c) = audio_shape(n);
            assert!(r >= 2 && c >= 2 && r * c >= n);
        }
    }

    #[test]
    fn sine_round_trip() {
        let samples = sine(512);
        let env = encrypt_audio(&samples, &CipherConfig::default()).unwrap();
        assert_eq!(decrypt_audio(&env, None).unwrap(), samples);
    }

    #[test]
    fn single_frame() {
        let env = encrypt_audio(&[-12345], &CipherConfig::with_secret("k")).unwrap();
        assert_eq!((env.header.width, env.header.height), (2, 2));
        assert_eq!(env.header.payload, PayloadKind::Audio { padding: 2 });
        let env = CipherEnvelope::from_bytes(&env.to_bytes()).unwrap();
        assert_eq!(decrypt_audio(&env, Some(b"k")).unwrap(), vec![-12345]);
    }

    #[test]
    fn long_payload() {
        let samples = sine(38_400);
        let env = encrypt_audio(&samples, &CipherConfig::with_secret("k")).unwrap();
        assert_eq!(decrypt_audio(&env, Some(b"k")).unwrap(), samples);
    }

    #[test]
    fn rejects_empty_and_image_envelopes() {
        assert_eq!(encrypt_audio(&[], &CipherConfig::default()), Err(Error::EmptyInput));
        let img = ImageBuffer::filled(2, 2, 1).unwrap();
        let env = encrypt_image(&img, &CipherConfig::default()).unwrap();
        assert!(matches!(decrypt_audio(&env, None), Err(Error::MalformedEnvelope(_))));
    }
}
