//! Deterministic synthetic inputs for benchmarking and self-tests.

use chaocrypt::bench::Payload;
use chaocrypt::cipher::ImageBuffer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Smooth photo-like test card: overlapping low-frequency waves, a lit
/// disc and mild sensor noise.
pub fn natural_image(width: usize, height: usize, seed: u64) -> ImageBuffer {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (cx, cy) = (width as f64 * 0.62, height as f64 * 0.4);
    let r = width.min(height) as f64 * 0.22;
    ImageBuffer::from_fn(width, height, |x, y| {
        let (fx, fy) = (x as f64, y as f64);
        let mut v = 110.0
            + 55.0 * (fx / 41.0).sin() * (fy / 67.0).cos()
            + 35.0 * ((fx + 2.0 * fy) / 113.0).sin()
            + 25.0 * (fx * fy / 15_000.0).cos()
            + 30.0 * fy / height as f64;
        let d = ((fx - cx).powi(2) + (fy - cy).powi(2)).sqrt();
        if d < r {
            v += 45.0 * (1.0 - d / r);
        }
        v += rng.gen_range(-4.0..4.0);
        v.round().clamp(0.0, 255.0) as u8
    })
    .expect("dimensions are at least 2x2")
}

pub fn random_image(width: usize, height: usize, rng: &mut impl Rng) -> ImageBuffer {
    ImageBuffer::new(width, height, (0..width * height).map(|_| rng.gen()).collect())
        .expect("dimensions are at least 2x2")
}

/// Decaying two-tone signal.
pub fn tone(frames: usize) -> Vec<i16> {
    (0..frames)
        .map(|i| {
            let t = i as f64 / 44_100.0;
            let env = (-(t * 3.0)).exp();
            let s = 0.6 * (2.0 * std::f64::consts::PI * 440.0 * t).sin()
                + 0.3 * (2.0 * std::f64::consts::PI * 1250.0 * t).sin();
            (s * env * 30_000.0) as i16
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PayloadChoice {
    /// One frame of `--size`².
    Image,
    /// 75 frames of `--size`².
    Batch75,
    /// 512 PCM-16 frames.
    Audio512,
    /// 38 400 PCM-16 frames.
    Audio38400,
    All,
}

impl PayloadChoice {
    pub fn expand(self) -> Vec<PayloadChoice> {
        match self {
            PayloadChoice::All => vec![
                PayloadChoice::Image,
                PayloadChoice::Batch75,
                PayloadChoice::Audio512,
                PayloadChoice::Audio38400,
            ],
            one => vec![one],
        }
    }

    pub fn build(self, size: usize) -> Payload {
        match self {
            PayloadChoice::Image | PayloadChoice::All => Payload::Image(natural_image(size, size, 1)),
            PayloadChoice::Batch75 => Payload::Frames((0..75).map(|i| natural_image(size, size, 100 + i)).collect()),
            PayloadChoice::Audio512 => Payload::Audio(tone(512)),
            PayloadChoice::Audio38400 => Payload::Audio(tone(38_400)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_image_is_deterministic_and_textured() {
        let a = natural_image(64, 48, 3);
        assert_eq!(a, natural_image(64, 48, 3));
        let distinct = chaocrypt::analysis::histogram(&a).iter().filter(|&&c| c > 0).count();
        assert!(distinct > 60);
    }

    #[test]
    fn payload_shapes() {
        assert_eq!(PayloadChoice::All.expand().len(), 4);
        assert_eq!(PayloadChoice::Batch75.build(8).descriptor(), "75 frames 8x8");
        assert_eq!(PayloadChoice::Audio38400.build(8).descriptor(), "audio 38400 frames");
    }
}
