//! Statistical and differential security metrics for grayscale images.

use rand::{seq::index, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cipher::{encrypt_with_key, CipherConfig, ImageBuffer, KeyMode};
use crate::error::{Error, Result};

/// Chi-square critical value, 255 degrees of freedom, significance 0.05.
pub const CHI_SQUARE_CRITICAL_05: f64 = 293.2478;
/// Chi-square critical value, 255 degrees of freedom, significance 0.01.
pub const CHI_SQUARE_CRITICAL_01: f64 = 310.4574;

pub const DEFAULT_CORRELATION_SAMPLES: usize = 5000;
pub const DEFAULT_SAMPLING_SEED: u64 = 0x5EED_CAFE;

pub fn histogram(img: &ImageBuffer) -> [u64; 256] {
    byte_histogram(img.pixels())
}

pub fn byte_histogram(bytes: &[u8]) -> [u64; 256] {
    let mut counts = [0u64; 256];
    for &b in bytes {
        counts[b as usize] += 1;
    }
    counts
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Horizontal,
    Vertical,
    Diagonal,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Direction::Horizontal, Direction::Vertical, Direction::Diagonal];

    fn offset(self) -> (usize, usize) {
        match self {
            Direction::Horizontal => (1, 0),
            Direction::Vertical => (0, 1),
            Direction::Diagonal => (1, 1),
        }
    }
}

/// Number of neighbour pairs along `dir`.
pub fn pair_count(img: &ImageBuffer, dir: Direction) -> usize {
    let (dx, dy) = dir.offset();
    (img.width() - dx) * (img.height() - dy)
}

/// Pearson correlation of `sample_count` neighbour pairs along `dir`, drawn
/// without replacement from a generator seeded with `seed`. When
/// `sample_count` covers every pair, all pairs are used.
pub fn correlation(img: &ImageBuffer, dir: Direction, sample_count: usize, seed: u64) -> Result<f64> {
    if sample_count == 0 {
        return Err(Error::param("sample_count", 0, "must be at least 1"));
    }
    let (dx, dy) = dir.offset();
    let span = img.width() - dx;
    let available = pair_count(img, dir);
    let pair = |k: usize| {
        let (x, y) = (k % span, k / span);
        (img.get(x, y) as f64, img.get(x + dx, y + dy) as f64)
    };
    let pairs: Vec<(f64, f64)> = if sample_count >= available {
        (0..available).map(pair).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        index::sample(&mut rng, available, sample_count)
            .into_iter()
            .map(pair)
            .collect()
    };
    pearson(&pairs)
}

fn pearson(pairs: &[(f64, f64)]) -> Result<f64> {
    let n = pairs.len() as f64;
    let (sx, sy) = pairs.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (mut cov, mut vx, mut vy) = (0.0, 0.0, 0.0);
    for &(x, y) in pairs {
        let (ex, ey) = (x - mx, y - my);
        cov += ex * ey;
        vx += ex * ex;
        vy += ey * ey;
    }
    if vx == 0.0 {
        return Err(Error::ZeroVariance("first"));
    }
    if vy == 0.0 {
        return Err(Error::ZeroVariance("second"));
    }
    Ok(cov / (vx.sqrt() * vy.sqrt()))
}

/// Shannon entropy of the pixel histogram, in bits.
pub fn entropy(img: &ImageBuffer) -> f64 {
    let n = img.len() as f64;
    histogram(img)
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlcmMetrics {
    pub contrast: f64,
    pub energy: f64,
    pub homogeneity: f64,
}

/// GLCM texture measures of horizontally adjacent pixels, 256 gray levels.
pub fn glcm_metrics(img: &ImageBuffer) -> GlcmMetrics {
    glcm_from_pixels(img.width(), img.height(), img.pixels(), 256).expect("images are at least 2x2")
}

/// GLCM over a raw row-major raster. `levels` quantizes each byte to
/// `v * levels / 256` first (256 keeps full resolution; 8 matches the common
/// toolbox default).
pub fn glcm_from_pixels(width: usize, height: usize, pixels: &[u8], levels: usize) -> Result<GlcmMetrics> {
    if !(2..=256).contains(&levels) {
        return Err(Error::param("levels", levels, "must lie in [2, 256]"));
    }
    if pixels.len() != width * height {
        return Err(Error::LengthMismatch {
            expected: width * height,
            actual: pixels.len(),
        });
    }
    if width < 2 || height == 0 {
        return Err(Error::MalformedImage(format!(
            "{width}x{height} has no horizontal pairs"
        )));
    }
    let quantize = |v: u8| v as usize * levels / 256;
    let mut counts = vec![0u64; levels * levels];
    for row in pixels.chunks_exact(width) {
        for w in row.windows(2) {
            counts[quantize(w[0]) * levels + quantize(w[1])] += 1;
        }
    }
    let total = ((width - 1) * height) as f64;
    let mut m = GlcmMetrics {
        contrast: 0.0,
        energy: 0.0,
        homogeneity: 0.0,
    };
    for (cell, &c) in counts.iter().enumerate().filter(|(_, &c)| c > 0) {
        let p = c as f64 / total;
        let d = (cell / levels).abs_diff(cell % levels) as f64;
        m.contrast += p * d * d;
        m.energy += p * p;
        m.homogeneity += p / (1.0 + d);
    }
    Ok(m)
}

/// Percentage of positions where the two images differ.
pub fn npcr(a: &ImageBuffer, b: &ImageBuffer) -> Result<f64> {
    a.check_same_shape(b)?;
    let changed = a.pixels().iter().zip(b.pixels()).filter(|(x, y)| x != y).count();
    Ok(100.0 * changed as f64 / a.len() as f64)
}

/// Mean absolute difference as a percentage of 255.
pub fn uaci(a: &ImageBuffer, b: &ImageBuffer) -> Result<f64> {
    a.check_same_shape(b)?;
    let sum: u64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| x.abs_diff(y) as u64)
        .sum();
    Ok(100.0 * sum as f64 / (255.0 * a.len() as f64))
}

pub fn mse(a: &ImageBuffer, b: &ImageBuffer) -> Result<f64> {
    a.check_same_shape(b)?;
    let sum: u64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| (x.abs_diff(y) as u64).pow(2))
        .sum();
    Ok(sum as f64 / a.len() as f64)
}

/// Peak signal-to-noise ratio; identical images have no finite value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Psnr {
    Db(f64),
    Infinite,
}

impl Serialize for Psnr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Psnr::Db(v) => s.serialize_f64(*v),
            Psnr::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for Psnr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Psnr::Db(v)),
            Raw::Text(t) if t == "infinite" => Ok(Psnr::Infinite),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("unexpected PSNR value {t:?}"))),
        }
    }
}

pub fn psnr(a: &ImageBuffer, b: &ImageBuffer) -> Result<Psnr> {
    let m = mse(a, b)?;
    Ok(if m == 0.0 {
        Psnr::Infinite
    } else {
        Psnr::Db(10.0 * (255.0f64 * 255.0 / m).log10())
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: u32,
    pub critical: f64,
    pub passed: bool,
}

/// Goodness of fit of the pixel histogram against uniform, at 0.05.
pub fn chi_square(img: &ImageBuffer) -> ChiSquare {
    chi_square_counts(&histogram(img), CHI_SQUARE_CRITICAL_05)
}

pub fn chi_square_counts(counts: &[u64; 256], critical: f64) -> ChiSquare {
    let n: u64 = counts.iter().sum();
    let expected = n as f64 / 256.0;
    let statistic = counts
        .iter()
        .map(|&o| {
            let d = o as f64 - expected;
            d * d / expected
        })
        .sum();
    ChiSquare {
        statistic,
        dof: 255,
        critical,
        passed: statistic < critical,
    }
}

/// NPCR between encryptions of `img` under its key and under the same key
/// with the lowest bit of `kappa1` flipped.
pub fn key_sensitivity(img: &ImageBuffer, cfg: &CipherConfig) -> Result<f64> {
    cfg.validate()?;
    let key = cfg.key_for(img.pixels())?;
    let a = encrypt_with_key(img, &key, cfg.burn_in)?;
    let b = encrypt_with_key(img, &key.with_kappa1_bit_flipped(), cfg.burn_in)?;
    npcr(&a, &b)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Differential {
    pub npcr: f64,
    pub uaci: f64,
    /// Row-major index of the perturbed pixel.
    pub pixel: usize,
}

/// Encrypts `img` and a copy with one randomly chosen pixel incremented
/// (mod 256), both in plaintext-hash mode, and compares the ciphertexts.
pub fn differential(img: &ImageBuffer, cfg: &CipherConfig, seed: u64) -> Result<Differential> {
    let cfg = CipherConfig {
        key_mode: KeyMode::PlaintextHash,
        ..cfg.clone()
    };
    cfg.validate()?;
    let pixel = ChaCha8Rng::seed_from_u64(seed).gen_range(0..img.len());
    let mut other = img.clone();
    other.pixels_mut()[pixel] = other.pixels()[pixel].wrapping_add(1);
    let a = encrypt_with_key(img, &cfg.key_for(img.pixels())?, cfg.burn_in)?;
    let b = encrypt_with_key(&other, &cfg.key_for(other.pixels())?, cfg.burn_in)?;
    Ok(Differential {
        npcr: npcr(&a, &b)?,
        uaci: uaci(&a, &b)?,
        pixel,
    })
}

/// One column of the report. Correlations are `None` when a marginal is
/// constant and the coefficient is undefined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameMetrics {
    pub d_cc: Option<f64>,
    pub h_cc: Option<f64>,
    pub v_cc: Option<f64>,
    pub entropy: f64,
    pub contrast: f64,
    pub energy: f64,
    pub homogeneity: f64,
    pub chi_square: ChiSquare,
}

pub fn frame_metrics(img: &ImageBuffer, seed: u64) -> Result<FrameMetrics> {
    let cc = |dir| match correlation(img, dir, DEFAULT_CORRELATION_SAMPLES, seed) {
        Ok(v) => Ok(Some(v)),
        Err(Error::ZeroVariance(_)) => Ok(None),
        Err(e) => Err(e),
    };
    let glcm = glcm_metrics(img);
    Ok(FrameMetrics {
        d_cc: cc(Direction::Diagonal)?,
        h_cc: cc(Direction::Horizontal)?,
        v_cc: cc(Direction::Vertical)?,
        entropy: entropy(img),
        contrast: glcm.contrast,
        energy: glcm.energy,
        homogeneity: glcm.homogeneity,
        chi_square: chi_square(img),
    })
}

/// Plaintext and ciphertext columns plus the differential measures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub sampling_seed: u64,
    pub plain: FrameMetrics,
    pub cipher: FrameMetrics,
    pub npcr: f64,
    pub uaci: f64,
    pub key_sensitivity: f64,
    pub mse: f64,
    pub psnr: Psnr,
}

pub fn full_report(plain: &ImageBuffer, cipher: &ImageBuffer, cfg: &CipherConfig, seed: u64) -> Result<MetricsReport> {
    plain.check_same_shape(cipher)?;
    let diff = differential(plain, cfg, seed)?;
    Ok(MetricsReport {
        sampling_seed: seed,
        plain: frame_metrics(plain, seed)?,
        cipher: frame_metrics(cipher, seed)?,
        npcr: diff.npcr,
        uaci: diff.uaci,
        key_sensitivity: key_sensitivity(plain, cfg)?,
        mse: mse(plain, cipher)?,
        psnr: psnr(plain, cipher)?,
    })
}
