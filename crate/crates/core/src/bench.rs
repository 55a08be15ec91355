//! Encryption latency harness: chaos pipeline versus an AES-128-CBC baseline.
//!
//! Each trial times one encryption of a pre-loaded payload (keying included,
//! no file I/O). Warm-up runs are discarded; the retained samples give the
//! arithmetic mean and the unbiased sample variance.

use serde::{Deserialize, Serialize};

use crate::cipher::{encrypt_audio, encrypt_image, pcm16_to_bytes, CipherConfig, ImageBuffer};
use crate::error::{Error, Result};

pub const MIN_TRIALS: usize = 30;
pub const WARMUP_RUNS: usize = 5;

pub const CHAOS_SCHEME: &str = "TD-ERCS+NCA";
pub const AES_SCHEME: &str = "AES-128-CBC";

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Image(ImageBuffer),
    /// Frames encrypted one after another; one trial covers the whole batch.
    Frames(Vec<ImageBuffer>),
    Audio(Vec<i16>),
}

impl Payload {
    pub fn descriptor(&self) -> String {
        match self {
            Payload::Image(img) => format!("image {}x{}", img.width(), img.height()),
            Payload::Frames(frames) => match frames.first() {
                Some(f) => format!("{} frames {}x{}", frames.len(), f.width(), f.height()),
                None => "0 frames".into(),
            },
            Payload::Audio(samples) => format!("audio {} frames", samples.len()),
        }
    }

    /// Plaintext byte units as a baseline cipher sees them.
    pub fn byte_units(&self) -> Vec<Vec<u8>> {
        match self {
            Payload::Image(img) => vec![img.pixels().to_vec()],
            Payload::Frames(frames) => frames.iter().map(|f| f.pixels().to_vec()).collect(),
            Payload::Audio(samples) => vec![pcm16_to_bytes(samples)],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchResult {
    pub scheme: String,
    pub payload: String,
    pub trials: usize,
    pub warmup: usize,
    pub mean_seconds: f64,
    pub variance_seconds2: f64,
    pub samples: Vec<f64>,
    /// Whether the baseline ran on hardware AES instructions, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hardware_aes: Option<bool>,
}

impl BenchResult {
    pub fn from_samples(scheme: &str, payload: &str, warmup: usize, samples: Vec<f64>) -> Self {
        let (mean, variance) = mean_variance(&samples);
        BenchResult {
            scheme: scheme.to_owned(),
            payload: payload.to_owned(),
            trials: samples.len(),
            warmup,
            mean_seconds: mean,
            variance_seconds2: variance,
            samples,
            hardware_aes: None,
        }
    }
}

/// Arithmetic mean and unbiased sample variance.
pub fn mean_variance(samples: &[f64]) -> (f64, f64) {
    let n = samples.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss: f64 = samples.iter().map(|s| (s - mean).powi(2)).sum();
    (mean, ss / (n - 1) as f64)
}

/// Source of timestamps in seconds.
pub trait Clock {
    fn now(&mut self) -> f64;
}

#[derive(Debug)]
pub struct WallClock(std::time::Instant);

impl Default for WallClock {
    fn default() -> Self {
        WallClock(std::time::Instant::now())
    }
}

impl Clock for WallClock {
    fn now(&mut self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

/// Runs `work` `warmup` times untimed, then `trials` times timed.
pub fn run_trials<C: Clock>(
    clock: &mut C,
    trials: usize,
    warmup: usize,
    mut work: impl FnMut() -> Result<()>,
) -> Result<Vec<f64>> {
    if trials < MIN_TRIALS {
        return Err(Error::param("trials", trials, "at least 30 trials are required"));
    }
    for _ in 0..warmup {
        work()?;
    }
    let mut samples = Vec::with_capacity(trials);
    for _ in 0..trials {
        let start = clock.now();
        work()?;
        samples.push(clock.now() - start);
    }
    Ok(samples)
}

fn encrypt_payload(payload: &Payload, cfg: &CipherConfig) -> Result<()> {
    match payload {
        Payload::Image(img) => encrypt_image(std::hint::black_box(img), cfg).map(|e| {
            std::hint::black_box(e);
        }),
        Payload::Frames(frames) => frames.iter().try_for_each(|f| {
            encrypt_image(std::hint::black_box(f), cfg).map(|e| {
                std::hint::black_box(e);
            })
        }),
        Payload::Audio(samples) => encrypt_audio(std::hint::black_box(samples), cfg).map(|e| {
            std::hint::black_box(e);
        }),
    }
}

pub fn bench_chaos(payload: &Payload, cfg: &CipherConfig, trials: usize) -> Result<BenchResult> {
    bench_chaos_with(&mut WallClock::default(), payload, cfg, trials)
}

pub fn bench_chaos_with<C: Clock>(
    clock: &mut C,
    payload: &Payload,
    cfg: &CipherConfig,
    trials: usize,
) -> Result<BenchResult> {
    cfg.validate()?;
    let samples = run_trials(clock, trials, WARMUP_RUNS, || encrypt_payload(payload, cfg))?;
    Ok(BenchResult::from_samples(
        CHAOS_SCHEME,
        &payload.descriptor(),
        WARMUP_RUNS,
        samples,
    ))
}

#[cfg(feature = "aes-baseline")]
mod aes_cbc {
    use aes::cipher::{block_padding::Pkcs7, BlockEncryptMut, KeyIvInit};

    type Aes128CbcEnc = cbc::Encryptor<aes::Aes128>;

    const KEY: [u8; 16] = *b"chaocrypt-bench!";
    const IV: [u8; 16] = [0x24; 16];

    pub fn encrypt(data: &[u8]) -> Vec<u8> {
        Aes128CbcEnc::new(&KEY.into(), &IV.into()).encrypt_padded_vec_mut::<Pkcs7>(data)
    }

    pub fn hardware_accelerated() -> bool {
        #[cfg(any(target_arch = "x86", target_arch = "x86_64"))]
        {
            std::arch::is_x86_feature_detected!("aes")
        }
        #[cfg(target_arch = "aarch64")]
        {
            std::arch::is_aarch64_feature_detected!("aes")
        }
        #[cfg(not(any(target_arch = "x86", target_arch = "x86_64", target_arch = "aarch64")))]
        {
            false
        }
    }
}

/// PKCS#7-padded AES-128-CBC encryption with the fixed benchmark key.
pub fn aes_cbc_encrypt(data: &[u8]) -> Result<Vec<u8>> {
    #[cfg(feature = "aes-baseline")]
    {
        Ok(aes_cbc::encrypt(data))
    }
    #[cfg(not(feature = "aes-baseline"))]
    {
        let _ = data;
        Err(Error::BaselineUnavailable)
    }
}

pub fn aes_available() -> bool {
    cfg!(feature = "aes-baseline")
}

pub fn bench_aes_baseline(payload: &Payload, trials: usize) -> Result<BenchResult> {
    bench_aes_baseline_with(&mut WallClock::default(), payload, trials)
}

pub fn bench_aes_baseline_with<C: Clock>(clock: &mut C, payload: &Payload, trials: usize) -> Result<BenchResult> {
    if !aes_available() {
        return Err(Error::BaselineUnavailable);
    }
    let units = payload.byte_units();
    let samples = run_trials(clock, trials, WARMUP_RUNS, || {
        for unit in &units {
            std::hint::black_box(aes_cbc_encrypt(std::hint::black_box(unit))?);
        }
        Ok(())
    })?;
    let result = BenchResult::from_samples(AES_SCHEME, &payload.descriptor(), WARMUP_RUNS, samples);
    #[cfg(feature = "aes-baseline")]
    let result = BenchResult {
        hardware_aes: Some(aes_cbc::hardware_accelerated()),
        ..result
    };
    Ok(result)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub mean_seconds: f64,
    pub variance_seconds2: f64,
}

/// Scheme-by-payload matrix of timing cells.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub schemes: Vec<String>,
    pub payloads: Vec<String>,
    /// `cells[s][p]`, `None` where that combination was not run.
    pub cells: Vec<Vec<Option<Cell>>>,
}

pub fn compare_report(results: &[BenchResult]) -> ComparisonTable {
    let mut table = ComparisonTable::default();
    for r in results {
        if !table.schemes.contains(&r.scheme) {
            table.schemes.push(r.scheme.clone());
        }
        if !table.payloads.contains(&r.payload) {
            table.payloads.push(r.payload.clone());
        }
    }
    table.cells = vec![vec![None; table.payloads.len()]; table.schemes.len()];
    for r in results {
        let s = table.schemes.iter().position(|x| *x == r.scheme).unwrap();
        let p = table.payloads.iter().position(|x| *x == r.payload).unwrap();
        table.cells[s][p] = Some(Cell {
            mean_seconds: r.mean_seconds,
            variance_seconds2: r.variance_seconds2,
        });
    }
    table
}

impl ComparisonTable {
    pub fn is_empty(&self) -> bool {
        self.schemes.is_empty()
    }

    pub fn cell(&self, scheme: &str, payload: &str) -> Option<Cell> {
        let s = self.schemes.iter().position(|x| x == scheme)?;
        let p = self.payloads.iter().position(|x| x == payload)?;
        self.cells[s][p]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    /// Fixed-width text layout: one row per scheme, a mean and a variance
    /// column per payload.
    pub fn to_text(&self) -> String {
        if self.is_empty() {
            return String::new();
        }
        let name_w = self.schemes.iter().map(String::len).max().unwrap_or(0).max(6);
        let col_w = self.payloads.iter().map(|p| p.len()).max().unwrap_or(0).max(24);
        let mut out = format!("{:name_w$}", "Method");
        for p in &self.payloads {
            out.push_str(&format!(" | {p:^col_w$}"));
        }
        out.push('\n');
        out.push_str(&format!("{:name_w$}", ""));
        let half = (col_w - 1) / 2;
        let other = col_w - 1 - half;
        for _ in &self.payloads {
            out.push_str(&format!(" | {:>half$} {:>other$}", "Mean (s)", "Var (s^2)"));
        }
        out.push('\n');
        for (s, scheme) in self.schemes.iter().enumerate() {
            out.push_str(&format!("{scheme:name_w$}"));
            for cell in &self.cells[s] {
                match cell {
                    Some(c) => out.push_str(&format!(
                        " | {:>half$.6} {:>other$.3e}",
                        c.mean_seconds, c.variance_seconds2
                    )),
                    None => out.push_str(&format!(" | {:>half$} {:>other$}", "-", "-")),
                }
            }
            out.push('\n');
        }
        out
    }

    /// `scheme,payload,mean_seconds,variance_seconds2` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("scheme,payload,mean_seconds,variance_seconds2\n");
        for (s, scheme) in self.schemes.iter().enumerate() {
            for (p, payload) in self.payloads.iter().enumerate() {
                if let Some(c) = self.cells[s][p] {
                    out.push_str(&format!(
                        "{scheme},{payload},{},{}\n",
                        c.mean_seconds, c.variance_seconds2
                    ));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Advances a fixed step on every reading.
    struct TickClock {
        t: f64,
        step: f64,
    }

    impl Clock for TickClock {
        fn now(&mut self) -> f64 {
            self.t += self.step;
            self.t
        }
    }

    fn small_image(n: usize) -> Payload {
        Payload::Image(ImageBuffer::from_fn(n, n, |x, y| (x ^ y) as u8).unwrap())
    }

    #[test]
    fn constant_time_mock_has_zero_variance() {
        let mut clock = TickClock { t: 0.0, step: 0.25 };
        let samples = run_trials(&mut clock, 30, 5, || Ok(())).unwrap();
        let r = BenchResult::from_samples("mock", "nothing", 5, samples);
        assert_eq!(r.variance_seconds2, 0.0);
        assert_eq!(r.mean_seconds, 0.25);
        assert_eq!(r.trials, 30);
    }

    #[test]
    fn warmup_runs_are_not_timed() {
        let mut calls = 0;
        let mut clock = TickClock { t: 0.0, step: 1.0 };
        let samples = run_trials(&mut clock, 31, 7, || {
            calls += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(calls, 38);
        assert_eq!(samples.len(), 31);
    }

    #[test]
    fn too_few_trials() {
        let mut clock = TickClock { t: 0.0, step: 1.0 };
        assert!(run_trials(&mut clock, 29, 5, || Ok(())).is_err());
    }

    #[test]
    fn statistics() {
        let (m, v) = mean_variance(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((v - 5.0 / 3.0).abs() < 1e-15);
        assert_eq!(mean_variance(&[]), (0.0, 0.0));
        assert_eq!(mean_variance(&[3.0]), (3.0, 0.0));
    }

    #[test]
    fn chaos_bench_runs() {
        let r = bench_chaos(&small_image(16), &CipherConfig::default(), 30).unwrap();
        assert_eq!(r.scheme, CHAOS_SCHEME);
        assert_eq!(r.payload, "image 16x16");
        assert!(r.mean_seconds > 0.0 && r.variance_seconds2 >= 0.0);
    }

    #[test]
    fn aes_baseline_descriptor() {
        let r = bench_aes_baseline(&small_image(16), 30).unwrap();
        assert_eq!(r.scheme, "AES-128-CBC");
        assert!(r.hardware_aes.is_some());
        // one padding block on top of 256 bytes
        assert_eq!(aes_cbc_encrypt(&[0u8; 256]).unwrap().len(), 272);
    }

    #[test]
    fn payload_descriptors() {
        let f = ImageBuffer::filled(4, 3, 0).unwrap();
        assert_eq!(Payload::Frames(vec![f.clone(); 75]).descriptor(), "75 frames 4x3");
        assert_eq!(Payload::Audio(vec![0; 512]).descriptor(), "audio 512 frames");
        assert_eq!(Payload::Audio(vec![1, 2]).byte_units(), vec![vec![1, 0, 2, 0]]);
    }

    #[test]
    fn comparison_tables() {
        let empty = compare_report(&[]);
        assert!(empty.is_empty());
        assert_eq!(empty.to_text(), "");

        let mk = |s: &str, p: &str, m: f64| BenchResult::from_samples(s, p, 5, vec![m; 30]);
        let results = [
            mk("A", "x", 1.0),
            mk("A", "y", 2.0),
            mk("B", "x", 3.0),
            mk("B", "y", 4.0),
        ];
        let t = compare_report(&results);
        assert_eq!(t.schemes, ["A", "B"]);
        assert_eq!(t.payloads, ["x", "y"]);
        assert!(t.cells.iter().flatten().all(Option::is_some));
        assert_eq!(t.cell("B", "y").unwrap().mean_seconds, 4.0);
        let back: ComparisonTable = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(back, t);
        assert_eq!(t.to_text().lines().count(), 4);
        assert_eq!(t.to_csv().lines().count(), 5);
    }
}
