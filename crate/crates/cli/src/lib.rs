//! `chaocrypt` command line: encrypt, decrypt, analyze, bench, sbox-check.
//!
//! Exit codes: 0 success, 1 validation error, 2 I/O error, 3 cipher or
//! metric error. Failures print one `error[CODE]: message` line on stderr.

pub mod error;
pub mod files;
pub mod payloads;

use std::io::Write;
use std::path::{Path, PathBuf};

use chaocrypt::analysis::{self, MetricsReport, Psnr, DEFAULT_SAMPLING_SEED};
use chaocrypt::bench::{self, BenchResult};
use chaocrypt::cipher::{
    decrypt_audio, decrypt_image, encrypt_audio, encrypt_image, CipherConfig, ImageBuffer, KeyMode, KeyModeTag,
    PayloadKind,
};
use chaocrypt::keying::MapParams;
use chaocrypt::sbox;
use clap::{Args, Parser, Subcommand, ValueEnum};

pub use error::{CliError, CliResult};
use files::{FileKind, Wav};
use payloads::PayloadChoice;

/// Overrides the metric sampling seed when `--seed` is absent.
pub const SEED_ENV: &str = "CHAOCRYPT_SEED";

#[derive(Debug, Parser)]
#[command(name = "chaocrypt", version, about = "TD-ERCS + NCA chaotic image and audio cipher")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encrypt a PGM/PNG image or a mono PCM-16 WAV into a `.che` envelope.
    Encrypt {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[arg(long = "out", value_name = "PATH")]
        output: PathBuf,
        #[command(flatten)]
        key: KeyArgs,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Decrypt a `.che` envelope back to an image (.pgm/.png) or WAV.
    Decrypt {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[arg(long = "out", value_name = "PATH")]
        output: PathBuf,
        #[command(flatten)]
        key: KeyArgs,
        /// Sample rate written to a decrypted WAV (envelopes do not store it).
        #[arg(long, default_value_t = files::DEFAULT_SAMPLE_RATE)]
        sample_rate: u32,
    },
    /// Security metrics for a plaintext image and its ciphertext.
    Analyze {
        #[arg(long, value_name = "PATH")]
        plain: PathBuf,
        /// A `.che` envelope, or an image holding ciphertext pixels.
        #[arg(long, value_name = "PATH")]
        cipher: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long = "out", value_name = "PATH")]
        output: Option<PathBuf>,
        /// 256 lines of `value plain_count cipher_count`.
        #[arg(long, value_name = "PATH")]
        histogram: Option<PathBuf>,
        /// Correlation sampling seed; falls back to $CHAOCRYPT_SEED.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        key: KeyArgs,
        /// Used only when `--cipher` is not an envelope.
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Encryption timing, chaos scheme against the AES-128-CBC baseline.
    Bench {
        #[arg(long, value_enum, default_value_t = PayloadChoice::All)]
        payload: PayloadChoice,
        #[arg(long, value_enum, default_value_t = SchemeChoice::Both)]
        scheme: SchemeChoice,
        #[arg(long, default_value_t = bench::MIN_TRIALS)]
        trials: usize,
        /// Side of the square frames used by image payloads.
        #[arg(long, default_value_t = 256)]
        size: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long = "out", value_name = "PATH")]
        output: Option<PathBuf>,
        #[command(flatten)]
        key: KeyArgs,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Verify the substitution table is a bijection.
    SboxCheck {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeChoice {
    Chaos,
    Aes,
    Both,
}

/// Plaintext-hash keying unless a secret is given.
#[derive(Debug, Clone, Default, Args)]
pub struct KeyArgs {
    #[arg(long, value_name = "TEXT", conflicts_with = "secret_file")]
    pub secret: Option<String>,
    /// Read the secret as raw bytes from a file.
    #[arg(long, value_name = "PATH")]
    pub secret_file: Option<PathBuf>,
}

impl KeyArgs {
    pub fn secret(&self) -> CliResult<Option<Vec<u8>>> {
        let bytes = match (&self.secret, &self.secret_file) {
            (Some(s), _) => s.as_bytes().to_vec(),
            (None, Some(p)) => files::read_bytes(p)?,
            (None, None) => return Ok(None),
        };
        if bytes.is_empty() {
            return Err(CliError::Usage("secret must not be empty".into()));
        }
        Ok(Some(bytes))
    }

    pub fn mode(&self) -> CliResult<KeyMode> {
        Ok(match self.secret()? {
            Some(s) => KeyMode::UserSecret(s),
            None => KeyMode::PlaintextHash,
        })
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    /// TD-ERCS ellipse ratio, in (0, 1).
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// TD-ERCS launch angle in radians.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// TD-ERCS tangent delay, at least 2.
    #[arg(long)]
    pub delay: Option<usize>,
    /// NCA alpha, in (0, 1.4].
    #[arg(long, allow_negative_numbers = true)]
    pub nca_alpha: Option<f64>,
    /// NCA beta, in [5, 43.6].
    #[arg(long, allow_negative_numbers = true)]
    pub nca_beta: Option<f64>,
    #[arg(long)]
    pub burn_in: Option<usize>,
}

impl ParamArgs {
    /// Configuration with overrides applied, validated before any work.
    pub fn config(&self, key_mode: KeyMode) -> CliResult<CipherConfig> {
        let d = CipherConfig::default();
        let cfg = CipherConfig {
            key_mode,
            params: MapParams {
                mu: self.mu.unwrap_or(d.params.mu),
                alpha: self.alpha.unwrap_or(d.params.alpha),
                delay: self.delay.unwrap_or(d.params.delay),
                nca_alpha: self.nca_alpha.unwrap_or(d.params.nca_alpha),
                nca_beta: self.nca_beta.unwrap_or(d.params.nca_beta),
            },
            burn_in: self.burn_in.unwrap_or(d.burn_in),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            let msg = first.strip_prefix("error: ").unwrap_or(first);
            let _ = writeln!(err, "error[E_USAGE]: {msg}");
            return 1;
        }
    };
    match execute(&cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let line = e.to_string().replace('\n', " ");
            let _ = writeln!(err, "error[{}]: {line}", e.code());
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Encrypt {
            input,
            output,
            key,
            params,
        } => encrypt_cmd(input, output, &params.config(key.mode()?)?),
        Command::Decrypt {
            input,
            output,
            key,
            sample_rate,
        } => decrypt_cmd(input, output, key.secret()?.as_deref(), *sample_rate),
        Command::Analyze {
            plain,
            cipher,
            format,
            output,
            histogram,
            seed,
            key,
            params,
        } => {
            let seed = sampling_seed(*seed)?;
            let (plain_img, cipher_img, cfg) = load_analysis_inputs(plain, cipher, key, params)?;
            let report = analysis::full_report(&plain_img, &cipher_img, &cfg, seed)?;
            if let Some(path) = histogram {
                files::write_atomic(path, histogram_dump(&plain_img, &cipher_img).as_bytes())?;
            }
            emit(&render_report(&report, *format), output.as_deref(), out)
        }
        Command::Bench {
            payload,
            scheme,
            trials,
            size,
            format,
            output,
            key,
            params,
        } => {
            if *size < 2 {
                return Err(CliError::Usage(format!("--size {size}: frames must be at least 2x2")));
            }
            let cfg = params.config(key.mode()?)?;
            let results = bench_cmd(*payload, *scheme, *trials, *size, &cfg, err)?;
            let table = bench::compare_report(&results);
            let text = match format {
                Format::Json => table.to_json() + "\n",
                Format::Csv => table.to_csv(),
                Format::Text => table.to_text(),
            };
            emit(&text, output.as_deref(), out)
        }
        Command::SboxCheck { format } => {
            let report = sbox::validate_sbox();
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
                Format::Csv => format!(
                    "is_bijective,duplicates,missing,fixed_points\n{},{},{},{}\n",
                    report.is_bijective,
                    report.duplicate_values.len(),
                    report.missing_values.len(),
                    report.fixed_point_count
                ),
                Format::Text => {
                    let inverse_ok = (0..=255u8).all(|b| sbox::sbox_inverse(sbox::sbox_forward(b)) == b);
                    format!(
                        "bijective: {}\ninverse round trip: {}\nduplicates: {:?}\nmissing: {:?}\nfixed points: {}\n",
                        report.is_bijective,
                        inverse_ok,
                        report.duplicate_values,
                        report.missing_values,
                        report.fixed_point_count
                    )
                }
            };
            out.write_all(text.as_bytes())
                .map_err(|e| CliError::io("<stdout>", e))?;
            if report.is_bijective {
                Ok(())
            } else {
                Err(CliError::Unsupported("substitution table is not a bijection".into()))
            }
        }
    }
}

fn encrypt_cmd(input: &Path, output: &Path, cfg: &CipherConfig) -> CliResult<()> {
    let env = match FileKind::of(input)? {
        FileKind::Wav => encrypt_audio(&files::read_wav(input)?.samples, cfg)?,
        FileKind::Pgm | FileKind::Png => encrypt_image(&files::read_image(input)?, cfg)?,
        FileKind::Envelope => {
            return Err(CliError::Unsupported(format!(
                "{}: input is already an envelope",
                input.display()
            )))
        }
    };
    files::write_atomic(output, &env.to_bytes())
}

fn decrypt_cmd(input: &Path, output: &Path, secret: Option<&[u8]>, sample_rate: u32) -> CliResult<()> {
    let env = files::read_envelope(input)?;
    let out_kind = FileKind::of(output)?;
    match env.header.payload {
        PayloadKind::Image => {
            if !matches!(out_kind, FileKind::Pgm | FileKind::Png) {
                return Err(CliError::Unsupported(
                    "image envelope: --out must be .pgm or .png".into(),
                ));
            }
            let img = decrypt_image(&env, secret)?;
            files::write_image(output, &img)
        }
        PayloadKind::Audio { .. } => {
            if out_kind != FileKind::Wav {
                return Err(CliError::Unsupported("audio envelope: --out must be .wav".into()));
            }
            let wav = Wav {
                sample_rate,
                samples: decrypt_audio(&env, secret)?,
            };
            files::write_atomic(output, &files::encode_wav(&wav)?)
        }
    }
}

fn sampling_seed(flag: Option<u64>) -> CliResult<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SAMPLING_SEED),
    }
}

fn load_analysis_inputs(
    plain: &Path,
    cipher: &Path,
    key: &KeyArgs,
    params: &ParamArgs,
) -> CliResult<(ImageBuffer, ImageBuffer, CipherConfig)> {
    let plain_img = files::read_image(plain)?;
    if FileKind::of(cipher)? != FileKind::Envelope {
        let cfg = params.config(key.mode()?)?;
        return Ok((plain_img, files::read_image(cipher)?, cfg));
    }
    let env = files::read_envelope(cipher)?;
    let h = &env.header;
    if h.payload != PayloadKind::Image {
        return Err(CliError::Unsupported(format!(
            "{}: analysis needs an image envelope",
            cipher.display()
        )));
    }
    let key_mode = match h.key_mode {
        KeyModeTag::PlaintextHash => KeyMode::PlaintextHash,
        KeyModeTag::UserSecret => match key.secret()? {
            Some(s) => KeyMode::UserSecret(s),
            None => {
                return Err(
                    chaocrypt::Error::KeyUnavailable("envelope was sealed with a user secret; pass --secret").into(),
                )
            }
        },
    };
    let cfg = CipherConfig {
        key_mode,
        params: h.params,
        burn_in: h.burn_in as usize,
    };
    let cipher_img = ImageBuffer::new(h.width as usize, h.height as usize, env.body.clone())?;
    Ok((plain_img, cipher_img, cfg))
}

pub fn histogram_dump(plain: &ImageBuffer, cipher: &ImageBuffer) -> String {
    let (p, c) = (analysis::histogram(plain), analysis::histogram(cipher));
    (0..256).map(|v| format!("{v} {} {}\n", p[v], c[v])).collect()
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.4}")).unwrap_or_else(|| "undefined".into())
}

fn psnr_text(p: Psnr) -> String {
    match p {
        Psnr::Db(v) => format!("{v:.4}"),
        Psnr::Infinite => "infinite".into(),
    }
}

pub fn render_report(r: &MetricsReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(r).expect("report serializes") + "\n",
        Format::Csv => {
            let cols = |f: &analysis::FrameMetrics| {
                let o = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
                format!(
                    "{},{},{},{},{},{},{},{},{}",
                    o(f.d_cc),
                    o(f.h_cc),
                    o(f.v_cc),
                    f.entropy,
                    f.contrast,
                    f.energy,
                    f.homogeneity,
                    f.chi_square.statistic,
                    f.chi_square.passed
                )
            };
            let names = "d_cc,h_cc,v_cc,entropy,contrast,energy,homogeneity,chi_square,chi_square_passed";
            let prefixed = |p: &str| {
                names
                    .split(',')
                    .map(|n| format!("{p}_{n}"))
                    .collect::<Vec<_>>()
                    .join(",")
            };
            let psnr = match r.psnr {
                Psnr::Db(v) => v.to_string(),
                Psnr::Infinite => "inf".into(),
            };
            format!(
                "sampling_seed,{},{},npcr,uaci,key_sensitivity,mse,psnr\n{},{},{},{},{},{},{},{}\n",
                prefixed("plain"),
                prefixed("cipher"),
                r.sampling_seed,
                cols(&r.plain),
                cols(&r.cipher),
                r.npcr,
                r.uaci,
                r.key_sensitivity,
                r.mse,
                psnr
            )
        }
        Format::Text => {
            let mut s = format!("{:<18} {:>12} {:>12}\n", "Metric", "Plain", "Cipher");
            let mut row = |name: &str, a: String, b: String| s.push_str(&format!("{name:<18} {a:>12} {b:>12}\n"));
            let (p, c) = (&r.plain, &r.cipher);
            row("D-CC", opt(p.d_cc), opt(c.d_cc));
            row("H-CC", opt(p.h_cc), opt(c.h_cc));
            row("V-CC", opt(p.v_cc), opt(c.v_cc));
            row("Entropy", format!("{:.4}", p.entropy), format!("{:.4}", c.entropy));
            row("Contrast", format!("{:.4}", p.contrast), format!("{:.4}", c.contrast));
            row("Energy", format!("{:.4}", p.energy), format!("{:.4}", c.energy));
            row(
                "Homogeneity",
                format!("{:.4}", p.homogeneity),
                format!("{:.4}", c.homogeneity),
            );
            row(
                "Chi-square",
                format!("{:.2}", p.chi_square.statistic),
                format!("{:.2}", c.chi_square.statistic),
            );
            row("NPCR", "-".into(), format!("{:.4}", r.npcr));
            row("UACI", "-".into(), format!("{:.4}", r.uaci));
            row("Key sensitivity", "-".into(), format!("{:.4}", r.key_sensitivity));
            row("MSE", "-".into(), format!("{:.4}", r.mse));
            row("PSNR (dB)", "-".into(), psnr_text(r.psnr));
            s.push_str(&format!("sampling seed: {}\n", r.sampling_seed));
            s
        }
    }
}

fn bench_cmd(
    payload: PayloadChoice,
    scheme: SchemeChoice,
    trials: usize,
    size: usize,
    cfg: &CipherConfig,
    err: &mut dyn Write,
) -> CliResult<Vec<BenchResult>> {
    let want_aes = match scheme {
        SchemeChoice::Chaos => false,
        SchemeChoice::Aes => {
            if !bench::aes_available() {
                return Err(chaocrypt::Error::BaselineUnavailable.into());
            }
            true
        }
        SchemeChoice::Both => {
            if !bench::aes_available() {
                let _ = writeln!(err, "note: AES baseline not built in; reporting the chaos scheme only");
            }
            bench::aes_available()
        }
    };
    let mut results = Vec::new();
    for choice in payload.expand() {
        let p = choice.build(size);
        if scheme != SchemeChoice::Aes {
            results.push(bench::bench_chaos(&p, cfg, trials)?);
        }
        if want_aes {
            results.push(bench::bench_aes_baseline(&p, trials)?);
        }
    }
    Ok(results)
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => files::write_atomic(p, text.as_bytes()),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e)),
    }
}
