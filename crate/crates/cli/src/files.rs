//! Reading and writing PGM/PNG images, PCM-16 WAV audio and `.che` envelopes.

use std::io::{Cursor, Write};
use std::path::Path;

use chaocrypt::cipher::{to_grayscale, CipherEnvelope, ImageBuffer};
use image::codecs::png::PngEncoder;
use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{DynamicImage, ExtendedColorType, ImageEncoder, ImageFormat};

use crate::error::{CliError, CliResult};

pub const DEFAULT_SAMPLE_RATE: u32 = 44_100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Pgm,
    Png,
    Wav,
    Envelope,
}

impl FileKind {
    pub fn of(path: &Path) -> CliResult<Self> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .unwrap_or_default();
        match ext.as_str() {
            "pgm" | "pnm" => Ok(FileKind::Pgm),
            "png" => Ok(FileKind::Png),
            "wav" => Ok(FileKind::Wav),
            "che" => Ok(FileKind::Envelope),
            _ => Err(CliError::Unsupported(format!(
                "{}: unknown extension (expected .pgm, .png, .wav or .che)",
                path.display()
            ))),
        }
    }
}

pub fn read_bytes(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|e| CliError::io(path, e))
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so a failed run never leaves a partial file behind.
pub fn write_atomic(path: &Path, data: &[u8]) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(data).map_err(|e| CliError::io(tmp.path(), e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

/// Loads an image and converts it to 8-bit grayscale.
pub fn read_image(path: &Path) -> CliResult<ImageBuffer> {
    let format = match FileKind::of(path)? {
        FileKind::Pgm => ImageFormat::Pnm,
        FileKind::Png => ImageFormat::Png,
        _ => return Err(CliError::Unsupported(format!("{}: not an image file", path.display()))),
    };
    let bytes = read_bytes(path)?;
    let decoded = image::load_from_memory_with_format(&bytes, format).map_err(|e| CliError::Decode {
        path: path.to_owned(),
        detail: e.to_string(),
    })?;
    let (w, h) = (decoded.width() as usize, decoded.height() as usize);
    let img = match decoded {
        DynamicImage::ImageLuma8(gray) => ImageBuffer::new(w, h, gray.into_raw()),
        other => to_grayscale(other.to_rgb8().as_raw(), w, h),
    };
    Ok(img?)
}

pub fn encode_image(img: &ImageBuffer, kind: FileKind) -> CliResult<Vec<u8>> {
    let (w, h) = (img.width() as u32, img.height() as u32);
    let fail = |e: image::ImageError| CliError::Unsupported(format!("cannot encode image: {e}"));
    let mut out = Vec::new();
    match kind {
        FileKind::Pgm => PnmEncoder::new(&mut out)
            .with_subtype(PnmSubtype::Graymap(SampleEncoding::Binary))
            .write_image(img.pixels(), w, h, ExtendedColorType::L8)
            .map_err(fail)?,
        FileKind::Png => PngEncoder::new(&mut out)
            .write_image(img.pixels(), w, h, ExtendedColorType::L8)
            .map_err(fail)?,
        _ => return Err(CliError::Unsupported("image output must be .pgm or .png".into())),
    }
    Ok(out)
}

pub fn write_image(path: &Path, img: &ImageBuffer) -> CliResult<()> {
    let bytes = encode_image(img, FileKind::of(path)?)?;
    write_atomic(path, &bytes)
}

pub struct Wav {
    pub sample_rate: u32,
    pub samples: Vec<i16>,
}

/// Mono 16-bit integer PCM only.
pub fn read_wav(path: &Path) -> CliResult<Wav> {
    let decode_err = |e: hound::Error| CliError::Decode {
        path: path.to_owned(),
        detail: e.to_string(),
    };
    let reader = hound::WavReader::new(Cursor::new(read_bytes(path)?)).map_err(decode_err)?;
    let spec = reader.spec();
    if spec.channels != 1 || spec.bits_per_sample != 16 || spec.sample_format != hound::SampleFormat::Int {
        return Err(CliError::Unsupported(format!(
            "{}: expected mono 16-bit PCM, found {} channel(s), {} bit {:?}",
            path.display(),
            spec.channels,
            spec.bits_per_sample,
            spec.sample_format
        )));
    }
    let samples = reader
        .into_samples::<i16>()
        .collect::<Result<Vec<_>, _>>()
        .map_err(decode_err)?;
    Ok(Wav {
        sample_rate: spec.sample_rate,
        samples,
    })
}

pub fn encode_wav(wav: &Wav) -> CliResult<Vec<u8>> {
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: wav.sample_rate,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let mut out = Cursor::new(Vec::new());
    let fail = |e: hound::Error| CliError::Unsupported(format!("cannot encode WAV: {e}"));
    let mut writer = hound::WavWriter::new(&mut out, spec).map_err(fail)?;
    for &s in &wav.samples {
        writer.write_sample(s).map_err(fail)?;
    }
    writer.finalize().map_err(fail)?;
    Ok(out.into_inner())
}

pub fn read_envelope(path: &Path) -> CliResult<CipherEnvelope> {
    Ok(CipherEnvelope::from_bytes(&read_bytes(path)?)?)
}
