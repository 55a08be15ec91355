//! Permutation / XOR / substitution pipeline.
//!
//! Encryption of an `A x B` grayscale image:
//!
//! 1. key material from SHA-512 of the pixels (or of a user secret);
//! 2. `A` TD-ERCS outputs, argsorted, shuffle the rows;
//! 3. `B` NCA outputs, argsorted, shuffle the columns;
//! 4. the same NCA orbit continues and each usable output `γ` becomes a
//!    keystream byte `floor((γ·10¹⁴) mod 256)`, XORed onto the pixels;
//! 5. every byte goes through the S-box.
//!
//! Decryption runs the inverse stages in reverse.

mod audio;
mod envelope;
mod image;

pub use audio::{audio_shape, decrypt_audio, encrypt_audio, pcm16_from_bytes, pcm16_to_bytes};
pub use envelope::{CipherEnvelope, EnvelopeHeader, KeyModeTag, PayloadKind, HEADER_LEN, MAGIC, VERSION};
pub use image::{luma, to_grayscale, ImageBuffer};

use crate::chaotic_maps::{chaotic_sequence, MapKind, NcaState, Permutation, DEFAULT_BURN_IN};
use crate::error::{Error, Result};
use crate::keying::{derive_key, hash_plaintext, key_from_user_secret, KeyMaterial, MapParams};
use crate::sbox;

/// Where the key material comes from.
#[derive(Clone, PartialEq, Eq)]
pub enum KeyMode {
    /// SHA-512 of the plaintext; the key travels in the envelope header.
    PlaintextHash,
    /// SHA-512 of a secret shared out of band.
    UserSecret(Vec<u8>),
}

impl std::fmt::Debug for KeyMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KeyMode::PlaintextHash => f.write_str("PlaintextHash"),
            KeyMode::UserSecret(_) => f.write_str("UserSecret(..)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CipherConfig {
    pub key_mode: KeyMode,
    pub params: MapParams,
    pub burn_in: usize,
}

impl Default for CipherConfig {
    fn default() -> Self {
        CipherConfig {
            key_mode: KeyMode::PlaintextHash,
            params: MapParams::default(),
            burn_in: DEFAULT_BURN_IN,
        }
    }
}

impl CipherConfig {
    pub fn with_secret(secret: impl Into<Vec<u8>>) -> Self {
        CipherConfig {
            key_mode: KeyMode::UserSecret(secret.into()),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if let KeyMode::UserSecret(s) = &self.key_mode {
            if s.is_empty() {
                return Err(Error::EmptyInput);
            }
        }
        if u32::try_from(self.burn_in).is_err() {
            return Err(Error::param("burn_in", self.burn_in, "must fit in 32 bits"));
        }
        Ok(())
    }

    /// Key material for encrypting `plaintext` under this configuration.
    pub fn key_for(&self, plaintext: &[u8]) -> Result<KeyMaterial> {
        match &self.key_mode {
            KeyMode::PlaintextHash => derive_key(&hash_plaintext(plaintext)?, self.params),
            KeyMode::UserSecret(secret) => key_from_user_secret(secret, self.params),
        }
    }
}

/// Smallest NCA output turned into a keystream byte. Below it `γ·10¹⁴`
/// wraps the modulus fewer than 256 times and the bytes pile up near zero;
/// the NCA orbit spends long stretches there after every pass close to 1.
pub const KEYSTREAM_FLOOR: f64 = 65_536.0 / 1e14;

/// Byte extracted from one chaotic value: the real modulus first, then the floor.
#[inline]
pub fn keystream_byte(gamma: f64) -> u8 {
    (gamma * 1e14).rem_euclid(256.0).floor() as u8
}

/// `n` keystream bytes from the NCA orbit after discarding `burn_in`
/// iterates. Outputs below [`KEYSTREAM_FLOOR`] are skipped.
pub fn generate_keystream(key: &KeyMaterial, n: usize, burn_in: usize) -> Result<Vec<u8>> {
    if n == 0 {
        return Err(Error::param("n", n, "keystream length must be at least 1"));
    }
    let mut nca = key.nca_state()?;
    for _ in 0..burn_in {
        nca.step()?;
    }
    keystream_from(&mut nca, n)
}

fn keystream_from(nca: &mut NcaState, n: usize) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let gamma = nca.step()?;
        if gamma >= KEYSTREAM_FLOOR {
            out.push(keystream_byte(gamma));
        }
    }
    Ok(out)
}

/// Everything the key determines for one image shape.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub rows: Permutation,
    pub cols: Permutation,
    pub keystream: Vec<u8>,
}

impl Schedule {
    pub fn derive(key: &KeyMaterial, width: usize, height: usize, burn_in: usize) -> Result<Self> {
        let rows = Permutation::from_sequence(&chaotic_sequence(MapKind::TdErcs, key, height, burn_in)?);
        // One NCA orbit: the first `width` values order the columns, the
        // rest feed the keystream.
        let mut nca = key.nca_state()?;
        for _ in 0..burn_in {
            nca.step()?;
        }
        let col_values = (0..width).map(|_| nca.step()).collect::<Result<Vec<_>>>()?;
        Ok(Schedule {
            rows,
            cols: Permutation::from_sequence(&col_values),
            keystream: keystream_from(&mut nca, width * height)?,
        })
    }
}

/// Output row `r` is input row `p[r]`.
pub fn permute_rows(img: &ImageBuffer, p: &Permutation) -> Result<ImageBuffer> {
    check_perm_len(p, img.height(), "rows")?;
    let mut out = Vec::with_capacity(img.len());
    for &src in p.as_slice() {
        out.extend_from_slice(img.row(src));
    }
    ImageBuffer::new(img.width(), img.height(), out)
}

/// Output column `c` is input column `p[c]`.
pub fn permute_cols(img: &ImageBuffer, p: &Permutation) -> Result<ImageBuffer> {
    check_perm_len(p, img.width(), "columns")?;
    let mut out = Vec::with_capacity(img.len());
    for y in 0..img.height() {
        let row = img.row(y);
        out.extend(p.as_slice().iter().map(|&src| row[src]));
    }
    ImageBuffer::new(img.width(), img.height(), out)
}

fn check_perm_len(p: &Permutation, expected: usize, what: &str) -> Result<()> {
    if p.len() == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: format!("{expected} {what}"),
            actual: format!("permutation of {}", p.len()),
        })
    }
}

pub fn xor_diffuse(img: &ImageBuffer, keystream: &[u8]) -> Result<ImageBuffer> {
    if keystream.len() != img.len() {
        return Err(Error::LengthMismatch {
            expected: img.len(),
            actual: keystream.len(),
        });
    }
    let out = img.pixels().iter().zip(keystream).map(|(p, k)| p ^ k).collect();
    ImageBuffer::new(img.width(), img.height(), out)
}

pub fn encrypt_with_key(img: &ImageBuffer, key: &KeyMaterial, burn_in: usize) -> Result<ImageBuffer> {
    let schedule = Schedule::derive(key, img.width(), img.height(), burn_in)?;
    encrypt_with_schedule(img, &schedule)
}

pub fn encrypt_with_schedule(img: &ImageBuffer, schedule: &Schedule) -> Result<ImageBuffer> {
    let shuffled = permute_cols(&permute_rows(img, &schedule.rows)?, &schedule.cols)?;
    let mut out = xor_diffuse(&shuffled, &schedule.keystream)?;
    sbox::substitute(out.pixels_mut());
    Ok(out)
}

pub fn decrypt_with_key(cipher: &ImageBuffer, key: &KeyMaterial, burn_in: usize) -> Result<ImageBuffer> {
    let schedule = Schedule::derive(key, cipher.width(), cipher.height(), burn_in)?;
    decrypt_with_schedule(cipher, &schedule)
}

pub fn decrypt_with_schedule(cipher: &ImageBuffer, schedule: &Schedule) -> Result<ImageBuffer> {
    let mut stage = cipher.clone();
    sbox::substitute_inverse(stage.pixels_mut());
    let shuffled = xor_diffuse(&stage, &schedule.keystream)?;
    permute_rows(
        &permute_cols(&shuffled, &schedule.cols.inverse())?,
        &schedule.rows.inverse(),
    )
}

pub fn encrypt_image(img: &ImageBuffer, cfg: &CipherConfig) -> Result<CipherEnvelope> {
    cfg.validate()?;
    let key = cfg.key_for(img.pixels())?;
    let body = encrypt_with_key(img, &key, cfg.burn_in)?;
    let (key_mode, kappa_hex) = match cfg.key_mode {
        KeyMode::PlaintextHash => (KeyModeTag::PlaintextHash, Some(key.kappa_hex())),
        KeyMode::UserSecret(_) => (KeyModeTag::UserSecret, None),
    };
    Ok(CipherEnvelope {
        header: EnvelopeHeader {
            key_mode,
            payload: PayloadKind::Image,
            width: dim_u32(img.width())?,
            height: dim_u32(img.height())?,
            burn_in: cfg.burn_in as u32,
            params: cfg.params,
            kappa_hex,
        },
        body: body.into_pixels(),
    })
}

fn dim_u32(v: usize) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::MalformedImage(format!("dimension {v} exceeds u32")))
}

/// Key material for an envelope: from the header in plaintext-hash mode,
/// from `secret` in user-secret mode.
pub fn envelope_key(env: &CipherEnvelope, secret: Option<&[u8]>) -> Result<KeyMaterial> {
    match env.header.key_mode {
        KeyModeTag::PlaintextHash => env
            .header
            .key()?
            .ok_or(Error::KeyUnavailable("plaintext-hash envelope carries no key")),
        KeyModeTag::UserSecret => {
            let secret = secret.ok_or(Error::KeyUnavailable("envelope was sealed with a user secret"))?;
            key_from_user_secret(secret, env.header.params)
        }
    }
}

pub fn decrypt_image(env: &CipherEnvelope, secret: Option<&[u8]>) -> Result<ImageBuffer> {
    let h = &env.header;
    if env.body.len() != h.body_len() {
        return Err(Error::LengthMismatch {
            expected: h.body_len(),
            actual: env.body.len(),
        });
    }
    let key = envelope_key(env, secret)?;
    let cipher = ImageBuffer::new(h.width as usize, h.height as usize, env.body.clone())?;
    decrypt_with_key(&cipher, &key, h.burn_in as usize)
}
