//! The `.che` ciphertext container.
//!
//! Fixed 84-byte little-endian header followed by the ciphertext body:
//!
//! | offset | size | field                                                  |
//! |-------:|-----:|--------------------------------------------------------|
//! | 0      | 4    | magic `b"CHE1"`                                        |
//! | 4      | 2    | version, `u16` = 1                                     |
//! | 6      | 1    | key mode: 0 = plaintext hash, 1 = user secret          |
//! | 7      | 1    | payload: 0 = grayscale image, 1 = PCM-16 audio         |
//! | 8      | 4    | width, `u32`                                           |
//! | 12     | 4    | height, `u32`                                          |
//! | 16     | 4    | padding bytes appended to the payload, `u32`           |
//! | 20     | 4    | burn-in iterations, `u32`                              |
//! | 24     | 4    | TD-ERCS tangent delay, `u32`                           |
//! | 28     | 8    | TD-ERCS `mu`, `f64`                                    |
//! | 36     | 8    | TD-ERCS `alpha`, `f64`                                 |
//! | 44     | 8    | NCA `alpha`, `f64`                                     |
//! | 52     | 8    | NCA `beta`, `f64`                                      |
//! | 60     | 24   | `kappa1 ‖ kappa2` as ASCII hex, or 24 zero bytes       |
//! | 84     | w·h  | body                                                   |

use crate::error::{Error, Result};
use crate::keying::{KeyMaterial, MapParams, KAPPA_HEX_LEN};

pub const MAGIC: [u8; 4] = *b"CHE1";
pub const VERSION: u16 = 1;
pub const HEADER_LEN: usize = 84;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyModeTag {
    PlaintextHash = 0,
    UserSecret = 1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PayloadKind {
    Image,
    /// Little-endian PCM-16 samples; `padding` zero bytes were appended.
    Audio {
        padding: u32,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeHeader {
    pub key_mode: KeyModeTag,
    pub payload: PayloadKind,
    pub width: u32,
    pub height: u32,
    pub burn_in: u32,
    pub params: MapParams,
    /// Present only in plaintext-hash mode.
    pub kappa_hex: Option<String>,
}

impl EnvelopeHeader {
    pub fn body_len(&self) -> usize {
        self.width as usize * self.height as usize
    }

    /// Key material carried by the header, if any.
    pub fn key(&self) -> Result<Option<KeyMaterial>> {
        self.kappa_hex
            .as_deref()
            .map(|hex| KeyMaterial::from_kappa_hex(hex, self.params))
            .transpose()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CipherEnvelope {
    pub header: EnvelopeHeader,
    pub body: Vec<u8>,
}

impl CipherEnvelope {
    pub fn to_bytes(&self) -> Vec<u8> {
        let h = &self.header;
        let mut out = Vec::with_capacity(HEADER_LEN + self.body.len());
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.push(h.key_mode as u8);
        let (kind, padding) = match h.payload {
            PayloadKind::Image => (0u8, 0u32),
            PayloadKind::Audio { padding } => (1, padding),
        };
        out.push(kind);
        out.extend_from_slice(&h.width.to_le_bytes());
        out.extend_from_slice(&h.height.to_le_bytes());
        out.extend_from_slice(&padding.to_le_bytes());
        out.extend_from_slice(&h.burn_in.to_le_bytes());
        out.extend_from_slice(&(h.params.delay as u32).to_le_bytes());
        for v in [h.params.mu, h.params.alpha, h.params.nca_alpha, h.params.nca_beta] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        match &h.kappa_hex {
            Some(hex) => out.extend_from_slice(hex.as_bytes()),
            None => out.extend_from_slice(&[0u8; KAPPA_HEX_LEN]),
        }
        debug_assert_eq!(out.len(), HEADER_LEN);
        out.extend_from_slice(&self.body);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 4 {
            return Err(Error::LengthMismatch {
                expected: HEADER_LEN,
                actual: bytes.len(),
            });
        }
        let magic: [u8; 4] = bytes[..4].try_into().unwrap();
        if magic != MAGIC {
            return Err(Error::BadMagic(magic));
        }
        if bytes.len() < HEADER_LEN {
            return Err(Error::LengthMismatch {
                expected: HEADER_LEN,
                actual: bytes.len(),
            });
        }
        let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
        let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());

        let version = u16::from_le_bytes([bytes[4], bytes[5]]);
        if version != VERSION {
            return Err(Error::UnsupportedVersion(version));
        }
        let key_mode = match bytes[6] {
            0 => KeyModeTag::PlaintextHash,
            1 => KeyModeTag::UserSecret,
            other => return Err(Error::MalformedEnvelope(format!("unknown key mode {other}"))),
        };
        let padding = u32_at(16);
        let payload = match bytes[7] {
            0 if padding == 0 => PayloadKind::Image,
            0 => return Err(Error::MalformedEnvelope("image payload with padding".into())),
            1 => PayloadKind::Audio { padding },
            other => return Err(Error::MalformedEnvelope(format!("unknown payload kind {other}"))),
        };
        let (width, height) = (u32_at(8), u32_at(12));
        if width < 2 || height < 2 {
            return Err(Error::MalformedEnvelope(format!(
                "dimensions {width}x{height} below 2x2"
            )));
        }
        let params = MapParams {
            mu: f64_at(28),
            alpha: f64_at(36),
            delay: u32_at(24) as usize,
            nca_alpha: f64_at(44),
            nca_beta: f64_at(52),
        };
        params.validate()?;

        let key_field = &bytes[60..HEADER_LEN];
        let kappa_hex = match key_mode {
            KeyModeTag::PlaintextHash => {
                let hex = std::str::from_utf8(key_field)
                    .map_err(|_| Error::MalformedDigest("key field is not ASCII".into()))?;
                KeyMaterial::from_kappa_hex(hex, params)?;
                Some(hex.to_owned())
            }
            KeyModeTag::UserSecret => {
                if key_field.iter().any(|&b| b != 0) {
                    return Err(Error::MalformedEnvelope(
                        "user-secret envelope must not carry key material".into(),
                    ));
                }
                None
            }
        };

        let header = EnvelopeHeader {
            key_mode,
            payload,
            width,
            height,
            burn_in: u32_at(20),
            params,
            kappa_hex,
        };
        let body = &bytes[HEADER_LEN..];
        if body.len() != header.body_len() {
            return Err(Error::LengthMismatch {
                expected: header.body_len(),
                actual: body.len(),
            });
        }
        if let PayloadKind::Audio { padding } = payload {
            if padding as usize >= body.len() {
                return Err(Error::MalformedEnvelope("padding exceeds body".into()));
            }
        }
        Ok(CipherEnvelope {
            header,
            body: body.to_vec(),
        })
    }
}
