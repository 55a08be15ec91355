//! Chaos-based lightweight cipher for grayscale images and PCM-16 audio.
//!
//! The pipeline shuffles rows with a TD-ERCS orbit, shuffles columns with an
//! NCA orbit, XORs an NCA keystream and finishes with a fixed S-box. Keys come
//! from SHA-512, either of the plaintext itself or of a shared secret.
//!
//! ```
//! use chaocrypt::cipher::{decrypt_image, encrypt_image, CipherConfig, ImageBuffer};
//!
//! let img = ImageBuffer::from_fn(8, 8, |x, y| (x * 16 + y) as u8).unwrap();
//! let env = encrypt_image(&img, &CipherConfig::with_secret("hunter2")).unwrap();
//! assert_eq!(decrypt_image(&env, Some(b"hunter2")).unwrap(), img);
//! ```

pub mod analysis;
pub mod bench;
pub mod chaotic_maps;
pub mod cipher;
pub mod error;
pub mod keying;
pub mod sbox;

pub use error::{Error, Result};
