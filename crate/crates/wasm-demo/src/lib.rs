//! Browser bindings for the `www/` demo page.
//!
//! Images cross the boundary as row-major 8-bit grayscale buffers; the page
//! converts canvas RGBA with [`rgba_to_gray`].

use chaocrypt::analysis::{self, DEFAULT_SAMPLING_SEED};
use chaocrypt::chaotic_maps::{TdErcsSeed, TdErcsState};
use chaocrypt::cipher::{
    decrypt_image, encrypt_image, encrypt_with_key, luma, CipherConfig, CipherEnvelope, ImageBuffer, HEADER_LEN,
};
use chaocrypt::Error;
use wasm_bindgen::prelude::*;

fn config(secret: Option<String>) -> CipherConfig {
    match secret.filter(|s| !s.is_empty()) {
        Some(s) => CipherConfig::with_secret(s),
        None => CipherConfig::default(),
    }
}

fn js(e: Error) -> JsError {
    JsError::new(&format!("{}: {e}", e.code()))
}

pub fn gray_from_rgba(rgba: &[u8]) -> Vec<u8> {
    rgba.chunks_exact(4).map(|p| luma(p[0], p[1], p[2])).collect()
}

pub fn seal(pixels: &[u8], width: usize, height: usize, secret: Option<String>) -> Result<Vec<u8>, Error> {
    let img = ImageBuffer::new(width, height, pixels.to_vec())?;
    Ok(encrypt_image(&img, &config(secret))?.to_bytes())
}

pub fn open(envelope: &[u8], secret: Option<String>) -> Result<Vec<u8>, Error> {
    let env = CipherEnvelope::from_bytes(envelope)?;
    let secret = secret.filter(|s| !s.is_empty());
    Ok(decrypt_image(&env, secret.as_deref().map(str::as_bytes))?.into_pixels())
}

/// JSON: the metrics report plus both 256-bin histograms.
pub fn report(plain: &[u8], envelope: &[u8], secret: Option<String>) -> Result<String, Error> {
    let env = CipherEnvelope::from_bytes(envelope)?;
    let (w, h) = (env.header.width as usize, env.header.height as usize);
    let plain = ImageBuffer::new(w, h, plain.to_vec())?;
    let cipher = ImageBuffer::new(w, h, env.body)?;
    let mut cfg = config(secret);
    cfg.params = env.header.params;
    cfg.burn_in = env.header.burn_in as usize;
    let report = analysis::full_report(&plain, &cipher, &cfg, DEFAULT_SAMPLING_SEED)?;
    let value = serde_json::json!({
        "report": report,
        "plain_histogram": analysis::histogram(&plain).to_vec(),
        "cipher_histogram": analysis::histogram(&cipher).to_vec(),
    });
    Ok(value.to_string())
}

/// 255 where the ciphertexts under κ₁ and κ₁ with its low bit flipped differ.
pub fn sensitivity_mask(pixels: &[u8], width: usize, height: usize, secret: Option<String>) -> Result<Vec<u8>, Error> {
    let img = ImageBuffer::new(width, height, pixels.to_vec())?;
    let cfg = config(secret);
    let key = cfg.key_for(img.pixels())?;
    let a = encrypt_with_key(&img, &key, cfg.burn_in)?;
    let b = encrypt_with_key(&img, &key.with_kappa1_bit_flipped(), cfg.burn_in)?;
    Ok(a.pixels()
        .iter()
        .zip(b.pixels())
        .map(|(x, y)| if x == y { 0 } else { 255 })
        .collect())
}

/// `[x1, y1, x2, y2, …]` for `n` iterates.
pub fn orbit(x0: f64, mu: f64, alpha: f64, delay: usize, n: usize) -> Result<Vec<f64>, Error> {
    let mut state = TdErcsState::new(&TdErcsSeed::new(x0, mu, alpha, delay)?)?;
    let mut out = Vec::with_capacity(2 * n);
    for _ in 0..n {
        state.step()?;
        out.push(state.x());
        out.push(state.y());
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn rgba_to_gray(rgba: &[u8]) -> Vec<u8> {
    gray_from_rgba(rgba)
}

#[wasm_bindgen]
pub fn header_len() -> usize {
    HEADER_LEN
}

/// Envelope bytes; an empty secret selects plaintext-hash keying.
#[wasm_bindgen]
pub fn encrypt(pixels: &[u8], width: usize, height: usize, secret: Option<String>) -> Result<Vec<u8>, JsError> {
    seal(pixels, width, height, secret).map_err(js)
}

#[wasm_bindgen]
pub fn decrypt(envelope: &[u8], secret: Option<String>) -> Result<Vec<u8>, JsError> {
    open(envelope, secret).map_err(js)
}

#[wasm_bindgen]
pub fn metrics(plain: &[u8], envelope: &[u8], secret: Option<String>) -> Result<String, JsError> {
    report(plain, envelope, secret).map_err(js)
}

#[wasm_bindgen]
pub fn key_sensitivity_map(
    pixels: &[u8],
    width: usize,
    height: usize,
    secret: Option<String>,
) -> Result<Vec<u8>, JsError> {
    sensitivity_mask(pixels, width, height, secret).map_err(js)
}

#[wasm_bindgen]
pub fn tdercs_orbit(x0: f64, mu: f64, alpha: f64, delay: usize, n: usize) -> Result<Vec<f64>, JsError> {
    orbit(x0, mu, alpha, delay, n).map_err(js)
}
