//! SHA-512 keying.
//!
//! The first 24 hex characters of a SHA-512 digest are split into two 48-bit
//! integers, `kappa1` and `kappa2`. Divided by 2⁴⁸ they become the TD-ERCS and
//! NCA initial conditions. Everything else the maps need comes from
//! [`MapParams`].

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha512};

use crate::chaotic_maps::{validate_tdercs_shape, NcaParams, NcaState, TdErcsSeed};
use crate::error::{Error, Result};

pub const KAPPA_BITS: u32 = 48;
pub const KAPPA_SCALE: f64 = (1u64 << KAPPA_BITS) as f64;
pub const KAPPA_MASK: u64 = (1u64 << KAPPA_BITS) - 1;

/// Hex characters consumed from the digest (two 48-bit halves).
pub const KAPPA_HEX_LEN: usize = 24;

/// Key-independent map parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapParams {
    pub mu: f64,
    pub alpha: f64,
    pub delay: usize,
    pub nca_alpha: f64,
    pub nca_beta: f64,
}

impl Default for MapParams {
    fn default() -> Self {
        MapParams {
            mu: 0.7,
            alpha: 1.0,
            delay: 3,
            nca_alpha: 1.2,
            nca_beta: 30.0,
        }
    }
}

impl MapParams {
    pub fn validate(&self) -> Result<()> {
        validate_tdercs_shape(self.mu, self.alpha, self.delay)?;
        NcaParams::new(self.nca_alpha, self.nca_beta).map(|_| ())
    }

    pub fn nca(&self) -> NcaParams {
        NcaParams {
            alpha: self.nca_alpha,
            beta: self.nca_beta,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KeyMaterial {
    kappa1: u64,
    kappa2: u64,
    params: MapParams,
    digest_hex: Option<String>,
}

impl KeyMaterial {
    pub fn from_kappas(kappa1: u64, kappa2: u64, params: MapParams) -> Result<Self> {
        if kappa1 > KAPPA_MASK || kappa2 > KAPPA_MASK {
            return Err(Error::param("kappa", kappa1.max(kappa2), "must fit in 48 bits"));
        }
        params.validate()?;
        Ok(KeyMaterial {
            kappa1,
            kappa2,
            params,
            digest_hex: None,
        })
    }

    /// Rebuilds key material from the 24-character `kappa1 ‖ kappa2` prefix.
    pub fn from_kappa_hex(hex_prefix: &str, params: MapParams) -> Result<Self> {
        if hex_prefix.len() != KAPPA_HEX_LEN {
            return Err(Error::MalformedDigest(format!(
                "expected {KAPPA_HEX_LEN} hex characters, got {}",
                hex_prefix.len()
            )));
        }
        let (k1, k2) = hex_prefix.split_at(KAPPA_HEX_LEN / 2);
        Self::from_kappas(parse_hex48(k1)?, parse_hex48(k2)?, params)
    }

    pub fn kappa1(&self) -> u64 {
        self.kappa1
    }

    pub fn kappa2(&self) -> u64 {
        self.kappa2
    }

    pub fn params(&self) -> &MapParams {
        &self.params
    }

    /// Full digest the key was derived from, when it is known.
    pub fn digest_hex(&self) -> Option<&str> {
        self.digest_hex.as_deref()
    }

    /// `kappa1 ‖ kappa2` as 24 lowercase hex characters.
    pub fn kappa_hex(&self) -> String {
        format!("{:012x}{:012x}", self.kappa1, self.kappa2)
    }

    /// TD-ERCS initial condition. A zero kappa is promoted to 1 so the
    /// condition is never 0.
    pub fn y0(&self) -> f64 {
        self.kappa1.max(1) as f64 / KAPPA_SCALE
    }

    /// NCA initial condition, with the same zero promotion as [`Self::y0`].
    pub fn x0_nca(&self) -> f64 {
        self.kappa2.max(1) as f64 / KAPPA_SCALE
    }

    /// The key's TD-ERCS condition is used as the start abscissa.
    pub fn tdercs_seed(&self) -> Result<TdErcsSeed> {
        TdErcsSeed::new(self.y0(), self.params.mu, self.params.alpha, self.params.delay)
    }

    pub fn nca_state(&self) -> Result<NcaState> {
        NcaState::new(self.x0_nca(), self.params.nca())
    }

    /// Same key with `kappa1`'s lowest bit flipped.
    pub fn with_kappa1_bit_flipped(&self) -> Self {
        KeyMaterial {
            kappa1: self.kappa1 ^ 1,
            digest_hex: None,
            ..self.clone()
        }
    }
}

fn parse_hex48(s: &str) -> Result<u64> {
    if !s.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(Error::MalformedDigest(format!("{s:?} is not hexadecimal")));
    }
    u64::from_str_radix(s, 16).map_err(|e| Error::MalformedDigest(e.to_string()))
}

/// Lowercase hex SHA-512 of `data`.
pub fn hash_plaintext(data: &[u8]) -> Result<String> {
    if data.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(hex::encode(Sha512::digest(data)))
}

pub fn derive_key(digest_hex: &str, params: MapParams) -> Result<KeyMaterial> {
    if digest_hex.len() != 128 || !digest_hex.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(Error::MalformedDigest(format!(
            "expected 128 hex characters, got {:?}",
            truncate_for_display(digest_hex)
        )));
    }
    let mut key = KeyMaterial::from_kappa_hex(&digest_hex[..KAPPA_HEX_LEN], params)?;
    key.digest_hex = Some(digest_hex.to_ascii_lowercase());
    Ok(key)
}

pub fn key_from_user_secret(secret: &[u8], params: MapParams) -> Result<KeyMaterial> {
    derive_key(&hash_plaintext(secret)?, params)
}

fn truncate_for_display(s: &str) -> String {
    s.chars().take(32).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn digest_with_prefix(prefix: &str) -> String {
        format!("{prefix:0<128}")
    }

    #[test]
    fn sha512_abc_vector() {
        let d = hash_plaintext(b"abc").unwrap();
        assert_eq!(d.len(), 128);
        assert!(d.starts_with("ddaf35a193617aba"));
        assert_eq!(d, hash_plaintext(b"abc").unwrap());
    }

    #[test]
    fn empty_input_is_rejected() {
        assert_eq!(hash_plaintext(b""), Err(Error::EmptyInput));
        assert_eq!(key_from_user_secret(b"", MapParams::default()), Err(Error::EmptyInput));
    }

    #[test]
    fn zero_kappa_is_promoted() {
        let key = derive_key(&digest_with_prefix("000000000000000000000001"), MapParams::default()).unwrap();
        assert_eq!(key.kappa1(), 0);
        assert_eq!(key.y0(), 2f64.powi(-48));
        assert_eq!(key.kappa2(), 1);
        assert_eq!(key.x0_nca(), 1.0 / KAPPA_SCALE);
    }

    #[test]
    fn maximal_kappa() {
        let key = derive_key(&"f".repeat(128), MapParams::default()).unwrap();
        assert_eq!(key.kappa1(), (1 << 48) - 1);
        assert_eq!(key.y0(), ((1u64 << 48) - 1) as f64 / KAPPA_SCALE);
        assert!(key.y0() < 1.0);
    }

    #[test]
    fn hex_to_decimal() {
        let key = derive_key(&digest_with_prefix("0000000000c8"), MapParams::default()).unwrap();
        assert_eq!(key.kappa1(), 200);
        assert_eq!(key.y0(), 200.0 / KAPPA_SCALE);
    }

    #[test]
    fn kappa2_comes_from_chars_13_to_24() {
        let d = digest_with_prefix("000000000001abcdef012345");
        let key = derive_key(&d, MapParams::default()).unwrap();
        assert_eq!(key.kappa1(), 1);
        assert_eq!(key.kappa2(), 0xabcdef012345);
        assert_eq!(key.kappa_hex(), &d[..24]);
        assert_eq!(key.digest_hex(), Some(d.as_str()));
    }

    #[test]
    fn malformed_digests() {
        let p = MapParams::default();
        assert!(matches!(derive_key("abc", p), Err(Error::MalformedDigest(_))));
        assert!(matches!(
            derive_key(&"g".repeat(128), p),
            Err(Error::MalformedDigest(_))
        ));
        assert!(matches!(
            derive_key(&"0".repeat(129), p),
            Err(Error::MalformedDigest(_))
        ));
        assert!(matches!(
            KeyMaterial::from_kappa_hex("+00000000000000000000000", p),
            Err(Error::MalformedDigest(_))
        ));
    }

    #[test]
    fn user_secret_keys() {
        let p = MapParams::default();
        assert_eq!(
            key_from_user_secret(b"k", p).unwrap(),
            key_from_user_secret(b"k", p).unwrap()
        );
        assert_ne!(
            key_from_user_secret(b"k", p).unwrap().kappa1(),
            key_from_user_secret(b"l", p).unwrap().kappa1()
        );
    }

    #[test]
    fn invalid_params_are_rejected() {
        let p = MapParams {
            mu: 1.5,
            ..MapParams::default()
        };
        assert!(matches!(
            key_from_user_secret(b"k", p),
            Err(Error::InvalidParameter { name: "mu", .. })
        ));
    }

    #[test]
    fn bit_flip_touches_only_kappa1() {
        let key = key_from_user_secret(b"k", MapParams::default()).unwrap();
        let flipped = key.with_kappa1_bit_flipped();
        assert_eq!(flipped.kappa1() ^ key.kappa1(), 1);
        assert_eq!(flipped.kappa2(), key.kappa2());
    }

    #[test]
    fn avalanche_on_kappa_prefix() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut total = 0u32;
        for _ in 0..100 {
            let mut data: Vec<u8> = (0..64).map(|_| rng.gen()).collect();
            let a = u128::from_str_radix(&hash_plaintext(&data).unwrap()[..24], 16).unwrap();
            let bit = rng.gen_range(0..data.len() * 8);
            data[bit / 8] ^= 1 << (bit % 8);
            let b = u128::from_str_radix(&hash_plaintext(&data).unwrap()[..24], 16).unwrap();
            total += (a ^ b).count_ones();
        }
        let mean = total as f64 / 100.0;
        assert!(mean >= 30.0, "mean changed bits {mean}");
    }

    proptest::proptest! {
        #[test]
        fn conditions_stay_in_range(k1 in 0u64..=KAPPA_MASK, k2 in 0u64..=KAPPA_MASK) {
            let key = KeyMaterial::from_kappas(k1, k2, MapParams::default()).unwrap();
            for c in [key.y0(), key.x0_nca()] {
                proptest::prop_assert!(c >= 2f64.powi(-48) && c < 1.0);
            }
            let again = KeyMaterial::from_kappa_hex(&key.kappa_hex(), MapParams::default()).unwrap();
            proptest::prop_assert_eq!(again, key);
        }
    }
}
