//! Fixed 16x16 byte substitution table.
//!
//! The published table is 1-based (values 1..=256); it is stored verbatim
//! and shifted down by one when the byte tables are built.

use serde::{Deserialize, Serialize};

/// The table as printed, row-major, values 1..=256.
const PRINTED: [u16; 256] = [
    53, 75, 33, 114, 1, 230, 176, 255, 131, 90, 212, 109, 28, 152, 201, 183, 130, 17, 80, 172, 256, 47, 10, 147, 85,
    237, 105, 126, 180, 203, 214, 56, 31, 231, 88, 211, 120, 132, 107, 169, 182, 49, 146, 208, 37, 14, 252, 77, 193,
    12, 164, 32, 52, 119, 185, 136, 219, 102, 45, 79, 250, 82, 238, 149, 174, 223, 195, 87, 35, 160, 229, 74, 13, 242,
    59, 140, 104, 22, 177, 121, 228, 58, 189, 249, 205, 21, 158, 210, 44, 71, 175, 8, 134, 112, 115, 81, 7, 99, 213,
    232, 69, 202, 34, 29, 254, 156, 129, 84, 123, 191, 64, 166, 248, 117, 98, 43, 18, 221, 76, 190, 151, 196, 96, 233,
    161, 51, 138, 15, 41, 141, 62, 150, 222, 178, 199, 108, 68, 24, 3, 251, 95, 122, 165, 240, 125, 198, 159, 142, 239,
    241, 83, 48, 170, 5, 184, 50, 215, 73, 27, 100, 106, 153, 246, 61, 86, 11, 143, 225, 128, 163, 23, 181, 206, 36,
    72, 220, 224, 244, 9, 186, 137, 168, 54, 91, 97, 127, 78, 19, 157, 236, 39, 194, 92, 192, 26, 4, 154, 67, 253, 197,
    226, 46, 118, 167, 57, 209, 111, 139, 70, 94, 135, 207, 103, 60, 216, 116, 25, 187, 245, 145, 227, 173, 2, 42, 179,
    40, 235, 101, 171, 89, 113, 6, 63, 144, 204, 218, 66, 247, 148, 30, 155, 162, 124, 65, 188, 110, 20, 55, 200, 217,
    234, 38, 16, 133, 93, 243,
];

const fn build_forward() -> [u8; 256] {
    let mut out = [0u8; 256];
    let mut i = 0;
    while i < 256 {
        out[i] = (PRINTED[i] - 1) as u8;
        i += 1;
    }
    out
}

const fn build_inverse(forward: &[u8; 256]) -> [u8; 256] {
    let mut out = [0u8; 256];
    let mut i = 0;
    while i < 256 {
        out[forward[i] as usize] = i as u8;
        i += 1;
    }
    out
}

static FORWARD: [u8; 256] = build_forward();
static INVERSE: [u8; 256] = build_inverse(&FORWARD);

#[inline]
pub fn sbox_forward(b: u8) -> u8 {
    FORWARD[b as usize]
}

#[inline]
pub fn sbox_inverse(b: u8) -> u8 {
    INVERSE[b as usize]
}

pub fn forward_table() -> &'static [u8; 256] {
    &FORWARD
}

pub fn inverse_table() -> &'static [u8; 256] {
    &INVERSE
}

/// Substitutes every byte in place.
pub fn substitute(bytes: &mut [u8]) {
    for b in bytes {
        *b = FORWARD[*b as usize];
    }
}

pub fn substitute_inverse(bytes: &mut [u8]) {
    for b in bytes {
        *b = INVERSE[*b as usize];
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SboxReport {
    pub is_bijective: bool,
    pub duplicate_values: Vec<u8>,
    pub missing_values: Vec<u8>,
    pub fixed_point_count: usize,
}

/// Structural check of an arbitrary 256-entry table.
pub fn validate_table(table: &[u8; 256]) -> SboxReport {
    let mut counts = [0u16; 256];
    for &v in table {
        counts[v as usize] += 1;
    }
    let duplicate_values: Vec<u8> = (0..=255u8).filter(|&v| counts[v as usize] > 1).collect();
    let missing_values: Vec<u8> = (0..=255u8).filter(|&v| counts[v as usize] == 0).collect();
    SboxReport {
        is_bijective: duplicate_values.is_empty() && missing_values.is_empty(),
        duplicate_values,
        missing_values,
        fixed_point_count: table.iter().enumerate().filter(|&(i, &v)| i == v as usize).count(),
    }
}

pub fn validate_sbox() -> SboxReport {
    validate_table(&FORWARD)
}
