use crate::error::{Error, Result};

/// Row-major 8-bit grayscale raster, at least 2x2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ImageBuffer {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl ImageBuffer {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width < 2 || height < 2 {
            return Err(Error::MalformedImage(format!(
                "{width}x{height} is smaller than the 2x2 minimum"
            )));
        }
        let expected = width
            .checked_mul(height)
            .ok_or_else(|| Error::MalformedImage(format!("{width}x{height} overflows")))?;
        if pixels.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: pixels.len(),
            });
        }
        Ok(ImageBuffer { width, height, pixels })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width.saturating_mul(height)])
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width.saturating_mul(height));
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn row(&self, y: usize) -> &[u8] {
        &self.pixels[y * self.width..(y + 1) * self.width]
    }

    pub fn same_shape(&self, other: &ImageBuffer) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub(crate) fn check_same_shape(&self, other: &ImageBuffer) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: format!("{}x{}", self.width, self.height),
                actual: format!("{}x{}", other.width, other.height),
            })
        }
    }
}

/// BT.601 luma, rounded half up: `round(0.299 R + 0.587 G + 0.114 B)`.
pub fn luma(r: u8, g: u8, b: u8) -> u8 {
    let weighted = 299 * r as u32 + 587 * g as u32 + 114 * b as u32;
    ((weighted + 500) / 1000).min(255) as u8
}

/// Converts packed RGB triplets to grayscale.
pub fn to_grayscale(rgb: &[u8], width: usize, height: usize) -> Result<ImageBuffer> {
    let expected = width.saturating_mul(height).saturating_mul(3);
    if rgb.len() != expected {
        return Err(Error::MalformedImage(format!(
            "{width}x{height} RGB needs {expected} bytes, got {}",
            rgb.len()
        )));
    }
    let gray = rgb.chunks_exact(3).map(|p| luma(p[0], p[1], p[2])).collect();
    ImageBuffer::new(width, height, gray)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn luma_reference_points() {
        assert_eq!(luma(255, 255, 255), 255);
        assert_eq!(luma(0, 0, 0), 0);
        assert_eq!(luma(255, 0, 0), 76);
        assert_eq!(luma(0, 255, 0), 150);
        assert_eq!(luma(0, 0, 255), 29);
    }

    #[test]
    fn grayscale_conversion() {
        let rgb = [255, 255, 255, 0, 0, 0, 255, 0, 0, 10, 10, 10];
        let img = to_grayscale(&rgb, 2, 2).unwrap();
        assert_eq!(img.pixels(), &[255, 0, 76, 10]);
        assert!(matches!(to_grayscale(&rgb[..11], 2, 2), Err(Error::MalformedImage(_))));
    }

    #[test]
    fn shape_validation() {
        assert!(ImageBuffer::new(1, 4, vec![0; 4]).is_err());
        assert!(ImageBuffer::new(2, 2, vec![0; 3]).is_err());
        let img = ImageBuffer::from_fn(3, 2, |x, y| (10 * y + x) as u8).unwrap();
        assert_eq!(img.row(1), &[10, 11, 12]);
        assert_eq!(img.get(2, 0), 2);
    }
}
