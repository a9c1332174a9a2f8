//! Binary masks and synthetic ground-truth generators: disks, sinusoidal
//! vessels and gapped variants.
//!
//! Shape membership is decided by pixel-center sampling with no
//! anti-aliasing, so every generator is reproducible bit for bit. Pixel
//! (row, col) has its center at real coordinates (row, col).

use crate::error::{Error, Result};
use crate::field::ScalarField2D;

/// Dense H x W mask with strictly {0,1} entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    height: usize,
    width: usize,
    bits: Vec<u8>,
}

impl BinaryMask {
    /// All-background mask. Panics if either dimension is zero.
    pub fn new(height: usize, width: usize) -> Self {
        assert!(height > 0 && width > 0, "mask dimensions must be positive");
        Self {
            height,
            width,
            bits: vec![0; height * width],
        }
    }

    /// Build a mask from a per-pixel predicate of (row, col).
    pub fn from_fn(height: usize, width: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut mask = Self::new(height, width);
        for r in 0..height {
            for c in 0..width {
                if f(r, c) {
                    mask.bits[r * width + c] = 1;
                }
            }
        }
        mask
    }

    /// Reinterpret an exactly-{0.0, 1.0} field as a mask.
    pub fn from_binary_field(field: &ScalarField2D) -> Result<Self> {
        if let Some(&bad) = field.data().iter().find(|v| **v != 0.0 && **v != 1.0) {
            return Err(Error::InvalidInput(format!(
                "field is not binary, found value {bad}"
            )));
        }
        Ok(Self {
            height: field.height(),
            width: field.width(),
            bits: field.data().iter().map(|&v| v as u8).collect(),
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.width + col] != 0
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.bits[row * self.width + col] = value as u8;
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b != 0).count()
    }

    pub fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                expected_height: self.height,
                expected_width: self.width,
                height: other.height,
                width: other.width,
            });
        }
        Ok(())
    }
}

/// Disk of the given radius on a square grid; pixels outside the grid are
/// clipped silently.
pub fn make_disk(size: usize, center: (f64, f64), radius: f64) -> Result<BinaryMask> {
    if size == 0 {
        return Err(Error::InvalidInput("grid size must be positive".into()));
    }
    if !center.0.is_finite() || !center.1.is_finite() {
        return Err(Error::InvalidInput(format!(
            "disk center ({}, {}) is not finite",
            center.0, center.1
        )));
    }
    if !radius.is_finite() || radius <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "disk radius must be a positive real, got {radius}"
        )));
    }
    let r_sq = radius * radius;
    Ok(BinaryMask::from_fn(size, size, |r, c| {
        let dy = r as f64 - center.0;
        let dx = c as f64 - center.1;
        dy * dy + dx * dx <= r_sq
    }))
}

/// Sinusoidal tube spanning the full grid width: pixels within width/2
/// (vertically) of y = size/2 + amplitude*sin(2*pi*x/period).
pub fn make_vessel(size: usize, amplitude: f64, period: f64, width: f64) -> Result<BinaryMask> {
    if size == 0 {
        return Err(Error::InvalidInput("grid size must be positive".into()));
    }
    if !period.is_finite() || period <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "vessel period must be a positive real, got {period}"
        )));
    }
    if !width.is_finite() || width < 1.0 {
        return Err(Error::InvalidInput(format!(
            "vessel width must be at least 1 pixel, got {width}"
        )));
    }
    if !amplitude.is_finite() || amplitude < 0.0 {
        return Err(Error::InvalidInput(format!(
            "vessel amplitude must be non-negative, got {amplitude}"
        )));
    }
    let mid = (size / 2) as f64;
    let reach = amplitude + width / 2.0;
    if mid - reach < 0.0 || mid + reach > (size - 1) as f64 {
        return Err(Error::InvalidInput(format!(
            "vessel leaves the grid: center {mid} with vertical reach {reach} on size {size}"
        )));
    }
    let half = width / 2.0;
    Ok(BinaryMask::from_fn(size, size, |r, c| {
        let y = mid + amplitude * (2.0 * std::f64::consts::PI * c as f64 / period).sin();
        (r as f64 - y).abs() <= half
    }))
}

/// Clear the foreground inside a column range; columns beyond the mask are
/// ignored.
pub fn punch_gap(mask: &BinaryMask, columns: std::ops::Range<usize>) -> BinaryMask {
    let mut out = mask.clone();
    let end = columns.end.min(mask.width());
    for c in columns.start.min(end)..end {
        for r in 0..mask.height() {
            out.set(r, c, false);
        }
    }
    out
}
