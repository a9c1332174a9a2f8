//! Grid-based scalar fields, the level-set encoding and the smoothed
//! Heaviside family.
//!
//! A [`ScalarField2D`] is a dense row-major `f64` grid. It carries ground
//! truth indicators, level sets, smoothed indicators and loss gradients; all
//! operations here are pure and leave only finite values behind.

use crate::error::{Error, Result};
use crate::synth::BinaryMask;

/// Dense H x W real-valued grid, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField2D {
    height: usize,
    width: usize,
    data: Vec<f64>,
}

impl ScalarField2D {
    /// All-zero field. Panics if either dimension is zero.
    pub fn zeros(height: usize, width: usize) -> Self {
        Self::constant(height, width, 0.0)
    }

    /// Constant field. Panics if either dimension is zero.
    pub fn constant(height: usize, width: usize, value: f64) -> Self {
        assert!(height > 0 && width > 0, "field dimensions must be positive");
        Self {
            height,
            width,
            data: vec![value; height * width],
        }
    }

    /// Build a field from a per-pixel function of (row, col).
    pub fn from_fn(height: usize, width: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(height > 0 && width > 0, "field dimensions must be positive");
        let mut data = Vec::with_capacity(height * width);
        for r in 0..height {
            for c in 0..width {
                data.push(f(r, c));
            }
        }
        Self {
            height,
            width,
            data,
        }
    }

    /// Wrap an existing row-major buffer.
    pub fn from_vec(height: usize, width: usize, data: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 || data.len() != height * width {
            return Err(Error::InvalidInput(format!(
                "buffer of length {} does not match {}x{} grid",
                data.len(),
                height,
                width
            )));
        }
        Ok(Self {
            height,
            width,
            data,
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

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.width + col] = value;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// New field with `f` applied pointwise.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            height: self.height,
            width: self.width,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise combination of two same-shape fields.
    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            height: self.height,
            width: self.width,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
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

    /// Error out if any value is NaN or infinite.
    pub fn check_finite(&self, context: &str) -> Result<()> {
        if let Some(idx) = self.data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "{context}: non-finite value {} at pixel ({}, {})",
                self.data[idx],
                idx / self.width,
                idx % self.width
            )));
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for ScalarField2D {
    type Output = f64;

    fn index(&self, (row, col): (usize, usize)) -> &f64 {
        &self.data[row * self.width + col]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ScalarField2D {
    fn index_mut(&mut self, (row, col): (usize, usize)) -> &mut f64 {
        &mut self.data[row * self.width + col]
    }
}

/// Which regularized step function maps a level set to an indicator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmoothingKind {
    /// Half-sine ramp over the band, C^1 at the band edges.
    Sine,
    /// Linear ramp of slope 1/(2*beta) over the band.
    HardTanh,
}

/// Smoothed-Heaviside parameters: band half-width and ramp shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingParams {
    beta: f64,
    kind: SmoothingKind,
}

impl SmoothingParams {
    pub fn new(beta: f64, kind: SmoothingKind) -> Result<Self> {
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "smoothing half-width must be a positive real, got {beta}"
            )));
        }
        Ok(Self { beta, kind })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn kind(&self) -> SmoothingKind {
        self.kind
    }

    /// Step value at a single level-set value.
    #[inline]
    pub fn step(&self, phi: f64) -> f64 {
        let b = self.beta;
        match self.kind {
            SmoothingKind::Sine => {
                if phi <= -b {
                    0.0
                } else if phi >= b {
                    1.0
                } else {
                    0.5 * ((std::f64::consts::PI * phi / (2.0 * b)).sin() + 1.0)
                }
            }
            SmoothingKind::HardTanh => ((phi + b) / (2.0 * b)).clamp(0.0, 1.0),
        }
    }

    /// Derivative of [`Self::step`]; zero outside the open band (-beta, beta).
    #[inline]
    pub fn step_derivative(&self, phi: f64) -> f64 {
        let b = self.beta;
        if phi.abs() >= b {
            return 0.0;
        }
        match self.kind {
            SmoothingKind::Sine => {
                (std::f64::consts::PI / (4.0 * b)) * (std::f64::consts::PI * phi / (2.0 * b)).cos()
            }
            SmoothingKind::HardTanh => 1.0 / (2.0 * b),
        }
    }
}

impl Default for SmoothingParams {
    /// beta = 0.25, HardTanh ramp.
    fn default() -> Self {
        Self {
            beta: 0.25,
            kind: SmoothingKind::HardTanh,
        }
    }
}

/// Smoothed indicator H(phi), pointwise in [0, 1].
pub fn heaviside_smooth(phi: &ScalarField2D, params: &SmoothingParams) -> Result<ScalarField2D> {
    phi.check_finite("heaviside_smooth input")?;
    Ok(phi.map(|v| params.step(v)))
}

/// Chain-rule factor H'(phi); exactly zero wherever |phi| >= beta.
pub fn heaviside_derivative(
    phi: &ScalarField2D,
    params: &SmoothingParams,
) -> Result<ScalarField2D> {
    phi.check_finite("heaviside_derivative input")?;
    Ok(phi.map(|v| params.step_derivative(v)))
}

/// Level-set representation of a probability map: phi = prob - 0.5.
pub fn levelset_from_prob(prob: &ScalarField2D) -> Result<ScalarField2D> {
    prob.check_finite("levelset_from_prob input")?;
    if let Some(&bad) = prob.data().iter().find(|v| **v < 0.0 || **v > 1.0) {
        return Err(Error::InvalidInput(format!(
            "probability value {bad} is outside [0, 1]"
        )));
    }
    Ok(prob.map(|v| v - 0.5))
}

/// Lift a {0,1} mask into a {0.0, 1.0} field.
pub fn binary_mask_to_field(mask: &BinaryMask) -> ScalarField2D {
    ScalarField2D::from_fn(mask.height(), mask.width(), |r, c| {
        if mask.get(r, c) {
            1.0
        } else {
            0.0
        }
    })
}
