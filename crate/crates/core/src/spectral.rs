//! Unitary 2-D DFT, integer frequency grids and the half-norm weights.
//!
//! Both transform directions carry a 1/sqrt(H*W) factor, so Parseval's
//! identity holds without size-dependent corrections and `idft2` is the exact
//! adjoint of `dft2`. Frequencies are integer cycles per domain in the
//! symmetric range, with the Nyquist bin kept positive for even sizes.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

use num_complex::Complex;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::field::ScalarField2D;

/// Integer frequencies for every bin of an H x W spectrum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyGrid {
    height: usize,
    width: usize,
    freq_m: Vec<i64>,
    freq_n: Vec<i64>,
}

/// Bin index -> signed frequency in [-ceil(n/2)+1, floor(n/2)].
fn symmetric_freqs(n: usize) -> Vec<i64> {
    (0..n)
        .map(|i| {
            if i <= n / 2 {
                i as i64
            } else {
                i as i64 - n as i64
            }
        })
        .collect()
}

impl FrequencyGrid {
    pub fn new(height: usize, width: usize) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::InvalidInput(format!(
                "frequency grid dimensions must be positive, got {height}x{width}"
            )));
        }
        Ok(Self {
            height,
            width,
            freq_m: symmetric_freqs(height),
            freq_n: symmetric_freqs(width),
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Row frequency m for row bin `i`.
    #[inline]
    pub fn freq_m(&self, i: usize) -> i64 {
        self.freq_m[i]
    }

    /// Column frequency n for column bin `j`.
    #[inline]
    pub fn freq_n(&self, j: usize) -> i64 {
        self.freq_n[j]
    }
}

/// Complex DFT coefficients of an H x W real field, row-major over bins.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField2D {
    height: usize,
    width: usize,
    coeffs: Vec<Complex<f64>>,
}

impl SpectralField2D {
    pub fn from_coeffs(height: usize, width: usize, coeffs: Vec<Complex<f64>>) -> Result<Self> {
        if height == 0 || width == 0 || coeffs.len() != height * width {
            return Err(Error::InvalidInput(format!(
                "coefficient buffer of length {} does not match {}x{} spectrum",
                coeffs.len(),
                height,
                width
            )));
        }
        Ok(Self {
            height,
            width,
            coeffs,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn coeff(&self, i: usize, j: usize) -> Complex<f64> {
        self.coeffs[i * self.width + j]
    }

    #[inline]
    pub fn coeff_mut(&mut self, i: usize, j: usize) -> &mut Complex<f64> {
        &mut self.coeffs[i * self.width + j]
    }

    pub fn coeffs(&self) -> &[Complex<f64>] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex<f64>] {
        &mut self.coeffs
    }

    /// Frequency grid matching this spectrum's shape.
    pub fn frequency_grid(&self) -> FrequencyGrid {
        FrequencyGrid::new(self.height, self.width).expect("shape validated at construction")
    }
}

/// Plans keyed by transform length and whether the direction is forward.
type PlanMap = HashMap<(usize, bool), Arc<dyn Fft<f64>>>;

// FFT plans are immutable once built and safe to share; the cache just
// avoids re-planning the same length on every call.
static PLAN_CACHE: LazyLock<Mutex<PlanMap>> = LazyLock::new(|| Mutex::new(HashMap::new()));

fn plan(len: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    let key = (len, matches!(direction, FftDirection::Forward));
    let mut cache = PLAN_CACHE.lock().expect("fft plan cache poisoned");
    Arc::clone(
        cache
            .entry(key)
            .or_insert_with(|| FftPlanner::new().plan_fft(len, direction)),
    )
}

/// FFT all rows in place, then all columns via a gather/scatter scratch.
fn fft2_in_place(buf: &mut [Complex<f64>], height: usize, width: usize, direction: FftDirection) {
    let row_plan = plan(width, direction);
    for row in buf.chunks_exact_mut(width) {
        row_plan.process(row);
    }

    let col_plan = plan(height, direction);
    let mut column = vec![Complex::new(0.0, 0.0); height];
    for j in 0..width {
        for i in 0..height {
            column[i] = buf[i * width + j];
        }
        col_plan.process(&mut column);
        for i in 0..height {
            buf[i * width + j] = column[i];
        }
    }
}

/// Unitary forward 2-D DFT of a real field.
pub fn dft2(field: &ScalarField2D) -> Result<SpectralField2D> {
    let (height, width) = field.shape();
    if height < 2 || width < 2 {
        return Err(Error::InvalidInput(format!(
            "transform needs at least a 2x2 grid, got {height}x{width}"
        )));
    }
    field.check_finite("dft2 input")?;

    let mut buf: Vec<Complex<f64>> = field.data().iter().map(|&v| Complex::new(v, 0.0)).collect();
    fft2_in_place(&mut buf, height, width, FftDirection::Forward);

    let scale = 1.0 / ((height * width) as f64).sqrt();
    for c in &mut buf {
        *c *= scale;
    }
    SpectralField2D::from_coeffs(height, width, buf)
}

/// Unitary inverse 2-D DFT; the input must be Hermitian-symmetric so the
/// spatial result is real.
pub fn idft2(spec: &SpectralField2D) -> Result<ScalarField2D> {
    let (height, width) = (spec.height, spec.width);
    if height < 2 || width < 2 {
        return Err(Error::InvalidInput(format!(
            "transform needs at least a 2x2 grid, got {height}x{width}"
        )));
    }

    let mut buf = spec.coeffs.clone();
    fft2_in_place(&mut buf, height, width, FftDirection::Inverse);

    let scale = 1.0 / ((height * width) as f64).sqrt();
    let mut norm_sq = 0.0;
    let mut max_imag: f64 = 0.0;
    for c in &mut buf {
        *c *= scale;
        norm_sq += c.norm_sqr();
        max_imag = max_imag.max(c.im.abs());
    }

    let norm = norm_sq.sqrt();
    if max_imag > 1e-8 * norm {
        return Err(Error::SymmetryViolation {
            residual: max_imag / norm,
        });
    }

    ScalarField2D::from_vec(height, width, buf.into_iter().map(|c| c.re).collect())
}

/// Per-bin weight sqrt(m^2 + n^2); zero only at the DC bin.
pub fn halfnorm_multiplier(grid: &FrequencyGrid) -> ScalarField2D {
    ScalarField2D::from_fn(grid.height, grid.width, |i, j| {
        let m = grid.freq_m(i) as f64;
        let n = grid.freq_n(j) as f64;
        m.hypot(n)
    })
}
