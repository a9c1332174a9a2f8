//! The elastic-interaction loss between a ground-truth region and a
//! level-set prediction.
//!
//! The prediction boundary carries the opposite orientation to the ground
//! truth, encoded as a minus sign in the combined field f = gt - alpha*H(phi).
//! The loss is the half-norm quadratic form sum sqrt(m^2+n^2)*|f_hat|^2 over
//! the unitary spectrum; a perfect prediction with alpha = 1 annihilates f
//! and the loss is exactly zero. The gradient is the exact differential of
//! this forward pass, so finite differences are the binding contract.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::field::{heaviside_derivative, heaviside_smooth, ScalarField2D, SmoothingParams};
use crate::spectral::{dft2, halfnorm_multiplier, idft2, FrequencyGrid};

/// Loss hyperparameters: prediction weight and Heaviside smoothing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticParams {
    alpha: f64,
    smoothing: SmoothingParams,
}

impl ElasticParams {
    pub fn new(alpha: f64, smoothing: SmoothingParams) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "prediction weight must be a positive real, got {alpha}"
            )));
        }
        Ok(Self { alpha, smoothing })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn smoothing(&self) -> &SmoothingParams {
        &self.smoothing
    }
}

impl Default for ElasticParams {
    /// alpha = 0.35 with the default smoothing band.
    fn default() -> Self {
        Self {
            alpha: 0.35,
            smoothing: SmoothingParams::default(),
        }
    }
}

/// Forward value and its gradient with respect to the level set.
#[derive(Debug, Clone, PartialEq)]
pub struct LossAndGrad {
    pub loss: f64,
    pub grad_phi: ScalarField2D,
}

fn check_binary_gt(gt: &ScalarField2D) -> Result<()> {
    gt.check_finite("ground-truth field")?;
    if let Some(&bad) = gt.data().iter().find(|v| **v != 0.0 && **v != 1.0) {
        return Err(Error::InvalidInput(format!(
            "ground-truth field must be binary, found value {bad}"
        )));
    }
    Ok(())
}

/// f = gt - alpha * H(phi); the sign encodes the opposite orientation of the
/// prediction boundary.
pub fn combined_field(
    gt: &ScalarField2D,
    phi: &ScalarField2D,
    params: &ElasticParams,
) -> Result<ScalarField2D> {
    check_binary_gt(gt)?;
    gt.check_same_shape(phi)?;
    let h = heaviside_smooth(phi, &params.smoothing)?;
    gt.zip_map(&h, |g, hv| g - params.alpha * hv)
}

/// Half-norm quadratic form of an arbitrary real field:
/// sum over bins of sqrt(m^2+n^2) * |f_hat|^2.
pub fn halfnorm_energy(field: &ScalarField2D) -> Result<f64> {
    let spec = dft2(field)?;
    let weights = halfnorm_multiplier(&spec.frequency_grid());
    Ok(spec
        .coeffs()
        .iter()
        .zip(weights.data())
        .map(|(c, w)| w * c.norm_sqr())
        .sum())
}

/// Loss of the combined field (FFT path).
pub fn elastic_loss(
    gt: &ScalarField2D,
    phi: &ScalarField2D,
    params: &ElasticParams,
) -> Result<f64> {
    halfnorm_energy(&combined_field(gt, phi, params)?)
}

/// Loss plus the exact gradient of the forward pass:
/// grad_phi = -alpha * H'(phi) .* idft2(2 * sqrt(m^2+n^2) * f_hat).
pub fn elastic_loss_and_grad(
    gt: &ScalarField2D,
    phi: &ScalarField2D,
    params: &ElasticParams,
) -> Result<LossAndGrad> {
    let f = combined_field(gt, phi, params)?;
    let mut spec = dft2(&f)?;
    let weights = halfnorm_multiplier(&spec.frequency_grid());

    let mut loss = 0.0;
    for (c, &w) in spec.coeffs_mut().iter_mut().zip(weights.data()) {
        loss += w * c.norm_sqr();
        // The weight is even in frequency, so doubling it keeps the spectrum
        // Hermitian and the inverse transform real.
        *c *= 2.0 * w;
    }

    let dl_df = idft2(&spec)?;
    let dh = heaviside_derivative(phi, &params.smoothing)?;
    let grad_phi = dl_df.zip_map(&dh, |g, d| -params.alpha * d * g)?;

    Ok(LossAndGrad { loss, grad_phi })
}

/// Largest grid edge accepted by [`direct_spectral_oracle`].
pub const SPECTRAL_ORACLE_LIMIT: usize = 64;

/// Same quadratic form as [`elastic_loss`], but with the spectrum computed by
/// the DFT definition (quartic cost). Exactness oracle for the FFT path.
pub fn direct_spectral_oracle(
    gt: &ScalarField2D,
    phi: &ScalarField2D,
    params: &ElasticParams,
) -> Result<f64> {
    let (height, width) = gt.shape();
    if height > SPECTRAL_ORACLE_LIMIT || width > SPECTRAL_ORACLE_LIMIT {
        return Err(Error::SizeLimit {
            height,
            width,
            limit: SPECTRAL_ORACLE_LIMIT,
        });
    }
    let f = combined_field(gt, phi, params)?;

    let grid = FrequencyGrid::new(height, width)?;
    let tw_row = twiddles(height);
    let tw_col = twiddles(width);
    let scale = 1.0 / ((height * width) as f64).sqrt();

    let mut total = 0.0;
    for bi in 0..height {
        for bj in 0..width {
            let mut acc = Complex::new(0.0, 0.0);
            for x in 0..height {
                let wr = tw_row[(x * bi) % height];
                for y in 0..width {
                    let wc = tw_col[(y * bj) % width];
                    acc += f.get(x, y) * wr * wc;
                }
            }
            acc *= scale;
            let m = grid.freq_m(bi) as f64;
            let n = grid.freq_n(bj) as f64;
            total += m.hypot(n) * acc.norm_sqr();
        }
    }
    Ok(total)
}

/// exp(-2*pi*i*k/n) for k in 0..n.
fn twiddles(n: usize) -> Vec<Complex<f64>> {
    (0..n)
        .map(|k| Complex::from_polar(1.0, -2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect()
}

/// Largest grid edge accepted by [`spatial_kernel_oracle`].
pub const SPATIAL_ORACLE_LIMIT: usize = 48;

/// Literal double sum (1/8pi) * sum grad f(p) . grad f(q) / sqrt(r^2 + eps^2)
/// with periodic central differences and free-space pixel distances.
///
/// Boundary conditions and regularization differ from the FFT path, so this
/// oracle is only meaningful for ordering comparisons, not absolute values.
pub fn spatial_kernel_oracle(
    gt: &ScalarField2D,
    phi: &ScalarField2D,
    params: &ElasticParams,
    epsilon: f64,
) -> Result<f64> {
    let (height, width) = gt.shape();
    if height > SPATIAL_ORACLE_LIMIT || width > SPATIAL_ORACLE_LIMIT {
        return Err(Error::SizeLimit {
            height,
            width,
            limit: SPATIAL_ORACLE_LIMIT,
        });
    }
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "kernel regularization must be a positive real, got {epsilon}"
        )));
    }
    let f = combined_field(gt, phi, params)?;

    // Periodic central differences of f, one (gy, gx) pair per pixel.
    let n = height * width;
    let mut grad = vec![(0.0f64, 0.0f64); n];
    for i in 0..height {
        let up = (i + height - 1) % height;
        let down = (i + 1) % height;
        for j in 0..width {
            let left = (j + width - 1) % width;
            let right = (j + 1) % width;
            grad[i * width + j] = (
                0.5 * (f.get(down, j) - f.get(up, j)),
                0.5 * (f.get(i, right) - f.get(i, left)),
            );
        }
    }

    let eps_sq = epsilon * epsilon;
    let mut total = 0.0;
    for pi in 0..height {
        for pj in 0..width {
            let (pgy, pgx) = grad[pi * width + pj];
            if pgy == 0.0 && pgx == 0.0 {
                continue;
            }
            for qi in 0..height {
                let dy = pi as f64 - qi as f64;
                for qj in 0..width {
                    let (qgy, qgx) = grad[qi * width + qj];
                    let dot = pgy * qgy + pgx * qgx;
                    if dot == 0.0 {
                        continue;
                    }
                    let dx = pj as f64 - qj as f64;
                    total += dot / (dy * dy + dx * dx + eps_sq).sqrt();
                }
            }
        }
    }
    Ok(total / (8.0 * std::f64::consts::PI))
}

/// Weighted spectral inner product
/// X(a,b) = sum sqrt(m^2+n^2) * Re(a_hat * conj(b_hat)).
///
/// Bilinear companion of [`halfnorm_energy`]:
/// L(a+b) = L(a) + L(b) + 2*X(a,b).
pub fn cross_energy(fa: &ScalarField2D, fb: &ScalarField2D) -> Result<f64> {
    fa.check_same_shape(fb)?;
    let sa = dft2(fa)?;
    let sb = dft2(fb)?;
    let weights = halfnorm_multiplier(&sa.frequency_grid());
    Ok(sa
        .coeffs()
        .iter()
        .zip(sb.coeffs())
        .zip(weights.data())
        .map(|((a, b), w)| w * (a * b.conj()).re)
        .sum())
}

/// Compare the analytic gradient against central finite differences of
/// [`elastic_loss`] at the `probes` largest-magnitude gradient pixels,
/// returning the worst relative error.
///
/// Probe pixels near the smoothing band edge (within 10 steps, capped at
/// half the band) are skipped: the ramp functions have kinks at
/// |phi| = beta and central differences straddle them there.
pub fn finite_difference_check(
    gt: &ScalarField2D,
    phi: &ScalarField2D,
    params: &ElasticParams,
    step: f64,
    probes: usize,
) -> Result<f64> {
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "finite-difference step must be a positive real, got {step}"
        )));
    }
    let analytic = elastic_loss_and_grad(gt, phi, params)?.grad_phi;

    let beta = params.smoothing.beta();
    let edge_margin = (10.0 * step).min(0.5 * beta);
    let mut candidates: Vec<(f64, usize)> = analytic
        .data()
        .iter()
        .enumerate()
        .filter(|(idx, _)| {
            let v = phi.data()[*idx];
            v.abs() < beta - edge_margin
        })
        .map(|(idx, g)| (g.abs(), idx))
        .collect();
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0));
    candidates.truncate(probes);
    if candidates.is_empty() {
        return Err(Error::InvalidInput(
            "no probe pixels inside the smoothing band".into(),
        ));
    }

    let width = phi.width();
    let mut worst = 0.0f64;
    let mut bumped = phi.clone();
    for &(_, idx) in &candidates {
        let (r, c) = (idx / width, idx % width);
        let base = phi.get(r, c);

        bumped.set(r, c, base + step);
        let plus = elastic_loss(gt, &bumped, params)?;
        bumped.set(r, c, base - step);
        let minus = elastic_loss(gt, &bumped, params)?;
        bumped.set(r, c, base);

        let fd = (plus - minus) / (2.0 * step);
        let a = analytic.get(r, c);
        let rel = (a - fd).abs() / a.abs().max(fd.abs()).max(1e-12);
        worst = worst.max(rel);
    }
    Ok(worst)
}
