//! Gradient-flow minimization of the elastic loss over a level-set field.
//!
//! Plain clamped gradient descent with no momentum, so the observed dynamics
//! (attraction, reconnection, shrinkage) come from the loss alone. Each step
//! records loss, F1 against the ground truth and the 8-connected component
//! count of the thresholded prediction.

use crate::energy::{elastic_loss_and_grad, ElasticParams};
use crate::error::{Error, Result};
use crate::field::{heaviside_smooth, ScalarField2D, SmoothingParams};
use crate::metrics::{compute_metrics, f1_score, ConfusionMetrics};
use crate::synth::{make_vessel, punch_gap, BinaryMask};

/// Descent schedule and snapshot cadence for [`evolve`].
#[derive(Debug, Clone, PartialEq)]
pub struct EvolveConfig {
    steps: usize,
    learning_rate: f64,
    params: ElasticParams,
    snapshot_every: usize,
    stop_rel_tol: f64,
    clamp_phi: f64,
}

impl EvolveConfig {
    pub fn new(
        steps: usize,
        learning_rate: f64,
        params: ElasticParams,
        snapshot_every: usize,
        stop_rel_tol: f64,
        clamp_phi: f64,
    ) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidInput("need at least one step".into()));
        }
        if !learning_rate.is_finite() || learning_rate <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "learning rate must be a positive real, got {learning_rate}"
            )));
        }
        if snapshot_every == 0 {
            return Err(Error::InvalidInput(
                "snapshot cadence must be at least 1".into(),
            ));
        }
        if !stop_rel_tol.is_finite() || stop_rel_tol < 0.0 {
            return Err(Error::InvalidInput(format!(
                "stopping tolerance must be non-negative, got {stop_rel_tol}"
            )));
        }
        if !clamp_phi.is_finite() || clamp_phi < params.smoothing().beta() {
            return Err(Error::InvalidInput(format!(
                "level-set clamp {clamp_phi} must cover the smoothing band {}",
                params.smoothing().beta()
            )));
        }
        Ok(Self {
            steps,
            learning_rate,
            params,
            snapshot_every,
            stop_rel_tol,
            clamp_phi,
        })
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn learning_rate(&self) -> f64 {
        self.learning_rate
    }

    pub fn params(&self) -> &ElasticParams {
        &self.params
    }

    pub fn snapshot_every(&self) -> usize {
        self.snapshot_every
    }

    pub fn stop_rel_tol(&self) -> f64 {
        self.stop_rel_tol
    }

    pub fn clamp_phi(&self) -> f64 {
        self.clamp_phi
    }
}

impl Default for EvolveConfig {
    /// 100 steps at the suite-stable rate 2.5e-3, snapshots every 10 steps,
    /// no early stopping, |phi| clamped to 1.
    fn default() -> Self {
        Self {
            steps: 100,
            learning_rate: 2.5e-3,
            params: ElasticParams::default(),
            snapshot_every: 10,
            stop_rel_tol: 0.0,
            clamp_phi: 1.0,
        }
    }
}

/// Level-set field captured mid-run, with metrics against the ground truth.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub step: usize,
    pub phi: ScalarField2D,
    pub metrics: ConfusionMetrics,
}

/// Everything recorded over one descent run. `losses`, `step_f1` and
/// `step_components` all have length executed-steps + 1, starting from the
/// initial state.
#[derive(Debug, Clone)]
pub struct EvolutionTrace {
    pub losses: Vec<f64>,
    pub step_f1: Vec<f64>,
    pub step_components: Vec<usize>,
    pub snapshots: Vec<Snapshot>,
    pub stopped_at: usize,
}

impl EvolutionTrace {
    pub fn executed_steps(&self) -> usize {
        self.losses.len() - 1
    }

    pub fn final_loss(&self) -> f64 {
        *self.losses.last().expect("trace holds the initial loss")
    }
}

/// Lift a binary mask into the smoothing band:
/// phi = (2*mask - 1) * beta * margin, with margin strictly inside (0, 1).
///
/// A raw binary level set (+-0.5 or further out) sits outside the band where
/// H' vanishes, so descent cannot move it; this keeps the indicator steep
/// (H = (1 +- margin)/2 under the linear ramp) while leaving every pixel
/// responsive to the gradient.
pub fn soft_levelset(
    mask: &BinaryMask,
    smoothing: &SmoothingParams,
    margin: f64,
) -> Result<ScalarField2D> {
    if !margin.is_finite() || margin <= 0.0 || margin >= 1.0 {
        return Err(Error::InvalidInput(format!(
            "band margin must lie strictly inside (0, 1), got {margin}"
        )));
    }
    let amp = smoothing.beta() * margin;
    Ok(ScalarField2D::from_fn(
        mask.height(),
        mask.width(),
        |r, c| {
            if mask.get(r, c) {
                amp
            } else {
                -amp
            }
        },
    ))
}

/// Binarize a level set at H(phi) > 0.5.
pub fn threshold_levelset(phi: &ScalarField2D, smoothing: &SmoothingParams) -> Result<BinaryMask> {
    let h = heaviside_smooth(phi, smoothing)?;
    Ok(BinaryMask::from_fn(phi.height(), phi.width(), |r, c| {
        h.get(r, c) > 0.5
    }))
}

/// Clamped steepest descent on phi under the elastic loss.
pub fn evolve(
    gt: &ScalarField2D,
    phi0: &ScalarField2D,
    cfg: &EvolveConfig,
) -> Result<EvolutionTrace> {
    let gt_mask = BinaryMask::from_binary_field(gt)?;
    let smoothing = *cfg.params.smoothing();

    let mut phi = phi0.clone();
    let mut current = elastic_loss_and_grad(gt, &phi, &cfg.params)?;

    let mut trace = EvolutionTrace {
        losses: Vec::with_capacity(cfg.steps + 1),
        step_f1: Vec::with_capacity(cfg.steps + 1),
        step_components: Vec::with_capacity(cfg.steps + 1),
        snapshots: Vec::new(),
        stopped_at: 0,
    };

    let record = |trace: &mut EvolutionTrace,
                  step: usize,
                  phi: &ScalarField2D,
                  loss: f64,
                  force_snapshot: bool|
     -> Result<()> {
        trace.losses.push(loss);
        let pred = threshold_levelset(phi, &smoothing)?;
        trace.step_f1.push(f1_score(&gt_mask, &pred)?);
        trace.step_components.push(connected_components(&pred));
        if step.is_multiple_of(cfg.snapshot_every) || force_snapshot {
            let h = heaviside_smooth(phi, &smoothing)?;
            trace.snapshots.push(Snapshot {
                step,
                phi: phi.clone(),
                metrics: compute_metrics(&gt_mask, &h, 0.5)?,
            });
        }
        Ok(())
    };

    record(&mut trace, 0, &phi, current.loss, false)?;

    for step in 1..=cfg.steps {
        for (p, g) in phi.data_mut().iter_mut().zip(current.grad_phi.data()) {
            *p = (*p - cfg.learning_rate * g).clamp(-cfg.clamp_phi, cfg.clamp_phi);
        }

        let next = elastic_loss_and_grad(gt, &phi, &cfg.params).map_err(|e| match e {
            Error::InvalidInput(detail) => Error::Divergence { step, detail },
            other => other,
        })?;
        if !next.loss.is_finite() {
            return Err(Error::Divergence {
                step,
                detail: format!("loss became {}", next.loss),
            });
        }

        let prev_loss = *trace.losses.last().expect("initial loss recorded");
        let is_last = step == cfg.steps
            || (cfg.stop_rel_tol > 0.0
                && (next.loss - prev_loss).abs() / prev_loss.max(1e-12) < cfg.stop_rel_tol);
        record(&mut trace, step, &phi, next.loss, is_last)?;
        trace.stopped_at = step;
        current = next;
        if is_last {
            break;
        }
    }

    Ok(trace)
}

/// Number of 8-connected foreground components.
pub fn connected_components(mask: &BinaryMask) -> usize {
    let (height, width) = mask.shape();
    let mut seen = vec![false; height * width];
    let mut stack = Vec::new();
    let mut count = 0;

    for start in 0..height * width {
        if seen[start] || mask.bits()[start] == 0 {
            continue;
        }
        count += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(idx) = stack.pop() {
            let (r, c) = (idx / width, idx % width);
            for dr in -1i64..=1 {
                for dc in -1i64..=1 {
                    if dr == 0 && dc == 0 {
                        continue;
                    }
                    let nr = r as i64 + dr;
                    let nc = c as i64 + dc;
                    if nr < 0 || nc < 0 || nr >= height as i64 || nc >= width as i64 {
                        continue;
                    }
                    let nidx = nr as usize * width + nc as usize;
                    if !seen[nidx] && mask.bits()[nidx] != 0 {
                        seen[nidx] = true;
                        stack.push(nidx);
                    }
                }
            }
        }
    }
    count
}

/// Outcome of [`reconnection_experiment`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconnectionOutcome {
    pub initial_components: usize,
    pub final_components: usize,
    pub final_f1: f64,
}

/// Evolve a 3-px horizontal bar whose initialization has a centered gap of
/// `gap_px` columns, and report whether the two halves reconnect.
///
/// The gapped mask is lifted into the smoothing band (see [`soft_levelset`])
/// so the descent can act on it.
pub fn reconnection_experiment(
    size: usize,
    gap_px: usize,
    cfg: &EvolveConfig,
) -> Result<ReconnectionOutcome> {
    if gap_px == 0 || gap_px >= size / 4 {
        return Err(Error::InvalidInput(format!(
            "gap of {gap_px} columns must be positive and under a quarter of the bar length {size}"
        )));
    }
    let bar = make_vessel(size, 0.0, size as f64, 3.0)?;
    let start = (size - gap_px) / 2;
    let gapped = punch_gap(&bar, start..start + gap_px);

    let gt = crate::field::binary_mask_to_field(&bar);
    let phi0 = soft_levelset(&gapped, cfg.params().smoothing(), 0.8)?;
    let trace = evolve(&gt, &phi0, cfg)?;

    Ok(ReconnectionOutcome {
        initial_components: trace.step_components[0],
        final_components: *trace
            .step_components
            .last()
            .expect("trace holds the initial state"),
        final_f1: *trace.step_f1.last().expect("trace holds the initial state"),
    })
}
