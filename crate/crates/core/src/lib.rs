//! Elastic-interaction energy between region boundaries on 2-D grids.
//!
//! The prediction is a level-set field phi whose smoothed indicator H(phi)
//! is compared against a binary ground truth through the combined field
//! f = gt - alpha*H(phi). The loss is the spectral half-norm
//! sum sqrt(m^2+n^2)*|f_hat|^2, which equals the elastic interaction energy
//! of the two region boundaries carried with opposite orientations: a
//! perfect prediction annihilates the field and the loss vanishes, and
//! mismatched boundaries attract each other across long ranges.
//!
//! Module map:
//! - [`field`]: scalar grids, level sets and smoothed Heaviside ramps
//! - [`spectral`]: unitary 2-D DFT, frequency grids, half-norm weights
//! - [`energy`]: forward loss, analytic gradient, slow reference oracles
//! - [`curve`]: polygonal line-integral oracle for the same energy
//! - [`evolve`]: gradient-flow dynamics on the level set
//! - [`synth`]: synthetic masks (disks, vessels, gaps)
//! - [`metrics`]: confusion counts, F1 and ROC AUC

pub mod curve;
pub mod energy;
pub mod error;
pub mod evolve;
pub mod field;
pub mod metrics;
pub mod spectral;
pub mod synth;

pub use curve::{CurveEnergyParams, OrientedPolyline};
pub use energy::{ElasticParams, LossAndGrad};
pub use error::{Error, Result};
pub use evolve::{EvolutionTrace, EvolveConfig, ReconnectionOutcome, Snapshot};
pub use field::{ScalarField2D, SmoothingKind, SmoothingParams};
pub use metrics::ConfusionMetrics;
pub use spectral::{FrequencyGrid, SpectralField2D};
pub use synth::BinaryMask;
