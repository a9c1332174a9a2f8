//! Shared instance builders for the benchmark targets.

use eil_core::ScalarField2D;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic random loss instance: fair-coin mask and a level set drawn
/// uniformly inside the default smoothing band.
pub fn random_instance(size: usize, seed: u64) -> (ScalarField2D, ScalarField2D) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gt = ScalarField2D::from_fn(
        size,
        size,
        |_, _| {
            if rng.random_bool(0.5) {
                1.0
            } else {
                0.0
            }
        },
    );
    let phi = ScalarField2D::from_fn(size, size, |_, _| rng.random_range(-0.45..0.45));
    (gt, phi)
}
