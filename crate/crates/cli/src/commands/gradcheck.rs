use eil_core::energy::finite_difference_check;
use eil_core::{ElasticParams, Error, ScalarField2D};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, CliResult};
use crate::report::Report;
use crate::GradcheckArgs;

/// Largest grid accepted; finite differences re-run the forward pass per
/// probe pixel, so cost grows fast.
const SIZE_LIMIT: usize = 64;

/// Gradients at or above this relative error fail the check.
const PASS_THRESHOLD: f64 = 1e-3;

const PROBES: usize = 20;

/// Deterministic random instance: fair-coin ground truth, level set uniform
/// inside (-0.45, 0.45) so plenty of pixels sit in the default band.
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

pub fn run(args: GradcheckArgs) -> CliResult<i32> {
    if args.size > SIZE_LIMIT {
        return Err(CliError::from(Error::SizeLimit {
            height: args.size,
            width: args.size,
            limit: SIZE_LIMIT,
        }));
    }
    let mut report = Report::new("gradcheck");

    let (gt, phi) = random_instance(args.size, args.seed);
    let params = ElasticParams::new(args.alpha, args.smoothing.params(args.beta)?)?;
    let worst = finite_difference_check(&gt, &phi, &params, args.eps, PROBES)?;
    let pass = worst < PASS_THRESHOLD;

    report.push("size", args.size);
    report.push("seed", args.seed);
    report.push("eps", args.eps);
    report.push("probes", PROBES);
    report.push("max_rel_error", worst);
    report.push("threshold", PASS_THRESHOLD);
    report.push("pass", pass);
    report.print();

    Ok(if pass { 0 } else { 1 })
}
