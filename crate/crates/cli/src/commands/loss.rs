use eil_core::energy::{direct_spectral_oracle, elastic_loss, spatial_kernel_oracle};
use eil_core::field::binary_mask_to_field;
use eil_core::ElasticParams;

use crate::error::CliResult;
use crate::io::{levelset_from_image, load_gray, mask_from_image};
use crate::report::Report;
use crate::{LossArgs, Oracle};

/// Spatial-oracle kernel regularization, in pixels.
const SPATIAL_EPS: f64 = 1.0;

pub fn run(args: LossArgs) -> CliResult<i32> {
    let mut report = Report::new("loss");

    let gt_image = load_gray(&args.gt)?;
    let pred_image = load_gray(&args.pred)?;
    let gt = binary_mask_to_field(&mask_from_image(&gt_image));
    let phi = levelset_from_image(&pred_image)?;
    let params = ElasticParams::new(args.alpha, args.smoothing.params(args.beta)?)?;

    let loss = elastic_loss(&gt, &phi, &params)?;

    report.push("gt", args.gt.display());
    report.push("pred", args.pred.display());
    report.push("alpha", args.alpha);
    report.push("beta", args.beta);
    report.push("loss", loss);

    if let Some(oracle) = args.oracle {
        let (name, value) = match oracle {
            Oracle::Spectral => ("spectral", direct_spectral_oracle(&gt, &phi, &params)?),
            Oracle::Spatial => (
                "spatial",
                spatial_kernel_oracle(&gt, &phi, &params, SPATIAL_EPS)?,
            ),
        };
        report.push("oracle", name);
        report.push("oracle_value", value);
        report.push(
            "oracle_rel_diff",
            (loss - value).abs() / value.abs().max(1e-300),
        );
    }

    report.print();
    Ok(0)
}
