use eil_core::metrics::compute_metrics;

use crate::error::CliResult;
use crate::io::{load_gray, mask_from_image, prob_from_image};
use crate::report::Report;
use crate::MetricsArgs;

pub fn run(args: MetricsArgs) -> CliResult<i32> {
    let mut report = Report::new("metrics");

    let gt = mask_from_image(&load_gray(&args.gt)?);
    let score = prob_from_image(&load_gray(&args.pred)?);
    let m = compute_metrics(&gt, &score, args.threshold)?;

    report.push("gt", args.gt.display());
    report.push("pred", args.pred.display());
    report.push("threshold", args.threshold);
    report.push("sensitivity", m.sensitivity);
    report.push("specificity", m.specificity);
    report.push("f1", m.f1);
    report.push("auc", m.auc);
    report.push("tp", m.true_pos);
    report.push("fp", m.false_pos);
    report.push("tn", m.true_neg);
    report.push("fn", m.false_neg);
    report.print();
    Ok(0)
}
