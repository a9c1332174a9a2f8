use std::fs;
use std::path::Path;

use eil_core::evolve::{evolve, threshold_levelset};
use eil_core::field::{binary_mask_to_field, heaviside_smooth};
use eil_core::{ElasticParams, EvolveConfig};

use crate::error::{CliError, CliResult};
use crate::io::{
    image_from_mask, image_from_unit_field, levelset_from_image, load_gray, mask_from_image,
    save_gray,
};
use crate::report::Report;
use crate::EvolveArgs;

fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let tmp = path.with_extension("csv.tmp");
    fs::write(&tmp, contents).map_err(|e| CliError::input(format!("{}: {e}", tmp.display())))?;
    fs::rename(&tmp, path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

pub fn run(args: EvolveArgs) -> CliResult<i32> {
    let mut report = Report::new("evolve");

    let gt_image = load_gray(&args.gt)?;
    let init_image = load_gray(&args.init)?;
    let gt = binary_mask_to_field(&mask_from_image(&gt_image));
    let phi0 = levelset_from_image(&init_image)?;

    let smoothing = args.smoothing.params(args.beta)?;
    let params = ElasticParams::new(args.alpha, smoothing)?;
    let cfg = EvolveConfig::new(
        args.steps as usize,
        args.lr,
        params,
        args.snapshot_every as usize,
        args.stop_rel_tol,
        args.clamp_phi,
    )?;

    let trace = evolve(&gt, &phi0, &cfg)?;

    fs::create_dir_all(&args.out)
        .map_err(|e| CliError::input(format!("{}: {e}", args.out.display())))?;

    let csv_path = args.out.join("loss.csv");
    let mut csv = String::from("step,loss,f1,components\n");
    for (step, ((loss, f1), components)) in trace
        .losses
        .iter()
        .zip(&trace.step_f1)
        .zip(&trace.step_components)
        .enumerate()
    {
        csv.push_str(&format!("{step},{loss},{f1},{components}\n"));
    }
    write_atomic(&csv_path, &csv)?;

    for snapshot in &trace.snapshots {
        let h = heaviside_smooth(&snapshot.phi, &smoothing)?;
        let path = args.out.join(format!("snapshot_{:06}.pgm", snapshot.step));
        save_gray(&path, &image_from_unit_field(&h))?;
    }

    let final_phi = &trace
        .snapshots
        .last()
        .expect("final step is always snapshotted")
        .phi;
    let final_mask = threshold_levelset(final_phi, &smoothing)?;
    let mask_path = args.out.join("final_mask.pgm");
    save_gray(&mask_path, &image_from_mask(&final_mask, 0, 255))?;

    report.push("gt", args.gt.display());
    report.push("init", args.init.display());
    report.push("steps", args.steps);
    report.push("lr", args.lr);
    report.push("alpha", args.alpha);
    report.push("beta", args.beta);
    report.push("executed_steps", trace.executed_steps());
    report.push("stopped_at", trace.stopped_at);
    report.push("initial_loss", trace.losses[0]);
    report.push("final_loss", trace.final_loss());
    report.push("final_f1", trace.step_f1.last().unwrap());
    report.push("final_components", trace.step_components.last().unwrap());
    report.push("loss_csv", csv_path.display());
    report.push("final_mask", mask_path.display());
    report.push("snapshots", trace.snapshots.len());
    report.print();
    Ok(0)
}
