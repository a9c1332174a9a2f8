use eil_core::synth::{make_disk, make_vessel, punch_gap};

use crate::error::{CliError, CliResult};
use crate::io::{image_from_mask, save_gray};
use crate::report::Report;
use crate::{Shape, SynthArgs};

pub fn run(args: SynthArgs) -> CliResult<i32> {
    let mut report = Report::new("synth");

    if args.low >= args.high {
        return Err(CliError::input(format!(
            "background intensity {} must be below foreground {}",
            args.low, args.high
        )));
    }

    let (shape_name, mask) = match args.shape {
        Shape::Disk => {
            let center = (
                args.center_row.unwrap_or(args.size as f64 / 2.0),
                args.center_col.unwrap_or(args.size as f64 / 2.0),
            );
            ("disk", make_disk(args.size, center, args.radius)?)
        }
        Shape::Vessel => (
            "vessel",
            make_vessel(args.size, args.amplitude, args.period, args.width)?,
        ),
        Shape::VesselGap => {
            let vessel = make_vessel(args.size, args.amplitude, args.period, args.width)?;
            if args.gap == 0 || args.gap >= args.size {
                return Err(CliError::input(format!(
                    "gap of {} columns does not fit a grid of size {}",
                    args.gap, args.size
                )));
            }
            let start = (args.size - args.gap) / 2;
            ("vessel-gap", punch_gap(&vessel, start..start + args.gap))
        }
    };

    save_gray(&args.out, &image_from_mask(&mask, args.low, args.high))?;

    report.push("shape", shape_name);
    report.push("size", args.size);
    report.push("low", args.low);
    report.push("high", args.high);
    report.push("foreground", mask.count_ones());
    report.push("out", args.out.display());
    report.print();
    Ok(0)
}
