use std::time::Instant;

use eil_core::energy::{direct_spectral_oracle, elastic_loss, SPECTRAL_ORACLE_LIMIT};
use eil_core::ElasticParams;

use crate::commands::gradcheck::random_instance;
use crate::error::{CliError, CliResult};
use crate::BenchArgs;

fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(f64::total_cmp);
    samples[samples.len() / 2]
}

pub fn run(args: BenchArgs) -> CliResult<i32> {
    if args.sizes.is_empty() {
        return Err(CliError::input("need at least one size"));
    }
    if args.sizes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::input(format!(
            "sizes must be strictly ascending, got {:?}",
            args.sizes
        )));
    }
    if args.sizes[0] < 2 {
        return Err(CliError::input("sizes must be at least 2"));
    }

    let params = ElasticParams::default();
    println!("size,fft_ms,direct_ms,ratio");
    for &size in &args.sizes {
        let (gt, phi) = random_instance(size, args.seed ^ size as u64);

        // Warm-up evaluation so FFT planning is excluded from the timings.
        elastic_loss(&gt, &phi, &params)?;
        let mut fft_samples: Vec<f64> = (0..args.repeats)
            .map(|_| {
                let t = Instant::now();
                std::hint::black_box(elastic_loss(&gt, &phi, &params)).map(|_| ())?;
                Ok(t.elapsed().as_secs_f64() * 1e3)
            })
            .collect::<CliResult<_>>()?;
        let fft_ms = median(&mut fft_samples);

        if size <= SPECTRAL_ORACLE_LIMIT {
            let mut direct_samples: Vec<f64> = (0..args.repeats)
                .map(|_| {
                    let t = Instant::now();
                    std::hint::black_box(direct_spectral_oracle(&gt, &phi, &params)).map(|_| ())?;
                    Ok(t.elapsed().as_secs_f64() * 1e3)
                })
                .collect::<CliResult<_>>()?;
            let direct_ms = median(&mut direct_samples);
            println!(
                "{size},{fft_ms:.6},{direct_ms:.6},{:.6}",
                direct_ms / fft_ms
            );
        } else {
            println!("{size},{fft_ms:.6},,");
        }
    }
    Ok(0)
}
