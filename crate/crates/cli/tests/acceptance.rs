//! Acceptance gate for the elastic-interaction loss engine.
//!
//! One test per shipped guarantee, each with its tolerance and (where the
//! guarantee includes one) wall-clock budget pinned in the assertions. The
//! harness emits one pass/fail line per criterion.

use std::process::Command;
use std::time::{Duration, Instant};

use eil_core::curve::{curve_energy, curve_force, pair_decompose};
use eil_core::energy::{
    cross_energy, direct_spectral_oracle, elastic_loss, elastic_loss_and_grad,
    finite_difference_check, halfnorm_energy,
};
use eil_core::evolve::{evolve, reconnection_experiment, soft_levelset, threshold_levelset};
use eil_core::field::binary_mask_to_field;
use eil_core::metrics::compute_metrics;
use eil_core::synth::{make_disk, make_vessel, punch_gap};
use eil_core::{
    BinaryMask, CurveEnergyParams, ElasticParams, EvolveConfig, OrientedPolyline, ScalarField2D,
    SmoothingParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Step size at which all synthetic experiments descend monotonically.
const STABLE_RATE: f64 = 2.5e-3;

fn default_params() -> ElasticParams {
    ElasticParams::default()
}

fn unit_alpha() -> ElasticParams {
    ElasticParams::new(1.0, SmoothingParams::default()).unwrap()
}

fn random_instance(size: usize, seed: u64) -> (ScalarField2D, ScalarField2D) {
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

fn fit_slope(logs: &[(f64, f64)]) -> f64 {
    let n = logs.len() as f64;
    let sx: f64 = logs.iter().map(|(x, _)| x).sum();
    let sy: f64 = logs.iter().map(|(_, y)| y).sum();
    let sxx: f64 = logs.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = logs.iter().map(|(x, y)| x * y).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

fn assert_non_increasing(losses: &[f64], label: &str) {
    for (k, pair) in losses.windows(2).enumerate() {
        assert!(
            pair[1] <= pair[0] + 1e-12,
            "{label}: loss rose at step {}: {} -> {}",
            k + 1,
            pair[0],
            pair[1]
        );
    }
}

fn centroid(mask: &BinaryMask) -> (f64, f64) {
    let mut sum_r = 0.0;
    let mut sum_c = 0.0;
    let mut n = 0.0;
    for r in 0..mask.height() {
        for c in 0..mask.width() {
            if mask.get(r, c) {
                sum_r += r as f64;
                sum_c += c as f64;
                n += 1.0;
            }
        }
    }
    assert!(n > 0.0, "empty mask has no centroid");
    (sum_r / n, sum_c / n)
}

fn displaced_disk_setup() -> (ScalarField2D, ScalarField2D) {
    let gt = binary_mask_to_field(&make_disk(128, (64.0, 64.0), 20.0).unwrap());
    let pred = make_disk(128, (64.0, 94.0), 20.0).unwrap();
    let phi0 = soft_levelset(&pred, &SmoothingParams::default(), 0.8).unwrap();
    (gt, phi0)
}

fn gap_bar_setup() -> (ScalarField2D, ScalarField2D) {
    let bar = make_vessel(128, 0.0, 128.0, 3.0).unwrap();
    let gapped = punch_gap(&bar, 61..67);
    let gt = binary_mask_to_field(&bar);
    let phi0 = soft_levelset(&gapped, &SmoothingParams::default(), 0.8).unwrap();
    (gt, phi0)
}

fn shrink_setup() -> (ScalarField2D, ScalarField2D) {
    let gt = ScalarField2D::zeros(128, 128);
    let mask = make_disk(128, (64.0, 64.0), 20.0).unwrap();
    let phi0 = soft_levelset(&mask, &SmoothingParams::default(), 0.8).unwrap();
    (gt, phi0)
}

fn disk_energy_512(r: f64) -> f64 {
    let mask = make_disk(512, (256.0, 256.0), r).unwrap();
    halfnorm_energy(&binary_mask_to_field(&mask)).unwrap()
}

// Criterion 1: the analytic gradient matches central finite differences on
// random 16x16 and 32x32 instances at the default alpha=0.35, beta=0.25,
// max relative error < 1e-4, within 5 s.
#[test]
fn a01_gradient_matches_finite_differences() {
    let clock = Instant::now();
    let params = default_params();
    for (size, seed) in [(16usize, 7u64), (16, 8), (32, 5), (32, 6)] {
        let (gt, phi) = random_instance(size, seed);
        let worst = finite_difference_check(&gt, &phi, &params, 1e-5, 20).unwrap();
        assert!(
            worst < 1e-4,
            "size {size} seed {seed}: relative error {worst}"
        );
    }
    assert!(
        clock.elapsed() < Duration::from_secs(5),
        "{:?}",
        clock.elapsed()
    );
}

// Criterion 2: the FFT loss equals the direct O(N^4) spectral sum on 10
// random 32x32 instances to relative error < 1e-9, within 10 s.
#[test]
fn a02_fft_loss_equals_direct_spectral_sum() {
    let clock = Instant::now();
    let params = default_params();
    for seed in 0..10u64 {
        let (gt, phi) = random_instance(32, seed);
        let fast = elastic_loss(&gt, &phi, &params).unwrap();
        let slow = direct_spectral_oracle(&gt, &phi, &params).unwrap();
        let rel = (fast - slow).abs() / slow.abs().max(1e-300);
        assert!(rel < 1e-9, "seed {seed}: relative error {rel}");
    }
    assert!(
        clock.elapsed() < Duration::from_secs(10),
        "{:?}",
        clock.elapsed()
    );
}

// Criterion 3: with alpha=1 and a prediction whose indicator reproduces the
// ground truth exactly, the loss vanishes to machine precision.
#[test]
fn a03_perfect_prediction_annihilates_grid_energy() {
    let mask = make_disk(64, (32.0, 32.0), 12.0).unwrap();
    let gt = binary_mask_to_field(&mask);
    let phi = binary_mask_to_field(&mask).map(|v| v - 0.5);
    let loss = elastic_loss(&gt, &phi, &unit_alpha()).unwrap();
    assert_eq!(loss, 0.0, "coincident opposite boundaries must cancel");

    let absent = ScalarField2D::constant(64, 64, -0.5);
    let control = elastic_loss(&gt, &absent, &unit_alpha()).unwrap();
    assert!(control > 1.0, "control without a prediction: {control}");
}

// Criterion 4: coincident opposite-orientation squares at epsilon=0.05 have
// total curve energy below 1e-3 of one square's self-energy.
#[test]
fn a04_coincident_opposite_curves_annihilate() {
    let params = CurveEnergyParams::new(0.05, 16).unwrap();
    let sq = OrientedPolyline::rectangle([0.0, 0.0], [10.0, 10.0], 1).unwrap();
    let self_energy = curve_energy(std::slice::from_ref(&sq), &params).unwrap();
    let total = curve_energy(&[sq.clone(), sq.opposite()], &params).unwrap();
    assert!(self_energy > 1.0, "self-energy {self_energy}");
    assert!(
        total.abs() < 1e-3 * self_energy,
        "total {total} vs self {self_energy}"
    );
}

// Criterion 5: self1 + self2 + interaction reassembles the joint energy of
// random curve pairs to absolute error < 1e-9.
#[test]
fn a05_pair_energy_decomposition_is_exact() {
    let params = CurveEnergyParams::new(0.05, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for case in 0..6 {
        let orient = |b: bool| if b { 1i8 } else { -1 };
        let a = OrientedPolyline::circle(
            [rng.random_range(-20.0..20.0), rng.random_range(-20.0..20.0)],
            rng.random_range(2.0..10.0),
            rng.random_range(24..64),
            orient(rng.random_bool(0.5)),
        )
        .unwrap();
        let b = OrientedPolyline::circle(
            [rng.random_range(-20.0..20.0), rng.random_range(-20.0..20.0)],
            rng.random_range(2.0..10.0),
            rng.random_range(24..64),
            orient(rng.random_bool(0.5)),
        )
        .unwrap();
        let joint = curve_energy(&[a.clone(), b.clone()], &params).unwrap();
        let (self1, self2, interaction) = pair_decompose(&a, &b, &params).unwrap();
        let residual = (self1 + self2 + interaction - joint).abs();
        assert!(residual < 1e-9, "case {case}: residual {residual}");
    }
}

// Criterion 6: the force between straight edges decays like 1/r over a
// decade of separations, fit exponent in [-1.2, -0.8] for the curve oracle
// and [-1.3, -0.7] for the grid cross-term, within 60 s.
#[test]
fn a06_straight_edge_attraction_decays_like_inverse_distance() {
    let clock = Instant::now();

    let side = 2048.0;
    let sq = OrientedPolyline::rectangle([0.0, 0.0], [side, side], 1).unwrap();
    let params = CurveEnergyParams::new(0.05, 2048).unwrap();
    let mut logs = Vec::new();
    for d in [4.0f64, 8.0, 16.0, 32.0, 40.0] {
        let f = curve_force(
            std::slice::from_ref(&sq),
            [side / 2.0, d],
            [0.0, 1.0],
            &params,
        )
        .unwrap();
        logs.push((d.ln(), f.abs().ln()));
    }
    let curve_slope = fit_slope(&logs);
    assert!(
        (-1.2..=-0.8).contains(&curve_slope),
        "curve attraction exponent {curve_slope}"
    );

    let size = 512usize;
    let strip = |start: usize| {
        ScalarField2D::from_fn(size, size, |r, _| {
            if (r + size - start) % size < 256 {
                1.0
            } else {
                0.0
            }
        })
    };
    let base = strip(0);
    let force = |d: usize| {
        let plus = cross_energy(&base, &strip(d + 1)).unwrap();
        let minus = cross_energy(&base, &strip(d - 1)).unwrap();
        ((plus - minus) / 2.0 / size as f64).abs()
    };
    let logs: Vec<(f64, f64)> = [8usize, 16, 32, 64]
        .iter()
        .map(|&d| ((d as f64).ln(), force(d).ln()))
        .collect();
    let grid_slope = fit_slope(&logs);
    assert!(
        (-1.3..=-0.7).contains(&grid_slope),
        "grid attraction exponent {grid_slope}"
    );

    assert!(
        clock.elapsed() < Duration::from_secs(60),
        "{:?}",
        clock.elapsed()
    );
}

// Criterion 7: a bar with a 6-pixel gap on a 128x128 grid reconnects into a
// single component with F1 > 0.9 within 500 steps, within 60 s.
#[test]
fn a07_gap_reconnects_within_budget() {
    let clock = Instant::now();
    let cfg = EvolveConfig::new(500, STABLE_RATE, unit_alpha(), 100, 0.0, 1.0).unwrap();
    let outcome = reconnection_experiment(128, 6, &cfg).unwrap();
    assert_eq!(outcome.initial_components, 2);
    assert_eq!(outcome.final_components, 1);
    assert!(outcome.final_f1 > 0.9, "final F1 {}", outcome.final_f1);
    assert!(
        clock.elapsed() < Duration::from_secs(60),
        "{:?}",
        clock.elapsed()
    );
}

// Criterion 8: a disk initialized 30 px off target moves straight onto it;
// centroid distance to the target decreases monotonically over the first 50
// steps.
#[test]
fn a08_displaced_disk_centroid_approaches_target_monotonically() {
    let (gt, phi0) = displaced_disk_setup();
    let cfg = EvolveConfig::new(50, STABLE_RATE, unit_alpha(), 1, 0.0, 1.0).unwrap();
    let trace = evolve(&gt, &phi0, &cfg).unwrap();

    let distances: Vec<f64> = trace
        .snapshots
        .iter()
        .map(|s| {
            let mask = threshold_levelset(&s.phi, &SmoothingParams::default()).unwrap();
            let (r, c) = centroid(&mask);
            ((r - 64.0).powi(2) + (c - 64.0).powi(2)).sqrt()
        })
        .collect();
    assert_eq!(distances.len(), 51);
    assert!(distances[0] > 29.0, "initial offset {}", distances[0]);
    for (k, pair) in distances.windows(2).enumerate() {
        assert!(
            pair[1] <= pair[0] + 1e-9,
            "centroid distance rose at step {}: {} -> {}",
            k + 1,
            pair[0],
            pair[1]
        );
    }
    assert!(*distances.last().unwrap() < distances[0]);
}

// Criterion 9: at the suite step size the loss never increases, for every
// synthetic experiment and every step.
#[test]
fn a09_descent_is_monotone_for_all_experiments() {
    let runs: [(&str, (ScalarField2D, ScalarField2D), usize); 3] = [
        ("displaced disk", displaced_disk_setup(), 50),
        ("gapped bar", gap_bar_setup(), 500),
        ("unsupported disk", shrink_setup(), 300),
    ];
    for (label, (gt, phi0), steps) in runs {
        let cfg = EvolveConfig::new(steps, STABLE_RATE, unit_alpha(), steps, 0.0, 1.0).unwrap();
        let trace = evolve(&gt, &phi0, &cfg).unwrap();
        assert_eq!(trace.losses.len(), steps + 1, "{label}");
        assert_non_increasing(&trace.losses, label);
    }
}

// Criterion 10: disk self-energy scales like the perimeter; doubling the
// radius from 64 to 128 on a 512x512 grid scales it by 2 +/- 10%.
#[test]
fn a10_disk_self_energy_scales_with_perimeter() {
    let ratio = disk_energy_512(128.0) / disk_energy_512(64.0);
    assert!(
        (1.8..=2.2).contains(&ratio),
        "self-energy ratio {ratio} for doubled radius"
    );
}

// Criterion 11: the benchmark shows the direct/FFT time ratio growing from
// size 32 to 64, and a full 512x512 loss+gradient evaluation takes < 250 ms.
#[test]
fn a11_fft_path_beats_direct_summation_and_meets_budget() {
    let out = Command::new(env!("CARGO_BIN_EXE_eil"))
        .args(["bench", "--sizes", "16,32,64", "--repeats", "3"])
        .output()
        .expect("spawn eil bench");
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = stdout
        .lines()
        .skip_while(|l| *l != "size,fft_ms,direct_ms,ratio")
        .skip(1)
        .collect();
    assert_eq!(rows.len(), 3, "{stdout}");
    let ratio_of = |row: &str| row.split(',').nth(3).unwrap().parse::<f64>().unwrap();
    let (r32, r64) = (ratio_of(rows[1]), ratio_of(rows[2]));
    assert!(r64 > r32, "direct/fft ratio fell: {r32} -> {r64}");

    let (gt, phi) = random_instance(512, 17);
    let params = default_params();
    elastic_loss_and_grad(&gt, &phi, &params).unwrap();
    let mut best = Duration::MAX;
    for _ in 0..5 {
        let clock = Instant::now();
        std::hint::black_box(elastic_loss_and_grad(&gt, &phi, &params).unwrap());
        best = best.min(clock.elapsed());
    }
    assert!(
        best < Duration::from_millis(250),
        "512x512 loss+grad took {best:?}"
    );
}

// Criterion 12: metric fixtures. A perfect prediction scores 1 everywhere, a
// constant score has AUC 1/2, and the quarter-overlap fixture has F1 = 2/3
// exactly.
#[test]
fn a12_metric_fixtures_score_as_expected() {
    let disk = make_disk(32, (16.0, 16.0), 8.0).unwrap();
    let perfect = compute_metrics(&disk, &binary_mask_to_field(&disk), 0.5).unwrap();
    assert_eq!(perfect.sensitivity, 1.0);
    assert_eq!(perfect.specificity, 1.0);
    assert_eq!(perfect.f1, 1.0);
    assert_eq!(perfect.auc, 1.0);

    let flat = compute_metrics(&disk, &ScalarField2D::constant(32, 32, 0.5), 0.5).unwrap();
    assert_eq!(
        flat.auc, 0.5,
        "uninformative score must sit on the diagonal"
    );

    let half = BinaryMask::from_fn(32, 32, |_, c| c < 16);
    let quarter = ScalarField2D::from_fn(32, 32, |_, c| if c < 8 { 1.0 } else { 0.0 });
    let overlap = compute_metrics(&half, &quarter, 0.5).unwrap();
    assert_eq!(overlap.f1, 2.0 / 3.0);
}
