//! Monte Carlo consistency: for each structured construction and erasure
//! count, the empirical MSE must sit within three standard errors of the
//! analytic value at 1e5 trials, with a single doubled-trials retry as the
//! flaky budget. Plus worker-count invariance of the exact result bits.

mod common;

use ffkit::constructions::{e8_frame, eisenstein_e6_frame, quadratic_residue_frame, QrParams};
use ffkit::estimation::{ErasurePattern, NoiseModel, SignalModel};
use ffkit::frames::FusionFrame;
use ffkit::matcore::Tolerances;
use ffkit::simulation::{run_monte_carlo, SimConfig, SimResult};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn run(frame: &FusionFrame, erased: &[usize], trials: u64, seed: u64, threads: usize) -> SimResult {
    let signal = SignalModel::white(frame.ambient_dim(), 1.0).unwrap();
    let noise = NoiseModel::new(1.0).unwrap();
    let pattern = ErasurePattern::new(erased, frame.len()).unwrap();
    run_monte_carlo(&SimConfig {
        frame,
        signal: &signal,
        noise: &noise,
        erasures: &pattern,
        trials,
        seed,
        threads,
    })
    .unwrap()
}

/// |empirical - analytic| <= 3 stderr, rerunning once with doubled trials
/// before declaring failure.
fn assert_consistent(name: &str, frame: &FusionFrame, erased: &[usize], seed: u64) {
    let r = run(frame, erased, 100_000, seed, 4);
    let z = (r.empirical_mse - r.analytic_mse).abs() / r.stderr;
    if z <= 3.0 {
        return;
    }
    let r2 = run(frame, erased, 200_000, seed.wrapping_add(1), 4);
    let z2 = (r2.empirical_mse - r2.analytic_mse).abs() / r2.stderr;
    assert!(
        z2 <= 3.0,
        "{name} erased={erased:?}: z={z:.2} then z={z2:.2} on retry \
         (empirical {} vs analytic {})",
        r2.empirical_mse,
        r2.analytic_mse
    );
}

#[test]
fn qr_p7_consistency_all_erasure_counts() {
    let frame = quadratic_residue_frame(&QrParams::new(7).unwrap(), &tol())
        .unwrap()
        .frame;
    for (seed, erased) in [
        (101u64, vec![]),
        (102, vec![0]),
        (103, vec![0, 13]),
        (104, vec![0, 13, 27]),
    ] {
        assert_consistent("qr-p7", &frame, &erased, seed);
    }
}

#[test]
fn e6_consistency_all_erasure_counts() {
    let frame = eisenstein_e6_frame(&tol()).unwrap().frame;
    for (seed, erased) in [
        (201u64, vec![]),
        (202, vec![3]),
        (203, vec![3, 7]),
        (204, vec![1, 4, 8]),
    ] {
        assert_consistent("e6", &frame, &erased, seed);
    }
}

#[test]
fn e8_consistency_all_erasure_counts() {
    let frame = e8_frame(&tol()).unwrap().frame;
    for (seed, erased) in [
        (301u64, vec![]),
        (302, vec![11]),
        (303, vec![11, 29]),
        (304, vec![2, 11, 29]),
    ] {
        assert_consistent("e8", &frame, &erased, seed);
    }
}

#[test]
fn worker_count_cannot_change_a_bit() {
    let frame = eisenstein_e6_frame(&tol()).unwrap().frame;
    let a = run(&frame, &[2], 30_000, 55, 1);
    let b = run(&frame, &[2], 30_000, 55, 2);
    let c = run(&frame, &[2], 30_000, 55, 8);
    assert_eq!(a.empirical_mse.to_bits(), b.empirical_mse.to_bits());
    assert_eq!(a.empirical_mse.to_bits(), c.empirical_mse.to_bits());
    assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
    assert_eq!(a.stderr.to_bits(), c.stderr.to_bits());
}
