//! Shared test support: the brute-force NM x NM composite-matrix oracle for
//! LMMSE quantities, plus deterministic fixture generators. The oracle
//! evaluates the stacked-measurement formulas directly and never goes
//! through the compact inversion-lemma code paths it is used to check.

#![allow(dead_code)]

use ffkit::estimation::ErasurePattern;
use ffkit::frames::FusionFrame;
use ffkit::matcore::{solve_spd, Matrix, Tolerances};

/// Stacked projection matrix P = (P_1; P_2; ...; P_N), NM x M.
pub fn stacked_projection(frame: &FusionFrame) -> Matrix {
    let m = frame.ambient_dim();
    let n = frame.len();
    let mut p = Matrix::zeros(n * m, m);
    for (i, s) in frame.subspaces().iter().enumerate() {
        let pi = s.projection();
        for r in 0..m {
            for c in 0..m {
                p.set(i * m + r, c, pi.get(r, c));
            }
        }
    }
    p
}

/// Composite measurement covariance R_zz = P R_xx P^T + sigma_n^2 I.
pub fn composite_rzz(frame: &FusionFrame, rxx: &Matrix, sigma_n2: f64) -> Matrix {
    let p = stacked_projection(frame);
    let nm = p.rows();
    p.matmul(rxx)
        .matmul(&p.transpose())
        .add(&Matrix::identity(nm).scale(sigma_n2))
        .symmetrized()
}

/// Error covariance via the full composite route:
/// R_ee = R_xx - R_xz R_zz^{-1} R_zx.
pub fn composite_error_covariance(
    frame: &FusionFrame,
    rxx: &Matrix,
    sigma_n2: f64,
    tol: &Tolerances,
) -> Matrix {
    let p = stacked_projection(frame);
    let rzz = composite_rzz(frame, rxx, sigma_n2);
    let rxz = rxx.matmul(&p.transpose());
    let solved = solve_spd(&rzz, &rxz.transpose(), tol).expect("R_zz is SPD");
    rxx.sub(&rxz.matmul(&solved)).symmetrized()
}

/// The explicit Wiener filter applied to the stacked measurement vector with
/// erased blocks zeroed: x_hat = R_xz R_zz^{-1} (I - E) z.
pub fn composite_wiener_estimate(
    frame: &FusionFrame,
    rxx: &Matrix,
    sigma_n2: f64,
    measurements: &[Vec<f64>],
    erasures: &ErasurePattern,
    tol: &Tolerances,
) -> Vec<f64> {
    let m = frame.ambient_dim();
    let n = frame.len();
    let mut z = Matrix::zeros(n * m, 1);
    for (i, zi) in measurements.iter().enumerate() {
        if erasures.contains(i) {
            continue;
        }
        for (r, &v) in zi.iter().enumerate() {
            z.set(i * m + r, 0, v);
        }
    }
    let rzz = composite_rzz(frame, rxx, sigma_n2);
    let p = stacked_projection(frame);
    let rxz = rxx.matmul(&p.transpose());
    let w = solve_spd(&rzz, &z, tol).expect("R_zz is SPD");
    let xhat = rxz.matmul(&w);
    (0..m).map(|i| xhat.get(i, 0)).collect()
}

/// Extra error covariance due to erasures via the composite route:
/// R_xz R_zz^{-1} E R_zz E R_zz^{-1} R_zx, traced.
pub fn composite_extra_mse(
    frame: &FusionFrame,
    rxx: &Matrix,
    sigma_n2: f64,
    erasures: &ErasurePattern,
    tol: &Tolerances,
) -> f64 {
    let m = frame.ambient_dim();
    let n = frame.len();
    let rzz = composite_rzz(frame, rxx, sigma_n2);
    let p = stacked_projection(frame);
    let rxz = rxx.matmul(&p.transpose());
    // G = R_zz^{-1} R_zx, NM x M
    let g = solve_spd(&rzz, &rxz.transpose(), tol).expect("R_zz is SPD");
    // apply E: keep only erased block rows
    let mut eg = Matrix::zeros(n * m, m);
    for &i in erasures.indices() {
        for r in 0..m {
            for c in 0..m {
                eg.set(i * m + r, c, g.get(i * m + r, c));
            }
        }
    }
    // trace of (E G)^T R_zz (E G)
    let inner = eg.transpose().matmul(&rzz).matmul(&eg);
    inner.trace()
}

/// Deterministic integer stream for fixture parameters.
pub struct ParamStream {
    state: u64,
}

impl ParamStream {
    pub fn new(seed: u64) -> ParamStream {
        ParamStream { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform integer in [lo, hi].
    pub fn pick(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.next_u64() % (hi - lo + 1) as u64) as usize
    }
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Subsets of the given size whose pairwise distances are all equal to 1e-9,
/// so the constant-distance erasure closed form applies. Returns up to three.
pub fn uniform_subsets(
    table: &ffkit::frames::DistanceTable,
    n: usize,
    size: usize,
) -> Vec<Vec<usize>> {
    let mut found: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if found.len() >= 3 {
            break;
        }
        for second in (start + 1)..n {
            let target = table.get(start, second);
            let mut subset = vec![start, second];
            for cand in (second + 1)..n {
                if subset.len() == size {
                    break;
                }
                if subset
                    .iter()
                    .all(|&i| (table.get(i, cand) - target).abs() <= 1e-9)
                {
                    subset.push(cand);
                }
            }
            if subset.len() == size {
                found.push(subset);
                break;
            }
        }
    }
    found
}
