//! Seeded Monte Carlo harness for the measurement model z_i = P_i x + n_i.
//!
//! Each trial draws from its own counter-addressed substream, so the result
//! is a pure function of the configuration: scheduling, worker count, and
//! chunking cannot change a single bit. Accumulation uses a fixed-shape
//! pairwise tree over the trial index.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimation::{
    extra_mse, mse_no_erasure, ErasurePattern, Estimator, NoiseModel, SignalModel,
};
use crate::frames::FusionFrame;
use crate::matcore::{cholesky, Matrix, Tolerances};
use crate::rng::{NormalStream, RNG_LABEL};

/// Covariance of a Gaussian draw: a shared variance or a full SPD matrix.
#[derive(Debug, Clone)]
pub enum Covariance {
    White(f64),
    Spd(Matrix),
}

enum CovFactor {
    Scale(f64),
    Chol(Matrix),
}

impl CovFactor {
    fn build(cov: &Covariance, tol: &Tolerances) -> Result<CovFactor> {
        match cov {
            Covariance::White(s2) => {
                if !(s2.is_finite() && *s2 > 0.0) {
                    return Err(Error::InvalidParams(format!(
                        "variance must be positive, got {s2}"
                    )));
                }
                Ok(CovFactor::Scale(s2.sqrt()))
            }
            Covariance::Spd(m) => Ok(CovFactor::Chol(cholesky(m, tol)?)),
        }
    }

    fn dim_or(&self, fallback: usize) -> usize {
        match self {
            CovFactor::Scale(_) => fallback,
            CovFactor::Chol(l) => l.rows(),
        }
    }

    #[allow(clippy::needless_range_loop)]
    fn sample(&self, stream: &mut NormalStream, dim: usize) -> Vec<f64> {
        let mut z = vec![0.0; dim];
        stream.fill_standard(&mut z);
        match self {
            CovFactor::Scale(s) => {
                for v in z.iter_mut() {
                    *v *= s;
                }
                z
            }
            CovFactor::Chol(l) => {
                // x = L z, lower triangular
                let n = l.rows();
                let mut out = vec![0.0; n];
                for (i, o) in out.iter_mut().enumerate() {
                    let mut s = 0.0;
                    for k in 0..=i {
                        s += l.get(i, k) * z[k];
                    }
                    *o = s;
                }
                out
            }
        }
    }
}

/// Draw one Gaussian vector with the given covariance from the stream.
pub fn gaussian_sample(
    stream: &mut NormalStream,
    cov: &Covariance,
    dim: usize,
) -> Result<Vec<f64>> {
    let factor = CovFactor::build(cov, &Tolerances::default())?;
    if factor.dim_or(dim) != dim {
        return Err(Error::DimensionMismatch {
            context: "covariance dimension",
            expected: dim,
            got: factor.dim_or(dim),
        });
    }
    Ok(factor.sample(stream, dim))
}

/// Monte Carlo configuration. Results are a pure function of this value.
#[derive(Clone)]
pub struct SimConfig<'a> {
    pub frame: &'a FusionFrame,
    pub signal: &'a SignalModel,
    pub noise: &'a NoiseModel,
    pub erasures: &'a ErasurePattern,
    pub trials: u64,
    pub seed: u64,
    /// Worker cap; 1 runs inline.
    pub threads: usize,
}

/// Empirical MSE with its standard error and the analytic value it targets.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub empirical_mse: f64,
    pub stderr: f64,
    pub trials: u64,
    pub analytic_mse: f64,
    /// Generator + variate recipe this build promises reproducibility for.
    pub rng: String,
}

fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

fn pairwise_sum_sq_dev(v: &[f64], mean: f64) -> f64 {
    if v.len() <= 8 {
        return v.iter().map(|x| (x - mean) * (x - mean)).sum();
    }
    let mid = v.len() / 2;
    pairwise_sum_sq_dev(&v[..mid], mean) + pairwise_sum_sq_dev(&v[mid..], mean)
}

/// Run the measurement model for `cfg.trials` trials and compare against the
/// analytic MSE. Per trial t: x and the noise vectors come from substream
/// (seed, t) in a fixed order (x first, then n_0..n_{N−1}); erased blocks are
/// zeroed after drawing so erasure patterns can be compared trial-by-trial.
pub fn run_monte_carlo(cfg: &SimConfig) -> Result<SimResult> {
    if cfg.trials == 0 {
        return Err(Error::InvalidParams("trials must be at least 1".into()));
    }
    if cfg.threads == 0 {
        return Err(Error::InvalidParams("threads must be at least 1".into()));
    }
    if let Some(&max) = cfg.erasures.indices().last() {
        if max >= cfg.frame.len() {
            return Err(Error::InvalidParams(format!(
                "erasure index {max} out of range for {} subspaces",
                cfg.frame.len()
            )));
        }
    }
    let tol = Tolerances::default();
    let m = cfg.frame.ambient_dim();
    let n = cfg.frame.len();

    let analytic = {
        let base = mse_no_erasure(cfg.frame, cfg.signal, cfg.noise, &tol)?;
        let extra = if cfg.erasures.is_empty() {
            0.0
        } else {
            extra_mse(cfg.frame, cfg.signal, cfg.noise, cfg.erasures, &tol)?
        };
        base.mse + extra
    };

    let estimator = Estimator::build(cfg.frame, cfg.signal, cfg.noise, &tol)?;
    let signal_factor = CovFactor::build(
        &match cfg.signal {
            SignalModel::White { sigma_x2, .. } => Covariance::White(*sigma_x2),
            SignalModel::General { rxx } => Covariance::Spd(rxx.clone()),
        },
        &tol,
    )?;
    let noise_factor = CovFactor::build(&Covariance::White(cfg.noise.variance()), &tol)?;

    let trial_error = |t: u64| -> f64 {
        let mut stream = NormalStream::for_trial(cfg.seed, t);
        let x = signal_factor.sample(&mut stream, m);
        let mut zs: Vec<Vec<f64>> = Vec::with_capacity(n);
        for i in 0..n {
            let noise_vec = noise_factor.sample(&mut stream, m);
            let mut z = cfg.frame.subspace(i).project(&x);
            for (zv, nv) in z.iter_mut().zip(&noise_vec) {
                *zv += nv;
            }
            if cfg.erasures.contains(i) {
                z.iter_mut().for_each(|v| *v = 0.0);
            }
            zs.push(z);
        }
        let xhat = estimator.estimate(cfg.frame, &zs, cfg.erasures);
        x.iter()
            .zip(&xhat)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    };

    let mut errors: Vec<f64> = Vec::new();
    if cfg.threads == 1 {
        errors.extend((0..cfg.trials).map(trial_error));
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
        pool.install(|| {
            (0..cfg.trials as usize)
                .into_par_iter()
                .map(|t| trial_error(t as u64))
                .collect_into_vec(&mut errors)
        });
    }

    let t = cfg.trials as f64;
    let empirical = pairwise_sum(&errors) / t;
    let stderr = if cfg.trials > 1 {
        (pairwise_sum_sq_dev(&errors, empirical) / (t - 1.0) / t).sqrt()
    } else {
        0.0
    };
    Ok(SimResult {
        empirical_mse: empirical,
        stderr,
        trials: cfg.trials,
        analytic_mse: analytic,
        rng: RNG_LABEL.to_string(),
    })
}
