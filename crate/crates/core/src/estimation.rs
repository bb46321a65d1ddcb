//! LMMSE estimation from fusion-frame measurements and its erasure
//! analytics: error covariance through the compact inversion-lemma form,
//! MSE with eigenvalue bounds, tight-frame closed forms, the extra MSE due
//! to zeroed subspace measurements, and the optimal subspace dimension
//! under one erasure.

use crate::error::{Error, Result};
use crate::frames::{frame_bounds, frame_operator, FusionFrame};
use crate::matcore::{cholesky, solve_spd, sym_eig, Matrix, Tolerances};

fn positive(v: f64) -> bool {
    v.is_finite() && v > 0.0
}

/// Second-order model of the signal x.
#[derive(Debug, Clone)]
pub enum SignalModel {
    White { ambient_dim: usize, sigma_x2: f64 },
    General { rxx: Matrix },
}

impl SignalModel {
    pub fn white(ambient_dim: usize, sigma_x2: f64) -> Result<SignalModel> {
        if !positive(sigma_x2) {
            return Err(Error::InvalidParams(format!(
                "signal variance must be positive, got {sigma_x2}"
            )));
        }
        Ok(SignalModel::White {
            ambient_dim,
            sigma_x2,
        })
    }

    /// General SPD covariance; Cholesky must succeed.
    pub fn general(rxx: Matrix, tol: &Tolerances) -> Result<SignalModel> {
        cholesky(&rxx, tol)?;
        Ok(SignalModel::General { rxx })
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            SignalModel::White { ambient_dim, .. } => *ambient_dim,
            SignalModel::General { rxx } => rxx.rows(),
        }
    }

    /// The white variance, when the model is white.
    pub fn white_variance(&self) -> Option<f64> {
        match self {
            SignalModel::White { sigma_x2, .. } => Some(*sigma_x2),
            SignalModel::General { .. } => None,
        }
    }

    pub fn covariance(&self) -> Matrix {
        match self {
            SignalModel::White {
                ambient_dim,
                sigma_x2,
            } => Matrix::identity(*ambient_dim).scale(*sigma_x2),
            SignalModel::General { rxx } => rxx.clone(),
        }
    }

    fn inverse(&self, tol: &Tolerances) -> Result<Matrix> {
        match self {
            SignalModel::White {
                ambient_dim,
                sigma_x2,
            } => Ok(Matrix::identity(*ambient_dim).scale(1.0 / sigma_x2)),
            SignalModel::General { rxx } => solve_spd(rxx, &Matrix::identity(rxx.rows()), tol),
        }
    }

    /// Eigenvalues of R_xx, ascending.
    pub fn eigenvalues(&self, tol: &Tolerances) -> Result<Vec<f64>> {
        match self {
            SignalModel::White {
                ambient_dim,
                sigma_x2,
            } => Ok(vec![*sigma_x2; *ambient_dim]),
            SignalModel::General { rxx } => Ok(sym_eig(rxx, tol)?.eigenvalues),
        }
    }
}

/// White measurement-noise model, one variance shared by every subspace.
#[derive(Debug, Clone, Copy)]
pub struct NoiseModel {
    sigma_n2: f64,
}

impl NoiseModel {
    pub fn new(sigma_n2: f64) -> Result<NoiseModel> {
        if !positive(sigma_n2) {
            return Err(Error::InvalidParams(format!(
                "noise variance must be positive, got {sigma_n2}"
            )));
        }
        Ok(NoiseModel { sigma_n2 })
    }

    pub fn variance(&self) -> f64 {
        self.sigma_n2
    }
}

/// A set of erased subspace indices, strictly smaller than the frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErasurePattern {
    erased: Vec<usize>,
}

impl ErasurePattern {
    pub fn none() -> ErasurePattern {
        ErasurePattern { erased: Vec::new() }
    }

    pub fn new(indices: &[usize], n_subspaces: usize) -> Result<ErasurePattern> {
        let mut erased: Vec<usize> = indices.to_vec();
        erased.sort_unstable();
        erased.dedup();
        if erased.len() != indices.len() {
            return Err(Error::InvalidParams("duplicate erasure indices".into()));
        }
        if let Some(&max) = erased.last() {
            if max >= n_subspaces {
                return Err(Error::InvalidParams(format!(
                    "erasure index {max} out of range for {n_subspaces} subspaces"
                )));
            }
        }
        if erased.len() >= n_subspaces {
            return Err(Error::InvalidParams(
                "cannot erase every subspace".into(),
            ));
        }
        Ok(ErasurePattern { erased })
    }

    pub fn is_empty(&self) -> bool {
        self.erased.is_empty()
    }

    pub fn len(&self) -> usize {
        self.erased.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.erased
    }

    pub fn contains(&self, i: usize) -> bool {
        self.erased.binary_search(&i).is_ok()
    }
}

/// Full MSE accounting for one (frame, signal, noise, erasure) setting.
#[derive(Debug, Clone)]
pub struct MseReport {
    pub mse_no_erasure: f64,
    pub extra_mse: f64,
    pub total_mse: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    /// `α = σ_x²/(σ_x² A + σ_n²)`; present for white signals on tight frames.
    pub alpha: Option<f64>,
}

/// `A = Σ m_ℓ / M`: the tight-frame bound from the dimension count.
fn tight_bound_from_dims(frame: &FusionFrame) -> f64 {
    frame.dims_sum() as f64 / frame.ambient_dim() as f64
}

fn alpha(a: f64, sigma_x2: f64, sigma_n2: f64) -> f64 {
    sigma_x2 / (sigma_x2 * a + sigma_n2)
}

/// The matrix `Ω = R_xx⁻¹ + σ_n⁻² Σ P_i` whose inverse is the error
/// covariance.
fn information_matrix(
    frame: &FusionFrame,
    signal: &SignalModel,
    noise: &NoiseModel,
    tol: &Tolerances,
) -> Result<Matrix> {
    if signal.ambient_dim() != frame.ambient_dim() {
        return Err(Error::DimensionMismatch {
            context: "signal model ambient dimension",
            expected: frame.ambient_dim(),
            got: signal.ambient_dim(),
        });
    }
    let omega = signal
        .inverse(tol)?
        .add(&frame_operator(frame).scale(1.0 / noise.variance()));
    Ok(omega.symmetrized())
}

/// Error covariance of the no-erasure LMMSE estimate through the compact
/// form `R_ee = (R_xx⁻¹ + σ_n⁻² Σ P_i)⁻¹`. Symmetric positive definite.
pub fn error_covariance(
    frame: &FusionFrame,
    signal: &SignalModel,
    noise: &NoiseModel,
    tol: &Tolerances,
) -> Result<Matrix> {
    let omega = information_matrix(frame, signal, noise, tol)?;
    let ree = solve_spd(&omega, &Matrix::identity(omega.rows()), tol)
        .map_err(|e| Error::SingularModel(e.to_string()))?;
    Ok(ree.symmetrized())
}

/// MSE of the no-erasure estimate plus the eigenvalue sandwich bounds.
#[derive(Debug, Clone, Copy)]
pub struct MseBreakdown {
    pub mse: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
}

/// `MSE = Σ 1/φ_i` for the eigenvalues φ of `R_xx⁻¹ + σ_n⁻² Σ P_i`, with
/// the bounds `Σ 1/(1/λ_i + B/σ_n²) ≤ MSE ≤ Σ 1/(1/λ_i + A/σ_n²)`.
pub fn mse_no_erasure(
    frame: &FusionFrame,
    signal: &SignalModel,
    noise: &NoiseModel,
    tol: &Tolerances,
) -> Result<MseBreakdown> {
    let omega = information_matrix(frame, signal, noise, tol)?;
    let phis = sym_eig(&omega, tol)?.eigenvalues;
    if phis[0] <= 0.0 {
        return Err(Error::SingularModel(format!(
            "information matrix has non-positive eigenvalue {:.3e}",
            phis[0]
        )));
    }
    let mse: f64 = phis.iter().map(|p| 1.0 / p).sum();
    let bounds = frame_bounds(frame, tol.tight, tol);
    let lambdas = signal.eigenvalues(tol)?;
    let s2 = noise.variance();
    let lower: f64 = lambdas
        .iter()
        .map(|l| 1.0 / (1.0 / l + bounds.upper / s2))
        .sum();
    let upper: f64 = lambdas
        .iter()
        .map(|l| 1.0 / (1.0 / l + bounds.lower / s2))
        .sum();
    Ok(MseBreakdown {
        mse,
        lower_bound: lower,
        upper_bound: upper,
    })
}

/// The LMMSE estimator state, built once per (frame, signal, noise); the
/// filter is always the no-erasure filter.
pub(crate) enum Estimator {
    /// Tight frame, white signal: `x̂ = α Σ_{i∉S} P_i z_i`.
    Closed { alpha: f64 },
    /// General: `x̂ = R_ee σ_n⁻² Σ_{i∉S} P_i z_i`.
    Compact { gain: Matrix },
}

impl Estimator {
    pub(crate) fn build(
        frame: &FusionFrame,
        signal: &SignalModel,
        noise: &NoiseModel,
        tol: &Tolerances,
    ) -> Result<Estimator> {
        let bounds = frame_bounds(frame, tol.tight, tol);
        if let (Some(sx2), true) = (signal.white_variance(), bounds.tight) {
            let a = tight_bound_from_dims(frame);
            Ok(Estimator::Closed {
                alpha: alpha(a, sx2, noise.variance()),
            })
        } else {
            let ree = error_covariance(frame, signal, noise, tol)?;
            Ok(Estimator::Compact {
                gain: ree.scale(1.0 / noise.variance()),
            })
        }
    }

    pub(crate) fn estimate(
        &self,
        frame: &FusionFrame,
        measurements: &[Vec<f64>],
        erasures: &ErasurePattern,
    ) -> Vec<f64> {
        let m = frame.ambient_dim();
        let mut back_projected = vec![0.0; m];
        for (i, z) in measurements.iter().enumerate() {
            if erasures.contains(i) {
                continue;
            }
            let p = frame.subspace(i).project(z);
            for (acc, v) in back_projected.iter_mut().zip(&p) {
                *acc += v;
            }
        }
        match self {
            Estimator::Closed { alpha } => back_projected.iter().map(|v| alpha * v).collect(),
            Estimator::Compact { gain } => gain.matvec(&back_projected),
        }
    }
}

/// Apply the no-erasure LMMSE filter to measurements with the erased blocks
/// zeroed. Uses the closed form on tight frames with white signals and the
/// compact error-covariance form otherwise.
pub fn lmmse_estimate(
    frame: &FusionFrame,
    signal: &SignalModel,
    noise: &NoiseModel,
    measurements: &[Vec<f64>],
    erasures: &ErasurePattern,
    tol: &Tolerances,
) -> Result<Vec<f64>> {
    if measurements.len() != frame.len() {
        return Err(Error::DimensionMismatch {
            context: "one measurement vector per subspace",
            expected: frame.len(),
            got: measurements.len(),
        });
    }
    for z in measurements {
        if z.len() != frame.ambient_dim() {
            return Err(Error::DimensionMismatch {
                context: "measurement vector length",
                expected: frame.ambient_dim(),
                got: z.len(),
            });
        }
    }
    if let Some(&max) = erasures.indices().last() {
        if max >= frame.len() {
            return Err(Error::InvalidParams(format!(
                "erasure index {max} out of range for {} subspaces",
                frame.len()
            )));
        }
    }
    let estimator = Estimator::build(frame, signal, noise, tol)?;
    Ok(estimator.estimate(frame, measurements, erasures))
}

/// Extra MSE caused by the erasures on a tight frame with a white signal:
/// `α² tr[σ_x² T² + σ_n² T]` with `T = Σ_{i∈S} P_i`.
pub fn extra_mse(
    frame: &FusionFrame,
    signal: &SignalModel,
    noise: &NoiseModel,
    erasures: &ErasurePattern,
    tol: &Tolerances,
) -> Result<f64> {
    let bounds = frame_bounds(frame, tol.tight, tol);
    if !bounds.tight {
        return Err(Error::NotTight {
            spread: bounds.upper - bounds.lower,
        });
    }
    let sigma_x2 = signal.white_variance().ok_or(Error::NotWhiteSignal)?;
    if erasures.is_empty() {
        return Ok(0.0);
    }
    let m = frame.ambient_dim();
    let mut t = Matrix::zeros(m, m);
    for &i in erasures.indices() {
        if i >= frame.len() {
            return Err(Error::InvalidParams(format!(
                "erasure index {i} out of range for {} subspaces",
                frame.len()
            )));
        }
        t.add_assign(&frame.subspace(i).projection());
    }
    let a = tight_bound_from_dims(frame);
    let al = alpha(a, sigma_x2, noise.variance());
    // T is symmetric, so tr[T^2] = ||T||_F^2
    let tr_t2 = t.frobenius_norm().powi(2);
    let tr_t = t.trace();
    Ok(al * al * (sigma_x2 * tr_t2 + noise.variance() * tr_t))
}

/// Assemble the full report: no-erasure MSE, bounds, extra MSE for the
/// pattern (zero when empty), total, and α when defined.
pub fn mse_report(
    frame: &FusionFrame,
    signal: &SignalModel,
    noise: &NoiseModel,
    erasures: &ErasurePattern,
    tol: &Tolerances,
) -> Result<MseReport> {
    let base = mse_no_erasure(frame, signal, noise, tol)?;
    let extra = if erasures.is_empty() {
        0.0
    } else {
        extra_mse(frame, signal, noise, erasures, tol)?
    };
    let bounds = frame_bounds(frame, tol.tight, tol);
    let alpha_val = match (signal.white_variance(), bounds.tight) {
        (Some(sx2), true) => Some(alpha(tight_bound_from_dims(frame), sx2, noise.variance())),
        _ => None,
    };
    Ok(MseReport {
        mse_no_erasure: base.mse,
        extra_mse: extra,
        total_mse: base.mse + extra,
        lower_bound: base.lower_bound,
        upper_bound: base.upper_bound,
        alpha: alpha_val,
    })
}

/// Closed-form extra MSE for k erasures on an equi-dimensional,
/// equi-distance tight frame:
/// `α²(σ_x²+σ_n²)·k·m + α²σ_x²·k(k−1)·(m − d_c²)`.
pub fn k_erasure_formula(
    a: f64,
    m: usize,
    d_c_sq: f64,
    n_erased: usize,
    sigma_x2: f64,
    sigma_n2: f64,
    ambient: usize,
) -> Result<f64> {
    if !positive(a) || !positive(sigma_x2) || !positive(sigma_n2) {
        return Err(Error::InvalidParams(
            "bound and variances must be positive".into(),
        ));
    }
    if m < 1 || m > ambient {
        return Err(Error::InvalidParams(format!(
            "subspace dimension {m} out of range 1..={ambient}"
        )));
    }
    if !(0.0..=m as f64).contains(&d_c_sq) {
        return Err(Error::InvalidParams(format!(
            "d_c^2 = {d_c_sq} outside [0, {m}]"
        )));
    }
    let k = n_erased as f64;
    let al = alpha(a, sigma_x2, sigma_n2);
    Ok(al * al * (sigma_x2 + sigma_n2) * k * m as f64
        + al * al * sigma_x2 * k * (k - 1.0) * (m as f64 - d_c_sq))
}

/// Total MSE under one erasure for a tight frame of N m-dimensional
/// subspaces of ℝ^M with white signal and noise:
/// `Mσ_x²σ_n²/D + σ_x⁴(σ_x²+σ_n²)m/D²` with `D = Nmσ_x²/M + σ_n²`.
pub fn one_erasure_mse(
    ambient: usize,
    n_subspaces: usize,
    m: usize,
    sigma_x2: f64,
    sigma_n2: f64,
) -> Result<f64> {
    if n_subspaces < 2 {
        return Err(Error::InvalidParams(
            "one-erasure analysis needs at least 2 subspaces".into(),
        ));
    }
    let m_min = ambient.div_ceil(n_subspaces);
    if m < m_min || m > ambient {
        return Err(Error::InvalidParams(format!(
            "subspace dimension {m} outside [{m_min}, {ambient}]"
        )));
    }
    if !sigma_x2.is_finite() || sigma_x2 < 0.0 || !positive(sigma_n2) {
        return Err(Error::InvalidParams("variances out of range".into()));
    }
    let (mm, nn, mf) = (ambient as f64, n_subspaces as f64, m as f64);
    let denom = nn * mf * sigma_x2 / mm + sigma_n2;
    Ok(mm * sigma_x2 * sigma_n2 / denom
        + sigma_x2 * sigma_x2 * (sigma_x2 + sigma_n2) * mf / (denom * denom))
}

/// Result of scanning `one_erasure_mse` over the admissible dimensions.
#[derive(Debug, Clone)]
pub struct OptimalDimension {
    pub m_min: usize,
    pub m_star: usize,
    /// `(m, MSE(m))` for every m in the scan range.
    pub table: Vec<(usize, f64)>,
    /// The endpoint rule's pick: compare MSE(m_min) with MSE(m_max).
    pub endpoint_choice: usize,
    pub endpoint_agrees: bool,
}

/// Minimize the one-erasure MSE over integer dimensions in
/// `[⌈M/N⌉, m_max]` by exhaustive scan; ties break toward smaller m. Also
/// reports whether the endpoint comparison picks the same dimension.
pub fn optimal_dimension(
    ambient: usize,
    n_subspaces: usize,
    sigma_x2: f64,
    sigma_n2: f64,
    m_max: usize,
) -> Result<OptimalDimension> {
    if n_subspaces < 2 {
        return Err(Error::InvalidParams(
            "one-erasure analysis needs at least 2 subspaces".into(),
        ));
    }
    let m_min = ambient.div_ceil(n_subspaces);
    if m_max < m_min || m_max > ambient {
        return Err(Error::InvalidParams(format!(
            "m_max {m_max} outside [{m_min}, {ambient}]"
        )));
    }
    let mut table = Vec::with_capacity(m_max - m_min + 1);
    for m in m_min..=m_max {
        table.push((m, one_erasure_mse(ambient, n_subspaces, m, sigma_x2, sigma_n2)?));
    }
    let mut m_star = table[0].0;
    let mut best = table[0].1;
    for &(m, v) in &table[1..] {
        if v < best {
            best = v;
            m_star = m;
        }
    }
    let mse_min = table[0].1;
    let mse_max = table[table.len() - 1].1;
    let endpoint_choice = if mse_min <= mse_max { m_min } else { m_max };
    Ok(OptimalDimension {
        m_min,
        m_star,
        endpoint_agrees: endpoint_choice == m_star,
        endpoint_choice,
        table,
    })
}
