//! Fusion frames over ℝ^M: subspace data model, frame operator and bounds,
//! principal angles, chordal distances, the simplex bound, the frame-bound
//! identities for tight equi-dimensional frames, equi-distance certification,
//! and the sphere embedding of the Grassmannian G(m, M).

use crate::error::{Error, Result};
use crate::matcore::{
    orthonormalize, orthonormalize_dropping, sym_eig, thin_svd, Matrix, Tolerances,
};

/// How `subspace_from_vectors` treats numerically dependent spanning vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankPolicy {
    /// Dependent vectors are an error.
    Strict,
    /// Dependent vectors are silently dropped.
    DropDependent,
}

/// An m-dimensional subspace of ℝ^M held as m orthonormal rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    /// Wrap an already-orthonormal basis (rows). Validates
    /// `‖B Bᵀ − I‖_F ≤ 1e−10`.
    pub fn from_orthonormal_basis(basis: Matrix) -> Result<Subspace> {
        if basis.rows() > basis.cols() {
            return Err(Error::DimensionMismatch {
                context: "subspace dimension exceeds ambient dimension",
                expected: basis.cols(),
                got: basis.rows(),
            });
        }
        if !basis.is_finite() {
            return Err(Error::NonFinite { context: "subspace basis" });
        }
        let gram = basis.matmul(&basis.transpose());
        let residual = gram.sub(&Matrix::identity(basis.rows())).frobenius_norm();
        if residual > 1e-10 {
            return Err(Error::InvalidParams(format!(
                "basis rows are not orthonormal (residual {residual:.3e})"
            )));
        }
        Ok(Subspace { basis })
    }

    /// Build the span of the given vectors, orthonormalizing them.
    pub fn from_vectors(vectors: &[Vec<f64>], policy: RankPolicy, tol: &Tolerances) -> Result<Subspace> {
        let raw = Matrix::from_rows(vectors)?;
        let basis = match policy {
            RankPolicy::Strict => orthonormalize(&raw, tol)?,
            RankPolicy::DropDependent => orthonormalize_dropping(&raw, tol)?.0,
        };
        Ok(Subspace { basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Orthogonal projection matrix `P = Bᵀ B`.
    pub fn projection(&self) -> Matrix {
        self.basis.transpose().matmul(&self.basis)
    }

    /// `P x` without forming `P`: two thin multiplies.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        let coeffs = self.basis.matvec(x);
        let mut out = vec![0.0; self.ambient_dim()];
        for (i, c) in coeffs.iter().enumerate() {
            for (o, b) in out.iter_mut().zip(self.basis.row(i)) {
                *o += c * b;
            }
        }
        out
    }
}

/// Build a subspace from spanning vectors (strict by default in callers that
/// know their rank; permissive for orbit generators).
pub fn subspace_from_vectors(
    vectors: &[Vec<f64>],
    policy: RankPolicy,
    tol: &Tolerances,
) -> Result<Subspace> {
    Subspace::from_vectors(vectors, policy, tol)
}

/// An ordered collection of subspaces of a common ℝ^M with the frame-operator
/// spectrum cached at construction. Immutable.
#[derive(Debug, Clone)]
pub struct FusionFrame {
    ambient_dim: usize,
    subspaces: Vec<Subspace>,
    spectrum: Vec<f64>,
}

impl FusionFrame {
    pub fn new(subspaces: Vec<Subspace>, tol: &Tolerances) -> Result<FusionFrame> {
        let first = subspaces
            .first()
            .ok_or_else(|| Error::InvalidParams("a fusion frame needs at least one subspace".into()))?;
        let ambient_dim = first.ambient_dim();
        for (i, s) in subspaces.iter().enumerate() {
            if s.ambient_dim() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    context: "subspace ambient dimension",
                    expected: ambient_dim,
                    got: subspaces[i].ambient_dim(),
                });
            }
        }
        let mut operator = Matrix::zeros(ambient_dim, ambient_dim);
        for s in &subspaces {
            operator.add_assign(&s.projection());
        }
        let spectrum = sym_eig(&operator.symmetrized(), tol)?.eigenvalues;
        Ok(FusionFrame {
            ambient_dim,
            subspaces,
            spectrum,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    pub fn subspace(&self, i: usize) -> &Subspace {
        &self.subspaces[i]
    }

    /// Eigenvalues of the frame operator, ascending.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn dims(&self) -> Vec<usize> {
        self.subspaces.iter().map(|s| s.dim()).collect()
    }

    pub fn dims_sum(&self) -> usize {
        self.subspaces.iter().map(|s| s.dim()).sum()
    }

    /// The common subspace dimension, if all subspaces share one.
    pub fn common_dim(&self) -> Option<usize> {
        let d = self.subspaces[0].dim();
        self.subspaces.iter().all(|s| s.dim() == d).then_some(d)
    }
}

/// The frame operator `S = Σ_i P_i`.
pub fn frame_operator(frame: &FusionFrame) -> Matrix {
    let m = frame.ambient_dim();
    let mut s = Matrix::zeros(m, m);
    for sub in frame.subspaces() {
        s.add_assign(&sub.projection());
    }
    s
}

/// Frame bounds: extreme eigenvalues of the frame operator plus the
/// tightness / frame verdicts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    /// A = π_1, smallest eigenvalue of the frame operator.
    pub lower: f64,
    /// B = π_M, largest eigenvalue.
    pub upper: f64,
    /// `(upper − lower) ≤ τ_tight · max(1, upper)`.
    pub tight: bool,
    /// `lower > τ_frame`.
    pub is_frame: bool,
}

pub fn frame_bounds(frame: &FusionFrame, tau_tight: f64, tol: &Tolerances) -> FrameBounds {
    let spectrum = frame.spectrum();
    let lower = spectrum[0];
    let upper = spectrum[spectrum.len() - 1];
    FrameBounds {
        lower,
        upper,
        tight: (upper - lower) <= tau_tight * upper.max(1.0),
        is_frame: lower > tol.frame,
    }
}

/// Principal angles between two subspaces, ascending in [0, π/2]:
/// arccos of the singular values of `B_U B_Vᵀ`, clamped to [0, 1].
pub fn principal_angles(u: &Subspace, v: &Subspace, tol: &Tolerances) -> Result<Vec<f64>> {
    if u.ambient_dim() != v.ambient_dim() {
        return Err(Error::DimensionMismatch {
            context: "principal angles need a common ambient space",
            expected: u.ambient_dim(),
            got: v.ambient_dim(),
        });
    }
    let overlap = u.basis().matmul(&v.basis().transpose());
    let singular = thin_svd(&overlap, tol)?;
    Ok(singular
        .iter()
        .map(|&s| s.clamp(0.0, 1.0).acos())
        .collect())
}

/// Squared chordal distance `d_c² = min(m_U, m_V) − tr[P_U P_V]`, with
/// `tr[P_U P_V] = ‖B_U B_Vᵀ‖_F²`. Equals the sum of sin²θ over the
/// min(m_U, m_V) principal angles.
pub fn chordal_distance_sq(u: &Subspace, v: &Subspace) -> Result<f64> {
    if u.ambient_dim() != v.ambient_dim() {
        return Err(Error::DimensionMismatch {
            context: "chordal distance needs a common ambient space",
            expected: u.ambient_dim(),
            got: v.ambient_dim(),
        });
    }
    let min_dim = u.dim().min(v.dim()) as f64;
    let overlap = u.basis().matmul(&v.basis().transpose());
    let t = overlap.frobenius_norm().powi(2);
    Ok((min_dim - t).clamp(0.0, min_dim))
}

/// Simplex bound on d_c² for N m-dimensional subspaces of ℝ^M:
/// `m(M−m)/M · N/(N−1)`.
pub fn simplex_bound(m: usize, ambient: usize, n: usize) -> Result<f64> {
    if m < 1 || m > ambient {
        return Err(Error::InvalidParams(format!(
            "subspace dimension {m} out of range 1..={ambient}"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidParams("simplex bound needs at least 2 subspaces".into()));
    }
    let (m, ambient, n) = (m as f64, ambient as f64, n as f64);
    Ok(m * (ambient - m) / ambient * n / (n - 1.0))
}

/// Symmetric table of pairwise squared chordal distances with per-pair
/// principal-angle lists.
#[derive(Debug, Clone)]
pub struct DistanceTable {
    n: usize,
    d_sq: Vec<f64>,
    angles: Vec<Vec<f64>>,
}

impl DistanceTable {
    pub fn compute(frame: &FusionFrame, tol: &Tolerances) -> Result<DistanceTable> {
        let n = frame.len();
        let mut d_sq = vec![0.0; n * n];
        let mut angles = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                let d = chordal_distance_sq(frame.subspace(i), frame.subspace(j))?;
                let ang = principal_angles(frame.subspace(i), frame.subspace(j), tol)?;
                let via_angles: f64 = ang.iter().map(|a| a.sin() * a.sin()).sum();
                debug_assert!(
                    (d - via_angles).abs() <= 1e-10,
                    "distance routes disagree: {d} vs {via_angles}"
                );
                d_sq[i * n + j] = d;
                d_sq[j * n + i] = d;
                angles.push(ang);
            }
        }
        Ok(DistanceTable { n, d_sq, angles })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d_sq[i * self.n + j]
    }

    pub fn angles(&self, i: usize, j: usize) -> &[f64] {
        assert!(i != j, "no principal angles on the diagonal");
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let idx = i * self.n - i * (i + 1) / 2 + (j - i - 1);
        &self.angles[idx]
    }

    /// Off-diagonal distances, each unordered pair once.
    pub fn pair_distances(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            ((i + 1)..self.n).map(move |j| (i, j, self.get(i, j)))
        })
    }

    pub fn min_distance(&self) -> Option<f64> {
        self.pair_distances()
            .map(|(_, _, d)| d)
            .min_by(|a, b| a.partial_cmp(b).unwrap())
    }

    pub fn max_distance(&self) -> Option<f64> {
        self.pair_distances()
            .map(|(_, _, d)| d)
            .max_by(|a, b| a.partial_cmp(b).unwrap())
    }

    pub fn mean_distance(&self) -> Option<f64> {
        let n_pairs = self.n * (self.n - 1) / 2;
        if n_pairs == 0 {
            return None;
        }
        Some(self.pair_distances().map(|(_, _, d)| d).sum::<f64>() / n_pairs as f64)
    }
}

/// The fusion frame bound of a tight equi-dimensional frame, evaluated
/// through the dimension-count route and the per-index distance-sum route.
/// All entries agree with the spectral bound for any valid input.
#[derive(Debug, Clone)]
pub struct BoundIdentity {
    /// `A = N m / M`.
    pub by_dimension: f64,
    /// `A = N − Σ_{i≠j} d_c²(i,j)/m`, one value per j.
    pub by_distance: Vec<f64>,
    /// Midpoint of the (tight) spectral bounds.
    pub spectral: f64,
}

pub fn frame_bound_identity(frame: &FusionFrame, tol: &Tolerances) -> Result<BoundIdentity> {
    let bounds = frame_bounds(frame, tol.tight, tol);
    if !bounds.tight {
        return Err(Error::NotTight {
            spread: bounds.upper - bounds.lower,
        });
    }
    let m = frame.common_dim().ok_or_else(|| Error::NotEquiDimensional {
        dims: frame.dims(),
    })?;
    let n = frame.len();
    let table = DistanceTable::compute(frame, tol)?;
    let by_dimension = n as f64 * m as f64 / frame.ambient_dim() as f64;
    let by_distance = (0..n)
        .map(|j| {
            let sum: f64 = (0..n).filter(|&i| i != j).map(|i| table.get(i, j)).sum();
            n as f64 - sum / m as f64
        })
        .collect();
    Ok(BoundIdentity {
        by_dimension,
        by_distance,
        spectral: 0.5 * (bounds.lower + bounds.upper),
    })
}

/// Verdict of the equi-distance tight-frame certification. POSITIVE means
/// the frame is an optimal Grassmannian packing: tight, equi-dimensional,
/// equi-distance, with the common d_c² at the simplex bound.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub equi_dimensional: bool,
    pub equi_distance: bool,
    pub tight: bool,
    pub bounds: FrameBounds,
    /// Max minus min pairwise d_c² (0 when fewer than two subspaces).
    pub spread: f64,
    /// Mean pairwise d_c², when pairs exist.
    pub mean_distance_sq: Option<f64>,
    /// Simplex bound for (common m, M, N), when defined.
    pub simplex_bound: Option<f64>,
    /// `mean d_c² − simplex bound`, when both exist.
    pub gap: Option<f64>,
    pub positive: bool,
}

pub fn certify_equidistance_tight(
    frame: &FusionFrame,
    tau: f64,
    tol: &Tolerances,
) -> Result<Certificate> {
    let bounds = frame_bounds(frame, tol.tight, tol);
    let common = frame.common_dim();
    let table = DistanceTable::compute(frame, tol)?;
    let (spread, mean) = match (table.min_distance(), table.max_distance()) {
        (Some(lo), Some(hi)) => (hi - lo, table.mean_distance()),
        _ => (0.0, None),
    };
    let simplex = match common {
        Some(m) if frame.len() >= 2 => Some(simplex_bound(m, frame.ambient_dim(), frame.len())?),
        _ => None,
    };
    let gap = match (mean, simplex) {
        (Some(d), Some(b)) => Some(d - b),
        _ => None,
    };
    let equi_distance = spread <= tau && mean.is_some();
    let positive = common.is_some()
        && equi_distance
        && bounds.tight
        && gap.map(|g| g.abs() <= tau).unwrap_or(false);
    Ok(Certificate {
        equi_dimensional: common.is_some(),
        equi_distance,
        tight: bounds.tight,
        bounds,
        spread,
        mean_distance_sq: mean,
        simplex_bound: simplex,
        gap,
        positive,
    })
}

/// Sphere embedding of G(m, M): the traceless projection `P − (m/M) I`
/// flattened over the upper triangle, off-diagonal entries scaled by √2 so
/// the Euclidean norm of the output equals the Frobenius norm of the matrix,
/// `√(m(M−m)/M)`.
pub fn embed_on_sphere(u: &Subspace) -> Vec<f64> {
    let m = u.ambient_dim();
    let shift = u.dim() as f64 / m as f64;
    let p = u.projection();
    let mut out = Vec::with_capacity(m * (m + 1) / 2);
    for i in 0..m {
        out.push(p.get(i, i) - shift);
        for j in (i + 1)..m {
            out.push(std::f64::consts::SQRT_2 * p.get(i, j));
        }
    }
    out
}

/// Whether two subspaces coincide: `d_c² ≤ subspace_eq` and equal dimension.
pub fn subspaces_equal(u: &Subspace, v: &Subspace, tol: &Tolerances) -> Result<bool> {
    Ok(u.dim() == v.dim() && chordal_distance_sq(u, v)? <= tol.subspace_eq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn line(coords: Vec<f64>) -> Subspace {
        Subspace::from_vectors(&[coords], RankPolicy::Strict, &tol()).unwrap()
    }

    fn standard_pair() -> FusionFrame {
        let a = line(vec![1.0, 0.0]);
        let b = line(vec![0.0, 1.0]);
        FusionFrame::new(vec![a, b], &tol()).unwrap()
    }

    #[test]
    fn frame_operator_resolution_of_identity() {
        let f = standard_pair();
        let s = frame_operator(&f);
        assert!(s.sub(&Matrix::identity(2)).frobenius_norm() <= 1e-14);
    }

    #[test]
    fn single_full_space_bounds() {
        let s = Subspace::from_orthonormal_basis(Matrix::identity(3)).unwrap();
        let f = FusionFrame::new(vec![s], &tol()).unwrap();
        let b = frame_bounds(&f, 1e-9, &tol());
        assert!((b.lower - 1.0).abs() <= 1e-12);
        assert!((b.upper - 1.0).abs() <= 1e-12);
        assert!(b.tight && b.is_frame);
    }

    #[test]
    fn two_parallel_lines_are_not_a_frame() {
        let a = line(vec![1.0, 0.0]);
        let b = line(vec![1.0, 0.0]);
        let f = FusionFrame::new(vec![a, b], &tol()).unwrap();
        let bounds = frame_bounds(&f, 1e-9, &tol());
        assert!(bounds.lower.abs() <= 1e-12);
        assert!(!bounds.is_frame);
    }

    #[test]
    fn principal_angles_identity_and_diagonal() {
        let a = line(vec![1.0, 0.0]);
        let ang = principal_angles(&a, &a, &tol()).unwrap();
        assert!(ang[0].abs() <= 1e-7);
        let d = line(vec![1.0, 1.0]);
        let ang = principal_angles(&a, &d, &tol()).unwrap();
        assert!((ang[0] - FRAC_PI_4).abs() <= 1e-10);
    }

    #[test]
    fn principal_angles_dimension_mismatch() {
        let a = line(vec![1.0, 0.0]);
        let b = line(vec![1.0, 0.0, 0.0]);
        assert!(matches!(
            principal_angles(&a, &b, &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn chordal_distance_self_and_orthogonal() {
        let a = line(vec![1.0, 0.0]);
        let b = line(vec![0.0, 1.0]);
        assert!(chordal_distance_sq(&a, &a).unwrap().abs() <= 1e-14);
        assert!((chordal_distance_sq(&a, &b).unwrap() - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn chordal_distance_via_angles() {
        let u = Subspace::from_vectors(
            &[vec![1.0, 0.0, 0.4, 0.0], vec![0.0, 1.0, 0.0, -0.3]],
            RankPolicy::Strict,
            &tol(),
        )
        .unwrap();
        let v = Subspace::from_vectors(
            &[vec![0.2, 1.0, 0.0, 0.5], vec![1.0, 0.0, -1.0, 0.0]],
            RankPolicy::Strict,
            &tol(),
        )
        .unwrap();
        let d = chordal_distance_sq(&u, &v).unwrap();
        let via: f64 = principal_angles(&u, &v, &tol())
            .unwrap()
            .iter()
            .map(|a| a.sin() * a.sin())
            .sum();
        assert!((d - via).abs() <= 1e-10);
    }

    #[test]
    fn simplex_bound_values() {
        assert!((simplex_bound(3, 7, 28).unwrap() - 16.0 / 9.0).abs() <= 1e-15);
        assert!((simplex_bound(2, 6, 9).unwrap() - 1.5).abs() <= 1e-15);
        assert_eq!(simplex_bound(4, 4, 5).unwrap(), 0.0);
        assert!(simplex_bound(0, 4, 5).is_err());
        assert!(simplex_bound(2, 4, 1).is_err());
    }

    #[test]
    fn bound_identity_on_partition() {
        // two orthogonal 2-planes partitioning R^4
        let u = Subspace::from_vectors(
            &[vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 1.0, 0.0, 0.0]],
            RankPolicy::Strict,
            &tol(),
        )
        .unwrap();
        let v = Subspace::from_vectors(
            &[vec![0.0, 0.0, 1.0, 0.0], vec![0.0, 0.0, 0.0, 1.0]],
            RankPolicy::Strict,
            &tol(),
        )
        .unwrap();
        let f = FusionFrame::new(vec![u, v], &tol()).unwrap();
        let p5 = frame_bound_identity(&f, &tol()).unwrap();
        assert!((p5.by_dimension - 1.0).abs() <= 1e-12);
        for a in &p5.by_distance {
            assert!((a - 1.0).abs() <= 1e-8);
        }
        assert!((p5.spectral - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn bound_identity_rejects_non_tight() {
        let a = line(vec![1.0, 0.0]);
        let b = line(vec![1.0, 0.2]);
        let f = FusionFrame::new(vec![a, b], &tol()).unwrap();
        assert!(matches!(
            frame_bound_identity(&f, &tol()),
            Err(Error::NotTight { .. })
        ));
    }

    #[test]
    fn certify_two_orthogonal_lines() {
        let f = standard_pair();
        let c = certify_equidistance_tight(&f, 1e-9, &tol()).unwrap();
        assert!(c.positive);
        assert!((c.mean_distance_sq.unwrap() - 1.0).abs() <= 1e-12);
        assert!((c.simplex_bound.unwrap() - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn embed_on_sphere_norms() {
        let a = line(vec![1.0, 0.0]);
        let e = embed_on_sphere(&a);
        assert_eq!(e.len(), 3);
        let n: f64 = e.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((n - (0.5f64).sqrt()).abs() <= 1e-10);

        let full = Subspace::from_orthonormal_basis(Matrix::identity(3)).unwrap();
        let e = embed_on_sphere(&full);
        assert!(e.iter().all(|x| x.abs() <= 1e-14));
    }

    #[test]
    fn embedding_distance_matches_chordal() {
        let u = line(vec![1.0, 0.0]);
        let v = line(vec![1.0, 1.0]);
        let (eu, ev) = (embed_on_sphere(&u), embed_on_sphere(&v));
        let d2: f64 = eu.iter().zip(&ev).map(|(a, b)| (a - b) * (a - b)).sum();
        let chordal = chordal_distance_sq(&u, &v).unwrap();
        assert!((d2 / 2.0 - chordal).abs() <= 1e-10);
    }

    #[test]
    fn subspace_from_vectors_policies() {
        let s = subspace_from_vectors(
            &[vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 2.0]],
            RankPolicy::Strict,
            &tol(),
        )
        .unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.ambient_dim(), 3);

        assert!(matches!(
            subspace_from_vectors(&[vec![1.0, 0.0], vec![2.0, 0.0]], RankPolicy::Strict, &tol()),
            Err(Error::RankDeficient { .. })
        ));
        let dropped = subspace_from_vectors(
            &[vec![1.0, 0.0], vec![2.0, 0.0]],
            RankPolicy::DropDependent,
            &tol(),
        )
        .unwrap();
        assert_eq!(dropped.dim(), 1);
    }

    #[test]
    fn distance_table_symmetry_and_angles() {
        let f = FusionFrame::new(
            vec![line(vec![1.0, 0.0]), line(vec![1.0, 1.0]), line(vec![0.0, 1.0])],
            &tol(),
        )
        .unwrap();
        let t = DistanceTable::compute(&f, &tol()).unwrap();
        for i in 0..3 {
            assert_eq!(t.get(i, i), 0.0);
            for j in 0..3 {
                assert_eq!(t.get(i, j), t.get(j, i));
            }
        }
        assert!((t.angles(0, 1)[0] - FRAC_PI_4).abs() <= 1e-10);
        assert_eq!(t.angles(0, 1).len(), 1);
    }

    #[test]
    fn subspace_equality_threshold() {
        let a = line(vec![1.0, 0.0]);
        let b = line(vec![-1.0, 0.0]);
        assert!(subspaces_equal(&a, &b, &tol()).unwrap());
        let c = line(vec![1.0, 0.001]);
        assert!(!subspaces_equal(&a, &c, &tol()).unwrap());
    }

    // keeps FRAC_PI_3 import honest: the e6 construction tests use it too
    #[test]
    fn angle_of_half_overlap_lines() {
        let a = line(vec![1.0, 0.0]);
        let b = line(vec![1.0, 3.0f64.sqrt()]);
        let ang = principal_angles(&a, &b, &tol()).unwrap();
        assert!((ang[0] - FRAC_PI_3).abs() <= 1e-10);
    }
}
