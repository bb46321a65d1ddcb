//! Dense real linear-algebra kernels sized for small ambient dimensions
//! (M up to a few dozen): symmetric eigendecomposition via cyclic Jacobi
//! rotations, thin singular values through the Gram matrix, modified
//! Gram-Schmidt orthonormalization, and Cholesky-based SPD solves.

use crate::error::{Error, Result};

/// Numeric tolerances threaded through the toolkit. Absolute-relative
/// hybrids; the hybrid rule is stated at each use site.
#[derive(Debug, Clone)]
pub struct Tolerances {
    /// Relative asymmetry accepted by `sym_eig` and `cholesky`.
    pub sym_rel: f64,
    /// Jacobi sweep target: off-diagonal Frobenius norm vs `‖A‖_F`.
    pub jacobi_off: f64,
    /// Hard cap on Jacobi sweeps.
    pub jacobi_max_sweeps: usize,
    /// Relative pivot below which an MGS row counts as dependent.
    pub rank_pivot: f64,
    /// Cholesky pivot floor, relative to `trace(A)/n`.
    pub spd_pivot: f64,
    /// Relative spread under which frame bounds count as tight.
    pub tight: f64,
    /// Absolute floor on the lower frame bound for the frame verdict.
    pub frame: f64,
    /// Squared chordal distance under which two subspaces are the same.
    pub subspace_eq: f64,
    /// Frame-file loader: correction norm above this rejects the file.
    pub load_reject: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            sym_rel: 1e-12,
            jacobi_off: 1e-14,
            jacobi_max_sweeps: 100,
            rank_pivot: 1e-10,
            spd_pivot: 1e-13,
            tight: 1e-9,
            frame: 1e-12,
            subspace_eq: 1e-9,
            load_reject: 1e-4,
        }
    }
}

/// Dense row-major matrix of 64-bit floats.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Matrix> {
        if rows.is_empty() {
            return Err(Error::InvalidParams("matrix needs at least one row".into()));
        }
        let cols = rows[0].len();
        if cols == 0 {
            return Err(Error::InvalidParams("matrix rows must be nonempty".into()));
        }
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    context: "ragged rows",
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        let m = Matrix {
            rows: rows.len(),
            cols,
            data,
        };
        if !m.is_finite() {
            return Err(Error::NonFinite { context: "matrix entries" });
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "matvec dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn trace(&self) -> f64 {
        assert_eq!(self.rows, self.cols, "trace of non-square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `‖A − Aᵀ‖_F` for square matrices.
    pub fn asymmetry(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        let mut s = 0.0;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                let d = self.get(i, j) - self.get(j, i);
                s += 2.0 * d * d;
            }
        }
        s.sqrt()
    }

    pub fn symmetrized(&self) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                let v = 0.5 * (self.get(i, j) + self.get(j, i));
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        m
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Symmetric eigendecomposition: eigenvalues ascending, eigenvector columns
/// orthonormal, `A v_k = λ_k v_k` to the residual tolerance.
#[derive(Debug, Clone)]
pub struct SymEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
}

/// Full spectrum of a symmetric matrix by cyclic Jacobi rotations.
///
/// Sweeps until the off-diagonal Frobenius norm drops below
/// `jacobi_off · ‖A‖_F`, capped at `jacobi_max_sweeps`.
pub fn sym_eig(a: &Matrix, tol: &Tolerances) -> Result<SymEig> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::DimensionMismatch {
            context: "sym_eig input must be square",
            expected: n,
            got: a.cols(),
        });
    }
    if !a.is_finite() {
        return Err(Error::NonFinite { context: "sym_eig input" });
    }
    let a_norm = a.frobenius_norm();
    let asym = a.asymmetry();
    let sym_tol = tol.sym_rel * a_norm.max(1.0);
    if asym > sym_tol {
        return Err(Error::NonSymmetric {
            asymmetry: asym,
            tolerance: sym_tol,
        });
    }

    let mut m = a.symmetrized();
    let mut v = Matrix::identity(n);
    let target = tol.jacobi_off * a_norm;

    let off_norm = |m: &Matrix| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                let x = m.get(p, q);
                s += 2.0 * x * x;
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_norm(&m);
        if off <= target {
            break;
        }
        if sweeps >= tol.jacobi_max_sweeps {
            return Err(Error::NoConvergence {
                sweeps: tol.jacobi_max_sweeps,
                off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let theta = (m.get(q, q) - m.get(p, p)) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    // avoid overflow in theta^2; same limit as the exact formula
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // two-sided rotation in the (p, q) plane
                for k in 0..n {
                    let akp = m.get(k, p);
                    let akq = m.get(k, q);
                    m.set(k, p, c * akp - s * akq);
                    m.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = m.get(p, k);
                    let aqk = m.get(q, k);
                    m.set(p, k, c * apk - s * aqk);
                    m.set(q, k, s * apk + c * aqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m.get(i, i).partial_cmp(&m.get(j, j)).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| m.get(i, i)).collect();
    let mut eigenvectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..n {
            eigenvectors.set(k, dst, v.get(k, src));
        }
    }

    #[cfg(debug_assertions)]
    {
        let bound = 1e-10 * a_norm.max(1.0);
        for (k, &lam) in eigenvalues.iter().enumerate() {
            let col: Vec<f64> = (0..n).map(|i| eigenvectors.get(i, k)).collect();
            let av = a.matvec(&col);
            let res = av
                .iter()
                .zip(&col)
                .map(|(x, y)| (x - lam * y) * (x - lam * y))
                .sum::<f64>()
                .sqrt();
            debug_assert!(res <= bound, "eigenpair residual {res:.3e} exceeds {bound:.3e}");
        }
    }

    Ok(SymEig {
        eigenvalues,
        eigenvectors,
    })
}

enum RankMode {
    Strict,
    Drop,
}

fn mgs(v: &Matrix, tol: &Tolerances, mode: RankMode) -> Result<(Matrix, usize)> {
    if !v.is_finite() {
        return Err(Error::NonFinite { context: "orthonormalize input" });
    }
    let cols = v.cols();
    let mut kept: Vec<Vec<f64>> = Vec::with_capacity(v.rows());
    let mut dropped = 0usize;
    for i in 0..v.rows() {
        let mut r = v.row(i).to_vec();
        let original = norm(&r);
        // two MGS passes: the second cleans up cancellation from the first
        for _ in 0..2 {
            for u in &kept {
                let c = dot(&r, u);
                for (rk, uk) in r.iter_mut().zip(u) {
                    *rk -= c * uk;
                }
            }
        }
        let remaining = norm(&r);
        if remaining <= tol.rank_pivot * original || original == 0.0 {
            match mode {
                RankMode::Strict => {
                    return Err(Error::RankDeficient {
                        row: i,
                        pivot: remaining,
                    })
                }
                RankMode::Drop => {
                    dropped += 1;
                    continue;
                }
            }
        }
        for rk in r.iter_mut() {
            *rk /= remaining;
        }
        kept.push(r);
    }
    if kept.is_empty() {
        return Err(Error::RankDeficient { row: 0, pivot: 0.0 });
    }
    let mut out = Matrix::zeros(kept.len(), cols);
    for (i, r) in kept.iter().enumerate() {
        for (j, &x) in r.iter().enumerate() {
            out.set(i, j, x);
        }
    }
    Ok((out, dropped))
}

/// Modified Gram-Schmidt with one re-orthogonalization pass. Rows of the
/// result are orthonormal and span the same space as the input rows.
/// Fails with `RankDeficient` when a pivot falls below
/// `rank_pivot · ‖row‖`.
pub fn orthonormalize(v: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    mgs(v, tol, RankMode::Strict).map(|(m, _)| m)
}

/// Like [`orthonormalize`] but silently drops numerically dependent rows.
/// Returns the orthonormal basis and the number of dropped rows.
pub fn orthonormalize_dropping(v: &Matrix, tol: &Tolerances) -> Result<(Matrix, usize)> {
    mgs(v, tol, RankMode::Drop)
}

/// Singular values of `A`, descending, as square roots of the eigenvalues of
/// the Gram matrix on the smaller side (negative round-off clamped to zero).
pub fn thin_svd(a: &Matrix, tol: &Tolerances) -> Result<Vec<f64>> {
    if !a.is_finite() {
        return Err(Error::NonFinite { context: "thin_svd input" });
    }
    let gram = if a.rows() <= a.cols() {
        a.matmul(&a.transpose())
    } else {
        a.transpose().matmul(a)
    };
    let eig = sym_eig(&gram, tol)?;
    let mut sv: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| l.max(0.0).sqrt())
        .collect();
    sv.reverse();
    Ok(sv)
}

/// Lower Cholesky factor of a symmetric positive-definite matrix.
/// A pivot at or below `spd_pivot · trace(A)/n` fails.
pub fn cholesky(a: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::DimensionMismatch {
            context: "cholesky input must be square",
            expected: n,
            got: a.cols(),
        });
    }
    if !a.is_finite() {
        return Err(Error::NonFinite { context: "cholesky input" });
    }
    let asym = a.asymmetry();
    let sym_tol = tol.sym_rel * a.frobenius_norm().max(1.0);
    if asym > sym_tol {
        return Err(Error::NonSymmetric {
            asymmetry: asym,
            tolerance: sym_tol,
        });
    }
    let floor = tol.spd_pivot * a.trace() / n as f64;
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = a.get(j, j);
        for k in 0..j {
            d -= l.get(j, k) * l.get(j, k);
        }
        if d <= floor {
            return Err(Error::NotPositiveDefinite { col: j, pivot: d });
        }
        let ljj = d.sqrt();
        l.set(j, j, ljj);
        for i in (j + 1)..n {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l.get(i, k) * l.get(j, k);
            }
            l.set(i, j, s / ljj);
        }
    }
    Ok(l)
}

/// Solve `A X = B` for symmetric positive-definite `A` by Cholesky
/// factorization with forward/back substitution per column of `B`.
#[allow(clippy::needless_range_loop)]
pub fn solve_spd(a: &Matrix, b: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    if b.rows() != a.rows() {
        return Err(Error::DimensionMismatch {
            context: "solve_spd rhs rows",
            expected: a.rows(),
            got: b.rows(),
        });
    }
    let l = cholesky(a, tol)?;
    let n = a.rows();
    let mut x = Matrix::zeros(n, b.cols());
    let mut y = vec![0.0; n];
    for col in 0..b.cols() {
        for i in 0..n {
            let mut s = b.get(i, col);
            for k in 0..i {
                s -= l.get(i, k) * y[k];
            }
            y[i] = s / l.get(i, i);
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s -= l.get(k, i) * x.get(k, col);
            }
            x.set(i, col, s / l.get(i, i));
        }
    }
    Ok(x)
}
