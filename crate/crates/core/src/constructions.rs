//! Frame generators: the quadratic-residue/Hadamard family, the Eisenstein
//! E6* planes, the E8 minimal-vector planes, and the partition / random
//! baselines used as test fixtures. Every structured construction runs the
//! equi-distance certification gate (or its own documented checks) and fails
//! loudly instead of returning an uncertified frame.

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};
use crate::frames::{
    certify_equidistance_tight, frame_bounds, FusionFrame, RankPolicy, Subspace,
};
use crate::jsonio::format_f64;
use crate::matcore::{orthonormalize, Matrix, Tolerances};
use crate::rng::NormalStream;

/// A constructed frame together with the provenance metadata that goes into
/// the frame file.
#[derive(Debug, Clone)]
pub struct BuiltFrame {
    pub frame: FusionFrame,
    pub metadata: BTreeMap<String, String>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn quadratic_residues(p: u64) -> Vec<u64> {
    let mut set: Vec<u64> = (1..p).map(|x| x * x % p).collect();
    set.sort_unstable();
    set.dedup();
    set
}

fn smallest_nonresidue(p: u64) -> u64 {
    let residues: HashSet<u64> = quadratic_residues(p).into_iter().collect();
    (2..p).find(|k| !residues.contains(k)).expect("p > 2")
}

/// Scaling constant that puts the same-shift pairs exactly on the simplex
/// bound: `C² = (√(p+2)+1)/(√(p+2)−1)`. Equals √2 at p = 7 and the golden
/// ratio at p = 3.
pub fn default_scale(p: u64) -> f64 {
    let s = ((p + 2) as f64).sqrt();
    ((s + 1.0) / (s - 1.0)).sqrt()
}

/// Parameters of the quadratic-residue construction.
#[derive(Debug, Clone)]
pub struct QrParams {
    pub p: u64,
    /// Scaling constant applied to the nonresidue coordinate.
    pub c: f64,
    /// Multiplier pairing residue q with nonresidue k·q mod p.
    pub k: u64,
}

impl QrParams {
    /// Defaults: `c = default_scale(p)`, `k` the smallest nonresidue mod p.
    pub fn new(p: u64) -> Result<QrParams> {
        Self::validate_p(p)?;
        Ok(QrParams {
            p,
            c: default_scale(p),
            k: smallest_nonresidue(p),
        })
    }

    pub fn with_scale(mut self, c: f64) -> QrParams {
        self.c = c;
        self
    }

    pub fn with_multiplier(mut self, k: u64) -> QrParams {
        self.k = k;
        self
    }

    fn validate_p(p: u64) -> Result<()> {
        if !is_prime(p) || !(p == 3 || p % 8 == 7) {
            return Err(Error::InvalidParams(format!(
                "p must be a prime equal to 3 or congruent to 7 mod 8, got {p}"
            )));
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        Self::validate_p(self.p)?;
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(Error::InvalidParams(format!(
                "scale must be positive, got {}",
                self.c
            )));
        }
        if self.k == 0 || self.k >= self.p {
            return Err(Error::InvalidParams(format!(
                "multiplier {} out of range 1..{}",
                self.k, self.p
            )));
        }
        let residues: HashSet<u64> = quadratic_residues(self.p).into_iter().collect();
        if residues.contains(&self.k) {
            return Err(Error::InvalidParams(format!(
                "multiplier {} is a quadratic residue mod {}",
                self.k, self.p
            )));
        }
        Ok(())
    }
}

// The order-4 Hadamard matrix in the arrangement the p = 7 construction
// uses: row 0 is the all-ones row, which the plane-spanning rule skips.
const HADAMARD_4: [[f64; 4]; 4] = [
    [1.0, 1.0, 1.0, 1.0],
    [-1.0, 1.0, -1.0, 1.0],
    [-1.0, -1.0, 1.0, 1.0],
    [1.0, -1.0, -1.0, 1.0],
];

#[allow(clippy::needless_range_loop)]
fn sylvester(order: usize) -> Vec<Vec<f64>> {
    let mut h = vec![vec![1.0]];
    while h.len() < order {
        let n = h.len();
        let mut next = vec![vec![0.0; 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..n {
                next[i][j] = h[i][j];
                next[i][j + n] = h[i][j];
                next[i + n][j] = h[i][j];
                next[i + n][j + n] = -h[i][j];
            }
        }
        h = next;
    }
    h
}

fn legendre(a: i64, q: u64) -> f64 {
    let a = a.rem_euclid(q as i64) as u64;
    if a == 0 {
        return 0.0;
    }
    let mut r = 1u64;
    let mut base = a % q;
    let mut e = (q - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % q;
        }
        base = base * base % q;
        e >>= 1;
    }
    if r == 1 {
        1.0
    } else {
        -1.0
    }
}

#[allow(clippy::needless_range_loop)]
fn paley(q: u64) -> Vec<Vec<f64>> {
    let n = (q + 1) as usize;
    let mut h = vec![vec![0.0; n]; n];
    for i in 0..n {
        h[i][i] = 1.0;
    }
    for j in 1..n {
        h[0][j] += 1.0;
        h[j][0] += -1.0;
    }
    for i in 1..n {
        for j in 1..n {
            if i != j {
                h[i][j] += legendre(i as i64 - j as i64, q);
            }
        }
    }
    h
}

/// Normalize so row 0 is all ones; every other row then sums to zero.
fn normalize_rows_then_cols(mut h: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let n = h.len();
    for row in h.iter_mut() {
        if row[0] < 0.0 {
            for v in row.iter_mut() {
                *v = -*v;
            }
        }
    }
    for j in 0..n {
        if h[0][j] < 0.0 {
            for row in h.iter_mut() {
                row[j] = -row[j];
            }
        }
    }
    h
}

fn hadamard(order: usize) -> Result<Vec<Vec<f64>>> {
    if order == 4 {
        return Ok(HADAMARD_4.iter().map(|r| r.to_vec()).collect());
    }
    let h = if order.is_power_of_two() {
        sylvester(order)
    } else if order >= 4 && is_prime(order as u64 - 1) && (order as u64 - 1) % 4 == 3 {
        normalize_rows_then_cols(paley(order as u64 - 1))
    } else {
        return Err(Error::ConstructionFailed(format!(
            "no Hadamard matrix construction available for order {order}"
        )));
    };
    // sanity: orthogonal rows
    let n = h.len() as f64;
    for i in 0..h.len() {
        for j in (i + 1)..h.len() {
            let d: f64 = h[i].iter().zip(&h[j]).map(|(a, b)| a * b).sum();
            if d.abs() > 1e-9 * n {
                return Err(Error::ConstructionFailed(format!(
                    "Hadamard construction for order {order} produced non-orthogonal rows"
                )));
            }
        }
    }
    Ok(h)
}

/// The quadratic-residue construction: for a prime p = 3 or p ≡ 7 (mod 8),
/// N = p(p+1)/2 subspaces of dimension (p−1)/2 in ℝ^p. Base planes are
/// spanned by `e_q + c·H(i,j)·e_{kq mod p}` over the residues q, using the
/// zero-sum rows of a normalized Hadamard matrix of order (p+1)/2; the rest
/// are their cyclic coordinate shifts. The result must certify as an
/// equi-distance tight frame or the call fails.
pub fn quadratic_residue_frame(params: &QrParams, tol: &Tolerances) -> Result<BuiltFrame> {
    params.validate()?;
    let p = params.p as usize;
    let m = (p - 1) / 2;
    let n_planes = p.div_ceil(2);
    let h = hadamard(n_planes)?;
    let residues = quadratic_residues(params.p);
    debug_assert_eq!(residues.len(), m);

    let mut subspaces = Vec::with_capacity(p * n_planes);
    for shift in 0..p {
        #[allow(clippy::needless_range_loop)]
        for j in 0..n_planes {
            let mut rows = Vec::with_capacity(m);
            for (i, &q) in residues.iter().enumerate() {
                let mut v = vec![0.0; p];
                v[(q as usize + shift) % p] = 1.0;
                // rows 1.. of the normalized Hadamard: the all-ones row 0 is
                // skipped so the cross terms cancel over each plane family
                v[((params.k * q) as usize + shift) % p] += params.c * h[i + 1][j];
                rows.push(v);
            }
            subspaces.push(Subspace::from_vectors(&rows, RankPolicy::Strict, tol)?);
        }
    }

    let frame = FusionFrame::new(subspaces, tol)?;
    let cert = certify_equidistance_tight(&frame, tol.tight, tol)?;
    if !cert.positive {
        return Err(Error::ConstructionFailed(format!(
            "quadratic-residue frame for p={} is not an equi-distance tight frame: \
             tight={}, spread={:.3e}, gap={:?}",
            params.p, cert.tight, cert.spread, cert.gap
        )));
    }

    let mut metadata = BTreeMap::new();
    metadata.insert("construction".into(), "quadratic-residue".into());
    metadata.insert("p".into(), params.p.to_string());
    metadata.insert("c".into(), format_f64(params.c));
    metadata.insert("k".into(), params.k.to_string());
    metadata.insert("hadamard_order".into(), n_planes.to_string());
    Ok(BuiltFrame { frame, metadata })
}

// ---- Eisenstein E6* ----

#[derive(Clone, Copy)]
struct C64 {
    re: f64,
    im: f64,
}

const fn c(re: f64, im: f64) -> C64 {
    C64 { re, im }
}

fn omega() -> C64 {
    c(-0.5, 0.75f64.sqrt())
}

fn mul_i(z: C64) -> C64 {
    c(-z.im, z.re)
}

/// The nine selected minimal elements of the complex lattice, as ℂ³ tuples.
fn e6_minimal_vectors() -> Vec<[C64; 3]> {
    let w = omega();
    let one = c(1.0, 0.0);
    let neg = c(-1.0, 0.0);
    let zero = c(0.0, 0.0);
    vec![
        [one, neg, zero],
        [one, zero, neg],
        [zero, one, neg],
        [w, neg, zero],
        [zero, w, neg],
        [neg, zero, w],
        [w, zero, neg],
        [neg, w, zero],
        [zero, neg, w],
    ]
}

fn realify(v: &[C64; 3]) -> Vec<f64> {
    // (Re z1, Im z1, Re z2, Im z2, Re z3, Im z3)
    v.iter().flat_map(|z| [z.re, z.im]).collect()
}

/// Nine two-dimensional planes in ℝ⁶ from the Eisenstein minimal vectors:
/// each complex vector v spans the real plane of {ρ(v), ρ(iv)}. Certified
/// equi-distance tight with bound 3, all principal angles π/3.
pub fn eisenstein_e6_frame(tol: &Tolerances) -> Result<BuiltFrame> {
    let mut subspaces = Vec::with_capacity(9);
    for v in e6_minimal_vectors() {
        let iv = [mul_i(v[0]), mul_i(v[1]), mul_i(v[2])];
        let rows = vec![realify(&v), realify(&iv)];
        subspaces.push(Subspace::from_vectors(&rows, RankPolicy::Strict, tol)?);
    }
    let frame = FusionFrame::new(subspaces, tol)?;
    let cert = certify_equidistance_tight(&frame, tol.tight, tol)?;
    if !cert.positive {
        return Err(Error::ConstructionFailed(format!(
            "E6* frame failed certification: tight={}, spread={:.3e}, gap={:?}",
            cert.tight, cert.spread, cert.gap
        )));
    }
    let mut metadata = BTreeMap::new();
    metadata.insert("construction".into(), "eisenstein-e6".into());
    metadata.insert("lattice".into(), "E6*".into());
    Ok(BuiltFrame { frame, metadata })
}

// ---- E8 ----

// Quaternion coefficient matrix of ω = (−1+i+j+k)/2; the doubled (×2)
// version keeps the arithmetic in integers.
const OMEGA_BLOCK_X2: [[i32; 4]; 4] = [
    [-1, 1, 1, 1],
    [-1, -1, -1, 1],
    [-1, 1, -1, -1],
    [-1, -1, 1, -1],
];

type Doubled = [i32; 8];

/// All 240 minimal vectors of E8 with coordinates doubled: 112 with two
/// entries ±2, 128 with all entries ±1 and coordinate sum divisible by 4.
fn e8_minimal_vectors_doubled() -> Vec<Doubled> {
    let mut out = Vec::with_capacity(240);
    for a in 0..8 {
        for b in (a + 1)..8 {
            for &sa in &[2i32, -2] {
                for &sb in &[2i32, -2] {
                    let mut v = [0i32; 8];
                    v[a] = sa;
                    v[b] = sb;
                    out.push(v);
                }
            }
        }
    }
    for mask in 0u32..256 {
        let mut v = [1i32; 8];
        for (i, entry) in v.iter_mut().enumerate() {
            if mask & (1 << i) != 0 {
                *entry = -1;
            }
        }
        if v.iter().sum::<i32>().rem_euclid(4) == 0 {
            out.push(v);
        }
    }
    out
}

/// `Ω v` on doubled coordinates, exact. The division by 2 is always exact
/// within a block because the four entries share parity.
fn omega_times(v: &Doubled) -> Result<Doubled> {
    let mut out = [0i32; 8];
    for block in 0..2 {
        for i in 0..4 {
            let mut s = 0i32;
            for j in 0..4 {
                s += OMEGA_BLOCK_X2[i][j] * v[4 * block + j];
            }
            if s % 2 != 0 {
                return Err(Error::ConstructionFailed(
                    "E8 lattice is not closed under the Eisenstein action".into(),
                ));
            }
            out[4 * block + i] = s / 2;
        }
    }
    Ok(out)
}

fn negate(v: &Doubled) -> Doubled {
    let mut out = [0i32; 8];
    for (o, x) in out.iter_mut().zip(v) {
        *o = -x;
    }
    out
}

fn add(a: &Doubled, b: &Doubled) -> Doubled {
    let mut out = [0i32; 8];
    for i in 0..8 {
        out[i] = a[i] + b[i];
    }
    out
}

fn halved(v: &Doubled) -> Vec<f64> {
    v.iter().map(|&x| x as f64 / 2.0).collect()
}

/// Forty two-dimensional planes in ℝ⁸: the 240 minimal vectors of E8,
/// partitioned into orbits {±v, ±Ωv, ±(v+Ωv)} of the Eisenstein units, each
/// orbit spanning the plane of {v, Ωv}. Tight with bound 10; distances fall
/// in {2, 4/3} so the frame is equi-dimensional but not equi-distance.
pub fn e8_frame(tol: &Tolerances) -> Result<BuiltFrame> {
    let minimals = e8_minimal_vectors_doubled();
    debug_assert_eq!(minimals.len(), 240);
    let min_set: HashSet<Doubled> = minimals.iter().copied().collect();

    let mut seen: HashSet<Doubled> = HashSet::new();
    let mut orbit_seeds: Vec<(Doubled, Doubled)> = Vec::new();
    for v in &minimals {
        if seen.contains(v) {
            continue;
        }
        let ov = omega_times(v)?;
        let sum = add(v, &ov);
        let orbit = [*v, negate(v), ov, negate(&ov), sum, negate(&sum)];
        for member in &orbit {
            if !min_set.contains(member) {
                return Err(Error::ConstructionFailed(format!(
                    "unit orbit of {v:?} leaves the minimal-vector set at {member:?}"
                )));
            }
            if seen.contains(member) {
                return Err(Error::ConstructionFailed(format!(
                    "unit orbits overlap at {member:?}"
                )));
            }
        }
        seen.extend(orbit);
        orbit_seeds.push((*v, ov));
    }
    if orbit_seeds.len() != 40 || seen.len() != 240 {
        return Err(Error::ConstructionFailed(format!(
            "expected 40 orbits covering 240 vectors, got {} orbits covering {}",
            orbit_seeds.len(),
            seen.len()
        )));
    }

    let mut subspaces = Vec::with_capacity(40);
    for (v, ov) in &orbit_seeds {
        let rows = vec![halved(v), halved(ov)];
        let sub = Subspace::from_vectors(&rows, RankPolicy::Strict, tol).map_err(|e| {
            Error::ConstructionFailed(format!("orbit of {v:?} does not span a plane: {e}"))
        })?;
        subspaces.push(sub);
    }
    let frame = FusionFrame::new(subspaces, tol)?;
    let bounds = frame_bounds(&frame, tol.tight, tol);
    if !bounds.tight || (bounds.upper - 10.0).abs() > 1e-8 {
        return Err(Error::ConstructionFailed(format!(
            "E8 frame is not tight with bound 10: A={:.12}, B={:.12}",
            bounds.lower, bounds.upper
        )));
    }

    let listing: Vec<String> = orbit_seeds
        .iter()
        .map(|(v, ov)| {
            let fmt = |d: &Doubled| {
                d.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            };
            format!("{};{}", fmt(v), fmt(ov))
        })
        .collect();
    let mut metadata = BTreeMap::new();
    metadata.insert("construction".into(), "e8".into());
    metadata.insert("lattice".into(), "E8".into());
    metadata.insert("orbit_seeds_doubled".into(), listing.join("|"));
    Ok(BuiltFrame { frame, metadata })
}

// ---- baselines ----

fn random_orthogonal(n: usize, stream: &mut NormalStream, tol: &Tolerances) -> Result<Matrix> {
    let mut g = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g.set(i, j, stream.standard());
        }
    }
    orthonormalize(&g, tol)
        .map_err(|e| Error::ConstructionFailed(format!("random rotation degenerated: {e}")))
}

/// Partition of the standard basis of ℝ^M into M/m blocks, replicated
/// `copies` times. With `rotate_seed` each copy is rotated by an independent
/// seeded orthogonal matrix. Tight with bound `copies` either way.
pub fn partition_frame(
    ambient: usize,
    m: usize,
    copies: usize,
    rotate_seed: Option<u64>,
    tol: &Tolerances,
) -> Result<BuiltFrame> {
    if m == 0 || ambient == 0 || !ambient.is_multiple_of(m) {
        return Err(Error::InvalidParams(format!(
            "subspace dimension {m} must divide ambient dimension {ambient}"
        )));
    }
    if copies == 0 {
        return Err(Error::InvalidParams("need at least one copy".into()));
    }
    let blocks = ambient / m;
    let mut subspaces = Vec::with_capacity(blocks * copies);
    for copy in 0..copies {
        let rotation = match rotate_seed {
            Some(seed) => {
                let mut stream = NormalStream::for_trial(seed, copy as u64);
                Some(random_orthogonal(ambient, &mut stream, tol)?)
            }
            None => None,
        };
        for b in 0..blocks {
            let rows: Vec<Vec<f64>> = (0..m)
                .map(|r| match &rotation {
                    Some(q) => q.row(b * m + r).to_vec(),
                    None => {
                        let mut v = vec![0.0; ambient];
                        v[b * m + r] = 1.0;
                        v
                    }
                })
                .collect();
            subspaces.push(Subspace::from_vectors(&rows, RankPolicy::Strict, tol)?);
        }
    }
    let frame = FusionFrame::new(subspaces, tol)?;
    let mut metadata = BTreeMap::new();
    metadata.insert("construction".into(), "partition".into());
    metadata.insert("ambient_dim".into(), ambient.to_string());
    metadata.insert("subspace_dim".into(), m.to_string());
    metadata.insert("copies".into(), copies.to_string());
    if let Some(seed) = rotate_seed {
        metadata.insert("rotate_seed".into(), seed.to_string());
    }
    Ok(BuiltFrame { frame, metadata })
}

/// Subspaces spanned by seeded Gaussian rows; deterministic in the seed.
/// A non-tight test fixture, not certified as anything.
pub fn random_frame(
    ambient: usize,
    dims: &[usize],
    seed: u64,
    tol: &Tolerances,
) -> Result<BuiltFrame> {
    if dims.is_empty() {
        return Err(Error::InvalidParams("need at least one subspace".into()));
    }
    for &d in dims {
        if d == 0 || d > ambient {
            return Err(Error::InvalidParams(format!(
                "subspace dimension {d} out of range 1..={ambient}"
            )));
        }
    }
    let mut subspaces = Vec::with_capacity(dims.len());
    for (idx, &d) in dims.iter().enumerate() {
        let mut stream = NormalStream::for_trial(seed, idx as u64);
        let mut g = Matrix::zeros(d, ambient);
        for i in 0..d {
            for j in 0..ambient {
                g.set(i, j, stream.standard());
            }
        }
        subspaces.push(Subspace::from_vectors(
            &(0..d).map(|i| g.row(i).to_vec()).collect::<Vec<_>>(),
            RankPolicy::Strict,
            tol,
        )?);
    }
    let frame = FusionFrame::new(subspaces, tol)?;
    let mut metadata = BTreeMap::new();
    metadata.insert("construction".into(), "random".into());
    metadata.insert("ambient_dim".into(), ambient.to_string());
    metadata.insert(
        "dims".into(),
        dims.iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    metadata.insert("seed".into(), seed.to_string());
    Ok(BuiltFrame { frame, metadata })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{frame_bounds, DistanceTable};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn qr_invalid_primes_rejected() {
        assert!(matches!(QrParams::new(5), Err(Error::InvalidParams(_))));
        assert!(matches!(QrParams::new(11), Err(Error::InvalidParams(_))));
        assert!(matches!(QrParams::new(9), Err(Error::InvalidParams(_))));
        assert!(QrParams::new(3).is_ok());
        assert!(QrParams::new(7).is_ok());
        assert!(QrParams::new(23).is_ok());
    }

    #[test]
    fn qr_default_scale_values() {
        assert!((default_scale(7) - 2.0f64.sqrt()).abs() <= 1e-15);
        let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
        assert!((default_scale(3) - golden).abs() <= 1e-15);
        assert!((default_scale(23).powi(2) - 1.5).abs() <= 1e-15);
    }

    #[test]
    fn qr_p7_reference_values() {
        let built = quadratic_residue_frame(&QrParams::new(7).unwrap(), &tol()).unwrap();
        let f = &built.frame;
        assert_eq!(f.len(), 28);
        assert_eq!(f.common_dim(), Some(3));
        assert_eq!(f.ambient_dim(), 7);
        let b = frame_bounds(f, 1e-9, &tol());
        assert!((b.lower - 12.0).abs() <= 1e-9);
        assert!((b.upper - 12.0).abs() <= 1e-9);
        let t = DistanceTable::compute(f, &tol()).unwrap();
        for (_, _, d) in t.pair_distances() {
            assert!((d - 16.0 / 9.0).abs() <= 1e-9);
        }
        assert_eq!(built.metadata["p"], "7");
    }

    #[test]
    fn qr_p3_is_the_icosahedral_line_packing() {
        let built = quadratic_residue_frame(&QrParams::new(3).unwrap(), &tol()).unwrap();
        let f = &built.frame;
        assert_eq!(f.len(), 6);
        assert_eq!(f.common_dim(), Some(1));
        let b = frame_bounds(f, 1e-9, &tol());
        assert!((b.lower - 2.0).abs() <= 1e-9);
        let t = DistanceTable::compute(f, &tol()).unwrap();
        for (_, _, d) in t.pair_distances() {
            assert!((d - 0.8).abs() <= 1e-9);
        }
    }

    #[test]
    fn qr_wrong_scale_fails_certification() {
        let params = QrParams::new(3).unwrap().with_scale(2.0f64.sqrt());
        assert!(matches!(
            quadratic_residue_frame(&params, &tol()),
            Err(Error::ConstructionFailed(_))
        ));
    }

    #[test]
    fn e6_frame_reference_values() {
        let built = eisenstein_e6_frame(&tol()).unwrap();
        let f = &built.frame;
        assert_eq!(f.len(), 9);
        assert_eq!(f.common_dim(), Some(2));
        assert_eq!(f.ambient_dim(), 6);
        let b = frame_bounds(f, 1e-9, &tol());
        assert!((b.lower - 3.0).abs() <= 1e-9);
        assert!((b.upper - 3.0).abs() <= 1e-9);
    }

    #[test]
    fn e6_realification_layout() {
        let w = omega();
        let v = [w, c(-1.0, 0.0), c(0.0, 0.0)];
        let r = realify(&v);
        let expect = [-0.5, 0.75f64.sqrt(), -1.0, 0.0, 0.0, 0.0];
        for (a, b) in r.iter().zip(&expect) {
            assert!((a - b).abs() <= 1e-15);
        }
    }

    #[test]
    fn e6_minimal_vectors_share_norm() {
        for v in e6_minimal_vectors() {
            let n2: f64 = v.iter().map(|z| z.re * z.re + z.im * z.im).sum();
            assert!((n2 - 2.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn e8_enumeration_and_orbits() {
        let mins = e8_minimal_vectors_doubled();
        assert_eq!(mins.len(), 240);
        for v in &mins {
            assert_eq!(v.iter().map(|x| x * x).sum::<i32>(), 8); // doubled norm
            assert_eq!(v.iter().sum::<i32>().rem_euclid(4), 0);
        }
        let built = e8_frame(&tol()).unwrap();
        assert_eq!(built.frame.len(), 40);
        assert_eq!(built.frame.common_dim(), Some(2));
        assert_eq!(built.metadata["orbit_seeds_doubled"].split('|').count(), 40);
    }

    #[test]
    fn e8_block_and_cross_plane_split() {
        let built = e8_frame(&tol()).unwrap();
        let in_one_block = |s: &Subspace| {
            let head_zero = (0..2).all(|r| s.basis().row(r)[4..].iter().all(|x| x.abs() < 1e-12));
            let tail_zero = (0..2).all(|r| s.basis().row(r)[..4].iter().all(|x| x.abs() < 1e-12));
            head_zero || tail_zero
        };
        let blocks = built.frame.subspaces().iter().filter(|s| in_one_block(s)).count();
        assert_eq!(blocks, 8);
        assert_eq!(built.frame.len() - blocks, 32);
    }

    #[test]
    fn omega_block_satisfies_its_minimal_polynomial() {
        // Ω² + Ω + I = 0, checked on the doubled integer block
        for col in 0..4 {
            let mut v = [0i32; 8];
            v[col] = 2;
            let ov = omega_times(&v).unwrap();
            let oov = omega_times(&ov).unwrap();
            for i in 0..8 {
                assert_eq!(oov[i] + ov[i] + v[i], 0);
            }
        }
    }

    #[test]
    fn partition_frame_cases() {
        let built = partition_frame(4, 2, 1, None, &tol()).unwrap();
        assert_eq!(built.frame.len(), 2);
        let b = frame_bounds(&built.frame, 1e-9, &tol());
        assert!((b.lower - 1.0).abs() <= 1e-12 && b.tight);

        let rot = partition_frame(6, 2, 3, Some(5), &tol()).unwrap();
        assert_eq!(rot.frame.len(), 9);
        let b = frame_bounds(&rot.frame, 1e-9, &tol());
        assert!((b.lower - 3.0).abs() <= 1e-9 && b.tight);
        let t = DistanceTable::compute(&rot.frame, &tol()).unwrap();
        assert!(t.max_distance().unwrap() - t.min_distance().unwrap() > 1e-3);

        assert!(partition_frame(4, 3, 1, None, &tol()).is_err());
    }

    #[test]
    fn random_frame_deterministic() {
        let a = random_frame(3, &[1, 2], 99, &tol()).unwrap();
        let b = random_frame(3, &[1, 2], 99, &tol()).unwrap();
        for (s1, s2) in a.frame.subspaces().iter().zip(b.frame.subspaces()) {
            assert_eq!(s1.basis().data(), s2.basis().data());
        }
        let c = random_frame(3, &[1, 2], 100, &tol()).unwrap();
        assert_ne!(
            a.frame.subspace(0).basis().data(),
            c.frame.subspace(0).basis().data()
        );
        assert!(random_frame(3, &[4], 1, &tol()).is_err());
        assert!(random_frame(3, &[], 1, &tol()).is_err());
    }

    #[test]
    fn random_frame_covers_space_with_enough_dims() {
        for seed in 0..100 {
            let built = random_frame(4, &[2, 2, 1], seed, &tol()).unwrap();
            let b = frame_bounds(&built.frame, 1e-9, &tol());
            assert!(b.is_frame, "seed {seed} produced a degenerate frame");
        }
    }
}
