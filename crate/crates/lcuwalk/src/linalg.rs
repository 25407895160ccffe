//! Small helpers over dense complex matrices.
//!
//! Everything here is a thin wrapper around `ndarray` / LAPACK; the only
//! conventions worth noting are that spectral norms go through singular
//! values and Hermitian eigenproblems are solved with the lower triangle.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eig, Eigh, Norm, SVD, UPLO};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = Array2<Complex64>;
pub type CVec = Array1<Complex64>;

pub const ONE: C64 = Complex64::new(1.0, 0.0);
pub const ZERO: C64 = Complex64::new(0.0, 0.0);
pub const I: C64 = Complex64::new(0.0, 1.0);

/// Conjugate transpose.
pub fn dagger(a: &CMat) -> CMat {
    a.t().mapv(|v| v.conj())
}

/// Identity matrix of dimension `n`.
pub fn eye(n: usize) -> CMat {
    CMat::eye(n)
}

/// Spectral norm (largest singular value). Returns 0 for empty matrices.
pub fn spectral_norm(a: &CMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let (_, s, _) = a.svd(false, false).expect("SVD failed");
    s.iter().cloned().fold(0.0_f64, f64::max)
}

/// Smallest singular value.
pub fn min_singular_value(a: &CMat) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let (_, s, _) = a.svd(false, false).expect("SVD failed");
    s.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// ‖A†A − I‖ in the spectral norm.
pub fn unitarity_residual(a: &CMat) -> f64 {
    let n = a.ncols();
    let mut g = dagger(a).dot(a);
    for i in 0..n {
        g[[i, i]] -= ONE;
    }
    spectral_norm(&g)
}

/// Eigenvalues and orthonormal eigenvectors of a Hermitian matrix.
///
/// Returns `(values ascending, vectors as columns)`.
///
/// The backend hands a row-major buffer to column-major LAPACK, which
/// therefore diagonalizes the transpose (= the conjugate, for Hermitian
/// input); conjugating the returned vectors restores the eigenvectors of the
/// logical matrix. A regression test pins this behavior.
pub fn eigh(a: &CMat) -> Result<(Array1<f64>, CMat)> {
    let c_layout = a.as_standard_layout().to_owned();
    let (vals, vecs) = c_layout.eigh(UPLO::Lower)?;
    Ok((vals, vecs.mapv(|v| v.conj())))
}

/// Eigenvalues of a general (here: unitary) complex matrix.
pub fn eigvals(a: &CMat) -> Result<CVec> {
    let (vals, _) = a.eig()?;
    Ok(vals)
}

/// Apply an analytic function to a Hermitian matrix through its
/// eigendecomposition, clamping eigenvalues to `[lo, hi]` first.
///
/// Clamping absorbs roundoff that pushes eigenvalues of products like Z†Z
/// marginally outside their algebraic range.
pub fn hermitian_fn(a: &CMat, lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> Result<CMat> {
    let (vals, vecs) = eigh(a)?;
    let fv: Array1<C64> = vals.mapv(|x| C64::new(f(x.clamp(lo, hi)), 0.0));
    let mut scaled = vecs.clone();
    for (j, col) in scaled.columns_mut().into_iter().enumerate() {
        let s = fv[j];
        for v in col {
            *v *= s;
        }
    }
    Ok(scaled.dot(&dagger(&vecs)))
}

/// Frobenius norm.
pub fn fro_norm(a: &CMat) -> f64 {
    a.norm_l2()
}

/// Kronecker product a ⊗ b.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = CMat::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            let v = a[[i, j]];
            if v == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[[i * br + k, j * bc + l]] = v * b[[k, l]];
                }
            }
        }
    }
    out
}

/// Max entrywise absolute difference.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.dim(), b.dim());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Random complex vector with i.i.d. standard Gaussian parts, normalized.
pub fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> CVec {
    let mut v = CVec::zeros(dim);
    for x in v.iter_mut() {
        *x = C64::new(gaussian(rng), gaussian(rng));
    }
    let n = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    v.mapv(|x| x / n)
}

/// Haar-like random unitary: QR of a complex Gaussian matrix with the phase
/// convention that makes the factorization unique.
pub fn random_unitary(rng: &mut ChaCha8Rng, dim: usize) -> CMat {
    let mut g = CMat::zeros((dim, dim));
    for x in g.iter_mut() {
        *x = C64::new(gaussian(rng), gaussian(rng));
    }
    let (q, _) = gram_schmidt(&g).expect("Gaussian matrix should have full rank");
    q
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller on the half-open unit interval.
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Modified Gram-Schmidt with reorthogonalization.
///
/// Returns `(Q, kept)` where the columns of `Q` are an orthonormal basis of
/// the column span of `a` and `kept[i]` is the index of the source column.
/// Columns whose residual drops below `1e-10` of the largest column norm are
/// dropped, so the result is rank-revealing enough for exact subspaces.
pub fn gram_schmidt(a: &CMat) -> Result<(CMat, Vec<usize>)> {
    let (rows, cols) = a.dim();
    let mut q: Vec<CVec> = Vec::new();
    let mut kept = Vec::new();
    let scale = a
        .columns()
        .into_iter()
        .map(|c| c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt())
        .fold(0.0_f64, f64::max);
    if scale == 0.0 {
        return Err(Error::Numeric("gram_schmidt of zero matrix".into()));
    }
    for j in 0..cols {
        let mut v: CVec = a.column(j).to_owned();
        for _ in 0..2 {
            for u in &q {
                let overlap: C64 = u.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum();
                v.zip_mut_with(u, |vi, ui| *vi -= overlap * ui);
            }
        }
        let n = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-10 * scale {
            q.push(v.mapv(|x| x / n));
            kept.push(j);
        }
    }
    let mut out = CMat::zeros((rows, q.len()));
    for (j, col) in q.iter().enumerate() {
        out.column_mut(j).assign(col);
    }
    Ok((out, kept))
}

/// Orthonormal basis of the column span of a tall panel, through the
/// eigendecomposition of the Gram matrix.
///
/// Columns whose Gram eigenvalue falls below `tol²` (relative to the largest)
/// are treated as dependent and dropped. All heavy work happens in two
/// LAPACK-sized operations, so this stays fast on tall panels where
/// column-by-column orthogonalization would not.
pub fn orthonormal_columns(panel: &CMat, tol: f64) -> Result<CMat> {
    let gram = dagger(panel).dot(panel);
    let (vals, vecs) = eigh(&gram)?;
    let top = vals.iter().cloned().fold(0.0_f64, f64::max);
    if top <= 0.0 {
        return Err(Error::Numeric("orthonormalization of a zero panel".into()));
    }
    let cut = top * tol * tol;
    let keep: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > cut).collect();
    let mut mixing = CMat::zeros((vals.len(), keep.len()));
    for (j, &i) in keep.iter().enumerate() {
        let scale = C64::new(1.0 / vals[i].sqrt(), 0.0);
        for r in 0..vals.len() {
            mixing[[r, j]] = vecs[[r, i]] * scale;
        }
    }
    Ok(panel.dot(&mixing))
}

/// Deterministic RNG used throughout the crate: ChaCha8 keyed by the 64-bit
/// seed written little-endian into all four 8-byte lanes of the key.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    let mut key = [0u8; 32];
    for lane in 0..4 {
        key[lane * 8..(lane + 1) * 8].copy_from_slice(&seed.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_has_zero_residual() {
        let mut rng = seeded_rng(3);
        let u = random_unitary(&mut rng, 6);
        assert!(unitarity_residual(&u) < 1e-12);
    }

    #[test]
    fn spectral_norm_of_diagonal() {
        let mut a = CMat::zeros((2, 2));
        a[[0, 0]] = C64::new(3.0, 0.0);
        a[[1, 1]] = C64::new(-4.0, 0.0);
        assert!((spectral_norm(&a) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn gram_schmidt_drops_dependent_columns() {
        let mut a = CMat::zeros((3, 2));
        a[[0, 0]] = ONE;
        a[[0, 1]] = C64::new(2.0, 0.0);
        let (q, kept) = gram_schmidt(&a).unwrap();
        assert_eq!(q.ncols(), 1);
        assert_eq!(kept, vec![0]);
    }

    #[test]
    fn hermitian_fn_square_root() {
        let mut a = CMat::zeros((2, 2));
        a[[0, 0]] = C64::new(4.0, 0.0);
        a[[1, 1]] = C64::new(9.0, 0.0);
        let r = hermitian_fn(&a, 0.0, f64::INFINITY, f64::sqrt).unwrap();
        assert!((r[[0, 0]].re - 2.0).abs() < 1e-12);
        assert!((r[[1, 1]].re - 3.0).abs() < 1e-12);
    }

    #[test]
    fn eigh_returns_true_eigenvectors_of_complex_hermitian() {
        // Regression: the raw backend returns vectors of the conjugate for
        // row-major complex input; the wrapper must hand back vectors that
        // satisfy A v = lambda v for the logical matrix.
        let mut a = CMat::zeros((3, 3));
        a[[0, 0]] = C64::new(0.3, 0.0);
        a[[0, 1]] = C64::new(0.2, 0.7);
        a[[1, 0]] = C64::new(0.2, -0.7);
        a[[1, 2]] = C64::new(-0.4, 0.1);
        a[[2, 1]] = C64::new(-0.4, -0.1);
        a[[2, 2]] = C64::new(-0.9, 0.0);
        let (vals, vecs) = eigh(&a).unwrap();
        for i in 0..3 {
            let v: CVec = vecs.column(i).to_owned();
            let resid: CVec = &a.dot(&v) - &v.mapv(|x| x * C64::new(vals[i], 0.0));
            let r = resid.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            assert!(r < 1e-13, "eigenpair {i} residual {r}");
        }
    }

    #[test]
    fn seeded_rng_is_reproducible() {
        let mut a = seeded_rng(42);
        let mut b = seeded_rng(42);
        assert_eq!(a.random::<u64>(), b.random::<u64>());
    }
}
