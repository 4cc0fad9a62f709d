//! Spectral decomposition of self-adjoint matrices over `K`, matrix
//! functions, and the polar-type factorization `B = A·exp(−Z)`.
//!
//! The eigensolver is a cyclic Jacobi method that works uniformly over the
//! three fields: before each rotation the off-diagonal entry `X_pq` is made
//! real and positive by a diagonal unit-scalar similarity, after which the
//! step is the classical real 2×2 rotation.

use std::cmp::Ordering;

use num_complex::Complex64;

use crate::algebra::{Quaternion, Scalar};
use crate::error::{Error, Result};
use crate::matk::{KMatrix, ToleranceConfig};

pub const MAX_SWEEPS: usize = 60;

/// Sweeps stop once the off-diagonal Frobenius norm is below this fraction of `‖X‖_F`.
pub const JACOBI_OFF_TOL: f64 = 1e-12;

/// Number of Taylor terms used on the scaled matrix in [`exp_matrix`].
pub const EXP_TAYLOR_TERMS: usize = 18;

/// `X = Q·diag(lambda)·Q*` with `Q` an isometry and `lambda` ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition<S: Scalar> {
    pub q: KMatrix<S>,
    pub lambda: Vec<f64>,
}

impl<S: Scalar> SpectralDecomposition<S> {
    /// `Q·diag(f(λ))·Q*`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> KMatrix<S> {
        let k = self.lambda.len();
        let fl: Vec<f64> = self.lambda.iter().map(|&l| f(l)).collect();
        let qf = KMatrix::from_fn(self.q.rows(), k, |i, j| self.q.get(i, j).scale(fl[j]));
        qf.matmul(&self.q.adjoint()).expect("compatible shapes")
    }

    pub fn reconstruct(&self) -> KMatrix<S> {
        self.apply_fn(|l| l)
    }

    /// Orthogonal projector onto the sum of eigenspaces with eigenvalue in `[lo, hi]`.
    pub fn projector(&self, lo: f64, hi: f64) -> KMatrix<S> {
        self.apply_fn(|l| if l >= lo && l <= hi { 1.0 } else { 0.0 })
    }
}

/// `B = A·exp(−Z)` with `A` an isometric embedding and `Z` self-adjoint.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarFactorization<S: Scalar> {
    pub a: KMatrix<S>,
    pub z: KMatrix<S>,
}

impl<S: Scalar> PolarFactorization<S> {
    /// `A·exp(−Z)`.
    pub fn recombine(&self, tol: &ToleranceConfig) -> Result<KMatrix<S>> {
        let e = exp_selfadjoint(&self.z.neg(), tol)?;
        self.a.matmul(&e)
    }
}

/// Spectral decomposition of a self-adjoint matrix.
pub fn eigh<S: Scalar>(x: &KMatrix<S>, tol: &ToleranceConfig) -> Result<SpectralDecomposition<S>> {
    if !x.is_square() {
        return Err(Error::DimensionMismatch { op: "eigh", detail: format!("{:?} is not square", x.shape()) });
    }
    let residual = x.self_adjoint_residual();
    if residual > tol.eps_iso * x.norm_max() {
        return Err(Error::NotSelfAdjoint { residual });
    }
    let n = x.rows();
    let mut a = x.add(&x.adjoint())?.real_scale(0.5);
    let mut q = KMatrix::<S>::identity(n);
    jacobi_sweeps(&mut a, &mut q)?;

    let mut pairs: Vec<(f64, Vec<S>)> = (0..n)
        .map(|j| {
            let mut col = q.column(j);
            canonicalize_phase(&mut col);
            (a.get(j, j).re(), col)
        })
        .collect();
    pairs.sort_by(|(la, ca), (lb, cb)| la.total_cmp(lb).then_with(|| compare_columns(cb, ca)));

    let lambda = pairs.iter().map(|(l, _)| *l).collect();
    let q = KMatrix::from_fn(n, n, |i, j| pairs[j].1[i]);
    Ok(SpectralDecomposition { q, lambda })
}

fn off_diagonal_norm<S: Scalar>(a: &KMatrix<S>) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.get(i, j).norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi_sweeps<S: Scalar>(a: &mut KMatrix<S>, q: &mut KMatrix<S>) -> Result<()> {
    let n = a.rows();
    let scale = a.norm_fro();
    if scale == 0.0 {
        return Ok(());
    }
    for i in 0..n {
        let d = S::from_real(a.get(i, i).re());
        a.set(i, i, d);
    }
    for _sweep in 0..MAX_SWEEPS {
        if off_diagonal_norm(a) <= JACOBI_OFF_TOL * scale {
            return Ok(());
        }
        for p in 0..n {
            for r in p + 1..n {
                rotate(a, q, p, r);
            }
        }
    }
    let off = off_diagonal_norm(a);
    if off <= JACOBI_OFF_TOL * scale {
        Ok(())
    } else {
        Err(Error::NoConvergence { sweeps: MAX_SWEEPS, off })
    }
}

/// One Jacobi step annihilating `a[p][r]`.
fn rotate<S: Scalar>(a: &mut KMatrix<S>, q: &mut KMatrix<S>, p: usize, r: usize) {
    let n = a.rows();
    let apr = a.get(p, r);
    let b = apr.norm();
    if b == 0.0 || !b.is_finite() {
        return;
    }
    // Diagonal similarity with d_r = conj(u), u = a_pr/|a_pr|, makes a_pr real.
    let u = apr.scale(1.0 / b);
    let d = u.conj();
    for i in 0..n {
        let v = a.get(i, r) * d;
        a.set(i, r, v);
    }
    for j in 0..n {
        let v = u * a.get(r, j);
        a.set(r, j, v);
    }
    q.scale_column_right(r, d);
    a.set(p, r, S::from_real(b));
    a.set(r, p, S::from_real(b));
    let app = a.get(p, p).re();
    let arr = a.get(r, r).re();
    a.set(r, r, S::from_real(arr));

    let theta = (arr - app) / (2.0 * b);
    let t = if theta.is_finite() {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    } else {
        0.0
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for i in 0..n {
        let (x, y) = (a.get(i, p), a.get(i, r));
        a.set(i, p, x.scale(c) - y.scale(s));
        a.set(i, r, x.scale(s) + y.scale(c));
    }
    for j in 0..n {
        let (x, y) = (a.get(p, j), a.get(r, j));
        a.set(p, j, x.scale(c) - y.scale(s));
        a.set(r, j, x.scale(s) + y.scale(c));
    }
    for i in 0..q.rows() {
        let (x, y) = (q.get(i, p), q.get(i, r));
        q.set(i, p, x.scale(c) - y.scale(s));
        q.set(i, r, x.scale(s) + y.scale(c));
    }
    a.set(p, r, S::zero());
    a.set(r, p, S::zero());
    a.set(p, p, S::from_real(app - t * b));
    a.set(r, r, S::from_real(arr + t * b));
}

/// Right-multiplies by a unit scalar so that the first entry of largest norm is real positive.
fn canonicalize_phase<S: Scalar>(col: &mut [S]) {
    let max = col.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let lead = col.iter().copied().find(|x| x.norm() >= max * (1.0 - 1e-12)).expect("max attained");
    let u = lead.conj().scale(1.0 / lead.norm());
    for x in col.iter_mut() {
        *x = *x * u;
    }
}

/// Lexicographic order on real coefficients; ties in `eigh` put the larger column first.
fn compare_columns<S: Scalar>(a: &[S], b: &[S]) -> Ordering {
    let d = S::real_dim();
    for (x, y) in a.iter().zip(b) {
        for c in 0..d {
            let o = x.coeff(c).total_cmp(&y.coeff(c));
            if o != Ordering::Equal {
                return o;
            }
        }
    }
    Ordering::Equal
}

/// Matrix exponential by scaling and squaring a truncated Taylor series.
pub fn exp_matrix<S: Scalar>(m: &KMatrix<S>) -> Result<KMatrix<S>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { op: "exp_matrix", detail: format!("{:?} is not square", m.shape()) });
    }
    let n = m.rows();
    let norm = m.norm_one();
    let mut squarings = 0u32;
    while norm / 2f64.powi(squarings as i32) > 0.5 {
        squarings += 1;
    }
    let scaled = m.real_scale(1.0 / 2f64.powi(squarings as i32));
    let mut term = KMatrix::<S>::identity(n);
    let mut sum = term.clone();
    for k in 1..EXP_TAYLOR_TERMS {
        term = term.matmul(&scaled)?.real_scale(1.0 / k as f64);
        sum = sum.add(&term)?;
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum)?;
    }
    Ok(sum)
}

/// `exp(Z)` for self-adjoint `Z`, through the spectral decomposition.
pub fn exp_selfadjoint<S: Scalar>(z: &KMatrix<S>, tol: &ToleranceConfig) -> Result<KMatrix<S>> {
    Ok(eigh(z, tol)?.apply_fn(f64::exp))
}

fn posdef_decomposition<S: Scalar>(p: &KMatrix<S>, tol: &ToleranceConfig) -> Result<SpectralDecomposition<S>> {
    let sd = eigh(p, tol)?;
    let max = sd.lambda.iter().copied().fold(0.0, f64::max);
    let min = sd.lambda.first().copied().unwrap_or(1.0);
    if sd.lambda.is_empty() {
        return Ok(sd);
    }
    if !(max > 0.0 && min > tol.eps_rank * max) {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
    }
    Ok(sd)
}

/// Logarithm of a positive-definite self-adjoint matrix.
pub fn log_posdef<S: Scalar>(p: &KMatrix<S>, tol: &ToleranceConfig) -> Result<KMatrix<S>> {
    Ok(posdef_decomposition(p, tol)?.apply_fn(f64::ln))
}

/// The positive-definite square root of a positive-definite self-adjoint matrix.
pub fn sqrt_posdef<S: Scalar>(p: &KMatrix<S>, tol: &ToleranceConfig) -> Result<KMatrix<S>> {
    Ok(posdef_decomposition(p, tol)?.apply_fn(f64::sqrt))
}

/// Factors an injective `B` as `A·exp(−Z)`: `A = B·sqrt(B*B)⁻¹`, `Z = −½·log(B*B)`.
pub fn polar_factor<S: Scalar>(b: &KMatrix<S>, tol: &ToleranceConfig) -> Result<PolarFactorization<S>> {
    let k = b.cols();
    let rank = b.rank(tol);
    if rank < k {
        return Err(Error::RankDeficient { rank, expected: k });
    }
    let gram = b.adjoint().matmul(b)?;
    let gram = gram.add(&gram.adjoint())?.real_scale(0.5);
    let sd = posdef_decomposition(&gram, tol)?;
    let inv_sqrt = sd.apply_fn(|l| 1.0 / l.sqrt());
    let a = b.matmul(&inv_sqrt)?;
    let z = sd.apply_fn(|l| -0.5 * l.ln());
    Ok(PolarFactorization { a, z })
}

/// The complex adjoint matrix of a quaternionic matrix: writing `Q = A + B·j`
/// with complex `A`, `B`, it is `[[A, B], [−conj(B), conj(A)]]`. This is an
/// injective ring homomorphism compatible with adjoints, so a self-adjoint `Q`
/// maps to a Hermitian matrix whose spectrum is that of `Q` with every
/// multiplicity doubled.
pub fn complex_adjoint_matrix(x: &KMatrix<Quaternion>) -> KMatrix<Complex64> {
    let (r, c) = x.shape();
    KMatrix::from_fn(2 * r, 2 * c, |i, j| {
        let q = x.get(i % r, j % c);
        let z1 = Complex64::new(q.re, q.i);
        let z2 = Complex64::new(q.j, q.k);
        match (i < r, j < c) {
            (true, true) => z1,
            (true, false) => z2,
            (false, true) => -z2.conj(),
            (false, false) => z1.conj(),
        }
    })
}
