#![allow(dead_code)]

use kstiefel::{Field, KMatrix, Scalar};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Complex matrix representing `m` as a complex-linear map: the matrix itself
/// for R and C, and for H the block form `[[A, B], [-conj B, conj A]]` of
/// `A + B j`, built from the raw coefficients.
pub fn complex_form<S: Scalar>(m: &KMatrix<S>) -> DMatrix<Complex64> {
    let (r, c) = m.shape();
    match S::FIELD {
        Field::R => DMatrix::from_fn(r, c, |i, j| Complex64::new(m.get(i, j).coeff(0), 0.0)),
        Field::C => DMatrix::from_fn(r, c, |i, j| Complex64::new(m.get(i, j).coeff(0), m.get(i, j).coeff(1))),
        Field::H => DMatrix::from_fn(2 * r, 2 * c, |i, j| {
            let q = m.get(i % r, j % c);
            let a = Complex64::new(q.coeff(0), q.coeff(1));
            let b = Complex64::new(q.coeff(2), q.coeff(3));
            match (i < r, j < c) {
                (true, true) => a,
                (true, false) => b,
                (false, true) => -b.conj(),
                (false, false) => a.conj(),
            }
        }),
    }
}

/// How many times the complex form repeats each singular value or eigenvalue.
pub fn multiplicity(field: Field) -> usize {
    if field == Field::H {
        2
    } else {
        1
    }
}

/// K-rank from the singular values of the complex form.
pub fn oracle_rank<S: Scalar>(m: &KMatrix<S>, threshold: f64) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    let sv = complex_form(m).singular_values();
    sv.iter().filter(|&&s| s > threshold).count() / multiplicity(S::FIELD)
}

/// Sorted eigenvalues of a self-adjoint matrix, via the complex form.
pub fn oracle_eigenvalues<S: Scalar>(m: &KMatrix<S>) -> Vec<f64> {
    let mut ev: Vec<f64> = complex_form(m).symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Real rank of a family of real vectors, from the diagonal of a column-pivoted QR.
pub fn real_rank(vectors: &[Vec<f64>], threshold: f64) -> usize {
    if vectors.is_empty() || vectors[0].is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(vectors[0].len(), vectors.len(), |i, j| vectors[j][i]);
    let r = m.col_piv_qr().unpack_r();
    (0..r.nrows().min(r.ncols())).filter(|&i| r[(i, i)].abs() > threshold).count()
}
