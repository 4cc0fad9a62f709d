//! Dense matrices over `K` acting on right `K`-vector spaces.
//!
//! A `rows × cols` matrix `M` is the right-linear map `K^cols → K^rows` given
//! by `(Mv)_i = Σ_j M_ij v_j`. Because entries multiply from the left, the map
//! commutes with right scalar multiplication; only real scalars may multiply
//! a matrix, so [`KMatrix::real_scale`] is the one scaling operation exposed.
//!
//! All elimination routines apply row operations by left multiplication.

use std::fmt;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::algebra::{Field, GaloisElement, Scalar};
use crate::error::{Error, Result};

/// Tolerances for isometry tests and numerical rank.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Bound on `‖A*A − I‖_max` for an isometry.
    pub eps_iso: f64,
    /// Relative pivot threshold for rank decisions.
    pub eps_rank: f64,
}

impl ToleranceConfig {
    pub fn new(eps_iso: f64, eps_rank: f64) -> Result<Self> {
        if !(eps_iso > 0.0 && eps_rank > 0.0) {
            return Err(Error::InvalidInput("tolerances must be strictly positive".into()));
        }
        Ok(ToleranceConfig { eps_iso, eps_rank })
    }

    pub fn uniform(eps: f64) -> Result<Self> {
        Self::new(eps, eps)
    }
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig { eps_iso: 1e-8, eps_rank: 1e-8 }
    }
}

#[derive(Clone, PartialEq)]
pub struct KMatrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> fmt::Debug for KMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "KMatrix<{}> {}x{} [", S::FIELD, self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl<S: Scalar> KMatrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        KMatrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    /// The first-summand inclusion `K^n → K^(n+m)`.
    pub fn inclusion(n: usize, m: usize) -> Self {
        Self::from_fn(n + m, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        KMatrix { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "from_row_major",
                detail: format!("{} entries for a {rows}x{cols} matrix", data.len()),
            });
        }
        Ok(KMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch { op: "from_rows", detail: "ragged rows".into() });
        }
        Ok(KMatrix { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn diag(values: &[S]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i] } else { S::zero() })
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { S::from_real(values[i]) } else { S::zero() })
    }

    pub fn column_vector(values: &[S]) -> Self {
        KMatrix { rows: values.len(), cols: 1, data: values.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn field(&self) -> Field {
        S::FIELD
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> S {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    pub fn map(&self, f: impl Fn(S) -> S) -> Self {
        KMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    fn check_same_shape(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                op,
                detail: format!("{:?} vs {:?}", self.shape(), other.shape()),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "add")?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect();
        Ok(KMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "sub")?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect();
        Ok(KMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn real_scale(&self, c: f64) -> Self {
        self.map(|x| x.scale(c))
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "matmul",
                detail: format!("{:?} times {:?}", self.shape(), other.shape()),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == S::zero() {
                    continue;
                }
                let brow = other.row(l);
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Entrywise application of an automorphism of `K`.
    pub fn galois_map(&self, g: &GaloisElement) -> Result<Self> {
        let data = self.data.iter().map(|x| x.apply_galois(g)).collect::<Result<Vec<_>>>()?;
        Ok(KMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn norm_max(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other, "max_abs_diff")?;
        Ok(self.data.iter().zip(&other.data).map(|(&a, &b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// Rows `start..end` as a new matrix.
    pub fn row_block(&self, start: usize, end: usize) -> Self {
        KMatrix { rows: end - start, cols: self.cols, data: self.data[start * self.cols..end * self.cols].to_vec() }
    }

    pub fn col_block(&self, start: usize, end: usize) -> Self {
        Self::from_fn(self.rows, end - start, |i, j| self.get(i, start + j))
    }

    pub fn vstack(top: &Self, bottom: &Self) -> Result<Self> {
        if top.cols != bottom.cols {
            return Err(Error::DimensionMismatch {
                op: "vstack",
                detail: format!("{} vs {} columns", top.cols, bottom.cols),
            });
        }
        let mut data = top.data.clone();
        data.extend_from_slice(&bottom.data);
        Ok(KMatrix { rows: top.rows + bottom.rows, cols: top.cols, data })
    }

    pub fn hstack(left: &Self, right: &Self) -> Result<Self> {
        if left.rows != right.rows {
            return Err(Error::DimensionMismatch {
                op: "hstack",
                detail: format!("{} vs {} rows", left.rows, right.rows),
            });
        }
        Ok(Self::from_fn(left.rows, left.cols + right.cols, |i, j| {
            if j < left.cols {
                left.get(i, j)
            } else {
                right.get(i, j - left.cols)
            }
        }))
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::from_fn(self.rows + other.rows, self.cols + other.cols, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j)
            } else if i >= self.rows && j >= self.cols {
                other.get(i - self.rows, j - self.cols)
            } else {
                S::zero()
            }
        })
    }

    /// Multiplies column `j` on the right by `u`.
    pub(crate) fn scale_column_right(&mut self, j: usize, u: S) {
        for i in 0..self.rows {
            let v = self.get(i, j) * u;
            self.set(i, j, v);
        }
    }

    /// `‖M − M*‖_max` for square matrices.
    pub fn self_adjoint_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols.min(self.rows) {
                r = r.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        r
    }

    /// `‖M + M*‖_max` for square matrices.
    pub fn skew_adjoint_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols.min(self.rows) {
                r = r.max((self.get(i, j) + self.get(j, i).conj()).norm());
            }
        }
        r
    }

    /// Largest entry of `|M*M − I|`.
    pub fn isometry_residual(&self) -> f64 {
        let g = self.adjoint().matmul(self).expect("compatible shapes");
        g.max_abs_diff(&Self::identity(self.cols)).expect("square")
    }

    pub fn is_isometry(&self, tol: &ToleranceConfig) -> bool {
        self.isometry_residual() <= tol.eps_iso
    }

    /// `(X, Z)` with `X = (M − M*)/2` skew-adjoint and `Z = (M + M*)/2` self-adjoint.
    pub fn skew_self_split(&self) -> Result<(Self, Self)> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { op: "skew_self_split", detail: "matrix must be square".into() });
        }
        let adj = self.adjoint();
        let x = self.sub(&adj)?.real_scale(0.5);
        let z = self.add(&adj)?.real_scale(0.5);
        Ok((x, z))
    }

    /// Inverse by Gauss–Jordan elimination with partial pivoting on entry norm.
    pub fn gauss_inverse(&self, tol: &ToleranceConfig) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { op: "gauss_inverse", detail: "matrix must be square".into() });
        }
        let n = self.rows;
        let threshold = tol.eps_rank * self.norm_max();
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let (p, pivot_norm) = (c..n)
                .map(|r| (r, a.get(r, c).norm()))
                .fold((c, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if !(pivot_norm > threshold) || pivot_norm == 0.0 {
                return Err(Error::Singular { pivot: pivot_norm.max(0.0), threshold });
            }
            a.swap_rows(c, p);
            inv.swap_rows(c, p);
            let pinv = a.get(c, c).inv();
            a.left_scale_row(c, pinv);
            inv.left_scale_row(c, pinv);
            for r in 0..n {
                if r == c {
                    continue;
                }
                let l = a.get(r, c);
                if l == S::zero() {
                    continue;
                }
                a.sub_left_multiple(r, c, l);
                inv.sub_left_multiple(r, c, l);
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn left_scale_row(&mut self, r: usize, s: S) {
        for j in 0..self.cols {
            let v = s * self.get(r, j);
            self.set(r, j, v);
        }
    }

    /// `row_r ← row_r − l · row_p`.
    fn sub_left_multiple(&mut self, r: usize, p: usize, l: S) {
        for j in 0..self.cols {
            let v = self.get(r, j) - l * self.get(p, j);
            self.set(r, j, v);
        }
    }

    /// Elimination with complete pivoting; records every pivot norm.
    pub fn rank_profile(&self, tol: &ToleranceConfig) -> RankProfile {
        self.rank_profile_at(tol.eps_rank * self.norm_max())
    }

    /// Elimination with complete pivoting against an absolute pivot threshold.
    pub fn rank_profile_at(&self, threshold: f64) -> RankProfile {
        let mut a = self.clone();
        let mut col_order: Vec<usize> = (0..self.cols).collect();
        let mut pivots = Vec::new();
        let steps = self.rows.min(self.cols);
        let mut rank = 0;
        for step in 0..steps {
            let mut best = (step, step, -1.0);
            for r in step..a.rows {
                for (ci, &c) in col_order.iter().enumerate().skip(step) {
                    let v = a.get(r, c).norm();
                    if v > best.2 {
                        best = (r, ci, v);
                    }
                }
            }
            let (pr, pc, pnorm) = best;
            pivots.push(pnorm);
            if !(pnorm > threshold) || pnorm == 0.0 {
                break;
            }
            rank += 1;
            a.swap_rows(step, pr);
            col_order.swap(step, pc);
            let c = col_order[step];
            let pinv = a.get(step, c).inv();
            for r in step + 1..a.rows {
                let l = a.get(r, c) * pinv;
                if l == S::zero() {
                    continue;
                }
                a.sub_left_multiple(r, step, l);
                a.set(r, c, S::zero());
            }
        }
        RankProfile { rank, pivots, threshold }
    }

    pub fn rank(&self, tol: &ToleranceConfig) -> usize {
        self.rank_profile(tol).rank
    }

    /// Orthonormal basis of the column space by modified Gram–Schmidt with a
    /// second orthogonalization pass, in natural column order.
    pub fn image_orthobasis(&self, tol: &ToleranceConfig) -> Self {
        let scale = (0..self.cols).map(|j| column_norm(&self.column(j))).fold(0.0, f64::max);
        self.image_orthobasis_at(tol.eps_rank * scale)
    }

    /// As [`image_orthobasis`](Self::image_orthobasis), dropping residual columns of norm at most `threshold`.
    pub fn image_orthobasis_at(&self, threshold: f64) -> Self {
        let mut basis: Vec<Vec<S>> = Vec::new();
        for j in 0..self.cols {
            let mut v = self.column(j);
            for _pass in 0..2 {
                for q in &basis {
                    // v ← v − q [q, v]
                    let c = inner(q, &v);
                    for (vi, &qi) in v.iter_mut().zip(q) {
                        *vi -= qi * c;
                    }
                }
            }
            let nv = column_norm(&v);
            if nv > threshold && nv > 0.0 {
                basis.push(v.into_iter().map(|x| x.scale(1.0 / nv)).collect());
            }
        }
        Self::from_fn(self.rows, basis.len(), |i, j| basis[j][i])
    }

    /// Orthonormal basis of `ker(M)`, as the complement of `im(M*)`.
    pub fn kernel_basis(&self, tol: &ToleranceConfig) -> Self {
        let row_space = self.adjoint().image_orthobasis(tol);
        let full = KMatrix::hstack(&row_space, &Self::identity(self.cols))
            .expect("same rows")
            .image_orthobasis(tol);
        full.col_block(row_space.cols(), full.cols())
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| S::sample(rng))
    }

    /// A random `n × k` isometric embedding, orthonormalizing a Gaussian matrix.
    pub fn random_isometry<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::DimensionMismatch { op: "random_isometry", detail: format!("k = {k} > n = {n}") });
        }
        let tol = ToleranceConfig::default();
        for _ in 0..16 {
            let q = Self::random(rng, n, k).image_orthobasis(&tol);
            if q.cols() == k {
                return Ok(q);
            }
        }
        Err(Error::InvalidInput("random_isometry: repeated degenerate draws".into()))
    }

    /// Skew-adjoint matrix with independent standard-normal free coefficients.
    pub fn random_skew<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Self {
        let coords: Vec<f64> = (0..dim_ad(S::FIELD, k)).map(|_| rng.sample(StandardNormal)).collect();
        Self::from_ad_coords(k, &coords)
    }

    /// Self-adjoint matrix with independent standard-normal free coefficients.
    pub fn random_selfadjoint<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Self {
        let coords: Vec<f64> = (0..dim_sa(S::FIELD, k)).map(|_| rng.sample(StandardNormal)).collect();
        Self::from_sa_coords(k, &coords)
    }

    /// Free real coordinates of a skew-adjoint matrix: each strict upper entry in
    /// full, then the imaginary parts of each diagonal entry, row by row.
    pub fn ad_coords(&self) -> Vec<f64> {
        hermitian_coords(self, true)
    }

    pub fn sa_coords(&self) -> Vec<f64> {
        hermitian_coords(self, false)
    }

    pub fn from_ad_coords(k: usize, coords: &[f64]) -> Self {
        from_hermitian_coords(k, coords, true)
    }

    pub fn from_sa_coords(k: usize, coords: &[f64]) -> Self {
        from_hermitian_coords(k, coords, false)
    }

    /// All real coefficients, row-major, `real_dim` per entry.
    pub fn real_coords(&self) -> Vec<f64> {
        let d = S::real_dim();
        self.data.iter().flat_map(|x| (0..d).map(move |c| x.coeff(c))).collect()
    }

    pub fn from_real_coords(rows: usize, cols: usize, coords: &[f64]) -> Self {
        let d = S::real_dim();
        Self::from_fn(rows, cols, |i, j| {
            let base = (i * cols + j) * d;
            S::from_coeffs(&coords[base..base + d])
        })
    }

    /// `{"field", "rows", "cols", "entries"}`.
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> =
            (0..self.rows).map(|i| Value::Array(self.row(i).iter().map(|x| x.to_json()).collect())).collect();
        json!({ "field": S::FIELD, "rows": self.rows, "cols": self.cols, "entries": entries })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::InvalidInput("matrix must be a JSON object".into()))?;
        if let Some(f) = obj.get("field") {
            let field: Field = f
                .as_str()
                .ok_or_else(|| Error::InvalidInput("\"field\" must be a string".into()))?
                .parse()?;
            if field != S::FIELD {
                return Err(Error::FieldMismatch { expected: S::FIELD, found: field });
            }
        }
        let entries = obj
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidInput("matrix needs an \"entries\" array".into()))?;
        let dim = |key: &str, fallback: usize| -> Result<usize> {
            match obj.get(key) {
                None => Ok(fallback),
                Some(x) => x
                    .as_u64()
                    .map(|u| u as usize)
                    .ok_or_else(|| Error::InvalidInput(format!("\"{key}\" must be a non-negative integer"))),
            }
        };
        let rows = dim("rows", entries.len())?;
        let first_len = entries.first().and_then(Value::as_array).map_or(0, Vec::len);
        let cols = dim("cols", first_len)?;
        if entries.len() != rows {
            return Err(Error::DimensionMismatch {
                op: "matrix json",
                detail: format!("\"rows\" is {rows} but {} rows given", entries.len()),
            });
        }
        let mut data = Vec::with_capacity(rows * cols);
        for row in entries {
            let row = row.as_array().ok_or_else(|| Error::InvalidInput("matrix rows must be arrays".into()))?;
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    op: "matrix json",
                    detail: format!("\"cols\" is {cols} but a row has {} entries", row.len()),
                });
            }
            for x in row {
                data.push(S::from_json(x)?);
            }
        }
        Ok(KMatrix { rows, cols, data })
    }
}

impl<S: Scalar> Serialize for KMatrix<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for KMatrix<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(deserializer)?;
        KMatrix::from_json(&v).map_err(serde::de::Error::custom)
    }
}

/// Outcome of pivoted elimination.
#[derive(Debug, Clone, PartialEq)]
pub struct RankProfile {
    pub rank: usize,
    /// Pivot norms in elimination order; the first rejected pivot, if any, is last.
    pub pivots: Vec<f64>,
    pub threshold: f64,
}

impl RankProfile {
    /// A pivot within a factor 10 of the threshold, on either side.
    pub fn ambiguous_pivot(&self) -> Option<f64> {
        self.pivots
            .iter()
            .copied()
            .find(|&p| p > self.threshold / 10.0 && p < self.threshold * 10.0 && self.threshold > 0.0)
    }

    pub fn is_ambiguous(&self) -> bool {
        self.ambiguous_pivot().is_some()
    }
}

/// `[x, y] = Σ conj(x_i) y_i`.
pub fn inner<S: Scalar>(x: &[S], y: &[S]) -> S {
    x.iter().zip(y).fold(S::zero(), |acc, (&a, &b)| acc + a.conj() * b)
}

/// Inner product of two column vectors.
pub fn inner_product<S: Scalar>(x: &KMatrix<S>, y: &KMatrix<S>) -> Result<S> {
    if x.cols() != 1 || y.cols() != 1 || x.rows() != y.rows() {
        return Err(Error::DimensionMismatch {
            op: "inner_product",
            detail: format!("{:?} and {:?} are not columns of equal length", x.shape(), y.shape()),
        });
    }
    Ok(inner(x.as_slice(), y.as_slice()))
}

fn column_norm<S: Scalar>(v: &[S]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Real dimension of the skew-adjoint `k × k` matrices.
pub fn dim_ad(field: Field, k: usize) -> usize {
    let d = field.real_dim();
    d * k * (k.saturating_sub(1)) / 2 + (d - 1) * k
}

/// Real dimension of the self-adjoint `k × k` matrices.
pub fn dim_sa(field: Field, k: usize) -> usize {
    let d = field.real_dim();
    d * k * (k.saturating_sub(1)) / 2 + k
}

fn hermitian_coords<S: Scalar>(m: &KMatrix<S>, skew: bool) -> Vec<f64> {
    let k = m.rows();
    let d = S::real_dim();
    let mut out = Vec::with_capacity(if skew { dim_ad(S::FIELD, k) } else { dim_sa(S::FIELD, k) });
    for i in 0..k {
        for j in i + 1..k {
            out.extend((0..d).map(|c| m.get(i, j).coeff(c)));
        }
    }
    for i in 0..k {
        if skew {
            out.extend((1..d).map(|c| m.get(i, i).coeff(c)));
        } else {
            out.push(m.get(i, i).re());
        }
    }
    out
}

fn from_hermitian_coords<S: Scalar>(k: usize, coords: &[f64], skew: bool) -> KMatrix<S> {
    let d = S::real_dim();
    let mut m = KMatrix::zeros(k, k);
    let mut it = coords.iter().copied();
    for i in 0..k {
        for j in i + 1..k {
            let c: Vec<f64> = (0..d).map(|_| it.next().expect("enough coordinates")).collect();
            let x = S::from_coeffs(&c);
            m.set(i, j, x);
            m.set(j, i, if skew { -x.conj() } else { x.conj() });
        }
    }
    for i in 0..k {
        let mut c = [0.0; 4];
        if skew {
            for slot in c.iter_mut().take(d).skip(1) {
                *slot = it.next().expect("enough coordinates");
            }
        } else {
            c[0] = it.next().expect("enough coordinates");
        }
        m.set(i, i, S::from_coeffs(&c[..d]));
    }
    m
}
