//! Pointwise ingredients of the stable splitting: the decomposition
//! `Hom(K^k, K^(k+m)) = ν(k,m) ⊕ ad(k) ⊕ sa(k)`, the collapse maps `t_{k,m}`
//! and `c♭`, and the composite open embedding `F(Y, X, Z) = c(Y, X)·exp(−Z)`.

use rayon::prelude::*;

use crate::algebra::{Field, Scalar};
use crate::error::{Error, Result};
use crate::matk::{dim_ad, dim_sa, KMatrix, ToleranceConfig};
use crate::spectral::{exp_selfadjoint, polar_factor, PolarFactorization};
use crate::stiefel::{cayley, cayley_inv, filtration_level, CayleyCoords, StiefelPoint};

/// Default central-difference step for [`jacobian_origin_check`].
pub const DEFAULT_STEP: f64 = 1e-4;

/// `M = (X + Z; Y)` split into its `ν(k,m)`, `ad(k)` and `sa(k)` parts.
#[derive(Debug, Clone, PartialEq)]
pub struct HomDecomposition<S: Scalar> {
    pub y: KMatrix<S>,
    pub x: KMatrix<S>,
    pub z: KMatrix<S>,
}

impl<S: Scalar> HomDecomposition<S> {
    pub fn k(&self) -> usize {
        self.x.rows()
    }

    pub fn m(&self) -> usize {
        self.y.rows()
    }

    /// Real coordinates ordered `(Y, X, Z)`; `Y` entrywise, `X`, `Z` by their free coefficients.
    pub fn real_coords(&self) -> Vec<f64> {
        let mut v = self.y.real_coords();
        v.extend(self.x.ad_coords());
        v.extend(self.z.sa_coords());
        v
    }

    pub fn from_real_coords(k: usize, m: usize, coords: &[f64]) -> Result<Self> {
        let d = S::real_dim();
        let (ny, na) = (d * k * m, dim_ad(S::FIELD, k));
        let expected = ny + na + dim_sa(S::FIELD, k);
        if coords.len() != expected {
            return Err(Error::DimensionMismatch {
                op: "HomDecomposition::from_real_coords",
                detail: format!("expected {expected} coordinates, got {}", coords.len()),
            });
        }
        Ok(HomDecomposition {
            y: KMatrix::from_real_coords(m, k, &coords[..ny]),
            x: KMatrix::from_ad_coords(k, &coords[ny..ny + na]),
            z: KMatrix::from_sa_coords(k, &coords[ny + na..]),
        })
    }
}

pub fn hom_decompose<S: Scalar>(m: &KMatrix<S>) -> Result<HomDecomposition<S>> {
    let k = m.cols();
    if m.rows() < k {
        return Err(Error::DimensionMismatch {
            op: "hom_decompose",
            detail: format!("{:?} has fewer rows than columns", m.shape()),
        });
    }
    let (x, z) = m.row_block(0, k).skew_self_split()?;
    Ok(HomDecomposition { y: m.row_block(k, m.rows()), x, z })
}

pub fn hom_assemble<S: Scalar>(d: &HomDecomposition<S>) -> Result<KMatrix<S>> {
    KMatrix::vstack(&d.x.add(&d.z)?, &d.y)
}

/// Value of a collapse map: the basepoint off the open image, a point on it.
#[derive(Debug, Clone, PartialEq)]
pub enum CollapseResult<T> {
    Basepoint,
    Point(T),
}

impl<T> CollapseResult<T> {
    pub fn is_basepoint(&self) -> bool {
        matches!(self, CollapseResult::Basepoint)
    }

    pub fn point(self) -> Option<T> {
        match self {
            CollapseResult::Basepoint => None,
            CollapseResult::Point(t) => Some(t),
        }
    }
}

/// `t_{k,m}`: collapse along the open embedding `(A, Z) ↦ A·exp(−Z)` of
/// `L(K^k, K^(k+m)) × sa(k)` into `Hom(K^k, K^(k+m))`.
pub fn collapse_t<S: Scalar>(
    d: &HomDecomposition<S>,
    tol: &ToleranceConfig,
) -> Result<CollapseResult<PolarFactorization<S>>> {
    let m = hom_assemble(d)?;
    if m.rank(tol) < m.cols() {
        return Ok(CollapseResult::Basepoint);
    }
    match polar_factor(&m, tol) {
        Ok(p) => Ok(CollapseResult::Point(p)),
        Err(Error::RankDeficient { .. } | Error::NotPositiveDefinite { .. }) => Ok(CollapseResult::Basepoint),
        Err(e) => Err(e),
    }
}

/// `c♭`: collapse along the Cayley embedding onto the top stratum of `L(K^k, K^(k+m))`.
pub fn collapse_cflat<S: Scalar>(
    p: &StiefelPoint<S>,
    tol: &ToleranceConfig,
) -> Result<CollapseResult<CayleyCoords<S>>> {
    if filtration_level(p, tol) < p.n() {
        return Ok(CollapseResult::Basepoint);
    }
    match cayley_inv(p, tol) {
        Ok(c) => Ok(CollapseResult::Point(c)),
        Err(Error::LevelDeficient) => Ok(CollapseResult::Basepoint),
        Err(e) => Err(e),
    }
}

/// `c♭` applied to the isometric part of `t_{k,m}`, keeping the `sa(k)` coordinate.
pub fn collapse_composite<S: Scalar>(
    d: &HomDecomposition<S>,
    tol: &ToleranceConfig,
) -> Result<CollapseResult<(CayleyCoords<S>, KMatrix<S>)>> {
    let CollapseResult::Point(polar) = collapse_t(d, tol)? else {
        return Ok(CollapseResult::Basepoint);
    };
    let a = StiefelPoint::from_parts(polar.a, d.m());
    Ok(match collapse_cflat(&a, tol)? {
        CollapseResult::Basepoint => CollapseResult::Basepoint,
        CollapseResult::Point(c) => CollapseResult::Point((c, polar.z)),
    })
}

/// `F(Y, X, Z) = c(Y, X)·exp(−Z)`.
pub fn composite_f<S: Scalar>(c: &CayleyCoords<S>, z: &KMatrix<S>, tol: &ToleranceConfig) -> Result<KMatrix<S>> {
    if z.shape() != c.x.shape() {
        return Err(Error::DimensionMismatch {
            op: "composite_f",
            detail: format!("Z is {:?}, X is {:?}", z.shape(), c.x.shape()),
        });
    }
    let residual = z.self_adjoint_residual();
    if residual > tol.eps_iso * z.norm_max().max(1.0) {
        return Err(Error::NotSelfAdjoint { residual });
    }
    cayley(c, tol)?.matrix().matmul(&exp_selfadjoint(&z.neg(), tol)?)
}

/// Real Jacobian of `(Y, X, Z) ↦ F(Y, X, Z) − F(0)` at the origin, by central
/// differences, in the coordinates of [`HomDecomposition::real_coords`] on
/// both sides. Row `i` is the derivative along parameter `i`.
pub fn jacobian_origin<S: Scalar>(k: usize, m: usize, h: f64, tol: &ToleranceConfig) -> Result<Vec<Vec<f64>>> {
    if h.is_nan() || h <= 0.0 {
        return Err(Error::InvalidInput(format!("step must be positive, got {h}")));
    }
    let dim = S::real_dim() * (k * k + k * m);
    let eval = |coords: &[f64]| -> Result<Vec<f64>> {
        let p = HomDecomposition::<S>::from_real_coords(k, m, coords)?;
        let f = composite_f(&CayleyCoords { y: p.y, x: p.x }, &p.z, tol)?;
        Ok(hom_decompose(&f)?.real_coords())
    };
    (0..dim)
        .into_par_iter()
        .map(|i| {
            let mut e = vec![0.0; dim];
            e[i] = h;
            let plus = eval(&e)?;
            e[i] = -h;
            let minus = eval(&e)?;
            Ok(plus.iter().zip(&minus).map(|(a, b)| (a - b) / (2.0 * h)).collect())
        })
        .collect()
}

/// `‖J − I‖_max` for the Jacobian of [`jacobian_origin`].
pub fn jacobian_origin_check<S: Scalar>(k: usize, m: usize, h: f64, tol: &ToleranceConfig) -> Result<f64> {
    let j = jacobian_origin::<S>(k, m, h, tol)?;
    Ok(j.iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().map(move |(c, v)| (v - if c == i { 1.0 } else { 0.0 }).abs()))
        .fold(0.0, f64::max))
}

/// Outcome of enumerating coordinate bases of `ad(k)` and `sa(k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimensionCheck {
    pub field: Field,
    pub k: usize,
    pub dim_ad: usize,
    pub dim_sa: usize,
    pub closed: bool,
    pub spans: bool,
}

impl DimensionCheck {
    pub fn ok(&self) -> bool {
        self.closed && self.spans && self.dim_ad + self.dim_sa == self.field.real_dim() * self.k * self.k
    }
}

/// Builds the coordinate bases of `ad(k)` and `sa(k)`, checks each element is
/// skew- resp. self-adjoint, and measures the real rank of both bases and of
/// their union inside `Hom(K^k, K^k)`.
pub fn dimension_check<S: Scalar>(k: usize) -> DimensionCheck {
    let tol = ToleranceConfig::default();
    let basis = |n: usize, build: &dyn Fn(&[f64]) -> KMatrix<S>| -> Vec<KMatrix<S>> {
        (0..n)
            .map(|i| {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                build(&e)
            })
            .collect()
    };
    let ad = basis(dim_ad(S::FIELD, k), &|c| KMatrix::from_ad_coords(k, c));
    let sa = basis(dim_sa(S::FIELD, k), &|c| KMatrix::from_sa_coords(k, c));
    let closed = ad.iter().all(|b| b.skew_adjoint_residual() == 0.0)
        && sa.iter().all(|b| b.self_adjoint_residual() == 0.0);
    let real_rank = |mats: &[&KMatrix<S>]| -> usize {
        if mats.is_empty() {
            return 0;
        }
        let rows: Vec<Vec<f64>> = mats.iter().map(|b| b.real_coords()).collect();
        KMatrix::<f64>::from_rows(&rows).expect("equal lengths").rank(&tol)
    };
    let ad_refs: Vec<&KMatrix<S>> = ad.iter().collect();
    let sa_refs: Vec<&KMatrix<S>> = sa.iter().collect();
    let all: Vec<&KMatrix<S>> = ad.iter().chain(&sa).collect();
    let total = S::real_dim() * k * k;
    DimensionCheck {
        field: S::FIELD,
        k,
        dim_ad: real_rank(&ad_refs),
        dim_sa: real_rank(&sa_refs),
        closed,
        spans: real_rank(&all) == total && all.len() == total,
    }
}
