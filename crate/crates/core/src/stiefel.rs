//! Stiefel manifolds `L(K^n, K^(n+m))`, their eigenspace filtration, Cayley
//! coordinates on the top stratum, and stratum coordinates `[ψ, Y, X]`.
//!
//! A point `f` has filtration level `dim ker(f − i₁)^⊥`, where `i₁` is the
//! first-summand inclusion. The open stratum of level exactly `k` is
//! parametrized by an isometric embedding `ψ: K^k → K^n` (up to `I(k)`)
//! together with Cayley coordinates `(Y, X) ∈ Hom(K^k, K^m) ⊕ ad(k)`.

use serde_json::{json, Value};

use crate::algebra::{Field, GaloisElement, Scalar};
use crate::error::{Error, Result};
use crate::matk::{KMatrix, RankProfile, ToleranceConfig};

/// An isometric embedding `f: K^n → K^n ⊕ K^m`, stored as an `(n+m) × n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct StiefelPoint<S: Scalar> {
    n: usize,
    m: usize,
    f: KMatrix<S>,
}

impl<S: Scalar> StiefelPoint<S> {
    pub fn new(f: KMatrix<S>, m: usize, tol: &ToleranceConfig) -> Result<Self> {
        let n = f.cols();
        if f.rows() != n + m {
            return Err(Error::DimensionMismatch {
                op: "StiefelPoint",
                detail: format!("expected {} rows for n = {n}, m = {m}, got {}", n + m, f.rows()),
            });
        }
        let residual = f.isometry_residual();
        if residual > tol.eps_iso {
            return Err(Error::NotIsometric { residual });
        }
        Ok(StiefelPoint { n, m, f })
    }

    pub(crate) fn from_parts(f: KMatrix<S>, m: usize) -> Self {
        StiefelPoint { n: f.cols(), m, f }
    }

    /// The basepoint `i₁`.
    pub fn inclusion(n: usize, m: usize) -> Self {
        StiefelPoint { n, m, f: KMatrix::inclusion(n, m) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &KMatrix<S> {
        &self.f
    }

    pub fn into_matrix(self) -> KMatrix<S> {
        self.f
    }

    /// The component `f₁: K^n → K^n`.
    pub fn top(&self) -> KMatrix<S> {
        self.f.row_block(0, self.n)
    }

    /// The component `f₂: K^n → K^m`.
    pub fn bottom(&self) -> KMatrix<S> {
        self.f.row_block(self.n, self.n + self.m)
    }

    /// `f − i₁`.
    pub fn displacement(&self) -> KMatrix<S> {
        self.f.sub(&KMatrix::inclusion(self.n, self.m)).expect("same shape")
    }

    /// Image under `L(K^n, K^(n+m)) → L(K^n, K^(n+m+1))`.
    pub fn stabilize(&self) -> Self {
        let f = KMatrix::vstack(&self.f, &KMatrix::zeros(1, self.n)).expect("same columns");
        StiefelPoint { n: self.n, m: self.m + 1, f }
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.f.max_abs_diff(&other.f)
    }

    pub fn to_json(&self) -> Value {
        json!({ "n": self.n, "m": self.m, "f": self.f.to_json() })
    }

    pub fn from_json(v: &Value, tol: &ToleranceConfig) -> Result<Self> {
        let f = KMatrix::<S>::from_json(
            v.get("f").ok_or_else(|| Error::InvalidInput("Stiefel point needs an \"f\" matrix".into()))?,
        )?;
        let n = f.cols();
        let m = f.rows().checked_sub(n).ok_or_else(|| Error::DimensionMismatch {
            op: "StiefelPoint",
            detail: format!("{:?} has fewer rows than columns", f.shape()),
        })?;
        for (key, expected) in [("n", n), ("m", m)] {
            if let Some(x) = v.get(key) {
                if x.as_u64() != Some(expected as u64) {
                    return Err(Error::DimensionMismatch {
                        op: "StiefelPoint",
                        detail: format!("\"{key}\" = {x} disagrees with the {:?} matrix", f.shape()),
                    });
                }
            }
        }
        StiefelPoint::new(f, m, tol)
    }
}

/// Elimination profile of `f − i₁`, whose rank is the filtration level.
///
/// Pivots are measured against `eps_rank` times the entry scale of `f` and
/// `i₁` (which is 1), not of the difference, so roundoff-sized displacements
/// count as zero.
pub fn filtration_profile<S: Scalar>(p: &StiefelPoint<S>, tol: &ToleranceConfig) -> RankProfile {
    p.displacement().rank_profile_at(tol.eps_rank * p.f.norm_max().max(1.0))
}

/// `dim ker(f − i₁)^⊥`.
pub fn filtration_level<S: Scalar>(p: &StiefelPoint<S>, tol: &ToleranceConfig) -> usize {
    filtration_profile(p, tol).rank
}

/// Coordinates `(Y, X) ∈ Hom(K^k, K^m) ⊕ ad(k)` on the top stratum.
#[derive(Debug, Clone, PartialEq)]
pub struct CayleyCoords<S: Scalar> {
    pub y: KMatrix<S>,
    pub x: KMatrix<S>,
}

impl<S: Scalar> CayleyCoords<S> {
    pub fn new(y: KMatrix<S>, x: KMatrix<S>, tol: &ToleranceConfig) -> Result<Self> {
        if !x.is_square() || y.cols() != x.cols() {
            return Err(Error::DimensionMismatch {
                op: "CayleyCoords",
                detail: format!("Y is {:?}, X is {:?}", y.shape(), x.shape()),
            });
        }
        let residual = x.skew_adjoint_residual();
        if residual > tol.eps_iso * x.norm_max().max(1.0) {
            return Err(Error::InvalidInput(format!("X is not skew-adjoint (residual {residual:e})")));
        }
        Ok(CayleyCoords { y, x })
    }

    pub fn zero(k: usize, m: usize) -> Self {
        CayleyCoords { y: KMatrix::zeros(m, k), x: KMatrix::zeros(k, k) }
    }

    pub fn random<R: rand::Rng + ?Sized>(rng: &mut R, k: usize, m: usize) -> Self {
        CayleyCoords { y: KMatrix::random(rng, m, k), x: KMatrix::random_skew(rng, k) }
    }

    pub fn k(&self) -> usize {
        self.x.rows()
    }

    pub fn m(&self) -> usize {
        self.y.rows()
    }

    /// `(Y·A*, A·X·A*)` for `A ∈ I(k)`.
    pub fn conjugate_by(&self, a: &KMatrix<S>) -> Result<Self> {
        let at = a.adjoint();
        Ok(CayleyCoords { y: self.y.matmul(&at)?, x: a.matmul(&self.x)?.matmul(&at)? })
    }

    pub fn galois_map(&self, g: &GaloisElement) -> Result<Self> {
        Ok(CayleyCoords { y: self.y.galois_map(g)?, x: self.x.galois_map(g)? })
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.y.max_abs_diff(&other.y)?.max(self.x.max_abs_diff(&other.x)?))
    }

    pub fn to_json(&self) -> Value {
        json!({ "Y": self.y.to_json(), "X": self.x.to_json() })
    }

    pub fn from_json(v: &Value, tol: &ToleranceConfig) -> Result<Self> {
        let get = |key: &str| {
            v.get(key).ok_or_else(|| Error::InvalidInput(format!("Cayley coordinates need a \"{key}\" matrix")))
        };
        CayleyCoords::new(KMatrix::from_json(get("Y")?)?, KMatrix::from_json(get("X")?)?, tol)
    }
}

/// `C = X/2 + Y*Y/4`.
fn cayley_c<S: Scalar>(c: &CayleyCoords<S>) -> Result<KMatrix<S>> {
    c.x.real_scale(0.5).add(&c.y.adjoint().matmul(&c.y)?.real_scale(0.25))
}

/// The Cayley embedding `(Y, X) ↦ (g, h)` with `g = (C − 1)(C + 1)⁻¹`, `h = Y(1 − g)/2`.
pub fn cayley<S: Scalar>(c: &CayleyCoords<S>, tol: &ToleranceConfig) -> Result<StiefelPoint<S>> {
    let k = c.k();
    let id = KMatrix::<S>::identity(k);
    let cm = cayley_c(c)?;
    let inv = cm.add(&id)?.gauss_inverse(tol)?;
    let g = cm.sub(&id)?.matmul(&inv)?;
    let h = c.y.matmul(&id.sub(&g)?)?.real_scale(0.5);
    Ok(StiefelPoint { n: k, m: c.m(), f: KMatrix::vstack(&g, &h)? })
}

/// The bottom block in the form `Y(C + 1)⁻¹`; agrees with `Y(1 − g)/2`.
pub fn cayley_h_direct<S: Scalar>(c: &CayleyCoords<S>, tol: &ToleranceConfig) -> Result<KMatrix<S>> {
    let id = KMatrix::<S>::identity(c.k());
    c.y.matmul(&cayley_c(c)?.add(&id)?.gauss_inverse(tol)?)
}

/// Inverse of [`cayley`]: `Y = 2h(1 − g)⁻¹`, `X = 2(1 − g*)⁻¹(g − g*)(1 − g)⁻¹`.
pub fn cayley_inv<S: Scalar>(p: &StiefelPoint<S>, tol: &ToleranceConfig) -> Result<CayleyCoords<S>> {
    let g = p.top();
    let h = p.bottom();
    let id = KMatrix::<S>::identity(p.n);
    let one_minus_g = id.sub(&g)?;
    let inv = match one_minus_g.gauss_inverse(tol) {
        Ok(inv) => inv,
        Err(Error::Singular { .. }) => return Err(Error::LevelDeficient),
        Err(e) => return Err(e),
    };
    let y = h.matmul(&inv)?.real_scale(2.0);
    let x = inv.adjoint().matmul(&g.sub(&g.adjoint())?)?.matmul(&inv)?.real_scale(2.0);
    Ok(CayleyCoords { y, x })
}

fn check_isometry<S: Scalar>(psi: &KMatrix<S>, tol: &ToleranceConfig) -> Result<()> {
    let residual = psi.isometry_residual();
    if residual > tol.eps_iso {
        return Err(Error::NotIsometric { residual });
    }
    Ok(())
}

/// Conjugation `^ψ f` by an isometric embedding `ψ: K^N → K^n`.
///
/// The result acts as `(ψ ⊕ K^m)∘f` on `im ψ` and as the inclusion on its
/// complement: top block `ψ f₁ ψ* + (1 − ψψ*)`, bottom block `f₂ ψ*`.
pub fn conjugate_embedding<S: Scalar>(
    psi: &KMatrix<S>,
    p: &StiefelPoint<S>,
    tol: &ToleranceConfig,
) -> Result<StiefelPoint<S>> {
    check_isometry(psi, tol)?;
    if psi.cols() != p.n {
        return Err(Error::DimensionMismatch {
            op: "conjugate_embedding",
            detail: format!("psi is {:?} but the point lives on K^{}", psi.shape(), p.n),
        });
    }
    let n = psi.rows();
    let psi_adj = psi.adjoint();
    let complement = KMatrix::identity(n).sub(&psi.matmul(&psi_adj)?)?;
    let top = psi.matmul(&p.top())?.matmul(&psi_adj)?.add(&complement)?;
    let bottom = p.bottom().matmul(&psi_adj)?;
    Ok(StiefelPoint { n, m: p.m, f: KMatrix::vstack(&top, &bottom)? })
}

/// Galois conjugation `^τ f`, which on coordinate spaces is entrywise application of `τ`.
pub fn galois_act<S: Scalar>(g: &GaloisElement, p: &StiefelPoint<S>) -> Result<StiefelPoint<S>> {
    Ok(StiefelPoint { n: p.n, m: p.m, f: p.f.galois_map(g)? })
}

/// The `K`-linear isometric embedding `ζ: K^k → (uK^k) ⊗_R K = K^(dk)`.
///
/// The target is written in the basis `{(e_a λ) ⊗ 1}` with `λ` running over
/// `1, i, j, k` (row index `a·d + λ`). In these coordinates
/// `ζ(x)_(a,λ) = conj(λ)·x_a / √d`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZetaMap<S: Scalar> {
    pub k: usize,
    pub matrix: KMatrix<S>,
}

pub fn zeta<S: Scalar>(k: usize) -> Result<ZetaMap<S>> {
    if S::FIELD == Field::R {
        return Err(Error::InvalidInput("zeta is only constructed over C and H".into()));
    }
    let d = S::real_dim();
    let w = 1.0 / (d as f64).sqrt();
    let matrix = KMatrix::from_fn(d * k, k, |row, col| {
        if row / d == col {
            S::unit(row % d).conj().scale(w)
        } else {
            S::zero()
        }
    });
    Ok(ZetaMap { k, matrix })
}

impl<S: Scalar> ZetaMap<S> {
    pub fn apply(&self, x: &KMatrix<S>) -> Result<KMatrix<S>> {
        self.matrix.matmul(x)
    }
}

/// The diagonal action `l_τ ⊗ τ` on `(uK^k) ⊗_R K`, where `l_τ` applies `τ`
/// entrywise to `K^k` viewed as a real vector space.
pub fn tensor_galois_action<S: Scalar>(g: &GaloisElement, v: &KMatrix<S>) -> Result<KMatrix<S>> {
    let d = S::real_dim();
    if v.rows() % d != 0 {
        return Err(Error::DimensionMismatch {
            op: "tensor_galois_action",
            detail: format!("{} rows is not a multiple of {d}", v.rows()),
        });
    }
    let r = g.real_matrix();
    let tv = v.galois_map(g)?;
    Ok(KMatrix::from_fn(v.rows(), v.cols(), |row, col| {
        let (a, lp) = (row / d, row % d);
        (0..d).fold(S::zero(), |acc, l| acc + tv.get(a * d + l, col).scale(r[lp][l]))
    }))
}

/// Representative `(ψ, Y, X)` of a point `[ψ, Y, X]` of the stratum bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct StratumCoords<S: Scalar> {
    pub psi: KMatrix<S>,
    pub coords: CayleyCoords<S>,
}

impl<S: Scalar> StratumCoords<S> {
    pub fn new(psi: KMatrix<S>, coords: CayleyCoords<S>, tol: &ToleranceConfig) -> Result<Self> {
        check_isometry(&psi, tol)?;
        if psi.cols() != coords.k() {
            return Err(Error::DimensionMismatch {
                op: "StratumCoords",
                detail: format!("psi is {:?} but X is {:?}", psi.shape(), coords.x.shape()),
            });
        }
        Ok(StratumCoords { psi, coords })
    }

    pub fn random<R: rand::Rng + ?Sized>(rng: &mut R, n: usize, k: usize, m: usize) -> Result<Self> {
        Ok(StratumCoords { psi: KMatrix::random_isometry(rng, n, k)?, coords: CayleyCoords::random(rng, k, m) })
    }

    pub fn k(&self) -> usize {
        self.psi.cols()
    }

    /// The `I(k)`-action `(ψA, YA, A*XA)`, which fixes the reconstructed point.
    pub fn act(&self, a: &KMatrix<S>) -> Result<Self> {
        let at = a.adjoint();
        Ok(StratumCoords {
            psi: self.psi.matmul(a)?,
            coords: CayleyCoords { y: self.coords.y.matmul(a)?, x: at.matmul(&self.coords.x)?.matmul(a)? },
        })
    }

    pub fn galois_map(&self, g: &GaloisElement) -> Result<Self> {
        Ok(StratumCoords { psi: self.psi.galois_map(g)?, coords: self.coords.galois_map(g)? })
    }

    pub fn to_json(&self) -> Value {
        json!({ "psi": self.psi.to_json(), "Y": self.coords.y.to_json(), "X": self.coords.x.to_json() })
    }

    pub fn from_json(v: &Value, tol: &ToleranceConfig) -> Result<Self> {
        let psi = KMatrix::from_json(
            v.get("psi").ok_or_else(|| Error::InvalidInput("stratum coordinates need a \"psi\" matrix".into()))?,
        )?;
        StratumCoords::new(psi, CayleyCoords::from_json(v, tol)?, tol)
    }
}

/// Result of locating a point relative to the stratum of level `k`.
#[derive(Debug, Clone, PartialEq)]
pub enum StratumOutcome<S: Scalar> {
    Stratum(StratumCoords<S>),
    InLowerStratum { level: usize },
    AboveStratum { level: usize },
}

/// Coordinates of `p` on the open stratum of level `k`.
///
/// `ψ` is the Gram–Schmidt basis of `im((f − i₁)*) = ker(f − i₁)^⊥` in natural
/// column order; `f` compressed to that subspace is then inverted by [`cayley_inv`].
pub fn stratum_decompose<S: Scalar>(
    p: &StiefelPoint<S>,
    k: usize,
    tol: &ToleranceConfig,
) -> Result<StratumOutcome<S>> {
    let profile = filtration_profile(p, tol);
    if let Some(pivot) = profile.ambiguous_pivot() {
        return Err(Error::AmbiguousRank { pivot, threshold: profile.threshold });
    }
    let level = profile.rank;
    if level > k {
        return Ok(StratumOutcome::AboveStratum { level });
    }
    if level < k {
        return Ok(StratumOutcome::InLowerStratum { level });
    }
    let psi = p.displacement().adjoint().image_orthobasis_at(profile.threshold);
    if psi.cols() != k {
        return Err(Error::AmbiguousRank { pivot: f64::NAN, threshold: profile.threshold });
    }
    let psi_adj = psi.adjoint();
    let top = psi_adj.matmul(&p.top())?.matmul(&psi)?;
    let bottom = p.bottom().matmul(&psi)?;
    let compressed = StiefelPoint { n: k, m: p.m, f: KMatrix::vstack(&top, &bottom)? };
    let coords = cayley_inv(&compressed, tol)?;
    Ok(StratumOutcome::Stratum(StratumCoords { psi, coords }))
}

/// `^ψ(cayley(Y, X))` as a point of `L(K^n, K^(n+m))`.
pub fn stratum_reconstruct<S: Scalar>(
    s: &StratumCoords<S>,
    n: usize,
    m: usize,
    tol: &ToleranceConfig,
) -> Result<StiefelPoint<S>> {
    if s.psi.rows() != n || s.coords.m() != m || s.coords.y.cols() != s.k() {
        return Err(Error::DimensionMismatch {
            op: "stratum_reconstruct",
            detail: format!(
                "psi {:?}, Y {:?} incompatible with n = {n}, m = {m}",
                s.psi.shape(),
                s.coords.y.shape()
            ),
        });
    }
    conjugate_embedding(&s.psi, &cayley(&s.coords, tol)?, tol)
}
