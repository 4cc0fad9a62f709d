//! Scalars of the three real division algebras and their automorphism groups.
//!
//! Every matrix algorithm in this crate is generic over [`Scalar`], which is
//! implemented for `f64`, [`Complex64`] and [`Quaternion`]. Quaternion
//! multiplication is not commutative, so generic code must keep the order of
//! factors exactly as written.
//!
//! The automorphism group of `K` as an `R`-algebra is modelled by
//! [`GaloisElement`]: it is trivial over the reals, `{id, conj}` over the
//! complex numbers, and `Sp(1)/{±1} ≅ SO(3)` over the quaternions, acting by
//! inner automorphisms.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};

/// Tolerance for comparing Galois elements.
pub const GALOIS_EQ_TOL: f64 = 1e-12;

/// One of `R`, `C`, `H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    R,
    C,
    H,
}

impl Field {
    pub const ALL: [Field; 3] = [Field::R, Field::C, Field::H];

    /// Dimension as a real vector space.
    pub const fn real_dim(self) -> usize {
        match self {
            Field::R => 1,
            Field::C => 2,
            Field::H => 4,
        }
    }

    pub const fn as_str(self) -> &'static str {
        match self {
            Field::R => "R",
            Field::C => "C",
            Field::H => "H",
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" | "r" => Ok(Field::R),
            "C" | "c" => Ok(Field::C),
            "H" | "h" => Ok(Field::H),
            other => Err(Error::InvalidInput(format!("unknown field {other:?}, expected R, C or H"))),
        }
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A real quaternion `re + i·i + j·j + k·k`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub re: f64,
    pub i: f64,
    pub j: f64,
    pub k: f64,
}

impl Quaternion {
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(re: f64, i: f64, j: f64, k: f64) -> Self {
        Quaternion { re, i, j, k }
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.re, -self.i, -self.j, -self.k)
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.i * self.i + self.j * self.j + self.k * self.k
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, c: f64) -> Self {
        Quaternion::new(self.re * c, self.i * c, self.j * c, self.k * c)
    }

    /// Two-sided inverse; infinite components for zero.
    pub fn inv(self) -> Self {
        self.conj().scale(1.0 / self.norm_sqr())
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.re, self.i, self.j, self.k]
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.re + o.re, self.i + o.i, self.j + o.j, self.k + o.k)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.re - o.re, self.i - o.i, self.j - o.j, self.k - o.k)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.re, -self.i, -self.j, -self.k)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Quaternion) {
        *self = *self - o;
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    // Hamilton product; i^2 = j^2 = k^2 = ijk = -1.
    fn mul(self, o: Quaternion) -> Quaternion {
        let (a1, b1, c1, d1) = (self.re, self.i, self.j, self.k);
        let (a2, b2, c2, d2) = (o.re, o.i, o.j, o.k);
        Quaternion::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i + {}j + {}k", self.re, self.i, self.j, self.k)
    }
}

/// Element of `R`, `C` or `H`, as used by the generic matrix code.
pub trait Scalar:
    Copy
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Mul<Output = Self>
    + AddAssign
    + SubAssign
{
    const FIELD: Field;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_real(x: f64) -> Self;
    fn re(self) -> f64;
    fn conj(self) -> Self;
    fn norm_sqr(self) -> f64;
    fn scale(self, c: f64) -> Self;

    /// Real coefficient along the `idx`-th basis unit `1, i, j, k`.
    fn coeff(self, idx: usize) -> f64;

    /// Builds a scalar from its first `real_dim` real coefficients.
    fn from_coeffs(c: &[f64]) -> Self;

    fn apply_galois(self, g: &GaloisElement) -> Result<Self>;

    fn random_galois<R: Rng + ?Sized>(rng: &mut R) -> GaloisElement;

    fn to_value(self) -> ScalarValue;

    fn from_value(v: ScalarValue) -> Result<Self>;

    fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    fn inv(self) -> Self {
        self.conj().scale(1.0 / self.norm_sqr())
    }

    fn real_dim() -> usize {
        Self::FIELD.real_dim()
    }

    /// The `idx`-th basis unit among `1, i, j, k`.
    fn unit(idx: usize) -> Self {
        let mut c = [0.0; 4];
        c[idx] = 1.0;
        Self::from_coeffs(&c[..Self::real_dim()])
    }

    /// Independent standard-normal real coefficients.
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut c = [0.0; 4];
        for x in c.iter_mut().take(Self::real_dim()) {
            *x = rng.sample(StandardNormal);
        }
        Self::from_coeffs(&c[..Self::real_dim()])
    }

    fn to_json(self) -> Value {
        self.to_value().to_json()
    }

    fn from_json(v: &Value) -> Result<Self> {
        Self::from_value(ScalarValue::from_json_in(v, Self::FIELD)?)
    }
}

impl Scalar for f64 {
    const FIELD: Field = Field::R;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_real(x: f64) -> Self {
        x
    }
    fn re(self) -> f64 {
        self
    }
    fn conj(self) -> Self {
        self
    }
    fn norm_sqr(self) -> f64 {
        self * self
    }
    fn scale(self, c: f64) -> Self {
        self * c
    }
    fn coeff(self, idx: usize) -> f64 {
        if idx == 0 {
            self
        } else {
            0.0
        }
    }
    fn from_coeffs(c: &[f64]) -> Self {
        c[0]
    }
    fn apply_galois(self, g: &GaloisElement) -> Result<Self> {
        g.check_field(Field::R)?;
        Ok(self)
    }
    fn random_galois<R: Rng + ?Sized>(_rng: &mut R) -> GaloisElement {
        GaloisElement::Real
    }
    fn to_value(self) -> ScalarValue {
        ScalarValue::Real(self)
    }
    fn from_value(v: ScalarValue) -> Result<Self> {
        match v {
            ScalarValue::Real(x) => Ok(x),
            other => Err(Error::FieldMismatch { expected: Field::R, found: other.field() }),
        }
    }
}

impl Scalar for Complex64 {
    const FIELD: Field = Field::C;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn re(self) -> f64 {
        self.re
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn norm_sqr(self) -> f64 {
        Complex64::norm_sqr(&self)
    }
    fn scale(self, c: f64) -> Self {
        Complex64::new(self.re * c, self.im * c)
    }
    fn coeff(self, idx: usize) -> f64 {
        match idx {
            0 => self.re,
            1 => self.im,
            _ => 0.0,
        }
    }
    fn from_coeffs(c: &[f64]) -> Self {
        Complex64::new(c[0], c[1])
    }
    fn apply_galois(self, g: &GaloisElement) -> Result<Self> {
        match g {
            GaloisElement::Complex { conjugate: true } => Ok(Scalar::conj(self)),
            GaloisElement::Complex { conjugate: false } => Ok(self),
            other => Err(Error::FieldMismatch { expected: Field::C, found: other.field() }),
        }
    }
    fn random_galois<R: Rng + ?Sized>(rng: &mut R) -> GaloisElement {
        GaloisElement::Complex { conjugate: rng.random_bool(0.5) }
    }
    fn to_value(self) -> ScalarValue {
        ScalarValue::Complex(self)
    }
    fn from_value(v: ScalarValue) -> Result<Self> {
        match v {
            ScalarValue::Complex(z) => Ok(z),
            ScalarValue::Real(x) => Ok(Complex64::new(x, 0.0)),
            other => Err(Error::FieldMismatch { expected: Field::C, found: other.field() }),
        }
    }
}

impl Scalar for Quaternion {
    const FIELD: Field = Field::H;

    fn zero() -> Self {
        Quaternion::default()
    }
    fn one() -> Self {
        Quaternion::ONE
    }
    fn from_real(x: f64) -> Self {
        Quaternion::new(x, 0.0, 0.0, 0.0)
    }
    fn re(self) -> f64 {
        self.re
    }
    fn conj(self) -> Self {
        Quaternion::conj(self)
    }
    fn norm_sqr(self) -> f64 {
        Quaternion::norm_sqr(self)
    }
    fn scale(self, c: f64) -> Self {
        Quaternion::scale(self, c)
    }
    fn coeff(self, idx: usize) -> f64 {
        self.to_array()[idx]
    }
    fn from_coeffs(c: &[f64]) -> Self {
        Quaternion::new(c[0], c[1], c[2], c[3])
    }
    fn apply_galois(self, g: &GaloisElement) -> Result<Self> {
        match g {
            GaloisElement::Inner(q) => Ok(*q * self * q.conj()),
            other => Err(Error::FieldMismatch { expected: Field::H, found: other.field() }),
        }
    }
    fn random_galois<R: Rng + ?Sized>(rng: &mut R) -> GaloisElement {
        loop {
            let q = Quaternion::sample(rng);
            if q.norm() > 1e-3 {
                return GaloisElement::inner(q).expect("nonzero quaternion");
            }
        }
    }
    fn to_value(self) -> ScalarValue {
        ScalarValue::Quaternion(self)
    }
    fn from_value(v: ScalarValue) -> Result<Self> {
        match v {
            ScalarValue::Quaternion(q) => Ok(q),
            ScalarValue::Real(x) => Ok(Quaternion::from_real(x)),
            ScalarValue::Complex(z) => Ok(Quaternion::new(z.re, z.im, 0.0, 0.0)),
        }
    }
}

/// A field-tagged scalar, used at the dynamically typed boundary (JSON, CLI).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalarValue {
    Real(f64),
    Complex(Complex64),
    Quaternion(Quaternion),
}

impl ScalarValue {
    pub fn field(&self) -> Field {
        match self {
            ScalarValue::Real(_) => Field::R,
            ScalarValue::Complex(_) => Field::C,
            ScalarValue::Quaternion(_) => Field::H,
        }
    }

    /// Embeds into the quaternions; `C` sits inside `H` as `R + R·i`.
    pub fn to_quaternion(&self) -> Quaternion {
        match *self {
            ScalarValue::Real(x) => Quaternion::from_real(x),
            ScalarValue::Complex(z) => Quaternion::new(z.re, z.im, 0.0, 0.0),
            ScalarValue::Quaternion(q) => q,
        }
    }

    pub fn mul(&self, other: &ScalarValue) -> Result<ScalarValue> {
        match (*self, *other) {
            (ScalarValue::Real(a), ScalarValue::Real(b)) => Ok(ScalarValue::Real(a * b)),
            (ScalarValue::Complex(a), ScalarValue::Complex(b)) => Ok(ScalarValue::Complex(a * b)),
            (ScalarValue::Quaternion(a), ScalarValue::Quaternion(b)) => Ok(ScalarValue::Quaternion(a * b)),
            (a, b) => Err(Error::FieldMismatch { expected: a.field(), found: b.field() }),
        }
    }

    pub fn add(&self, other: &ScalarValue) -> Result<ScalarValue> {
        match (*self, *other) {
            (ScalarValue::Real(a), ScalarValue::Real(b)) => Ok(ScalarValue::Real(a + b)),
            (ScalarValue::Complex(a), ScalarValue::Complex(b)) => Ok(ScalarValue::Complex(a + b)),
            (ScalarValue::Quaternion(a), ScalarValue::Quaternion(b)) => Ok(ScalarValue::Quaternion(a + b)),
            (a, b) => Err(Error::FieldMismatch { expected: a.field(), found: b.field() }),
        }
    }

    pub fn conjugate(&self) -> ScalarValue {
        match *self {
            ScalarValue::Real(x) => ScalarValue::Real(x),
            ScalarValue::Complex(z) => ScalarValue::Complex(z.conj()),
            ScalarValue::Quaternion(q) => ScalarValue::Quaternion(q.conj()),
        }
    }

    pub fn re(&self) -> f64 {
        self.to_quaternion().re
    }

    pub fn norm(&self) -> f64 {
        self.to_quaternion().norm()
    }

    pub fn galois_apply(&self, g: &GaloisElement) -> Result<ScalarValue> {
        match *self {
            ScalarValue::Real(x) => x.apply_galois(g).map(ScalarValue::Real),
            ScalarValue::Complex(z) => z.apply_galois(g).map(ScalarValue::Complex),
            ScalarValue::Quaternion(q) => q.apply_galois(g).map(ScalarValue::Quaternion),
        }
    }

    /// Reals as numbers, complex numbers as `[re, im]`, quaternions as `[re, i, j, k]`.
    pub fn to_json(&self) -> Value {
        match *self {
            ScalarValue::Real(x) => Value::from(x),
            ScalarValue::Complex(z) => Value::from(vec![z.re, z.im]),
            ScalarValue::Quaternion(q) => Value::from(q.to_array().to_vec()),
        }
    }

    /// Parses without field context: the array length decides the field.
    pub fn from_json(v: &Value) -> Result<ScalarValue> {
        match v {
            Value::Number(_) => Ok(ScalarValue::Real(json_f64(v)?)),
            Value::Array(a) => match a.len() {
                2 => Ok(ScalarValue::Complex(Complex64::new(json_f64(&a[0])?, json_f64(&a[1])?))),
                4 => Ok(ScalarValue::Quaternion(Quaternion::new(
                    json_f64(&a[0])?,
                    json_f64(&a[1])?,
                    json_f64(&a[2])?,
                    json_f64(&a[3])?,
                ))),
                n => Err(Error::InvalidInput(format!("scalar array must have 2 or 4 entries, got {n}"))),
            },
            other => Err(Error::InvalidInput(format!("expected a scalar, got {other}"))),
        }
    }

    /// Parses a scalar known to live in `field`; bare numbers are accepted as real scalars.
    pub fn from_json_in(v: &Value, field: Field) -> Result<ScalarValue> {
        if let Value::Number(_) = v {
            let x = json_f64(v)?;
            return Ok(match field {
                Field::R => ScalarValue::Real(x),
                Field::C => ScalarValue::Complex(Complex64::new(x, 0.0)),
                Field::H => ScalarValue::Quaternion(Quaternion::from_real(x)),
            });
        }
        let parsed = ScalarValue::from_json(v)?;
        if parsed.field() != field {
            return Err(Error::FieldMismatch { expected: field, found: parsed.field() });
        }
        Ok(parsed)
    }
}

impl Serialize for ScalarValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ScalarValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(deserializer)?;
        ScalarValue::from_json(&v).map_err(serde::de::Error::custom)
    }
}

fn json_f64(v: &Value) -> Result<f64> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::InvalidInput(format!("expected a finite number, got {v}")))
}

/// An `R`-algebra automorphism of `K`.
///
/// Quaternionic elements are stored as unit quaternions with the sign fixed
/// so that the first clearly nonzero coefficient is positive; `q` and `-q`
/// induce the same inner automorphism.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GaloisElement {
    Real,
    Complex { conjugate: bool },
    Inner(Quaternion),
}

impl GaloisElement {
    pub fn identity(field: Field) -> Self {
        match field {
            Field::R => GaloisElement::Real,
            Field::C => GaloisElement::Complex { conjugate: false },
            Field::H => GaloisElement::Inner(Quaternion::ONE),
        }
    }

    pub fn complex_conjugation() -> Self {
        GaloisElement::Complex { conjugate: true }
    }

    /// Inner automorphism `x ↦ q x q⁻¹`.
    pub fn inner(q: Quaternion) -> Result<Self> {
        let n = q.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidInput("inner automorphism needs a nonzero quaternion".into()));
        }
        Ok(GaloisElement::Inner(canonical_sign(q.scale(1.0 / n))))
    }

    pub fn field(&self) -> Field {
        match self {
            GaloisElement::Real => Field::R,
            GaloisElement::Complex { .. } => Field::C,
            GaloisElement::Inner(_) => Field::H,
        }
    }

    pub(crate) fn check_field(&self, field: Field) -> Result<()> {
        if self.field() == field {
            Ok(())
        } else {
            Err(Error::FieldMismatch { expected: field, found: self.field() })
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GaloisElement) -> Result<GaloisElement> {
        match (self, other) {
            (GaloisElement::Real, GaloisElement::Real) => Ok(GaloisElement::Real),
            (GaloisElement::Complex { conjugate: a }, GaloisElement::Complex { conjugate: b }) => {
                Ok(GaloisElement::Complex { conjugate: a ^ b })
            }
            (GaloisElement::Inner(p), GaloisElement::Inner(q)) => GaloisElement::inner(*p * *q),
            (a, b) => Err(Error::FieldMismatch { expected: a.field(), found: b.field() }),
        }
    }

    pub fn inverse(&self) -> GaloisElement {
        match *self {
            GaloisElement::Inner(q) => GaloisElement::Inner(canonical_sign(q.conj())),
            other => other,
        }
    }

    /// Equality in `G(K)`; quaternionic representatives are compared up to sign.
    pub fn equals(&self, other: &GaloisElement) -> Result<bool> {
        match (self, other) {
            (GaloisElement::Real, GaloisElement::Real) => Ok(true),
            (GaloisElement::Complex { conjugate: a }, GaloisElement::Complex { conjugate: b }) => Ok(a == b),
            (GaloisElement::Inner(p), GaloisElement::Inner(q)) => {
                let d = (*p - *q).norm().min((*p + *q).norm());
                Ok(d <= GALOIS_EQ_TOL)
            }
            (a, b) => Err(Error::FieldMismatch { expected: a.field(), found: b.field() }),
        }
    }

    /// `{"field": "R"}`, `{"field": "C", "conjugate": b}` or `{"field": "H", "q": [a, b, c, d]}`.
    pub fn to_json(&self) -> Value {
        match self {
            GaloisElement::Real => serde_json::json!({ "field": Field::R }),
            GaloisElement::Complex { conjugate } => serde_json::json!({ "field": Field::C, "conjugate": conjugate }),
            GaloisElement::Inner(q) => serde_json::json!({ "field": Field::H, "q": q.to_array() }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field: Field = v
            .get("field")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::InvalidInput("Galois element needs a \"field\" string".into()))?
            .parse()?;
        match field {
            Field::R => Ok(GaloisElement::Real),
            Field::C => {
                let conjugate = v
                    .get("conjugate")
                    .and_then(Value::as_bool)
                    .ok_or_else(|| Error::InvalidInput("complex Galois element needs a \"conjugate\" flag".into()))?;
                Ok(GaloisElement::Complex { conjugate })
            }
            Field::H => {
                let q = v
                    .get("q")
                    .and_then(Value::as_array)
                    .filter(|a| a.len() == 4)
                    .ok_or_else(|| Error::InvalidInput("quaternionic Galois element needs \"q\": [a, b, c, d]".into()))?;
                let c: Vec<f64> = q.iter().map(json_f64).collect::<Result<_>>()?;
                GaloisElement::inner(Quaternion::new(c[0], c[1], c[2], c[3]))
            }
        }
    }

    /// Matrix of the automorphism as a real-linear map of `K ≅ R^d` in the basis `1, i, j, k`.
    pub fn real_matrix(&self) -> Vec<Vec<f64>> {
        let d = self.field().real_dim();
        let mut m = vec![vec![0.0; d]; d];
        for col in 0..d {
            let image = match self {
                GaloisElement::Real => ScalarValue::Real(1.0),
                GaloisElement::Complex { .. } => {
                    ScalarValue::Complex(Complex64::unit(col)).galois_apply(self).expect("field matches")
                }
                GaloisElement::Inner(_) => {
                    ScalarValue::Quaternion(Quaternion::unit(col)).galois_apply(self).expect("field matches")
                }
            };
            let q = image.to_quaternion().to_array();
            for (row, entry) in m.iter_mut().enumerate() {
                entry[col] = q[row];
            }
        }
        m
    }
}

fn canonical_sign(q: Quaternion) -> Quaternion {
    let lead = q.to_array().into_iter().find(|c| c.abs() > GALOIS_EQ_TOL).unwrap_or(1.0);
    if lead < 0.0 {
        -q
    } else {
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(a: f64, b: f64, c: f64, d: f64) -> Quaternion {
        Quaternion::new(a, b, c, d)
    }

    #[test]
    fn galois_json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for g in [GaloisElement::Real, GaloisElement::complex_conjugation(), Quaternion::random_galois(&mut rng)] {
            let back = GaloisElement::from_json(&g.to_json()).unwrap();
            assert!(back.equals(&g).unwrap());
        }
        assert!(GaloisElement::from_json(&serde_json::json!({"field": "H", "q": [0, 0, 0, 0]})).is_err());
        assert!(GaloisElement::from_json(&serde_json::json!({"field": "C"})).is_err());
    }

    #[test]
    fn unit_relations() {
        assert_eq!(Quaternion::I * Quaternion::J, Quaternion::K);
        assert_eq!(Quaternion::J * Quaternion::I, -Quaternion::K);
        assert_eq!(Quaternion::J * Quaternion::K, Quaternion::I);
        assert_eq!(Quaternion::K * Quaternion::I, Quaternion::J);
        for u in [Quaternion::I, Quaternion::J, Quaternion::K] {
            assert_eq!(u * u, -Quaternion::ONE);
        }
        assert_eq!(Quaternion::I * Quaternion::J * Quaternion::K, -Quaternion::ONE);
        let x = q(0.3, -1.0, 2.0, 5.0);
        assert_eq!(Quaternion::ONE * x, x);
    }

    #[test]
    fn scalar_value_mul_and_mismatch() {
        let i = ScalarValue::Quaternion(Quaternion::I);
        let j = ScalarValue::Quaternion(Quaternion::J);
        assert_eq!(i.mul(&j).unwrap(), ScalarValue::Quaternion(Quaternion::K));
        assert_eq!(j.mul(&i).unwrap(), ScalarValue::Quaternion(-Quaternion::K));
        let err = i.mul(&ScalarValue::Real(2.0)).unwrap_err();
        assert!(matches!(err, Error::FieldMismatch { .. }));
    }

    #[test]
    fn conjugation() {
        let x = ScalarValue::Quaternion(q(1.0, 2.0, 3.0, 4.0));
        assert_eq!(x.conjugate(), ScalarValue::Quaternion(q(1.0, -2.0, -3.0, -4.0)));
        assert_eq!(ScalarValue::Real(5.0).conjugate(), ScalarValue::Real(5.0));
        assert_eq!(x.conjugate().conjugate(), x);
    }

    #[test]
    fn galois_examples() {
        let inner_j = GaloisElement::inner(Quaternion::J).unwrap();
        assert_eq!(Quaternion::I.apply_galois(&inner_j).unwrap(), -Quaternion::I);
        // oracle: j·i·j⁻¹ by direct triple product
        assert_eq!(Quaternion::J * Quaternion::I * Quaternion::J.inv(), -Quaternion::I);

        let id = GaloisElement::identity(Field::H);
        let x = q(0.5, -2.0, 1.5, 3.0);
        assert_eq!(x.apply_galois(&id).unwrap(), x);

        let z = Complex64::new(2.0, 3.0);
        assert_eq!(z.apply_galois(&GaloisElement::complex_conjugation()).unwrap(), Complex64::new(2.0, -3.0));

        assert!(z.apply_galois(&inner_j).is_err());
        assert!(GaloisElement::Real.compose(&inner_j).is_err());
    }

    #[test]
    fn galois_group_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let s = Quaternion::random_galois(&mut rng);
            let t = Quaternion::random_galois(&mut rng);
            let GaloisElement::Inner(qs) = s else { unreachable!() };
            assert!(s.equals(&GaloisElement::inner(-qs).unwrap()).unwrap());
            assert!(s.compose(&s.inverse()).unwrap().equals(&GaloisElement::identity(Field::H)).unwrap());
            let x = Quaternion::sample(&mut rng);
            let lhs = x.apply_galois(&s.compose(&t).unwrap()).unwrap();
            let rhs = x.apply_galois(&t).unwrap().apply_galois(&s).unwrap();
            assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + x.norm()));
        }
        let c = GaloisElement::complex_conjugation();
        assert_eq!(c.compose(&c).unwrap(), GaloisElement::identity(Field::C));
    }

    #[test]
    fn galois_preserves_norm_real_part_and_orientation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let g = Quaternion::random_galois(&mut rng);
            let x = Quaternion::sample(&mut rng);
            let y = x.apply_galois(&g).unwrap();
            assert!((y.norm() - x.norm()).abs() <= 1e-12 * x.norm());
            assert!((y.re - x.re).abs() <= 1e-12 * x.norm());
            assert!((Quaternion::from_real(x.re).apply_galois(&g).unwrap() - Quaternion::from_real(x.re)).norm() <= 1e-15 * x.re.abs());

            let m = g.real_matrix();
            let r: Vec<Vec<f64>> = (1..4).map(|a| (1..4).map(|b| m[a][b]).collect()).collect();
            let det = r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
                - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
                + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
            assert!((det - 1.0).abs() < 1e-12);
            for a in 0..3 {
                for b in 0..3 {
                    let dot: f64 = (0..3).map(|c| r[c][a] * r[c][b]).sum();
                    let expect = if a == b { 1.0 } else { 0.0 };
                    assert!((dot - expect).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn json_encoding() {
        let v = ScalarValue::Quaternion(q(1.0, 2.0, 3.0, 4.0));
        assert_eq!(v.to_json().to_string(), "[1.0,2.0,3.0,4.0]");
        assert_eq!(ScalarValue::from_json(&v.to_json()).unwrap(), v);
        let z = ScalarValue::from_json(&serde_json::json!([1.5, -2.0])).unwrap();
        assert_eq!(z, ScalarValue::Complex(Complex64::new(1.5, -2.0)));
        assert_eq!(ScalarValue::from_json(&serde_json::json!(3)).unwrap(), ScalarValue::Real(3.0));
        assert!(ScalarValue::from_json(&serde_json::json!([1, 2, 3])).is_err());
        assert!(ScalarValue::from_json_in(&serde_json::json!([1, 2]), Field::H).is_err());
        let h = Quaternion::from_json(&serde_json::json!(2.0)).unwrap();
        assert_eq!(h, Quaternion::from_real(2.0));
    }
}
