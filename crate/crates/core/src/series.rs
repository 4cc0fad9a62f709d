//! Exact Poincaré-series bookkeeping for the stable splitting.
//!
//! The wedge side is `Σ_k t^{dim ad(k)} · P_k(t)`, where `P_k` is the Poincaré
//! series of the classifying space of `I(k)`; the product side is the closed
//! form for the stable group. For `R` the series are mod-2 Poincaré series,
//! but the identity already holds for the integer products involved.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::algebra::Field;
use crate::error::{Error, Result};
use crate::matk::{dim_ad, dim_sa};

pub const MAX_DEGREE: usize = 512;

/// Power series with exact integer coefficients, truncated above `degree()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<BigInt>,
}

impl PowerSeries {
    pub fn zero(degree: usize) -> Self {
        PowerSeries { coeffs: vec![BigInt::zero(); degree + 1] }
    }

    pub fn constant(c: i64, degree: usize) -> Self {
        let mut s = Self::zero(degree);
        s.coeffs[0] = BigInt::from(c);
        s
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series has at least a constant term");
        PowerSeries { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &BigInt {
        &self.coeffs[n]
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.degree().min(other.degree());
        PowerSeries { coeffs: (0..=n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.degree().min(other.degree());
        let mut out = Self::zero(n);
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    /// Multiplication by `t^a`.
    pub fn shift(&self, a: usize) -> Self {
        let mut out = Self::zero(self.degree());
        for n in a..=self.degree() {
            out.coeffs[n] = self.coeffs[n - a].clone();
        }
        out
    }

    /// Multiplication by `1 + t^a`.
    pub fn mul_one_plus(&self, a: usize) -> Self {
        let mut out = self.clone();
        for n in (a..=self.degree()).rev() {
            let prev = out.coeffs[n - a].clone();
            out.coeffs[n] += prev;
        }
        out
    }

    /// Multiplication by `(1 − t^a)⁻¹`, `a ≥ 1`.
    pub fn div_one_minus(&self, a: usize) -> Self {
        assert!(a >= 1, "(1 - t^0) is not invertible");
        let mut out = self.clone();
        for n in a..=self.degree() {
            let prev = out.coeffs[n - a].clone();
            out.coeffs[n] += prev;
        }
        out
    }

    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        let n = self.degree().min(other.degree());
        (0..=n).find(|&i| self.coeffs[i] != other.coeffs[i])
    }

    /// Coefficients as JSON numbers, or decimal strings once they exceed `u64`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.coeffs
                .iter()
                .map(|c| match c.to_u64() {
                    Some(v) => json!(v),
                    None => json!(c.to_string()),
                })
                .collect(),
        )
    }
}

/// Real dimensions of the representations `ν(k,m)`, `ad(k)`, `sa(k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RepDims {
    pub field: Field,
    pub k: usize,
    pub m: usize,
    pub dim_nu: usize,
    pub dim_ad: usize,
    pub dim_sa: usize,
}

pub fn rep_dims(field: Field, k: usize, m: usize) -> RepDims {
    RepDims { field, k, m, dim_nu: field.real_dim() * k * m, dim_ad: dim_ad(field, k), dim_sa: dim_sa(field, k) }
}

fn check_degree(n: usize) -> Result<()> {
    if n > MAX_DEGREE {
        return Err(Error::InvalidInput(format!("degree {n} exceeds the cap of {MAX_DEGREE}")));
    }
    Ok(())
}

/// `Σ_{k≥0} t^{dim ad(k)} Π_{j≤k} (1 − t^{dj})⁻¹` through degree `n`.
pub fn wedge_poincare(field: Field, n: usize) -> Result<PowerSeries> {
    check_degree(n)?;
    let d = field.real_dim();
    let mut total = PowerSeries::zero(n);
    let mut classifying = PowerSeries::constant(1, n);
    for k in 0.. {
        let shift = dim_ad(field, k);
        if shift > n {
            break;
        }
        if k > 0 {
            classifying = classifying.div_one_minus(d * k);
        }
        total = total.add(&classifying.shift(shift));
    }
    Ok(total)
}

/// `2Π(1 + t^i)` for `R`, `Π(1 + t^{2i−1})` for `C`, `Π(1 + t^{4i−1})` for `H`.
pub fn product_poincare(field: Field, n: usize) -> Result<PowerSeries> {
    check_degree(n)?;
    let (lead, exponent): (i64, fn(usize) -> usize) = match field {
        Field::R => (2, |i| i),
        Field::C => (1, |i| 2 * i - 1),
        Field::H => (1, |i| 4 * i - 1),
    };
    let mut s = PowerSeries::constant(lead, n);
    for i in 1.. {
        let a = exponent(i);
        if a > n {
            break;
        }
        s = s.mul_one_plus(a);
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesComparison {
    pub field: Field,
    pub degree: usize,
    pub equal: bool,
    pub first_mismatch: Option<usize>,
    pub wedge: PowerSeries,
    pub product: PowerSeries,
}

impl SeriesComparison {
    pub fn to_json(&self) -> Value {
        json!({
            "field": self.field,
            "N": self.degree,
            "equal": self.equal,
            "first_mismatch": self.first_mismatch,
            "coefficients": self.wedge.to_json(),
            "product_coefficients": self.product.to_json(),
        })
    }
}

pub fn series_compare(field: Field, n: usize) -> Result<SeriesComparison> {
    let wedge = wedge_poincare(field, n)?;
    let product = product_poincare(field, n)?;
    let first_mismatch = wedge.first_difference(&product);
    Ok(SeriesComparison { field, degree: n, equal: first_mismatch.is_none(), first_mismatch, wedge, product })
}

/// `(k, dim ν(k,m) + dim ad(k))` for `k = 0..=k_max`.
pub fn thom_dimension_table(field: Field, m: usize, k_max: usize) -> Vec<(usize, usize)> {
    (0..=k_max)
        .map(|k| {
            let r = rep_dims(field, k, m);
            (k, r.dim_nu + r.dim_ad)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &PowerSeries) -> Vec<i64> {
        s.coeffs().iter().map(|c| c.to_i64().unwrap()).collect()
    }

    /// Partitions of `n` into distinct parts drawn from `parts`, by recursion over the largest part.
    fn distinct_partitions(n: usize, parts: &[usize]) -> u128 {
        match parts.split_last() {
            None => u128::from(n == 0),
            Some((&p, rest)) => {
                distinct_partitions(n, rest) + if p <= n { distinct_partitions(n - p, rest) } else { 0 }
            }
        }
    }

    #[test]
    fn rep_dims_examples() {
        let r = rep_dims(Field::R, 2, 0);
        assert_eq!((r.dim_ad, r.dim_sa), (1, 3));
        for f in Field::ALL {
            let z = rep_dims(f, 0, 5);
            assert_eq!((z.dim_nu, z.dim_ad, z.dim_sa), (0, 0, 0));
            for k in 0..=12 {
                for m in 0..4 {
                    let r = rep_dims(f, k, m);
                    assert_eq!(r.dim_ad + r.dim_sa, f.real_dim() * k * k);
                    assert_eq!(r.dim_nu, f.real_dim() * k * m);
                }
            }
        }
        let h = rep_dims(Field::H, 2, 0);
        assert_eq!((h.dim_ad, h.dim_sa), (10, 6));
    }

    #[test]
    fn wedge_examples() {
        // 1 + t(1 - t^2)^{-1} = 1 + t + t^3 + ...
        assert_eq!(&ints(&wedge_poincare(Field::C, 2).unwrap())[..2], &[1, 1]);
        assert_eq!(ints(&wedge_poincare(Field::H, 2).unwrap()), vec![1, 0, 0]);
        // O(1) is disconnected: k = 0 and k = 1 both sit in degree 0 for R
        assert_eq!(ints(&wedge_poincare(Field::R, 0).unwrap()), vec![2]);
        assert_eq!(ints(&wedge_poincare(Field::C, 0).unwrap()), vec![1]);
        assert_eq!(ints(&wedge_poincare(Field::H, 0).unwrap()), vec![1]);
        assert!(wedge_poincare(Field::R, 513).is_err());
    }

    #[test]
    fn product_examples() {
        // (1 + t)(1 + t^3) through t^4
        assert_eq!(ints(&product_poincare(Field::C, 4).unwrap()), vec![1, 1, 0, 1, 1]);
        assert_eq!(ints(&product_poincare(Field::H, 2).unwrap()), vec![1, 0, 0]);
        assert_eq!(ints(&product_poincare(Field::R, 0).unwrap()), vec![2]);
    }

    #[test]
    fn products_count_distinct_partitions() {
        let n = 60;
        let odd: Vec<usize> = (1..=n).filter(|i| i % 2 == 1).collect();
        let c = product_poincare(Field::C, n).unwrap();
        for deg in 0..=n {
            assert_eq!(c.coeff(deg).to_u128().unwrap(), distinct_partitions(deg, &odd));
        }
        let all: Vec<usize> = (1..=n).collect();
        let r = product_poincare(Field::R, n).unwrap();
        for deg in 0..=n {
            assert_eq!(r.coeff(deg).to_u128().unwrap(), 2 * distinct_partitions(deg, &all));
        }
    }

    #[test]
    fn series_agree() {
        for f in Field::ALL {
            for n in [0, 1, 7, 60, 120] {
                let cmp = series_compare(f, n).unwrap();
                assert!(cmp.equal, "{f} through {n}: mismatch at {:?}", cmp.first_mismatch);
                assert!(cmp.wedge.coeffs().iter().all(|c| c.sign() != num_bigint::Sign::Minus));
            }
        }
        assert!(series_compare(Field::R, MAX_DEGREE).unwrap().equal);
    }

    #[test]
    fn json_switches_to_strings_past_u64() {
        let big = BigInt::from(u64::MAX) + BigInt::from(1);
        let s = PowerSeries::from_coeffs(vec![BigInt::from(3), big.clone()]);
        assert_eq!(s.to_json(), json!([3, big.to_string()]));
    }

    #[test]
    fn ring_operations() {
        let a = PowerSeries::constant(1, 6).mul_one_plus(1);
        let b = PowerSeries::constant(1, 6).div_one_minus(1);
        // (1 + t)/(1 - t) = 1 + 2t + 2t^2 + ...
        assert_eq!(ints(&a.mul(&b)), vec![1, 2, 2, 2, 2, 2, 2]);
        assert_eq!(ints(&a.shift(5)), vec![0, 0, 0, 0, 0, 1, 1]);
        assert_eq!(a.first_difference(&b), Some(2));
    }

    #[test]
    fn thom_table() {
        let r: Vec<usize> = thom_dimension_table(Field::R, 0, 4).into_iter().map(|(_, d)| d).collect();
        assert_eq!(r, vec![0, 0, 1, 3, 6]);
        assert_eq!(thom_dimension_table(Field::C, 1, 1)[1], (1, 3));
        for f in Field::ALL {
            for m in 0..5 {
                assert_eq!(thom_dimension_table(f, m, 0), vec![(0, 0)]);
                let lo = thom_dimension_table(f, m, 6);
                let hi = thom_dimension_table(f, m + 1, 6);
                for k in 1..=6 {
                    assert_eq!(hi[k].1, lo[k].1 + f.real_dim() * k);
                }
            }
        }
    }
}
