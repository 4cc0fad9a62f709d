//! Linear algebra on Stiefel manifolds over `R`, `C` and `H`.
//!
//! The crate covers the explicit maps behind the eigenspace filtration of
//! `L(W, W ⊕ K^m)`: the Cayley open embedding and its inverse, polar-type
//! factorization, spectral decomposition of self-adjoint matrices, stratum
//! coordinates, collapse maps, and the automorphism actions. The [`series`]
//! module checks the Poincaré-series identity that the stable splitting of
//! these Stiefel manifolds predicts, with exact integers.
//!
//! Everything numerical is generic over [`Scalar`], implemented for `f64`,
//! [`Complex64`](num_complex::Complex64) and [`Quaternion`].

pub mod algebra;
pub mod cli;
pub mod error;
pub mod matk;
pub mod series;
pub mod spectral;
pub mod splitting;
pub mod stiefel;
pub mod verify;

pub use algebra::{Field, GaloisElement, Quaternion, Scalar, ScalarValue};
pub use error::{Error, Result};
pub use matk::{KMatrix, RankProfile, ToleranceConfig};
pub use num_complex::Complex64;

/// Runs `$body` with the type alias `$S` bound to the scalar type of `$field`.
#[macro_export]
macro_rules! with_field {
    ($field:expr, $S:ident => $body:expr) => {
        match $field {
            $crate::Field::R => {
                type $S = f64;
                $body
            }
            $crate::Field::C => {
                type $S = $crate::Complex64;
                $body
            }
            $crate::Field::H => {
                type $S = $crate::Quaternion;
                $body
            }
        }
    };
}
