//! Polar factorization B = A·exp(−Z) with square roots and logarithms of positive matrices.

use kstiefel::spectral::{exp_selfadjoint, log_posdef, polar_factor, sqrt_posdef};
use kstiefel::{Complex64, KMatrix, ToleranceConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> kstiefel::Result<()> {
    let tol = ToleranceConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let b = KMatrix::<Complex64>::random(&mut rng, 5, 3);

    let p = polar_factor(&b, &tol)?;
    println!("A isometry residual {:.2e}", p.a.isometry_residual());
    println!("Z self-adjoint residual {:.2e}", p.z.self_adjoint_residual());
    let back = p.a.matmul(&exp_selfadjoint(&p.z.neg(), &tol)?)?;
    println!("A·exp(−Z) − B: {:.2e}", back.max_abs_diff(&b)?);

    let gram = b.adjoint().matmul(&b)?;
    let s = sqrt_posdef(&gram, &tol)?;
    println!("sqrt² − B*B: {:.2e}", s.matmul(&s)?.max_abs_diff(&gram)?);
    println!("exp(log) − B*B: {:.2e}", exp_selfadjoint(&log_posdef(&gram, &tol)?, &tol)?.max_abs_diff(&gram)?);

    let flat = KMatrix::<Complex64>::random(&mut rng, 3, 1).matmul(&KMatrix::random(&mut rng, 1, 2))?;
    println!("rank-deficient input: {}", polar_factor(&flat, &tol).unwrap_err());
    Ok(())
}
