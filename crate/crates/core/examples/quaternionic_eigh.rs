//! Self-adjoint eigendecomposition over H, checked against the complex adjoint matrix.

use kstiefel::spectral::{complex_adjoint_matrix, eigh, exp_selfadjoint, exp_matrix};
use kstiefel::{KMatrix, Quaternion, ToleranceConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> kstiefel::Result<()> {
    let tol = ToleranceConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let a = KMatrix::<Quaternion>::random_selfadjoint(&mut rng, 4);

    let d = eigh(&a, &tol)?;
    println!("eigenvalues {:?}", d.lambda.iter().map(|l| format!("{l:.6}")).collect::<Vec<_>>());
    println!("Q*Q - I: {:.2e}", d.q.isometry_residual());
    println!("Q Λ Q* - A: {:.2e}", d.reconstruct().max_abs_diff(&a)?);

    // each eigenvalue shows up twice in the 8x8 complex form
    let c = eigh(&complex_adjoint_matrix(&a), &tol)?;
    println!("complex form eigenvalues {:?}", c.lambda.iter().map(|l| format!("{l:.6}")).collect::<Vec<_>>());

    let e1 = exp_selfadjoint(&a, &tol)?;
    let e2 = exp_matrix(&a)?;
    println!("spectral exp vs Padé exp: {:.2e}", e1.max_abs_diff(&e2)?);
    Ok(())
}
