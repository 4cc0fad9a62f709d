//! The Cayley chart onto the top stratum of the Stiefel manifold and its inverse.

use kstiefel::stiefel::{cayley, cayley_h_direct, cayley_inv, filtration_level, CayleyCoords};
use kstiefel::{KMatrix, Quaternion, ToleranceConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> kstiefel::Result<()> {
    let tol = ToleranceConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (k, m) = (3, 2);

    let c = CayleyCoords::<Quaternion>::random(&mut rng, k, m);
    let p = cayley(&c, &tol)?;
    println!("f is {}x{}, isometry residual {:.2e}", p.n() + p.m(), p.n(), p.matrix().isometry_residual());
    println!("filtration level {} (k = {k})", filtration_level(&p, &tol));

    let h = cayley_h_direct(&c, &tol)?;
    println!("bottom block vs direct h: {:.2e}", p.bottom().max_abs_diff(&h)?);

    let back = cayley_inv(&p, &tol)?;
    println!("round trip error {:.2e}", back.max_abs_diff(&c)?);

    // equivariance under the unitary group of K^k
    let a = KMatrix::<Quaternion>::random_isometry(&mut rng, k, k)?;
    let moved = cayley(&c.conjugate_by(&a)?, &tol)?;
    let expected = a.direct_sum(&KMatrix::identity(m)).matmul(p.matrix())?.matmul(&a.adjoint())?;
    println!("equivariance error {:.2e}", moved.matrix().max_abs_diff(&expected)?);

    let origin = cayley(&CayleyCoords::<Quaternion>::zero(k, m), &tol)?;
    println!("c(0, 0) − inclusion: max entry {}", origin.displacement().norm_max());
    Ok(())
}
