//! The embedding ζ of ad(k) into the tensor representation, and its twisted Galois equivariance.

use kstiefel::stiefel::{tensor_galois_action, zeta};
use kstiefel::{GaloisElement, KMatrix, Quaternion, Scalar};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> kstiefel::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let k = 3;
    let z = zeta::<Quaternion>(k)?;
    println!("ζ is {}x{}, isometry residual {:.2e}", z.matrix.rows(), z.matrix.cols(), z.matrix.isometry_residual());

    let x = KMatrix::<Quaternion>::random_skew(&mut rng, k);
    let g = GaloisElement::inner(Quaternion::new(0.3, -1.0, 0.2, 0.7))?;
    let lhs = z.apply(&x.galois_map(&g)?)?;
    let rhs = tensor_galois_action(&g, &z.apply(&x)?)?;
    println!("ζ(g·X) − g·ζ(X): {:.2e}", lhs.max_abs_diff(&rhs)?);

    let h = Quaternion::random_galois(&mut rng);
    let lhs = z.apply(&x.galois_map(&h)?)?;
    let rhs = tensor_galois_action(&h, &z.apply(&x)?)?;
    println!("random automorphism: {:.2e}", lhs.max_abs_diff(&rhs)?);

    println!("over R: {}", zeta::<f64>(k).unwrap_err());
    Ok(())
}
