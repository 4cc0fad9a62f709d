//! Pontryagin-Thom collapses t and c♭, their composite, and the Jacobian of F at the origin.

use kstiefel::splitting::{
    collapse_cflat, collapse_composite, collapse_t, hom_decompose, jacobian_origin_check, DEFAULT_STEP,
};
use kstiefel::stiefel::{cayley, CayleyCoords, StiefelPoint};
use kstiefel::{KMatrix, Quaternion, ToleranceConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> kstiefel::Result<()> {
    let tol = ToleranceConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (k, m) = (2, 1);

    let b = KMatrix::<Quaternion>::random(&mut rng, k + m, k);
    let t = collapse_t(&hom_decompose(&b)?, &tol)?;
    println!("t(B) is basepoint: {}", t.is_basepoint());

    let c = CayleyCoords::<Quaternion>::random(&mut rng, k, m);
    let p = cayley(&c, &tol)?;
    let back = collapse_cflat(&p, &tol)?.point().expect("top stratum");
    println!("c♭(c(Y, X)) − (Y, X): {:.2e}", back.max_abs_diff(&c)?);
    println!("c♭(inclusion) is basepoint: {}", collapse_cflat(&StiefelPoint::<Quaternion>::inclusion(k, m), &tol)?.is_basepoint());

    let rank_one = KMatrix::<Quaternion>::random(&mut rng, k + m, 1).matmul(&KMatrix::random(&mut rng, 1, k))?;
    println!("composite on a rank-one map is basepoint: {}", collapse_composite(&hom_decompose(&rank_one)?, &tol)?.is_basepoint());

    for (k, m) in [(1, 0), (2, 1), (3, 2)] {
        let err = jacobian_origin_check::<Quaternion>(k, m, DEFAULT_STEP, &tol)?;
        println!("k = {k}, m = {m}: |DF(0) − I| = {err:.2e}");
    }
    Ok(())
}
