//! Filtration of the Stiefel manifold by the rank of f − i, and chart coordinates on each stratum.

use kstiefel::stiefel::{
    filtration_level, galois_act, stratum_decompose, stratum_reconstruct, StiefelPoint, StratumCoords,
    StratumOutcome,
};
use kstiefel::{Quaternion, Scalar, ToleranceConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> kstiefel::Result<()> {
    let tol = ToleranceConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (n, m) = (4, 1);

    let incl = StiefelPoint::<Quaternion>::inclusion(n, m);
    println!("level of the inclusion: {}", filtration_level(&incl, &tol));

    for k in 1..=n {
        let s = StratumCoords::<Quaternion>::random(&mut rng, n, k, m)?;
        let p = stratum_reconstruct(&s, n, m, &tol)?;
        let level = filtration_level(&p, &tol);
        let StratumOutcome::Stratum(d) = stratum_decompose(&p, k, &tol)? else {
            unreachable!("point built on stratum {k}")
        };
        let again = stratum_reconstruct(&d, n, m, &tol)?;
        println!("k = {k}: level {level}, reconstruct(decompose(p)) − p = {:.2e}", again.max_abs_diff(&p)?);

        let g = Quaternion::random_galois(&mut rng);
        println!("        level after a Galois twist: {}", filtration_level(&galois_act(&g, &p)?, &tol));
    }

    let p = stratum_reconstruct(&StratumCoords::<Quaternion>::random(&mut rng, n, 2, m)?, n, m, &tol)?;
    match stratum_decompose(&p, 3, &tol)? {
        StratumOutcome::InLowerStratum { level } => println!("asked for stratum 3, point lies on {level}"),
        _ => unreachable!(),
    }
    Ok(())
}
