//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p kstiefel --test acceptance`.

mod common;

use std::time::{Duration, Instant};

use kstiefel::matk::{dim_ad, dim_sa, inner_product};
use kstiefel::series::series_compare;
use kstiefel::spectral::{eigh, polar_factor};
use kstiefel::splitting::{collapse_cflat, collapse_composite, composite_f, hom_decompose, jacobian_origin};
use kstiefel::stiefel::{
    cayley, cayley_inv, conjugate_embedding, filtration_level, galois_act, stratum_decompose, stratum_reconstruct,
    tensor_galois_action, zeta, CayleyCoords, StiefelPoint, StratumCoords, StratumOutcome,
};
use kstiefel::{Complex64, Field, KMatrix, Quaternion, Scalar, ToleranceConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{oracle_eigenvalues, oracle_rank, real_rank};

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn rng(criterion: u64, field: Field) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(1000 * criterion + field.real_dim() as u64)
}

/// Runs `f` once per field and folds the per-field maxima.
fn per_field(f: impl Fn(Field) -> Result<f64, String>) -> Result<f64, String> {
    Field::ALL.iter().try_fold(0.0f64, |acc, &field| Ok(acc.max(f(field)?)))
}

macro_rules! dispatch {
    ($field:expr, $fun:ident $(, $arg:expr)*) => {
        match $field {
            Field::R => $fun::<f64>($($arg),*),
            Field::C => $fun::<Complex64>($($arg),*),
            Field::H => $fun::<Quaternion>($($arg),*),
        }
    };
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// `‖g*g + h*h − I‖_max` assembled from the two blocks.
fn cayley_isometry<S: Scalar>(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let t = tol();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (k, m) = (rng.random_range(1..=5), rng.random_range(0..=5));
        let p = cayley(&CayleyCoords::<S>::random(rng, k, m), &t).map_err(err)?;
        let (g, h) = (p.top(), p.bottom());
        let gram = g.adjoint().matmul(&g).map_err(err)?.add(&h.adjoint().matmul(&h).map_err(err)?).map_err(err)?;
        worst = worst.max(gram.max_abs_diff(&KMatrix::identity(k)).map_err(err)?);
    }
    Ok(worst)
}

fn cayley_bijective<S: Scalar>(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let t = tol();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (k, m) = (rng.random_range(1..=5), rng.random_range(0..=5));
        let c = CayleyCoords::<S>::random(rng, k, m);
        let back = cayley_inv(&cayley(&c, &t).map_err(err)?, &t).map_err(err)?;
        worst = worst.max(back.max_abs_diff(&c).map_err(err)?);

        let p = cayley(&CayleyCoords::<S>::random(rng, k, m), &t).map_err(err)?;
        let again = cayley(&cayley_inv(&p, &t).map_err(err)?, &t).map_err(err)?;
        worst = worst.max(again.max_abs_diff(&p).map_err(err)?);
    }
    Ok(worst)
}

/// `c∘λ` on Haar-random isometric embeddings that the singular-value oracle puts on
/// the top stratum. Reported alongside criterion 2, not gated: near `ker(1 − g) ≠ 0`
/// the inverse is ill-conditioned and the absolute residual grows like `cond(1 − g)·ε`.
fn cayley_on_haar_points<S: Scalar>(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let t = tol();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (k, m) = (rng.random_range(1..=5), rng.random_range(0..=5));
        // over R with m = 0 and k odd a rotation fixes a line, hence the rejection
        let p = loop {
            let f = KMatrix::<S>::random_isometry(rng, k + m, k).map_err(err)?;
            let p = StiefelPoint::new(f, m, &t).map_err(err)?;
            if oracle_level(&p) == k {
                break p;
            }
        };
        let again = cayley(&cayley_inv(&p, &t).map_err(err)?, &t).map_err(err)?;
        worst = worst.max(again.max_abs_diff(&p).map_err(err)?);
    }
    Ok(worst)
}

fn quaternionic_spectral() -> Result<(f64, f64, f64), String> {
    let t = tol();
    let mut rng = rng(3, Field::H);
    let (mut recon, mut ortho, mut eig) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..500 {
        let k = rng.random_range(1..=8);
        let x = KMatrix::<Quaternion>::random_selfadjoint(&mut rng, k);
        let sd = eigh(&x, &t).map_err(err)?;
        let qd = sd.q.matmul(&KMatrix::diag_real(&sd.lambda)).map_err(err)?;
        let rebuilt = qd.matmul(&sd.q.adjoint()).map_err(err)?;
        recon = recon.max(rebuilt.max_abs_diff(&x).map_err(err)? / x.norm_max());
        ortho = ortho.max(sd.q.adjoint().matmul(&sd.q).map_err(err)?.max_abs_diff(&KMatrix::identity(k)).map_err(err)?);
        let oracle = oracle_eigenvalues(&x);
        for (i, l) in sd.lambda.iter().enumerate() {
            eig = eig.max((l - oracle[2 * i]).abs()).max((l - oracle[2 * i + 1]).abs());
        }
    }
    Ok((recon, ortho, eig))
}

fn polar<S: Scalar>(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let t = tol();
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let (k, m) = (rng.random_range(1..=5), rng.random_range(0..=5));
        let b = KMatrix::<S>::random(rng, k + m, k);
        let p = polar_factor(&b, &t).map_err(err)?;
        if !p.a.is_isometry(&t) {
            return Err(format!("A not isometric ({:e})", p.a.isometry_residual()));
        }
        if p.z.self_adjoint_residual() > 1e-12 * p.z.norm_max().max(1.0) {
            return Err(format!("Z not self-adjoint ({:e})", p.z.self_adjoint_residual()));
        }
        worst = worst.max(p.recombine(&t).map_err(err)?.max_abs_diff(&b).map_err(err)? / b.norm_max());
    }
    Ok(worst)
}

fn jacobian<S: Scalar>() -> Result<f64, String> {
    let mut worst = 0.0f64;
    for (k, m) in [(1, 0), (2, 1), (2, 2), (3, 1)] {
        let j = jacobian_origin::<S>(k, m, 1e-4, &tol()).map_err(err)?;
        let dim = S::real_dim() * (k * k + k * m);
        if j.len() != dim || j.iter().any(|r| r.len() != dim) {
            return Err(format!("Jacobian for k = {k}, m = {m} is not {dim} x {dim}"));
        }
        for (i, row) in j.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                worst = worst.max((v - if i == c { 1.0 } else { 0.0 }).abs());
            }
        }
    }
    Ok(worst)
}

/// Level of `f` from the singular values of `f − i₁`.
fn oracle_level<S: Scalar>(p: &StiefelPoint<S>) -> usize {
    oracle_rank(&p.displacement(), 1e-8)
}

fn random_point<S: Scalar>(rng: &mut ChaCha8Rng, n: usize, m: usize) -> (StiefelPoint<S>, usize) {
    let k = rng.random_range(0..=n);
    let s = StratumCoords::<S>::random(rng, n, k, m).expect("k <= n");
    (stratum_reconstruct(&s, n, m, &tol()).expect("valid coordinates"), k)
}

fn filtration_invariance<S: Scalar>(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let t = tol();
    let mut failures = 0usize;
    for _ in 0..200 {
        let (n, m, extra) = (rng.random_range(1..=5), rng.random_range(0..=3), rng.random_range(0..=3));
        let (f, k) = random_point::<S>(rng, n, m);
        let psi = KMatrix::<S>::random_isometry(rng, n + extra, n).map_err(err)?;
        let tau = S::random_galois(rng);
        let conj = conjugate_embedding(&psi, &f, &t).map_err(err)?;
        let twisted = galois_act(&tau, &f).map_err(err)?;
        let levels = [filtration_level(&f, &t), filtration_level(&conj, &t), filtration_level(&twisted, &t)];
        let oracles = [oracle_level(&f), oracle_level(&conj), oracle_level(&twisted)];
        if levels.iter().chain(&oracles).any(|&l| l != k) {
            failures += 1;
        }
    }
    Ok(failures as f64)
}

fn stratum_round_trip<S: Scalar>(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let t = tol();
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let n = rng.random_range(1..=6);
        let k = rng.random_range(0..=n.min(4));
        let m = rng.random_range(0..=3);
        let s = StratumCoords::<S>::random(rng, n, k, m).map_err(err)?;
        let p = stratum_reconstruct(&s, n, m, &t).map_err(err)?;
        if filtration_level(&p, &t) != k || oracle_level(&p) != k {
            return Err(format!("level of a reconstructed point differs from k = {k}"));
        }
        let StratumOutcome::Stratum(d) = stratum_decompose(&p, k, &t).map_err(err)? else {
            return Err("decompose did not land on the stratum".into());
        };
        worst = worst.max(stratum_reconstruct(&d, n, m, &t).map_err(err)?.max_abs_diff(&p).map_err(err)?);
    }
    Ok(worst)
}

fn collapse_transitivity<S: Scalar>(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let t = tol();
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let (k, m) = (rng.random_range(1..=5), rng.random_range(0..=4));
        let c = CayleyCoords::<S>::random(rng, k, m);
        let z = KMatrix::<S>::random_selfadjoint(rng, k).real_scale(0.5);
        let f = composite_f(&c, &z, &t).map_err(err)?;
        if oracle_rank(&f, 1e-8) != k {
            return Err("F(Y, X, Z) is not injective".into());
        }
        let p = polar_factor(&f, &t).map_err(err)?;
        worst = worst.max(p.a.max_abs_diff(cayley(&c, &t).map_err(err)?.matrix()).map_err(err)?);
        worst = worst.max(p.z.max_abs_diff(&z).map_err(err)?);
    }
    for trial in 0..100 {
        let k = 1 + trial % 4;
        let m = rng.random_range(0..=3);
        let s = StratumCoords::<S>::random(rng, k, k - 1, m).map_err(err)?;
        let p = stratum_reconstruct(&s, k, m, &t).map_err(err)?;
        let lower = oracle_level(&p) < k;
        let cflat = collapse_cflat(&p, &t).map_err(err)?.is_basepoint();
        let composite = collapse_composite(&hom_decompose(p.matrix()).map_err(err)?, &t).map_err(err)?.is_basepoint();
        if !(lower && cflat && composite) {
            return Err(format!("basepoint loci disagree: lower {lower}, c-flat {cflat}, composite {composite}"));
        }
        let top = cayley(&CayleyCoords::<S>::random(rng, k, m), &t).map_err(err)?;
        if collapse_cflat(&top, &t).map_err(err)?.is_basepoint()
            || collapse_composite(&hom_decompose(top.matrix()).map_err(err)?, &t).map_err(err)?.is_basepoint()
        {
            return Err("a top-stratum point collapsed to the basepoint".into());
        }
    }
    Ok(worst)
}

/// `(l_τ ⊗ τ)` on `K^(dk)` with the real matrix of `τ` read off from its action on `1, i, j, k`.
fn twisted_action_oracle<S: Scalar>(tau: &kstiefel::GaloisElement, v: &KMatrix<S>) -> KMatrix<S> {
    let d = S::real_dim();
    let image: Vec<S> = (0..d).map(|l| S::unit(l).apply_galois(tau).unwrap()).collect();
    KMatrix::from_fn(v.rows(), 1, |row, _| {
        let (a, lp) = (row / d, row % d);
        (0..d).fold(S::zero(), |acc, l| acc + v.get(a * d + l, 0).apply_galois(tau).unwrap().scale(image[l].coeff(lp)))
    })
}

fn zeta_laws<S: Scalar>(rng: &mut ChaCha8Rng) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let k = rng.random_range(1..=4);
        let z = zeta::<S>(k).map_err(err)?;
        let x = KMatrix::<S>::random(rng, k, 1);
        let y = KMatrix::<S>::random(rng, k, 1);
        let tau = S::random_galois(rng);
        let (zx, zy) = (z.apply(&x).map_err(err)?, z.apply(&y).map_err(err)?);
        let ip = inner_product(&x, &y).map_err(err)?;
        worst = worst.max(z.matrix.isometry_residual());
        worst = worst.max((inner_product(&zx, &zy).map_err(err)? - ip).norm() / (1.0 + ip.norm()));
        let lhs = z.apply(&x.galois_map(&tau).map_err(err)?).map_err(err)?;
        let rhs = twisted_action_oracle(&tau, &zx);
        let lib = tensor_galois_action(&tau, &zx).map_err(err)?;
        worst = worst.max(lhs.max_abs_diff(&rhs).map_err(err)? / (1.0 + x.norm_max()));
        worst = worst.max(lib.max_abs_diff(&rhs).map_err(err)? / (1.0 + x.norm_max()));
    }
    Ok(worst)
}

/// Coefficients of `Σ_n q^{e(n)} / Π_{j≤n}(1 − q^{dj})` and of the distinct-part product, by counting.
fn series_oracle(field: Field, n: usize) -> (Vec<u128>, Vec<u128>) {
    let d = field.real_dim();
    let shift = |k: usize| match field {
        Field::R => k * k.saturating_sub(1) / 2,
        Field::C => k * k,
        Field::H => k * (2 * k + 1),
    };
    let mut wedge = vec![0u128; n + 1];
    let mut k = 0;
    while shift(k) <= n {
        // partitions into parts from {d, 2d, ..., kd}
        let mut count = vec![0u128; n + 1];
        count[0] = 1;
        for j in 1..=k {
            for deg in d * j..=n {
                count[deg] += count[deg - d * j];
            }
        }
        for deg in shift(k)..=n {
            wedge[deg] += count[deg - shift(k)];
        }
        k += 1;
    }
    let parts: Vec<usize> = match field {
        Field::R => (1..=n).collect(),
        Field::C => (1..=n).filter(|i| i % 2 == 1).collect(),
        Field::H => (1..=n).filter(|i| i % 4 == 3).collect(),
    };
    let mut product = vec![0u128; n + 1];
    product[0] = if field == Field::R { 2 } else { 1 };
    for p in parts {
        for deg in (p..=n).rev() {
            product[deg] += product[deg - p];
        }
    }
    (wedge, product)
}

fn series_shadow() -> Result<f64, String> {
    for field in Field::ALL {
        let c = series_compare(field, 120).map_err(err)?;
        if !c.equal || c.first_mismatch.is_some() {
            return Err(format!("{field}: first mismatch at {:?}", c.first_mismatch));
        }
        let (wedge, product) = series_oracle(field, 120);
        let lib: Vec<String> = c.wedge.coeffs().iter().map(|x| x.to_string()).collect();
        if lib != wedge.iter().map(u128::to_string).collect::<Vec<_>>()
            || lib != product.iter().map(u128::to_string).collect::<Vec<_>>()
        {
            return Err(format!("{field}: coefficients disagree with the counting oracle"));
        }
    }
    Ok(0.0)
}

/// Real dimension of the image of `Hom(K^k, K^k)` under `M ↦ M ∓ M*`, from matrix units.
///
/// The map only couples the entries `(a, b)` and `(b, a)`, so the rank is summed
/// over those blocks: the images of the `2d` (or `d` on the diagonal) units
/// supported there, restricted to the same coordinates.
fn projected_dim<S: Scalar>(k: usize, skew: bool) -> usize {
    let d = S::real_dim();
    let mut total = 0;
    for a in 0..k {
        for b in a..k {
            let entries: Vec<(usize, usize)> = if a == b { vec![(a, a)] } else { vec![(a, b), (b, a)] };
            let images: Vec<Vec<f64>> = entries
                .iter()
                .flat_map(|&(i, j)| (0..d).map(move |c| (i, j, c)))
                .map(|(i, j, c)| {
                    let u = KMatrix::<S>::from_fn(k, k, |r, s| if (r, s) == (i, j) { S::unit(c) } else { S::zero() });
                    let adj = u.adjoint();
                    let p = if skew { u.sub(&adj) } else { u.add(&adj) }.unwrap();
                    let mut coords = Vec::with_capacity(entries.len() * d);
                    for &(r, s) in &entries {
                        coords.extend((0..d).map(|c| p.get(r, s).coeff(c)));
                    }
                    coords
                })
                .collect();
            total += real_rank(&images, 1e-9);
        }
    }
    total
}

fn dimension_ledger() -> Result<f64, String> {
    let cases: Vec<(Field, usize)> = Field::ALL.iter().flat_map(|&f| (0..=12).map(move |k| (f, k))).collect();
    cases.into_iter().try_for_each(|(field, k)| {
        let (a, s) = (dim_ad(field, k), dim_sa(field, k));
        if a + s != field.real_dim() * k * k {
            return Err(format!("{field}, k = {k}: {a} + {s}"));
        }
        let (oa, os) = dispatch!(field, projected_dims, k);
        if (oa, os) != (a, s) {
            return Err(format!("{field}, k = {k}: enumeration gives ({oa}, {os}), formulas ({a}, {s})"));
        }
        Ok(())
    })?;
    Ok(0.0)
}

fn projected_dims<S: Scalar>(k: usize) -> (usize, usize) {
    (projected_dim::<S>(k, true), projected_dim::<S>(k, false))
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn threshold(value: Result<f64, String>, bound: f64, strict: bool) -> Outcome {
    match value {
        Ok(v) => Outcome {
            passed: if strict { v < bound } else { v <= bound },
            detail: format!("max {v:.3e} {} {bound:e}", if strict { "<" } else { "<=" }),
        },
        Err(e) => Outcome { passed: false, detail: format!("error: {e}") },
    }
}

fn main() {
    type Check = Box<dyn Fn() -> Outcome>;
    let criteria: Vec<(&str, Duration, Check)> = vec![
        (
            "Cayley isometry",
            Duration::from_secs(5),
            Box::new(|| threshold(per_field(|f| dispatch!(f, cayley_isometry, &mut rng(1, f))), 1e-10, false)),
        ),
        (
            "Cayley bijectivity",
            Duration::from_secs(5),
            Box::new(|| threshold(per_field(|f| dispatch!(f, cayley_bijective, &mut rng(2, f))), 1e-8, false)),
        ),
        (
            "spectral theorem over H",
            Duration::from_secs(30),
            Box::new(|| match quaternionic_spectral() {
                Ok((r, o, e)) => Outcome {
                    passed: r <= 1e-9 && o <= 1e-10 && e <= 1e-8,
                    detail: format!(
                        "reconstruction {r:.3e} <= 1e-9, orthonormality {o:.3e} <= 1e-10, oracle eigenvalues {e:.3e} <= 1e-8"
                    ),
                },
                Err(e) => Outcome { passed: false, detail: e },
            }),
        ),
        (
            "polar factorization",
            Duration::from_secs(10),
            Box::new(|| threshold(per_field(|f| dispatch!(f, polar, &mut rng(4, f))), 1e-8, false)),
        ),
        (
            "differential at the origin",
            Duration::from_secs(20),
            Box::new(|| threshold(per_field(|f| dispatch!(f, jacobian)), 5e-4, true)),
        ),
        (
            "filtration invariance (failures)",
            Duration::from_secs(10),
            Box::new(|| threshold(per_field(|f| dispatch!(f, filtration_invariance, &mut rng(6, f))), 0.0, false)),
        ),
        (
            "stratum round trip",
            Duration::from_secs(30),
            Box::new(|| threshold(per_field(|f| dispatch!(f, stratum_round_trip, &mut rng(7, f))), 1e-8, false)),
        ),
        (
            "collapse transitivity",
            Duration::from_secs(10),
            Box::new(|| threshold(per_field(|f| dispatch!(f, collapse_transitivity, &mut rng(8, f))), 1e-8, false)),
        ),
        (
            "zeta isometry and equivariance",
            Duration::from_secs(2),
            Box::new(|| {
                let r = [Field::C, Field::H]
                    .iter()
                    .try_fold(0.0f64, |acc, &f| Ok(acc.max(dispatch!(f, zeta_laws, &mut rng(9, f))?)));
                threshold(r, 1e-12, false)
            }),
        ),
        ("splitting series shadow", Duration::from_secs(1), Box::new(|| threshold(series_shadow(), 0.0, false))),
        ("dimension ledger", Duration::from_secs(1), Box::new(|| threshold(dimension_ledger(), 0.0, false))),
    ];

    match per_field(|f| dispatch!(f, cayley_on_haar_points, &mut rng(12, f))) {
        Ok(v) => println!("INFO  2 c∘λ on Haar-random top-stratum embeddings: max {v:.3e} (not gated)"),
        Err(e) => println!("INFO  2 c∘λ on Haar-random top-stratum embeddings: error: {e}"),
    }

    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let in_time = elapsed < *budget;
        let passed = outcome.passed && in_time;
        if !passed {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {}; {:.2}s {} {}s",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            outcome.detail,
            elapsed.as_secs_f64(),
            if in_time { "<" } else { ">=" },
            budget.as_secs()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
