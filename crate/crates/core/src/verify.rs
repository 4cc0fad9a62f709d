//! Randomized verification suites behind the `verify` subcommand.
//!
//! Trial `i` of a run with seed `s` draws its input from
//! `ChaCha8Rng::seed_from_u64(trial_seed(s, i))`, so every failure can be
//! replayed from the seed recorded in the report. Trials run in parallel and
//! are collected in trial order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::algebra::{Field, Scalar};
use crate::error::{Error, Result};
use crate::matk::{KMatrix, ToleranceConfig};
use crate::series::series_compare;
use crate::spectral::{complex_adjoint_matrix, eigh, polar_factor};
use crate::splitting::{
    collapse_cflat, collapse_composite, composite_f, dimension_check, hom_decompose, jacobian_origin_check,
    DEFAULT_STEP,
};
use crate::stiefel::{
    cayley, cayley_inv, conjugate_embedding, filtration_level, galois_act, stratum_decompose,
    stratum_reconstruct, tensor_galois_action, zeta, CayleyCoords, StratumCoords, StratumOutcome,
};
use crate::with_field;

/// Seed of trial `index` in a run seeded with `seed`.
pub fn trial_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index as u64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialFailure {
    pub seed: u64,
    pub digest: String,
    pub residual: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub suite: String,
    pub field: Field,
    pub trials: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub failures: Vec<TrialFailure>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "field": self.field,
            "trials": self.trials,
            "max_residual": real_json(self.max_residual),
            "tolerance": self.tolerance,
            "failures": self.failures.iter().map(|f| json!({
                "seed": f.seed,
                "digest": f.digest,
                "residual": real_json(f.residual),
                "error": f.error,
            })).collect::<Vec<_>>(),
        })
    }
}

fn real_json(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

/// Hex SHA-256 of the compact JSON encoding of a trial input.
pub fn input_digest(input: &Value) -> String {
    let hash = Sha256::digest(input.to_string().as_bytes());
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

type TrialFn = Box<dyn Fn(&mut ChaCha8Rng, usize) -> (Value, Result<f64>) + Send + Sync>;

/// A named family of randomized checks; each trial returns its input and a residual.
pub struct Suite {
    pub name: &'static str,
    pub field: Field,
    pub tolerance: f64,
    /// Number of trials when the suite is not randomized.
    pub fixed_trials: Option<usize>,
    trial: TrialFn,
}

impl Suite {
    fn new(
        name: &'static str,
        field: Field,
        tolerance: f64,
        trial: impl Fn(&mut ChaCha8Rng, usize) -> (Value, Result<f64>) + Send + Sync + 'static,
    ) -> Self {
        Suite { name, field, tolerance, fixed_trials: None, trial: Box::new(trial) }
    }

    fn fixed(mut self, n: usize) -> Self {
        self.fixed_trials = Some(n);
        self
    }

    pub fn run(&self, seed: u64, trials: usize) -> VerifyReport {
        let trials = self.fixed_trials.unwrap_or(trials);
        let outcomes: Vec<(u64, Value, Result<f64>)> = (0..trials)
            .into_par_iter()
            .map(|i| {
                let s = trial_seed(seed, i);
                let mut rng = ChaCha8Rng::seed_from_u64(s);
                let (input, r) = (self.trial)(&mut rng, i);
                (s, input, r)
            })
            .collect();
        let mut max_residual: f64 = 0.0;
        let mut failures = Vec::new();
        for (s, input, r) in outcomes {
            let (residual, error) = match r {
                Ok(x) if x.is_nan() => (f64::INFINITY, Some("residual is NaN".to_string())),
                Ok(x) => (x, None),
                Err(e) => (f64::INFINITY, Some(e.to_string())),
            };
            max_residual = max_residual.max(residual);
            if residual > self.tolerance || error.is_some() {
                failures.push(TrialFailure { seed: s, digest: input_digest(&input), residual, error });
            }
        }
        VerifyReport {
            suite: self.name.to_string(),
            field: self.field,
            trials,
            max_residual,
            tolerance: self.tolerance,
            failures,
        }
    }
}

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn sample_km(rng: &mut ChaCha8Rng, k_max: usize, m_max: usize) -> (usize, usize) {
    (rng.random_range(1..=k_max), rng.random_range(0..=m_max))
}

fn flag(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

fn cayley_isometry<S: Scalar>(rng: &mut ChaCha8Rng, _: usize) -> (Value, Result<f64>) {
    let (k, m) = sample_km(rng, 5, 5);
    let c = CayleyCoords::<S>::random(rng, k, m);
    (c.to_json(), cayley(&c, &tol()).map(|p| p.matrix().isometry_residual()))
}

fn cayley_round_trip<S: Scalar>(rng: &mut ChaCha8Rng, _: usize) -> (Value, Result<f64>) {
    let t = tol();
    let (k, m) = sample_km(rng, 5, 5);
    let c = CayleyCoords::<S>::random(rng, k, m);
    let c2 = CayleyCoords::<S>::random(rng, k, m);
    let input = json!([c.to_json(), c2.to_json()]);
    let r = (|| {
        let forward = cayley_inv(&cayley(&c, &t)?, &t)?.max_abs_diff(&c)?;
        let p = cayley(&c2, &t)?;
        let backward = cayley(&cayley_inv(&p, &t)?, &t)?.max_abs_diff(&p)?;
        Ok(forward.max(backward))
    })();
    (input, r)
}

fn eigh_reconstruction<S: Scalar>(rng: &mut ChaCha8Rng, _: usize) -> (Value, Result<f64>) {
    let k = rng.random_range(1..=8);
    let x = KMatrix::<S>::random_selfadjoint(rng, k);
    let r = (|| {
        let sd = eigh(&x, &tol())?;
        let rel = sd.reconstruct().max_abs_diff(&x)? / x.norm_max().max(f64::MIN_POSITIVE);
        // orthonormality has a tolerance ten times tighter than reconstruction
        Ok(rel.max(sd.q.isometry_residual() * 10.0))
    })();
    (x.to_json(), r)
}

/// Eigenvalues of a quaternionic matrix against those of its complex adjoint matrix.
fn eigh_embedding_oracle(rng: &mut ChaCha8Rng, _: usize) -> (Value, Result<f64>) {
    let k = rng.random_range(1..=8);
    let x = KMatrix::<crate::Quaternion>::random_selfadjoint(rng, k);
    let r = (|| {
        let ours = eigh(&x, &tol())?.lambda;
        let oracle = eigh(&complex_adjoint_matrix(&x), &tol())?.lambda;
        Ok(ours
            .iter()
            .enumerate()
            .flat_map(|(i, l)| [(l - oracle[2 * i]).abs(), (l - oracle[2 * i + 1]).abs()])
            .fold(0.0, f64::max))
    })();
    (x.to_json(), r)
}

fn polar<S: Scalar>(rng: &mut ChaCha8Rng, _: usize) -> (Value, Result<f64>) {
    let t = tol();
    let (k, m) = sample_km(rng, 5, 5);
    let b = KMatrix::<S>::random(rng, k + m, k);
    let r = (|| {
        let p = polar_factor(&b, &t)?;
        let rel = p.recombine(&t)?.max_abs_diff(&b)? / b.norm_max();
        Ok(rel.max(p.a.isometry_residual()).max(p.z.self_adjoint_residual()))
    })();
    (b.to_json(), r)
}

const JACOBIAN_SHAPES: [(usize, usize); 4] = [(1, 0), (2, 1), (2, 2), (3, 1)];

fn jacobian<S: Scalar>(_: &mut ChaCha8Rng, i: usize) -> (Value, Result<f64>) {
    let (k, m) = JACOBIAN_SHAPES[i];
    (json!({ "k": k, "m": m, "h": DEFAULT_STEP }), jacobian_origin_check::<S>(k, m, DEFAULT_STEP, &tol()))
}

fn filtration_invariance<S: Scalar>(rng: &mut ChaCha8Rng, _: usize) -> (Value, Result<f64>) {
    let t = tol();
    let n = rng.random_range(1..=6);
    let k = rng.random_range(0..=n.min(4));
    let m = rng.random_range(0..=3);
    let extra = rng.random_range(0..=2);
    let s = StratumCoords::<S>::random(rng, n, k, m).expect("k <= n");
    let psi = KMatrix::<S>::random_isometry(rng, n + extra, n).expect("n <= n + extra");
    let tau = S::random_galois(rng);
    let r = (|| {
        let f = stratum_reconstruct(&s, n, m, &t)?;
        let level = filtration_level(&f, &t);
        let moved = filtration_level(&conjugate_embedding(&psi, &f, &t)?, &t);
        let twisted = filtration_level(&galois_act(&tau, &f)?, &t);
        Ok(flag(level == k && moved == k && twisted == k))
    })();
    (json!([s.to_json(), psi.to_json()]), r)
}

fn stratum_round_trip<S: Scalar>(rng: &mut ChaCha8Rng, _: usize) -> (Value, Result<f64>) {
    let t = tol();
    let n = rng.random_range(1..=6);
    let k = rng.random_range(0..=n.min(4));
    let m = rng.random_range(0..=3);
    let s = StratumCoords::<S>::random(rng, n, k, m).expect("k <= n");
    let r = (|| {
        let p = stratum_reconstruct(&s, n, m, &t)?;
        if filtration_level(&p, &t) != k {
            return Ok(f64::INFINITY);
        }
        match stratum_decompose(&p, k, &t)? {
            StratumOutcome::Stratum(d) => stratum_reconstruct(&d, n, m, &t)?.max_abs_diff(&p),
            _ => Ok(f64::INFINITY),
        }
    })();
    (s.to_json(), r)
}

fn collapse_transitivity<S: Scalar>(rng: &mut ChaCha8Rng, _: usize) -> (Value, Result<f64>) {
    let t = tol();
    let (k, m) = sample_km(rng, 5, 4);
    let c = CayleyCoords::<S>::random(rng, k, m);
    let z = KMatrix::<S>::random_selfadjoint(rng, k).real_scale(0.5);
    let r = (|| {
        let f = composite_f(&c, &z, &t)?;
        let p = polar_factor(&f, &t)?;
        Ok(p.a.max_abs_diff(cayley(&c, &t)?.matrix())?.max(p.z.max_abs_diff(&z)?))
    })();
    (json!([c.to_json(), z.to_json()]), r)
}

fn collapse_lower_strata<S: Scalar>(rng: &mut ChaCha8Rng, _: usize) -> (Value, Result<f64>) {
    let t = tol();
    let k = rng.random_range(1..=4);
    let m = rng.random_range(0..=3);
    let s = StratumCoords::<S>::random(rng, k, k - 1, m).expect("k - 1 <= k");
    let r = (|| {
        let p = stratum_reconstruct(&s, k, m, &t)?;
        let lower = filtration_level(&p, &t) < k;
        let cflat = collapse_cflat(&p, &t)?.is_basepoint();
        let composite = collapse_composite(&hom_decompose(p.matrix())?, &t)?.is_basepoint();
        Ok(flag(lower && cflat && composite))
    })();
    (s.to_json(), r)
}

fn zeta_laws<S: Scalar>(rng: &mut ChaCha8Rng, _: usize) -> (Value, Result<f64>) {
    let k = rng.random_range(1..=4);
    let x = KMatrix::<S>::random(rng, k, 1);
    let y = KMatrix::<S>::random(rng, k, 1);
    let g = S::random_galois(rng);
    let r = (|| {
        let z = zeta::<S>(k)?;
        let iso = z.matrix.isometry_residual();
        let (zx, zy) = (z.apply(&x)?, z.apply(&y)?);
        let ip = crate::matk::inner_product(&x, &y)?;
        let pairing = (crate::matk::inner_product(&zx, &zy)? - ip).norm() / (1.0 + ip.norm());
        let equi = z.apply(&x.galois_map(&g)?)?.max_abs_diff(&tensor_galois_action(&g, &zx)?)?
            / (1.0 + x.norm_max());
        Ok(iso.max(pairing).max(equi))
    })();
    (json!([x.to_json(), y.to_json()]), r)
}

fn series_shadow(field: Field) -> impl Fn(&mut ChaCha8Rng, usize) -> (Value, Result<f64>) {
    move |_, _| (json!({ "N": 120 }), series_compare(field, 120).map(|c| flag(c.equal)))
}

fn dimension_ledger<S: Scalar>(_: &mut ChaCha8Rng, k: usize) -> (Value, Result<f64>) {
    (json!({ "k": k }), Ok(flag(dimension_check::<S>(k).ok())))
}

/// All suites for `field`, in report order.
pub fn suites(field: Field) -> Vec<Suite> {
    with_field!(field, S => {
        let mut v = vec![
            Suite::new("cayley-isometry", field, 1e-10, cayley_isometry::<S>),
            Suite::new("cayley-round-trip", field, 1e-8, cayley_round_trip::<S>),
            Suite::new("eigh-reconstruction", field, 1e-9, eigh_reconstruction::<S>),
        ];
        if field == Field::H {
            v.push(Suite::new("eigh-embedding-oracle", field, 1e-8, eigh_embedding_oracle));
        }
        v.extend([
            Suite::new("polar", field, 1e-8, polar::<S>),
            Suite::new("jacobian-origin", field, 5e-4, jacobian::<S>).fixed(JACOBIAN_SHAPES.len()),
            Suite::new("filtration-invariance", field, 0.0, filtration_invariance::<S>),
            Suite::new("stratum-round-trip", field, 1e-8, stratum_round_trip::<S>),
            Suite::new("collapse-transitivity", field, 1e-8, collapse_transitivity::<S>),
            Suite::new("collapse-lower-strata", field, 0.0, collapse_lower_strata::<S>),
        ]);
        if field != Field::R {
            v.push(Suite::new("zeta", field, 1e-12, zeta_laws::<S>));
        }
        v.push(Suite::new("series-shadow", field, 0.0, series_shadow(field)).fixed(1));
        v.push(Suite::new("dimension-ledger", field, 0.0, dimension_ledger::<S>).fixed(13));
        v
    })
}

/// Runs every suite for each field in `fields`.
pub fn run_all(fields: &[Field], seed: u64, trials: usize) -> Result<Vec<VerifyReport>> {
    if trials == 0 {
        return Err(Error::InvalidInput("--trials must be positive".into()));
    }
    Ok(fields.iter().flat_map(|&f| suites(f)).map(|s| s.run(seed, trials)).collect())
}
