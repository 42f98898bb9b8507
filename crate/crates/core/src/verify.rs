//! End-to-end checks of the main theorems at desk scale. Each check returns
//! a [`CheckResult`]; [`run_all`] runs the full suite at one of two scales.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::arith::{euler_phi, kronecker_symbol, PrimeSieve};
use crate::artin::{decomposition_type_cyclotomic, splitting_pattern, IntPoly};
use crate::cohomology::{build_permutation_module, direct_sum, herbrand_components, random_finite_module};
use crate::density::{ideal_count_slope, progression_density, quadratic_split_density, DensityConfig};
use crate::error::{Error, Result};
use crate::forms::{known_class_polynomial, represent_prime};
use crate::ideals::{decompose_prime, QuadIdeal, DEFAULT_ENUMERATION_CAP};
use crate::oracle::{hilbert_by_hensel_search, ray_class_count_q_brute};
use crate::padic::{hilbert_product, hilbert_symbol, padic_exp, padic_log, square_class_representatives, PadicNumber, Place};
use crate::quadfield::QuadOrder;
use crate::rayclass::{ray_class_number, Modulus};

pub const DEFAULT_SEED: u64 = 20_240_601;

/// Discriminants used for the quadratic decomposition bookkeeping.
pub const FIXTURE_DISCRIMINANTS: [i64; 16] = [-3, -4, -7, -8, -15, -20, -23, -24, -56, -84, 5, 8, 12, 13, 21, 60];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Quick,
    Full,
}

impl Profile {
    fn scale(&self, full: u64) -> u64 {
        match self {
            Profile::Quick => (full / 10).max(1),
            Profile::Full => full,
        }
    }
}

impl FromStr for Profile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Profile::Quick),
            "full" => Ok(Profile::Full),
            _ => Err(Error::Parse(format!("unknown profile {s:?} (quick or full)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u64,
    pub time_limit_ms: Option<u64>,
}

fn timed<F: FnOnce() -> Result<(bool, String)>>(name: &str, limit: Option<Duration>, f: F) -> CheckResult {
    let start = Instant::now();
    let outcome = f();
    let elapsed = start.elapsed();
    let (ok, detail) = match outcome {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let detail = if ok && !in_time { format!("{detail}; exceeded time limit") } else { detail };
    CheckResult {
        name: name.to_string(),
        passed: ok && in_time,
        detail,
        elapsed_ms: elapsed.as_millis() as u64,
        time_limit_ms: limit.map(|l| l.as_millis() as u64),
    }
}

fn odd_primes_below(limit: u64) -> Vec<u64> {
    if limit <= 3 {
        return Vec::new();
    }
    PrimeSieve::default().primes(3, limit - 1)
}

/// `(p/q)(q/p) = (-1)^((p-1)/2 · (q-1)/2)` for odd primes `p < q < limit`.
pub fn check_reciprocity(limit: u64) -> CheckResult {
    timed("quadratic reciprocity", Some(Duration::from_secs(1)), || {
        let primes = odd_primes_below(limit);
        let mut pairs = 0u64;
        let mut failures = Vec::new();
        for (i, &p) in primes.iter().enumerate() {
            for &q in &primes[i + 1..] {
                let lhs = kronecker_symbol(p as i64, q as i64)? * kronecker_symbol(q as i64, p as i64)?;
                let rhs = if ((p - 1) / 2 * ((q - 1) / 2)) % 2 == 0 { 1 } else { -1 };
                pairs += 1;
                if lhs != rhs {
                    failures.push((p, q));
                }
            }
        }
        Ok((failures.is_empty(), format!("{pairs} pairs below {limit}, {} failures", failures.len())))
    })
}

/// `x^4 + 1` is reducible mod every odd prime and splits completely exactly
/// when `p ≡ 1 (mod 8)`.
pub fn check_x4_plus_1(limit: u64) -> CheckResult {
    timed("x^4+1 never irreducible", Some(Duration::from_secs(5)), || {
        let f: IntPoly = "x^4+1".parse()?;
        let mut bad = Vec::new();
        let primes = odd_primes_below(limit);
        for &p in &primes {
            let pat = splitting_pattern(&f, p)?;
            if pat.is_irreducible() || pat.is_complete_splitting() != (p % 8 == 1) {
                bad.push(p);
            }
        }
        Ok((bad.is_empty(), format!("{} primes below {limit}, {} failures {:?}", primes.len(), bad.len(), first(&bad))))
    })
}

fn first<T: Clone>(v: &[T]) -> Vec<T> {
    v.iter().take(5).cloned().collect()
}

/// `p = x^2 + 14 y^2` iff `(-56/p) = 1` and `g` has a root mod `p`, for
/// primes `p < limit` other than 2 and 7.
pub fn check_x2_14y2(limit: u64, g: &IntPoly) -> CheckResult {
    timed("p = x^2 + 14y^2 criterion", Some(Duration::from_secs(30)), || {
        let mut disagreements = Vec::new();
        let mut represented = 0u64;
        let primes = odd_primes_below(limit);
        for &p in primes.iter().filter(|&&p| p != 7) {
            let rep = represent_prime(p, -56)?.is_some();
            let crit = kronecker_symbol(-56, p as i64)? == 1 && g.reduce(p).has_root();
            represented += rep as u64;
            if rep != crit {
                disagreements.push(p);
            }
        }
        Ok((
            disagreements.is_empty(),
            format!(
                "g = {g}: {represented} represented primes below {limit}, {} disagreements {:?}",
                disagreements.len(),
                first(&disagreements)
            ),
        ))
    })
}

/// `h_{(m)∞} = φ(m)` for `3 <= m <= limit`, and equal to a brute-force class
/// count for `m <= brute_limit`.
pub fn check_ray_class_q(limit: u64, brute_limit: u64) -> CheckResult {
    timed("ray class numbers over Q", None, || {
        let mut bad = Vec::new();
        for m in 3..=limit {
            let modulus = Modulus::rational(m, true)?;
            let h = ray_class_number(&modulus, None)?.h_m;
            if h != euler_phi(m) {
                bad.push(m);
            }
            if m <= brute_limit && ray_class_count_q_brute(&modulus)? as u64 != h {
                bad.push(m);
            }
        }
        Ok((bad.is_empty(), format!("3 <= m <= {limit} (brute force to {brute_limit}), {} failures {:?}", bad.len(), first(&bad))))
    })
}

/// The Hilbert product formula for `0 < |a|, |b| <= bound`, and agreement of
/// the local symbol with the solvability search on square classes.
pub fn check_hilbert(bound: i64) -> CheckResult {
    timed("Hilbert reciprocity", None, || {
        let q = |n: i64| BigRational::from_integer(n.into());
        let mut bad_products = 0;
        let mut pairs = 0;
        for a in (-bound..=bound).filter(|&a| a != 0) {
            for b in (-bound..=bound).filter(|&b| b != 0) {
                pairs += 1;
                if hilbert_product(&q(a), &q(b))?.product != 1 {
                    bad_products += 1;
                }
            }
        }
        let mut bad_local = 0;
        let mut local = 0;
        for p in [2u64, 3, 5, 7, 13] {
            let reps = square_class_representatives(p)?;
            for &a in &reps {
                for &b in &reps {
                    local += 1;
                    if hilbert_symbol(&q(a), &q(b), Place::Finite(p))? != hilbert_by_hensel_search(a, b, p)? {
                        bad_local += 1;
                    }
                }
            }
        }
        Ok((
            bad_products == 0 && bad_local == 0,
            format!("{pairs} products ({bad_products} bad), {local} local symbols ({bad_local} disagree)"),
        ))
    })
}

fn random_padic<R: Rng>(p: u64, v: i64, prec: u32, rng: &mut R) -> Result<PadicNumber> {
    let modulus = num_traits::pow(BigInt::from(p), prec as usize);
    loop {
        let u = (BigInt::from(rng.gen::<u64>()) << 64 | BigInt::from(rng.gen::<u64>())) % &modulus;
        if !(&u % p == BigInt::from(0)) {
            return PadicNumber::new(p, v, u, prec);
        }
    }
}

/// `log ∘ exp` and `exp ∘ log` are the identity at relative precision 20,
/// the valuation identities hold, and out-of-domain inputs are rejected.
pub fn check_padic(samples: u64, seed: u64) -> CheckResult {
    timed("p-adic exp/log", None, || {
        const PREC: u32 = 20;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut failures = 0u64;
        let mut runs = 0u64;
        for p in [2u64, 3, 5, 7] {
            let vmin = if p == 2 { 2 } else { 1 };
            for _ in 0..samples {
                runs += 1;
                let v = rng.gen_range(vmin..vmin + 6);
                let x = random_padic(p, v, PREC, &mut rng)?;
                let e = padic_exp(&x)?;
                let one = PadicNumber::new(p, 0, BigInt::one(), e.precision())?;
                let back = padic_log(&e)?;
                let ok_exp = e.sub(&one)?.valuation() == Some(v) && back.agrees_with(&x) && back.precision() >= PREC;

                let u = PadicNumber::new(p, 0, BigInt::one(), PREC)?.add(&random_padic(p, v, PREC, &mut rng)?)?;
                let l = padic_log(&u)?;
                let ok_log = l.valuation() == Some(v) && padic_exp(&l)?.agrees_with(&u);
                if !(ok_exp && ok_log) {
                    failures += 1;
                }
            }
            // boundary of the convergence domain
            let outside = PadicNumber::from_integer(p as i64, p, PREC)?;
            if p == 2 && padic_exp(&outside).is_ok() {
                failures += 1;
            }
            if padic_exp(&PadicNumber::from_integer(1, p, PREC)?).is_ok() {
                failures += 1;
            }
            if padic_log(&PadicNumber::from_integer(p as i64 + 2, p, PREC)?).is_ok() && p != 2 {
                failures += 1;
            }
            if padic_log(&PadicNumber::from_integer(p as i64, p, PREC)?).is_ok() {
                failures += 1;
            }
        }
        Ok((failures == 0, format!("{runs} random inputs over p in {{2,3,5,7}}, {failures} failures")))
    })
}

/// Herbrand quotients: 1 on random finite modules, `d/n` on permutation
/// modules, multiplicative on direct sums.
pub fn check_herbrand(modules: u64, seed: u64) -> CheckResult {
    timed("Herbrand quotients", None, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let one = Some(BigRational::one());
        let mut bad = Vec::new();
        for i in 0..modules {
            let n = rng.gen_range(1..=6);
            let m = random_finite_module(n, 10_000, &mut rng)?;
            if herbrand_components(&m)?.q != one {
                bad.push(format!("finite module {i}"));
            }
        }
        let mut perms = 0;
        for n in 1..=12u32 {
            for d in (1..=n).filter(|d| n % d == 0) {
                perms += 1;
                let q = herbrand_components(&build_permutation_module(n, d)?)?.q;
                if q != Some(BigRational::new(d.into(), n.into())) {
                    bad.push(format!("perm({n},{d})"));
                }
            }
        }
        let mut sums = 0;
        for n in [2u32, 4, 6, 12] {
            let divs: Vec<u32> = (1..=n).filter(|d| n % d == 0).collect();
            for &d1 in &divs {
                for &d2 in &divs {
                    sums += 1;
                    let a = build_permutation_module(n, d1)?;
                    let b = direct_sum(&build_permutation_module(n, d2)?, &random_finite_module(n, 200, &mut rng)?)?;
                    let qa = herbrand_components(&a)?.q;
                    let qb = herbrand_components(&b)?.q;
                    let qs = herbrand_components(&direct_sum(&a, &b)?)?.q;
                    if qs.is_none() || qs != qa.zip(qb).map(|(x, y)| x * y) {
                        bad.push(format!("perm({n},{d1}) + perm({n},{d2})"));
                    }
                }
            }
        }
        Ok((
            bad.is_empty(),
            format!("{modules} finite modules, {perms} permutation modules, {sums} direct sums; failures {:?}", first(&bad)),
        ))
    })
}

/// Residue-class and split frequencies of primes up to `x` within
/// `tolerance` of their Chebotarev densities.
pub fn check_chebotarev(x: u64, tolerance: f64, cfg: &DensityConfig) -> CheckResult {
    timed("Chebotarev frequencies", Some(Duration::from_secs(60)), || {
        let mut worst: f64 = 0.0;
        let mut details = Vec::new();
        for n in [4u64, 5, 8, 12] {
            let r = progression_density(n, x, cfg)?;
            let dev = r.max_abs_deviation.unwrap_or(f64::INFINITY);
            worst = worst.max(dev);
            details.push(format!("n={n}: {dev:.5}"));
        }
        for d in [-4i64, 8] {
            let r = quadratic_split_density(d, x, cfg)?;
            let split = r.class("split").map_or(0.0, |c| c.frequency);
            let dev = (split - 0.5).abs();
            worst = worst.max(dev);
            details.push(format!("d={d}: {dev:.5}"));
        }
        Ok((worst <= tolerance, format!("X = {x}, max deviation {worst:.5} ({})", details.join(", "))))
    })
}

/// Ideal-count slopes: `π/4` within 1% for `Z[i]` at `x_gauss`, and the four
/// classes of discriminant -56 within 5% of each other at `x_56`.
pub fn check_ideal_counting(x_gauss: u64, x_56: u64) -> CheckResult {
    timed("ideal counting slopes", None, || {
        let g = ideal_count_slope(-4, x_gauss, DEFAULT_ENUMERATION_CAP)?;
        let target = std::f64::consts::FRAC_PI_4;
        let ok_g = g.total_slope >= 0.99 * target && g.total_slope <= 1.01 * target;
        let r = ideal_count_slope(-56, x_56, DEFAULT_ENUMERATION_CAP)?;
        let ok_r = r.counts.len() == 4 && r.spread <= 0.05;
        Ok((
            ok_g && ok_r,
            format!(
                "Z[i] slope {:.5} at X = {x_gauss}; D = -56 slopes {:?} (spread {:.4}) at X = {x_56}",
                g.total_slope,
                r.slopes.iter().map(|s| format!("{s:.5}")).collect::<Vec<_>>(),
                r.spread
            ),
        ))
    })
}

/// `e f r = φ(m)` for cyclotomic fields, `Σ e_i f_i = 2` and `∏ P^e = (p)` for
/// quadratic fields.
pub fn check_decomposition(prime_limit: u64, max_m: u64) -> CheckResult {
    timed("decomposition bookkeeping", None, || {
        let primes = PrimeSieve::default().primes(2, prime_limit - 1);
        let mut bad = Vec::new();
        let mut cases = 0u64;
        for &p in &primes {
            // m = 1, 2 give Q itself
            for m in 3..=max_m {
                cases += 1;
                let t = decomposition_type_cyclotomic(p, m)?;
                if t.degree() != euler_phi(m) {
                    bad.push(format!("p={p}, m={m}"));
                }
            }
            for d in FIXTURE_DISCRIMINANTS {
                cases += 1;
                let dec = decompose_prime(p, d)?;
                let order = QuadOrder::new(d)?;
                let sum: u64 = dec.primes.iter().map(|(q, e)| *e as u64 * (q.norm().ilog(p) as u64)).sum();
                if sum != 2 || dec.product()? != QuadIdeal::rational(order, p as i64)? {
                    bad.push(format!("p={p}, D={d}"));
                }
            }
        }
        Ok((bad.is_empty(), format!("{cases} cases, failures {:?}", first(&bad))))
    })
}

/// Names accepted by [`run_named`], in suite order.
pub const CHECK_NAMES: [&str; 10] = [
    "reciprocity",
    "x4-plus-1",
    "x2-14y2",
    "rayclass-q",
    "hilbert",
    "padic",
    "herbrand",
    "chebotarev",
    "ideal-counting",
    "decomposition",
];

/// Runs one check by name; `limit` overrides its main bound.
pub fn run_named(name: &str, profile: Profile, seed: u64, limit: Option<u64>, cfg: &DensityConfig) -> Result<CheckResult> {
    let pick = |full: u64| limit.unwrap_or(profile.scale(full));
    Ok(match name {
        "reciprocity" => check_reciprocity(limit.unwrap_or(500)),
        "x4-plus-1" => check_x4_plus_1(pick(10_000)),
        "x2-14y2" => {
            let g = known_class_polynomial(-56).expect("fixture polynomial");
            check_x2_14y2(pick(100_000), &g)
        }
        "rayclass-q" => check_ray_class_q(pick(1000).max(3), 50),
        "hilbert" => check_hilbert(limit.unwrap_or(50) as i64),
        "padic" => check_padic(pick(1000), seed),
        "herbrand" => check_herbrand(pick(200), seed),
        "chebotarev" => check_chebotarev(pick(10_000_000), 0.005, cfg),
        "ideal-counting" => check_ideal_counting(pick(1_000_000), profile.scale(100_000)),
        "decomposition" => check_decomposition(pick(1000).max(3), 60),
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown check {other:?}; expected one of {}",
                CHECK_NAMES.join(", ")
            )))
        }
    })
}

/// Every check at the given scale, in suite order.
pub fn run_all(profile: Profile, seed: u64, cfg: &DensityConfig) -> Vec<CheckResult> {
    CHECK_NAMES
        .iter()
        .map(|name| run_named(name, profile, seed, None, cfg).expect("known check name"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_checks_pass() {
        for r in [
            check_reciprocity(100),
            check_x4_plus_1(1000),
            check_ray_class_q(60, 20),
            check_hilbert(10),
            check_padic(20, 1),
            check_herbrand(10, 1),
            check_decomposition(100, 12),
        ] {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }

    #[test]
    fn tampered_polynomial_is_caught() {
        let good = known_class_polynomial(-56).unwrap();
        assert!(check_x2_14y2(5000, &good).passed);
        let bad: IntPoly = "x^4+2x^2-5".parse().unwrap();
        let r = check_x2_14y2(5000, &bad);
        assert!(!r.passed, "{}", r.detail);
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert!(run_named("nope", Profile::Quick, 0, None, &DensityConfig::default()).is_err());
        assert!("medium".parse::<Profile>().is_err());
    }
}
