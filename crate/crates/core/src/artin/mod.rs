//! Frobenius elements and the Artin map for cyclotomic extensions of `Q`,
//! plus factorization patterns of integer polynomials mod `p`.

pub mod poly;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::arith::{euler_phi, gcd, inv_mod, multiplicative_order, require_prime, valuation, ResidueClass};
use crate::error::{Error, Result};
use crate::rayclass::{congruent_mod_star, Modulus};
pub use poly::{IntPoly, ModPoly};

/// Ramification index, residue degree and number of primes above `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionType {
    pub e: u64,
    pub f: u64,
    pub r: u64,
}

impl DecompositionType {
    pub fn degree(&self) -> u64 {
        self.e * self.f * self.r
    }
}

/// Degrees of the irreducible factors of `f` mod `p`, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SplittingPattern {
    pub degrees: Vec<usize>,
}

impl SplittingPattern {
    pub fn is_complete_splitting(&self) -> bool {
        self.degrees.iter().all(|&d| d == 1)
    }

    pub fn is_irreducible(&self) -> bool {
        self.degrees.len() == 1
    }
}

impl fmt::Display for SplittingPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.degrees.iter().map(|d| d.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

fn require_conductor(m: u64) -> Result<()> {
    if m < 3 {
        return Err(Error::InvalidArgument(format!("cyclotomic modulus m = {m} must be >= 3")));
    }
    Ok(())
}

/// Frobenius of an unramified prime in `Q(zeta_m)`: the class of `p` mod `m`.
pub fn frobenius_cyclotomic(p: u64, m: u64) -> Result<ResidueClass> {
    require_prime(p)?;
    require_conductor(m)?;
    if m % p == 0 {
        return Err(Error::Ramified {
            p,
            detail: format!("{p} divides m = {m}; use the decomposition type"),
        });
    }
    ResidueClass::new(p as i128, m)
}

/// `(e, f, r)` of `p` in `Q(zeta_m)`.
pub fn decomposition_type_cyclotomic(p: u64, m: u64) -> Result<DecompositionType> {
    require_prime(p)?;
    require_conductor(m)?;
    let k = valuation(m as i128, p);
    let m1 = m / p.pow(k);
    let e = euler_phi(p.pow(k));
    let f = if m1 == 1 { 1 } else { multiplicative_order(p as i64, m1)? };
    let r = euler_phi(m1) / f;
    Ok(DecompositionType { e, f, r })
}

/// The Artin symbol of the fractional ideal generated by `x` in
/// `Gal(Q(zeta_m)/Q) = (Z/m)*`: `num * den^-1 mod m`.
pub fn artin_map_q(x: &BigRational, m: u64) -> Result<ResidueClass> {
    if m == 0 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    if x == &BigRational::from_integer(BigInt::from(0)) {
        return Err(Error::InvalidArgument("zero has no ideal class".into()));
    }
    let mb = BigInt::from(m);
    let reduce = |n: &BigInt| -> Result<u64> {
        let r: BigInt = ((n % &mb) + &mb) % &mb;
        let r = u64::try_from(&r).expect("residue fits");
        if gcd(r as i128, m as i128) != 1 {
            return Err(Error::NotInvertible { value: n.to_string(), modulus: m.to_string() });
        }
        Ok(r)
    };
    // the ideal (x) is generated by |x|
    let num = reduce(&x.numer().magnitude().clone().into())?;
    let den = reduce(&x.denom().magnitude().clone().into())?;
    let inv = inv_mod(den as i128, m)?;
    ResidueClass::new(num as i128 * inv as i128, m)
}

/// Outcome of a randomized check that `P_m` lies in the kernel of the Artin map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelReport {
    pub m: u64,
    pub samples: u64,
    /// Sampled `x = 1 mod* (m)inf` whose Artin symbol was not 1.
    pub counterexamples: Vec<String>,
    /// Sampled `x` outside `P_m`, and how many of them the map sent to 1.
    pub controls: u64,
    pub control_hits: u64,
}

impl KernelReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty() && self.control_hits == 0
    }
}

fn random_coprime<R: Rng>(rng: &mut R, m: u64, hi: u64) -> u64 {
    loop {
        let b = rng.gen_range(1..=hi);
        if gcd(b as i128, m as i128) == 1 {
            return b;
        }
    }
}

/// Samples `x = a/b` with `a = b (mod m)`, `a, b > 0` and checks that the
/// Artin symbol is trivial; positive `x` with `a != b (mod m)` serve as
/// negative controls.
pub fn verify_artin_kernel<R: Rng>(m: u64, samples: u64, rng: &mut R) -> Result<KernelReport> {
    require_conductor(m)?;
    let modulus = Modulus::rational(m, true)?;
    let one = BigRational::from_integer(BigInt::from(1));
    let mut report = KernelReport { m, samples, counterexamples: Vec::new(), controls: 0, control_hits: 0 };
    for _ in 0..samples {
        let b = random_coprime(rng, m, 1_000_000);
        let a = b + m * rng.gen_range(0..1_000_000u64);
        let x = BigRational::new(a.into(), b.into());
        if !congruent_mod_star(&x, &one, &modulus)? {
            return Err(Error::ModuleInvariant(format!("sampled {x} is not 1 mod* {m}inf")));
        }
        if !artin_map_q(&x, m)?.is_one() {
            report.counterexamples.push(x.to_string());
        }
        let c = random_coprime(rng, m, 1_000_000);
        let y = BigRational::new(c.into(), b.into());
        if !congruent_mod_star(&y, &one, &modulus)? {
            report.controls += 1;
            if artin_map_q(&y, m)?.is_one() {
                report.control_hits += 1;
            }
        }
    }
    Ok(report)
}

/// Factor degrees of `f` mod `p` by distinct-degree factorization.
pub fn splitting_pattern(f: &IntPoly, p: u64) -> Result<SplittingPattern> {
    require_prime(p)?;
    let fp = poly::squarefree_reduction(f, p)?;
    let mut degrees = Vec::new();
    for (i, d) in fp.distinct_degree() {
        degrees.extend(std::iter::repeat(i).take(d / i));
    }
    degrees.sort_unstable();
    Ok(SplittingPattern { degrees })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve_primes;
    use crate::oracle::splitting_pattern_naive;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn frobenius_examples() {
        let f = frobenius_cyclotomic(3, 8).unwrap();
        assert_eq!(f.value, 3);
        assert_eq!(multiplicative_order(3, 8).unwrap(), 2);
        assert!(frobenius_cyclotomic(17, 8).unwrap().is_one());
        let f = frobenius_cyclotomic(7, 5).unwrap();
        assert_eq!(f.value, 2);
        assert_eq!(multiplicative_order(2, 5).unwrap(), 4);
        assert!(matches!(frobenius_cyclotomic(2, 8), Err(Error::Ramified { .. })));
        assert!(frobenius_cyclotomic(9, 8).is_err());
    }

    #[test]
    fn decomposition_examples() {
        let t = |p, m| decomposition_type_cyclotomic(p, m).unwrap();
        assert_eq!(t(5, 5), DecompositionType { e: 4, f: 1, r: 1 });
        assert_eq!(t(7, 12), DecompositionType { e: 1, f: 2, r: 2 });
        assert_eq!(t(13, 12), DecompositionType { e: 1, f: 1, r: 4 });
        assert_eq!(t(2, 12), DecompositionType { e: 2, f: 2, r: 1 });
    }

    #[test]
    fn frobenius_order_is_residue_degree() {
        let primes = sieve_primes(2, 1000).unwrap();
        for m in 3..=60 {
            for &p in &primes {
                let t = decomposition_type_cyclotomic(p, m).unwrap();
                assert_eq!(t.degree(), euler_phi(m));
                if m % p != 0 {
                    let fr = frobenius_cyclotomic(p, m).unwrap();
                    assert_eq!(multiplicative_order(fr.value as i64, m).unwrap(), t.f);
                    assert_eq!(t.e, 1);
                }
            }
        }
    }

    #[test]
    fn artin_examples() {
        assert!(artin_map_q(&q(1, 1), 7).unwrap().is_one());
        assert!(artin_map_q(&q(6, 1), 5).unwrap().is_one());
        assert_eq!(artin_map_q(&q(7, 3), 10).unwrap().value, 9);
        assert!(artin_map_q(&q(5, 3), 10).is_err());
        assert!(artin_map_q(&q(7, 2), 10).is_err());
    }

    #[test]
    fn kernel_examples() {
        assert!(artin_map_q(&q(6, 1), 5).unwrap().is_one());
        assert!(artin_map_q(&q(11, 21), 5).unwrap().is_one());
        assert!(!artin_map_q(&q(2, 1), 5).unwrap().is_one());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in [3, 5, 8, 12, 60] {
            let r = verify_artin_kernel(m, 200, &mut rng).unwrap();
            assert!(r.passed(), "{r:?}");
            assert!(r.controls > 0);
        }
    }

    #[test]
    fn pattern_examples() {
        let f: IntPoly = "x^4+1".parse().unwrap();
        assert_eq!(splitting_pattern(&f, 17).unwrap().degrees, vec![1, 1, 1, 1]);
        assert_eq!(splitting_pattern(&f, 3).unwrap().degrees, vec![2, 2]);
        assert!(splitting_pattern(&f, 2).is_err());
        let g: IntPoly = "x^4+2x^2-7".parse().unwrap();
        assert!(splitting_pattern(&g, 23).unwrap().degrees.contains(&1));
        assert_eq!(splitting_pattern(&f, 17).unwrap().to_string(), "{1,1,1,1}");
    }

    #[test]
    fn x4_plus_1_never_irreducible() {
        let f: IntPoly = "x^4+1".parse().unwrap();
        for p in sieve_primes(3, 10_000).unwrap() {
            let pat = splitting_pattern(&f, p).unwrap();
            assert!(!pat.is_irreducible(), "p = {p}");
            assert_eq!(pat.is_complete_splitting(), p % 8 == 1, "p = {p}");
        }
    }

    #[test]
    fn prime_degree_cycles_occur() {
        // Galois groups S_3, S_5 and C_5 all contain a full cycle
        for (s, deg) in [("x^3-2", 3), ("x^5-x-1", 5), ("x^5-110x^3-55x^2+2310x+979", 5)] {
            let f: IntPoly = s.parse().unwrap();
            let found = sieve_primes(2, 10_000)
                .unwrap()
                .into_iter()
                .any(|p| splitting_pattern(&f, p).map(|pat| pat.degrees == vec![deg]).unwrap_or(false));
            assert!(found, "{s}");
        }
    }

    #[test]
    fn pattern_matches_naive_oracle() {
        let primes = sieve_primes(2, 50).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        for deg in 1..=4usize {
            for _ in 0..400 {
                let mut c: Vec<i64> = (0..deg).map(|_| rng.gen_range(-5..=5)).collect();
                c.push(*[-5i64, -4, -3, -2, -1, 1, 2, 3, 4, 5].get(rng.gen_range(0..10)).unwrap());
                let f = IntPoly::new(c).unwrap();
                for &p in &primes {
                    if let Ok(pat) = splitting_pattern(&f, p) {
                        assert_eq!(pat, splitting_pattern_naive(&f, p).unwrap(), "{f} mod {p}");
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 10_000);
    }

    proptest! {
        #[test]
        fn artin_is_multiplicative(a in 1i64..100_000, b in 1i64..100_000, c in 1i64..100_000, d in 1i64..100_000, m in 3u64..500) {
            let x = q(a, b);
            let y = q(c, d);
            let coprime = |n: i64| gcd(n as i128, m as i128) == 1;
            prop_assume!(coprime(a) && coprime(b) && coprime(c) && coprime(d));
            let lhs = artin_map_q(&(&x * &y), m).unwrap();
            let rhs = artin_map_q(&x, m).unwrap().mul(&artin_map_q(&y, m).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
