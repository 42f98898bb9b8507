//! Exact integer and modular arithmetic.
//!
//! Everything here works on machine integers with 128-bit intermediates,
//! except the Chinese remainder routine [`crt_big`], which works on
//! arbitrary-size integers for callers whose moduli outgrow `u64`.

mod sieve;

pub use sieve::{sieve_primes, PrimeSieve, DEFAULT_SEGMENT};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// A nonzero integer written as `sign * prod(p^e)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredInteger {
    pub sign: i8,
    pub factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    pub fn value(&self) -> i128 {
        let magnitude: i128 = self
            .factors
            .iter()
            .map(|&(p, e)| (p as i128).pow(e))
            .product();
        self.sign as i128 * magnitude
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }
}

impl fmt::Display for FactoredInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, &(p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// An element of `Z/mZ`, stored reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ResidueClass {
    pub modulus: u64,
    pub value: u64,
}

impl ResidueClass {
    pub fn new(value: i128, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        Ok(ResidueClass {
            modulus,
            value: value.rem_euclid(modulus as i128) as u64,
        })
    }

    pub fn mul(&self, other: &ResidueClass) -> ResidueClass {
        debug_assert_eq!(self.modulus, other.modulus);
        ResidueClass {
            modulus: self.modulus,
            value: mul_mod(self.value, other.value, self.modulus),
        }
    }

    pub fn is_one(&self) -> bool {
        self.value == 1 % self.modulus
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut base = base % m;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Extended Euclid on signed 128-bit values: returns `(g, x, y)` with `a*x + b*y = g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Inverse of `a` modulo `m`, or an error when `gcd(a, m) != 1`.
pub fn inv_mod(a: i128, m: u64) -> Result<u64> {
    let (g, x, _) = ext_gcd(a.rem_euclid(m as i128), m as i128);
    if g != 1 {
        return Err(Error::NotInvertible {
            value: a.to_string(),
            modulus: m.to_string(),
        });
    }
    Ok(x.rem_euclid(m as i128) as u64)
}

pub fn gcd(a: i128, b: i128) -> u128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Integer square root (floor).
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn is_square(n: i128) -> bool {
    n >= 0 && {
        let r = isqrt(n as u128);
        r * r == n as u128
    }
}

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'bases: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

pub(crate) fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p.to_string()))
    }
}

const TRIAL_LIMIT: u64 = 1_000_000;

/// Brent's variant of Pollard rho with the polynomial `x^2 + c`; `c` is
/// stepped deterministically so repeated runs agree.
fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut r = 1u64;
        let mut ys = 2u64;
        const M: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..M.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q as i128, n as i128) as u64;
                k += M;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys) as i128, n as i128) as u64;
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Factor a nonzero integer: trial division up to 10^6, Pollard rho beyond.
pub fn factorize(n: i64) -> Result<FactoredInteger> {
    if n == 0 {
        return Err(Error::InvalidArgument("cannot factor 0".into()));
    }
    let sign = if n < 0 { -1 } else { 1 };
    let mut m = n.unsigned_abs();
    let mut primes = Vec::new();
    let mut d = 2u64;
    while d <= TRIAL_LIMIT && d * d <= m {
        while m % d == 0 {
            primes.push(d);
            m /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        split_into(m, &mut primes);
    }
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(FactoredInteger { sign, factors })
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let f = factorize(n as i64).expect("nonzero");
    f.factors
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

/// Exponent of `p` in `n` (n != 0).
pub fn valuation(n: i128, p: u64) -> u32 {
    debug_assert!(n != 0 && p > 1);
    let mut n = n.unsigned_abs();
    let p = p as u128;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Chinese remaindering over pairwise coprime moduli.
pub fn crt(congruences: &[(i64, u64)]) -> Result<ResidueClass> {
    let big: Vec<(BigInt, BigInt)> = congruences
        .iter()
        .map(|&(r, m)| (BigInt::from(r), BigInt::from(m)))
        .collect();
    let (value, modulus) = crt_big(&big)?;
    let modulus: u64 = u64::try_from(&modulus)
        .map_err(|_| Error::InvalidArgument("modulus product exceeds 64 bits".into()))?;
    Ok(ResidueClass {
        modulus,
        value: u64::try_from(&value).expect("reduced value fits"),
    })
}

/// Arbitrary-precision Chinese remaindering. Returns `(value, modulus)` with
/// `0 <= value < modulus`.
pub fn crt_big(congruences: &[(BigInt, BigInt)]) -> Result<(BigInt, BigInt)> {
    if congruences.is_empty() {
        return Err(Error::InvalidArgument("crt needs at least one congruence".into()));
    }
    for (_, m) in congruences {
        if !m.is_positive() {
            return Err(Error::InvalidArgument(format!("modulus {m} must be positive")));
        }
    }
    for i in 0..congruences.len() {
        for j in i + 1..congruences.len() {
            let (mi, mj) = (&congruences[i].1, &congruences[j].1);
            if !mi.gcd(mj).is_one() {
                return Err(Error::NonCoprimeModuli(mi.to_string(), mj.to_string()));
            }
        }
    }
    let mut value = BigInt::zero();
    let mut modulus = BigInt::one();
    for (r, m) in congruences {
        // value + modulus * t == r (mod m)
        let ext = modulus.extended_gcd(m);
        let inv = ext.x.mod_floor(m);
        let t = ((r - &value) * inv).mod_floor(m);
        value += &modulus * t;
        modulus *= m;
        value = value.mod_floor(&modulus);
    }
    Ok((value, modulus))
}

/// The Kronecker symbol `(a/n)`, extending the Jacobi symbol with the usual
/// conventions at 2 and -1. `n = 0` is rejected.
pub fn kronecker_symbol(a: i64, n: i64) -> Result<i8> {
    if n == 0 {
        return Err(Error::InvalidArgument("kronecker symbol with n = 0".into()));
    }
    let mut a = a as i128;
    let mut n = n as i128;
    let mut result: i8 = 1;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return Ok(0);
        }
        if twos % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
        n >>= twos;
    }
    // Jacobi symbol (a/n), n odd positive
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    Ok(if n == 1 { result } else { 0 })
}

/// Tonelli-Shanks. Returns the smaller of the two roots, or `None` for a
/// non-residue.
pub fn sqrt_mod_p(a: i64, p: u64) -> Result<Option<u64>> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotPrime(format!("{p} (odd prime required)")));
    }
    let a = (a as i128).rem_euclid(p as i128) as u64;
    if a == 0 {
        return Ok(Some(0));
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return Ok(None);
    }
    let root = if p % 4 == 3 {
        pow_mod(a, (p + 1) / 4, p)
    } else {
        let mut q = p - 1;
        let mut s = 0u32;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let mut z = 2u64;
        while pow_mod(z, (p - 1) / 2, p) != p - 1 {
            z += 1;
        }
        let mut m = s;
        let mut c = pow_mod(z, q, p);
        let mut t = pow_mod(a, q, p);
        let mut r = pow_mod(a, (q + 1) / 2, p);
        while t != 1 {
            let mut i = 0u32;
            let mut t2 = t;
            while t2 != 1 {
                t2 = mul_mod(t2, t2, p);
                i += 1;
            }
            let b = pow_mod(c, 1u64 << (m - i - 1), p);
            m = i;
            c = mul_mod(b, b, p);
            t = mul_mod(t, c, p);
            r = mul_mod(r, b, p);
        }
        r
    };
    Ok(Some(root.min(p - root)))
}

/// Smallest `k >= 1` with `a^k = 1 (mod n)`.
pub fn multiplicative_order(a: i64, n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::InvalidArgument("order needs n >= 2".into()));
    }
    let a = (a as i128).rem_euclid(n as i128) as u64;
    if gcd(a as i128, n as i128) != 1 {
        return Err(Error::NotInvertible {
            value: a.to_string(),
            modulus: n.to_string(),
        });
    }
    let phi = euler_phi(n);
    let mut order = phi;
    for (q, _) in factorize(phi as i64)?.factors {
        while order % q == 0 && pow_mod(a, order / q, n) == 1 {
            order /= q;
        }
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_is_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(1).unwrap(), FactoredInteger { sign: 1, factors: vec![] });
        assert_eq!(
            factorize(-56).unwrap(),
            FactoredInteger { sign: -1, factors: vec![(2, 3), (7, 1)] }
        );
        assert_eq!(factorize(9_999_999_967).unwrap().factors, vec![(9_999_999_967, 1)]);
        assert!(trial_division_is_prime(9_999_999_967));
        assert!(factorize(0).is_err());
    }

    #[test]
    fn factorize_reaches_pollard_rho() {
        // both factors beyond the trial-division limit
        let p = 1_000_003u64;
        let q = 1_000_033u64;
        let f = factorize((p * q) as i64).unwrap();
        assert_eq!(f.factors, vec![(p, 1), (q, 1)]);
        let f = factorize(-(p as i64) * (p as i64) * 12).unwrap();
        assert_eq!(f.factors, vec![(2, 2), (3, 1), (p, 2)]);
        assert_eq!(f.value(), -(p as i128) * (p as i128) * 12);
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime(n), trial_division_is_prime(n), "n = {n}");
        }
        // strong pseudoprimes to several small bases
        for n in [3_215_031_751u64, 2_152_302_898_747, 3_474_749_660_383, 341_550_071_728_321] {
            assert!(!is_prime(n));
        }
        assert!(is_prime(18_446_744_073_709_551_557));
    }

    #[test]
    fn crt_examples() {
        assert_eq!(crt(&[(2, 3)]).unwrap(), ResidueClass { modulus: 3, value: 2 });
        assert_eq!(crt(&[(2, 3), (3, 5)]).unwrap(), ResidueClass { modulus: 15, value: 8 });
        assert_eq!(
            crt(&[(1, 4), (1, 9), (1, 25)]).unwrap(),
            ResidueClass { modulus: 900, value: 1 }
        );
        assert!(matches!(crt(&[(1, 4), (3, 6)]), Err(Error::NonCoprimeModuli(..))));
        assert!(crt(&[]).is_err());
    }

    #[test]
    fn crt_against_brute_force() {
        for m1 in 1..=100u64 {
            for m2 in 1..=100u64 {
                if m1 * m2 > 10_000 || gcd(m1 as i128, m2 as i128) != 1 {
                    continue;
                }
                let (r1, r2) = ((m1 * 7 + 3) % m1, (m2 * 5 + 2) % m2);
                let expected = (0..m1 * m2).find(|x| x % m1 == r1 && x % m2 == r2).unwrap();
                let got = crt(&[(r1 as i64, m1), (r2 as i64, m2)]).unwrap();
                assert_eq!(got, ResidueClass { modulus: m1 * m2, value: expected });
            }
        }
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker_symbol(2, 7).unwrap(), 1);
        assert_eq!(kronecker_symbol(-14, 23).unwrap(), 1);
        for n in [-9i64, -1, 1, 2, 3, 100] {
            assert_eq!(kronecker_symbol(1, n).unwrap(), 1);
        }
        assert_eq!(kronecker_symbol(5, 1).unwrap(), 1);
        assert_eq!(kronecker_symbol(-5, -1).unwrap(), -1);
        assert_eq!(kronecker_symbol(3, 2).unwrap(), -1);
        assert_eq!(kronecker_symbol(-4, 2).unwrap(), 0);
        assert!(kronecker_symbol(3, 0).is_err());
    }

    #[test]
    fn kronecker_is_euler_criterion() {
        for p in (3..200u64).filter(|&p| is_prime(p)) {
            for a in -300i64..300 {
                let euler = pow_mod((a as i128).rem_euclid(p as i128) as u64, (p - 1) / 2, p);
                let expected = match euler {
                    0 => 0,
                    1 => 1,
                    e if e == p - 1 => -1,
                    _ => unreachable!(),
                };
                assert_eq!(kronecker_symbol(a, p as i64).unwrap(), expected, "({a}/{p})");
            }
        }
    }

    #[test]
    fn kronecker_multiplicative() {
        for a in 1..60i64 {
            for b in 1..60i64 {
                for n in [3i64, 5, 8, 12, 15, 21, 40, 77, 97, 105, 499] {
                    if gcd(a as i128 * b as i128, n as i128) != 1 {
                        continue;
                    }
                    let lhs = kronecker_symbol(a * b, n).unwrap();
                    let rhs = kronecker_symbol(a, n).unwrap() * kronecker_symbol(b, n).unwrap();
                    assert_eq!(lhs, rhs);
                    let lhs = kronecker_symbol(n, a * b).unwrap();
                    let rhs = kronecker_symbol(n, a).unwrap() * kronecker_symbol(n, b).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn sqrt_mod_examples() {
        assert_eq!(sqrt_mod_p(0, 5).unwrap(), Some(0));
        assert_eq!(sqrt_mod_p(2, 7).unwrap(), Some(3));
        assert_eq!(sqrt_mod_p(3, 7).unwrap(), None);
        assert!(sqrt_mod_p(2, 9).is_err());
        assert!(sqrt_mod_p(1, 2).is_err());
    }

    #[test]
    fn sqrt_mod_exhaustive() {
        for p in (3..400u64).filter(|&p| is_prime(p)) {
            for a in 0..p {
                let brute = (0..p).find(|&r| mul_mod(r, r, p) == a);
                let got = sqrt_mod_p(a as i64, p).unwrap();
                assert_eq!(got, brute.map(|r| r.min(p - r)), "sqrt({a}) mod {p}");
                assert_eq!(got.is_none(), kronecker_symbol(a as i64, p as i64).unwrap() == -1);
            }
        }
    }

    #[test]
    fn order_examples() {
        assert_eq!(multiplicative_order(1, 12).unwrap(), 1);
        assert_eq!(multiplicative_order(3, 8).unwrap(), 2);
        assert_eq!(multiplicative_order(7, 12).unwrap(), 2);
        assert_eq!(multiplicative_order(2, 5).unwrap(), 4);
        assert!(multiplicative_order(2, 12).is_err());
        for n in 2..200u64 {
            for a in 1..n {
                if gcd(a as i128, n as i128) != 1 {
                    continue;
                }
                let brute = (1..).find(|&k| pow_mod(a, k, n) == 1).unwrap();
                assert_eq!(multiplicative_order(a as i64, n).unwrap(), brute);
            }
        }
    }

    #[test]
    fn phi_small() {
        let brute = |n: u64| (1..=n).filter(|&k| gcd(k as i128, n as i128) == 1).count() as u64;
        for n in 1..500 {
            assert_eq!(euler_phi(n), brute(n));
        }
    }
}
