//! Finite-precision arithmetic in `Q_p`: exp/log, square roots, n-th power
//! tests and quadratic Hilbert symbols.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::arith::{factorize, kronecker_symbol, require_prime, sqrt_mod_p};
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 20;

/// Largest `p^m` that [`is_nth_power_unit`] will scan exhaustively.
pub const POWER_SCAN_CAP: u64 = 10_000_000;

/// `p^v · u` with `u` a unit known modulo `p^prec`. Zero has no valuation;
/// its `prec` is the absolute precision, i.e. it is only known to be
/// divisible by `p^prec`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicNumber {
    p: u64,
    valuation: Option<i64>,
    #[serde(serialize_with = "as_string", deserialize_with = "from_string")]
    unit: BigInt,
    prec: u32,
}

fn as_string<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn from_string<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
    let s = String::deserialize(d)?;
    BigInt::from_str(&s).map_err(serde::de::Error::custom)
}

fn pow(p: u64, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), k as usize)
}

/// Splits `n != 0` as `p^v · m` with `p ∤ m`.
fn split_valuation(n: &BigInt, p: u64) -> (i64, BigInt) {
    let pb = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return (v, m);
        }
        m = q;
        v += 1;
    }
}

fn inv_mod_big(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m).modinv(m).expect("unit is invertible")
}

impl PadicNumber {
    pub fn new(p: u64, valuation: i64, unit: BigInt, prec: u32) -> Result<Self> {
        require_prime(p)?;
        if prec == 0 {
            return Err(Error::Precision("relative precision must be at least 1".into()));
        }
        let unit = unit.mod_floor(&pow(p, prec));
        if (&unit % p).is_zero() {
            return Err(Error::InvalidArgument(format!("{unit} is not a {p}-adic unit")));
        }
        Ok(PadicNumber { p, valuation: Some(valuation), unit, prec })
    }

    /// Zero known modulo `p^abs_prec`.
    pub fn zero(p: u64, abs_prec: u32) -> Result<Self> {
        require_prime(p)?;
        Ok(PadicNumber { p, valuation: None, unit: BigInt::zero(), prec: abs_prec })
    }

    pub fn from_rational(q: &BigRational, p: u64, prec: u32) -> Result<Self> {
        if q.is_zero() {
            return Self::zero(p, prec);
        }
        let (vn, un) = split_valuation(q.numer(), p);
        let (vd, ud) = split_valuation(q.denom(), p);
        let m = pow(p, prec);
        let unit = un * inv_mod_big(&ud, &m);
        Self::new(p, vn - vd, unit, prec)
    }

    pub fn from_integer(n: i64, p: u64, prec: u32) -> Result<Self> {
        Self::from_rational(&BigRational::from_integer(n.into()), p, prec)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn valuation(&self) -> Option<i64> {
        self.valuation
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    /// Relative precision (absolute precision for zero).
    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.valuation.is_none()
    }

    /// The exponent `k` such that the value is known modulo `p^k`.
    pub fn absolute_precision(&self) -> i64 {
        match self.valuation {
            Some(v) => v + self.prec as i64,
            None => self.prec as i64,
        }
    }

    /// Same precision, valuation and unit: the two values cannot be told
    /// apart at the coarser of the two precisions.
    pub fn agrees_with(&self, other: &PadicNumber) -> bool {
        if self.p != other.p {
            return false;
        }
        match (self.valuation, other.valuation) {
            (None, None) => true,
            (Some(a), Some(b)) if a == b => {
                let m = pow(self.p, self.prec.min(other.prec));
                self.unit.mod_floor(&m) == other.unit.mod_floor(&m)
            }
            (Some(v), None) => v >= other.prec as i64,
            (None, Some(v)) => v >= self.prec as i64,
            _ => false,
        }
    }

    /// Rounds the unit to a smaller relative precision.
    pub fn truncate(&self, prec: u32) -> PadicNumber {
        if self.is_zero() || prec >= self.prec {
            return self.clone();
        }
        let mut out = self.clone();
        out.unit = out.unit.mod_floor(&pow(self.p, prec));
        out.prec = prec;
        out
    }

    fn from_shifted(p: u64, shift: i64, value: BigInt, abs_prec: i64) -> PadicNumber {
        // value is known modulo p^(abs_prec - shift); represents p^shift · value
        let k = (abs_prec - shift).max(0) as u32;
        let value = value.mod_floor(&pow(p, k));
        if value.is_zero() {
            return PadicNumber { p, valuation: None, unit: BigInt::zero(), prec: abs_prec.max(0) as u32 };
        }
        let (v, u) = split_valuation(&value, p);
        PadicNumber { p, valuation: Some(shift + v), unit: u, prec: k - v as u32 }
    }

    fn check_prime(&self, other: &PadicNumber) -> Result<()> {
        if self.p != other.p {
            return Err(Error::InvalidArgument(format!("mixing {}-adic and {}-adic numbers", self.p, other.p)));
        }
        Ok(())
    }

    pub fn add(&self, other: &PadicNumber) -> Result<PadicNumber> {
        self.check_prime(other)?;
        let abs = self.absolute_precision().min(other.absolute_precision());
        let (a, b) = match (self.valuation, other.valuation) {
            (None, _) => return Ok(Self::from_shifted(self.p, 0, BigInt::zero(), abs).or_value(other, abs)),
            (_, None) => return Ok(Self::from_shifted(self.p, 0, BigInt::zero(), abs).or_value(self, abs)),
            (Some(a), Some(b)) => (a, b),
        };
        let m = a.min(b);
        let s = &self.unit * pow(self.p, (a - m) as u32) + &other.unit * pow(self.p, (b - m) as u32);
        Ok(Self::from_shifted(self.p, m, s, abs))
    }

    fn or_value(self, x: &PadicNumber, abs: i64) -> PadicNumber {
        match x.valuation {
            Some(v) if v < abs => Self::from_shifted(x.p, v, x.unit.clone(), abs),
            _ => self,
        }
    }

    pub fn neg(&self) -> PadicNumber {
        let mut out = self.clone();
        if !self.is_zero() {
            out.unit = (-&self.unit).mod_floor(&pow(self.p, self.prec));
        }
        out
    }

    pub fn sub(&self, other: &PadicNumber) -> Result<PadicNumber> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &PadicNumber) -> Result<PadicNumber> {
        self.check_prime(other)?;
        match (self.valuation, other.valuation) {
            (Some(a), Some(b)) => {
                let prec = self.prec.min(other.prec);
                let unit = (&self.unit * &other.unit).mod_floor(&pow(self.p, prec));
                Ok(PadicNumber { p: self.p, valuation: Some(a + b), unit, prec })
            }
            (None, Some(v)) => Self::zero(self.p, (self.prec as i64 + v).max(0) as u32),
            (Some(v), None) => Self::zero(self.p, (other.prec as i64 + v).max(0) as u32),
            (None, None) => Self::zero(self.p, self.prec + other.prec),
        }
    }

    /// The unit part `u` as an integer in `[0, p^prec)`.
    pub fn residue(&self) -> &BigInt {
        &self.unit
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.valuation {
            None => write!(f, "O({}^{})", self.p, self.prec),
            Some(0) => write!(f, "{} + O({}^{})", self.unit, self.p, self.prec),
            Some(v) => write!(f, "{}^{} · {} + O({}^{})", self.p, v, self.unit, self.p, v + self.prec as i64),
        }
    }
}

/// `v_p(n!)` by Legendre's formula.
fn factorial_valuation(n: u64, p: u64) -> u64 {
    let mut v = 0;
    let mut q = n / p;
    while q > 0 {
        v += q;
        q /= p;
    }
    v
}

fn min_exp_valuation(p: u64) -> i64 {
    if p == 2 {
        2
    } else {
        1
    }
}

/// `exp(x) = Σ x^n / n!`, defined for `v_p(x) > 1/(p-1)`.
///
/// The result is a unit known to the absolute precision of `x`.
pub fn padic_exp(x: &PadicNumber) -> Result<PadicNumber> {
    let p = x.p;
    let Some(v) = x.valuation else {
        return PadicNumber::new(p, 0, BigInt::one(), x.prec.max(1));
    };
    if v < min_exp_valuation(p) {
        return Err(Error::ConvergenceDomain(format!(
            "exp needs v_{p}(x) > 1/({p} - 1), got v = {v}"
        )));
    }
    let k = x.absolute_precision() as u32;
    let modulus = pow(p, k);
    let mut sum = BigInt::one();
    let mut u_pow = BigInt::one();
    let mut fact_unit = BigInt::one();
    let mut n = 1u64;
    loop {
        let (_, m) = split_valuation(&BigInt::from(n), p);
        fact_unit = (fact_unit * m).mod_floor(&modulus);
        u_pow = (u_pow * &x.unit).mod_floor(&modulus);
        let val = n as i64 * v - factorial_valuation(n, p) as i64;
        if val < k as i64 {
            let term = &u_pow * inv_mod_big(&fact_unit, &modulus) * pow(p, val as u32);
            sum = (sum + term).mod_floor(&modulus);
        }
        // v_p(n!) <= (n - 1)/(p - 1), so this bound grows with n
        if n as i64 * v - ((n - 1) / (p - 1)) as i64 >= k as i64 {
            break;
        }
        n += 1;
    }
    PadicNumber::new(p, 0, sum, k)
}

/// `log(u) = Σ (-1)^(n+1) (u-1)^n / n` for a unit `u ≡ 1 (mod p)`.
pub fn padic_log(u: &PadicNumber) -> Result<PadicNumber> {
    let p = u.p;
    if u.valuation != Some(0) || !((&u.unit - 1u32) % p).is_zero() {
        return Err(Error::ConvergenceDomain(format!("log needs u ≡ 1 (mod {p})")));
    }
    let k = u.prec;
    let one = PadicNumber::new(p, 0, BigInt::one(), k)?;
    let x = u.sub(&one)?;
    let Some(v) = x.valuation else {
        return PadicNumber::zero(p, k);
    };
    let modulus = pow(p, k);
    let mut sum = BigInt::zero();
    let mut x_pow = BigInt::one();
    let mut n = 1u64;
    loop {
        let (vn, m) = split_valuation(&BigInt::from(n), p);
        x_pow = (x_pow * &x.unit).mod_floor(&modulus);
        let val = n as i64 * v - vn;
        if val < k as i64 {
            let mut term = &x_pow * inv_mod_big(&m, &modulus) * pow(p, val as u32);
            if n % 2 == 0 {
                term = -term;
            }
            sum = (sum + term).mod_floor(&modulus);
        }
        // n·v - log_p(n) bounds every later term from below
        if n as i64 * v - n.ilog(p) as i64 - 1 >= k as i64 {
            break;
        }
        n += 1;
    }
    Ok(PadicNumber::from_shifted(p, 0, sum, k as i64))
}

/// Whether the unit `u` is an n-th power in `Q_p`. Units `≡ 1` modulo
/// `p^m`, `m > v_p(n) + 1/(p-1)`, are n-th powers, so it suffices to compare
/// residues modulo `p^m`.
pub fn is_nth_power_unit(u: &PadicNumber, n: u64) -> Result<bool> {
    if n < 2 {
        return Err(Error::InvalidArgument("n must be at least 2".into()));
    }
    if u.valuation != Some(0) {
        return Err(Error::InvalidArgument(format!("{u} is not a unit")));
    }
    let p = u.p;
    let vn = crate::arith::valuation(n as i128, p);
    let m = vn + if p == 2 { 2 } else { 1 };
    if u.prec < m {
        return Err(Error::Precision(format!("need the unit modulo {p}^{m}")));
    }
    let modulus = p.checked_pow(m).filter(|&q| q <= POWER_SCAN_CAP).ok_or(Error::CapExceeded {
        requested: p.saturating_pow(m),
        cap: POWER_SCAN_CAP,
    })?;
    let target = (&u.unit % modulus).to_u64().unwrap();
    if target == 1 {
        return Ok(true);
    }
    let mut powers = BTreeSet::new();
    for w in 1..modulus {
        if w % p != 0 {
            powers.insert(crate::arith::pow_mod(w, n, modulus));
        }
    }
    Ok(powers.contains(&target))
}

/// Square root of `a` to relative precision `prec`, or `None` when `a` is
/// not a square in `Q_p`. For `p = 2` the result carries one digit less
/// than the unit of `a`.
pub fn hensel_sqrt(a: &PadicNumber, prec: u32) -> Result<Option<PadicNumber>> {
    let p = a.p;
    let Some(v) = a.valuation else {
        return Ok(Some(a.clone()));
    };
    if v % 2 != 0 {
        return Ok(None);
    }
    if p == 2 {
        if a.prec < 3 {
            return Err(Error::Precision("need the unit modulo 8".into()));
        }
        if (&a.unit % 8u32) != BigInt::one() {
            return Ok(None);
        }
        let target = prec.min(a.prec - 1);
        // r^2 ≡ u (mod 2^(k+1)) for k = 2, 3, ...
        let mut r = BigInt::one();
        for k in 3..=target {
            let m = pow(2, k + 1);
            if (&r * &r - &a.unit).mod_floor(&m) != BigInt::zero() {
                r += pow(2, k - 1);
            }
        }
        let r = r.mod_floor(&pow(2, target));
        return Ok(Some(PadicNumber::new(2, v / 2, r, target.max(1))?));
    }
    let u0 = (&a.unit % p).to_i64().unwrap();
    let Some(r0) = sqrt_mod_p(u0, p)? else {
        return Ok(None);
    };
    let target = prec.min(a.prec);
    let mut r = BigInt::from(r0.min(p - r0));
    let mut k = 1u32;
    while k < target {
        k = (2 * k).min(target);
        let m = pow(p, k);
        let f = &r * &r - &a.unit;
        let df = inv_mod_big(&(BigInt::from(2) * &r), &m);
        r = (&r - f * df).mod_floor(&m);
    }
    Ok(Some(PadicNumber::new(p, v / 2, r, target)?))
}

/// A place of `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for Place {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "∞" | "infinity" => Ok(Place::Infinite),
            t => {
                let p: u64 = t.parse().map_err(|_| Error::Parse(format!("bad place {t:?}")))?;
                require_prime(p)?;
                Ok(Place::Finite(p))
            }
        }
    }
}

/// `(v, u mod 8)` or `(v, legendre(u))` data for a nonzero rational.
fn split_rational(q: &BigRational, p: u64) -> (i64, BigInt) {
    let (vn, un) = split_valuation(q.numer(), p);
    let (vd, ud) = split_valuation(q.denom(), p);
    (vn - vd, un * ud)
}

fn legendre_big(u: &BigInt, p: u64) -> i8 {
    let r = u.mod_floor(&BigInt::from(p)).to_i64().unwrap();
    kronecker_symbol(r, p as i64).expect("odd prime")
}

/// The quadratic Hilbert symbol `(a, b)_v`: `+1` when `z^2 = a x^2 + b y^2`
/// has a nontrivial solution over `Q_v`.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, place: Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::InvalidArgument("Hilbert symbol needs nonzero arguments".into()));
    }
    let p = match place {
        Place::Infinite => return Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 }),
        Place::Finite(p) => p,
    };
    require_prime(p)?;
    let (alpha, u) = split_rational(a, p);
    let (beta, w) = split_rational(b, p);
    if p == 2 {
        let u8_ = u.mod_floor(&BigInt::from(8)).to_i64().unwrap();
        let w8 = w.mod_floor(&BigInt::from(8)).to_i64().unwrap();
        let eps = |x: i64| ((x - 1) / 2) & 1;
        let omega = |x: i64| ((x * x - 1) / 8) & 1;
        let e = eps(u8_) * eps(w8) + alpha.rem_euclid(2) * omega(w8) + beta.rem_euclid(2) * omega(u8_);
        return Ok(if e % 2 == 0 { 1 } else { -1 });
    }
    let mut s: i8 = 1;
    if (alpha * beta).rem_euclid(2) == 1 && p % 4 == 3 {
        s = -s;
    }
    if beta.rem_euclid(2) == 1 {
        s *= legendre_big(&u, p);
    }
    if alpha.rem_euclid(2) == 1 {
        s *= legendre_big(&w, p);
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertProduct {
    /// Symbols at infinity and at every prime dividing `2ab`; all other
    /// places give `+1`.
    pub symbols: Vec<(Place, i8)>,
    pub product: i8,
}

fn primes_of(q: &BigRational) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for n in [q.numer(), q.denom()] {
        let n = n.abs().to_i64().ok_or_else(|| Error::InvalidArgument(format!("{n} too large to factor")))?;
        out.extend(factorize(n)?.factors.iter().map(|&(p, _)| p));
    }
    Ok(out)
}

pub fn hilbert_product(a: &BigRational, b: &BigRational) -> Result<HilbertProduct> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::InvalidArgument("Hilbert symbol needs nonzero arguments".into()));
    }
    let mut primes: BTreeSet<u64> = BTreeSet::from([2]);
    primes.extend(primes_of(a)?);
    primes.extend(primes_of(b)?);
    let mut symbols = Vec::new();
    let mut product = 1;
    for place in primes.into_iter().map(Place::Finite).chain([Place::Infinite]) {
        let s = hilbert_symbol(a, b, place)?;
        product *= s;
        symbols.push((place, s));
    }
    Ok(HilbertProduct { symbols, product })
}

/// Representatives of `Q_p* / Q_p*^2`: `{1, n, p, pn}` with `n` the least
/// non-residue for odd `p`, `{±1, ±5, ±2, ±10}` for `p = 2`.
pub fn square_class_representatives(p: u64) -> Result<Vec<i64>> {
    require_prime(p)?;
    if p == 2 {
        return Ok(vec![1, -1, 5, -5, 2, -2, 10, -10]);
    }
    let n = (2..p as i64).find(|&t| kronecker_symbol(t, p as i64) == Ok(-1)).unwrap();
    Ok(vec![1, n, p as i64, n * p as i64])
}
