//! Moduli, multiplicative congruence, weak approximation over `Q`, and ray
//! class numbers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::arith::{crt_big, euler_phi, factorize, inv_mod};
use crate::error::{Error, Result};
use crate::forms::class_number_neg;
use crate::ideals::{residue_unit_count, QuadIdeal};
use crate::quadfield::{fundamental_unit, unit_torsion, QuadElement, QuadOrder};

/// Cap on the number of powers of the fundamental unit examined by [`unit_index`].
pub const UNIT_POWER_CAP: u64 = 1_000_000;

/// A modulus `m = m_0 * m_inf`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Modulus {
    /// Over `Q`: prime exponents and whether the real place divides `m`.
    Rational { finite: BTreeMap<u64, u32>, infinite: bool },
    /// Over a quadratic field: the finite part as an ideal and a subset of
    /// the real places (0: `sqrt(D) > 0`, 1: `sqrt(D) < 0`).
    Quadratic { finite: QuadIdeal, real_places: Vec<u8> },
}

impl Modulus {
    pub fn rational(m: u64, infinite: bool) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("finite part of a modulus must be positive".into()));
        }
        let finite = if m == 1 {
            BTreeMap::new()
        } else {
            factorize(m as i64)?.factors.into_iter().collect()
        };
        Ok(Modulus::Rational { finite, infinite })
    }

    pub fn quadratic(finite: QuadIdeal, real_places: &[u8]) -> Result<Self> {
        let order = finite.order();
        let mut places: Vec<u8> = real_places.to_vec();
        places.sort_unstable();
        places.dedup();
        if !order.is_real() && !places.is_empty() {
            return Err(Error::InvalidArgument("imaginary fields have no real places".into()));
        }
        if places.iter().any(|&p| p > 1) {
            return Err(Error::InvalidArgument("real places are numbered 0 and 1".into()));
        }
        Ok(Modulus::Quadratic { finite, real_places: places })
    }

    /// Parses `5*inf`, `2^3*5`, `1`, `inf` (also with `·`).
    pub fn parse_rational(s: &str) -> Result<Self> {
        let err = || Error::Parse(format!("modulus `{s}`"));
        let mut finite = BTreeMap::new();
        let mut infinite = false;
        let s = s.replace('·', "*");
        for part in s.split('*').map(str::trim) {
            if part.is_empty() {
                return Err(err());
            }
            if part == "inf" || part == "oo" {
                if infinite {
                    return Err(err());
                }
                infinite = true;
                continue;
            }
            let (base, exp) = match part.split_once('^') {
                Some((b, e)) => (b, e.parse::<u32>().map_err(|_| err())?),
                None => (part, 1),
            };
            let base: u64 = base.parse().map_err(|_| err())?;
            if base == 0 {
                return Err(err());
            }
            if base == 1 {
                continue;
            }
            for (p, e) in factorize(base as i64)?.factors {
                *finite.entry(p).or_insert(0) += e * exp;
            }
        }
        finite.retain(|_, e| *e > 0);
        Ok(Modulus::Rational { finite, infinite })
    }

    /// `N(m_0)`; for `Q` the positive generator of `m_0`.
    pub fn norm(&self) -> u64 {
        match self {
            Modulus::Rational { finite, .. } => finite.iter().map(|(p, e)| p.pow(*e)).product(),
            Modulus::Quadratic { finite, .. } => finite.norm(),
        }
    }

    /// Number of real places dividing the modulus.
    pub fn s(&self) -> u32 {
        match self {
            Modulus::Rational { infinite, .. } => *infinite as u32,
            Modulus::Quadratic { real_places, .. } => real_places.len() as u32,
        }
    }

    /// `gcd(m, m')` over `Q`: minimum exponents, common real place.
    pub fn gcd(&self, other: &Modulus) -> Result<Modulus> {
        match (self, other) {
            (
                Modulus::Rational { finite: f1, infinite: i1 },
                Modulus::Rational { finite: f2, infinite: i2 },
            ) => {
                let finite = f1
                    .iter()
                    .filter_map(|(p, e)| f2.get(p).map(|e2| (*p, (*e).min(*e2))))
                    .collect();
                Ok(Modulus::Rational { finite, infinite: *i1 && *i2 })
            }
            _ => Err(Error::Unsupported("gcd of moduli is implemented over Q only".into())),
        }
    }

    /// `m * m'` over `Q`.
    pub fn lcm_product(&self, other: &Modulus) -> Result<Modulus> {
        match (self, other) {
            (
                Modulus::Rational { finite: f1, infinite: i1 },
                Modulus::Rational { finite: f2, infinite: i2 },
            ) => {
                let mut finite = f1.clone();
                for (p, e) in f2 {
                    *finite.entry(*p).or_insert(0) += e;
                }
                Ok(Modulus::Rational { finite, infinite: *i1 || *i2 })
            }
            _ => Err(Error::Unsupported("products of moduli are implemented over Q only".into())),
        }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self {
            Modulus::Rational { finite, infinite } => {
                for (p, e) in finite {
                    parts.push(if *e == 1 { p.to_string() } else { format!("{p}^{e}") });
                }
                if parts.is_empty() {
                    parts.push("1".into());
                }
                if *infinite {
                    parts.push("inf".into());
                }
            }
            Modulus::Quadratic { finite, real_places } => {
                parts.push(finite.to_string());
                for p in real_places {
                    parts.push(format!("inf{}", p + 1));
                }
            }
        }
        f.write_str(&parts.join("*"))
    }
}

impl Serialize for Modulus {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn rational_parts(m: &Modulus) -> Result<(&BTreeMap<u64, u32>, bool)> {
    match m {
        Modulus::Rational { finite, infinite } => Ok((finite, *infinite)),
        _ => Err(Error::Unsupported("expected a modulus over Q".into())),
    }
}

/// `v_p` of a rational, with `i64::MAX` standing in for `v_p(0)`.
pub fn rational_valuation(x: &BigRational, p: u64) -> i64 {
    if x.is_zero() {
        return i64::MAX;
    }
    let pb = BigInt::from(p);
    let count = |n: &BigInt| {
        let mut n = n.clone();
        let mut k = 0i64;
        while (&n % &pb).is_zero() {
            n /= &pb;
            k += 1;
        }
        k
    };
    count(x.numer()) - count(x.denom())
}

/// `x = y (mod* m)` over `Q`.
pub fn congruent_mod_star(x: &BigRational, y: &BigRational, m: &Modulus) -> Result<bool> {
    let (finite, infinite) = rational_parts(m)?;
    if x.is_zero() || y.is_zero() {
        return Err(Error::InvalidArgument("mod* congruence is defined on nonzero elements".into()));
    }
    if infinite && x.is_positive() != y.is_positive() {
        return Ok(false);
    }
    let q = x / y - BigRational::one();
    if q.is_zero() {
        return Ok(true);
    }
    Ok(finite.iter().all(|(&p, &e)| rational_valuation(&q, p) >= e as i64))
}

/// Weak approximation over `Q`: some `x` with `x = y (mod* m)` and
/// `x = z (mod* m')`, built by scaling out uniformizers, solving the finite
/// conditions by CRT, and fixing the sign with `alpha + M^N * beta`.
pub fn weak_approx_q(y: &BigRational, z: &BigRational, m: &Modulus, m2: &Modulus) -> Result<BigRational> {
    let (f1, i1) = rational_parts(m)?;
    let (f2, i2) = rational_parts(m2)?;
    if y.is_zero() || z.is_zero() {
        return Err(Error::InvalidArgument("targets must be nonzero".into()));
    }
    let g = m.gcd(m2)?;
    let (gf, gi) = rational_parts(&g)?;
    if gi && y.is_positive() != z.is_positive() {
        return Err(Error::IncompatibleTargets {
            place: "inf".into(),
            detail: format!("{y} and {z} have different signs"),
        });
    }
    let q = y / z - BigRational::one();
    if !q.is_zero() {
        for (&p, &e) in gf {
            let v = rational_valuation(&q, p);
            if v < e as i64 {
                return Err(Error::IncompatibleTargets {
                    place: p.to_string(),
                    detail: format!("v_{p}({y}/{z} - 1) = {v} < {e}"),
                });
            }
        }
    }
    if y == z {
        return Ok(y.clone());
    }

    // finite places: target and exponent per prime
    let mut targets: BTreeMap<u64, (&BigRational, u32)> = BTreeMap::new();
    for (&p, &e) in f1 {
        targets.insert(p, (y, e));
    }
    for (&p, &e) in f2 {
        match targets.get(&p) {
            Some(&(_, e1)) if e1 >= e => {}
            _ => {
                targets.insert(p, (z, e));
            }
        }
    }
    // infinite place
    let beta: Option<BigInt> = if i1 {
        Some(if y.is_positive() { 1.into() } else { (-1).into() })
    } else if i2 {
        Some(if z.is_positive() { 1.into() } else { (-1).into() })
    } else {
        None
    };
    if targets.is_empty() {
        return Ok(match beta {
            Some(b) => BigRational::from_integer(b),
            None => y.clone(),
        });
    }

    // lambda = prod p^{v_p(target_p)}
    let mut lambda = BigRational::one();
    for (&p, &(t, _)) in &targets {
        let v = rational_valuation(t, p);
        let pp = BigRational::from_integer(BigInt::from(p).pow(v.unsigned_abs() as u32));
        lambda = if v >= 0 { lambda * pp } else { lambda / pp };
    }
    // v = t_p / lambda mod p^e for each p; t_p / lambda is a p-adic unit
    let mut congruences = Vec::new();
    for (&p, &(t, e)) in &targets {
        let u = t / &lambda;
        let modulus = BigInt::from(p).pow(e);
        let den = u.denom().mod_floor(&modulus);
        let den_inv = BigInt::from(inv_mod(
            den.to_i128().ok_or_else(|| Error::Unsupported("modulus too large".into()))?,
            modulus.to_u64().ok_or_else(|| Error::Unsupported("modulus too large".into()))?,
        )?);
        let r = (u.numer() * den_inv).mod_floor(&modulus);
        congruences.push((r, modulus));
    }
    let (v, _) = crt_big(&congruences)?;
    let alpha = BigRational::from_integer(v) * &lambda;
    let Some(beta) = beta else {
        return Ok(alpha);
    };

    // x = alpha + M^N beta, with M^N > |alpha| and N >= e_p + v_p(alpha)
    let big_m: BigInt = targets.keys().map(|&p| BigInt::from(p)).product();
    let mut n: u32 = 0;
    for (&p, &(_, e)) in &targets {
        let need = e as i64 + rational_valuation(&alpha, p);
        n = n.max(need.max(0) as u32);
    }
    while BigRational::from_integer(big_m.pow(n)) <= alpha.abs() {
        n += 1;
    }
    let x = alpha + BigRational::from_integer(big_m.pow(n) * beta);
    debug_assert!(congruent_mod_star(&x, y, m).unwrap_or(false));
    debug_assert!(congruent_mod_star(&x, z, m2).unwrap_or(false));
    Ok(x)
}

/// Reduced image of an integral element in `(O/m_0)` with its real signs.
type UnitImage = ((i128, i128), Vec<i8>);

fn reduce_big(ideal: &QuadIdeal, alpha: &QuadElement) -> (i128, i128) {
    let a = BigInt::from(ideal.a());
    let b = BigInt::from(ideal.b());
    let c = BigInt::from(ideal.c());
    let y1 = alpha.y().mod_floor(&c);
    let k = (alpha.y() - &y1) / &c;
    let x1 = (alpha.x() - k * b).mod_floor(&a);
    (x1.to_i128().expect("reduced"), y1.to_i128().expect("reduced"))
}

fn residue_mul(ideal: &QuadIdeal, u: (i128, i128), v: (i128, i128)) -> (i128, i128) {
    let order = ideal.order();
    let d = order.disc() as i128;
    let n = order.norm_w() as i128;
    let yy = u.1 * v.1;
    let x = u.0 * v.0 - yy * n;
    let y = u.0 * v.1 + v.0 * u.1 + yy * d;
    ideal.reduce_coords(x, y)
}

/// `[U_K : U_m]`.
pub fn unit_index(m: &Modulus) -> Result<u64> {
    match m {
        Modulus::Rational { .. } => {
            let minus_one = BigRational::from_integer((-1).into());
            Ok(if congruent_mod_star(&minus_one, &BigRational::one(), m)? { 1 } else { 2 })
        }
        Modulus::Quadratic { finite, real_places } => {
            let order = finite.order();
            let one = finite.reduce_coords(1, 0);
            if !order.is_real() {
                let w = unit_torsion(order.disc())?.torsion_order as u64;
                let units = torsion_units(order);
                debug_assert_eq!(units.len() as u64, w);
                let kept = units
                    .iter()
                    .filter(|u| finite.reduce_coords(u.0 as i128, u.1 as i128) == one)
                    .count() as u64;
                return Ok(w / kept);
            }
            let eps = fundamental_unit(order.disc())?;
            let signs = |e: &QuadElement| -> Vec<i8> { real_places.iter().map(|&p| e.real_sign(p as usize)).collect() };
            let identity: UnitImage = (one, vec![1; real_places.len()]);
            let minus: UnitImage = (finite.reduce_coords(-1, 0), vec![-1; real_places.len()]);
            let step: UnitImage = (reduce_big(finite, &eps), signs(&eps));
            let mut seen: HashSet<UnitImage> = HashSet::new();
            let mut cur = identity.clone();
            let mut k = 0u64;
            loop {
                seen.insert(cur.clone());
                let next_res = residue_mul(finite, cur.0, step.0);
                let next_sign: Vec<i8> = cur.1.iter().zip(&step.1).map(|(a, b)| a * b).collect();
                cur = (next_res, next_sign);
                k += 1;
                if cur == identity {
                    break;
                }
                if k >= UNIT_POWER_CAP {
                    return Err(Error::IterationCap(UNIT_POWER_CAP));
                }
            }
            let order_eps = seen.len() as u64;
            Ok(if seen.contains(&minus) { order_eps } else { 2 * order_eps })
        }
    }
}

/// Roots of unity of an imaginary order as `(x, y)` coordinates.
pub(crate) fn torsion_units(order: QuadOrder) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for x in -4i64..=4 {
        for y in -2i64..=2 {
            if QuadElement::integral(order, x, y).norm().is_one() {
                out.push((x, y));
            }
        }
    }
    out
}

/// Where the class number used in a ray class computation came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassNumberSource {
    Rationals,
    ReducedForms,
    Supplied,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RayClassReport {
    pub modulus: Modulus,
    pub h_m: u64,
    pub two_pow_s: u64,
    pub norm_m0: u64,
    #[serde(serialize_with = "ser_rational")]
    pub euler_factor: BigRational,
    /// `N(m_0) * prod (1 - 1/N(P))`, the order of `(O/m_0)*`.
    pub residue_units: u64,
    pub unit_index: u64,
    pub h: u64,
    pub h_source: ClassNumberSource,
}

fn ser_rational<S: Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// `h_m = 2^s N(m_0) prod(1 - 1/N(P)) h / [U : U_m]`.
pub fn ray_class_number(m: &Modulus, supplied_h: Option<u64>) -> Result<RayClassReport> {
    let (h, h_source, residue_units) = match m {
        Modulus::Rational { .. } => (1, ClassNumberSource::Rationals, euler_phi(m.norm())),
        Modulus::Quadratic { finite, .. } => {
            let order = finite.order();
            let h = match (supplied_h, order.is_real()) {
                (Some(h), _) => (h, ClassNumberSource::Supplied),
                (None, false) => (class_number_neg(order.disc())?.0, ClassNumberSource::ReducedForms),
                (None, true) => {
                    return Err(Error::Unsupported(
                        "real quadratic fields need a caller-supplied class number".into(),
                    ))
                }
            };
            (h.0, h.1, residue_unit_count(finite)?)
        }
    };
    let norm = m.norm();
    let two_pow_s = 1u64 << m.s();
    let idx = unit_index(m)?;
    let numerator = two_pow_s * residue_units * h;
    if numerator % idx != 0 {
        return Err(Error::ModuleInvariant(format!(
            "unit index {idx} does not divide {numerator}"
        )));
    }
    Ok(RayClassReport {
        modulus: m.clone(),
        h_m: numerator / idx,
        two_pow_s,
        norm_m0: norm,
        euler_factor: BigRational::new(residue_units.into(), norm.into()),
        residue_units,
        unit_index: idx,
        h,
        h_source,
    })
}

/// Distinct classes among `reps` under `mod* m`, by pairwise comparison.
pub(crate) fn count_mod_star_classes(reps: &[BigRational], m: &Modulus) -> Result<usize> {
    let mut classes: Vec<&BigRational> = Vec::new();
    for x in reps {
        let mut found = false;
        for r in &classes {
            if congruent_mod_star(x, r, m)? {
                found = true;
                break;
            }
        }
        if !found {
            classes.push(x);
        }
    }
    Ok(classes.len())
}

/// Signed residues `(a mod m, sign)` realised by integers in `[-limit, limit]`
/// coprime to `m`.
#[cfg(test)]
fn residue_signatures(m: u64, infinite: bool, limit: i64) -> std::collections::BTreeSet<(u64, bool)> {
    (-limit..=limit)
        .filter(|&a| a != 0 && num_integer::gcd(a.unsigned_abs(), m) == 1)
        .map(|a| (a.rem_euclid(m as i64) as u64, infinite && a > 0))
        .collect()
}
