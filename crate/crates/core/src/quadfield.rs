//! Quadratic orders `O_D = Z[w]` with `w = (D + sqrt(D))/2`.
//!
//! Every element is stored in the basis `[1, w]` of its order, over a common
//! positive denominator, so multiplication follows the single rule
//! `w^2 = D*w - (D^2 - D)/4` regardless of the residue of `D` mod 4.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::arith::{factorize, isqrt, is_square};
use crate::error::{Error, Result};

/// A quadratic discriminant `D = f^2 * d_K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Discriminant {
    disc: i64,
    fundamental: i64,
    conductor: u64,
}

impl Discriminant {
    pub fn value(&self) -> i64 {
        self.disc
    }

    pub fn fundamental(&self) -> i64 {
        self.fundamental
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_fundamental(&self) -> bool {
        self.conductor == 1
    }

    /// Squarefree `m` with `K = Q(sqrt(m))`.
    pub fn squarefree_kernel(&self) -> i64 {
        if self.fundamental % 4 == 0 {
            self.fundamental / 4
        } else {
            self.fundamental
        }
    }
}

fn squarefree_part(n: i64) -> i64 {
    let f = factorize(n).expect("nonzero");
    let odd: i64 = f
        .factors
        .iter()
        .filter(|&&(_, e)| e % 2 == 1)
        .map(|&(p, _)| p as i64)
        .product();
    f.sign as i64 * odd
}

/// Validate `D` and split it as `f^2 * d_K` with `d_K` fundamental.
pub fn make_discriminant(d: i64) -> Result<Discriminant> {
    let fail = |reason: &str| Error::InvalidDiscriminant { disc: d, reason: reason.to_string() };
    if d == 0 || d == 1 {
        return Err(fail("D must not be 0 or 1"));
    }
    if d.rem_euclid(4) > 1 {
        return Err(fail("D must be 0 or 1 mod 4"));
    }
    if is_square(d as i128) {
        return Err(fail("D must not be a perfect square"));
    }
    let m = squarefree_part(d);
    let fundamental = if m.rem_euclid(4) == 1 { m } else { 4 * m };
    let ratio = d / fundamental;
    debug_assert_eq!(d % fundamental, 0);
    let conductor = isqrt(ratio as u128) as u64;
    debug_assert_eq!((conductor * conductor) as i64, ratio);
    Ok(Discriminant { disc: d, fundamental, conductor })
}

/// `true` when `d` is the discriminant of a maximal quadratic order.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    make_discriminant(d).map(|x| x.is_fundamental()).unwrap_or(false)
}

/// The order of discriminant `D` in `Q(sqrt(D))`, with basis `[1, w]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadOrder {
    disc: Discriminant,
}

impl QuadOrder {
    pub fn new(d: i64) -> Result<Self> {
        Ok(QuadOrder { disc: make_discriminant(d)? })
    }

    /// The maximal order `O_K` of the field containing this order.
    pub fn maximal(&self) -> QuadOrder {
        QuadOrder::new(self.disc.fundamental).expect("fundamental discriminant is valid")
    }

    pub fn disc(&self) -> i64 {
        self.disc.disc
    }

    pub fn discriminant(&self) -> Discriminant {
        self.disc
    }

    pub fn is_maximal(&self) -> bool {
        self.disc.is_fundamental()
    }

    pub fn is_real(&self) -> bool {
        self.disc.disc > 0
    }

    /// `N(w) = (D^2 - D)/4`, the constant term of the minimal polynomial of `w`.
    pub fn norm_w(&self) -> i64 {
        let d = self.disc.disc;
        (d * d - d) / 4
    }

    pub fn w(&self) -> QuadElement {
        QuadElement::integral(*self, 0, 1)
    }

    pub fn one(&self) -> QuadElement {
        QuadElement::integral(*self, 1, 0)
    }

    pub fn zero(&self) -> QuadElement {
        QuadElement::integral(*self, 0, 0)
    }
}

/// `(x + y*w)/denom` in a fixed quadratic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadElement {
    order: QuadOrder,
    x: BigInt,
    y: BigInt,
    denom: BigInt,
}

impl QuadElement {
    pub fn new(order: QuadOrder, x: BigInt, y: BigInt, denom: BigInt) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Ok(Self::normalized(order, x, y, denom))
    }

    pub fn integral(order: QuadOrder, x: i64, y: i64) -> Self {
        QuadElement { order, x: x.into(), y: y.into(), denom: BigInt::one() }
    }

    fn normalized(order: QuadOrder, mut x: BigInt, mut y: BigInt, mut denom: BigInt) -> Self {
        if denom.is_negative() {
            x = -x;
            y = -y;
            denom = -denom;
        }
        let g = x.gcd(&y).gcd(&denom);
        if !g.is_zero() && !g.is_one() {
            x /= &g;
            y /= &g;
            denom /= &g;
        }
        if x.is_zero() && y.is_zero() {
            denom = BigInt::one();
        }
        QuadElement { order, x, y, denom }
    }

    pub fn order(&self) -> QuadOrder {
        self.order
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    pub fn is_integral(&self) -> bool {
        self.denom.is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    fn same_order(&self, other: &QuadElement) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order.disc(), other.order.disc()));
        }
        Ok(())
    }

    pub fn add(&self, other: &QuadElement) -> Result<QuadElement> {
        self.same_order(other)?;
        Ok(Self::normalized(
            self.order,
            &self.x * &other.denom + &other.x * &self.denom,
            &self.y * &other.denom + &other.y * &self.denom,
            &self.denom * &other.denom,
        ))
    }

    pub fn sub(&self, other: &QuadElement) -> Result<QuadElement> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> QuadElement {
        QuadElement {
            order: self.order,
            x: -&self.x,
            y: -&self.y,
            denom: self.denom.clone(),
        }
    }

    pub fn mul(&self, other: &QuadElement) -> Result<QuadElement> {
        self.same_order(other)?;
        let d = BigInt::from(self.order.disc());
        let c = BigInt::from(self.order.norm_w());
        let yy = &self.y * &other.y;
        let x = &self.x * &other.x - &yy * &c;
        let y = &self.x * &other.y + &other.x * &self.y + &yy * &d;
        Ok(Self::normalized(self.order, x, y, &self.denom * &other.denom))
    }

    pub fn scale(&self, k: &BigInt) -> QuadElement {
        Self::normalized(self.order, &self.x * k, &self.y * k, self.denom.clone())
    }

    pub fn pow(&self, mut e: u64) -> QuadElement {
        let mut base = self.clone();
        let mut acc = self.order.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same order");
            }
            base = base.mul(&base).expect("same order");
            e >>= 1;
        }
        acc
    }

    /// Galois conjugate: `w -> D - w`.
    pub fn conjugate(&self) -> QuadElement {
        let d = BigInt::from(self.order.disc());
        Self::normalized(self.order, &self.x + &self.y * d, -&self.y, self.denom.clone())
    }

    /// `N(x + y*w) = x^2 + D*x*y + ((D^2 - D)/4)*y^2`, over `denom^2`.
    pub fn norm(&self) -> BigRational {
        let d = BigInt::from(self.order.disc());
        let c = BigInt::from(self.order.norm_w());
        let num = &self.x * &self.x + d * &self.x * &self.y + c * &self.y * &self.y;
        BigRational::new(num, &self.denom * &self.denom)
    }

    pub fn trace(&self) -> BigRational {
        let d = BigInt::from(self.order.disc());
        BigRational::new(BigInt::from(2) * &self.x + &self.y * d, self.denom.clone())
    }

    pub fn inverse(&self) -> Result<QuadElement> {
        if self.is_zero() {
            return Err(Error::InvalidArgument("zero has no inverse".into()));
        }
        let n = self.norm();
        let c = self.conjugate();
        // c / n with n = p/q:  (x + y w)/denom * q/p
        Ok(Self::normalized(
            self.order,
            c.x * n.denom(),
            c.y * n.denom(),
            c.denom * n.numer(),
        ))
    }

    /// `a + b*sqrt(m)` with `m` the squarefree kernel of the field.
    pub fn to_surd(&self) -> (BigRational, BigRational, i64) {
        let disc = self.order.discriminant();
        let m = disc.squarefree_kernel();
        // sqrt(D) = k*sqrt(m)
        let k = if disc.fundamental() % 4 == 0 {
            2 * disc.conductor() as i64
        } else {
            disc.conductor() as i64
        };
        let d = BigInt::from(disc.value());
        let two_den = BigInt::from(2) * &self.denom;
        let a = BigRational::new(BigInt::from(2) * &self.x + &self.y * d, two_den.clone());
        let b = BigRational::new(&self.y * k, two_den);
        (a, b, m)
    }

    /// Inverse of [`to_surd`](Self::to_surd).
    pub fn from_surd(order: QuadOrder, a: &BigRational, b: &BigRational) -> QuadElement {
        let disc = order.discriminant();
        let k = if disc.fundamental() % 4 == 0 {
            2 * disc.conductor() as i64
        } else {
            disc.conductor() as i64
        };
        let y = b * BigRational::from_integer(BigInt::from(2)) / BigRational::from_integer(k.into());
        let x = a - &y * BigRational::new(BigInt::from(disc.value()), BigInt::from(2));
        let den = x.denom().lcm(y.denom());
        let xn = x.numer() * (&den / x.denom());
        let yn = y.numer() * (&den / y.denom());
        Self::normalized(order, xn, yn, den)
    }

    /// Sign of the image under the real embedding `place` (0: `sqrt(D) > 0`,
    /// 1: `sqrt(D) < 0`). Only meaningful for real orders.
    pub fn real_sign(&self, place: usize) -> i8 {
        debug_assert!(self.order.is_real());
        let u = BigInt::from(2) * &self.x + &self.y * BigInt::from(self.order.disc());
        let v = if place == 0 { self.y.clone() } else { -&self.y };
        // sign of u + v*sqrt(D)
        let su = u.sign();
        let sv = v.sign();
        use num_bigint::Sign::*;
        let s = match (su, sv) {
            (NoSign, NoSign) => 0,
            (Plus, NoSign) | (NoSign, Plus) | (Plus, Plus) => 1,
            (Minus, NoSign) | (NoSign, Minus) | (Minus, Minus) => -1,
            (Plus, Minus) | (Minus, Plus) => {
                let lhs = &u * &u;
                let rhs = &v * &v * BigInt::from(self.order.disc());
                match lhs.cmp(&rhs) {
                    Ordering::Greater => if su == Plus { 1 } else { -1 },
                    Ordering::Less => if sv == Plus { 1 } else { -1 },
                    Ordering::Equal => 0,
                }
            }
        };
        s
    }

    /// Floating-point value under the first real embedding.
    pub fn to_f64(&self) -> f64 {
        let d = self.order.disc() as f64;
        let w = (d + d.abs().sqrt()) / 2.0;
        (self.x.to_f64().unwrap_or(f64::NAN) + self.y.to_f64().unwrap_or(f64::NAN) * w)
            / self.denom.to_f64().unwrap_or(f64::NAN)
    }

    /// Renders as `(x, y; denom)`.
    pub fn basis_string(&self) -> String {
        format!("({}, {}; {})", self.x, self.y, self.denom)
    }

    /// Renders as `a + b·sqrt(m)`.
    pub fn surd_string(&self) -> String {
        let (a, b, m) = self.to_surd();
        if b.is_negative() {
            format!("{} - {}·sqrt({})", a, -b, m)
        } else {
            format!("{} + {}·sqrt({})", a, b, m)
        }
    }

    /// Parses either rendering, in the given order.
    pub fn parse(order: QuadOrder, s: &str) -> Result<QuadElement> {
        let s = s.trim();
        if s.starts_with('(') {
            return Self::parse_basis(order, s);
        }
        Self::parse_surd(order, s)
    }

    fn parse_basis(order: QuadOrder, s: &str) -> Result<QuadElement> {
        let err = || Error::Parse(format!("expected `(x, y; denom)`, got `{s}`"));
        let inner = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(err)?;
        let (xy, den) = inner.split_once(';').ok_or_else(err)?;
        let (x, y) = xy.split_once(',').ok_or_else(err)?;
        let num = |t: &str| BigInt::from_str(t.trim()).map_err(|_| err());
        Self::new(order, num(x)?, num(y)?, num(den)?)
    }

    fn parse_surd(order: QuadOrder, s: &str) -> Result<QuadElement> {
        let err = || Error::Parse(format!("expected `a + b·sqrt(m)`, got `{s}`"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let compact = compact.replace('·', "*");
        let body = compact.strip_suffix(')').ok_or_else(err)?;
        let (head, m) = body.rsplit_once("*sqrt(").ok_or_else(err)?;
        let m: i64 = m.parse().map_err(|_| err())?;
        if m != order.discriminant().squarefree_kernel() {
            return Err(Error::Parse(format!(
                "sqrt({m}) does not belong to the field of discriminant {}",
                order.disc()
            )));
        }
        // split `a(+|-)b` at the last sign that is not leading
        let idx = head
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last()
            .ok_or_else(err)?;
        let (a, b) = head.split_at(idx);
        let rat = |t: &str| parse_rational(t).ok_or_else(err);
        let a = rat(a)?;
        let b = if let Some(rest) = b.strip_prefix('+') { rat(rest)? } else { -rat(&b[1..])? };
        Ok(Self::from_surd(order, &a, &b))
    }
}

pub(crate) fn parse_rational(t: &str) -> Option<BigRational> {
    let t = t.trim();
    match t.split_once('/') {
        Some((n, d)) => {
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(BigInt::from_str(n.trim()).ok()?, d))
        }
        None => Some(BigRational::from_integer(BigInt::from_str(t).ok()?)),
    }
}

impl fmt::Display for QuadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.surd_string())
    }
}

/// Roots of unity and, for real orders, the fundamental unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitGroup {
    pub torsion_order: u32,
    pub fundamental_unit: Option<QuadElement>,
}

/// Torsion of the unit group of an imaginary order.
pub fn unit_torsion(d: i64) -> Result<UnitGroup> {
    let disc = make_discriminant(d)?;
    if d > 0 {
        return Err(Error::InvalidArgument(format!(
            "unit_torsion expects D < 0, got {d}"
        )));
    }
    let torsion_order = match disc.value() {
        -3 => 6,
        -4 => 4,
        _ => 2,
    };
    Ok(UnitGroup { torsion_order, fundamental_unit: None })
}

/// Cap on continued-fraction steps in [`fundamental_unit`].
pub const UNIT_STEP_CAP: u64 = 1_000_000;

/// The fundamental unit `eps > 1` of the real order of discriminant `D`.
///
/// Expands `theta = (b + sqrt(D))/2` (with `b = D mod 2`) as a continued
/// fraction; units of norm `±1` show up among the convergents `h/k` as
/// `h - k*conj(theta)`, and the first one found is the smallest above 1.
pub fn fundamental_unit(d: i64) -> Result<QuadElement> {
    let order = QuadOrder::new(d)?;
    if d < 0 {
        return Err(Error::InvalidArgument(format!(
            "no fundamental unit for D = {d} < 0"
        )));
    }
    let disc = BigInt::from(d);
    let s = BigInt::from(isqrt(d as u128) as u64);
    let b = BigInt::from(d.rem_euclid(2));
    let two = BigInt::from(2);
    let (mut p, mut q) = (b.clone(), two.clone());
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    let target = BigInt::from(4);
    for _ in 0..UNIT_STEP_CAP {
        let a = (&p + &s).div_floor(&q);
        (h_prev, h) = (h.clone(), &a * &h + &h_prev);
        (k_prev, k) = (k.clone(), &a * &k + &k_prev);
        // 4*N(h - k*conj(theta)) = (2h - kb)^2 - D k^2
        let t = &two * &h - &k * &b;
        let n4 = &t * &t - &disc * &k * &k;
        if n4.abs() == target {
            // h - k*(b - sqrt D)/2 = h - k(b + D)/2 + k*w
            let x = &h - &k * (&b + &disc) / &two;
            return QuadElement::new(order, x, k.clone(), BigInt::one());
        }
        p = &a * &q - &p;
        q = (&disc - &p * &p) / &q;
    }
    Err(Error::IterationCap(UNIT_STEP_CAP))
}

/// Unit group of an arbitrary order.
pub fn unit_group(d: i64) -> Result<UnitGroup> {
    if d < 0 {
        unit_torsion(d)
    } else {
        Ok(UnitGroup { torsion_order: 2, fundamental_unit: Some(fundamental_unit(d)?) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn discriminant_examples() {
        let d = make_discriminant(-56).unwrap();
        assert_eq!((d.fundamental(), d.conductor()), (-56, 1));
        let d = make_discriminant(-12).unwrap();
        assert_eq!((d.fundamental(), d.conductor()), (-3, 2));
        let d = make_discriminant(8).unwrap();
        assert_eq!((d.fundamental(), d.conductor()), (8, 1));
        for bad in [0, 1, 2, 3, -1, 4, 9, 16, 7, -6] {
            assert!(make_discriminant(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn discriminant_round_trip() {
        for d in -10_000i64..=10_000 {
            let Ok(disc) = make_discriminant(d) else {
                continue;
            };
            let f = disc.conductor() as i64;
            assert_eq!(f * f * disc.fundamental(), d);
            let k = make_discriminant(disc.fundamental()).unwrap();
            assert!(k.is_fundamental());
            let m = disc.squarefree_kernel();
            assert_eq!(squarefree_part(m), m);
        }
    }

    #[test]
    fn norm_examples() {
        let o = QuadOrder::new(-4).unwrap();
        assert_eq!(o.one().norm(), rat(1, 1));
        assert_eq!(QuadElement::integral(o, 4, 1).norm(), rat(5, 1));
        let o = QuadOrder::new(13).unwrap();
        // (3 + sqrt 13)/2 = 1 + w - 6 ... w = (13 + sqrt 13)/2 so the element is w - 5
        let e = QuadElement::integral(o, -5, 1);
        assert_eq!(e.norm(), rat(-1, 1));
        assert_eq!(e.to_surd(), (rat(3, 2), rat(1, 2), 13));
    }

    #[test]
    fn conjugate_examples() {
        let o = QuadOrder::new(-4).unwrap();
        let r = QuadElement::integral(o, 7, 0);
        assert_eq!(r.conjugate(), r);
        assert_eq!(o.w().conjugate(), QuadElement::integral(o, -4, -1));
        let e = QuadElement::integral(o, 4, 1);
        assert_eq!(e.conjugate(), QuadElement::integral(o, 0, -1));
        // 2 - i
        assert_eq!(e.conjugate().to_surd(), (rat(2, 1), rat(-1, 1), -1));
        let prod = e.mul(&e.conjugate()).unwrap();
        assert_eq!(prod, QuadElement::integral(o, 5, 0));
    }

    #[test]
    fn cross_order_arithmetic_is_an_error() {
        let a = QuadOrder::new(-4).unwrap().one();
        let b = QuadOrder::new(-16).unwrap().one();
        assert_eq!(a.mul(&b), Err(Error::OrderMismatch(-4, -16)));
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn fundamental_unit_examples() {
        let e = fundamental_unit(8).unwrap();
        assert_eq!(e.to_surd(), (rat(1, 1), rat(1, 1), 2));
        assert_eq!(e.norm(), rat(-1, 1));
        let e = fundamental_unit(13).unwrap();
        assert_eq!(e.to_surd(), (rat(3, 2), rat(1, 2), 13));
        assert_eq!(e.norm(), rat(-1, 1));
        let e = fundamental_unit(12).unwrap();
        assert_eq!(e.to_surd(), (rat(2, 1), rat(1, 1), 3));
        assert_eq!(e.norm(), rat(1, 1));
        assert!(fundamental_unit(-4).is_err());
    }

    /// Pell brute force: the smallest `y > 0` with `t^2 - D y^2 = ±4`.
    fn pell_oracle(d: i64) -> (i64, i64) {
        for y in 1i64.. {
            for sign in [-4i64, 4] {
                let t2 = d * y * y + sign;
                if t2 > 0 && is_square(t2 as i128) {
                    return (isqrt(t2 as u128) as i64, y);
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn fundamental_unit_matches_pell_search() {
        for d in 5..100i64 {
            if !is_fundamental_discriminant(d) {
                continue;
            }
            let eps = fundamental_unit(d).unwrap();
            let (t, y) = pell_oracle(d);
            // eps = (t + y sqrt d)/2
            let (a, b, _) = eps.to_surd();
            let k = if d % 4 == 0 { 2 } else { 1 };
            assert_eq!(a, rat(t, 2), "d = {d}");
            assert_eq!(b, rat(y * k, 2), "d = {d}");
            assert!(eps.norm().abs().is_one());
            assert!(eps.to_f64() > 1.0);
        }
    }

    #[test]
    fn fundamental_unit_larger_discriminants() {
        for d in [94i64 * 4, 4 * 991, 9949, 1_000 * 4 + 1] {
            let Ok(disc) = make_discriminant(d) else { continue };
            let eps = fundamental_unit(disc.value()).unwrap();
            assert!(eps.norm().abs().is_one());
            assert_eq!(eps.real_sign(0), 1);
        }
        // a unit with many digits
        let eps = fundamental_unit(4 * 991).unwrap();
        assert!(eps.x().bits() > 90);
    }

    #[test]
    fn torsion() {
        assert_eq!(unit_torsion(-4).unwrap().torsion_order, 4);
        assert_eq!(unit_torsion(-3).unwrap().torsion_order, 6);
        assert_eq!(unit_torsion(-56).unwrap().torsion_order, 2);
        assert_eq!(unit_torsion(-12).unwrap().torsion_order, 2);
        assert!(unit_torsion(5).is_err());
    }

    #[test]
    fn torsion_by_enumeration() {
        for d in [-3i64, -4, -7, -8, -12, -16, -56] {
            let o = QuadOrder::new(d).unwrap();
            let mut count = 0;
            for x in -4i64..=4 {
                for y in -4i64..=4 {
                    if QuadElement::integral(o, x, y).norm().is_one() {
                        count += 1;
                    }
                }
            }
            assert_eq!(count, unit_torsion(d).unwrap().torsion_order, "D = {d}");
        }
    }

    #[test]
    fn renderings_parse_back() {
        let o = QuadOrder::new(13).unwrap();
        let e = QuadElement::integral(o, -5, 1);
        assert_eq!(e.surd_string(), "3/2 + 1/2·sqrt(13)");
        assert_eq!(e.basis_string(), "(-5, 1; 1)");
        assert_eq!(QuadElement::parse(o, "3/2 + 1/2*sqrt(13)").unwrap(), e);
        assert_eq!(QuadElement::parse(o, "(-5, 1; 1)").unwrap(), e);
        let o = QuadOrder::new(-4).unwrap();
        let e = QuadElement::integral(o, 0, -1);
        assert_eq!(e.surd_string(), "2 - 1·sqrt(-1)");
        assert_eq!(QuadElement::parse(o, &e.surd_string()).unwrap(), e);
        assert!(QuadElement::parse(o, "1 + 1·sqrt(2)").is_err());
        assert!(QuadElement::parse(o, "(1, 2)").is_err());
    }

    fn element(d: i64) -> impl Strategy<Value = QuadElement> {
        (-1000i64..1000, -1000i64..1000, 1i64..50).prop_map(move |(x, y, den)| {
            QuadElement::new(QuadOrder::new(d).unwrap(), x.into(), y.into(), den.into()).unwrap()
        })
    }

    fn disc() -> impl Strategy<Value = i64> {
        prop::sample::select(vec![-56i64, -4, -3, -12, 5, 8, 13, 12, 45, -23])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn norm_is_multiplicative((a, b) in disc().prop_flat_map(|d| (element(d), element(d)))) {
            prop_assert_eq!(a.mul(&b).unwrap().norm(), a.norm() * b.norm());
        }

        #[test]
        fn conjugation_laws(a in disc().prop_flat_map(element)) {
            prop_assert_eq!(a.conjugate().conjugate(), a.clone());
            let n = a.mul(&a.conjugate()).unwrap();
            prop_assert!(n.is_rational());
            prop_assert_eq!(BigRational::new(n.x().clone(), n.denom().clone()), a.norm());
            let tr = a.add(&a.conjugate()).unwrap();
            prop_assert!(tr.is_rational());
            if a.is_integral() {
                prop_assert!(a.trace().is_integer());
            }
        }

        #[test]
        fn renderings_round_trip(a in disc().prop_flat_map(element)) {
            let o = a.order();
            prop_assert_eq!(QuadElement::parse(o, &a.surd_string()).unwrap(), a.clone());
            prop_assert_eq!(QuadElement::parse(o, &a.basis_string()).unwrap(), a.clone());
        }

        #[test]
        fn inverse_is_inverse(a in disc().prop_flat_map(element)) {
            prop_assume!(!a.is_zero());
            prop_assert_eq!(a.mul(&a.inverse().unwrap()).unwrap(), a.order().one());
        }
    }
}
