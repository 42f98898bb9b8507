//! Integral ideals of maximal quadratic orders in Hermite normal form.
//!
//! An ideal is the lattice `aZ + (b + c*w)Z` inside `O = Z[w]`, with `c | a`,
//! `c | b` and `0 <= b < a`. Writing it as `c * [A, B + w]`, the primitive
//! part `[A, B + w]` is an ideal exactly when `A | N(B + w)`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;

use crate::arith::{ext_gcd, factorize, gcd, kronecker_symbol, require_prime, sqrt_mod_p};
use crate::error::{Error, Result};
use crate::forms::{class_number_neg, principal_form, reduce_form, reduce_form_tracked, BinaryQuadraticForm};
use crate::quadfield::{QuadElement, QuadOrder};

/// Largest norm bound accepted by the enumeration routines unless raised.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadIdeal {
    order: QuadOrder,
    a: i64,
    b: i64,
    c: i64,
}

fn fit(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::InvalidArgument("ideal coefficient overflow".into()))
}

/// `(x + y w) * w`, using `w^2 = D w - (D^2 - D)/4`.
fn times_w(order: &QuadOrder, x: i128, y: i128) -> (i128, i128) {
    let d = order.disc() as i128;
    let n = order.norm_w() as i128;
    (-n * y, x + d * y)
}

fn require_maximal(order: &QuadOrder) -> Result<()> {
    if !order.is_maximal() {
        return Err(Error::Unsupported(format!(
            "ideal arithmetic needs a maximal order; D = {} has conductor {}",
            order.disc(),
            order.discriminant().conductor()
        )));
    }
    Ok(())
}

impl QuadIdeal {
    /// Validates an HNF triple.
    pub fn new(order: QuadOrder, a: i64, b: i64, c: i64) -> Result<Self> {
        require_maximal(&order)?;
        if a <= 0 || c <= 0 || b < 0 || b >= a || a % c != 0 || b % c != 0 {
            return Err(Error::InvalidArgument(format!("[{a}, {b} + {c}w] is not in Hermite normal form")));
        }
        let id = QuadIdeal { order, a, b, c };
        // closure under multiplication by w
        let (x1, y1) = id.mul_w(a as i128, 0);
        let (x2, y2) = id.mul_w(b as i128, c as i128);
        if !id.contains_coords(x1, y1) || !id.contains_coords(x2, y2) {
            return Err(Error::InvalidArgument(format!("[{a}, {b} + {c}w] is not an ideal")));
        }
        Ok(id)
    }

    /// The unit ideal `O`.
    pub fn unit(order: QuadOrder) -> Result<Self> {
        Self::new(order, 1, 0, 1)
    }

    pub fn order(&self) -> QuadOrder {
        self.order
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn norm(&self) -> u64 {
        (self.a * self.c) as u64
    }

    pub fn is_unit(&self) -> bool {
        self.a == 1
    }

    fn mul_w(&self, x: i128, y: i128) -> (i128, i128) {
        times_w(&self.order, x, y)
    }

    pub fn contains_coords(&self, x: i128, y: i128) -> bool {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        if y % c != 0 {
            return false;
        }
        (x - (y / c) * b) % a == 0
    }

    pub fn contains(&self, alpha: &QuadElement) -> bool {
        if alpha.order() != self.order || !alpha.is_integral() {
            return false;
        }
        match (alpha.x().to_i128(), alpha.y().to_i128()) {
            (Some(x), Some(y)) => self.contains_coords(x, y),
            _ => {
                let c = BigInt::from(self.c);
                if alpha.y() % &c != BigInt::from(0) {
                    return false;
                }
                let k = alpha.y() / &c;
                (alpha.x() - k * BigInt::from(self.b)) % BigInt::from(self.a) == BigInt::from(0)
            }
        }
    }

    /// Canonical representative of `x + y w` modulo the ideal: `0 <= x' < a`, `0 <= y' < c`.
    pub fn reduce_coords(&self, x: i128, y: i128) -> (i128, i128) {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let y1 = y.rem_euclid(c);
        let k = (y - y1) / c;
        ((x - k * b).rem_euclid(a), y1)
    }

    /// HNF of the `Z`-span of coordinate vectors, assumed to be a full-rank
    /// lattice closed under `w`.
    fn from_lattice(order: QuadOrder, vecs: &[(i128, i128)]) -> Result<Self> {
        let mut a: i128 = 0;
        let mut u: Option<(i128, i128)> = None;
        for &(x, y) in vecs {
            if y == 0 {
                a = gcd(a, x) as i128;
                continue;
            }
            match u {
                None => u = Some(if y < 0 { (-x, -y) } else { (x, y) }),
                Some((ux, uy)) => {
                    let (g, s, t) = ext_gcd(uy, y);
                    let (g, s, t) = if g < 0 { (-g, -s, -t) } else { (g, s, t) };
                    let nx = s * ux + t * x;
                    // the complementary combination has zero w-coordinate
                    let zx = (y / g) * ux - (uy / g) * x;
                    a = gcd(a, zx) as i128;
                    u = Some(if a > 0 { (nx.rem_euclid(a), g) } else { (nx, g) });
                }
            }
            if let (Some((ux, uy)), true) = (u, a > 0) {
                u = Some((ux.rem_euclid(a), uy));
            }
        }
        let (ux, c) = u.ok_or_else(|| Error::InvalidArgument("lattice has rank < 2".into()))?;
        if a == 0 {
            return Err(Error::InvalidArgument("lattice has rank < 2".into()));
        }
        QuadIdeal::new(order, fit(a)?, fit(ux.rem_euclid(a))?, fit(c)?)
    }

    /// The ideal generated by integral elements.
    pub fn from_generators(order: QuadOrder, gens: &[QuadElement]) -> Result<Self> {
        require_maximal(&order)?;
        let mut vecs = Vec::with_capacity(2 * gens.len());
        for g in gens {
            if g.order() != order {
                return Err(Error::OrderMismatch(order.disc(), g.order().disc()));
            }
            if !g.is_integral() {
                return Err(Error::InvalidArgument(format!("{g} is not integral")));
            }
            let x = g.x().to_i128().ok_or_else(|| Error::InvalidArgument("generator too large".into()))?;
            let y = g.y().to_i128().ok_or_else(|| Error::InvalidArgument("generator too large".into()))?;
            vecs.push((x, y));
            vecs.push(times_w(&order, x, y));
        }
        Self::from_lattice(order, &vecs)
    }

    pub fn principal(alpha: &QuadElement) -> Result<Self> {
        Self::from_generators(alpha.order(), std::slice::from_ref(alpha))
    }

    /// The ideal `(n)` for a positive integer `n`.
    pub fn rational(order: QuadOrder, n: i64) -> Result<Self> {
        if n <= 0 {
            return Err(Error::InvalidArgument(format!("(n) needs n > 0, got {n}")));
        }
        Self::new(order, n, 0, n)
    }

    /// Generators `a` and `b + c w`.
    pub fn basis(&self) -> [QuadElement; 2] {
        [
            QuadElement::integral(self.order, self.a, 0),
            QuadElement::integral(self.order, self.b, self.c),
        ]
    }

    pub fn mul(&self, other: &QuadIdeal) -> Result<QuadIdeal> {
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order.disc(), other.order.disc()));
        }
        let mut gens = Vec::with_capacity(4);
        for x in self.basis() {
            for y in other.basis() {
                gens.push(x.mul(&y)?);
            }
        }
        Self::from_generators(self.order, &gens)
    }

    pub fn pow(&self, e: u32) -> Result<QuadIdeal> {
        let mut acc = QuadIdeal::unit(self.order)?;
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn conjugate(&self) -> Result<QuadIdeal> {
        let gens: Vec<QuadElement> = self.basis().iter().map(|g| g.conjugate()).collect();
        Self::from_generators(self.order, &gens)
    }

    /// `self` divides `other`, i.e. `other` is contained in `self`.
    pub fn divides(&self, other: &QuadIdeal) -> bool {
        other.basis().iter().all(|g| self.contains(g))
    }

    /// Content `c` and primitive part `(A, B)` with `self = c [A, B + w]`.
    pub fn primitive_part(&self) -> (i64, i64, i64) {
        (self.c, self.a / self.c, self.b / self.c)
    }

    /// The norm form `N(xA + y(B + w)) / A` of the primitive part.
    pub fn associated_form(&self) -> BinaryQuadraticForm {
        let (_, a, b) = self.primitive_part();
        let d = self.order.disc();
        let n = (b as i128) * (b as i128) + d as i128 * b as i128 + self.order.norm_w() as i128;
        BinaryQuadraticForm::new(a, 2 * b + d, (n / a as i128) as i64)
    }
}

impl fmt::Display for QuadIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {} + {}·w]", self.a, self.b, self.c)
    }
}

impl Serialize for QuadIdeal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QuadIdeal", 5)?;
        st.serialize_field("disc", &self.order.disc())?;
        st.serialize_field("a", &self.a)?;
        st.serialize_field("b", &self.b)?;
        st.serialize_field("c", &self.c)?;
        st.serialize_field("norm", &self.norm())?;
        st.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SplittingType {
    Split,
    Inert,
    Ramified,
}

impl SplittingType {
    /// `(e, f, r)`.
    pub fn efr(&self) -> (u32, u32, u32) {
        match self {
            SplittingType::Split => (1, 1, 2),
            SplittingType::Inert => (1, 2, 1),
            SplittingType::Ramified => (2, 1, 1),
        }
    }
}

/// The primes above `p`, each with its ramification index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeDecomposition {
    pub p: u64,
    pub kind: SplittingType,
    pub primes: Vec<(QuadIdeal, u32)>,
}

impl PrimeDecomposition {
    /// `prod P^e`, which equals `(p)`.
    pub fn product(&self) -> Result<QuadIdeal> {
        let order = self.primes[0].0.order();
        let mut acc = QuadIdeal::unit(order)?;
        for (q, e) in &self.primes {
            acc = acc.mul(&q.pow(*e)?)?;
        }
        Ok(acc)
    }
}

/// Roots mod `p` of `N(t + w) = t^2 + D t + (D^2 - D)/4`.
fn norm_poly_roots_mod_p(d: i64, p: u64) -> Result<Vec<u64>> {
    let c0 = (d as i128 * d as i128 - d as i128) / 4;
    if p == 2 {
        return Ok((0..2u64)
            .filter(|&t| (t as i128 * t as i128 + d as i128 * t as i128 + c0).rem_euclid(2) == 0)
            .collect());
    }
    // (2t + D)^2 = D mod p
    let Some(s) = sqrt_mod_p(d, p)? else {
        return Ok(Vec::new());
    };
    let inv2 = (p + 1) / 2;
    let root = |s: u64| {
        let v = (s as i128 - d as i128).rem_euclid(p as i128) as u64;
        crate::arith::mul_mod(v, inv2, p)
    };
    let mut out = vec![root(s)];
    if s != 0 {
        out.push(root(p - s));
    }
    out.sort_unstable();
    Ok(out)
}

/// Decomposition of a rational prime in the maximal order of discriminant `d_K`.
pub fn decompose_prime(p: u64, d: i64) -> Result<PrimeDecomposition> {
    require_prime(p)?;
    let order = QuadOrder::new(d)?;
    require_maximal(&order)?;
    let kind = match kronecker_symbol(d, p as i64)? {
        1 => SplittingType::Split,
        -1 => SplittingType::Inert,
        _ => SplittingType::Ramified,
    };
    let p_i = p as i64;
    let primes = match kind {
        SplittingType::Inert => vec![(QuadIdeal::rational(order, p_i)?, 1)],
        _ => {
            let roots = norm_poly_roots_mod_p(d, p)?;
            let expected = if kind == SplittingType::Split { 2 } else { 1 };
            if roots.len() != expected {
                return Err(Error::ModuleInvariant(format!(
                    "{} roots of the norm polynomial mod {p} for D = {d}",
                    roots.len()
                )));
            }
            let e = if kind == SplittingType::Ramified { 2 } else { 1 };
            roots
                .into_iter()
                .map(|r| Ok((QuadIdeal::new(order, p_i, r as i64, 1)?, e)))
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(PrimeDecomposition { p, kind, primes })
}

/// Distinct prime ideals dividing `a`.
pub fn prime_divisors(a: &QuadIdeal) -> Result<Vec<QuadIdeal>> {
    let mut out = Vec::new();
    if a.is_unit() {
        return Ok(out);
    }
    let n = factorize(a.norm() as i64)?;
    for p in n.primes() {
        for (q, _) in decompose_prime(p, a.order().disc())?.primes {
            if q.divides(a) {
                out.push(q);
            }
        }
    }
    Ok(out)
}

/// `|(O/a)*| = N(a) prod_{P | a} (1 - 1/N(P))`.
pub fn residue_unit_count(a: &QuadIdeal) -> Result<u64> {
    let mut count = a.norm();
    for q in prime_divisors(a)? {
        count = count / q.norm() * (q.norm() - 1);
    }
    Ok(count)
}

/// A generator of `a` when its ideal class is trivial (imaginary fields only).
pub fn is_principal_imaginary(a: &QuadIdeal) -> Result<Option<QuadElement>> {
    let order = a.order();
    if order.is_real() {
        return Err(Error::Unsupported("principality test for real quadratic fields".into()));
    }
    let f = a.associated_form();
    let (r, m) = reduce_form_tracked(&f)?;
    if r != principal_form(order.disc())? {
        return Ok(None);
    }
    let (c, aa, bb) = a.primitive_part();
    let (x, y) = (m[0][0], m[1][0]);
    // x*A + y*(B + w), scaled by the content
    let gen = QuadElement::new(
        order,
        BigInt::from(c as i128 * (x * aa as i128 + y * bb as i128)),
        BigInt::from(c as i128 * y),
        BigInt::from(1),
    )?;
    debug_assert_eq!(QuadIdeal::principal(&gen)?, *a);
    Ok(Some(gen))
}

/// Reduced forms of discriminant `D`, indexed by position in [`class_number_neg`].
pub struct ClassLabeler {
    index: HashMap<BinaryQuadraticForm, usize>,
    forms: Vec<BinaryQuadraticForm>,
}

impl ClassLabeler {
    pub fn new(d: i64) -> Result<Self> {
        let (_, forms) = class_number_neg(d)?;
        let index = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        Ok(ClassLabeler { index, forms })
    }

    pub fn class_number(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[BinaryQuadraticForm] {
        &self.forms
    }

    pub fn label(&self, a: &QuadIdeal) -> Result<usize> {
        self.label_form(&a.associated_form())
    }

    fn label_form(&self, f: &BinaryQuadraticForm) -> Result<usize> {
        let r = reduce_form(f)?;
        self.index
            .get(&r)
            .copied()
            .ok_or_else(|| Error::ModuleInvariant(format!("reduced form {r} missing from the class list")))
    }
}

/// Class index of `a` in the list of reduced forms (0 is the principal class).
pub fn class_index(a: &QuadIdeal) -> Result<usize> {
    ClassLabeler::new(a.order().disc())?.label(a)
}

fn check_enumeration(d: i64, x: u64, cap: u64) -> Result<QuadOrder> {
    let order = QuadOrder::new(d)?;
    require_maximal(&order)?;
    if d > 0 {
        return Err(Error::Unsupported("ideal enumeration needs an imaginary field".into()));
    }
    if x > cap {
        return Err(Error::CapExceeded { requested: x, cap });
    }
    Ok(order)
}

/// Roots mod every prime power `q <= x` of `t^2 + D t + (D^2 - D)/4`, lifted
/// one power at a time.
fn root_tables(d: i64, x: u64) -> Result<(Vec<u32>, HashMap<u64, Vec<u64>>)> {
    let n = x as usize;
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    let dd = d as i128;
    let c0 = (dd * dd - dd) / 4;
    let eval = |t: u64, q: u64| (t as i128 * t as i128 + dd * t as i128 + c0).rem_euclid(q as i128) == 0;
    let mut roots = HashMap::new();
    for p in 2..=x {
        if spf[p as usize] as u64 != p {
            continue;
        }
        let mut level = norm_poly_roots_mod_p(d, p)?;
        let mut q = p;
        loop {
            roots.insert(q, level.clone());
            if level.is_empty() {
                break;
            }
            let Some(next) = q.checked_mul(p).filter(|&v| v <= x) else {
                break;
            };
            let mut lifted = Vec::new();
            for &r in &level {
                for j in 0..p {
                    let t = r + j * q;
                    if eval(t, next) {
                        lifted.push(t);
                    }
                }
            }
            lifted.sort_unstable();
            level = lifted;
            q = next;
        }
    }
    Ok((spf, roots))
}

/// Calls `visit(A, B)` for every primitive ideal `[A, B + w]` with `A <= x`.
fn for_each_primitive<F: FnMut(i64, i64) -> Result<()>>(d: i64, x: u64, mut visit: F) -> Result<()> {
    if x == 0 {
        return Ok(());
    }
    visit(1, 0)?;
    let (spf, roots) = root_tables(d, x)?;
    let mut current: Vec<u64> = Vec::new();
    for a in 2..=x {
        // roots mod a by CRT over its prime-power factors
        let mut rest = a;
        current.clear();
        current.push(0);
        let mut modulus = 1u64;
        while rest > 1 {
            let p = spf[rest as usize] as u64;
            let mut q = 1;
            while rest % p == 0 {
                rest /= p;
                q *= p;
            }
            // a missing entry means some lower power already had no roots
            let Some(rq) = roots.get(&q).filter(|r| !r.is_empty()) else {
                current.clear();
                break;
            };
            let (_, s, _) = ext_gcd(modulus as i128, q as i128);
            let inv = s.rem_euclid(q as i128);
            let mut next = Vec::with_capacity(current.len() * rq.len());
            for &r1 in &current {
                for &r2 in rq {
                    let k = ((r2 as i128 - r1 as i128).rem_euclid(q as i128) * inv).rem_euclid(q as i128);
                    next.push((r1 as i128 + modulus as i128 * k) as u64);
                }
            }
            current = next;
            modulus *= q;
        }
        for &b in &current {
            visit(a as i64, b as i64)?;
        }
    }
    Ok(())
}

/// Every integral ideal of norm at most `x`, labeled with its class index,
/// sorted by `(norm, a, b, c)`.
pub fn enumerate_ideals_up_to_norm(d: i64, x: u64) -> Result<Vec<(QuadIdeal, usize)>> {
    enumerate_ideals_with_cap(d, x, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_ideals_with_cap(d: i64, x: u64, cap: u64) -> Result<Vec<(QuadIdeal, usize)>> {
    let order = check_enumeration(d, x, cap)?;
    let labeler = ClassLabeler::new(d)?;
    let mut out = Vec::new();
    for_each_primitive(d, x, |a, b| {
        let prim = QuadIdeal { order, a, b, c: 1 };
        let class = labeler.label(&prim)?;
        let mut c = 1i64;
        while (c * c) as u64 * a as u64 <= x {
            out.push((QuadIdeal { order, a: a * c, b: b * c, c }, class));
            c += 1;
        }
        Ok(())
    })?;
    out.sort_by_key(|(i, _)| (i.norm(), i.a, i.b, i.c));
    Ok(out)
}

/// `j(x, K)` for every ideal class `K`, indexed as in [`class_number_neg`].
pub fn count_ideals_by_class(d: i64, x: u64, cap: u64) -> Result<Vec<u64>> {
    check_enumeration(d, x, cap)?;
    let labeler = ClassLabeler::new(d)?;
    let single = labeler.class_number() == 1;
    let mut counts = vec![0u64; labeler.class_number()];
    let dd = d as i128;
    let c0 = (dd * dd - dd) / 4;
    for_each_primitive(d, x, |a, b| {
        let class = if single {
            0
        } else {
            let n = b as i128 * b as i128 + dd * b as i128 + c0;
            labeler.label_form(&BinaryQuadraticForm::new(a, 2 * b + d, (n / a as i128) as i64))?
        };
        // c [A, B + w] for every c with c^2 A <= x
        counts[class] += crate::arith::isqrt((x / a as u64) as u128) as u64;
        Ok(())
    })?;
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve_primes;
    use crate::oracle::{ideals_by_brute_force, residue_unit_count_brute};
    use proptest::prelude::*;

    fn zi() -> QuadOrder {
        QuadOrder::new(-4).unwrap()
    }

    fn el(o: QuadOrder, x: i64, y: i64) -> QuadElement {
        QuadElement::integral(o, x, y)
    }

    #[test]
    fn hnf_validation() {
        let o = zi();
        assert!(QuadIdeal::new(o, 5, 4, 1).is_ok());
        assert!(QuadIdeal::new(o, 5, 1, 1).is_err());
        assert!(QuadIdeal::new(o, 4, 2, 2).is_ok());
        assert!(QuadIdeal::new(o, 4, 1, 2).is_err());
        assert!(QuadIdeal::new(o, 4, 4, 1).is_err());
        assert!(QuadIdeal::new(QuadOrder::new(-16).unwrap(), 1, 0, 1).is_err());
    }

    #[test]
    fn decomposition_examples() {
        let dec = decompose_prime(5, -4).unwrap();
        assert_eq!(dec.kind, SplittingType::Split);
        assert_eq!(dec.primes.len(), 2);
        assert!(dec.primes.iter().all(|(q, e)| q.norm() == 5 && *e == 1));
        // 2 + i = 4 + w lies in one of them
        assert!(dec.primes.iter().any(|(q, _)| q.contains(&el(zi(), 4, 1))));
        assert_eq!(decompose_prime(2, -4).unwrap().kind, SplittingType::Ramified);
        let dec = decompose_prime(3, -4).unwrap();
        assert_eq!(dec.kind, SplittingType::Inert);
        assert_eq!(dec.primes[0].0.norm(), 9);
        assert!(decompose_prime(4, -4).is_err());
    }

    #[test]
    fn products() {
        let o = zi();
        let dec = decompose_prime(5, -4).unwrap();
        let (p, q) = (dec.primes[0].0, dec.primes[1].0);
        assert_eq!(p.mul(&QuadIdeal::unit(o).unwrap()).unwrap(), p);
        assert_eq!(p.mul(&q).unwrap(), QuadIdeal::rational(o, 5).unwrap());
        assert_eq!(p.conjugate().unwrap(), q);
        let p2 = decompose_prime(2, -4).unwrap().primes[0].0;
        assert_eq!(p2, QuadIdeal::principal(&el(o, 3, 1)).unwrap()); // 1 + i
        assert_eq!(p2.pow(2).unwrap(), QuadIdeal::rational(o, 2).unwrap());
        assert_eq!(QuadIdeal::rational(o, 7).unwrap().norm(), 49);
        assert_eq!(QuadIdeal::unit(o).unwrap().norm(), 1);
    }

    #[test]
    fn decomposition_reconstructs_p() {
        for d in [-4i64, -3, -7, -8, -56, 8, 13] {
            let o = QuadOrder::new(d).unwrap();
            for p in sieve_primes(2, 1000).unwrap() {
                let dec = decompose_prime(p, d).unwrap();
                let sum: u32 = dec.primes.iter().map(|(q, e)| {
                    let f = if q.norm() == p * p { 2 } else { 1 };
                    e * f
                }).sum();
                assert_eq!(sum, 2);
                assert_eq!(dec.product().unwrap(), QuadIdeal::rational(o, p as i64).unwrap(), "p = {p}, D = {d}");
                let (e, f, r) = dec.kind.efr();
                assert_eq!(e * f * r, 2);
                assert_eq!(dec.kind == SplittingType::Ramified, (d.unsigned_abs() % p) == 0);
            }
        }
    }

    #[test]
    fn residue_counts() {
        let o = zi();
        assert_eq!(residue_unit_count(&QuadIdeal::unit(o).unwrap()).unwrap(), 1);
        assert_eq!(residue_unit_count(&QuadIdeal::rational(o, 2).unwrap()).unwrap(), 2);
        let p5 = decompose_prime(5, -4).unwrap().primes[0].0;
        assert_eq!(residue_unit_count(&p5).unwrap(), 4);
    }

    #[test]
    fn residue_counts_match_enumeration() {
        for d in [-4i64, -56] {
            for (ideal, _) in enumerate_ideals_up_to_norm(d, 2000).unwrap() {
                assert_eq!(
                    residue_unit_count(&ideal).unwrap(),
                    residue_unit_count_brute(&ideal).unwrap(),
                    "{ideal}"
                );
            }
        }
    }

    #[test]
    fn principality_examples() {
        let o = zi();
        let seven = QuadIdeal::rational(o, 7).unwrap();
        let g = is_principal_imaginary(&seven).unwrap().unwrap();
        assert_eq!(g.norm(), num_rational::BigRational::from_integer(49.into()));
        let p5 = decompose_prime(5, -4).unwrap().primes[0].0;
        let g = is_principal_imaginary(&p5).unwrap().unwrap();
        assert_eq!(QuadIdeal::principal(&g).unwrap(), p5);
        assert_eq!(g.norm(), num_rational::BigRational::from_integer(5.into()));
        for (q, _) in decompose_prime(3, -56).unwrap().primes {
            assert_eq!(is_principal_imaginary(&q).unwrap(), None);
        }
        assert!(is_principal_imaginary(&QuadIdeal::unit(QuadOrder::new(8).unwrap()).unwrap()).is_err());
    }

    #[test]
    fn enumeration_examples() {
        let one = enumerate_ideals_up_to_norm(-4, 1).unwrap();
        assert_eq!(one.len(), 1);
        assert!(one[0].0.is_unit());
        let five = enumerate_ideals_up_to_norm(-4, 5).unwrap();
        let norms: Vec<u64> = five.iter().map(|(i, _)| i.norm()).collect();
        assert_eq!(norms, vec![1, 2, 4, 5, 5]);
        let n = enumerate_ideals_up_to_norm(-4, 10_000).unwrap().len() as f64 / 10_000.0;
        assert!((0.76..=0.81).contains(&n), "{n}");
        assert!(matches!(
            enumerate_ideals_with_cap(-4, 100, 10),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for d in [-3i64, -4, -7, -8, -15, -20, -23, -56, -84] {
            let fast: Vec<QuadIdeal> = enumerate_ideals_up_to_norm(d, 300).unwrap().into_iter().map(|(i, _)| i).collect();
            assert_eq!(fast, ideals_by_brute_force(d, 300).unwrap(), "D = {d}");
        }
    }

    #[test]
    fn counts_match_enumeration() {
        for d in [-4i64, -56, -23] {
            let list = enumerate_ideals_up_to_norm(d, 3000).unwrap();
            let counts = count_ideals_by_class(d, 3000, DEFAULT_ENUMERATION_CAP).unwrap();
            for (k, &n) in counts.iter().enumerate() {
                assert_eq!(list.iter().filter(|(_, c)| *c == k).count() as u64, n);
            }
        }
    }

    #[test]
    fn class_labels_respect_principality() {
        for d in [-56i64, -23, -4] {
            for (ideal, class) in enumerate_ideals_up_to_norm(d, 500).unwrap() {
                assert_eq!(class == 0, is_principal_imaginary(&ideal).unwrap().is_some(), "{ideal}");
            }
        }
    }

    fn ideal_strategy(d: i64) -> impl Strategy<Value = QuadIdeal> {
        let all: Vec<QuadIdeal> = enumerate_ideals_up_to_norm(d, 400).unwrap().into_iter().map(|(i, _)| i).collect();
        prop::sample::select(all)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn norm_is_multiplicative((a, b) in prop::sample::select(vec![-4i64, -3, -56, -23]).prop_flat_map(|d| (ideal_strategy(d), ideal_strategy(d)))) {
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(ab.norm(), a.norm() * b.norm());
            prop_assert_eq!(ab, b.mul(&a).unwrap());
            prop_assert!(a.divides(&ab));
        }

        #[test]
        fn principal_norm_is_element_norm(x in -200i64..200, y in -200i64..200, d in prop::sample::select(vec![-4i64, -56, 8, 13])) {
            prop_assume!(x != 0 || y != 0);
            let o = QuadOrder::new(d).unwrap();
            let alpha = el(o, x, y);
            let id = QuadIdeal::principal(&alpha).unwrap();
            let n = alpha.norm();
            prop_assert_eq!(BigInt::from(id.norm()), n.numer().magnitude().clone().into());
            prop_assert!(id.contains(&alpha));
        }
    }
}
