//! Positive definite binary quadratic forms `ax^2 + bxy + cy^2`.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::arith::{gcd, is_square, isqrt, kronecker_symbol, require_prime, sqrt_mod_p};
use crate::artin::poly::IntPoly;
use crate::error::{Error, Result};
use crate::quadfield::make_discriminant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BinaryQuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

/// An element of `SL_2(Z)`, row-major.
pub type Sl2 = [[i128; 2]; 2];

const IDENTITY: Sl2 = [[1, 0], [0, 1]];

fn mat_mul(m: &Sl2, n: &Sl2) -> Sl2 {
    [
        [m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]],
        [m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]],
    ]
}

impl BinaryQuadraticForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        BinaryQuadraticForm { a, b, c }
    }

    pub fn disc(&self) -> i128 {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        b * b - 4 * a * c
    }

    pub fn eval(&self, x: i128, y: i128) -> i128 {
        self.a as i128 * x * x + self.b as i128 * x * y + self.c as i128 * y * y
    }

    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a as i128, self.b as i128) as i128, self.c as i128) == 1
    }

    pub fn is_positive_definite(&self) -> bool {
        self.disc() < 0 && self.a > 0
    }

    /// `|b| <= a <= c`, with `b >= 0` when `|b| = a` or `a = c`.
    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    /// `F(M(x, y))` for `M` acting on column vectors.
    pub fn transform(&self, m: &Sl2) -> Result<BinaryQuadraticForm> {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let [[p, q], [r, s]] = *m;
        let na = a * p * p + b * p * r + c * r * r;
        let nb = 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s;
        let nc = a * q * q + b * q * s + c * s * s;
        let fit = |v: i128| i64::try_from(v).map_err(|_| Error::InvalidArgument("form coefficient overflow".into()));
        Ok(BinaryQuadraticForm { a: fit(na)?, b: fit(nb)?, c: fit(nc)? })
    }
}

impl fmt::Display for BinaryQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// The principal form of discriminant `D`.
pub fn principal_form(d: i64) -> Result<BinaryQuadraticForm> {
    make_discriminant(d)?;
    Ok(if d.rem_euclid(4) == 0 {
        BinaryQuadraticForm::new(1, 0, -d / 4)
    } else {
        BinaryQuadraticForm::new(1, 1, (1 - d) / 4)
    })
}

/// Gauss reduction, also returning `M` in `SL_2(Z)` with `F o M = reduced`.
pub fn reduce_form_tracked(f: &BinaryQuadraticForm) -> Result<(BinaryQuadraticForm, Sl2)> {
    if !f.is_positive_definite() {
        return Err(Error::InvalidArgument(format!("{f} is not positive definite")));
    }
    let (mut a, mut b, mut c) = (f.a as i128, f.b as i128, f.c as i128);
    let mut m = IDENTITY;
    loop {
        if b > a || b <= -a {
            let k = (a - b).div_euclid(2 * a);
            c += (a * k + b) * k;
            b += 2 * a * k;
            m = mat_mul(&m, &[[1, k], [0, 1]]);
        }
        if a > c {
            (a, b, c) = (c, -b, a);
            m = mat_mul(&m, &[[0, -1], [1, 0]]);
            continue;
        }
        if a == c && b < 0 {
            b = -b;
            m = mat_mul(&m, &[[0, -1], [1, 0]]);
        }
        break;
    }
    let r = BinaryQuadraticForm::new(a as i64, b as i64, c as i64);
    debug_assert!(r.is_reduced());
    Ok((r, m))
}

pub fn reduce_form(f: &BinaryQuadraticForm) -> Result<BinaryQuadraticForm> {
    reduce_form_tracked(f).map(|(r, _)| r)
}

/// All reduced primitive forms of discriminant `D < 0`, principal form first.
pub fn class_number_neg(d: i64) -> Result<(u64, Vec<BinaryQuadraticForm>)> {
    make_discriminant(d)?;
    if d > 0 {
        return Err(Error::InvalidArgument(format!("D = {d} is not negative")));
    }
    let n = -(d as i128);
    let mut forms = Vec::new();
    let amax = isqrt((n / 3) as u128) as i128;
    for a in 1..=amax {
        for b in -a + 1..=a {
            let num = b * b + n;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            let f = BinaryQuadraticForm::new(a as i64, b as i64, c as i64);
            if f.is_reduced() && f.is_primitive() {
                forms.push(f);
            }
        }
    }
    forms.sort_by_key(|f| (f.a, f.b.abs(), -f.b));
    Ok((forms.len() as u64, forms))
}

/// `Q(x, y) = value` for the principal form of some discriminant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationWitness {
    pub x: i64,
    pub y: i64,
    pub value: i64,
}

fn check_represent_args(p: u64, d: i64) -> Result<()> {
    require_prime(p)?;
    make_discriminant(d)?;
    if d > 0 {
        return Err(Error::InvalidArgument(format!("D = {d} is not negative")));
    }
    if d.unsigned_abs() % p == 0 {
        return Err(Error::Ramified { p, detail: format!("{p} divides D = {d}") });
    }
    Ok(())
}

/// Search over `|y| <= sqrt(4p/|D|)`, using `4p = (2x + by)^2 + |D|y^2`.
pub fn represent_prime_brute(p: u64, d: i64) -> Result<Option<RepresentationWitness>> {
    check_represent_args(p, d)?;
    let q = principal_form(d)?;
    let n = d.unsigned_abs() as i128;
    let four_p = 4 * p as i128;
    let mut y = 0i128;
    while n * y * y <= four_p {
        let t2 = four_p - n * y * y;
        if is_square(t2) {
            let t = isqrt(t2 as u128) as i128;
            // 2x + b*y = t
            let twice = t - q.b as i128 * y;
            if twice % 2 == 0 {
                let x = twice / 2;
                debug_assert_eq!(q.eval(x, y), p as i128);
                return Ok(Some(RepresentationWitness { x: x as i64, y: y as i64, value: p as i64 }));
            }
        }
        y += 1;
    }
    Ok(None)
}

/// Cornacchia's algorithm for `x^2 + n y^2 = p` with `p` odd.
fn cornacchia(n: u64, p: u64) -> Option<(u64, u64)> {
    let r0 = sqrt_mod_p(-(n as i64), p).ok()??;
    let (mut a, mut b) = (p, r0.max(p - r0));
    while b * b > p {
        (a, b) = (b, a % b);
    }
    let rest = p - b * b;
    if rest % n != 0 {
        return None;
    }
    let s2 = rest / n;
    if !is_square(s2 as i128) {
        return None;
    }
    Some((b, isqrt(s2 as u128) as u64))
}

/// A representation `p = Q_D(x, y)` by the principal form, if one exists.
pub fn represent_prime(p: u64, d: i64) -> Result<Option<RepresentationWitness>> {
    check_represent_args(p, d)?;
    if d.rem_euclid(4) != 0 || p == 2 {
        return represent_prime_brute(p, d);
    }
    let n = (-d / 4) as u64;
    if kronecker_symbol(d, p as i64)? != 1 {
        return Ok(None);
    }
    Ok(cornacchia(n, p).map(|(x, y)| RepresentationWitness { x: x as i64, y: y as i64, value: p as i64 }))
}

/// Both sides of the representation criterion for one prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub p: u64,
    pub represented: bool,
    pub criterion: bool,
    pub agree: bool,
    pub witness: Option<RepresentationWitness>,
}

/// Compares "`p` is represented by `Q_D`" against "`(D/p) = 1` and `g` has a
/// root mod `p`". Without `g` the class number must be 1.
pub fn criterion_check(p: u64, d: i64, g: Option<&IntPoly>) -> Result<CriterionOutcome> {
    check_represent_args(p, d)?;
    if p == 2 {
        return Err(Error::Ramified { p, detail: "p must not divide 2D".into() });
    }
    let kron = kronecker_symbol(d, p as i64)? == 1;
    let criterion = match g {
        Some(g) => {
            let disc = g.discriminant();
            if (disc % num_bigint::BigInt::from(p)) == num_bigint::BigInt::from(0) {
                return Err(Error::Ramified { p, detail: format!("{p} divides disc({g})") });
            }
            kron && g.reduce(p).has_root()
        }
        None => {
            let (h, _) = class_number_neg(d)?;
            if h != 1 {
                return Err(Error::Unsupported(format!(
                    "h({d}) = {h} > 1: the criterion needs a class polynomial"
                )));
            }
            kron
        }
    };
    let witness = represent_prime(p, d)?;
    let represented = witness.is_some();
    Ok(CriterionOutcome { p, represented, criterion, agree: represented == criterion, witness })
}

/// Class polynomials shipped with the crate: `g_D` for `D = -56`.
pub fn known_class_polynomial(d: i64) -> Option<IntPoly> {
    match d {
        -56 => Some(IntPoly::new(vec![-7, 0, 2, 0, 1]).expect("nonzero")),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve_primes;
    use proptest::prelude::*;

    fn f(a: i64, b: i64, c: i64) -> BinaryQuadraticForm {
        BinaryQuadraticForm::new(a, b, c)
    }

    #[test]
    fn principal_forms() {
        assert_eq!(principal_form(-56).unwrap(), f(1, 0, 14));
        assert_eq!(principal_form(-3).unwrap(), f(1, 1, 1));
        assert_eq!(principal_form(-4).unwrap(), f(1, 0, 1));
        assert_eq!(principal_form(5).unwrap(), f(1, 1, -1));
        assert!(principal_form(-5).is_err());
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(reduce_form(&f(1, 0, 14)).unwrap(), f(1, 0, 14));
        assert_eq!(reduce_form(&f(14, 0, 1)).unwrap(), f(1, 0, 14));
        let r = reduce_form(&f(5, 4, 3)).unwrap();
        assert_eq!(r, f(3, 2, 4));
        assert_eq!(r.disc(), -44);
        assert!(reduce_form(&f(1, 3, 1)).is_err());
        assert!(reduce_form(&f(-1, 0, -1)).is_err());
    }

    #[test]
    fn class_numbers() {
        let (h, forms) = class_number_neg(-4).unwrap();
        assert_eq!((h, forms), (1, vec![f(1, 0, 1)]));
        let (h, forms) = class_number_neg(-56).unwrap();
        assert_eq!(h, 4);
        assert_eq!(forms, vec![f(1, 0, 14), f(2, 0, 7), f(3, 2, 5), f(3, -2, 5)]);
        assert_eq!(class_number_neg(-3).unwrap().0, 1);
        for d in [-3, -4, -7, -8, -11, -19, -43, -67, -163] {
            assert_eq!(class_number_neg(d).unwrap().0, 1, "D = {d}");
        }
        assert_eq!(class_number_neg(-23).unwrap().0, 3);
        assert_eq!(class_number_neg(-12).unwrap().0, 1);
    }

    /// Counts SL_2(Z)-classes by reducing every form `(a, b, c)` of
    /// discriminant `D` with small coefficients.
    #[test]
    fn class_numbers_by_reduction() {
        for d in (-400i64..-2).filter(|d| make_discriminant(*d).is_ok()) {
            let mut seen = std::collections::BTreeSet::new();
            for a in 1..40i64 {
                for b in -40..=40i64 {
                    let num = b * b - d;
                    if num % (4 * a) == 0 {
                        let g = f(a, b, num / (4 * a));
                        if g.is_primitive() {
                            seen.insert(reduce_form(&g).unwrap());
                        }
                    }
                }
            }
            let (h, forms) = class_number_neg(d).unwrap();
            assert_eq!(seen.into_iter().collect::<Vec<_>>().len() as u64, h, "D = {d}");
            assert!(forms.iter().all(|g| g.disc() == d as i128));
        }
    }

    #[test]
    fn representation_examples() {
        let w = represent_prime(5, -4).unwrap().unwrap();
        assert_eq!(w.x * w.x + w.y * w.y, 5);
        assert_eq!(represent_prime(23, -56).unwrap(), Some(RepresentationWitness { x: 3, y: 1, value: 23 }));
        assert_eq!(represent_prime(3, -56).unwrap(), None);
        assert!(represent_prime(7, -56).is_err());
        assert!(represent_prime(9, -56).is_err());
        let w = represent_prime(7, -3).unwrap().unwrap();
        assert_eq!(principal_form(-3).unwrap().eval(w.x as i128, w.y as i128), 7);
    }

    #[test]
    fn cornacchia_matches_brute_force() {
        for d in [-4i64, -8, -20, -56, -84, -3, -7, -23] {
            for p in sieve_primes(2, 10_000).unwrap() {
                if d.unsigned_abs() % p == 0 {
                    continue;
                }
                let fast = represent_prime(p, d).unwrap();
                let slow = represent_prime_brute(p, d).unwrap();
                assert_eq!(fast.is_some(), slow.is_some(), "p = {p}, D = {d}");
                if let Some(w) = fast {
                    assert_eq!(principal_form(d).unwrap().eval(w.x as i128, w.y as i128), p as i128);
                }
            }
        }
    }

    #[test]
    fn criterion_examples() {
        let g = known_class_polynomial(-56).unwrap();
        let r = criterion_check(23, -56, Some(&g)).unwrap();
        assert!(r.represented && r.criterion && r.agree);
        let r = criterion_check(5, -4, None).unwrap();
        assert!(r.represented && r.criterion && r.agree);
        let r = criterion_check(11, -56, Some(&g)).unwrap();
        assert!(!r.represented && !r.criterion && r.agree);
        assert!(matches!(criterion_check(3, -56, None), Err(Error::Unsupported(_))));
        assert!(criterion_check(7, -56, Some(&g)).is_err());
    }

    #[test]
    fn class_number_one_criterion() {
        for d in [-4i64, -8, -3, -7] {
            for p in sieve_primes(3, 100_000).unwrap() {
                if d.unsigned_abs() % p == 0 {
                    continue;
                }
                let r = criterion_check(p, d, None).unwrap();
                assert!(r.agree, "p = {p}, D = {d}");
            }
        }
    }

    #[test]
    fn x2_plus_14y2_has_many_primes() {
        let g = known_class_polynomial(-56).unwrap();
        let n = sieve_primes(3, 100_000)
            .unwrap()
            .into_iter()
            .filter(|&p| p != 7)
            .filter(|&p| criterion_check(p, -56, Some(&g)).unwrap().represented)
            .count();
        assert!(n >= 1000, "{n}");
    }

    fn definite_form() -> impl Strategy<Value = BinaryQuadraticForm> {
        (1i64..10_000, -10_000i64..10_000, 1i64..10_000)
            .prop_filter("definite", |&(a, b, c)| (b as i128) * (b as i128) < 4 * a as i128 * c as i128)
            .prop_map(|(a, b, c)| f(a, b, c))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn reduction_is_idempotent_and_tracked(g in definite_form()) {
            let (r, m) = reduce_form_tracked(&g).unwrap();
            prop_assert!(r.is_reduced());
            prop_assert_eq!(r.disc(), g.disc());
            prop_assert_eq!(reduce_form(&r).unwrap(), r);
            prop_assert_eq!(m[0][0] * m[1][1] - m[0][1] * m[1][0], 1);
            prop_assert_eq!(g.transform(&m).unwrap(), r);
        }
    }
}
