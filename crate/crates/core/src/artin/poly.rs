//! Integer polynomials and dense polynomial arithmetic over `F_p`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;
use std::str::FromStr;

use crate::arith::{inv_mod, mul_mod};
use crate::error::{Error, Result};

/// A polynomial with integer coefficients, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Result<Self> {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("zero polynomial".into()));
        }
        Ok(IntPoly { coeffs })
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn lead(&self) -> i64 {
        *self.coeffs.last().unwrap()
    }

    pub fn eval_mod(&self, x: u64, p: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mul_mod(acc, x, p) + c.rem_euclid(p as i64) as u64) % p)
    }

    pub fn derivative(&self) -> Vec<i64> {
        self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| c * i as i64).collect()
    }

    /// Reduction mod `p` (not necessarily monic).
    pub fn reduce(&self, p: u64) -> ModPoly {
        ModPoly::from_coeffs(
            self.coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect(),
            p,
        )
    }

    /// `disc(f) = (-1)^(n(n-1)/2) * Res(f, f') / lead(f)`, exactly.
    pub fn discriminant(&self) -> BigInt {
        let n = self.degree();
        if n == 0 {
            return BigInt::one();
        }
        let res = resultant(&self.coeffs, &self.derivative());
        let sign = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
        res * sign / BigInt::from(self.lead())
    }
}

/// Resultant by the determinant of the Sylvester matrix (fraction-free Bareiss).
fn resultant(f: &[i64], g: &[i64]) -> BigInt {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (j, &c) in f.iter().rev().enumerate() {
            mat[i][i + j] = c.into();
        }
    }
    for i in 0..m {
        for (j, &c) in g.iter().rev().enumerate() {
            mat[n + i][i + j] = c.into();
        }
    }
    bareiss_det(mat)
}

pub(crate) fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

impl FromStr for IntPoly {
    type Err = Error;

    /// Parses sums of terms `c*x^k`, e.g. `x^4+2x^2-7` or `-x^3 + 5*x - 1`.
    fn from_str(s: &str) -> Result<Self> {
        let err = |m: &str| Error::Parse(format!("polynomial `{s}`: {m}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty"));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 && !compact[..i].ends_with('^') {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);
        let mut coeffs: Vec<i64> = Vec::new();
        for term in terms {
            let (neg, body) = match term.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, term.strip_prefix('+').unwrap_or(term)),
            };
            if body.is_empty() {
                return Err(err("dangling sign"));
            }
            let (coef, exp) = match body.find('x') {
                None => (body.parse::<i64>().map_err(|_| err("bad constant"))?, 0usize),
                Some(pos) => {
                    let c = body[..pos].trim_end_matches('*');
                    let c = if c.is_empty() { 1 } else { c.parse::<i64>().map_err(|_| err("bad coefficient"))? };
                    let rest = &body[pos + 1..];
                    let e = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .ok_or_else(|| err("expected `^`"))?
                            .parse::<usize>()
                            .map_err(|_| err("bad exponent"))?
                    };
                    (c, e)
                }
            };
            if exp > 64 {
                return Err(err("degree too large"));
            }
            if coeffs.len() <= exp {
                coeffs.resize(exp + 1, 0);
            }
            coeffs[exp] += if neg { -coef } else { coef };
        }
        IntPoly::new(coeffs)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let a = c.unsigned_abs();
            let mag = match (a, i) {
                (_, 0) => a.to_string(),
                (1, _) => String::new(),
                _ => a.to_string(),
            };
            let var = match i {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{i}"),
            };
            write!(f, "{sign}{mag}{var}")?;
            first = false;
        }
        Ok(())
    }
}

/// Dense polynomial over `F_p`, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModPoly {
    pub p: u64,
    pub c: Vec<u64>,
}

impl ModPoly {
    pub fn from_coeffs(mut c: Vec<u64>, p: u64) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        ModPoly { p, c }
    }

    pub fn x(p: u64) -> Self {
        Self::from_coeffs(vec![0, 1], p)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, with the zero polynomial at `-1`.
    pub fn degree(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn monic(&self) -> Self {
        let Some(&lead) = self.c.last() else {
            return self.clone();
        };
        let inv = inv_mod(lead as i128, self.p).expect("p prime, lead nonzero");
        Self::from_coeffs(self.c.iter().map(|&a| mul_mod(a, inv, self.p)).collect(), self.p)
    }

    pub fn sub(&self, other: &ModPoly) -> Self {
        let n = self.c.len().max(other.c.len());
        let p = self.p;
        let c = (0..n)
            .map(|i| {
                let a = self.c.get(i).copied().unwrap_or(0);
                let b = other.c.get(i).copied().unwrap_or(0);
                (a + p - b) % p
            })
            .collect();
        Self::from_coeffs(c, p)
    }

    pub fn mul(&self, other: &ModPoly) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::from_coeffs(Vec::new(), self.p);
        }
        let p = self.p;
        let mut out = vec![0u64; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        Self::from_coeffs(out, p)
    }

    /// `(quotient, remainder)` of division by a nonzero polynomial.
    pub fn div_rem(&self, d: &ModPoly) -> (ModPoly, ModPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        let mut r = self.c.clone();
        let dl = d.c.len();
        if r.len() < dl {
            return (Self::from_coeffs(Vec::new(), p), self.clone());
        }
        let inv = inv_mod(*d.c.last().unwrap() as i128, p).expect("p prime");
        let mut q = vec![0u64; r.len() - dl + 1];
        for k in (0..q.len()).rev() {
            let coef = mul_mod(r[k + dl - 1], inv, p);
            q[k] = coef;
            if coef == 0 {
                continue;
            }
            for (j, &b) in d.c.iter().enumerate() {
                let t = mul_mod(coef, b, p);
                r[k + j] = (r[k + j] + p - t) % p;
            }
        }
        (Self::from_coeffs(q, p), Self::from_coeffs(r, p))
    }

    pub fn rem(&self, d: &ModPoly) -> ModPoly {
        self.div_rem(d).1
    }

    pub fn gcd(&self, other: &ModPoly) -> ModPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod m` by repeated squaring.
    pub fn pow_mod(&self, mut e: u64, m: &ModPoly) -> ModPoly {
        let mut base = self.rem(m);
        let mut acc = Self::from_coeffs(vec![1], self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    pub fn derivative(&self) -> ModPoly {
        let p = self.p;
        Self::from_coeffs(
            self.c.iter().enumerate().skip(1).map(|(i, &a)| mul_mod(a, i as u64 % p, p)).collect(),
            p,
        )
    }

    /// `true` when `gcd(f, x^p - x)` is nontrivial, i.e. `f` has a root in `F_p`.
    pub fn has_root(&self) -> bool {
        if self.degree() <= 0 {
            return false;
        }
        let f = self.monic();
        let xp = Self::x(self.p).pow_mod(self.p, &f);
        f.gcd(&xp.sub(&Self::x(self.p))).degree() > 0
    }

    /// Distinct-degree factorization of a monic squarefree polynomial: pairs
    /// `(i, d)` where the product of all degree-`i` factors has degree `d`.
    pub fn distinct_degree(&self) -> Vec<(usize, usize)> {
        let p = self.p;
        let x = Self::x(p);
        let mut f = self.monic();
        let mut h = x.clone();
        let mut out = Vec::new();
        let mut i = 1usize;
        while f.degree() >= 2 * i as isize {
            h = h.pow_mod(p, &f);
            let g = f.gcd(&h.sub(&x));
            if g.degree() > 0 {
                out.push((i, g.degree() as usize));
                f = f.div_rem(&g).0;
                h = h.rem(&f);
            }
            i += 1;
        }
        if f.degree() > 0 {
            out.push((f.degree() as usize, f.degree() as usize));
        }
        out
    }
}

/// The monic polynomial `f` mod `p`, or an error when `p` divides the leading
/// coefficient or `f` is not squarefree mod `p`.
pub fn squarefree_reduction(f: &IntPoly, p: u64) -> Result<ModPoly> {
    if f.lead().rem_euclid(p as i64) == 0 {
        return Err(Error::Ramified { p, detail: format!("{p} divides the leading coefficient of {f}") });
    }
    let fp = f.reduce(p);
    if fp.gcd(&fp.derivative()).degree() > 0 {
        return Err(Error::Ramified { p, detail: format!("{p} divides disc({f})") });
    }
    Ok(fp.monic())
}
