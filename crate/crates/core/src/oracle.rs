//! Slow, independent reference computations used to cross-check the main
//! algorithms. Everything here works by direct enumeration.

use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::{HashSet, VecDeque};

use crate::arith::{gcd, isqrt, require_prime};
use crate::artin::{IntPoly, SplittingPattern};
use crate::error::{Error, Result};
use crate::ideals::QuadIdeal;
use crate::quadfield::{fundamental_unit, QuadElement, QuadOrder};
use crate::rayclass::{count_mod_star_classes, torsion_units, Modulus};

fn trim(mut v: Vec<i64>) -> Vec<i64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn eval(f: &[i64], x: i64, p: i64) -> i64 {
    f.iter().rev().fold(0, |acc, &c| (acc * x + c).rem_euclid(p))
}

/// Synthetic division by `x - r` mod `p`.
fn divide_linear(f: &[i64], r: i64, p: i64) -> Vec<i64> {
    let n = f.len() - 1;
    let mut q = vec![0i64; n];
    let mut carry = 0;
    for i in (0..n).rev() {
        carry = (f[i + 1] + carry * r).rem_euclid(p);
        // coefficient of x^i in the quotient
        q[i] = carry;
    }
    q
}

/// Long division mod `p` by a monic divisor; `None` if it leaves a remainder.
fn divide_exact(f: &[i64], d: &[i64], p: i64) -> Option<Vec<i64>> {
    let mut r = f.to_vec();
    let dl = d.len();
    if r.len() < dl {
        return None;
    }
    let mut q = vec![0i64; r.len() - dl + 1];
    for k in (0..q.len()).rev() {
        let c = r[k + dl - 1].rem_euclid(p);
        q[k] = c;
        for (j, &b) in d.iter().enumerate() {
            r[k + j] = (r[k + j] - c * b).rem_euclid(p);
        }
    }
    r.iter().all(|&c| c == 0).then_some(q)
}

/// Factor degrees of `f` mod `p` for `deg f <= 4`, by stripping roots and
/// trial division by monic quadratics. Fails like the main routine when `p`
/// divides the leading coefficient or `f` has a repeated factor mod `p`.
pub fn splitting_pattern_naive(f: &IntPoly, p: u64) -> Result<SplittingPattern> {
    require_prime(p)?;
    if f.degree() > 4 {
        return Err(Error::Unsupported("naive oracle handles degree <= 4".into()));
    }
    let pi = p as i64;
    let lead = f.lead().rem_euclid(pi);
    if lead == 0 {
        return Err(Error::Ramified { p, detail: "leading coefficient".into() });
    }
    let inv = (1..pi).find(|&i| (i * lead) % pi == 1).unwrap();
    let mut g: Vec<i64> = trim(f.coeffs().iter().map(|&c| (c * inv).rem_euclid(pi)).collect());
    let mut degrees = Vec::new();
    let mut t = 0;
    while t < pi && g.len() > 1 {
        if eval(&g, t, pi) == 0 {
            g = divide_linear(&g, t, pi);
            degrees.push(1);
            if g.len() > 1 && eval(&g, t, pi) == 0 {
                return Err(Error::Ramified { p, detail: "repeated root".into() });
            }
        }
        t += 1;
    }
    match g.len() - 1 {
        0 => {}
        2 | 3 => degrees.push(g.len() - 1),
        4 => {
            let mut quad = None;
            'search: for u in 0..pi {
                for v in 0..pi {
                    if let Some(q) = divide_exact(&g, &[v, u, 1], pi) {
                        quad = Some((vec![v, u, 1], q));
                        break 'search;
                    }
                }
            }
            match quad {
                Some((d, q)) if d == q => {
                    return Err(Error::Ramified { p, detail: "repeated quadratic factor".into() });
                }
                Some(_) => degrees.extend([2, 2]),
                None => degrees.push(4),
            }
        }
        _ => unreachable!(),
    }
    degrees.sort_unstable();
    Ok(SplittingPattern { degrees })
}

/// All ideals of norm at most `x`, by testing every HNF triple for closure
/// under multiplication by `w`.
pub fn ideals_by_brute_force(d: i64, x: u64) -> Result<Vec<QuadIdeal>> {
    let order = QuadOrder::new(d)?;
    let mut out = Vec::new();
    let x = x as i64;
    for c in 1..=x {
        if c * c > x {
            break;
        }
        let mut a = c;
        while a * c <= x {
            let mut b = 0;
            while b < a {
                if let Ok(id) = QuadIdeal::new(order, a, b, c) {
                    out.push(id);
                }
                b += c;
            }
            a += c;
        }
    }
    out.sort_by_key(|i| (i.norm(), i.a(), i.b(), i.c()));
    Ok(out)
}

fn is_invertible_mod(ideal: &QuadIdeal, x: i64, y: i64) -> Result<bool> {
    let order = ideal.order();
    let mut gens = ideal.basis().to_vec();
    gens.push(QuadElement::integral(order, x, y));
    Ok(QuadIdeal::from_generators(order, &gens)?.is_unit())
}

/// `|(O/a)*|` by testing every residue `x + y w` (`0 <= x < a`, `0 <= y < c`).
pub fn residue_unit_count_brute(ideal: &QuadIdeal) -> Result<u64> {
    let mut n = 0;
    for x in 0..ideal.a() {
        for y in 0..ideal.c() {
            if is_invertible_mod(ideal, x, y)? {
                n += 1;
            }
        }
    }
    Ok(n)
}

/// Ray class number over `Q` by grouping the integers `1..=4m` coprime to
/// `m` into classes of the ideals they generate: `(a) ~ (b)` when `a/b` or
/// `-a/b` is `1 mod* m`.
pub fn ray_class_count_q_brute(m: &Modulus) -> Result<usize> {
    let n = m.norm();
    let reps: Vec<u64> = (1..=4 * n.max(1)).filter(|&a| gcd(a as i128, n as i128) == 1).collect();
    let one = BigRational::from_integer(BigInt::from(1));
    let mut classes: Vec<u64> = Vec::new();
    for &a in &reps {
        let mut found = false;
        for &r in &classes {
            let q = BigRational::new(a.into(), r.into());
            if crate::rayclass::congruent_mod_star(&q, &one, m)?
                || crate::rayclass::congruent_mod_star(&-q, &one, m)?
            {
                found = true;
                break;
            }
        }
        if !found {
            classes.push(a);
        }
    }
    Ok(classes.len())
}

/// Classes of `K*` modulo `K*_m` among the given elements.
pub fn mod_star_class_count(reps: &[BigRational], m: &Modulus) -> Result<usize> {
    count_mod_star_classes(reps, m)
}

/// Ray class number of a quadratic field of class number one: orbits of
/// the unit group acting on (invertible residues mod `m_0`) x (signs at the
/// real places of `m`), found by breadth-first search.
pub fn ray_class_count_quadratic_brute(m: &Modulus) -> Result<u64> {
    let Modulus::Quadratic { finite, real_places } = m else {
        return Err(Error::Unsupported("expected a quadratic modulus".into()));
    };
    let order = finite.order();
    let mut gens: Vec<(QuadElement, Vec<i8>)> = Vec::new();
    if order.is_real() {
        let eps = fundamental_unit(order.disc())?;
        let signs = real_places.iter().map(|&p| eps.real_sign(p as usize)).collect();
        gens.push((eps, signs));
        gens.push((QuadElement::integral(order, -1, 0), vec![-1; real_places.len()]));
    } else {
        for (x, y) in torsion_units(order) {
            gens.push((QuadElement::integral(order, x, y), Vec::new()));
        }
    }
    let gens: Vec<((i128, i128), Vec<i8>)> = gens
        .into_iter()
        .map(|(g, s)| {
            let a = BigInt::from(finite.a());
            let c = BigInt::from(finite.c());
            let y = ((g.y() % &c) + &c) % &c;
            let k = (g.y() - &y) / &c;
            let x = (((g.x() - k * BigInt::from(finite.b())) % &a) + &a) % &a;
            ((i128::try_from(x).unwrap(), i128::try_from(y).unwrap()), s)
        })
        .collect();
    let mul = |u: (i128, i128), v: (i128, i128)| {
        let d = order.disc() as i128;
        let n = order.norm_w() as i128;
        let yy = u.1 * v.1;
        finite.reduce_coords(u.0 * v.0 - yy * n, u.0 * v.1 + v.0 * u.1 + yy * d)
    };
    let mut residues = Vec::new();
    for x in 0..finite.a() {
        for y in 0..finite.c() {
            if is_invertible_mod(finite, x, y)? {
                residues.push((x as i128, y as i128));
            }
        }
    }
    let k = real_places.len();
    let mut sign_vectors: Vec<Vec<i8>> = vec![Vec::new()];
    for _ in 0..k {
        sign_vectors = sign_vectors
            .into_iter()
            .flat_map(|v| [1i8, -1].into_iter().map(move |s| [v.clone(), vec![s]].concat()))
            .collect();
    }
    let mut seen: HashSet<((i128, i128), Vec<i8>)> = HashSet::new();
    let mut orbits = 0;
    for r in &residues {
        for s in &sign_vectors {
            let start = (*r, s.clone());
            if seen.contains(&start) {
                continue;
            }
            orbits += 1;
            let mut queue = VecDeque::from([start.clone()]);
            seen.insert(start);
            while let Some((res, sg)) = queue.pop_front() {
                for (gr, gs) in &gens {
                    let next = (mul(res, *gr), sg.iter().zip(gs).map(|(a, b)| a * b).collect::<Vec<i8>>());
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    Ok(orbits)
}

/// `#{(x, y) != 0 : x^2 + y^2 <= n} / 4`, the number of ideals of `Z[i]`
/// of norm at most `n`.
pub fn gaussian_ideal_count(n: u64) -> u64 {
    let mut count = 0u64;
    let r = isqrt(n as u128) as u64;
    for x in 0..=r {
        let rest = n - x * x;
        count += 2 * isqrt(rest as u128) as u64 + 1;
    }
    // points with x > 0 counted once, mirror for x < 0
    let total = 2 * count - (2 * r + 1);
    (total - 1) / 4
}

fn strip_square_factors(mut a: i64, p: i64) -> i64 {
    while a % (p * p) == 0 {
        a /= p * p;
    }
    a
}

/// The Hilbert symbol `(a, b)_p` decided by searching for `(x, y)` with
/// `a x^2 + b y^2` a nonzero square in `Q_p`. Residues modulo `p^2` (or
/// `2^5`) are enumerated, and a value counts only when its square class is
/// already fixed by the digits known at that level: for odd `p` a unit is a
/// square iff it is one mod `p`, for `p = 2` iff it is `1 mod 8`.
pub fn hilbert_by_hensel_search(a: i64, b: i64, p: u64) -> Result<i8> {
    require_prime(p)?;
    if a == 0 || b == 0 {
        return Err(Error::InvalidArgument("nonzero arguments required".into()));
    }
    let pi = p as i64;
    let a = strip_square_factors(a, pi) as i128;
    let b = strip_square_factors(b, pi) as i128;
    let pp = p as i128;
    let v_of = |mut t: i128| {
        let mut v = 0u32;
        while t % pp == 0 {
            t /= pp;
            v += 1;
        }
        (v, t)
    };
    let vmin = v_of(a).0.min(v_of(b).0);
    let k: u32 = if p == 2 { 5 } else { 2 };
    let known = if p == 2 { k + 1 + vmin } else { k + vmin };
    let modulus = pp.pow(k);
    let is_unit_square = |u: i128| {
        if p == 2 {
            u.rem_euclid(8) == 1
        } else {
            let r = u.rem_euclid(pp) as u64;
            crate::arith::pow_mod(r, (p - 1) / 2, p) == 1
        }
    };
    for x in 0..modulus {
        for y in 0..modulus {
            if x % pp == 0 && y % pp == 0 {
                continue;
            }
            let t = a * x * x + b * y * y;
            if t.rem_euclid(pp.pow(known)) == 0 {
                continue;
            }
            let (v, u) = v_of(t);
            let fixed = if p == 2 { v + 3 <= known } else { v < known };
            if fixed && v % 2 == 0 && is_unit_square(u) {
                return Ok(1);
            }
        }
    }
    Ok(-1)
}

/// `(|H^0|, |H^1|)` of a finite module by listing its elements. Elements of
/// `Z^k / L` are reduced into the box cut out by a triangular basis of `L`.
pub fn herbrand_by_enumeration(a: &crate::cohomology::CyclicModule) -> Result<(u64, u64)> {
    use crate::cohomology::lattice::row_basis;
    use num_traits::{ToPrimitive, Zero};

    let k = a.rank();
    let rel = a.relations();
    let r = rel.first().map_or(0, |row| row.len());
    let cols: Vec<Vec<BigInt>> = (0..r).map(|j| rel.iter().map(|row| row[j].clone()).collect()).collect();
    let basis = row_basis(&cols, k);
    if basis.len() < k {
        return Err(Error::Unsupported("module is infinite".into()));
    }
    let diag: Vec<i64> = (0..k).map(|i| basis[i][i].to_i64().unwrap()).collect();
    let size: i64 = diag.iter().product();
    if size > 1_000_000 {
        return Err(Error::CapExceeded { requested: size as u64, cap: 1_000_000 });
    }
    let reduce = |mut v: Vec<BigInt>| -> Vec<i64> {
        for (i, row) in basis.iter().enumerate() {
            let q = num_integer::Integer::div_floor(&v[i], &row[i]);
            if !q.is_zero() {
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= &q * y;
                }
            }
        }
        v.iter().map(|x| x.to_i64().unwrap()).collect()
    };
    let apply = |m: &Vec<Vec<BigInt>>, x: &[i64]| -> Vec<i64> {
        let v: Vec<BigInt> = m.iter().map(|row| row.iter().zip(x).map(|(c, &t)| c * t).sum()).collect();
        reduce(v)
    };
    let mut elements: Vec<Vec<i64>> = vec![Vec::new()];
    for &d in &diag {
        elements = elements.into_iter().flat_map(|e| (0..d).map(move |t| [e.clone(), vec![t]].concat())).collect();
    }
    let delta = a.delta();
    let norm = a.norm_map();
    let zero = vec![0i64; k];
    let ker_delta = elements.iter().filter(|x| apply(&delta, x) == zero).count() as u64;
    let ker_norm = elements.iter().filter(|x| apply(&norm, x) == zero).count() as u64;
    let im_norm: HashSet<Vec<i64>> = elements.iter().map(|x| apply(&norm, x)).collect();
    let im_delta: HashSet<Vec<i64>> = elements.iter().map(|x| apply(&delta, x)).collect();
    Ok((ker_delta / im_norm.len() as u64, ker_norm / im_delta.len() as u64))
}
