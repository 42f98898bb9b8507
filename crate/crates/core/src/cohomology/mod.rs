//! Cohomology of finitely generated abelian groups with an action of a
//! finite cyclic group `G = <σ>` of order `n`.
//!
//! With `Δ = 1 - σ` and `N = 1 + σ + ... + σ^(n-1)`,
//! `H^0(A) = ker Δ / N A` and `H^1(A) = ker N / Δ A`; the Herbrand quotient
//! is `q(A) = |H^1(A)| / |H^0(A)|` when both are finite.

pub mod lattice;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Serialize, Serializer};
use std::fmt;

use crate::error::{Error, Result};
use lattice::{coordinates, identity, kernel, mul, row_basis, smith_invariants, sub, zeros, Matrix};

/// `A = Z^k / R Z^r` with `σ` acting through the `k x k` matrix `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicModule {
    n: u32,
    rank: usize,
    /// `k x r`; the columns generate the relation lattice.
    relations: Matrix,
    relation_count: usize,
    action: Matrix,
}

/// Order of a cohomology group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupOrder {
    Finite(BigInt),
    Infinite,
}

impl GroupOrder {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            GroupOrder::Finite(n) => Some(n),
            GroupOrder::Infinite => None,
        }
    }
}

impl fmt::Display for GroupOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupOrder::Finite(n) => write!(f, "{n}"),
            GroupOrder::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for GroupOrder {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A subquotient `K / S` of `Z^k`: its torsion invariants and free rank.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupStructure {
    #[serde(serialize_with = "big_list")]
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

fn big_list<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl GroupStructure {
    pub fn order(&self) -> GroupOrder {
        if self.free_rank > 0 {
            GroupOrder::Infinite
        } else {
            GroupOrder::Finite(self.torsion.iter().product())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HerbrandResult {
    pub n: u32,
    pub h0: GroupOrder,
    pub h1: GroupOrder,
    pub h0_structure: GroupStructure,
    pub h1_structure: GroupStructure,
    #[serde(serialize_with = "optional_ratio")]
    pub q: Option<BigRational>,
}

fn optional_ratio<S: Serializer>(q: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&q.to_string()),
        None => s.serialize_none(),
    }
}

fn column(m: &Matrix, j: usize) -> Vec<BigInt> {
    m.iter().map(|r| r[j].clone()).collect()
}

impl CyclicModule {
    /// `relations` is `k x r` (columns are relations), `action` is `k x k`.
    pub fn new(n: u32, relations: Matrix, action: Matrix) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("group order must be positive".into()));
        }
        let rank = action.len();
        if action.iter().any(|r| r.len() != rank) {
            return Err(Error::ModuleInvariant("action matrix must be square".into()));
        }
        if relations.len() != rank {
            return Err(Error::ModuleInvariant(format!(
                "relation matrix has {} rows, expected {rank}",
                relations.len()
            )));
        }
        let relation_count = relations.first().map_or(0, |r| r.len());
        if relations.iter().any(|r| r.len() != relation_count) {
            return Err(Error::ModuleInvariant("relation matrix rows differ in length".into()));
        }
        let module = CyclicModule { n, rank, relations, relation_count, action };
        module.validate()?;
        Ok(module)
    }

    pub fn from_i64(n: u32, relations: &[Vec<i64>], action: &[Vec<i64>]) -> Result<Self> {
        let k = action.len();
        let relations = if relations.is_empty() { vec![Vec::new(); k] } else { lattice::from_i64(relations) };
        Self::new(n, relations, lattice::from_i64(action))
    }

    /// `Z^k` with trivial relations and the given action.
    pub fn free(n: u32, action: Matrix) -> Result<Self> {
        let k = action.len();
        Self::new(n, vec![Vec::new(); k], action)
    }

    /// `Z/d_1 x ... x Z/d_k` (0 for a free factor) with trivial action.
    pub fn trivial(n: u32, orders: &[i64]) -> Result<Self> {
        let k = orders.len();
        let mut rel = zeros(k, k);
        for (i, &d) in orders.iter().enumerate() {
            rel[i][i] = BigInt::from(d);
        }
        Self::new(n, rel, identity(k))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &Matrix {
        &self.relations
    }

    pub fn action(&self) -> &Matrix {
        &self.action
    }

    fn relation_basis(&self) -> Matrix {
        let cols: Vec<Vec<BigInt>> = (0..self.relation_count).map(|j| column(&self.relations, j)).collect();
        row_basis(&cols, self.rank)
    }

    fn validate(&self) -> Result<()> {
        let basis = self.relation_basis();
        let k = self.rank;
        let mr = mul(&self.action, &self.relations, k, self.relation_count);
        for j in 0..self.relation_count {
            if coordinates(&basis, &column(&mr, j)).is_none() {
                return Err(Error::ModuleInvariant(format!("σ does not preserve relation {j}")));
            }
        }
        let mut power = identity(k);
        for _ in 0..self.n {
            power = mul(&power, &self.action, k, k);
        }
        let diff = sub(&power, &identity(k));
        for j in 0..k {
            if coordinates(&basis, &column(&diff, j)).is_none() {
                return Err(Error::ModuleInvariant(format!("σ^{} is not the identity on A", self.n)));
            }
        }
        Ok(())
    }

    pub fn delta(&self) -> Matrix {
        sub(&identity(self.rank), &self.action)
    }

    pub fn norm_map(&self) -> Matrix {
        let k = self.rank;
        let mut total = zeros(k, k);
        let mut power = identity(k);
        for _ in 0..self.n {
            for (t, p) in total.iter_mut().zip(&power) {
                for (x, y) in t.iter_mut().zip(p) {
                    *x += y;
                }
            }
            power = mul(&power, &self.action, k, k);
        }
        total
    }

    /// Basis of `{x in Z^k : F x in L}`, the preimage of `ker(F on A)`.
    fn preimage_kernel(&self, f: &Matrix) -> Matrix {
        let k = self.rank;
        // kernel of [F | -R] : Z^(k + r) -> Z^k, projected to the first k coordinates
        let combined: Matrix = f
            .iter()
            .zip(&self.relations)
            .map(|(fr, rr)| fr.iter().cloned().chain(rr.iter().map(|x| -x)).collect())
            .collect();
        let ker = kernel(&combined, k + self.relation_count);
        let projected: Vec<Vec<BigInt>> = ker.iter().map(|v| v[..k].to_vec()).collect();
        row_basis(&projected, k)
    }

    /// `ker(F) / (G A)` as an abelian group.
    fn subquotient(&self, f: &Matrix, g: &Matrix) -> Result<GroupStructure> {
        let k = self.rank;
        let big = self.preimage_kernel(f);
        let mut gens: Vec<Vec<BigInt>> = (0..k).map(|j| column(g, j)).collect();
        gens.extend((0..self.relation_count).map(|j| column(&self.relations, j)));
        let mut coords = Vec::with_capacity(gens.len());
        for v in &gens {
            let c = coordinates(&big, v)
                .ok_or_else(|| Error::ModuleInvariant("image is not contained in the kernel".into()))?;
            coords.push(c);
        }
        let width = big.len();
        let inv = smith_invariants(&coords, width);
        Ok(GroupStructure {
            free_rank: width - inv.len(),
            torsion: inv.into_iter().filter(|d| !d.is_one()).collect(),
        })
    }

    pub fn h0(&self) -> Result<GroupStructure> {
        self.subquotient(&self.delta(), &self.norm_map())
    }

    pub fn h1(&self) -> Result<GroupStructure> {
        self.subquotient(&self.norm_map(), &self.delta())
    }

    /// Order of `A` itself (infinite when the relations have lower rank).
    pub fn order(&self) -> GroupOrder {
        let inv = smith_invariants(&self.relations, self.relation_count);
        if inv.len() < self.rank {
            GroupOrder::Infinite
        } else {
            GroupOrder::Finite(inv.iter().product())
        }
    }
}

pub fn herbrand_components(a: &CyclicModule) -> Result<HerbrandResult> {
    let h0s = a.h0()?;
    let h1s = a.h1()?;
    let (h0, h1) = (h0s.order(), h1s.order());
    let q = match (&h0, &h1) {
        (GroupOrder::Finite(x), GroupOrder::Finite(y)) => Some(BigRational::new(y.clone(), x.clone())),
        _ => None,
    };
    Ok(HerbrandResult { n: a.n, h0, h1, h0_structure: h0s, h1_structure: h1s, q })
}

/// `Z^d` with `σ` the cyclic shift `e_i -> e_(i+1)`, for `d | n`.
pub fn build_permutation_module(n: u32, d: u32) -> Result<CyclicModule> {
    if d == 0 || n % d != 0 {
        return Err(Error::InvalidArgument(format!("orbit size {d} does not divide {n}")));
    }
    let d = d as usize;
    let mut shift = zeros(d, d);
    for i in 0..d {
        shift[(i + 1) % d][i] = BigInt::one();
    }
    CyclicModule::free(n, shift)
}

fn block_diagonal(a: &Matrix, ar: usize, ac: usize, b: &Matrix, br: usize, bc: usize) -> Matrix {
    let mut out = zeros(ar + br, ac + bc);
    for i in 0..ar {
        for j in 0..ac {
            out[i][j] = a[i][j].clone();
        }
    }
    for i in 0..br {
        for j in 0..bc {
            out[ar + i][ac + j] = b[i][j].clone();
        }
    }
    out
}

pub fn direct_sum(a: &CyclicModule, b: &CyclicModule) -> Result<CyclicModule> {
    if a.n != b.n {
        return Err(Error::OrderMismatch(a.n as i64, b.n as i64));
    }
    let rel = block_diagonal(&a.relations, a.rank, a.relation_count, &b.relations, b.rank, b.relation_count);
    let act = block_diagonal(&a.action, a.rank, a.rank, &b.action, b.rank, b.rank);
    CyclicModule::new(a.n, rel, act)
}

/// Random unimodular `k x k` matrix together with its inverse.
fn random_unimodular<R: Rng>(k: usize, rng: &mut R) -> (Matrix, Matrix) {
    let mut u = identity(k);
    let mut inv = identity(k);
    if k < 2 {
        return (u, inv);
    }
    for _ in 0..2 * k {
        let i = rng.gen_range(0..k);
        let mut j = rng.gen_range(0..k - 1);
        if j >= i {
            j += 1;
        }
        let c = BigInt::from(rng.gen_range(-2i64..=2));
        // u <- E u with E = I + c e_ij, inv <- inv E^-1
        let src = u[j].clone();
        for (x, y) in u[i].iter_mut().zip(&src) {
            *x += &c * y;
        }
        for row in inv.iter_mut() {
            let s = row[i].clone();
            row[j] -= &c * s;
        }
    }
    (u, inv)
}

/// A random finite module with `|A| <= max_order` for the cyclic group of
/// order `n`: a direct sum of twisted cycles `e_1 -> ... -> e_l -> c e_1`
/// on `(Z/d)^l` with `l | n` and `c^(n/l) = 1 mod d`, written in a random
/// basis of `Z^k`.
pub fn random_finite_module<R: Rng>(n: u32, max_order: u64, rng: &mut R) -> Result<CyclicModule> {
    let divisors: Vec<u32> = (1..=n).filter(|l| n % l == 0).collect();
    let mut blocks: Vec<(usize, i64, i64)> = Vec::new();
    let mut order = 1u64;
    for _ in 0..rng.gen_range(1..=3) {
        let l = divisors[rng.gen_range(0..divisors.len())] as usize;
        let d = rng.gen_range(2i64..=12);
        let size = (d as u64).checked_pow(l as u32).unwrap_or(u64::MAX);
        if order.saturating_mul(size) > max_order {
            continue;
        }
        let twists: Vec<i64> = (1..d)
            .filter(|&c| {
                crate::arith::gcd(c as i128, d as i128) == 1
                    && crate::arith::pow_mod(c as u64, (n as u64) / l as u64, d as u64) == 1
            })
            .collect();
        let c = twists[rng.gen_range(0..twists.len())];
        order *= size;
        blocks.push((l, d, c));
    }
    if blocks.is_empty() {
        blocks.push((1, 2, 1));
    }
    let k: usize = blocks.iter().map(|b| b.0).sum();
    let mut rel = zeros(k, k);
    let mut act = zeros(k, k);
    let mut start = 0;
    for &(l, d, c) in &blocks {
        for i in 0..l {
            rel[start + i][start + i] = BigInt::from(d);
            let target = start + (i + 1) % l;
            act[target][start + i] = if i + 1 == l { BigInt::from(c) } else { BigInt::one() };
        }
        start += l;
    }
    let (u, uinv) = random_unimodular(k, rng);
    let rel = mul(&u, &rel, k, k);
    let act = mul(&mul(&u, &act, k, k), &uinv, k, k);
    CyclicModule::new(n, rel, act)
}

/// Scales the relation lattice of a free module by `m`, giving the finite
/// module `A / mA`.
pub fn quotient_by_multiple(a: &CyclicModule, m: i64) -> Result<CyclicModule> {
    let k = a.rank;
    let mut rel = a.relations.clone();
    for (i, row) in rel.iter_mut().enumerate() {
        let mut extra = vec![BigInt::zero(); k];
        extra[i] = BigInt::from(m);
        row.extend(extra);
    }
    CyclicModule::new(a.n, rel, a.action.clone())
}

/// The `σ`-stable sublattice of a free module spanned by `generators`,
/// with the action rewritten in a basis of that sublattice.
pub fn submodule(a: &CyclicModule, generators: &[Vec<i64>]) -> Result<CyclicModule> {
    if a.relation_count != 0 {
        return Err(Error::Unsupported("submodules are taken in free modules".into()));
    }
    let k = a.rank;
    let gens = lattice::from_i64(generators);
    let basis = row_basis(&gens, k);
    let r = basis.len();
    let mut act = zeros(r, r);
    for (j, b) in basis.iter().enumerate() {
        let image: Vec<BigInt> = a.action.iter().map(|row| row.iter().zip(b).map(|(x, y)| x * y).sum()).collect();
        let c = coordinates(&basis, &image)
            .ok_or_else(|| Error::ModuleInvariant("sublattice is not σ-stable".into()))?;
        for (i, x) in c.into_iter().enumerate() {
            act[i][j] = x;
        }
    }
    CyclicModule::free(a.n, act)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::herbrand_by_enumeration;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ratio(a: i64, b: i64) -> Option<BigRational> {
        Some(BigRational::new(a.into(), b.into()))
    }

    #[test]
    fn examples() {
        let z = CyclicModule::free(4, identity(1)).unwrap();
        let r = herbrand_components(&z).unwrap();
        assert_eq!(r.h0, GroupOrder::Finite(4.into()));
        assert_eq!(r.h1, GroupOrder::Finite(1.into()));
        assert_eq!(r.q, ratio(1, 4));

        let z5 = CyclicModule::trivial(2, &[5]).unwrap();
        let r = herbrand_components(&z5).unwrap();
        assert_eq!((r.h0.clone(), r.h1.clone()), (GroupOrder::Finite(1.into()), GroupOrder::Finite(1.into())));
        assert_eq!(r.q, ratio(1, 1));

        let swap = build_permutation_module(4, 2).unwrap();
        assert_eq!(swap.action(), &lattice::from_i64(&[vec![0, 1], vec![1, 0]]));
        let r = herbrand_components(&swap).unwrap();
        assert_eq!(r.h0, GroupOrder::Finite(2.into()));
        assert_eq!(r.h1, GroupOrder::Finite(1.into()));
        assert_eq!(r.q, ratio(1, 2));
    }

    #[test]
    fn infinite_components() {
        // Z with σ = -1 and n = 2: ker Δ = 0, ker N = Z, Δ A = 2Z
        let m = CyclicModule::free(2, lattice::from_i64(&[vec![-1]])).unwrap();
        let r = herbrand_components(&m).unwrap();
        assert_eq!(r.q, ratio(2, 1));
        // trivial action with n = 1 kills everything
        let m = CyclicModule::free(1, identity(2)).unwrap();
        assert_eq!(herbrand_components(&m).unwrap().q, ratio(1, 1));
        // Z^2 with trivial action, σ of order 2, plus a free Z with σ = -1
        let a = CyclicModule::free(3, identity(1)).unwrap();
        assert!(a.h0().unwrap().free_rank == 0);
    }

    #[test]
    fn invariant_violations_are_rejected() {
        assert!(CyclicModule::from_i64(3, &[], &[vec![0, 1], vec![1, 0]]).is_err());
        assert!(CyclicModule::from_i64(2, &[vec![5]], &[vec![2]]).is_err());
        assert!(CyclicModule::from_i64(2, &[vec![2], vec![0]], &[vec![0, 1], vec![1, 0]]).is_err());
        assert!(CyclicModule::from_i64(2, &[vec![4]], &[vec![3]]).is_ok());
        assert!(CyclicModule::from_i64(2, &[vec![4]], &[vec![-1]]).is_ok());
        assert!(build_permutation_module(6, 4).is_err());
        let a = build_permutation_module(4, 2).unwrap();
        let b = build_permutation_module(6, 2).unwrap();
        assert!(direct_sum(&a, &b).is_err());
    }

    #[test]
    fn permutation_modules() {
        for n in 1..=12u32 {
            for d in (1..=n).filter(|d| n % d == 0) {
                let r = herbrand_components(&build_permutation_module(n, d).unwrap()).unwrap();
                assert_eq!(r.q, ratio(d as i64, n as i64), "n = {n}, d = {d}");
            }
        }
    }

    #[test]
    fn direct_sums_multiply() {
        let a = build_permutation_module(4, 2).unwrap();
        let b = build_permutation_module(4, 4).unwrap();
        let s = direct_sum(&a, &b).unwrap();
        assert_eq!(herbrand_components(&s).unwrap().q, ratio(1, 2));
        let c = CyclicModule::trivial(2, &[3]).unwrap();
        let d = CyclicModule::trivial(2, &[5]).unwrap();
        assert_eq!(herbrand_components(&direct_sum(&c, &d).unwrap()).unwrap().q, ratio(1, 1));
        let zero = CyclicModule::free(4, Vec::new()).unwrap();
        let r = herbrand_components(&direct_sum(&a, &zero).unwrap()).unwrap();
        assert_eq!(r, herbrand_components(&a).unwrap());

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=6u32 {
            let divs: Vec<u32> = (1..=n).filter(|d| n % d == 0).collect();
            for &d1 in &divs {
                for &d2 in &divs {
                    let x = build_permutation_module(n, d1).unwrap();
                    let y = random_finite_module(n, 500, &mut rng).unwrap();
                    let z = build_permutation_module(n, d2).unwrap();
                    let s = direct_sum(&direct_sum(&x, &y).unwrap(), &z).unwrap();
                    let q = herbrand_components(&s).unwrap().q.unwrap();
                    let expected = herbrand_components(&x).unwrap().q.unwrap()
                        * herbrand_components(&y).unwrap().q.unwrap()
                        * herbrand_components(&z).unwrap().q.unwrap();
                    assert_eq!(q, expected);
                }
            }
        }
    }

    #[test]
    fn finite_modules_have_trivial_quotient() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut checked = 0;
        for i in 0..200 {
            let n = rng.gen_range(1..=6);
            let m = random_finite_module(n, 10_000, &mut rng).unwrap();
            let r = herbrand_components(&m).unwrap();
            assert_eq!(r.q, ratio(1, 1), "module {i}: {m:?}");
            if let GroupOrder::Finite(size) = m.order() {
                if size <= BigInt::from(200) {
                    let (h0, h1) = herbrand_by_enumeration(&m).unwrap();
                    assert_eq!(r.h0, GroupOrder::Finite(h0.into()));
                    assert_eq!(r.h1, GroupOrder::Finite(h1.into()));
                    checked += 1;
                }
            }
        }
        assert!(checked > 20);
    }

    #[test]
    fn finite_index_submodules() {
        // B = {x : Σ x_i ≡ 0 mod m} has index m in the permutation module A;
        // q(B) = q(A), and the finite quotient A / mA has q = 1
        for (n, d) in [(4u32, 2u32), (6, 3), (6, 6), (12, 4)] {
            let a = build_permutation_module(n, d).unwrap();
            let qa = herbrand_components(&a).unwrap().q;
            for m in [2i64, 3, 5] {
                let mut gens: Vec<Vec<i64>> = (0..d as usize - 1)
                    .map(|i| (0..d as usize).map(|j| if j == i { 1 } else if j == i + 1 { -1 } else { 0 }).collect())
                    .collect();
                gens.push((0..d as usize).map(|j| if j == 0 { m } else { 0 }).collect());
                let b = submodule(&a, &gens).unwrap();
                assert_eq!(b.rank(), d as usize);
                assert_eq!(herbrand_components(&b).unwrap().q, qa, "n = {n}, d = {d}, m = {m}");
                let quotient = quotient_by_multiple(&a, m).unwrap();
                assert_eq!(herbrand_components(&quotient).unwrap().q, ratio(1, 1));
            }
        }
        let a = build_permutation_module(4, 2).unwrap();
        assert!(submodule(&a, &[vec![1, 0]]).is_err());
    }
}
