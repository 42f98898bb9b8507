//! Prime-counting experiments: residue-class and splitting frequencies,
//! Dirichlet partial sums, and ideal-count slopes.
//!
//! Primes are sieved in fixed blocks that are spread over worker threads;
//! per-block results are merged in block order, so every report is the same
//! for any worker count.

use serde::Serialize;
use std::collections::BTreeMap;
use std::thread;

use crate::arith::{euler_phi, gcd, kronecker_symbol, PrimeSieve, DEFAULT_SEGMENT};
use crate::artin::{splitting_pattern, IntPoly, SplittingPattern};
use crate::error::{Error, Result};
use crate::forms::class_number_neg;
use crate::ideals::count_ideals_by_class;

pub const DEFAULT_BOUND: u64 = 1_000_000;
pub const HARD_CAP: u64 = 100_000_000;
const BLOCK: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DensityConfig {
    pub workers: usize,
    pub segment: usize,
    /// Largest accepted bound `X`.
    pub cap: u64,
}

impl Default for DensityConfig {
    fn default() -> Self {
        DensityConfig { workers: default_workers(), segment: DEFAULT_SEGMENT, cap: HARD_CAP }
    }
}

/// `WORKER_COUNT` from the environment, else the available parallelism.
pub fn default_workers() -> usize {
    std::env::var("WORKER_COUNT")
        .ok()
        .and_then(|s| s.parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or_else(|| thread::available_parallelism().map_or(1, |n| n.get()))
}

impl DensityConfig {
    fn check(&self, x: u64) -> Result<()> {
        if x > self.cap {
            return Err(Error::CapExceeded { requested: x, cap: self.cap });
        }
        Ok(())
    }

    /// Runs `work(lo, hi)` on every block of `[2, x]` and returns the
    /// results in block order.
    fn blocks<T, F>(&self, x: u64, work: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(u64, u64) -> Result<T> + Sync,
    {
        let ranges: Vec<(u64, u64)> = (0..)
            .map(|i| (2 + i * BLOCK, (1 + (i + 1) * BLOCK).min(x)))
            .take_while(|&(lo, _)| lo <= x)
            .collect();
        let workers = self.workers.max(1).min(ranges.len().max(1));
        let mut slots: Vec<Option<Result<T>>> = (0..ranges.len()).map(|_| None).collect();
        thread::scope(|s| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let ranges = &ranges;
                    let work = &work;
                    s.spawn(move || {
                        ranges
                            .iter()
                            .enumerate()
                            .skip(w)
                            .step_by(workers)
                            .map(|(i, &(lo, hi))| (i, work(lo, hi)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                for (i, r) in h.join().expect("density worker panicked") {
                    slots[i] = Some(r);
                }
            }
        });
        slots.into_iter().map(|r| r.expect("every block ran")).collect()
    }

    /// Counts primes `p <= x` by the key `classify(p)`; `None` marks an
    /// excluded prime.
    fn tally<K, F>(&self, x: u64, classify: F) -> Result<(BTreeMap<K, u64>, Vec<u64>)>
    where
        K: Ord + Send,
        F: Fn(u64) -> Result<Option<K>> + Sync,
    {
        self.check(x)?;
        let sieve = PrimeSieve::with_segment(self.segment);
        let parts = self.blocks(x, |lo, hi| {
            let mut counts = BTreeMap::new();
            let mut excluded = Vec::new();
            let mut err = None;
            sieve.for_each_prime(lo, hi, |p| {
                if err.is_some() {
                    return;
                }
                match classify(p) {
                    Ok(Some(k)) => *counts.entry(k).or_insert(0) += 1,
                    Ok(None) => excluded.push(p),
                    Err(e) => err = Some(e),
                }
            });
            match err {
                Some(e) => Err(e),
                None => Ok((counts, excluded)),
            }
        })?;
        let mut counts = BTreeMap::new();
        let mut excluded = Vec::new();
        for (c, e) in parts {
            for (k, n) in c {
                *counts.entry(k).or_insert(0) += n;
            }
            excluded.extend(e);
        }
        Ok((counts, excluded))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassFrequency {
    pub label: String,
    pub count: u64,
    pub frequency: f64,
    pub expected: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyReport {
    pub bound: u64,
    /// Primes counted in `classes`.
    pub included: u64,
    /// Primes left out (dividing the modulus or discriminant).
    pub excluded: Vec<u64>,
    pub classes: Vec<ClassFrequency>,
    /// Largest `|frequency - expected|` over classes with an expectation.
    pub max_abs_deviation: Option<f64>,
}

impl FrequencyReport {
    fn build(bound: u64, excluded: Vec<u64>, classes: Vec<(String, u64, Option<f64>)>) -> Self {
        let included: u64 = classes.iter().map(|c| c.1).sum();
        let classes: Vec<ClassFrequency> = classes
            .into_iter()
            .map(|(label, count, expected)| ClassFrequency {
                label,
                count,
                frequency: if included == 0 { 0.0 } else { count as f64 / included as f64 },
                expected,
            })
            .collect();
        let max_abs_deviation = classes
            .iter()
            .filter_map(|c| c.expected.map(|e| (c.frequency - e).abs()))
            .fold(None, |m: Option<f64>, d| Some(m.map_or(d, |m| m.max(d))));
        FrequencyReport { bound, included, excluded, classes, max_abs_deviation }
    }

    pub fn class(&self, label: &str) -> Option<&ClassFrequency> {
        self.classes.iter().find(|c| c.label == label)
    }
}

/// Frequencies of `p mod n` over primes `p <= x` not dividing `n`; each
/// class should approach `1/φ(n)`.
pub fn progression_density(n: u64, x: u64, cfg: &DensityConfig) -> Result<FrequencyReport> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("modulus {n} < 2")));
    }
    let (counts, excluded) = cfg.tally(x, |p| Ok((n % p != 0).then_some(p % n)))?;
    let expected = 1.0 / euler_phi(n) as f64;
    let classes = (1..n)
        .filter(|&r| gcd(r as i128, n as i128) == 1)
        .map(|r| (format!("{r} mod {n}"), counts.get(&r).copied().unwrap_or(0), Some(expected)))
        .collect();
    Ok(FrequencyReport::build(x, excluded, classes))
}

/// Split / inert / ramified frequencies of primes `p <= x` in the quadratic
/// field of discriminant `d`.
pub fn quadratic_split_density(d: i64, x: u64, cfg: &DensityConfig) -> Result<FrequencyReport> {
    crate::quadfield::make_discriminant(d)?;
    let (counts, excluded) = cfg.tally(x, |p| Ok(Some(kronecker_symbol(d, p as i64)?)))?;
    let get = |k: i8| counts.get(&k).copied().unwrap_or(0);
    let classes = vec![
        ("split".to_string(), get(1), Some(0.5)),
        ("inert".to_string(), get(-1), Some(0.5)),
        ("ramified".to_string(), get(0), Some(0.0)),
    ];
    Ok(FrequencyReport::build(x, excluded, classes))
}

/// All partitions of `n`, each listed in increasing order.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, min: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in min..=n {
            prefix.push(k);
            go(n - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, 1, &mut Vec::new(), &mut out);
    out
}

/// Frequencies of the factorization patterns of `f mod p`. Primes dividing
/// the leading coefficient or the discriminant are excluded. Every pattern
/// allowed by the degree is listed, so patterns that never occur show up
/// with count zero.
pub fn poly_pattern_density(f: &IntPoly, x: u64, cfg: &DensityConfig) -> Result<FrequencyReport> {
    if f.degree() == 0 {
        return Err(Error::InvalidArgument("constant polynomial".into()));
    }
    let disc = f.discriminant();
    if disc == 0.into() {
        return Err(Error::InvalidArgument(format!("{f} is not squarefree")));
    }
    let lead = f.lead();
    let (counts, excluded) = cfg.tally(x, |p| {
        if lead % p as i64 == 0 || (&disc % p) == 0.into() {
            return Ok(None);
        }
        splitting_pattern(f, p).map(Some)
    })?;
    let classes = partitions(f.degree())
        .into_iter()
        .map(|degrees| {
            let pattern = SplittingPattern { degrees };
            (pattern.to_string(), counts.get(&pattern).copied().unwrap_or(0), None)
        })
        .collect();
    Ok(FrequencyReport::build(x, excluded, classes))
}

/// Which primes enter a Dirichlet sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PrimeSelector {
    All,
    Empty,
    Residue { modulus: u64, residue: u64 },
    SplitIn { disc: i64 },
}

impl PrimeSelector {
    fn selects(&self, p: u64) -> Result<bool> {
        Ok(match *self {
            PrimeSelector::All => true,
            PrimeSelector::Empty => false,
            PrimeSelector::Residue { modulus, residue } => p % modulus == residue % modulus,
            PrimeSelector::SplitIn { disc } => kronecker_symbol(disc, p as i64)? == 1,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirichletSumReport {
    pub selector: PrimeSelector,
    pub s: f64,
    pub bound: u64,
    pub primes: u64,
    pub partial_sum: f64,
    /// `-log(s - 1)`
    pub reference: f64,
    pub ratio: f64,
}

/// `Σ p^(-s)` over selected primes `p <= x`, compared with `-log(s - 1)`.
/// Convergence as `s -> 1` is logarithmically slow, so the ratio is a
/// diagnostic rather than an estimate of the density.
pub fn dirichlet_partial_sum(selector: &PrimeSelector, s: f64, x: u64, cfg: &DensityConfig) -> Result<DirichletSumReport> {
    if !(s > 1.0 && s <= 1.5) {
        return Err(Error::InvalidArgument(format!("s = {s} outside (1, 1.5]")));
    }
    if let PrimeSelector::Residue { modulus: 0, .. } = selector {
        return Err(Error::InvalidArgument("modulus 0".into()));
    }
    cfg.check(x)?;
    let sieve = PrimeSieve::with_segment(cfg.segment);
    let parts = cfg.blocks(x, |lo, hi| {
        let mut sum = 0.0;
        let mut count = 0u64;
        let mut err = None;
        sieve.for_each_prime(lo, hi, |p| match selector.selects(p) {
            Ok(true) => {
                sum += (p as f64).powf(-s);
                count += 1;
            }
            Ok(false) => {}
            Err(e) => err = Some(e),
        });
        match err {
            Some(e) => Err(e),
            None => Ok((sum, count)),
        }
    })?;
    let (partial_sum, primes) = parts.into_iter().fold((0.0, 0), |(a, n), (b, m)| (a + b, n + m));
    let reference = -(s - 1.0).ln();
    Ok(DirichletSumReport { selector: selector.clone(), s, bound: x, primes, partial_sum, reference, ratio: partial_sum / reference })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeReport {
    pub disc: i64,
    pub bound: u64,
    /// Reduced forms labelling the classes, principal class first.
    pub classes: Vec<String>,
    pub counts: Vec<u64>,
    pub slopes: Vec<f64>,
    pub total: u64,
    pub total_slope: f64,
    /// `(max - min) / min` over the class slopes.
    pub spread: f64,
}

/// `j(x, K) / x` for every ideal class `K` of the imaginary quadratic field
/// of discriminant `d`.
pub fn ideal_count_slope(d: i64, x: u64, cap: u64) -> Result<SlopeReport> {
    let counts = count_ideals_by_class(d, x, cap)?;
    let (_, forms) = class_number_neg(d)?;
    let slopes: Vec<f64> = counts.iter().map(|&c| c as f64 / x as f64).collect();
    let total: u64 = counts.iter().sum();
    let max = slopes.iter().cloned().fold(f64::MIN, f64::max);
    let min = slopes.iter().cloned().fold(f64::MAX, f64::min);
    Ok(SlopeReport {
        disc: d,
        bound: x,
        classes: forms.iter().map(|f| f.to_string()).collect(),
        counts,
        slopes,
        total,
        total_slope: total as f64 / x as f64,
        spread: if min > 0.0 { (max - min) / min } else { f64::INFINITY },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::DEFAULT_ENUMERATION_CAP;
    use crate::oracle::gaussian_ideal_count;

    fn cfg(workers: usize) -> DensityConfig {
        DensityConfig { workers, ..DensityConfig::default() }
    }

    #[test]
    fn small_progressions_by_hand() {
        let r = progression_density(4, 7, &cfg(2)).unwrap();
        assert_eq!(r.class("1 mod 4").unwrap().count, 1);
        assert_eq!(r.class("3 mod 4").unwrap().count, 2);
        assert_eq!(r.excluded, vec![2]);
        let r = quadratic_split_density(-4, 10, &cfg(1)).unwrap();
        assert_eq!(r.class("split").unwrap().count, 1);
        assert_eq!(r.class("inert").unwrap().count, 2);
        assert_eq!(r.class("ramified").unwrap().count, 1);
    }

    #[test]
    fn progressions_converge() {
        for n in [4u64, 5, 8, 12] {
            let big = progression_density(n, 1_000_000, &cfg(4)).unwrap();
            let small = progression_density(n, 10_000, &cfg(4)).unwrap();
            assert!(big.max_abs_deviation.unwrap() < 0.005, "n = {n}");
            assert!(big.max_abs_deviation < small.max_abs_deviation, "n = {n}");
            let total: u64 = big.classes.iter().map(|c| c.count).sum::<u64>() + big.excluded.len() as u64;
            assert_eq!(total, PrimeSieve::default().count(2, 1_000_000));
            let fsum: f64 = big.classes.iter().map(|c| c.frequency).sum();
            assert!((fsum - 1.0).abs() < 1e-9);
        }
        assert_eq!(progression_density(12, 1_000_000, &cfg(1)).unwrap().classes.len(), 4);
    }

    #[test]
    fn reports_do_not_depend_on_worker_count() {
        let a = progression_density(12, 3_000_000, &cfg(1)).unwrap();
        let b = progression_density(12, 3_000_000, &cfg(5)).unwrap();
        assert_eq!(a, b);
        let sel = PrimeSelector::Residue { modulus: 4, residue: 1 };
        let a = dirichlet_partial_sum(&sel, 1.1, 3_000_000, &cfg(1)).unwrap();
        let b = dirichlet_partial_sum(&sel, 1.1, 3_000_000, &cfg(3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn split_frequencies() {
        for d in [-4i64, 8] {
            let r = quadratic_split_density(d, 1_000_000, &cfg(4)).unwrap();
            assert!((r.class("split").unwrap().frequency - 0.5).abs() < 0.005);
        }
    }

    #[test]
    fn pattern_frequencies() {
        let f: IntPoly = "x^4+1".parse().unwrap();
        let r = poly_pattern_density(&f, 1_000_000, &cfg(4)).unwrap();
        assert_eq!(r.class("{4}").unwrap().count, 0);
        assert_eq!(r.class("{1,3}").unwrap().count, 0);
        assert!((r.class("{1,1,1,1}").unwrap().frequency - 0.25).abs() < 0.01);
        assert_eq!(r.excluded, vec![2]);

        let g: IntPoly = "x^3-2".parse().unwrap();
        let small = poly_pattern_density(&g, 1_000, &cfg(2)).unwrap();
        let big = poly_pattern_density(&g, 1_000_000, &cfg(4)).unwrap();
        for (label, density) in [("{3}", 1.0 / 3.0), ("{1,1,1}", 1.0 / 6.0), ("{1,2}", 0.5)] {
            let c = big.class(label).unwrap();
            assert!((c.frequency - density).abs() < 0.01, "{label}");
            let s = small.class(label).unwrap().count;
            assert!(s > 0 && c.count >= 10 * s, "{label}");
        }
        let h: IntPoly = "x^2+1".parse().unwrap();
        let r = poly_pattern_density(&h, 1_000_000, &cfg(4)).unwrap();
        assert!((r.class("{1,1}").unwrap().frequency - 0.5).abs() < 0.005);
    }

    #[test]
    fn dirichlet_sums() {
        let r = dirichlet_partial_sum(&PrimeSelector::Empty, 1.2, 10_000, &cfg(2)).unwrap();
        assert_eq!(r.partial_sum, 0.0);
        let all = dirichlet_partial_sum(&PrimeSelector::All, 1.1, 10_000_000, &cfg(4)).unwrap();
        assert!(all.ratio > 0.7 && all.ratio < 1.1, "{}", all.ratio);
        // the 1 mod 4 and 3 mod 4 ratios approach each other only slowly as s -> 1
        let gap = |s: f64| {
            let one = PrimeSelector::Residue { modulus: 4, residue: 1 };
            let three = PrimeSelector::Residue { modulus: 4, residue: 3 };
            let a = dirichlet_partial_sum(&one, s, 1_000_000, &cfg(4)).unwrap();
            let b = dirichlet_partial_sum(&three, s, 1_000_000, &cfg(4)).unwrap();
            b.ratio - a.ratio
        };
        let (g1, g2, g3) = (gap(1.5), gap(1.1), gap(1.01));
        assert!(g1 > g2 && g2 > g3 && g3 > 0.0, "{g1} {g2} {g3}");
        assert!(dirichlet_partial_sum(&PrimeSelector::All, 2.0, 10_000, &cfg(1)).is_err());
    }

    #[test]
    fn slopes() {
        let r = ideal_count_slope(-4, 5, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(r.total, 5);
        let r = ideal_count_slope(-4, 1_000_000, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(r.total, gaussian_ideal_count(1_000_000));
        let q = std::f64::consts::FRAC_PI_4;
        assert!(r.total_slope > 0.99 * q && r.total_slope < 1.01 * q);
        let r = ideal_count_slope(-56, 100_000, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(r.counts.len(), 4);
        assert!(r.spread < 0.05);
        assert!(matches!(ideal_count_slope(-4, 1000, 100), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn caps() {
        let c = DensityConfig { cap: 1000, ..cfg(1) };
        assert!(matches!(progression_density(4, 10_000, &c), Err(Error::CapExceeded { .. })));
    }
}
