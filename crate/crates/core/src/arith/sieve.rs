use super::isqrt;
use crate::error::{Error, Result};

/// Default window length of the segmented sieve, in integers.
pub const DEFAULT_SEGMENT: usize = 1 << 18;

/// Segmented sieve of Eratosthenes. Memory use is the base primes up to
/// `sqrt(hi)` plus one window of `segment` bytes.
#[derive(Debug, Clone, Copy)]
pub struct PrimeSieve {
    segment: usize,
}

impl Default for PrimeSieve {
    fn default() -> Self {
        PrimeSieve { segment: DEFAULT_SEGMENT }
    }
}

impl PrimeSieve {
    pub fn with_segment(segment: usize) -> Self {
        PrimeSieve { segment: segment.max(64) }
    }

    pub fn segment(&self) -> usize {
        self.segment
    }

    /// Primes up to `n` by a plain sieve; used for the base primes.
    fn small_primes(n: u64) -> Vec<u64> {
        let n = n as usize;
        let mut composite = vec![false; n + 1];
        let mut out = Vec::new();
        for i in 2..=n {
            if !composite[i] {
                out.push(i as u64);
                let mut j = i * i;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        out
    }

    /// Calls `f` on every prime in `[lo, hi]` in increasing order.
    pub fn for_each_prime<F: FnMut(u64)>(&self, lo: u64, hi: u64, mut f: F) {
        let lo = lo.max(2);
        if lo > hi {
            return;
        }
        let base = Self::small_primes(isqrt(hi as u128) as u64);
        let seg = self.segment as u64;
        let mut mark = vec![false; self.segment];
        let mut low = lo;
        loop {
            let high = hi.min(low.saturating_add(seg - 1));
            let len = (high - low + 1) as usize;
            mark[..len].fill(false);
            for &p in &base {
                if p * p > high {
                    break;
                }
                let mut start = low.div_ceil(p) * p;
                if start < p * p {
                    start = p * p;
                }
                let mut j = start;
                while j <= high {
                    mark[(j - low) as usize] = true;
                    j += p;
                }
            }
            for (i, &composite) in mark[..len].iter().enumerate() {
                if !composite {
                    f(low + i as u64);
                }
            }
            if high == hi {
                break;
            }
            low = high + 1;
        }
    }

    pub fn primes(&self, lo: u64, hi: u64) -> Vec<u64> {
        let mut out = Vec::new();
        self.for_each_prime(lo, hi, |p| out.push(p));
        out
    }

    pub fn count(&self, lo: u64, hi: u64) -> u64 {
        let mut n = 0;
        self.for_each_prime(lo, hi, |_| n += 1);
        n
    }
}

/// The primes in `[lo, hi]`, ascending.
pub fn sieve_primes(lo: u64, hi: u64) -> Result<Vec<u64>> {
    if lo < 2 {
        return Err(Error::InvalidArgument(format!("sieve lower bound {lo} < 2")));
    }
    if lo > hi {
        return Err(Error::InvalidArgument(format!("inverted range [{lo}, {hi}]")));
    }
    Ok(PrimeSieve::default().primes(lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn examples() {
        assert_eq!(sieve_primes(2, 10).unwrap(), vec![2, 3, 5, 7]);
        assert_eq!(
            sieve_primes(1_000_000, 1_000_100).unwrap(),
            vec![1_000_003, 1_000_033, 1_000_037, 1_000_039, 1_000_081, 1_000_099]
        );
        assert_eq!(sieve_primes(5, 5).unwrap(), vec![5]);
        assert_eq!(sieve_primes(4, 4).unwrap(), Vec::<u64>::new());
        assert!(sieve_primes(10, 2).is_err());
        assert!(sieve_primes(1, 10).is_err());
    }

    #[test]
    fn window_matches_trial_division() {
        let window: Vec<u64> = (1_000_000..=1_000_100).filter(|&n| trial(n)).collect();
        assert_eq!(sieve_primes(1_000_000, 1_000_100).unwrap(), window);
    }

    #[test]
    fn count_to_1e5_matches_trial_division() {
        let reference = (2..=100_000u64).filter(|&n| trial(n)).count() as u64;
        assert_eq!(reference, 9592);
        for segment in [64, 1000, 4096, DEFAULT_SEGMENT] {
            assert_eq!(PrimeSieve::with_segment(segment).count(2, 100_000), reference);
        }
    }

    #[test]
    fn windows_concatenate() {
        let sieve = PrimeSieve::with_segment(100);
        let whole = sieve.primes(2, 50_000);
        let mut parts = sieve.primes(2, 12_345);
        parts.extend(sieve.primes(12_346, 33_333));
        parts.extend(sieve.primes(33_334, 50_000));
        assert_eq!(whole, parts);
    }
}
