//! Factorization patterns of a few polynomials modulo small primes.

use classfield::arith::PrimeSieve;
use classfield::artin::{splitting_pattern, IntPoly};
use classfield::Result;
use std::collections::BTreeMap;

fn main() -> Result<()> {
    let primes = PrimeSieve::default().primes(3, 2000);
    for f in ["x^4+1", "x^3-2", "x^4+2x^2-7", "x^5-x-1"] {
        let poly: IntPoly = f.parse()?;
        let mut counts = BTreeMap::new();
        for &p in &primes {
            // skip the primes dividing the discriminant
            if let Ok(pat) = splitting_pattern(&poly, p) {
                *counts.entry(pat.to_string()).or_insert(0) += 1;
            }
        }
        println!("{f}: {counts:?}");
    }
    Ok(())
}
