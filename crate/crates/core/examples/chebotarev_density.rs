//! Prime frequencies in residue classes and splitting types.

use classfield::artin::IntPoly;
use classfield::density::{poly_pattern_density, progression_density, quadratic_split_density, DensityConfig, FrequencyReport};
use classfield::Result;

fn print(title: &str, r: &FrequencyReport) {
    println!("{title} ({} primes, {} excluded)", r.included, r.excluded.len());
    for c in &r.classes {
        let expected = c.expected.map(|e| format!("{e:.4}")).unwrap_or_else(|| "-".into());
        println!("  {:<10} {:>8} {:.5} (expected {expected})", c.label, c.count, c.frequency);
    }
}

fn main() -> Result<()> {
    let cfg = DensityConfig::default();
    let x = 2_000_000;
    print("p mod 12", &progression_density(12, x, &cfg)?);
    print("primes in Q(sqrt -5)", &quadratic_split_density(-20, x, &cfg)?);
    let f: IntPoly = "x^3-2".parse()?;
    print("x^3 - 2", &poly_pattern_density(&f, x, &cfg)?);
    Ok(())
}
