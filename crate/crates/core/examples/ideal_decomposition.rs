//! How small primes decompose in a few quadratic fields.

use classfield::ideals::decompose_prime;
use classfield::Result;

fn main() -> Result<()> {
    for d in [-4, -56, 5, 12] {
        println!("D = {d}");
        for p in [2, 3, 5, 7, 11, 13] {
            let dec = decompose_prime(p, d)?;
            let parts: Vec<String> = dec
                .primes
                .iter()
                .map(|(q, e)| if *e == 1 { q.to_string() } else { format!("({q})^{e}") })
                .collect();
            println!("  {p:>2}: {:<9} {}", format!("{:?}", dec.kind), parts.join(" * "));
        }
    }
    Ok(())
}
