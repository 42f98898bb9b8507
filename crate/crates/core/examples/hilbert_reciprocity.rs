//! Local Hilbert symbols and their product over all places.

use classfield::padic::{hilbert_product, Place};
use classfield::Result;
use num_rational::BigRational;

fn main() -> Result<()> {
    let q = |n: i64| BigRational::from_integer(n.into());
    for (a, b) in [(2, 3), (-1, -1), (5, 7), (-3, 14), (6, -10)] {
        let r = hilbert_product(&q(a), &q(b))?;
        let local: Vec<String> = r
            .symbols
            .iter()
            .filter(|(_, s)| *s == -1)
            .map(|(v, _)| match v {
                Place::Infinite => "inf".to_string(),
                Place::Finite(p) => p.to_string(),
            })
            .collect();
        println!("({a}, {b}): -1 at [{}], product {}", local.join(", "), r.product);
    }
    Ok(())
}
