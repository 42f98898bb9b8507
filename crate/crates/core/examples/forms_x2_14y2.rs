//! Which primes are x^2 + 14y^2, and the root criterion that predicts it.

use classfield::arith::PrimeSieve;
use classfield::forms::{class_number_neg, criterion_check, known_class_polynomial};
use classfield::Result;

fn main() -> Result<()> {
    let (h, forms) = class_number_neg(-56)?;
    println!("h(-56) = {h}: {}", forms.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", "));

    let g = known_class_polynomial(-56).expect("shipped with the crate");
    let mut shown = 0;
    for p in PrimeSieve::default().primes(3, 1000) {
        if p == 7 {
            continue;
        }
        let r = criterion_check(p, -56, Some(&g))?;
        assert!(r.agree);
        if let Some(w) = r.witness {
            println!("{p:>4} = {}^2 + 14*{}^2", w.x, w.y);
            shown += 1;
        }
    }
    println!("{shown} primes below 1000, all matching the criterion with g = {g}");
    Ok(())
}
