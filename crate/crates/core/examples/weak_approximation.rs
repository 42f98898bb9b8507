//! An x close to y at one modulus and to z at a coprime one.

use classfield::rayclass::{congruent_mod_star, weak_approx_q, Modulus};
use classfield::Result;
use num_rational::BigRational;

fn main() -> Result<()> {
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let cases = [
        (q(3, 4), "5^2*inf", q(-2, 1), "3*7"),
        (q(-1, 9), "2^4", q(5, 11), "3^2*inf"),
        (q(7, 1), "11*inf", q(1, 13), "2*inf"),
    ];
    for (y, m1, z, m2) in cases {
        let (a, b) = (Modulus::parse_rational(m1)?, Modulus::parse_rational(m2)?);
        let x = weak_approx_q(&y, &z, &a, &b)?;
        println!(
            "x = {x}: x = {y} mod* {m1} ({}), x = {z} mod* {m2} ({})",
            congruent_mod_star(&x, &y, &a)?,
            congruent_mod_star(&x, &z, &b)?
        );
    }
    Ok(())
}
