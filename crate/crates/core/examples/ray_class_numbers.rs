//! Ray class numbers over Q and over a few quadratic fields.

use classfield::ideals::QuadIdeal;
use classfield::quadfield::QuadOrder;
use classfield::rayclass::{ray_class_number, Modulus};
use classfield::Result;

fn main() -> Result<()> {
    println!("over Q");
    for m in ["5", "5*inf", "8", "8*inf", "2^2*3*5*inf"] {
        let r = ray_class_number(&Modulus::parse_rational(m)?, None)?;
        println!("  m = {m:<12} h_m = {}", r.h_m);
    }

    println!("Q(i), modulus (n)");
    let order = QuadOrder::new(-4)?;
    for n in [2, 3, 5, 7] {
        let r = ray_class_number(&Modulus::quadratic(QuadIdeal::rational(order, n)?, &[])?, None)?;
        println!("  n = {n}  h_m = {:>2}  [U : U_m] = {}", r.h_m, r.unit_index);
    }

    // h(Q(sqrt 5)) = 1 has to be supplied for real fields
    println!("Q(sqrt 5), modulus (4) with both real places");
    let order = QuadOrder::new(5)?;
    let m = Modulus::quadratic(QuadIdeal::rational(order, 4)?, &[0, 1])?;
    let r = ray_class_number(&m, Some(1))?;
    println!("  h_m = {}  2^s = {}  [U : U_m] = {}", r.h_m, r.two_pow_s, r.unit_index);
    Ok(())
}
