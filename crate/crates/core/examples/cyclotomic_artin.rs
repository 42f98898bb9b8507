//! Frobenius elements in Q(zeta_m) and a sampled Artin reciprocity check.

use classfield::artin::{decomposition_type_cyclotomic, frobenius_cyclotomic, verify_artin_kernel};
use classfield::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let m = 24;
    println!("p in Q(zeta_{m}):  frob  e f r");
    for p in [2, 3, 5, 7, 11, 13, 17, 19, 23, 73] {
        let t = decomposition_type_cyclotomic(p, m)?;
        let frob = if m % p == 0 { "-".to_string() } else { frobenius_cyclotomic(p, m)?.value.to_string() };
        println!("  {p:>3}  {frob:>4}  {} {} {}", t.e, t.f, t.r);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for m in [5, 12, 60] {
        let r = verify_artin_kernel(m, 2000, &mut rng)?;
        println!("m = {m}: kernel check {}", if r.passed() { "passed" } else { "FAILED" });
    }
    Ok(())
}
