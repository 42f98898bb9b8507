//! Tate cohomology of a few modules over cyclic groups.

use classfield::cohomology::{build_permutation_module, direct_sum, herbrand_components, CyclicModule};
use classfield::Result;

fn show(label: &str, m: &CyclicModule) -> Result<()> {
    let r = herbrand_components(m)?;
    let q = r.q.map(|q| q.to_string()).unwrap_or_else(|| "undefined".into());
    println!("{label:<28} H0 = {:?}  H1 = {:?}  q = {q}", r.h0_structure.torsion, r.h1_structure.torsion);
    Ok(())
}

fn main() -> Result<()> {
    show("Z (trivial action, n = 6)", &build_permutation_module(6, 1)?)?;
    show("Z[G], n = 6", &build_permutation_module(6, 6)?)?;
    show("Z[G/H], n = 12, d = 4", &build_permutation_module(12, 4)?)?;
    // Z with the generator acting by -1
    show("Z(-1), n = 2", &CyclicModule::from_i64(2, &[], &[vec![-1]])?)?;
    // Z/5 with the generator acting by 2, so n = 4
    show("Z/5, sigma = 2", &CyclicModule::from_i64(4, &[vec![5]], &[vec![2]])?)?;
    let sum = direct_sum(&build_permutation_module(4, 2)?, &build_permutation_module(4, 1)?)?;
    show("Z[G/H] + Z, n = 4, d = 2", &sum)?;
    Ok(())
}
