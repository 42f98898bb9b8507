//! Ideals of norm up to X per class, divided by X.

use classfield::density::ideal_count_slope;
use classfield::ideals::DEFAULT_ENUMERATION_CAP;
use classfield::Result;

fn main() -> Result<()> {
    for x in [1_000, 10_000, 100_000] {
        let r = ideal_count_slope(-4, x, DEFAULT_ENUMERATION_CAP)?;
        println!("Z[i], X = {x:>6}: {:.5} (pi/4 = {:.5})", r.total_slope, std::f64::consts::FRAC_PI_4);
    }
    let r = ideal_count_slope(-56, 100_000, DEFAULT_ENUMERATION_CAP)?;
    for (form, slope) in r.classes.iter().zip(&r.slopes) {
        println!("D = -56, class of {form}: {slope:.5}");
    }
    println!("spread {:.4}", r.spread);
    Ok(())
}
