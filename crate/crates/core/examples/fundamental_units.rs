use classfield::quadfield::fundamental_unit;
use classfield::Result;

fn main() -> Result<()> {
    for d in [5, 8, 12, 13, 21, 28, 60, 61, 94 * 4, 109] {
        let eps = fundamental_unit(d)?;
        println!("D = {d:>3}: eps = {eps}, N(eps) = {}", eps.norm());
    }
    Ok(())
}
