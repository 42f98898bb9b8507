use classfield::padic::{hensel_sqrt, padic_exp, padic_log, PadicNumber};
use classfield::Result;

fn main() -> Result<()> {
    for (p, n) in [(5, 5), (3, 9), (2, 4), (7, 14)] {
        let x = PadicNumber::from_integer(n, p, 10)?;
        let e = padic_exp(&x)?;
        let back = padic_log(&e)?;
        println!("p = {p}: exp({n}) = {e}, log of that = {back}");
    }

    let u = PadicNumber::from_integer(6, 5, 10)?;
    println!("log_5(6) = {}", padic_log(&u)?);

    // 2 is a square in Z_7 since 3^2 = 2 mod 7
    let two = PadicNumber::from_integer(2, 7, 12)?;
    if let Some(r) = hensel_sqrt(&two, 12)? {
        println!("sqrt(2) in Z_7 = {r}, squared: {}", r.mul(&r)?);
    }

    let out = padic_exp(&PadicNumber::from_integer(2, 2, 10)?);
    println!("exp(2) in Q_2: {}", out.err().map(|e| e.to_string()).unwrap_or_default());
    Ok(())
}
