//! Appell F1 by its double series and by the Euler integral.

use heun_appell::specials::{appell_f1, appell_f1_auto, appell_f1_integral, F1Params};
use heun_appell::{c, Complex};

fn main() -> heun_appell::Result<()> {
    let p = F1Params::new(c(0.7), c(0.4), c(-0.3), c(1.9))?;
    for (x, y) in [
        (Complex::new(0.3, 0.1), Complex::new(0.1, -0.2)),
        (Complex::new(-0.5, 0.2), Complex::new(0.6, 0.0)),
        (Complex::new(0.85, 0.0), Complex::new(-0.7, 0.3)),
    ] {
        let series = appell_f1(&p, x, y, 1e-15)?;
        let integral = appell_f1_integral(&p, x, y)?;
        let auto = appell_f1_auto(&p, x, y, 1e-15)?;
        println!("x = {x}, y = {y}");
        println!("  series   {series}");
        println!("  integral {integral}");
        println!(
            "  auto     {auto}   |series - integral| = {:.2e}",
            (series - integral).norm()
        );
    }
    Ok(())
}
