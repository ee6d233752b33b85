//! When one exponent vanishes the Appell terms collapse to incomplete Beta
//! functions. Compare each reduced form with the full expansion.

use heun_appell::expansions::{beta_expansion, sum_expansion, BetaVariant, ExpansionSpec};
use heun_appell::{c, Complex, HeunParams};

fn main() -> heun_appell::Result<()> {
    let (al, be, g) = (1.2, 0.7, 0.8);
    // ε = 0
    let eps0 = HeunParams::real(3.0, 0.5, al, be, g, 1.0 + al + be - g)?;
    // γ = 0; these forms carry powers of (a - 1) and (1 - a) that match
    // the Appell normalization for negative a
    let gam0 = HeunParams::real(-1.0, -2.0, al, be, 0.0, 0.6)?;
    let cases = [
        (BetaVariant::Gauss0, eps0, c(0.0), Complex::new(0.2, 0.1)),
        (BetaVariant::EpsZeroOrigin, eps0, eps0.gamma(), Complex::new(0.2, 0.1)),
        (BetaVariant::EpsZeroOne, eps0, c(0.0), Complex::new(0.7, 0.1)),
        (BetaVariant::GammaZeroOne, gam0, c(0.0), Complex::new(0.7, 0.1)),
    ];
    for (v, p, mu, z) in cases {
        let reduced = beta_expansion(&p, v, mu, z)?;
        let full = sum_expansion(&p, &ExpansionSpec::new(v.center(), mu), z)?;
        println!(
            "{v:?} mu = {mu}: reduced {:.12}  Appell {:.12}  rel. diff {:.1e}",
            reduced.u,
            full.u,
            (reduced.u - full.u).norm() / full.u.norm()
        );
    }
    Ok(())
}
