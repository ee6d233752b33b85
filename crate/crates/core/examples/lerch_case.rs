//! δ = 1, ε = -1: the expansion terms become Lerch transcendents.

use heun_appell::expansions::{lerch_expansion, sum_expansion, Center, ExpansionSpec};
use heun_appell::specials::lerch_phi;
use heun_appell::{c, Complex, HeunParams};

fn main() -> heun_appell::Result<()> {
    let (al, be) = (1.2, 0.7);
    let p = HeunParams::real(3.0, 0.5, al, be, 1.0 + al + be, 1.0)?;
    println!("Phi(0.3, 1, 0.5) = {:.14}", lerch_phi(c(0.3), c(1.0), c(0.5), 1e-16)?);
    for mu in [c(0.0), p.gamma()] {
        for z in [c(0.2), Complex::new(0.1, 0.2)] {
            let l = lerch_expansion(&p, mu, z)?.u;
            let f = sum_expansion(&p, &ExpansionSpec::new(Center::Origin, mu), z)?.u;
            println!("mu = {mu} z = {z}: Lerch {l:.12}  Appell {f:.12}");
        }
    }
    Ok(())
}
