//! Sum the expansion about the origin for both exponents and check that
//! the result solves the Heun equation.

use heun_appell::expansions::{sum_expansion, Center, ExpansionSpec};
use heun_appell::ode_oracle::finite_difference_residual;
use heun_appell::{c, Complex, HeunParams};

fn main() -> heun_appell::Result<()> {
    let p = HeunParams::real(3.0, 0.5, 1.2, 0.7, 0.8, 0.6)?;
    println!("{p}");
    for mu in [c(0.0), p.gamma()] {
        let spec = ExpansionSpec::new(Center::Origin, mu).with_tol(1e-13);
        println!("mu = {mu}");
        for z in [c(0.1), c(0.3), Complex::new(-0.2, 0.35), Complex::new(0.05, -0.5)] {
            let s = sum_expansion(&p, &spec, z)?;
            let res = finite_difference_residual(&p, |w| Ok(sum_expansion(&p, &spec, w)?.u), z, 0.01)?;
            println!(
                "  u({z}) = {:.12}  terms {:>3}  est. error {:.1e}  residual {:.1e}",
                s.u, s.terms_used, s.est_error, res
            );
        }
    }
    Ok(())
}
