//! Expansions about 1, a and q/(αβ), each summed inside its own disc.

use heun_appell::expansions::{radius_at, sum_expansion, Center, ExpansionSpec};
use heun_appell::ode_oracle::finite_difference_residual;
use heun_appell::{c, Complex, HeunParams};

fn show(p: &HeunParams, center: Center, mu: Complex, points: &[Complex]) -> heun_appell::Result<()> {
    let spec = ExpansionSpec::new(center, mu);
    println!("{center:?}, mu = {mu}, radius {:.4}", radius_at(p, center)?);
    for &z in points {
        let s = sum_expansion(p, &spec, z)?;
        let res = finite_difference_residual(p, |w| Ok(sum_expansion(p, &spec, w)?.u), z, 0.01)?;
        println!(
            "  u({z}) = {:.12}  terms {:>3}  residual {:.1e}",
            s.u, s.terms_used, res
        );
    }
    Ok(())
}

fn main() -> heun_appell::Result<()> {
    // a = -1.2, q = 2αβ puts q/(αβ) at 2, away from the other points
    let p = HeunParams::real(-1.2, 2.0 * 1.2 * 0.7, 1.2, 0.7, 0.8, 0.6)?;
    show(
        &p,
        Center::One,
        c(0.0),
        &[Complex::new(0.6, 0.1), Complex::new(1.3, -0.2)],
    )?;
    show(&p, Center::One, p.delta(), &[Complex::new(0.7, 0.05)])?;
    show(
        &p,
        Center::A,
        c(0.0),
        &[Complex::new(-0.8, -0.2), Complex::new(-1.5, 0.3)],
    )?;
    // the z0 expansion needs ε = 0 and μ = 2
    let (al, be, g) = (1.2, 0.7, 0.8);
    let p = HeunParams::real(3.0, 0.3 * al * be, al, be, g, 1.0 + al + be - g)?;
    let z0 = p.z0().expect("alpha beta != 0");
    show(
        &p,
        Center::Z0,
        c(2.0),
        &[z0 + Complex::new(0.05, 0.02), z0 + Complex::new(-0.04, 0.05)],
    )?;
    Ok(())
}
