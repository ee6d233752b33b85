//! Direct integration of the Heun equation, the reference everything else
//! is checked against.

use heun_appell::expansions::{build_solution, Center, ExpansionSpec};
use heun_appell::ode_oracle::{integrate_ivp, solve_at, OraclePath, SeedExponent};
use heun_appell::{c, Complex, HeunParams};

fn main() -> heun_appell::Result<()> {
    let p = HeunParams::real(3.0, 0.5, 1.2, 0.7, 0.8, 0.6)?;
    // Frobenius seeds at the origin, continued outward
    for z in [c(0.3), Complex::new(0.2, 0.4), Complex::new(1.5, 0.7)] {
        let (u0, _) = solve_at(&p, SeedExponent::Zero, z, 1e-12)?;
        let (u1, _) = solve_at(&p, SeedExponent::OneMinusGamma, z, 1e-12)?;
        println!("z = {z}: y_0 = {u0:.12}  y_(1-gamma) = {u1:.12}");
    }
    // continue the series solution around the point 1 and back
    let sol = build_solution(&p, &ExpansionSpec::new(Center::Origin, c(0.0)), 60)?;
    let w = sol.probe;
    let (du, _) = sol.derivatives(w)?;
    let path = OraclePath::new(
        &p,
        vec![w, Complex::new(1.0, 0.5), c(1.5), Complex::new(1.0, -0.5), w],
        0.1,
    )?;
    let out = integrate_ivp(&p, sol.eval(w)?, du, &path, 1e-12)?;
    let end = out.last().expect("path has waypoints");
    println!("around z = 1: u({w}) goes from {:.10} to {:.10}", out[0].u, end.u);
    Ok(())
}
