//! Accessory parameters for which the origin series is a polynomial.

use heun_appell::expansions::{radius_at, sum_expansion, Center, ExpansionSpec};
use heun_appell::recurrences::{origin_coeffs, run, solve_termination, PinnedExponent};
use heun_appell::{c, HeunParams};

fn main() -> heun_appell::Result<()> {
    for n in 1..=3 {
        // α = N pins the series at exponent μ = 0 to stop after a_N
        let partial = HeunParams::real(3.0, 0.0, n as f64, 0.7, 0.8, 0.6)?;
        let roots = solve_termination(&partial, n, c(0.0), PinnedExponent::AlphaPins)?;
        println!("N = {n}: {} roots", roots.len());
        for t in roots {
            let p = partial.with_q(t.q);
            let coeffs = run(&origin_coeffs(&p, c(0.0))?, n + 6)?;
            // the integrated series still has the singularities of u
            let z = c(0.5 * radius_at(&p, Center::Origin)?);
            let s = sum_expansion(&p, &ExpansionSpec::new(Center::Origin, c(0.0)), z)?;
            println!(
                "  q = {:.10}  residual {:.1e}  terminated {}  terms {}  u({z:.4}) = {:.10}",
                t.q, t.residual, coeffs.terminated, s.terms_used, s.u
            );
        }
    }
    Ok(())
}
