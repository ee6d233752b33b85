//! a = -1, q = 0, δ = ε: the recurrence has two terms, the solution is a
//! ₂F₁ in z², and its values at 0 and 1 are known in closed form.

use heun_appell::acceptance::two_term_value_at_one;
use heun_appell::closed_forms::{eval_symmetric_z2, value_at_one_two_term, value_at_origin_two_term};
use heun_appell::expansions::{beta_expansion, BetaVariant};
use heun_appell::recurrences::{closed_form_origin, origin_coeffs, run};
use heun_appell::{c, Complex, HeunParams};

fn main() -> heun_appell::Result<()> {
    let p = HeunParams::real(-1.0, 0.0, 1.0, 0.4, 0.6, 0.9)?;
    let mu = 1.0 + p.gamma();
    let rec = run(&origin_coeffs(&p, mu)?, 8)?;
    let closed = closed_form_origin(&p, mu, 8)?;
    for (n, (x, y)) in rec.values.iter().zip(&closed.values).enumerate() {
        println!("a_{n}: recurrence {x:.12}  closed form {y:.12}");
    }
    let near0 = beta_expansion(&p, BetaVariant::TwoTermZ2, mu, c(1e-6))?.u;
    println!(
        "u(1e-6) = {near0:.12}, (1+gamma)/(alpha beta) = {:.12}",
        value_at_origin_two_term(&p)?
    );
    println!(
        "u(1)    = {:.10}, Gamma ratio = {:.10}",
        two_term_value_at_one(&p)?,
        value_at_one_two_term(&p)?
    );
    for z in [c(0.4), Complex::new(0.2, 0.5)] {
        println!("2F1 basis at {z}: {:.12}", eval_symmetric_z2(&p, c(1.0), c(0.0), z)?);
    }
    Ok(())
}
