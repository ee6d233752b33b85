//! Reduction tags and convergence radii for a handful of parameter sets.

use heun_appell::heun_model::{cbrt_minus_one, classify, CLASSIFY_TOL};
use heun_appell::recurrences::{radius_origin, radius_z0};
use heun_appell::{c, HeunParams};

fn main() -> heun_appell::Result<()> {
    let a = cbrt_minus_one();
    let g = (1.0 + 1.2 + 0.7) / 3.0;
    let sets = [
        ("generic", HeunParams::real(3.0, 0.5, 1.2, 0.7, 0.8, 0.6)?),
        ("eps = 0", HeunParams::real(3.0, 0.5, 1.2, 0.7, 0.8, 2.1)?),
        ("two-term", HeunParams::real(-1.0, 0.0, 1.0, 0.4, 0.6, 0.9)?),
        ("lerch", HeunParams::real(3.0, 0.5, 1.2, 0.7, 2.9, 1.0)?),
        (
            "cubic",
            HeunParams::new(a, 1.2 * 0.7 * (1.0 + a) / 3.0, c(1.2), c(0.7), c(g), c(g))?,
        ),
    ];
    for (name, p) in sets {
        let tags: Vec<String> = classify(&p, CLASSIFY_TOL).iter().map(|t| t.to_string()).collect();
        println!("{name:>9}: {}", tags.join(", "));
        let r = radius_origin(&p);
        print!("           radius at 0: {:.6}", r.radius);
        match radius_z0(&p) {
            Ok(r) => println!(", at q/(alpha beta): {:.6}", r.radius),
            Err(e) => println!(", at q/(alpha beta): n/a ({e})"),
        }
    }
    Ok(())
}
