//! a = e^{iπ/3}, q = αβ(1+a)/3, γ = δ = ε: closed-form solutions in the
//! cube of (1 + a - 3z), and the branch of a^{3/2} that makes them work.

use heun_appell::closed_forms::{maier_argument, maier_branch, ClosedFormFamily, ClosedFormSolution};
use heun_appell::heun_model::cbrt_minus_one;
use heun_appell::{c, Complex, HeunParams};

fn main() -> heun_appell::Result<()> {
    let (al, be) = (1.2, 0.7);
    let a = cbrt_minus_one();
    let g = (1.0 + al + be) / 3.0;
    let p = HeunParams::new(a, al * be * (1.0 + a) / 3.0, c(al), c(be), c(g), c(g))?;
    let branch = maier_branch(&p)?;
    println!("{p}\nbranch of a^(3/2): {branch:?}");
    let z0 = p.z0().expect("alpha beta != 0");
    for (c1, c2) in [(c(1.0), c(0.0)), (c(0.0), c(1.0)), (c(0.5), Complex::new(0.0, 2.0))] {
        let sol = ClosedFormSolution::new(&p, ClosedFormFamily::MaierCube, c1, c2)?;
        for dz in [Complex::new(0.05, 0.02), Complex::new(-0.1, 0.08)] {
            let z = z0 + dz;
            println!(
                "c = ({c1}, {c2}) z = {z:.4}: w = {:.4}  u = {:.10}  residual {:.1e}",
                maier_argument(&p, branch, z),
                sol.eval(z)?,
                sol.residual(z)?
            );
        }
    }
    Ok(())
}
