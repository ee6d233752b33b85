//! Exact solutions in two special regimes and special values of the
//! two-term solution at `z = 0` and `z = 1`.
//!
//! * `a = -1`, `q = 0`, `δ = ε`: the equation reduces to a Gauss equation
//!   in `z²`, with solutions `₂F₁(α/2, β/2; (1+γ)/2; z²)` and
//!   `z^{1-γ} ₂F₁(δ-α/2, δ-β/2; (3-γ)/2; z²)`.
//! * `a = e^{±iπ/3}`, `q = αβ(1+a)/3`, `γ = δ = ε`: a Gauss equation in
//!   `w = -a^{3/2}(1+a-3z)³/(3√3)`.

use crate::heun_model::{classify, CLASSIFY_TOL};
use crate::ode_oracle::heun_polys;
use crate::specials::{cpow, gamma, gauss_2f1};
use crate::{Complex, HeunError, HeunParams, ReductionClass, Result};

const TOL: f64 = 1e-16;

/// Which closed form a [`ClosedFormSolution`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum ClosedFormFamily {
    SymmetricZ2,
    MaierCube,
}

/// Branch of `a^{3/2}` in the cubic-regime argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum MaierBranch {
    /// `exp(3/2 Log a)`.
    Principal,
    /// `-exp(3/2 Log a)`.
    Opposite,
}

/// `c1 y1 + c2 y2` for one of the two closed-form families.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ClosedFormSolution {
    pub c1: Complex,
    pub c2: Complex,
    pub family: ClosedFormFamily,
    pub params: HeunParams,
    /// The branch of `a^{3/2}` (cubic family only).
    pub branch: Option<MaierBranch>,
}

impl ClosedFormSolution {
    pub fn new(p: &HeunParams, family: ClosedFormFamily, c1: Complex, c2: Complex) -> Result<Self> {
        let branch = match family {
            ClosedFormFamily::SymmetricZ2 => {
                check_symmetric(p)?;
                None
            }
            ClosedFormFamily::MaierCube => Some(maier_branch(p)?),
        };
        Ok(ClosedFormSolution {
            c1,
            c2,
            family,
            params: *p,
            branch,
        })
    }

    pub fn eval(&self, z: Complex) -> Result<Complex> {
        Ok(self.eval_with_derivatives(z)?.0)
    }

    /// `(u, u', u'')` in closed form.
    pub fn eval_with_derivatives(&self, z: Complex) -> Result<(Complex, Complex, Complex)> {
        let (y1, y2) = match self.family {
            ClosedFormFamily::SymmetricZ2 => symmetric_basis(&self.params, z)?,
            ClosedFormFamily::MaierCube => maier_basis(&self.params, self.branch.unwrap_or(MaierBranch::Principal), z)?,
        };
        let (c1, c2) = (self.c1, self.c2);
        Ok((c1 * y1.0 + c2 * y2.0, c1 * y1.1 + c2 * y2.1, c1 * y1.2 + c2 * y2.2))
    }

    /// `|P2 u'' + P1 u' + P0 u|` relative to its largest term.
    pub fn residual(&self, z: Complex) -> Result<f64> {
        let (u, du, ddu) = self.eval_with_derivatives(z)?;
        Ok(relative_residual(&self.params, z, u, du, ddu))
    }
}

fn relative_residual(p: &HeunParams, z: Complex, u: Complex, du: Complex, ddu: Complex) -> f64 {
    let (p2, p1, p0) = heun_polys(p, z);
    // normwise scale: stays nonzero where all three terms vanish together
    let scale = (p2.norm() + p1.norm() + p0.norm()) * (u.norm() + du.norm() + ddu.norm());
    if scale == 0.0 {
        0.0
    } else {
        (p2 * ddu + p1 * du + p0 * u).norm() / scale
    }
}

type Jet = (Complex, Complex, Complex);

/// `(F, F', F'')` of `₂F₁(a, b; c; w)` in `w`.
fn gauss_jet(a: Complex, b: Complex, c: Complex, w: Complex) -> Result<Jet> {
    let f = gauss_2f1(a, b, c, w, TOL)?;
    let f1 = a * b / c * gauss_2f1(a + 1.0, b + 1.0, c + 1.0, w, TOL)?;
    let f2 = a * (a + 1.0) * b * (b + 1.0) / (c * (c + 1.0)) * gauss_2f1(a + 2.0, b + 2.0, c + 2.0, w, TOL)?;
    Ok((f, f1, f2))
}

/// Chain rule for `F(w(z))`.
fn compose(f: Jet, w1: Complex, w2: Complex) -> Jet {
    (f.0, f.1 * w1, f.2 * w1 * w1 + f.1 * w2)
}

/// Product rule for `h(z) g(z)`.
fn product(h: Jet, g: Jet) -> Jet {
    (
        h.0 * g.0,
        h.1 * g.0 + h.0 * g.1,
        h.2 * g.0 + 2.0 * h.1 * g.1 + h.0 * g.2,
    )
}

fn check_symmetric(p: &HeunParams) -> Result<()> {
    if !classify(p, CLASSIFY_TOL).contains(&ReductionClass::TwoTermOrigin) {
        return Err(HeunError::Regime(format!(
            "the z^2 closed form needs a = -1, q = 0, delta = epsilon; got {p}"
        )));
    }
    Ok(())
}

fn symmetric_basis(p: &HeunParams, z: Complex) -> Result<(Jet, Jet)> {
    let w = z * z;
    if w.norm() >= 1.0 {
        return Err(HeunError::Domain(format!("|z| = {} >= 1", z.norm())));
    }
    let (al, be, g, d) = (p.alpha(), p.beta(), p.gamma(), p.delta());
    let one = Complex::new(1.0, 0.0);
    let (w1, w2) = (2.0 * z, Complex::new(2.0, 0.0));
    let y1 = compose(gauss_jet(al / 2.0, be / 2.0, (one + g) / 2.0, w)?, w1, w2);
    let g2 = compose(gauss_jet(d - al / 2.0, d - be / 2.0, (3.0 - g) / 2.0, w)?, w1, w2);
    let s = one - g;
    let h = cpow(z, s);
    let hz = (h, s * h / z, s * (s - 1.0) * h / (z * z));
    Ok((y1, product(hz, g2)))
}

/// `c1 ₂F₁(α/2, β/2; (1+γ)/2; z²) + c2 z^{1-γ} ₂F₁(δ-α/2, δ-β/2; (3-γ)/2; z²)`
/// for `a = -1`, `q = 0`, `δ = ε`, `|z| < 1`.
pub fn eval_symmetric_z2(p: &HeunParams, c1: Complex, c2: Complex, z: Complex) -> Result<Complex> {
    ClosedFormSolution::new(p, ClosedFormFamily::SymmetricZ2, c1, c2)?.eval(z)
}

fn check_maier(p: &HeunParams) -> Result<()> {
    if !classify(p, CLASSIFY_TOL).contains(&ReductionClass::MaierCase) {
        return Err(HeunError::Regime(format!(
            "the cubic closed form needs a = exp(+-i pi/3), q = alpha beta (1+a)/3, gamma = delta = epsilon; got {p}"
        )));
    }
    Ok(())
}

fn maier_k(p: &HeunParams, branch: MaierBranch) -> Complex {
    let s = cpow(p.a(), Complex::new(1.5, 0.0));
    let s = if branch == MaierBranch::Principal { s } else { -s };
    -s / (3.0 * 3f64.sqrt())
}

/// `w = -a^{3/2}(1+a-3z)³/(3√3)` on the given branch.
pub fn maier_argument(p: &HeunParams, branch: MaierBranch, z: Complex) -> Complex {
    let l = 1.0 + p.a() - 3.0 * z;
    maier_k(p, branch) * l * l * l
}

fn maier_basis(p: &HeunParams, branch: MaierBranch, z: Complex) -> Result<(Jet, Jet)> {
    let k = maier_k(p, branch);
    let l = 1.0 + p.a() - 3.0 * z;
    let w = k * l * l * l;
    if w.norm() >= 1.0 {
        return Err(HeunError::Domain(format!("|w| = {} >= 1 at z = {z}", w.norm())));
    }
    let (w1, w2) = (-9.0 * k * l * l, 54.0 * k * l);
    let (al, be) = (p.alpha(), p.beta());
    let third = |x: Complex| x / 3.0;
    let y1 = compose(
        gauss_jet(third(al), third(be), Complex::new(2.0 / 3.0, 0.0), w)?,
        w1,
        w2,
    );
    let g2 = compose(
        gauss_jet(third(1.0 + al), third(1.0 + be), Complex::new(4.0 / 3.0, 0.0), w)?,
        w1,
        w2,
    );
    let lz = (l, Complex::new(-3.0, 0.0), Complex::new(0.0, 0.0));
    Ok((y1, product(lz, g2)))
}

/// Residual threshold that decides the branch of `a^{3/2}`.
const BRANCH_ACCEPT: f64 = 1e-8;

/// The branch of `a^{3/2}` for which both closed-form solutions satisfy the
/// equation at two sample points next to `z₀ = (1+a)/3`: the principal
/// branch if it passes, otherwise the opposite one.
pub fn maier_branch(p: &HeunParams) -> Result<MaierBranch> {
    check_maier(p)?;
    let z0 = (1.0 + p.a()) / 3.0;
    let samples = [z0 + Complex::new(0.05, 0.02), z0 + Complex::new(-0.03, 0.04)];
    let mut worst = [0.0f64; 2];
    for (i, branch) in [MaierBranch::Principal, MaierBranch::Opposite].into_iter().enumerate() {
        for &z in &samples {
            let (y1, y2) = maier_basis(p, branch, z)?;
            for y in [y1, y2] {
                worst[i] = worst[i].max(relative_residual(p, z, y.0, y.1, y.2));
            }
        }
        if worst[i] < BRANCH_ACCEPT {
            return Ok(branch);
        }
    }
    Err(HeunError::Regime(format!(
        "neither branch of a^(3/2) satisfies the equation (residuals {:.2e}, {:.2e})",
        worst[0], worst[1]
    )))
}

/// `c1 ₂F₁(α/3, β/3; 2/3; w) + c2 (1+a-3z) ₂F₁((1+α)/3, (1+β)/3; 4/3; w)`
/// with `w = -a^{3/2}(1+a-3z)³/(3√3)`, branch from [`maier_branch`].
pub fn eval_maier(p: &HeunParams, c1: Complex, c2: Complex, z: Complex) -> Result<Complex> {
    ClosedFormSolution::new(p, ClosedFormFamily::MaierCube, c1, c2)?.eval(z)
}

/// `(1+γ)/(αβ)`, the value at `z = 0` of the two-term solution with
/// `μ = 1+γ`.
pub fn value_at_origin_two_term(p: &HeunParams) -> Result<Complex> {
    check_symmetric(p)?;
    if p.ab().norm() < CLASSIFY_TOL {
        return Err(HeunError::Regime("alpha*beta = 0".into()));
    }
    Ok((1.0 + p.gamma()) / p.ab())
}

/// `(1+γ)/(αβ) · Γ((1+γ)/2) Γ(1-δ) / [Γ((1+γ-α)/2) Γ((1+γ-β)/2)]`, the
/// value at `z = 1` of the same solution.
pub fn value_at_one_two_term(p: &HeunParams) -> Result<Complex> {
    let v0 = value_at_origin_two_term(p)?;
    let g = p.gamma();
    let num = gamma((1.0 + g) / 2.0)? * gamma(1.0 - p.delta())?;
    let den = gamma((1.0 + g - p.alpha()) / 2.0)? * gamma((1.0 + g - p.beta()) / 2.0)?;
    Ok(v0 * num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use crate::heun_model::cbrt_minus_one;

    fn symmetric() -> HeunParams {
        let (al, be, g) = (1.0, 0.4, 0.6);
        HeunParams::real(-1.0, 0.0, al, be, g, (1.0 + al + be - g) / 2.0).unwrap()
    }

    fn maier(al: f64, be: f64) -> HeunParams {
        let a = cbrt_minus_one();
        let g = (1.0 + al + be) / 3.0;
        HeunParams::new(a, al * be * (1.0 + a) / 3.0, c(al), c(be), c(g), c(g)).unwrap()
    }

    #[test]
    fn origin_value_recorded() {
        let p = HeunParams::real(-1.0, 0.0, 1.2, 0.8, 0.5, (1.0 + 2.0 - 0.5) / 2.0).unwrap();
        assert!((value_at_origin_two_term(&p).unwrap() - 1.5625).norm() < 1e-14);
        let p = HeunParams::real(-1.0, 0.0, 2.0, 1.0, 1.0, 1.5).unwrap();
        assert!((value_at_origin_two_term(&p).unwrap() - 1.0).norm() < 1e-14);
    }

    #[test]
    fn symmetric_at_origin_is_c1() {
        let p = symmetric();
        assert!((eval_symmetric_z2(&p, c(1.0), c(0.0), c(0.0)).unwrap() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn symmetric_residual_and_wronskian() {
        let p = symmetric();
        for z in [c(0.2), Complex::new(0.0, 0.4), Complex::new(0.3, 0.3)] {
            for (c1, c2) in [(c(1.0), c(0.0)), (c(0.0), c(1.0))] {
                let s = ClosedFormSolution::new(&p, ClosedFormFamily::SymmetricZ2, c1, c2).unwrap();
                assert!(s.residual(z).unwrap() < 1e-9, "z = {z}");
            }
        }
        let y1 = ClosedFormSolution::new(&p, ClosedFormFamily::SymmetricZ2, c(1.0), c(0.0)).unwrap();
        let y2 = ClosedFormSolution::new(&p, ClosedFormFamily::SymmetricZ2, c(0.0), c(1.0)).unwrap();
        let (a, da, _) = y1.eval_with_derivatives(c(0.5)).unwrap();
        let (b, db, _) = y2.eval_with_derivatives(c(0.5)).unwrap();
        assert!((a * db - b * da).norm() > 1e-3);
    }

    #[test]
    fn maier_uses_principal_branch() {
        for (al, be) in [(1.2, 0.7), (0.5, 2.1), (-0.4, 1.3)] {
            let p = maier(al, be);
            assert_eq!(maier_branch(&p).unwrap(), MaierBranch::Principal);
        }
    }

    #[test]
    fn maier_second_term_vanishes_at_z0() {
        let p = maier(1.2, 0.7);
        let z0 = (1.0 + p.a()) / 3.0;
        assert!((eval_maier(&p, c(2.5), c(7.0), z0).unwrap() - 2.5).norm() < 1e-14);
    }

    #[test]
    fn maier_residual_on_segment() {
        let p = maier(1.2, 0.7);
        let z0 = (1.0 + p.a()) / 3.0;
        for k in 0..6 {
            let z = z0 + Complex::new(-0.1, 0.05) + Complex::new(0.04, 0.01) * k as f64;
            let s = ClosedFormSolution::new(&p, ClosedFormFamily::MaierCube, c(1.0), Complex::new(0.3, -0.2)).unwrap();
            assert!(s.residual(z).unwrap() < 1e-8, "z = {z}");
        }
    }

    #[test]
    fn regimes_are_enforced() {
        let p = HeunParams::real(3.0, 0.5, 1.2, 0.7, 0.8, 0.6).unwrap();
        assert!(matches!(
            eval_symmetric_z2(&p, c(1.0), c(0.0), c(0.1)),
            Err(HeunError::Regime(_))
        ));
        assert!(matches!(
            eval_maier(&p, c(1.0), c(0.0), c(0.1)),
            Err(HeunError::Regime(_))
        ));
        assert!(matches!(value_at_one_two_term(&p), Err(HeunError::Regime(_))));
    }
}
