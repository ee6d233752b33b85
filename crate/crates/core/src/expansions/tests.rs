use super::*;
use crate::c;
use crate::ode_oracle::finite_difference_residual;
use crate::specials::gauss_2f1;

fn generic() -> HeunParams {
    HeunParams::real(3.0, 0.5, 1.2, 0.7, 0.8, 0.6).unwrap()
}

fn one_a() -> HeunParams {
    HeunParams::real(-1.2, 2.0 * 1.2 * 0.7, 1.2, 0.7, 0.8, 0.6).unwrap()
}

fn eps_zero_z0() -> HeunParams {
    let (al, be, g) = (1.2, 0.7, 0.8);
    HeunParams::real(3.0, 0.3 * al * be, al, be, g, 1.0 + al + be - g).unwrap()
}

fn rel(x: Complex, y: Complex) -> f64 {
    (x - y).norm() / y.norm().max(1e-300)
}

#[test]
fn derivatives_match_finite_differences_of_the_terms() {
    let cases = [
        (
            generic(),
            ExpansionSpec::new(Center::Origin, c(0.8)),
            Complex::new(0.3, 0.1),
        ),
        (
            generic(),
            ExpansionSpec::new(Center::Infinity, c(-1.2)),
            Complex::new(0.3, 0.1),
        ),
        (one_a(), ExpansionSpec::new(Center::One, c(0.0)), Complex::new(0.6, 0.1)),
        (one_a(), ExpansionSpec::new(Center::A, c(1.5)), Complex::new(-0.8, -0.2)),
        (
            eps_zero_z0(),
            ExpansionSpec::new(Center::Z0, c(2.0)),
            Complex::new(0.32, 0.05),
        ),
    ];
    let h = 1e-5;
    for (p, spec, z) in cases {
        for n in [0, 3] {
            let f = |w| expansion_function(&p, &spec, n, w).unwrap();
            let fd1 = (f(z - 2.0 * h) - 8.0 * f(z - h) + 8.0 * f(z + h) - f(z + 2.0 * h)) / (12.0 * h);
            let fd2 = (f(z + h) - 2.0 * f(z) + f(z - h)) / (h * h);
            let (d1, d2) = expansion_derivatives(&p, &spec, n, z).unwrap();
            assert!(rel(fd1, d1) < 1e-9, "{:?} n={n}: {fd1} vs {d1}", spec.center);
            assert!(rel(fd2, d2) < 1e-4, "{:?} n={n}: {fd2} vs {d2}", spec.center);
        }
    }
}

#[test]
fn terms_at_one_and_a_start_at_their_center() {
    // u_n ~ (z - center)^k with k = n + μ + 1 - (δ or ε)
    let p = one_a();
    let h = Complex::new(1e-4, 1e-4);
    for (center, at, k) in [
        (Center::One, c(1.0), 3.0 - p.delta()),
        (Center::A, p.a(), 3.0 - p.epsilon()),
    ] {
        let spec = ExpansionSpec::new(center, c(0.0));
        let u1 = expansion_function(&p, &spec, 2, at + h).unwrap();
        let u2 = expansion_function(&p, &spec, 2, at + 2.0 * h).unwrap();
        assert!(
            ((u2 / u1).norm().log2() - k.re).abs() < 1e-3,
            "{center:?}: {}",
            (u2 / u1).norm().log2()
        );
    }
}

#[test]
fn integration_constant_at_the_origin() {
    let p = generic();
    // μ = γ: only u_0 contributes a constant term at z = 0
    let sol = build_solution(&p, &ExpansionSpec::new(Center::Origin, p.gamma()), 80).unwrap();
    let expected = p.a() * p.gamma() * weight_constant(&p) / p.q();
    assert!(rel(sol.c0, expected) < 1e-10, "{} vs {expected}", sol.c0);
    // μ = 0: no term is constant at z = 0
    let sol = build_solution(&p, &ExpansionSpec::new(Center::Origin, c(0.0)), 80).unwrap();
    assert!(sol.c0.norm() < 1e-10, "{}", sol.c0);
}

#[test]
fn gauss_case_is_proportional_to_2f1() {
    // ε = 0, q = aαβ: the μ = γ solution at the origin is C₀ ₂F₁(α, β; γ; z)
    let (al, be, g) = (1.2, 0.7, 0.8);
    let p = HeunParams::real(3.0, 3.0 * al * be, al, be, g, 1.0 + al + be - g).unwrap();
    let spec = ExpansionSpec::new(Center::Origin, p.gamma());
    for z in [c(0.3), Complex::new(0.2, 0.25), Complex::new(-0.4, -0.3)] {
        let s = sum_expansion(&p, &spec, z).unwrap();
        let f = gauss_2f1(c(al), c(be), c(g), z, 1e-16).unwrap();
        assert!(rel(s.u, s.c0 * f) < 1e-10, "{} vs {}", s.u, s.c0 * f);
    }
}

#[test]
fn z0_terms_differ_from_the_appell_form_by_a_constant() {
    use crate::specials::{appell_f1_auto, cpow, minus_one_pow, F1Params};
    let p = eps_zero_z0();
    let (g, d) = (p.gamma(), p.delta());
    let z0 = p.z0().unwrap();
    let spec = ExpansionSpec::new(Center::Z0, c(2.0));
    for n in [0, 4] {
        let m = n as i32 + 2;
        let appell = |z: Complex| {
            let f = appell_f1_auto(
                &F1Params::new(1.0 - g, d, c(-(m as f64)), 2.0 - g).unwrap(),
                z,
                z / z0,
                1e-17,
            )
            .unwrap();
            minus_one_pow(-d) * (-z0).powi(m) * cpow(z, 1.0 - g) / (1.0 - g) * f
        };
        let (z1, z2) = (z0 + Complex::new(0.1, 0.05), z0 + Complex::new(-0.08, 0.1));
        let local = expansion_function(&p, &spec, n, z1).unwrap() - expansion_function(&p, &spec, n, z2).unwrap();
        assert!(rel(local, appell(z1) - appell(z2)) < 1e-9, "n = {n}");
    }
}

#[test]
fn a_expansion_is_continuous_across_the_negative_axis() {
    let p = one_a();
    let sol = build_solution(&p, &ExpansionSpec::new(Center::A, c(0.0)), 60).unwrap();
    let above = sol.eval(Complex::new(-0.7, 1e-9)).unwrap();
    let below = sol.eval(Complex::new(-0.7, -1e-9)).unwrap();
    assert!(rel(above, below) < 1e-8, "{above} vs {below}");
}

#[test]
fn combination_at_z0_solves_the_equation() {
    // ε = -1: δ = 2 + α + β - γ
    let (al, be, g) = (1.2, 0.7, 0.8);
    let p = HeunParams::real(3.0, 0.3 * al * be, al, be, g, 2.0 + al + be - g).unwrap();
    let z0 = p.z0().unwrap();
    for dz in [Complex::new(0.05, 0.02), Complex::new(-0.04, 0.05)] {
        let r = finite_difference_residual(&p, |w| Ok(combo_expansion_eps_minus1(&p, w)?.u), z0 + dz, 0.01).unwrap();
        assert!(r < 1e-7, "{r}");
    }
}

#[test]
fn lerch_expansion_solves_the_equation() {
    let (al, be) = (1.2, 0.7);
    let p = HeunParams::real(3.0, 0.5, al, be, 1.0 + al + be, 1.0).unwrap();
    for mu in [c(0.0), p.gamma()] {
        let r = finite_difference_residual(&p, |w| Ok(lerch_expansion(&p, mu, w)?.u), Complex::new(0.2, 0.1), 0.01)
            .unwrap();
        assert!(r < 1e-7, "mu = {mu}: {r}");
    }
}

#[test]
fn domain_errors() {
    let p = generic();
    assert!(matches!(
        expansion_function(&p, &ExpansionSpec::new(Center::Z0, c(0.0)), 0, c(0.1)),
        Err(HeunError::Exponent(_))
    ));
    // radius at the origin is 1 here
    assert!(sum_expansion(&p, &ExpansionSpec::new(Center::Origin, c(0.0)), c(0.99)).is_err());
    // the series at infinity is only summed when it terminates
    assert!(sum_expansion(&p, &ExpansionSpec::new(Center::Infinity, -p.alpha()), c(5.0)).is_err());
    assert!(beta_expansion(&p, BetaVariant::SymmetricZ2, c(0.0), c(0.3)).is_err());
}
