use super::{beta, cpow, ensure_finite, is_nonpositive_integer, TailRule, MAX_TERMS};
use crate::{Complex, HeunError, Result};

/// Generic `pFq` partial sums with the shared stopping rule.
///
/// Converges for `|z| < 1`, or for any `z` when an upper parameter is a
/// non-positive integer (the series is then a polynomial).
fn hyper_series(name: &'static str, upper: &[Complex], lower: &[Complex], z: Complex, tol: f64) -> Result<Complex> {
    ensure_finite(name, upper)?;
    ensure_finite(name, lower)?;
    ensure_finite(name, &[z])?;
    let polynomial = upper.iter().any(|&u| is_nonpositive_integer(u));
    if !polynomial && z.norm() >= 1.0 {
        return Err(HeunError::Domain(format!("{name}: |z| = {} >= 1", z.norm())));
    }
    let one = Complex::new(1.0, 0.0);
    let mut term = one;
    let mut sum = one;
    let mut rule = TailRule::new(tol);
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let mut num = z;
        for &u in upper {
            num *= u + nf;
        }
        let mut den = Complex::new(nf + 1.0, 0.0);
        for &l in lower {
            let d = l + nf;
            if d.norm() < 1e-14 {
                return Err(HeunError::Pole(format!("{name}: lower parameter {l}")));
            }
            den *= d;
        }
        term *= num / den;
        sum += term;
        if term.norm() == 0.0 && polynomial {
            return Ok(sum);
        }
        if rule.push(term, sum) {
            return Ok(sum);
        }
    }
    Err(HeunError::NonConvergence {
        what: name,
        terms: MAX_TERMS,
    })
}

/// Gauss hypergeometric function ₂F₁(a, b; c; z).
///
/// For `|z| > 0.9` the Pfaff transform
/// `₂F₁(a,b;c;z) = (1-z)^{-a} ₂F₁(a, c-b; c; z/(z-1))` is used whenever it
/// shrinks the argument.
pub fn gauss_2f1(a: Complex, b: Complex, c: Complex, z: Complex, tol: f64) -> Result<Complex> {
    if is_nonpositive_integer(c)
        && !(is_nonpositive_integer(a) && a.re > c.re)
        && !(is_nonpositive_integer(b) && b.re > c.re)
    {
        return Err(HeunError::Pole(format!("2F1: c = {c}")));
    }
    let polynomial = is_nonpositive_integer(a) || is_nonpositive_integer(b);
    if !polynomial && z.norm() > 0.9 {
        let w = z / (z - 1.0);
        if w.norm() < z.norm() {
            let f = hyper_series("gauss_2f1", &[a, c - b], &[c], w, tol)?;
            return Ok(cpow(1.0 - z, -a) * f);
        }
    }
    hyper_series("gauss_2f1", &[a, b], &[c], z, tol)
}

/// Clausen ₃F₂(a1, a2, a3; b1, b2; z).
pub fn clausen_3f2(
    a1: Complex,
    a2: Complex,
    a3: Complex,
    b1: Complex,
    b2: Complex,
    z: Complex,
    tol: f64,
) -> Result<Complex> {
    hyper_series("clausen_3f2", &[a1, a2, a3], &[b1, b2], z, tol)
}

/// Lerch transcendent Φ(z, s, α) = Σ_{k≥0} z^k / (k + α)^s, principal powers.
pub fn lerch_phi(z: Complex, s: Complex, alpha: Complex, tol: f64) -> Result<Complex> {
    ensure_finite("lerch_phi", &[z, s, alpha])?;
    if is_nonpositive_integer(alpha) {
        return Err(HeunError::Pole(format!("lerch_phi: alpha = {alpha}")));
    }
    if z.norm() >= 1.0 {
        return Err(HeunError::Domain(format!("lerch_phi: |z| = {} >= 1", z.norm())));
    }
    let mut zk = Complex::new(1.0, 0.0);
    let mut sum = Complex::new(0.0, 0.0);
    let mut rule = TailRule::new(tol);
    for k in 0..MAX_TERMS {
        let term = zk * cpow(alpha + k as f64, -s);
        sum += term;
        if rule.push(term, sum) || z.norm() == 0.0 {
            return Ok(sum);
        }
        zk *= z;
    }
    Err(HeunError::NonConvergence {
        what: "lerch_phi",
        terms: MAX_TERMS,
    })
}

/// Incomplete Beta function B(p, q; z) = ∫₀^z t^{p-1} (1-t)^{q-1} dt.
///
/// Evaluated as `z^p/p · ₂F₁(p, 1-q; 1+p; z)`. Close to `z = 1` the
/// complement `B(p, q) - B(q, p; 1 - z)` is used instead, and `z = 1`
/// itself returns the complete Beta function when `Re q > 0`.
pub fn incomplete_beta(p: Complex, q: Complex, z: Complex) -> Result<Complex> {
    ensure_finite("incomplete_beta", &[p, q, z])?;
    if is_nonpositive_integer(p) {
        return Err(HeunError::Pole(format!("incomplete_beta: p = {p}")));
    }
    let zero = Complex::new(0.0, 0.0);
    if z == zero {
        return Ok(if p.re > 0.0 { zero } else { cpow(z, p) });
    }
    let one_minus = 1.0 - z;
    let complement_ok = !is_nonpositive_integer(q) && !is_nonpositive_integer(p + q);
    if one_minus.norm() < 1e-15 {
        if q.re > 0.0 && complement_ok {
            return beta(p, q);
        }
        return Err(HeunError::Domain(format!("incomplete_beta at z = 1 with q = {q}")));
    }
    let polynomial = is_nonpositive_integer(1.0 - q);
    let direct_rate = if polynomial {
        0.0
    } else {
        z.norm().min((z / (z - 1.0)).norm())
    };
    let comp_rate = one_minus.norm().min((one_minus / (-z)).norm());
    if complement_ok && direct_rate > 0.5 && comp_rate < direct_rate {
        let tail = cpow(one_minus, q) / q * gauss_2f1(q, 1.0 - p, 1.0 + q, one_minus, super::MACHINE_TOL)?;
        return Ok(beta(p, q)? - tail);
    }
    if direct_rate >= 1.0 {
        return Err(HeunError::Domain(format!("incomplete_beta: z = {z}")));
    }
    Ok(cpow(z, p) / p * gauss_2f1(p, 1.0 - q, 1.0 + p, z, super::MACHINE_TOL)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use crate::specials::quadrature::integrate;

    const TOL: f64 = 1e-16;

    fn brute_2f1(a: f64, b: f64, cc: f64, z: f64) -> f64 {
        let mut t = 1.0;
        let mut s = 1.0;
        for n in 0..5000 {
            let nf = n as f64;
            t *= (a + nf) * (b + nf) / ((cc + nf) * (nf + 1.0)) * z;
            s += t;
        }
        s
    }

    #[test]
    fn gauss_trivial_values() {
        let a = Complex::new(0.3, 0.1);
        assert_eq!(gauss_2f1(a, c(2.0), c(1.5), c(0.0), TOL).unwrap(), c(1.0));
        let v = gauss_2f1(c(2.0), c(0.7), c(0.7), c(0.25), TOL).unwrap();
        assert!((v - 16.0 / 9.0).norm() < 1e-14);
    }

    #[test]
    fn gauss_log_value() {
        let v = gauss_2f1(c(1.0), c(1.0), c(2.0), c(0.5), TOL).unwrap();
        let brute = brute_2f1(1.0, 1.0, 2.0, 0.5);
        assert!((v.re - brute).abs() < 1e-14);
        assert!((v.re - 2.0 * 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn gauss_near_unit_circle_uses_pfaff() {
        let z = c(-0.97);
        let v = gauss_2f1(c(1.0), c(1.0), c(2.0), z, TOL).unwrap();
        let exact = -(1.0 - z).ln() / z;
        assert!((v - exact).norm() < 1e-13);
        // argument where the direct series is the only option
        let z = Complex::new(0.95, 0.05);
        let v = gauss_2f1(c(0.5), c(0.5), c(1.5), z * z, TOL).unwrap();
        let exact = z.asin() / z;
        assert!((v - exact).norm() < 1e-11, "{v} {exact}");
    }

    #[test]
    fn gauss_domain_and_poles() {
        assert!(matches!(
            gauss_2f1(c(0.5), c(0.5), c(1.5), c(1.2), TOL),
            Err(HeunError::Domain(_))
        ));
        assert!(matches!(
            gauss_2f1(c(0.5), c(0.5), c(-2.0), c(0.2), TOL),
            Err(HeunError::Pole(_))
        ));
        // terminating series is fine anywhere
        let v = gauss_2f1(c(-2.0), c(1.0), c(1.0), c(3.0), TOL).unwrap();
        assert!((v - 4.0).norm() < 1e-13);
    }

    #[test]
    fn clausen_values() {
        let a = Complex::new(0.2, 0.4);
        assert_eq!(clausen_3f2(a, a, a, c(1.5), c(2.5), c(0.0), TOL).unwrap(), c(1.0));
        let (a1, a2, b1, b2) = (c(0.3), c(1.7), c(2.2), c(0.9));
        let z = Complex::new(0.3, -0.2);
        let lhs = clausen_3f2(a1, a2, b2, b1, b2, z, TOL).unwrap();
        let rhs = gauss_2f1(a1, a2, b1, z, TOL).unwrap();
        assert!((lhs - rhs).norm() < 1e-14);
        // brute-force partial sums
        let mut t = 1.0;
        let mut s = 1.0;
        for n in 0..400 {
            let nf = n as f64;
            t *= (0.5 + nf) * (1.0 + nf) * (1.5 + nf) / ((2.0 + nf) * (2.5 + nf) * (nf + 1.0)) * 0.3;
            s += t;
        }
        let v = clausen_3f2(c(0.5), c(1.0), c(1.5), c(2.0), c(2.5), c(0.3), TOL).unwrap();
        assert!((v.re - s).abs() < 1e-14);
        assert!((v.re - 1.050_674_367_204_625).abs() < 1e-13);
    }

    #[test]
    fn lerch_values() {
        let s = Complex::new(1.3, 0.2);
        let alpha = c(2.5);
        let v = lerch_phi(c(0.0), s, alpha, TOL).unwrap();
        assert!((v - cpow(alpha, -s)).norm() < 1e-15);
        let v = lerch_phi(c(0.5), c(1.0), c(1.0), TOL).unwrap();
        assert!((v.re - 2.0 * 2f64.ln()).abs() < 1e-14);
        let brute: f64 = (0..200).map(|k| 0.3f64.powi(k) / (k as f64 + 2.5)).sum();
        let v = lerch_phi(c(0.3), c(1.0), c(2.5), TOL).unwrap();
        assert!((v.re - brute).abs() < 1e-15);
        assert!(lerch_phi(c(0.3), c(1.0), c(-2.0), TOL).is_err());
        assert!(lerch_phi(c(1.3), c(1.0), c(2.0), TOL).is_err());
    }

    #[test]
    fn incomplete_beta_trivial() {
        let z = Complex::new(0.3, 0.2);
        assert!((incomplete_beta(c(1.0), c(1.0), z).unwrap() - z).norm() < 1e-15);
        assert!((incomplete_beta(c(2.0), c(1.0), c(0.5)).unwrap() - 0.125).norm() < 1e-15);
        assert!(incomplete_beta(c(-1.0), c(1.0), c(0.5)).is_err());
    }

    #[test]
    fn incomplete_beta_against_quadrature() {
        let v = incomplete_beta(c(0.7), c(0.4), c(0.6)).unwrap();
        // substitution t = s^{1/0.7} removes the endpoint singularity
        let m = 1.0 / 0.7;
        let quad = integrate(
            |s| {
                let t = s.powf(m);
                c(m * (1.0 - t).powf(-0.6))
            },
            0.0,
            0.6f64.powf(0.7),
            1e-13,
        )
        .unwrap();
        assert!((v - quad).norm() < 1e-12, "{v} {quad}");
        assert!((v.re - 1.222_598_731_349_845_4).abs() < 1e-12);
    }

    #[test]
    fn incomplete_beta_near_and_at_one() {
        let full = incomplete_beta(c(0.7), c(0.4), c(1.0)).unwrap();
        let b = beta(c(0.7), c(0.4)).unwrap();
        assert!((full - b).norm() < 1e-14);
        let near = incomplete_beta(c(0.7), c(0.4), c(0.999_999)).unwrap();
        let expected = b - (1e-6f64).powf(0.4) / 0.4 * gauss_2f1(c(0.4), c(0.3), c(1.4), c(1e-6), TOL).unwrap();
        assert!((near - expected).norm() < 1e-12);
        // the two routes agree where both converge well
        let z = c(0.72);
        let direct = z.powf(0.7) / 0.7 * gauss_2f1(c(0.7), c(0.6), c(1.7), z, TOL).unwrap();
        let both = incomplete_beta(c(0.7), c(0.4), z).unwrap();
        assert!((direct - both).norm() < 1e-13);
    }

    use proptest::prelude::*;
    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn incomplete_beta_matches_quadrature(p in 0.05f64..3.0, q in 0.05f64..3.0, z in 0.01f64..0.9) {
            let v = incomplete_beta(c(p), c(q), c(z)).unwrap();
            let m = 1.0 / p.min(1.0);
            let quad = integrate(
                |s| {
                    let t = s.powf(m);
                    c(m * s.powf(m * p - 1.0) * (1.0 - t).powf(q - 1.0))
                },
                0.0,
                z.powf(1.0 / m),
                1e-13,
            ).unwrap();
            prop_assert!((v - quad).norm() < 1e-10 * quad.norm().max(1.0), "{} {}", v, quad);
        }
    }
}
