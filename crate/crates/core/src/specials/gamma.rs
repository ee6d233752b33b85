use super::{ensure_finite, is_nonpositive_integer};
use crate::{Complex, HeunError, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k (2k - 1)), k = 1..8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Principal branch of ln Γ(z).
///
/// The argument is shifted up to `Re z >= 15` with the recurrence
/// `ln Γ(z) = ln Γ(z + N) - Σ ln(z + k)` (principal logs, which keeps the
/// result analytic off the negative real axis) and the Stirling series
/// is applied there.
pub fn log_gamma(z: Complex) -> Result<Complex> {
    ensure_finite("log_gamma", &[z])?;
    if is_nonpositive_integer(z) {
        return Err(HeunError::Pole(format!("Gamma has a pole at {z}")));
    }
    let mut w = z;
    let mut shift = Complex::new(0.0, 0.0);
    while w.re < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut corr = Complex::new(0.0, 0.0);
    let mut pw = inv;
    for coef in STIRLING {
        corr += pw * coef;
        pw *= inv2;
    }
    Ok((w - 0.5) * w.ln() - w + HALF_LN_2PI + corr - shift)
}

pub fn gamma(z: Complex) -> Result<Complex> {
    Ok(log_gamma(z)?.exp())
}

/// 1/Γ(z), zero at the poles of Γ.
pub fn rgamma(z: Complex) -> Result<Complex> {
    ensure_finite("rgamma", &[z])?;
    if is_nonpositive_integer(z) {
        return Ok(Complex::new(0.0, 0.0));
    }
    Ok((-log_gamma(z)?).exp())
}

/// Complete Beta function Γ(p)Γ(q)/Γ(p+q).
pub fn beta(p: Complex, q: Complex) -> Result<Complex> {
    if is_nonpositive_integer(p) || is_nonpositive_integer(q) {
        return Err(HeunError::Pole(format!("Beta({p}, {q})")));
    }
    if is_nonpositive_integer(p + q) {
        return Ok(Complex::new(0.0, 0.0));
    }
    Ok((log_gamma(p)? + log_gamma(q)? - log_gamma(p + q)?).exp())
}

/// Rising factorial (x)_n = x (x+1) ... (x+n-1), by direct product.
pub fn pochhammer(x: Complex, n: usize) -> Complex {
    (0..n).fold(Complex::new(1.0, 0.0), |acc, k| acc * (x + k as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;

    #[test]
    fn log_gamma_special_values() {
        assert!(log_gamma(c(1.0)).unwrap().norm() < 1e-15);
        assert!(log_gamma(c(2.0)).unwrap().norm() < 1e-15);
        let half = log_gamma(c(0.5)).unwrap();
        assert!((half.re - std::f64::consts::PI.sqrt().ln()).abs() < 1e-14);
        assert!((half.re - 0.572_364_942_9).abs() < 1e-10);
        let four = log_gamma(c(4.0)).unwrap();
        assert!((four.re - 6f64.ln()).abs() < 1e-14);
        assert!(four.im.abs() < 1e-15);
    }

    #[test]
    fn log_gamma_poles() {
        for z in [0.0, -1.0, -7.0] {
            assert!(matches!(log_gamma(c(z)), Err(HeunError::Pole(_))));
        }
        assert_eq!(rgamma(c(-3.0)).unwrap(), c(0.0));
    }

    #[test]
    fn gamma_matches_factorials_and_reflection() {
        let mut fact = 1.0;
        for n in 1..40 {
            let g = gamma(c(n as f64)).unwrap();
            assert!((g.re / fact - 1.0).abs() < 1e-13, "n = {n}");
            fact *= n as f64;
        }
        // Γ(z)Γ(1-z) = π / sin(πz) at a complex point
        let z = Complex::new(0.3, 1.7);
        let lhs = gamma(z).unwrap() * gamma(1.0 - z).unwrap();
        let rhs = std::f64::consts::PI / (z * std::f64::consts::PI).sin();
        assert!((lhs - rhs).norm() / rhs.norm() < 1e-13);
        // negative real part: Γ(z+1) = zΓ(z)
        let z = Complex::new(-12.4, 3.1);
        let r = gamma(z + 1.0).unwrap() / (z * gamma(z).unwrap());
        assert!((r - 1.0).norm() < 1e-12);
    }

    #[test]
    fn log_gamma_large_argument_is_relatively_accurate() {
        // ln Γ(50) = ln(49!)
        let exact: f64 = (1..50).map(|k| (k as f64).ln()).sum();
        let v = log_gamma(c(50.0)).unwrap();
        assert!((v.re - exact).abs() / exact < 1e-14);
        let z = Complex::new(20.0, 30.0);
        // recurrence consistency
        let d = log_gamma(z + 1.0).unwrap() - log_gamma(z).unwrap() - z.ln();
        assert!(d.norm() < 1e-12);
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(Complex::new(0.3, 0.2), 0), c(1.0));
        assert_eq!(pochhammer(c(1.0), 4), c(24.0));
        assert!((pochhammer(c(0.5), 3) - 1.875).norm() < 1e-15);
    }

    #[test]
    fn beta_values() {
        assert!((beta(c(2.0), c(3.0)).unwrap() - 1.0 / 12.0).norm() < 1e-15);
        assert_eq!(beta(c(0.5), c(-0.5)).unwrap(), c(0.0));
        assert!(beta(c(-1.0), c(0.5)).is_err());
    }

    use proptest::prelude::*;
    proptest! {
        #[test]
        fn pochhammer_splits(re in -5.0f64..5.0, im in -3.0f64..3.0, m in 0usize..12, n in 0usize..12) {
            let x = Complex::new(re, im);
            let whole = pochhammer(x, m + n);
            let split = pochhammer(x, m) * pochhammer(x + m as f64, n);
            prop_assert!((whole - split).norm() <= 1e-13 * whole.norm().max(1.0));
        }
    }
}
