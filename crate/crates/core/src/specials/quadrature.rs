//! Adaptive Gauss–Legendre quadrature of complex-valued integrands.

use std::sync::OnceLock;

use crate::{Complex, HeunError, Result};

const NODES: usize = 64;
const MAX_DEPTH: u32 = 40;

fn legendre_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = NODES;
        let mut x = vec![0.0; n];
        let mut w = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, t);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * t * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
                let dt = p1 / dp;
                t -= dt;
                if dt.abs() < 1e-16 {
                    break;
                }
            }
            x[i] = -t;
            x[n - 1 - i] = t;
            let wi = 2.0 / ((1.0 - t * t) * dp * dp);
            w[i] = wi;
            w[n - 1 - i] = wi;
        }
        (x, w)
    })
}

fn panel<F: Fn(f64) -> Complex>(f: &F, a: f64, b: f64) -> Complex {
    let (x, w) = legendre_rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    x.iter()
        .zip(w)
        .map(|(&xi, &wi)| f(mid + half * xi) * wi)
        .sum::<Complex>()
        * half
}

fn adapt<F: Fn(f64) -> Complex>(
    f: &F,
    a: f64,
    b: f64,
    whole: Complex,
    tol: f64,
    scale: f64,
    depth: u32,
) -> Result<Complex> {
    let m = 0.5 * (a + b);
    let left = panel(f, a, m);
    let right = panel(f, m, b);
    let split = left + right;
    if (split - whole).norm() <= tol * scale.max(split.norm()) {
        return Ok(split);
    }
    if depth >= MAX_DEPTH {
        return Err(HeunError::NonConvergence {
            what: "quadrature",
            terms: depth as usize,
        });
    }
    Ok(adapt(f, a, m, left, tol, scale, depth + 1)? + adapt(f, m, b, right, tol, scale, depth + 1)?)
}

/// ∫_a^b f(t) dt over a real interval, 64-point panels bisected until the
/// panel estimate and the sum of its halves agree to `tol` (relative).
pub fn integrate<F: Fn(f64) -> Complex>(f: F, a: f64, b: f64, tol: f64) -> Result<Complex> {
    if a == b {
        return Ok(Complex::new(0.0, 0.0));
    }
    let whole = panel(&f, a, b);
    if !(whole.re.is_finite() && whole.im.is_finite()) {
        return Err(HeunError::NonFinite("quadrature"));
    }
    adapt(&f, a, b, whole, tol, whole.norm(), 0)
}

/// ∫ f(z) dz along the straight segment from `z0` to `z1`.
pub fn integrate_segment<F: Fn(Complex) -> Complex>(f: F, z0: Complex, z1: Complex, tol: f64) -> Result<Complex> {
    let d = z1 - z0;
    Ok(integrate(|t| f(z0 + d * t), 0.0, 1.0, tol)? * d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;

    #[test]
    fn weights_sum_to_two_and_nodes_are_symmetric() {
        let (x, w) = legendre_rule();
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        for i in 0..NODES {
            assert!((x[i] + x[NODES - 1 - i]).abs() < 1e-15);
        }
    }

    #[test]
    fn polynomials_are_exact() {
        let v = integrate(|t| c(t.powi(9) - 3.0 * t * t), -1.0, 2.0, 1e-14).unwrap();
        let exact = (2f64.powi(10) - 1.0) / 10.0 - (8.0 + 1.0);
        assert!((v.re - exact).abs() < 1e-12);
    }

    #[test]
    fn smooth_and_peaked_integrands() {
        let v = integrate(|t| c(t.exp()), 0.0, 1.0, 1e-14).unwrap();
        assert!((v.re - (1f64.exp() - 1.0)).abs() < 1e-14);
        let v = integrate(|t| c(1.0 / (1e-4 + t * t)), -1.0, 1.0, 1e-13).unwrap();
        let exact = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!((v.re - exact).abs() / exact < 1e-12);
    }

    #[test]
    fn complex_segment() {
        // ∫ 1/z dz from 1 to i along the chord equals iπ/2
        let v = integrate_segment(|z| z.inv(), c(1.0), Complex::new(0.0, 1.0), 1e-14).unwrap();
        assert!((v - Complex::new(0.0, std::f64::consts::FRAC_PI_2)).norm() < 1e-14);
    }
}
