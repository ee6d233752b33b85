//! Right-hand termination of the origin series: finite-sum solutions.

use super::{origin_coeffs, run_raw};
use crate::{Complex, HeunError, HeunParams, Result};

/// Dense complex polynomial, coefficients in ascending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<Complex>);

impl Poly {
    pub fn constant(c: Complex) -> Self {
        Poly(vec![c])
    }

    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|c| c.norm() > 0.0).unwrap_or(0)
    }

    pub fn eval(&self, x: Complex) -> Complex {
        self.0.iter().rev().fold(Complex::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly(vec![Complex::new(0.0, 0.0)]);
        }
        Poly(self.0.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly(
            (0..n)
                .map(|i| self.0.get(i).copied().unwrap_or_default() + other.0.get(i).copied().unwrap_or_default())
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![Complex::new(0.0, 0.0); self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    pub fn scale(&self, s: Complex) -> Poly {
        Poly(self.0.iter().map(|&c| c * s).collect())
    }

    /// All roots by Aberth–Ehrlich iteration, each polished by Newton steps.
    pub fn roots(&self) -> Vec<Complex> {
        let deg = self.degree();
        if deg == 0 {
            return Vec::new();
        }
        let coeffs = &self.0[..=deg];
        let lead = coeffs[deg];
        // Cauchy-type bound for the initial circle
        let bound = 1.0 + coeffs[..deg].iter().map(|c| (c / lead).norm()).fold(0.0, f64::max);
        let mut z: Vec<Complex> = (0..deg)
            .map(|k| Complex::from_polar(bound * 0.5, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / deg as f64))
            .collect();
        let p = Poly(coeffs.to_vec());
        let dp = p.derivative();
        for _ in 0..500 {
            let mut moved: f64 = 0.0;
            for i in 0..deg {
                let ratio = p.eval(z[i]) / dp.eval(z[i]);
                if !ratio.re.is_finite() {
                    continue;
                }
                let repulsion: Complex = (0..deg).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
                let w = ratio / (1.0 - ratio * repulsion);
                z[i] -= w;
                moved = moved.max(w.norm() / z[i].norm().max(1.0));
            }
            if moved < 1e-15 {
                break;
            }
        }
        for r in z.iter_mut() {
            for _ in 0..5 {
                let d = dp.eval(*r);
                if d.norm() == 0.0 {
                    break;
                }
                *r -= p.eval(*r) / d;
            }
        }
        z
    }
}

/// Which exponent parameter is pinned to `N + μ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum PinnedExponent {
    AlphaPins,
    BetaPins,
}

/// One admissible accessory parameter.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct TerminationRoot {
    pub q: Complex,
    /// `max |a_{N+1}|, |a_{N+2}|, |a_{N+3}|` relative to `max |a_k|`.
    pub residual: f64,
}

/// Relative size of the coefficients past `a_N` that counts as zero.
const ACCEPT: f64 = 1e-9;

/// Accessory parameters `q` for which the origin series with exponent `μ`
/// stops after `a_N`.
///
/// With `S_n = q s_n`, `s_n = -a(n+μ)(n-γ+μ)`, the scaled coefficients
/// `A_n = a_n Π_{k≤n} q s_k` are polynomials in `q`:
/// `A_n = -(R_{n-1} A_{n-1} + Q_{n-2} q s_{n-1} A_{n-2} + P_{n-3} q² s_{n-1} s_{n-2} A_{n-3})`.
/// Roots of `A_{N+1}` (other than `q = 0`) are kept when the numerical
/// recurrence at that `q` gives `a_{N+1} = a_{N+2} = a_{N+3} = 0`.
pub fn solve_termination(
    p_partial: &HeunParams,
    n: usize,
    mu: Complex,
    which: PinnedExponent,
) -> Result<Vec<TerminationRoot>> {
    if n == 0 {
        return Err(HeunError::Precondition("N must be positive".into()));
    }
    let pinned = match which {
        PinnedExponent::AlphaPins => p_partial.alpha(),
        PinnedExponent::BetaPins => p_partial.beta(),
    };
    if (pinned - (n as f64 + mu)).norm() > 1e-10 {
        return Err(HeunError::Precondition(format!(
            "{which:?}: expected {} = N + mu",
            pinned
        )));
    }
    let ab = p_partial.ab();
    if ab.norm() < 1e-12 {
        return Err(HeunError::Precondition("alpha*beta = 0".into()));
    }
    let (a, g, d, e) = (p_partial.a(), p_partial.gamma(), p_partial.delta(), p_partial.epsilon());
    let one = Complex::new(1.0, 0.0);
    let qp = Poly(vec![Complex::new(0.0, 0.0), one]);
    let m = |k: usize| k as f64 + mu;
    let s = |k: usize| -a * m(k) * (m(k) - g);
    // R_k and Q_k as polynomials in q
    let r_poly = |k: usize| {
        let mk = m(k);
        Poly(vec![
            mk * mk * a * ab - mk * a * ab * (1.0 + g),
            mk * mk * (1.0 + a) - mk * (g + e - 1.0 + a * (g + d - 1.0)),
            one,
        ])
    };
    let q_poly = |k: usize| {
        let mk = m(k);
        Poly(vec![
            -mk * mk * (1.0 + a) * ab + mk * ab * (g + a * g + a * d + e),
            -mk * mk + mk * (g + d + e - 2.0) - 2.0 * ab,
        ])
    };
    let p_val = |k: usize| ab * (m(k) - p_partial.alpha()) * (m(k) - p_partial.beta());
    let mut big: Vec<Poly> = vec![Poly::constant(one)];
    for k in 1..=n + 1 {
        let mut acc = r_poly(k - 1).mul(&big[k - 1]);
        if k >= 2 {
            acc = acc.add(&q_poly(k - 2).mul(&qp).mul(&big[k - 2]).scale(s(k - 1)));
        }
        if k >= 3 {
            acc = acc.add(&qp.mul(&qp).mul(&big[k - 3]).scale(p_val(k - 3) * s(k - 1) * s(k - 2)));
        }
        big.push(acc.scale(-one));
    }
    let target = &big[n + 1];
    let scale = target.0.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut out: Vec<TerminationRoot> = Vec::new();
    for q in target.roots() {
        if q.norm() < 1e-8 * (1.0 + ab.norm()) || !q.re.is_finite() {
            continue;
        }
        if target.eval(q).norm() > 1e-6 * scale * (1.0 + q.norm()).powi(target.degree() as i32) {
            continue;
        }
        if out.iter().any(|r| (r.q - q).norm() < 1e-8 * (1.0 + q.norm())) {
            continue;
        }
        let p = p_partial.with_q(q);
        let Ok(rc) = origin_coeffs(&p, mu) else { continue };
        let Ok(vals) = run_raw(&rc, n + 3) else { continue };
        let peak = vals[..=n].iter().map(|c| c.norm()).fold(0.0, f64::max);
        let residual = vals[n + 1..=n + 3].iter().map(|c| c.norm()).fold(0.0, f64::max) / peak;
        if residual < ACCEPT {
            out.push(TerminationRoot { q, residual });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;

    #[test]
    fn poly_roots_of_known_polynomial() {
        // (x - 1)(x + 2)(x - i)
        let p = Poly(vec![c(1.0)])
            .mul(&Poly(vec![c(-1.0), c(1.0)]))
            .mul(&Poly(vec![c(2.0), c(1.0)]))
            .mul(&Poly(vec![Complex::new(0.0, -1.0), c(1.0)]));
        let mut roots = p.roots();
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((roots[0] + 2.0).norm() < 1e-13);
        assert!((roots[1] - Complex::new(0.0, 1.0)).norm() < 1e-13);
        assert!((roots[2] - 1.0).norm() < 1e-13);
        assert_eq!(p.degree(), 3);
        assert!((p.derivative().eval(c(0.0)) - p.0[1]).norm() == 0.0);
    }

    #[test]
    fn wrong_pin_is_rejected() {
        let p = HeunParams::real(3.0, 0.5, 1.2, 0.7, 0.8, 0.6).unwrap();
        assert!(solve_termination(&p, 1, c(0.0), PinnedExponent::AlphaPins).is_err());
    }
}
