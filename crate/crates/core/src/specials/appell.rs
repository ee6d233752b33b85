use super::quadrature::integrate;
use super::{cpow, ensure_finite, is_nonpositive_integer, log_gamma};
use crate::{Complex, HeunError, Result};

/// Cap on the number of diagonal shells `m + n = k` of the double series.
const MAX_SHELLS: usize = 6000;

/// Condition number above which [`appell_f1_auto`] looks for a better
/// representation.
const ILL_CONDITIONED: f64 = 1e3;

/// Parameters `(ã; b1, b2; c̃)` of the Appell function F1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F1Params {
    pub a_tilde: Complex,
    pub b1: Complex,
    pub b2: Complex,
    pub c_tilde: Complex,
}

impl F1Params {
    pub fn new(a_tilde: Complex, b1: Complex, b2: Complex, c_tilde: Complex) -> Result<Self> {
        ensure_finite("F1Params", &[a_tilde, b1, b2, c_tilde])?;
        if is_nonpositive_integer(c_tilde) {
            return Err(HeunError::Pole(format!("F1: c = {c_tilde}")));
        }
        Ok(F1Params {
            a_tilde,
            b1,
            b2,
            c_tilde,
        })
    }
}

/// Result of one double-series evaluation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct F1Sum {
    pub value: Complex,
    /// Σ |term|, the scale against which rounding errors accumulate.
    pub abs_sum: f64,
}

fn arg_ok(b: Complex, x: Complex) -> bool {
    is_nonpositive_integer(b) || x.norm() < 1.0
}

/// Diagonal-shell summation of the F1 double series.
pub(crate) fn f1_series(p: &F1Params, x: Complex, y: Complex, tol: f64) -> Result<F1Sum> {
    ensure_finite("appell_f1", &[x, y])?;
    let poly_a = is_nonpositive_integer(p.a_tilde);
    if !poly_a && !(arg_ok(p.b1, x) && arg_ok(p.b2, y)) {
        return Err(HeunError::Domain(format!(
            "appell_f1 outside the bi-disc: x = {x}, y = {y}"
        )));
    }
    let one = Complex::new(1.0, 0.0);
    // xs[m] = (b1)_m x^m / m!, ys[n] = (b2)_n y^n / n!
    let mut xs = vec![one];
    let mut ys = vec![one];
    let mut ratio = one; // (ã)_k / (c̃)_k
    let mut sum = Complex::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let mut peak: f64 = 0.0;
    let mut small_run = 0;
    for k in 0..MAX_SHELLS {
        if k > 0 {
            let kf = (k - 1) as f64;
            ratio *= (p.a_tilde + kf) / (p.c_tilde + kf);
            let last = xs[k - 1];
            xs.push(last * (p.b1 + kf) * x / (kf + 1.0));
            let last = ys[k - 1];
            ys.push(last * (p.b2 + kf) * y / (kf + 1.0));
        }
        let mut shell = Complex::new(0.0, 0.0);
        let mut shell_abs = 0.0;
        for m in 0..=k {
            let t = xs[m] * ys[k - m];
            shell += t;
            shell_abs += t.norm();
        }
        shell *= ratio;
        shell_abs *= ratio.norm();
        sum += shell;
        abs_sum += shell_abs;
        peak = peak.max(sum.norm());
        if ratio.norm() == 0.0 {
            break;
        }
        if shell_abs <= tol * peak.max(f64::MIN_POSITIVE) {
            small_run += 1;
            if small_run >= 3 {
                break;
            }
        } else {
            small_run = 0;
        }
        if k + 1 == MAX_SHELLS {
            return Err(HeunError::NonConvergence {
                what: "appell_f1",
                terms: MAX_SHELLS,
            });
        }
    }
    if !(sum.re.is_finite() && sum.im.is_finite()) {
        return Err(HeunError::NonFinite("appell_f1"));
    }
    Ok(F1Sum { value: sum, abs_sum })
}

/// Appell F1(ã; b1, b2; c̃; x, y) by its double series, summed over
/// diagonal shells `m + n = k`.
///
/// Requires `|x| < 1` and `|y| < 1`; a direction whose `b` parameter is a
/// non-positive integer is polynomial and accepts any argument.
pub fn appell_f1(p: &F1Params, x: Complex, y: Complex, tol: f64) -> Result<Complex> {
    Ok(f1_series(p, x, y, tol)?.value)
}

/// One rewritten representation `prefactor · F1(params; x', y')`.
struct Representation {
    prefactor: Complex,
    params: F1Params,
    x: Complex,
    y: Complex,
}

fn representations(p: &F1Params, x: Complex, y: Complex) -> Vec<Representation> {
    let (a, b1, b2, c) = (p.a_tilde, p.b1, p.b2, p.c_tilde);
    let one = Complex::new(1.0, 0.0);
    let mk = |prefactor: Complex, a2, b12, b22, x2: Complex, y2: Complex| Representation {
        prefactor,
        params: F1Params {
            a_tilde: a2,
            b1: b12,
            b2: b22,
            c_tilde: c,
        },
        x: x2,
        y: y2,
    };
    let mut out = Vec::with_capacity(5);
    let (ox, oy) = (one - x, one - y);
    if ox.norm() > 0.0 && oy.norm() > 0.0 {
        out.push(mk(
            cpow(ox, -b1) * cpow(oy, -b2),
            c - a,
            b1,
            b2,
            x / (x - 1.0),
            y / (y - 1.0),
        ));
        out.push(mk(cpow(ox, -a), a, c - b1 - b2, b2, x / (x - 1.0), (y - x) / ox));
        out.push(mk(cpow(oy, -a), a, b1, c - b1 - b2, (x - y) / oy, y / (y - 1.0)));
        out.push(mk(
            cpow(ox, c - a - b1) * cpow(oy, -b2),
            c - a,
            c - b1 - b2,
            b2,
            x,
            (x - y) / oy,
        ));
        out.push(mk(
            cpow(oy, c - a - b2) * cpow(ox, -b1),
            c - a,
            b1,
            c - b1 - b2,
            (y - x) / ox,
            y,
        ));
    }
    out
}

fn rate(p: &F1Params, x: Complex, y: Complex) -> f64 {
    let rx = if is_nonpositive_integer(p.b1) { 0.0 } else { x.norm() };
    let ry = if is_nonpositive_integer(p.b2) { 0.0 } else { y.norm() };
    rx.max(ry)
}

/// Appell F1 with automatic choice of representation.
///
/// The direct series is used when it is well conditioned. Otherwise the
/// five classical linear transformations of F1 are tried (for example
/// `F1 = (1-x)^{-b1}(1-y)^{-b2} F1(c̃-ã; b1, b2; c̃; x/(x-1), y/(y-1))`)
/// and the one with the smallest rounding-error estimate wins. This keeps
/// large negative `b` parameters (binomial-type alternation) and
/// arguments close to 1 accurate.
pub fn appell_f1_auto(p: &F1Params, x: Complex, y: Complex, tol: f64) -> Result<Complex> {
    let direct = f1_series(p, x, y, tol);
    if let Ok(s) = &direct {
        if s.abs_sum <= ILL_CONDITIONED * s.value.norm() {
            return Ok(s.value);
        }
    }
    let mut best: Option<(f64, Complex)> = direct.as_ref().ok().map(|s| (s.abs_sum, s.value));
    let mut first_err = direct.err();
    for r in representations(p, x, y) {
        if r.prefactor.norm() == 0.0
            || !r.prefactor.re.is_finite()
            || rate(&r.params, r.x, r.y) > 0.97
            || is_nonpositive_integer(r.params.c_tilde)
        {
            continue;
        }
        match f1_series(&r.params, r.x, r.y, tol) {
            Ok(s) => {
                let err = s.abs_sum * r.prefactor.norm();
                if best.is_none_or(|(e, _)| err < e) {
                    best = Some((err, s.value * r.prefactor));
                }
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    match best {
        Some((_, v)) => Ok(v),
        None => {
            Err(first_err.unwrap_or_else(|| HeunError::Domain(format!("appell_f1: no convergent form at ({x}, {y})"))))
        }
    }
}

/// Appell F1 through its Euler integral
/// `Γ(c̃)/(Γ(ã)Γ(c̃-ã)) ∫₀¹ t^{ã-1}(1-t)^{c̃-ã-1}(1-xt)^{-b1}(1-yt)^{-b2} dt`.
///
/// Needs `Re c̃ > Re ã > 0` and `x, y` off `[1, ∞)`. Endpoint
/// singularities are removed by power substitutions on each half of the
/// interval before adaptive Gauss–Legendre quadrature.
pub fn appell_f1_integral(p: &F1Params, x: Complex, y: Complex) -> Result<Complex> {
    ensure_finite("appell_f1_integral", &[x, y])?;
    let (a, b1, b2, c) = (p.a_tilde, p.b1, p.b2, p.c_tilde);
    if !(a.re > 0.0 && c.re > a.re) {
        return Err(HeunError::Precondition(format!(
            "Euler integral needs Re c > Re a > 0 (a = {a}, c = {c})"
        )));
    }
    for w in [x, y] {
        if w.im.abs() < 1e-14 && w.re >= 1.0 {
            return Err(HeunError::Precondition(format!("argument {w} on the cut [1, inf)")));
        }
    }
    let smooth = |t: f64| cpow(1.0 - x * t, -b1) * cpow(1.0 - y * t, -b2);
    let left_exp = a - 1.0;
    let right_exp = c - a - 1.0;
    let m = (1.0 / a.re).max(1.0);
    let m2 = (1.0 / (c - a).re).max(1.0);
    // t = s^m on [0, 1/2]
    let s_max = 0.5f64.powf(1.0 / m);
    let left = integrate(
        |s| {
            if s == 0.0 {
                return Complex::new(0.0, 0.0);
            }
            let t = s.powf(m);
            let ls = Complex::new(s.ln(), 0.0);
            let jac = ((left_exp * m + (m - 1.0)) * ls).exp() * m;
            jac * cpow(Complex::new(1.0 - t, 0.0), right_exp) * smooth(t)
        },
        0.0,
        s_max,
        1e-13,
    )?;
    // 1 - t = s^m2 on [1/2, 1]
    let s_max2 = 0.5f64.powf(1.0 / m2);
    let right = integrate(
        |s| {
            if s == 0.0 {
                return Complex::new(0.0, 0.0);
            }
            let t = 1.0 - s.powf(m2);
            let ls = Complex::new(s.ln(), 0.0);
            let jac = ((right_exp * m2 + (m2 - 1.0)) * ls).exp() * m2;
            jac * cpow(Complex::new(t, 0.0), left_exp) * smooth(t)
        },
        0.0,
        s_max2,
        1e-13,
    )?;
    let norm = (log_gamma(c)? - log_gamma(a)? - log_gamma(c - a)?).exp();
    Ok(norm * (left + right))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use crate::specials::{clausen_3f2, gauss_2f1};

    const TOL: f64 = 1e-16;

    fn params(a: f64, b1: f64, b2: f64, cc: f64) -> F1Params {
        F1Params::new(c(a), c(b1), c(b2), c(cc)).unwrap()
    }

    #[test]
    fn origin_value_is_one() {
        let p = params(0.7, 0.4, 0.9, 2.1);
        assert_eq!(appell_f1(&p, c(0.0), c(0.0), TOL).unwrap(), c(1.0));
        assert!((appell_f1_integral(&p, c(0.0), c(0.0)).unwrap() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn series_and_integral_agree() {
        let p = params(0.7, 0.4, 0.9, 2.1);
        let s = appell_f1(&p, c(0.3), c(0.2), TOL).unwrap();
        let i = appell_f1_integral(&p, c(0.3), c(0.2)).unwrap();
        assert!((s - i).norm() < 1e-12, "{s} {i}");
        assert!((s.re - 1.117_983_068_130_282).abs() < 1e-13);
    }

    #[test]
    fn reduces_to_gauss_when_a_b_vanishes() {
        let p = params(0.8, 0.3, 0.0, 1.4);
        let x = Complex::new(0.4, 0.1);
        let g = gauss_2f1(c(0.8), c(0.3), c(1.4), x, TOL).unwrap();
        for y in [c(0.0), c(0.9), Complex::new(-0.5, 0.6)] {
            assert!((appell_f1(&p, x, y, TOL).unwrap() - g).norm() < 1e-14);
        }
        let p = params(0.8, 0.0, 0.3, 1.4);
        let i = appell_f1_integral(&p, c(0.7), x).unwrap();
        assert!((i - g).norm() < 1e-11);
    }

    #[test]
    fn clausen_reduction_on_the_antidiagonal() {
        let p = params(0.8, 0.3, 0.3, 1.4);
        let x = c(0.4);
        let f = appell_f1(&p, x, -x, TOL).unwrap();
        let h = clausen_3f2(c(0.9), c(0.4), c(0.3), c(1.2), c(0.7), x * x, TOL).unwrap();
        assert!((f - h).norm() < 1e-14);
    }

    #[test]
    fn domain_errors() {
        let p = params(0.8, 0.3, 0.3, 1.4);
        assert!(matches!(appell_f1(&p, c(1.1), c(0.0), TOL), Err(HeunError::Domain(_))));
        assert!(F1Params::new(c(1.0), c(1.0), c(1.0), c(-2.0)).is_err());
        assert!(matches!(
            appell_f1_integral(&params(2.0, 0.3, 0.3, 1.4), c(0.1), c(0.1)),
            Err(HeunError::Precondition(_))
        ));
        // polynomial direction accepts any argument
        let p = params(0.8, 0.3, -3.0, 1.4);
        assert!(appell_f1(&p, c(0.5), c(4.0), TOL).is_ok());
    }

    #[test]
    fn transforms_agree_with_direct_series() {
        let p = F1Params::new(
            Complex::new(0.6, 0.2),
            Complex::new(0.35, -0.1),
            Complex::new(1.3, 0.0),
            Complex::new(1.9, 0.3),
        )
        .unwrap();
        let (x, y) = (Complex::new(0.3, 0.1), Complex::new(-0.2, 0.25));
        let direct = appell_f1(&p, x, y, TOL).unwrap();
        for r in representations(&p, x, y) {
            if rate(&r.params, r.x, r.y) < 0.9 {
                let v = r.prefactor * appell_f1(&r.params, r.x, r.y, TOL).unwrap();
                assert!((v - direct).norm() < 1e-12, "{v} vs {direct}");
            }
        }
    }

    #[test]
    fn auto_handles_binomial_cancellation() {
        // b1 = -30 turns the x-direction into (1 - x)^30-like alternation
        let p = params(0.4, -30.0, 1.5, 1.4);
        let (x, y) = (c(0.8), c(0.2));
        let auto = appell_f1_auto(&p, x, y, TOL).unwrap();
        let quad = appell_f1_integral(&p, x, y).unwrap();
        assert!((auto - quad).norm() <= 1e-9 * quad.norm(), "{auto} {quad}");
    }

    use proptest::prelude::*;
    proptest! {
        #![proptest_config(ProptestConfig::with_cases(30))]
        #[test]
        fn series_matches_integral(
            a in 0.2f64..2.0, dc in 0.2f64..2.0, b1 in -1.5f64..1.5, b2 in -1.5f64..1.5,
            xr in -0.6f64..0.6, xi in -0.3f64..0.3, yr in -0.6f64..0.6, yi in -0.3f64..0.3,
        ) {
            let p = params(a, b1, b2, a + dc);
            let (x, y) = (Complex::new(xr, xi), Complex::new(yr, yi));
            let s = appell_f1(&p, x, y, TOL).unwrap();
            let i = appell_f1_integral(&p, x, y).unwrap();
            prop_assert!((s - i).norm() <= 1e-10 * s.norm().max(1e-3), "{} {}", s, i);
        }

        #[test]
        fn b2_zero_gives_gauss(a in 0.1f64..2.0, b1 in -2.0f64..2.0, cc in 0.3f64..3.0,
                               xr in -0.7f64..0.7, yr in -0.9f64..0.9, yi in -0.4f64..0.4) {
            let p = params(a, b1, 0.0, cc);
            let f = appell_f1(&p, c(xr), Complex::new(yr, yi), TOL).unwrap();
            let g = gauss_2f1(c(a), c(b1), c(cc), c(xr), TOL).unwrap();
            prop_assert!((f - g).norm() < 1e-11 * g.norm().max(1.0));
        }
    }

    #[test]
    fn shell_cap_is_reported() {
        let p = params(1.0, 1.0, 1.0, 1.5);
        let r = appell_f1(&p, c(0.99999), c(0.0), 1e-16);
        assert!(matches!(r, Err(HeunError::NonConvergence { .. })));
    }
}
