//! Series solutions of the Heun equation assembled from Frobenius series
//! of the derivative equation.
//!
//! With `v = (z - z_c)^μ Σ a_n (z - z_c)^n` solving the derivative equation,
//! `u' = z^{-γ}(z-1)^{-δ}(z-a)^{-ε} v`, so `u = C₀ + Σ a_n u_n` where each
//! `u_n` is an antiderivative of the weighted power, an Appell F1 function.
//! The weight is normalised as
//!
//! ```text
//! W(t) = (-1)^{-δ} (-a)^{-ε} t^{-γ} (1-t)^{-δ} (1-t/a)^{-ε}
//! ```
//!
//! (principal powers) and the local powers as `t^{n+μ}` at 0,
//! `(-1)^{n+μ}(1-t)^{n+μ}` at 1, `(-a)^{n+μ}(1-t/a)^{n+μ}` at `a`,
//! `(t-z₀)^{n+2}` at `z₀ = q/(αβ)` and `t^{-(n+μ)}` at ∞.
//!
//! At 1 and `a` the antiderivative is taken from the center itself and the
//! weight factors singular elsewhere are rewritten around the center, so
//! their cuts stay outside the disc of convergence. These local branches
//! agree with the principal ones on the segment from the center towards 0.
//!
//! `C₀` is fixed by requiring the Heun operator to annihilate `C₀ + U` at a
//! probe point. Summation uses the joint increments
//! `a_n [u_n(z) - u_n(p) - (P2 u_n''(p) + P1 u_n'(p)) / P0(p)]`, which is
//! the same truncated `C₀ + Σ a_n u_n` but converges whenever `z` and the
//! probe `p` lie in the disc of convergence, even when `Σ a_n u_n(p)`
//! alone does not.

mod reduced;

pub use reduced::{beta_expansion, combo_expansion_eps_minus1, lerch_expansion, two_term_partial_sum, BetaVariant};

use std::collections::BTreeSet;

use crate::heun_model::{classify, CLASSIFY_TOL};
use crate::ode_oracle::heun_polys;
use crate::recurrences::{center_coeffs, radius_origin, radius_z0, run, CoefficientSequence, RecurrenceKind};
use crate::specials::{appell_f1_auto, cpow, minus_one_pow, F1Params};
use crate::{Complex, HeunError, HeunParams, ReductionClass, Result};

/// Default relative tolerance of expansion sums.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Default cap on the number of series terms.
pub const DEFAULT_N_MAX: usize = 2000;

/// Tolerance handed to the F1 kernel.
const F1_TOL: f64 = 1e-17;

/// Expansion center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum Center {
    Origin,
    One,
    A,
    Infinity,
    /// The extra singular point `q/(αβ)` of the derivative equation.
    Z0,
}

impl Center {
    pub fn kind(self) -> RecurrenceKind {
        match self {
            Center::Origin => RecurrenceKind::Origin,
            Center::One => RecurrenceKind::One,
            Center::A => RecurrenceKind::A,
            Center::Infinity => RecurrenceKind::Infinity,
            Center::Z0 => RecurrenceKind::AtZ0,
        }
    }

    /// Finite location of the center.
    pub fn point(self, p: &HeunParams) -> Option<Complex> {
        match self {
            Center::Origin => Some(Complex::new(0.0, 0.0)),
            Center::One => Some(Complex::new(1.0, 0.0)),
            Center::A => Some(p.a()),
            Center::Z0 => p.z0(),
            Center::Infinity => None,
        }
    }
}

/// Center, exponent and truncation policy of one expansion.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ExpansionSpec {
    pub center: Center,
    pub mu: Complex,
    pub n_max: usize,
    pub tol: f64,
}

impl ExpansionSpec {
    pub fn new(center: Center, mu: Complex) -> Self {
        ExpansionSpec {
            center,
            mu,
            n_max: DEFAULT_N_MAX,
            tol: DEFAULT_TOL,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = n_max;
        self
    }
}

/// `(-1)^{-δ} (-a)^{-ε}`, the value of `W(t) t^γ` at `t = 0`.
pub fn weight_constant(p: &HeunParams) -> Complex {
    minus_one_pow(-p.delta()) * cpow(-p.a(), -p.epsilon())
}

/// The weight `W(t)`.
pub fn weight(p: &HeunParams, t: Complex) -> Complex {
    let one = Complex::new(1.0, 0.0);
    weight_constant(p) * cpow(t, -p.gamma()) * cpow(one - t, -p.delta()) * cpow(one - t / p.a(), -p.epsilon())
}

/// `W(t)` on the branches used by the expansion functions of `center`.
fn local_weight(p: &HeunParams, center: Center, t: Complex) -> Complex {
    let one = Complex::new(1.0, 0.0);
    let (a, g, d, e) = (p.a(), p.gamma(), p.delta(), p.epsilon());
    match center {
        Center::One => {
            weight_constant(p)
                * cpow(t, -g)
                * cpow(one - t, -d)
                * cpow((a - 1.0) / a, -e)
                * cpow((t - a) / (one - a), -e)
        }
        Center::A => {
            weight_constant(p)
                * cpow(a, -g)
                * cpow(t / a, -g)
                * cpow(one - a, -d)
                * cpow((one - t) / (one - a), -d)
                * cpow(one - t / a, -e)
        }
        Center::Z0 => match z0_of(p) {
            Ok(z0) => z0_weight(p, z0, t),
            Err(_) => weight(p, t),
        },
        _ => weight(p, t),
    }
}

/// `W'/W`.
fn weight_log_derivative(p: &HeunParams, t: Complex) -> Complex {
    -p.gamma() / t - p.delta() / (t - 1.0) - p.epsilon() / (t - p.a())
}

fn z0_of(p: &HeunParams) -> Result<Complex> {
    p.z0()
        .filter(|_| p.ab().norm() >= CLASSIFY_TOL)
        .ok_or_else(|| HeunError::Regime("alpha*beta = 0: no finite point q/(alpha beta)".into()))
}

/// Local power multiplying the weight in `u_n'`, and its log-derivative.
fn local_power(p: &HeunParams, center: Center, mu: Complex, n: usize, t: Complex) -> Result<(Complex, Complex)> {
    let s = n as f64 + mu;
    let one = Complex::new(1.0, 0.0);
    Ok(match center {
        Center::Origin => (cpow(t, s), s / t),
        Center::One => (minus_one_pow(s) * cpow(one - t, s), s / (t - 1.0)),
        Center::A => (cpow(-p.a(), s) * cpow(one - t / p.a(), s), s / (t - p.a())),
        Center::Z0 => {
            let z0 = z0_of(p)?;
            (cpow(t - z0, s), s / (t - z0))
        }
        Center::Infinity => (cpow(t, -s), -s / t),
    })
}

fn check_center_mu(center: Center, mu: Complex) -> Result<()> {
    if center == Center::Z0 && (mu - 2.0).norm() > 1e-12 {
        return Err(HeunError::Exponent(format!(
            "mu = {mu} at q/(alpha beta); only mu = 2 gives Appell functions"
        )));
    }
    Ok(())
}

/// The expansion function `u_n(z)` of the given center.
///
/// | center | `u_n` |
/// |---|---|
/// | 0 | `(-1)^{-δ}(-a)^{-ε} z^{n+γ₀}/(n+γ₀) F1(n+γ₀; δ, ε; 1+n+γ₀; z, z/a)`, `γ₀ = 1-γ+μ` |
/// | 1 | `-W₀(-1)^{n+μ}((a-1)/a)^{-ε} s^k/k F1(k; γ, ε; 1+k; s, s/(1-a))`, `s = 1-z`, `k = n+μ+1-δ` |
/// | a | `-a W₀ a^{-γ}(1-a)^{-δ}(-a)^{n+μ} s^k/k F1(k; γ, δ; 1+k; s, as/(a-1))`, `s = 1-z/a`, `k = n+μ+1-ε` |
/// | ∞ | `(-1)^{-δ}(-a)^{-ε} z^{γ₀-n}/(γ₀-n) F1(γ₀-n; δ, ε; 1+γ₀-n; z, z/a)`, `γ₀ = 1-γ-μ` |
/// | z₀ | `∫_{z₀}^z (-1)^{-δ} t^{-γ}(1-t)^{-δ}(t-z₀)^{n+2} dt`, needs `ε = 0`, `μ = 2` |
///
/// The F1 functions are evaluated with [`appell_f1_auto`]. The `z₀` terms
/// equal `(-1)^{-δ}(-z₀)^{n+2} z^{1-γ}/(1-γ) F1(1-γ; δ, -2-n; 2-γ; z, z/z₀)`
/// up to a constant, but are summed as a Taylor series about `z₀`, which
/// keeps full relative accuracy near the center.
pub fn expansion_function(p: &HeunParams, spec: &ExpansionSpec, n: usize, z: Complex) -> Result<Complex> {
    let (center, mu) = (spec.center, spec.mu);
    check_center_mu(center, mu)?;
    let (a, g, d, e) = (p.a(), p.gamma(), p.delta(), p.epsilon());
    let nf = n as f64;
    let one = Complex::new(1.0, 0.0);
    let f1 =
        |at, b1, b2, ct, x, y| -> Result<Complex> { appell_f1_auto(&F1Params::new(at, b1, b2, ct)?, x, y, F1_TOL) };
    let power_form = |s: Complex| -> Result<Complex> {
        if s.norm() < 1e-14 {
            return Err(HeunError::Pole(format!("n + gamma0 = 0 at n = {n}")));
        }
        Ok(weight_constant(p) * cpow(z, s) / s * f1(s, d, e, 1.0 + s, z, z / a)?)
    };
    match center {
        Center::Origin => power_form(nf + 1.0 - g + mu),
        Center::Infinity => power_form(1.0 - g - mu - nf),
        Center::One => {
            let k = nf + mu + 1.0 - d;
            let s = one - z;
            if k.norm() < 1e-14 {
                return Err(HeunError::Pole(format!("n + mu + 1 - delta = 0 at n = {n}")));
            }
            let pre = -weight_constant(p) * minus_one_pow(nf + mu) * cpow((a - 1.0) / a, -e);
            Ok(pre * cpow(s, k) / k * f1(k, g, e, 1.0 + k, s, s / (one - a))?)
        }
        Center::A => {
            let k = nf + mu + 1.0 - e;
            let s = one - z / a;
            if k.norm() < 1e-14 {
                return Err(HeunError::Pole(format!("n + mu + 1 - epsilon = 0 at n = {n}")));
            }
            let pre = -a * weight_constant(p) * cpow(a, -g) * cpow(one - a, -d) * cpow(-a, nf + mu);
            Ok(pre * cpow(s, k) / k * f1(k, g, d, 1.0 + k, s, s * a / (a - 1.0))?)
        }
        Center::Z0 => {
            if e.norm() > CLASSIFY_TOL {
                return Err(HeunError::Regime(format!(
                    "expansion functions at q/(alpha beta) need epsilon = 0 (epsilon = {e})"
                )));
            }
            let z0 = z0_of(p)?;
            z0_function(p, z0, n, z)
        }
    }
}

/// `(-1)^{-δ} t^{-γ}(1-t)^{-δ}` written around `z₀`, as
/// `(-1)^{-δ} z₀^{-γ}(1-z₀)^{-δ} (1+h/z₀)^{-γ}(1-h/(1-z₀))^{-δ}`, `h = t - z₀`.
pub(crate) fn z0_weight(p: &HeunParams, z0: Complex, t: Complex) -> Complex {
    let (g, d) = (p.gamma(), p.delta());
    let one = Complex::new(1.0, 0.0);
    let h = t - z0;
    minus_one_pow(-d) * cpow(z0, -g) * cpow(one - z0, -d) * cpow(one + h / z0, -g) * cpow(one - h / (one - z0), -d)
}

/// The antiderivative of `(-1)^{-δ} t^{-γ}(1-t)^{-δ}(t-z₀)^{n+2}` from `z₀`,
/// summed as `Σ_j c_j h^{n+3+j}/(n+3+j)` with `c_j` the Taylor coefficients
/// of [`z0_weight`]. With `D = z₀(1-z₀)` they obey
/// `D(j+1)c_{j+1} = (δz₀ - γ(1-z₀) - (1-2z₀)j) c_j + (γ+δ+j-1) c_{j-1}`.
pub(crate) fn z0_function(p: &HeunParams, z0: Complex, n: usize, z: Complex) -> Result<Complex> {
    let (g, d) = (p.gamma(), p.delta());
    let one = Complex::new(1.0, 0.0);
    let h = z - z0;
    let reach = z0.norm().min((one - z0).norm());
    if h.norm() >= reach {
        return Err(HeunError::Domain(format!(
            "|z - z0| = {} outside the disc of radius {reach}",
            h.norm()
        )));
    }
    let dd = z0 * (one - z0);
    let (k0, e) = (d * z0 - g * (one - z0), one - 2.0 * z0);
    let base = n as f64 + 3.0;
    let (mut prev, mut cur) = (Complex::new(0.0, 0.0), one);
    let mut hp = one;
    let mut sum = Complex::new(0.0, 0.0);
    let mut small = 0;
    for j in 0..20_000 {
        let jf = j as f64;
        let term = cur * hp / (base + jf);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            small += 1;
            if small >= 3 {
                let pre = minus_one_pow(-d) * cpow(z0, -g) * cpow(one - z0, -d);
                return Ok(pre * sum * h.powi(n as i32 + 3));
            }
        } else {
            small = 0;
        }
        let next = ((k0 - e * jf) * cur + (g + d + jf - 1.0) * prev) / (dd * (jf + 1.0));
        prev = cur;
        cur = next;
        hp *= h;
    }
    Err(HeunError::NonConvergence {
        what: "series about q/(alpha beta)",
        terms: 20_000,
    })
}

/// `(u_n'(z), u_n''(z))` in closed form: `u_n' = W(z) × local power`.
pub fn expansion_derivatives(p: &HeunParams, spec: &ExpansionSpec, n: usize, z: Complex) -> Result<(Complex, Complex)> {
    check_center_mu(spec.center, spec.mu)?;
    let (loc, dloc) = local_power(p, spec.center, spec.mu, n, z)?;
    let du = local_weight(p, spec.center, z) * loc;
    let ddu = du * (weight_log_derivative(p, z) + dloc);
    Ok((du, ddu))
}

/// A family of expansion terms with closed-form derivatives.
pub(crate) trait TermFamily {
    fn value(&self, n: usize, z: Complex) -> Result<Complex>;
    fn derivatives(&self, n: usize, z: Complex) -> Result<(Complex, Complex)>;
}

pub(crate) struct Canonical<'a> {
    pub p: &'a HeunParams,
    pub spec: ExpansionSpec,
}

impl TermFamily for Canonical<'_> {
    fn value(&self, n: usize, z: Complex) -> Result<Complex> {
        expansion_function(self.p, &self.spec, n, z)
    }
    fn derivatives(&self, n: usize, z: Complex) -> Result<(Complex, Complex)> {
        expansion_derivatives(self.p, &self.spec, n, z)
    }
}

/// `(P2 u_n''(p) + P1 u_n'(p)) / P0(p)`, the share of `a_n` in `-C₀ - u_n(p)`.
fn probe_correction<F: TermFamily + ?Sized>(p: &HeunParams, fam: &F, n: usize, probe: Complex) -> Result<Complex> {
    let (p2, p1, p0) = heun_polys(p, probe);
    let (du, ddu) = fam.derivatives(n, probe)?;
    Ok((p2 * ddu + p1 * du) / p0)
}

fn check_probe(p: &HeunParams, probe: Complex) -> Result<()> {
    let p0 = p.ab() * probe - p.q();
    if p0.norm() < 1e-12 * (1.0 + p.ab().norm()) {
        return Err(HeunError::Precondition(format!(
            "probe {probe} sits on alpha*beta*z = q"
        )));
    }
    let (p2, _, _) = heun_polys(p, probe);
    if p2.norm() < 1e-14 {
        return Err(HeunError::Precondition(format!("probe {probe} is a singular point")));
    }
    Ok(())
}

/// Convergence radius of the expansion about `center` (for ∞, the radius
/// outside which the series in `1/z` converges).
pub fn radius_at(p: &HeunParams, center: Center) -> Result<f64> {
    let z0 = p.z0().filter(|_| p.ab().norm() >= CLASSIFY_TOL);
    let dist = |c: Complex, pts: &[Complex]| {
        pts.iter()
            .map(|s| (s - c).norm())
            .filter(|d| *d > CLASSIFY_TOL)
            .fold(f64::INFINITY, f64::min)
    };
    let one = Complex::new(1.0, 0.0);
    let zero = Complex::new(0.0, 0.0);
    let mut pts = vec![zero, one, p.a()];
    if let Some(z0) = z0 {
        pts.push(z0);
    }
    Ok(match center {
        Center::Origin => radius_origin(p).radius,
        Center::Z0 => radius_z0(p)?.radius,
        Center::One => dist(one, &pts),
        Center::A => dist(p.a(), &pts),
        Center::Infinity => pts.iter().map(|s| s.norm()).fold(0.0, f64::max),
    })
}

/// Default probe point: inside the disc of convergence, `0.45` of the
/// radius away from the center in the direction of the origin (along
/// the positive axis for the origin itself), rotated if it falls near
/// `q/(αβ)`.
pub fn default_probe(p: &HeunParams, center: Center) -> Result<Complex> {
    let zero = Complex::new(0.0, 0.0);
    let (c, dir, reach) = match center.point(p) {
        Some(c) if c.norm() > 1e-12 => (c, -c / c.norm(), 0.45 * radius_at(p, center)?),
        Some(c) => (c, Complex::new(1.0, 0.0), 0.45 * radius_at(p, center)?),
        None => (
            zero,
            Complex::new(1.0, 0.0),
            0.5 * [1.0, p.a().norm()].iter().fold(f64::INFINITY, |m, x| m.min(*x)),
        ),
    };
    let z0 = p.z0();
    for rot in [0.0, 0.35, -0.35, 0.7, -0.7, 1.2, -1.2] {
        let cand = c + dir * Complex::from_polar(reach, rot);
        let far_from_z0 = z0.is_none_or(|z0| (cand - z0).norm() > 0.2 * reach);
        if far_from_z0 && check_probe(p, cand).is_ok() {
            return Ok(cand);
        }
    }
    Err(HeunError::Precondition("no admissible probe point".into()))
}

/// A truncated expansion with its integration constant.
#[derive(Debug, Clone)]
pub struct SeriesSolution {
    pub spec: ExpansionSpec,
    pub params: HeunParams,
    pub coeffs: CoefficientSequence,
    /// `C₀` of this truncation. For centers other than 0 the partial sums
    /// `Σ a_n u_n` need not converge on their own, so this constant is only
    /// meaningful together with the same truncation.
    pub c0: Complex,
    pub probe: Complex,
    pub radius: f64,
    pub reduction: BTreeSet<ReductionClass>,
}

impl SeriesSolution {
    fn family(&self) -> Canonical<'_> {
        Canonical {
            p: &self.params,
            spec: self.spec,
        }
    }

    /// `C₀ + Σ a_n u_n(z)`, accumulated as differences against the probe.
    pub fn eval(&self, z: Complex) -> Result<Complex> {
        let fam = self.family();
        let mut sum = Complex::new(0.0, 0.0);
        for (n, &an) in self.coeffs.values.iter().enumerate() {
            if an.norm() == 0.0 {
                continue;
            }
            let corr = probe_correction(&self.params, &fam, n, self.probe)?;
            sum += an * (fam.value(n, z)? - fam.value(n, self.probe)? - corr);
        }
        Ok(sum)
    }

    /// `(u', u'')` of the truncated series.
    pub fn derivatives(&self, z: Complex) -> Result<(Complex, Complex)> {
        let fam = self.family();
        let mut du = Complex::new(0.0, 0.0);
        let mut ddu = Complex::new(0.0, 0.0);
        for (n, &an) in self.coeffs.values.iter().enumerate() {
            let (d1, d2) = fam.derivatives(n, z)?;
            du += an * d1;
            ddu += an * d2;
        }
        Ok((du, ddu))
    }

    /// `v(z) = local power sum`, the derivative-equation solution behind
    /// this expansion, normalised as in the module documentation.
    pub fn v(&self, z: Complex) -> Result<Complex> {
        let mut v = Complex::new(0.0, 0.0);
        for (n, &an) in self.coeffs.values.iter().enumerate() {
            v += an * local_power(&self.params, self.spec.center, self.spec.mu, n, z)?.0;
        }
        Ok(v)
    }
}

/// `C₀ = -L[U](probe) / (αβ·probe - q)` for the truncated `U = Σ a_n u_n`
/// carried by `partial`, with `U'` and `U''` in closed form.
pub fn fix_c0(p: &HeunParams, partial: &SeriesSolution, probe: Complex) -> Result<Complex> {
    check_probe(p, probe)?;
    let fam = Canonical { p, spec: partial.spec };
    c0_for(p, &fam, &partial.coeffs.values, probe)
}

pub(crate) fn c0_for<F: TermFamily + ?Sized>(
    p: &HeunParams,
    fam: &F,
    coeffs: &[Complex],
    probe: Complex,
) -> Result<Complex> {
    check_probe(p, probe)?;
    let (p2, p1, p0) = heun_polys(p, probe);
    let (mut u, mut du, mut ddu) = (Complex::default(), Complex::default(), Complex::default());
    for (n, &an) in coeffs.iter().enumerate() {
        if an.norm() == 0.0 {
            continue;
        }
        u += an * fam.value(n, probe)?;
        let (d1, d2) = fam.derivatives(n, probe)?;
        du += an * d1;
        ddu += an * d2;
    }
    Ok(-(p2 * ddu + p1 * du + p0 * u) / p0)
}

fn coefficients(p: &HeunParams, spec: &ExpansionSpec, n_terms: usize) -> Result<CoefficientSequence> {
    let rc = center_coeffs(p, spec.center.kind(), spec.mu)?;
    run(&rc, n_terms)
}

/// Build a fixed-truncation solution with `n_terms + 1` coefficients (fewer
/// if the series terminates) and `C₀` fixed at the default probe.
pub fn build_solution(p: &HeunParams, spec: &ExpansionSpec, n_terms: usize) -> Result<SeriesSolution> {
    check_center_mu(spec.center, spec.mu)?;
    let coeffs = coefficients(p, spec, n_terms)?;
    let probe = default_probe(p, spec.center)?;
    let fam = Canonical { p, spec: *spec };
    let c0 = c0_for(p, &fam, &coeffs.values, probe)?;
    Ok(SeriesSolution {
        spec: *spec,
        params: *p,
        coeffs,
        c0,
        probe,
        radius: radius_at(p, spec.center)?,
        reduction: classify(p, CLASSIFY_TOL),
    })
}

/// Result of an adaptive summation.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSum {
    pub u: Complex,
    pub terms_used: usize,
    /// Sum of the magnitudes of the last three increments.
    pub est_error: f64,
    /// `C₀` for the truncation that was used.
    pub c0: Complex,
    pub warnings: Vec<String>,
}

/// Sum joint increments until three consecutive ones fall below
/// `tol × max |partial sum|`.
pub(crate) fn sum_family<F: TermFamily + ?Sized>(
    p: &HeunParams,
    fam: &F,
    coeffs: &[Complex],
    probe: Complex,
    z: Complex,
    tol: f64,
    terminated: bool,
) -> Result<SeriesSum> {
    check_probe(p, probe)?;
    let mut u = Complex::new(0.0, 0.0);
    let mut c0 = Complex::new(0.0, 0.0);
    let mut peak: f64 = 0.0;
    let mut last = [0.0f64; 3];
    let mut small = 0;
    let mut used = 0;
    for (n, &an) in coeffs.iter().enumerate() {
        used = n + 1;
        let inc = if an.norm() == 0.0 {
            Complex::new(0.0, 0.0)
        } else {
            let at_probe = fam.value(n, probe)? + probe_correction(p, fam, n, probe)?;
            c0 -= an * at_probe;
            an * (fam.value(n, z)? - at_probe)
        };
        u += inc;
        peak = peak.max(u.norm());
        last = [last[1], last[2], inc.norm()];
        if inc.norm() <= tol * peak {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
    }
    let mut warnings = Vec::new();
    if used == coeffs.len() && small < 3 && !terminated {
        warnings.push(format!("slow convergence: all {used} terms used"));
    }
    let est_error = if terminated && used == coeffs.len() {
        0.0
    } else {
        last.iter().sum()
    };
    Ok(SeriesSum {
        u,
        terms_used: used,
        est_error,
        c0,
        warnings,
    })
}

/// Number of terms worth computing for a point at relative distance
/// `ratio` from the center.
pub(crate) fn terms_needed(ratio: f64, tol: f64, n_max: usize) -> usize {
    if ratio <= 0.0 {
        return 8.min(n_max);
    }
    let est = (tol.ln() / ratio.ln()).abs() + 15.0;
    (est.ceil() as usize).min(n_max)
}

/// `C₀ + Σ a_n u_n(z)` with the tail rule of [`ExpansionSpec::tol`].
///
/// Finite centers need `|z - center| < 0.95 × radius`; the expansion at ∞
/// is summed only when its coefficients terminate.
pub fn sum_expansion(p: &HeunParams, spec: &ExpansionSpec, z: Complex) -> Result<SeriesSum> {
    check_center_mu(spec.center, spec.mu)?;
    let fam = Canonical { p, spec: *spec };
    let mut s = adaptive_sum(p, &fam, spec.center, z, spec.tol, spec.n_max, |n| {
        coefficients(p, spec, n)
    })?;
    if !(spec.center == Center::Origin || p.a().norm() >= 1.0 && z.norm() <= 1.0) {
        s.warnings.push("outside the |z| <= 1 <= |a| convention".into());
    }
    Ok(s)
}

/// Relative distance of `z` from `center`, checked against the disc of
/// convergence (0 for ∞).
pub(crate) fn checked_ratio(p: &HeunParams, center: Center, z: Complex) -> Result<f64> {
    let radius = radius_at(p, center)?;
    match center.point(p) {
        Some(c) => {
            let r = (z - c).norm() / radius;
            if r >= 0.95 {
                return Err(HeunError::Domain(format!(
                    "|z - center| = {:.4} is not inside 0.95 x radius {radius:.4}",
                    (z - c).norm()
                )));
            }
            Ok(r)
        }
        None => Ok(0.0),
    }
}

/// Adaptive joint-increment summation: coefficients are recomputed with a
/// doubled count until the tail rule is met or `n_max` is reached.
pub(crate) fn adaptive_sum<F, G>(
    p: &HeunParams,
    fam: &F,
    center: Center,
    z: Complex,
    tol: f64,
    n_max: usize,
    coeffs: G,
) -> Result<SeriesSum>
where
    F: TermFamily + ?Sized,
    G: Fn(usize) -> Result<CoefficientSequence>,
{
    let ratio = checked_ratio(p, center, z)?;
    let mut n_terms = terms_needed(ratio, tol, n_max);
    let probe = default_probe(p, center)?;
    loop {
        let cs = coeffs(n_terms)?;
        if center == Center::Infinity && !cs.terminated {
            return Err(HeunError::Domain(
                "the expansion at infinity converges only for |z| > max(1, |a|, |q/(alpha beta)|); \
                 it is summed here only when the coefficients terminate"
                    .into(),
            ));
        }
        let s = sum_family(p, fam, &cs.values, probe, z, tol, cs.terminated)?;
        if s.warnings.is_empty() || n_terms >= n_max {
            return Ok(s);
        }
        n_terms = (2 * n_terms).min(n_max);
    }
}

#[cfg(test)]
mod tests;
