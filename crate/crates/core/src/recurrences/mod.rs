//! Four-term recurrences for the Frobenius coefficients of the derivative
//! equation, their two-term closed forms, convergence radii and
//! right-hand termination.
//!
//! At a finite center `z_c` the derivative equation, cleared of
//! denominators, reads `P2 v'' + P1 v' + P0 v = 0` with
//!
//! ```text
//! P2 = z(z-1)(z-a)(αβz-q)
//! P1 = [(1-γ)(z-1)(z-a) + (1-δ)z(z-a) + (1-ε)z(z-1)](αβz-q) - αβ z(z-1)(z-a)
//! P0 = (αβz-q)²
//! ```
//!
//! and `v = Σ a_n (z-z_c)^{n+μ}` gives
//! `S_n a_n + R_{n-1} a_{n-1} + Q_{n-2} a_{n-2} + P_{n-3} a_{n-3} = 0`.
//! The origin and `q/(αβ)` coefficients are implemented from their
//! closed expressions; the centers `1`, `a` and `∞` use the same relation
//! built from the shifted polynomial coefficients.

mod termination;

pub use termination::{solve_termination, PinnedExponent, Poly, TerminationRoot};

use crate::heun_model::{classify, CLASSIFY_TOL};
use crate::specials::{cpow, is_integer};
use crate::{Complex, HeunError, HeunParams, ReductionClass, Result};

/// Relative size below which a coefficient counts as zero when detecting
/// right-hand termination.
pub const ZERO_COEFF: f64 = 1e-13;

/// Expansion center of a recurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum RecurrenceKind {
    Origin,
    AtZ0,
    One,
    A,
    Infinity,
}

/// Evaluator `n ↦ (S_n, R_n, Q_n, P_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceCoeffs {
    pub kind: RecurrenceKind,
    pub params: HeunParams,
    pub mu: Complex,
    /// 1 when `S_n` vanishes identically and `R_n` becomes the pivot.
    shift: usize,
    /// Shifted polynomial coefficients for the centers 1, a, ∞.
    polys: Option<CenterPolys>,
}

#[derive(Debug, Clone, PartialEq)]
struct CenterPolys {
    p2: [Complex; 5],
    p1: [Complex; 4],
    p0: [Complex; 3],
}

fn poly_mul(a: &[Complex], b: &[Complex]) -> Vec<Complex> {
    let mut out = vec![Complex::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(a: &[Complex], b: &[Complex]) -> Vec<Complex> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or_default() + b.get(i).copied().unwrap_or_default())
        .collect()
}

fn scale(a: &[Complex], s: Complex) -> Vec<Complex> {
    a.iter().map(|&x| x * s).collect()
}

/// Coefficients of the cleared derivative equation in powers of `z - zc`.
fn derivative_polys(p: &HeunParams, zc: Complex) -> CenterPolys {
    let one = Complex::new(1.0, 0.0);
    let lin = |root: Complex| [zc - root, one];
    let (l0, l1, la) = (lin(Complex::new(0.0, 0.0)), lin(one), lin(p.a()));
    let ab = p.ab();
    let lq = [ab * zc - p.q(), ab];
    let cubic = poly_mul(&poly_mul(&l0, &l1), &la);
    let p2 = poly_mul(&cubic, &lq);
    let w = poly_add(
        &poly_add(
            &scale(&poly_mul(&l1, &la), 1.0 - p.gamma()),
            &scale(&poly_mul(&l0, &la), 1.0 - p.delta()),
        ),
        &scale(&poly_mul(&l0, &l1), 1.0 - p.epsilon()),
    );
    let p1 = poly_add(&poly_mul(&w, &lq), &scale(&cubic, -ab));
    let p0 = poly_mul(&lq, &lq);
    let mut out = CenterPolys {
        p2: [Complex::new(0.0, 0.0); 5],
        p1: [Complex::new(0.0, 0.0); 4],
        p0: [Complex::new(0.0, 0.0); 3],
    };
    out.p2.copy_from_slice(&p2);
    out.p1[..p1.len()].copy_from_slice(&p1);
    out.p0.copy_from_slice(&p0);
    out
}

impl CenterPolys {
    /// `F_s(ρ) = ρ(ρ-1) p2_{s+1} + ρ p1_s + p0_{s-1}` (finite center).
    fn finite(&self, s: usize, rho: Complex) -> Complex {
        let get = |v: &[Complex], i: isize| {
            if i < 0 {
                Complex::default()
            } else {
                v.get(i as usize).copied().unwrap_or_default()
            }
        };
        let s = s as isize;
        rho * (rho - 1.0) * get(&self.p2, s + 1) + rho * get(&self.p1, s) + get(&self.p0, s - 1)
    }

    /// `G_s(ρ) = ρ(ρ-1) p2_{4-s} + ρ p1_{3-s} + p0_{2-s}` (center at ∞,
    /// polynomials about 0, `ρ = -(n+μ)`).
    fn infinite(&self, s: usize, rho: Complex) -> Complex {
        let get = |v: &[Complex], i: isize| {
            if i < 0 {
                Complex::default()
            } else {
                v.get(i as usize).copied().unwrap_or_default()
            }
        };
        let s = s as isize;
        rho * (rho - 1.0) * get(&self.p2, 4 - s) + rho * get(&self.p1, 3 - s) + get(&self.p0, 2 - s)
    }
}

impl RecurrenceCoeffs {
    /// `(S_n, R_n, Q_n, P_n)`.
    pub fn at(&self, n: usize) -> [Complex; 4] {
        let p = &self.params;
        let (a, q, ab) = (p.a(), p.q(), p.ab());
        let (g, d, e) = (p.gamma(), p.delta(), p.epsilon());
        let m = n as f64 + self.mu;
        match self.kind {
            RecurrenceKind::Origin => [
                -a * q * m * (m - g),
                q * q + m * m * (q + a * q + a * ab) - m * (a * ab * (1.0 + g) + q * (g + e - 1.0 + a * (g + d - 1.0))),
                -m * m * (q + (1.0 + a) * ab) + m * (q * (g + d + e - 2.0) + ab * (g + a * g + a * d + e))
                    - 2.0 * q * ab,
                ab * (m - p.alpha()) * (m - p.beta()),
            ],
            RecurrenceKind::AtZ0 => {
                let z0 = q / ab;
                let mn = m - 1.0;
                let sum = g + d + e;
                [
                    z0 * (z0 - 1.0) * (z0 - a) * m * (m - 2.0),
                    m * (z0 * z0 * (3.0 * mn - sum) + z0 * (g + e - 2.0 * mn + a * (g + d - 2.0 * mn)) + a * (mn - g)),
                    m * (z0 * (3.0 * m - 2.0 * sum) + (g - m) * (1.0 + a) + e + a * d),
                    (m - p.alpha()) * (m - p.beta()),
                ]
            }
            RecurrenceKind::One | RecurrenceKind::A => {
                let c = self.polys.as_ref().expect("center polynomials");
                [c.finite(0, m), c.finite(1, m), c.finite(2, m), c.finite(3, m)]
            }
            RecurrenceKind::Infinity => {
                let c = self.polys.as_ref().expect("center polynomials");
                [
                    c.infinite(0, -m),
                    c.infinite(1, -m),
                    c.infinite(2, -m),
                    c.infinite(3, -m),
                ]
            }
        }
    }

    /// Number of leading coefficient functions that vanish identically
    /// (0, or 1 when `S_n ≡ 0`).
    pub fn shift(&self) -> usize {
        self.shift
    }

    /// Rough magnitude of the coefficients near `n`, for relative tests.
    fn scale_at(&self, n: usize) -> f64 {
        let c = self.at(n);
        c.iter().map(|x| x.norm()).fold(0.0, f64::max).max(1e-300)
    }

    fn pivot(&self, n: usize) -> Complex {
        self.at(n)[self.shift]
    }
}

fn check_leading(rc: RecurrenceCoeffs, allowed: &str) -> Result<RecurrenceCoeffs> {
    let piv = rc.pivot(0);
    let scale = (0..4).map(|k| rc.scale_at(k)).fold(0.0, f64::max);
    if piv.norm() > 1e-9 * scale {
        return Err(HeunError::Exponent(format!(
            "mu = {} does not start a series at {:?} (allowed: {allowed})",
            rc.mu, rc.kind
        )));
    }
    Ok(rc)
}

/// Recurrence at `z = 0`, `μ ∈ {0, γ}` (`μ ∈ {0, 1+γ}` when `q = 0`).
pub fn origin_coeffs(p: &HeunParams, mu: Complex) -> Result<RecurrenceCoeffs> {
    if is_integer(p.gamma()) {
        return Err(HeunError::Exponent(format!("gamma = {} is an integer", p.gamma())));
    }
    let q_zero = p.q().norm() < CLASSIFY_TOL;
    let rc = RecurrenceCoeffs {
        kind: RecurrenceKind::Origin,
        params: *p,
        mu,
        shift: usize::from(q_zero),
        polys: None,
    };
    check_leading(rc, if q_zero { "0, 1+gamma" } else { "0, gamma" })
}

/// Recurrence at `z₀ = q/(αβ)`, `μ ∈ {0, 2}`.
pub fn z0_coeffs(p: &HeunParams, mu: Complex) -> Result<RecurrenceCoeffs> {
    if p.ab().norm() < CLASSIFY_TOL {
        return Err(HeunError::Regime(
            "alpha*beta = 0: the point q/(alpha beta) is at infinity".into(),
        ));
    }
    if (mu.norm() > 1e-12) && ((mu - 2.0).norm() > 1e-12) {
        return Err(HeunError::Exponent(format!(
            "mu = {mu} at q/(alpha beta); allowed 0, 2"
        )));
    }
    Ok(RecurrenceCoeffs {
        kind: RecurrenceKind::AtZ0,
        params: *p,
        mu,
        shift: 0,
        polys: None,
    })
}

/// Recurrence at `z = 1` (`μ ∈ {0, δ}`), `z = a` (`μ ∈ {0, ε}`) or
/// `z = ∞` (`μ ∈ {-α, -β}`), or the origin and `q/(αβ)` through the same
/// polynomial route.
pub fn center_coeffs(p: &HeunParams, kind: RecurrenceKind, mu: Complex) -> Result<RecurrenceCoeffs> {
    let zc = match kind {
        RecurrenceKind::Origin => return origin_coeffs(p, mu),
        RecurrenceKind::AtZ0 => return z0_coeffs(p, mu),
        RecurrenceKind::One => Complex::new(1.0, 0.0),
        RecurrenceKind::A => p.a(),
        RecurrenceKind::Infinity => Complex::new(0.0, 0.0),
    };
    let polys = derivative_polys(p, zc);
    let mut rc = RecurrenceCoeffs {
        kind,
        params: *p,
        mu,
        shift: 0,
        polys: Some(polys),
    };
    let s_scale = (0..3).map(|n| rc.at(n)[0].norm()).fold(0.0, f64::max);
    let all_scale = (0..3).map(|n| rc.scale_at(n)).fold(0.0, f64::max);
    if s_scale < 1e-12 * all_scale {
        rc.shift = 1;
    }
    let allowed = match kind {
        RecurrenceKind::One => "0, delta",
        RecurrenceKind::A => "0, epsilon",
        _ => "-alpha, -beta",
    };
    check_leading(rc, allowed)
}

/// Generic-route evaluator at a finite center, for cross-checking the
/// closed expressions.
pub fn generic_finite_coeffs(p: &HeunParams, zc: Complex, mu: Complex, n: usize) -> [Complex; 4] {
    let c = derivative_polys(p, zc);
    let m = n as f64 + mu;
    [c.finite(0, m), c.finite(1, m), c.finite(2, m), c.finite(3, m)]
}

/// Coefficients `a_0 = 1, a_1, …` of one Frobenius solution.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSequence {
    pub values: Vec<Complex>,
    pub mu: Complex,
    pub kind: RecurrenceKind,
    /// True when the series was found to terminate (the values end at the
    /// last nonzero coefficient).
    pub terminated: bool,
}

impl CoefficientSequence {
    /// Largest defect of the recurrence, relative to its largest term, over
    /// all computed indices (and three past the end of a terminated
    /// sequence, where the coefficients are zero).
    pub fn max_defect(&self, rc: &RecurrenceCoeffs) -> f64 {
        let a = &self.values;
        let mut worst: f64 = 0.0;
        let k = 4 - rc.shift;
        let end = if self.terminated { a.len() + 3 } else { a.len() };
        for n in 1..end {
            let mut sum = Complex::new(0.0, 0.0);
            let mut mag: f64 = 0.0;
            for j in 0..k {
                if n >= j && n - j < a.len() {
                    let t = rc.at(n - j)[j + rc.shift] * a[n - j];
                    sum += t;
                    mag = mag.max(t.norm());
                }
            }
            if mag > 0.0 {
                worst = worst.max(sum.norm() / mag);
            }
        }
        worst
    }
}

/// Forward recursion with `a_0 = 1`.
///
/// A vanishing pivot is a resonance and fails, unless the rest of the
/// relation vanishes too, in which case the free coefficient is set to 0.
/// The sequence is marked terminated (and cut at the last nonzero
/// coefficient `a_N`) once the trailing coefficients vanish to
/// [`ZERO_COEFF`] relative and the last coefficient function `P_N` does
/// too.
pub fn run(rc: &RecurrenceCoeffs, n_max: usize) -> Result<CoefficientSequence> {
    forward(rc, n_max, true)
}

/// Forward recursion without termination detection.
pub(crate) fn run_raw(rc: &RecurrenceCoeffs, n_max: usize) -> Result<Vec<Complex>> {
    Ok(forward(rc, n_max, false)?.values)
}

fn forward(rc: &RecurrenceCoeffs, n_max: usize, detect: bool) -> Result<CoefficientSequence> {
    let terms = 4 - rc.shift;
    let mut a = vec![Complex::new(1.0, 0.0)];
    let mut peak: f64 = 1.0;
    let mut zero_run = 0;
    for n in 1..=n_max {
        let pivot = rc.pivot(n);
        let mut rhs = Complex::new(0.0, 0.0);
        let mut mag: f64 = 0.0;
        for j in 1..terms {
            if n >= j {
                let t = rc.at(n - j)[j + rc.shift] * a[n - j];
                rhs -= t;
                mag = mag.max(t.norm());
            }
        }
        let scale = rc.scale_at(n);
        let an = if pivot.norm() <= 1e-12 * scale {
            if rhs.norm() <= 1e-12 * mag.max(f64::MIN_POSITIVE) || mag == 0.0 {
                Complex::new(0.0, 0.0)
            } else {
                return Err(HeunError::ZeroPivot { n });
            }
        } else {
            rhs / pivot
        };
        if !(an.re.is_finite() && an.im.is_finite()) {
            return Err(HeunError::NonFinite("recurrence"));
        }
        a.push(an);
        peak = peak.max(an.norm());
        if an.norm() <= ZERO_COEFF * peak {
            zero_run += 1;
        } else {
            zero_run = 0;
        }
        if detect && zero_run >= terms - 1 {
            let last = n - zero_run;
            let p_last = rc.at(last)[3];
            if p_last.norm() <= 1e-10 * rc.scale_at(last) {
                a.truncate(last + 1);
                return Ok(CoefficientSequence {
                    values: a,
                    mu: rc.mu,
                    kind: rc.kind,
                    terminated: true,
                });
            }
        }
    }
    Ok(CoefficientSequence {
        values: a,
        mu: rc.mu,
        kind: rc.kind,
        terminated: false,
    })
}

/// Coefficients of the two-term regime `q = 0, a = -1, δ = ε`:
/// `a_n = [(1 + (-1)^n)/2] c_{n/2}` with
/// `c_k = ((μ-α)/2)_k ((μ-β)/2)_k / ((1 + μ/2)_k ((1-γ+μ)/2)_k)`,
/// `μ ∈ {0, 1+γ}`.
pub fn closed_form_origin(p: &HeunParams, mu: Complex, n_max: usize) -> Result<CoefficientSequence> {
    if !classify(p, CLASSIFY_TOL).contains(&ReductionClass::TwoTermOrigin) {
        return Err(HeunError::Regime(
            "two-term origin recurrence needs q = 0, a = -1, delta = epsilon".into(),
        ));
    }
    if mu.norm() > 1e-12 && (mu - 1.0 - p.gamma()).norm() > 1e-12 {
        return Err(HeunError::Exponent(format!("mu = {mu}; allowed 0, 1+gamma")));
    }
    let (u1, u2) = ((mu - p.alpha()) / 2.0, (mu - p.beta()) / 2.0);
    let (l1, l2) = (1.0 + mu / 2.0, (1.0 - p.gamma() + mu) / 2.0);
    let mut values = Vec::with_capacity(n_max + 1);
    let mut ck = Complex::new(1.0, 0.0);
    for n in 0..=n_max {
        if n % 2 == 1 {
            values.push(Complex::new(0.0, 0.0));
            continue;
        }
        values.push(ck);
        let k = (n / 2) as f64;
        ck *= (u1 + k) * (u2 + k) / ((l1 + k) * (l2 + k));
    }
    Ok(CoefficientSequence {
        values,
        mu,
        kind: RecurrenceKind::Origin,
        terminated: false,
    })
}

/// Coefficients of the two-term regime at `z₀ = (1+a)/3` for
/// `a = e^{±iπ/3}`, `q = αβ(1+a)/3`, `γ = δ = ε`:
/// `a_n = [(1 + a^{2n} + a^{-2n})/3] c_{n/3}` with
/// `c_k = (3a)^{3k/2} ((μ-α)/3)_k ((μ-β)/3)_k / ((1+μ/3)_k ((1+μ)/3)_k)`,
/// principal branch of `(3a)^{3/2}`.
pub fn closed_form_z0(p: &HeunParams, mu: Complex, n_max: usize) -> Result<CoefficientSequence> {
    if !classify(p, CLASSIFY_TOL).contains(&ReductionClass::MaierCase) {
        return Err(HeunError::Regime(
            "two-term q/(alpha beta) recurrence needs the cubic-root regime".into(),
        ));
    }
    if mu.norm() > 1e-12 && (mu - 2.0).norm() > 1e-12 {
        return Err(HeunError::Exponent(format!("mu = {mu}; allowed 0, 2")));
    }
    let a = p.a();
    let step = cpow(3.0 * a, Complex::new(1.5, 0.0));
    let (u1, u2) = ((mu - p.alpha()) / 3.0, (mu - p.beta()) / 3.0);
    let (l1, l2) = (1.0 + mu / 3.0, (1.0 + mu) / 3.0);
    let mut values = Vec::with_capacity(n_max + 1);
    let mut ck = Complex::new(1.0, 0.0);
    for n in 0..=n_max {
        if n % 3 != 0 {
            values.push(Complex::new(0.0, 0.0));
            continue;
        }
        let selector = (1.0 + a.powi(2 * n as i32) + a.powi(-2 * n as i32)) / 3.0;
        values.push(selector * ck);
        let k = (n / 3) as f64;
        ck *= step * (u1 + k) * (u2 + k) / ((l1 + k) * (l2 + k));
    }
    Ok(CoefficientSequence {
        values,
        mu,
        kind: RecurrenceKind::AtZ0,
        terminated: false,
    })
}

/// Convergence radius of a power series together with the limits of
/// `a_n / a_{n-1}` predicted by Poincaré–Perron.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RadiusInfo {
    pub radius: f64,
    pub roots: Vec<Complex>,
    /// True when the center coincides with another singular point.
    pub degenerate: bool,
}

/// `min{1, |a|, |q/(αβ)|}`, or `min{1, |a|}` when `q = 0` or `αβ = 0`;
/// roots of the characteristic cubic `{1, 1/a, αβ/q}`.
pub fn radius_origin(p: &HeunParams) -> RadiusInfo {
    let one = Complex::new(1.0, 0.0);
    let mut roots = vec![one, 1.0 / p.a()];
    let mut radius = 1f64.min(p.a().norm());
    if p.q().norm() >= CLASSIFY_TOL && p.ab().norm() >= CLASSIFY_TOL {
        roots.push(p.ab() / p.q());
        radius = radius.min((p.q() / p.ab()).norm());
    }
    RadiusInfo {
        radius,
        roots,
        degenerate: false,
    }
}

/// Distance from `z₀ = q/(αβ)` to the nearest of `0, 1, a`; the roots are
/// `1/(s - z₀)` for those points.
pub fn radius_z0(p: &HeunParams) -> Result<RadiusInfo> {
    let z0 = p
        .z0()
        .filter(|_| p.ab().norm() >= CLASSIFY_TOL)
        .ok_or_else(|| HeunError::Regime("alpha*beta = 0".into()))?;
    let pts = [Complex::new(0.0, 0.0), Complex::new(1.0, 0.0), p.a()];
    let radius = pts.iter().map(|s| (s - z0).norm()).fold(f64::INFINITY, f64::min);
    let roots = pts
        .iter()
        .filter(|s| (*s - z0).norm() > 0.0)
        .map(|s| 1.0 / (s - z0))
        .collect();
    Ok(RadiusInfo {
        radius,
        roots,
        degenerate: radius < CLASSIFY_TOL,
    })
}
