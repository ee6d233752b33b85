//! Direct numerical integration of the Heun equation, used as ground truth
//! for every series in this crate.
//!
//! The equation is integrated as a first-order system in `(u, u')` along
//! piecewise-linear complex paths with an embedded Dormand–Prince 5(4)
//! pair. A Frobenius seed at `z = 0` supplies initial data close to the
//! origin. A fixed-step Taylor integrator is kept alongside for
//! validating the Runge–Kutta results.

use crate::specials::{cpow, is_integer};
use crate::{Complex, HeunError, HeunParams, Result};

/// Default distance between the seed start and the origin.
pub const DEFAULT_START: f64 = 0.05;
/// Default Frobenius seed order.
pub const DEFAULT_ORDER: usize = 12;
/// Default minimum distance between a path and the singular points.
pub const DEFAULT_CLEARANCE: f64 = 0.1;

/// Polynomial coefficients `P2 u'' + P1 u' + P0 u = 0` of the cleared
/// Heun equation: `P2 = z(z-1)(z-a)`, `P1 = γ(z-1)(z-a) + δz(z-a) +
/// εz(z-1)`, `P0 = αβz - q`.
pub fn heun_polys(p: &HeunParams, z: Complex) -> (Complex, Complex, Complex) {
    let a = p.a();
    let p2 = z * (z - 1.0) * (z - a);
    let p1 = p.gamma() * (z - 1.0) * (z - a) + p.delta() * z * (z - a) + p.epsilon() * z * (z - 1.0);
    let p0 = p.ab() * z - p.q();
    (p2, p1, p0)
}

/// `z(z-1)(z-a)` times the left side of the Heun equation.
pub fn residual(p: &HeunParams, z: Complex, u: Complex, du: Complex, ddu: Complex) -> Complex {
    let (p2, p1, p0) = heun_polys(p, z);
    p2 * ddu + p1 * du + p0 * u
}

/// Cleared residual of the equation obeyed by `v = z^γ (z-1)^δ (z-a)^ε u'`:
/// `z(z-1)(z-a)(αβz-q) v'' + ([(1-γ)(z-1)(z-a) + (1-δ)z(z-a) +
/// (1-ε)z(z-1)](αβz-q) - αβ z(z-1)(z-a)) v' + (αβz-q)² v`.
pub fn derivative_residual(p: &HeunParams, z: Complex, v: Complex, dv: Complex, ddv: Complex) -> Complex {
    let a = p.a();
    let s = z * (z - 1.0) * (z - a);
    let l = p.ab() * z - p.q();
    let w =
        (1.0 - p.gamma()) * (z - 1.0) * (z - a) + (1.0 - p.delta()) * z * (z - a) + (1.0 - p.epsilon()) * z * (z - 1.0);
    s * l * ddv + (w * l - p.ab() * s) * dv + l * l * v
}

/// `u''` from the equation itself.
pub fn second_derivative(p: &HeunParams, z: Complex, u: Complex, du: Complex) -> Complex {
    let (p2, p1, p0) = heun_polys(p, z);
    -(p1 * du + p0 * u) / p2
}

/// Residual `|P2 u'' + P1 u' + P0 u|` relative to the largest of its three
/// terms, with `u'` and `u''` from central differences at steps `h`, `h/2`
/// and `h/4` combined by Richardson extrapolation. The step is capped at
/// `h_max` and at a twentieth of the distance to the nearest singular point.
pub fn finite_difference_residual<F>(p: &HeunParams, f: F, z: Complex, h_max: f64) -> Result<f64>
where
    F: Fn(Complex) -> Result<Complex>,
{
    let dist = [z.norm(), (z - 1.0).norm(), (z - p.a()).norm()]
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let h = h_max.min(0.05 * dist);
    let u = f(z)?;
    let diffs = |h: f64| -> Result<(Complex, Complex)> {
        let (up, um) = (f(z + h)?, f(z - h)?);
        Ok(((up - um) / (2.0 * h), (up - 2.0 * u + um) / (h * h)))
    };
    let levels = [diffs(h)?, diffs(h / 2.0)?, diffs(h / 4.0)?];
    let extrapolate = |pick: fn(&(Complex, Complex)) -> Complex| {
        let first: Vec<Complex> = levels
            .windows(2)
            .map(|w| (4.0 * pick(&w[1]) - pick(&w[0])) / 3.0)
            .collect();
        (16.0 * first[1] - first[0]) / 15.0
    };
    let du = extrapolate(|d| d.0);
    let ddu = extrapolate(|d| d.1);
    let (p2, p1, p0) = heun_polys(p, z);
    let scale = (p2 * ddu).norm().max((p1 * du).norm()).max((p0 * u).norm());
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok((p2 * ddu + p1 * du + p0 * u).norm() / scale)
}

/// Which indicial root at `z = 0` a seed follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedExponent {
    Zero,
    OneMinusGamma,
}

/// Truncated Frobenius series `z^r Σ c_m z^m` of the Heun equation at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalSeed {
    pub center: Complex,
    pub exponent: Complex,
    pub coefficients: Vec<Complex>,
    pub order: usize,
}

impl LocalSeed {
    /// `(u, u')` at `z`, principal branch of `z^r`.
    pub fn eval(&self, z: Complex) -> (Complex, Complex) {
        let w = z - self.center;
        let mut u = Complex::new(0.0, 0.0);
        let mut du = Complex::new(0.0, 0.0);
        let mut pw = Complex::new(1.0, 0.0);
        for (m, &c) in self.coefficients.iter().enumerate() {
            u += c * pw;
            du += c * pw * (m as f64 + self.exponent);
            pw *= w;
        }
        let zr = cpow(w, self.exponent);
        (u * zr, du * zr / w)
    }
}

/// Frobenius seed at `z = 0` with `c₀ = 1`:
/// `c_m = -[A(m-1+r) c_{m-1} + (m-2+r+α)(m-2+r+β) c_{m-2}] / (a (m+r)(m+r-1+γ))`,
/// `A(ρ) = -(1+a)ρ(ρ-1) - (γ(1+a) + δa + ε)ρ - q`.
pub fn frobenius_seed(p: &HeunParams, exponent: SeedExponent, order: usize) -> Result<LocalSeed> {
    let (a, g) = (p.a(), p.gamma());
    let r = match exponent {
        SeedExponent::Zero => Complex::new(0.0, 0.0),
        SeedExponent::OneMinusGamma => {
            if (g - 1.0).norm() < 1e-12 {
                return Err(HeunError::Resonance("gamma = 1: both exponents are 0".into()));
            }
            1.0 - g
        }
    };
    let lin = g * (1.0 + a) + p.delta() * a + p.epsilon();
    let a_fn = |rho: Complex| -(1.0 + a) * rho * (rho - 1.0) - lin * rho - p.q();
    let b_fn = |rho: Complex| (rho + p.alpha()) * (rho + p.beta());
    let mut c = vec![Complex::new(1.0, 0.0)];
    for m in 1..=order {
        let mf = m as f64;
        let den = a * (mf + r) * (mf + r - 1.0 + g);
        let mut num = a_fn(mf - 1.0 + r) * c[m - 1];
        if m >= 2 {
            num += b_fn(mf - 2.0 + r) * c[m - 2];
        }
        if den.norm() < 1e-12 {
            if num.norm() < 1e-12 && !is_integer(g) {
                c.push(Complex::new(0.0, 0.0));
                continue;
            }
            return Err(HeunError::Resonance(format!(
                "indicial roots differ by the integer {m}; no log-free seed"
            )));
        }
        c.push(-num / den);
    }
    Ok(LocalSeed {
        center: Complex::new(0.0, 0.0),
        exponent: r,
        coefficients: c,
        order,
    })
}

/// Piecewise-linear path avoiding the finite singular points.
#[derive(Debug, Clone, PartialEq)]
pub struct OraclePath {
    pub waypoints: Vec<Complex>,
    pub clearance: f64,
}

fn singular_points(p: &HeunParams) -> Vec<Complex> {
    let mut s = vec![Complex::new(0.0, 0.0), Complex::new(1.0, 0.0), p.a()];
    if let Some(z0) = p.z0() {
        s.push(z0);
    }
    s
}

fn segment_distance(s: Complex, z0: Complex, z1: Complex) -> (f64, Complex) {
    let d = z1 - z0;
    let t = (((s - z0) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
    let c = z0 + d * t;
    ((s - c).norm(), c)
}

impl OraclePath {
    /// Validate a path: consecutive waypoints distinct and every segment at
    /// least `clearance` away from `0, 1, a, q/(αβ)`. Near the origin the
    /// requirement is relaxed to 0.9 times the distance of the first
    /// waypoint, so that a path may leave a seed start point.
    pub fn new(p: &HeunParams, waypoints: Vec<Complex>, clearance: f64) -> Result<Self> {
        if waypoints.len() < 2 {
            return Err(HeunError::Precondition("a path needs at least two waypoints".into()));
        }
        let origin_clear = clearance.min(0.9 * waypoints[0].norm());
        for w in waypoints.windows(2) {
            if (w[1] - w[0]).norm() == 0.0 {
                return Err(HeunError::Precondition(format!("repeated waypoint {}", w[0])));
            }
            for (k, s) in singular_points(p).into_iter().enumerate() {
                let need = if k == 0 { origin_clear } else { clearance };
                let (dist, _) = segment_distance(s, w[0], w[1]);
                if dist < need {
                    return Err(HeunError::Precondition(format!(
                        "segment {} -> {} passes within {dist:.3} of singular point {s}",
                        w[0], w[1]
                    )));
                }
            }
        }
        Ok(OraclePath { waypoints, clearance })
    }

    /// Straight path from `start` to `end`, with a square detour of half
    /// width `2 · clearance` around any singular point closer than
    /// `clearance`. The detour passes on the side of the segment away from
    /// the point (to the left of the direction of travel if the point lies
    /// exactly on the segment).
    pub fn auto(p: &HeunParams, start: Complex, end: Complex, clearance: f64) -> Result<Self> {
        let sing = singular_points(p);
        let origin_clear = clearance.min(0.9 * start.norm());
        let mut pts = vec![start, end];
        for _ in 0..8 {
            let mut inserted = false;
            let mut out = vec![pts[0]];
            for w in pts.windows(2) {
                let (z0, z1) = (w[0], w[1]);
                let mut detour = None;
                for (k, &s) in sing.iter().enumerate() {
                    let need = if k == 0 { origin_clear } else { clearance };
                    let (dist, c) = segment_distance(s, z0, z1);
                    if dist < need && (s - z0).norm() > 1e-14 && (s - z1).norm() > 1e-14 {
                        let u = (z1 - z0) / (z1 - z0).norm();
                        let n = if dist > 1e-12 {
                            (c - s) / dist
                        } else {
                            u * Complex::new(0.0, 1.0)
                        };
                        let r = 2.0 * need;
                        detour = Some([s - u * r, s - u * r + n * r, s + u * r + n * r, s + u * r]);
                        break;
                    }
                }
                if let Some(d) = detour {
                    out.extend_from_slice(&d);
                    inserted = true;
                }
                out.push(z1);
            }
            pts = out;
            if !inserted {
                break;
            }
        }
        Self::new(p, pts, clearance.min(origin_clear.max(clearance)))
    }
}

// Dormand–Prince 5(4) tableau
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

type State = [Complex; 2];

fn rhs(p: &HeunParams, z: Complex, y: State) -> State {
    [y[1], second_derivative(p, z, y[0], y[1])]
}

/// Integrate one straight segment with step control on the error per unit
/// parameter length, so halving `rtol` more than halves the global error.
fn dopri_segment(p: &HeunParams, z0: Complex, z1: Complex, y0: State, rtol: f64) -> Result<State> {
    let d = z1 - z0;
    let f = |t: f64, y: State| {
        let k = rhs(p, z0 + d * t, y);
        [k[0] * d, k[1] * d]
    };
    let mut t = 0.0;
    let mut y = y0;
    let mut h: f64 = 0.05;
    let mut k1 = f(0.0, y);
    while t < 1.0 {
        h = h.min(1.0 - t);
        if h < 1e-13 {
            return Err(HeunError::StepUnderflow { z: z0 + d * t });
        }
        let mut k = [[Complex::new(0.0, 0.0); 2]; 7];
        k[0] = k1;
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let aij = A[s][j];
                if aij != 0.0 {
                    ys[0] += kj[0] * (h * aij);
                    ys[1] += kj[1] * (h * aij);
                }
            }
            k[s] = f(t + C[s] * h, ys);
        }
        let mut y5 = y;
        let mut e = [Complex::new(0.0, 0.0); 2];
        for s in 0..7 {
            for i in 0..2 {
                y5[i] += k[s][i] * (h * B5[s]);
                e[i] += k[s][i] * (h * (B5[s] - B4[s]));
            }
        }
        let scale = (y[0].norm_sqr() + y[1].norm_sqr())
            .sqrt()
            .max((y5[0].norm_sqr() + y5[1].norm_sqr()).sqrt())
            .max(1e-300);
        let err = (e[0].norm_sqr() + e[1].norm_sqr()).sqrt() / (rtol * scale * h);
        if !err.is_finite() {
            h *= 0.2;
            continue;
        }
        if err <= 1.0 {
            t += h;
            y = y5;
            k1 = k[6];
        }
        let fac = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.25)).clamp(0.2, 5.0)
        };
        h *= fac;
    }
    Ok(y)
}

/// One sample of an oracle trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSample {
    pub z: Complex,
    pub u: Complex,
    pub du: Complex,
}

/// Integrate from the point `path.waypoints[0]` with initial data `(u, u')`
/// through all waypoints; returns the solution at each waypoint.
pub fn integrate_ivp(
    p: &HeunParams,
    u0: Complex,
    du0: Complex,
    path: &OraclePath,
    rtol: f64,
) -> Result<Vec<OracleSample>> {
    let mut y = [u0, du0];
    let mut out = vec![OracleSample {
        z: path.waypoints[0],
        u: u0,
        du: du0,
    }];
    for w in path.waypoints.windows(2) {
        y = dopri_segment(p, w[0], w[1], y, rtol)?;
        out.push(OracleSample {
            z: w[1],
            u: y[0],
            du: y[1],
        });
    }
    Ok(out)
}

/// Integrate the Heun equation from the seed's data at the first waypoint.
///
/// The start point must lie within a tenth of the distance from the seed
/// center to the nearest other singular point.
pub fn integrate(p: &HeunParams, seed: &LocalSeed, path: &OraclePath, rtol: f64) -> Result<Vec<OracleSample>> {
    let start = path.waypoints[0];
    let nearest = singular_points(p)
        .into_iter()
        .filter(|s| (s - seed.center).norm() > 1e-12)
        .map(|s| (s - seed.center).norm())
        .fold(f64::INFINITY, f64::min);
    let r = (start - seed.center).norm();
    if r == 0.0 || r > 0.1 * nearest + 1e-15 {
        return Err(HeunError::Precondition(format!(
            "start {start} is outside the seed disc (radius {})",
            0.1 * nearest
        )));
    }
    let (u, du) = seed.eval(start);
    integrate_ivp(p, u, du, path, rtol)
}

/// Seed start on the ray towards `z`, so the principal branch of `z^r`
/// at the seed matches the principal branch at `z`.
pub fn seed_start(p: &HeunParams, z: Complex) -> Complex {
    let nearest = singular_points(p)
        .into_iter()
        .filter(|s| s.norm() > 1e-12)
        .map(|s| s.norm())
        .fold(f64::INFINITY, f64::min);
    let r = DEFAULT_START.min(0.1 * nearest);
    if z.norm() == 0.0 {
        Complex::new(r, 0.0)
    } else {
        z / z.norm() * r
    }
}

/// `(u, u')` of the solution with the given exponent at 0 (normalised by
/// `c₀ = 1`), evaluated at `z` with default seed and path settings.
pub fn solve_at(p: &HeunParams, exponent: SeedExponent, z: Complex, rtol: f64) -> Result<(Complex, Complex)> {
    let seed = frobenius_seed(p, exponent, DEFAULT_ORDER)?;
    let start = seed_start(p, z);
    if (z - start).norm() < 1e-14 || z.norm() <= start.norm() {
        return Ok(seed.eval(z));
    }
    let path = OraclePath::auto(p, start, z, DEFAULT_CLEARANCE.min(0.5 * nearest_nonzero(p, z)))?;
    let out = integrate(p, &seed, &path, rtol)?;
    let last = out.last().expect("path has waypoints");
    Ok((last.u, last.du))
}

fn nearest_nonzero(p: &HeunParams, z: Complex) -> f64 {
    singular_points(p)
        .into_iter()
        .skip(1)
        .map(|s| (s - z).norm())
        .fold(DEFAULT_CLEARANCE * 2.0, f64::min)
}

/// Taylor coefficients of the cleared polynomials about `zc`:
/// `P2 = Σ p2[j] w^j` (cubic), `P1` (quadratic), `P0` (linear).
#[cfg(test)]
fn shifted_polys(p: &HeunParams, zc: Complex) -> ([Complex; 4], [Complex; 3], [Complex; 2]) {
    let a = p.a();
    // z(z-1)(z-a) = z³ - (1+a) z² + a z
    let e2 = -(1.0 + a);
    let p2 = [
        zc * zc * zc + e2 * zc * zc + a * zc,
        3.0 * zc * zc + 2.0 * e2 * zc + a,
        3.0 * zc + e2,
        Complex::new(1.0, 0.0),
    ];
    let (g, d, e) = (p.gamma(), p.delta(), p.epsilon());
    let s2 = g + d + e;
    let s1 = -(g * (1.0 + a) + d * a + e);
    let s0 = g * a;
    let p1 = [s2 * zc * zc + s1 * zc + s0, 2.0 * s2 * zc + s1, s2];
    let p0 = [p.ab() * zc - p.q(), p.ab()];
    (p2, p1, p0)
}

/// Fixed-step Taylor-series integration along a path, used to validate
/// the Runge–Kutta oracle. Each step expands the solution to `order`
/// terms about the current point and advances by `0.35` of the distance
/// to the nearest singular point.
#[cfg(test)]
fn taylor_reference(
    p: &HeunParams,
    u0: Complex,
    du0: Complex,
    waypoints: &[Complex],
    order: usize,
) -> Result<(Complex, Complex)> {
    let sing = singular_points(p);
    let mut y = [u0, du0];
    for w in waypoints.windows(2) {
        let (mut z, z1) = (w[0], w[1]);
        while (z1 - z).norm() > 0.0 {
            let dist = sing.iter().map(|s| (s - z).norm()).fold(f64::INFINITY, f64::min);
            if dist < 1e-8 {
                return Err(HeunError::StepUnderflow { z });
            }
            let step = 0.35 * dist;
            let remaining = z1 - z;
            let h = if remaining.norm() <= step {
                remaining
            } else {
                remaining / remaining.norm() * step
            };
            let (p2, p1, p0) = shifted_polys(p, z);
            let mut t = vec![Complex::new(0.0, 0.0); order + 1];
            t[0] = y[0];
            t[1] = y[1];
            for k in 0..order.saturating_sub(1) {
                let mut s = Complex::new(0.0, 0.0);
                for (j, &c2) in p2.iter().enumerate().take(4).skip(1) {
                    if k + 2 >= j {
                        let i = k + 2 - j;
                        s += c2 * (i as f64) * ((i as f64) - 1.0) * t[i];
                    }
                }
                for (j, &c) in p1.iter().enumerate() {
                    if k + 1 >= j {
                        let i = k + 1 - j;
                        s += c * (i as f64) * t[i];
                    }
                }
                for (j, &c) in p0.iter().enumerate() {
                    if k >= j {
                        s += c * t[k - j];
                    }
                }
                t[k + 2] = -s / (p2[0] * ((k + 2) as f64) * ((k + 1) as f64));
            }
            let mut u = Complex::new(0.0, 0.0);
            let mut du = Complex::new(0.0, 0.0);
            let mut pw = Complex::new(1.0, 0.0);
            for (k, &c) in t.iter().enumerate() {
                u += c * pw;
                if k + 1 < t.len() {
                    du += t[k + 1] * ((k + 1) as f64) * pw;
                }
                pw *= h;
            }
            y = [u, du];
            z += h;
        }
    }
    Ok((y[0], y[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use crate::specials::gauss_2f1;

    fn generic() -> HeunParams {
        HeunParams::real(3.0, 0.5, 1.2, 0.7, 0.8, 0.6).unwrap()
    }

    #[test]
    fn seed_first_coefficient() {
        let p = generic();
        let s = frobenius_seed(&p, SeedExponent::Zero, 1).unwrap();
        assert!((s.coefficients[1] - p.q() / (p.a() * p.gamma())).norm() < 1e-15);
        let s = frobenius_seed(&p.with_q(c(0.0)), SeedExponent::Zero, 3).unwrap();
        assert_eq!(s.coefficients[1], c(0.0));
        let s = frobenius_seed(&p, SeedExponent::OneMinusGamma, 4).unwrap();
        assert!((s.exponent - 0.2).norm() < 1e-15);
        let z = c(1e-3);
        let (u, _) = s.eval(z);
        assert!((u / z.powf(0.2) - 1.0).norm() < 1e-3);
    }

    #[test]
    fn seed_resonance() {
        let p = HeunParams::real(3.0, 0.5, 1.2, 0.7, 3.0, 0.6).unwrap();
        assert!(matches!(
            frobenius_seed(&p, SeedExponent::OneMinusGamma, 5),
            Err(HeunError::Resonance(_))
        ));
        let p = HeunParams::real(3.0, 0.5, 1.2, 0.7, -1.0, 0.6).unwrap();
        assert!(matches!(
            frobenius_seed(&p, SeedExponent::Zero, 5),
            Err(HeunError::Resonance(_))
        ));
    }

    #[test]
    fn seed_satisfies_equation_near_origin() {
        let p = generic();
        let s = frobenius_seed(&p, SeedExponent::Zero, 12).unwrap();
        // residual of the truncated series is O(z^12)
        let z = c(0.05);
        let h = 1e-4;
        let (u, du) = s.eval(z);
        let ddu = (s.eval(z + h).1 - s.eval(z - h).1) / (2.0 * h);
        let r = residual(&p, z, u, du, ddu);
        assert!(r.norm() < 1e-7, "{r}");
    }

    #[test]
    fn hypergeometric_corner() {
        // ε = 0 and q = aαβ: the equation is Gauss' hypergeometric equation
        let (a, al, be, ga) = (2.5, 0.9, 0.6, 0.7);
        let p = HeunParams::real(a, a * al * be, al, be, ga, 1.0 + al + be - ga).unwrap();
        assert!(p.epsilon().norm() < 1e-15);
        let z = c(0.4);
        let (u, du) = solve_at(&p, SeedExponent::Zero, z, 1e-11).unwrap();
        let f = gauss_2f1(c(al), c(be), c(ga), z, 1e-16).unwrap();
        let df = al * be / ga * gauss_2f1(c(al + 1.0), c(be + 1.0), c(ga + 1.0), z, 1e-16).unwrap();
        assert!((u - f).norm() < 1e-9, "{u} {f}");
        let ddu = second_derivative(&p, z, u, du);
        let ddf = al * (al + 1.0) * be * (be + 1.0) / (ga * (ga + 1.0))
            * gauss_2f1(c(al + 2.0), c(be + 2.0), c(ga + 2.0), z, 1e-16).unwrap();
        assert!(residual(&p, z, f, df, ddf).norm() < 1e-12);
        assert!((ddu - ddf).norm() < 1e-8);
    }

    #[test]
    fn constant_solution_when_alpha_vanishes() {
        let p = HeunParams::real(3.0, 0.0, 0.0, 0.7, 0.8, 0.6).unwrap();
        let path = OraclePath::new(&p, vec![c(0.2), Complex::new(0.4, 0.3), c(0.5)], 0.1).unwrap();
        let out = integrate_ivp(&p, c(1.0), c(0.0), &path, 1e-10).unwrap();
        for s in out {
            assert!((s.u - 1.0).norm() < 1e-14 && s.du.norm() < 1e-14);
        }
        assert_eq!(residual(&p, c(0.3), c(0.0), c(0.0), c(0.0)), c(0.0));
    }

    #[test]
    fn runge_kutta_agrees_with_taylor_stepping() {
        let p = generic();
        let seed = frobenius_seed(&p, SeedExponent::Zero, DEFAULT_ORDER).unwrap();
        let path = OraclePath::new(&p, vec![c(0.05), c(0.3)], 0.1).unwrap();
        let rk = integrate(&p, &seed, &path, 1e-12).unwrap();
        let (u0, du0) = seed.eval(c(0.05));
        let (tu, _) = taylor_reference(&p, u0, du0, &path.waypoints, 50).unwrap();
        let u = rk.last().unwrap().u;
        assert!((u - tu).norm() < 1e-10, "{u} {tu}");
    }

    #[test]
    fn halving_rtol_more_than_halves_the_error() {
        let p = generic();
        let seed = frobenius_seed(&p, SeedExponent::Zero, DEFAULT_ORDER).unwrap();
        let path = OraclePath::new(&p, vec![c(0.05), Complex::new(0.35, 0.4)], 0.1).unwrap();
        let (u0, du0) = seed.eval(c(0.05));
        let (tu, _) = taylor_reference(&p, u0, du0, &path.waypoints, 50).unwrap();
        let err = |rtol: f64| (integrate(&p, &seed, &path, rtol).unwrap().last().unwrap().u - tu).norm();
        let (e1, e2) = (err(1e-7), err(5e-8));
        assert!(e1 >= 2.0 * e2, "{e1} {e2}");
    }

    #[test]
    fn homotopic_paths_agree() {
        let p = generic();
        let seed = frobenius_seed(&p, SeedExponent::OneMinusGamma, DEFAULT_ORDER).unwrap();
        let rtol = 1e-11;
        let end = c(0.4);
        let p1 = OraclePath::new(&p, vec![c(0.05), Complex::new(0.2, 0.2), end], 0.1).unwrap();
        let p2 = OraclePath::new(&p, vec![c(0.05), Complex::new(0.25, -0.15), end], 0.1).unwrap();
        let u1 = integrate(&p, &seed, &p1, rtol).unwrap().last().unwrap().u;
        let u2 = integrate(&p, &seed, &p2, rtol).unwrap().last().unwrap().u;
        assert!((u1 - u2).norm() < 10.0 * rtol * u1.norm().max(1.0));
    }

    #[test]
    fn path_validation_and_detours() {
        let p = generic();
        assert!(OraclePath::new(&p, vec![c(0.5), c(1.5)], 0.1).is_err());
        assert!(OraclePath::new(&p, vec![c(0.5), c(0.5)], 0.1).is_err());
        let path = OraclePath::auto(&p, c(0.3), c(1.5), 0.1).unwrap();
        assert!(path.waypoints.len() > 2);
        // z0 = q/(αβ) = 0.595... lies on the real axis: detour is inserted too
        let path = OraclePath::auto(&p, c(0.05), c(0.85), 0.1).unwrap();
        assert!(path.waypoints.len() > 2);
        let seed = frobenius_seed(&p, SeedExponent::Zero, 12).unwrap();
        assert!(integrate(
            &p,
            &seed,
            &OraclePath::new(&p, vec![c(0.2), c(0.3)], 0.1).unwrap(),
            1e-9
        )
        .is_err());
    }

    #[test]
    fn derivative_equation_along_trajectory() {
        let p = generic();
        let seed = frobenius_seed(&p, SeedExponent::Zero, DEFAULT_ORDER).unwrap();
        let zc = Complex::new(0.3, 0.1);
        let h = 0.01;
        let pts: Vec<Complex> = (-2..=2).map(|k| zc + h * k as f64).collect();
        let mut wp = vec![c(0.05)];
        wp.extend(pts.iter().copied());
        let path = OraclePath::new(&p, wp, 0.1).unwrap();
        let out = integrate(&p, &seed, &path, 1e-13).unwrap();
        let v = |s: &OracleSample| {
            let z = s.z;
            z.powc(p.gamma()) * (z - 1.0).powc(p.delta()) * (z - p.a()).powc(p.epsilon()) * s.du
        };
        let vs: Vec<Complex> = out[1..].iter().map(v).collect();
        // fourth-order central differences
        let dv = (vs[0] - 8.0 * vs[1] + 8.0 * vs[3] - vs[4]) / (12.0 * h);
        let ddv = (-vs[0] + 16.0 * vs[1] - 30.0 * vs[2] + 16.0 * vs[3] - vs[4]) / (12.0 * h * h);
        let r = derivative_residual(&p, zc, vs[2], dv, ddv);
        let scale = vs[2].norm();
        assert!(r.norm() < 1e-7 * scale.max(1.0), "{r}");
    }
}
