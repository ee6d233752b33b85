//! Expansions whose terms reduce to Gauss, incomplete Beta or Lerch
//! functions in special parameter regimes, and the `ε = -1` combination
//! at `q/(αβ)`.
//!
//! Each family carries its own closed-form derivatives, so the integration
//! constant is fixed by the same probe rule as the Appell form without
//! borrowing anything from it.

use super::{
    adaptive_sum, checked_ratio, z0_function, z0_of, z0_weight, Center, SeriesSum, TermFamily, DEFAULT_N_MAX,
    DEFAULT_TOL,
};
use crate::heun_model::{classify, CLASSIFY_TOL};
use crate::recurrences::{center_coeffs, closed_form_origin, run, RecurrenceKind};
use crate::specials::{cpow, gauss_2f1, incomplete_beta, lerch_phi, minus_one_pow};
use crate::{Complex, HeunError, HeunParams, ReductionClass, Result};

const TOL: f64 = 1e-17;

/// Reduced forms of the expansion terms.
///
/// | variant | regime | center | term |
/// |---|---|---|---|
/// | `Gauss0` | `ε = 0` | 0 | `(-1)^{-δ} z^s/s ₂F₁(s, δ; 1+s; z)`, `s = n+1-γ+μ` |
/// | `EpsZeroOrigin` | `ε = 0` | 0 | `(-1)^{-δ} B(1+n-γ+μ, 1-δ; z)` |
/// | `EpsZeroOne` | `ε = 0` | 1 | `(-1)^{-δ}(-1)^{n+μ} B(1-γ, 1+n-δ+μ; z)` |
/// | `EpsZeroInfinity` | `ε = 0` | ∞ | `(-1)^{-δ} B(1-n-γ-μ, 1-δ; z)` |
/// | `DeltaZeroOrigin` | `δ = 0` | 0 | `a^{γ_n}(-a)^{-ε} B(γ_n, 1-ε; z/a)`, `γ_n = 1+n-γ+μ` |
/// | `DeltaZeroA` | `δ = 0` | a | `-(-a)^{ε_n} a^{-γ} B(1-γ, ε_n; z/a)`, `ε_n = 1+n-ε+μ` |
/// | `DeltaZeroInfinity` | `δ = 0` | ∞ | as `DeltaZeroOrigin` with `γ_n = 1-n-γ-μ` |
/// | `GammaZeroOne` | `γ = 0` | 1 | `-(a-1)^{δ_n}(1-a)^{-ε} B(1-ε, δ_n; (a-z)/(a-1))`, `δ_n = 1+n-δ+μ` |
/// | `GammaZeroA` | `γ = 0` | a | `(1-a)^{ε_n}(a-1)^{-δ} B(ε_n, 1-δ; (a-z)/(a-1))` |
/// | `GaussZ2` | `a = -1, δ = ε` | 0 | `(-1)^{-δ} z^s/s ₂F₁(s/2, δ; 1+s/2; z²)` |
/// | `SymmetricZ2` | `a = -1, δ = ε` | 0 | `(-1)^{-δ}/2 B(s/2, 1-δ; z²)` |
/// | `BinomialZ2` | `a = -1, ε = δ-1` | 0 | `(-1)^{-δ}/2 [B(s/2, 1-δ; z²) + B((1+s)/2, 1-δ; z²)]` |
/// | `TwoTermZ2` | `a = -1, q = 0, δ = ε` | 0 | `½ B(s/2, 1-δ; z²)` with `C₀ = μ/(αβ)` |
///
/// The `δ = 0` forms split `(z/a)^x` as `z^x a^{-x}`, which matches the
/// Appell form for real `a > 0`. The `γ = 0` forms match it for real
/// `a < 0`; for `a > 1` the powers of `a - 1` and `1 - a` leave a constant
/// factor of modulus one. `TwoTermZ2` drops the factor `(-1)^{-δ}` of
/// `SymmetricZ2`. `EpsZeroOne`, `DeltaZeroA` and `GammaZeroOne` are
/// evaluated as `-K B(Q, P; 1-g)`, which differs from `K B(P, Q; g)` by a
/// constant and has no cancellation near the center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum BetaVariant {
    Gauss0,
    EpsZeroOrigin,
    EpsZeroOne,
    EpsZeroInfinity,
    DeltaZeroOrigin,
    DeltaZeroA,
    DeltaZeroInfinity,
    GammaZeroOne,
    GammaZeroA,
    GaussZ2,
    SymmetricZ2,
    BinomialZ2,
    TwoTermZ2,
}

impl BetaVariant {
    pub const ALL: [BetaVariant; 13] = [
        BetaVariant::Gauss0,
        BetaVariant::EpsZeroOrigin,
        BetaVariant::EpsZeroOne,
        BetaVariant::EpsZeroInfinity,
        BetaVariant::DeltaZeroOrigin,
        BetaVariant::DeltaZeroA,
        BetaVariant::DeltaZeroInfinity,
        BetaVariant::GammaZeroOne,
        BetaVariant::GammaZeroA,
        BetaVariant::GaussZ2,
        BetaVariant::SymmetricZ2,
        BetaVariant::BinomialZ2,
        BetaVariant::TwoTermZ2,
    ];

    pub fn center(self) -> Center {
        use BetaVariant::*;
        match self {
            Gauss0 | EpsZeroOrigin | DeltaZeroOrigin | GaussZ2 | SymmetricZ2 | BinomialZ2 | TwoTermZ2 => Center::Origin,
            EpsZeroOne | GammaZeroOne => Center::One,
            DeltaZeroA | GammaZeroA => Center::A,
            EpsZeroInfinity | DeltaZeroInfinity => Center::Infinity,
        }
    }

    fn regime_ok(self, p: &HeunParams) -> bool {
        use BetaVariant::*;
        let tags = classify(p, CLASSIFY_TOL);
        let near = |x: Complex, y: f64| (x - y).norm() < CLASSIFY_TOL;
        match self {
            Gauss0 | EpsZeroOrigin | EpsZeroOne | EpsZeroInfinity => tags.contains(&ReductionClass::EpsZero),
            DeltaZeroOrigin | DeltaZeroA | DeltaZeroInfinity => tags.contains(&ReductionClass::DeltaZero),
            GammaZeroOne | GammaZeroA => tags.contains(&ReductionClass::GammaZero),
            GaussZ2 | SymmetricZ2 => tags.contains(&ReductionClass::SymmetricBeta),
            BinomialZ2 => near(p.a(), -1.0) && near(p.delta() - p.epsilon(), 1.0),
            TwoTermZ2 => tags.contains(&ReductionClass::TwoTermOrigin),
        }
    }
}

/// `K · B(P, Q; g(z))` with `g` linear or `z²`.
struct BetaTerm {
    k: Complex,
    p: Complex,
    q: Complex,
    /// Anchor the antiderivative at `g = 1` instead of `g = 0`.
    at_one: bool,
}

#[derive(Clone, Copy)]
enum Arg {
    Z,
    ZOverA(Complex),
    Reflected(Complex),
    Square,
}

impl Arg {
    /// `(g, g', g'')`.
    fn at(self, z: Complex) -> (Complex, Complex, Complex) {
        let zero = Complex::new(0.0, 0.0);
        let one = Complex::new(1.0, 0.0);
        match self {
            Arg::Z => (z, one, zero),
            Arg::ZOverA(a) => (z / a, one / a, zero),
            Arg::Reflected(a) => ((a - z) / (a - 1.0), -one / (a - 1.0), zero),
            Arg::Square => (z * z, 2.0 * z, Complex::new(2.0, 0.0)),
        }
    }
}

impl BetaTerm {
    fn value(&self, arg: Arg, z: Complex) -> Result<Complex> {
        let g = arg.at(z).0;
        if self.at_one {
            // B(P, Q; g) = B(P, Q) - B(Q, P; 1-g)
            Ok(-self.k * incomplete_beta(self.q, self.p, Complex::new(1.0, 0.0) - g)?)
        } else {
            Ok(self.k * incomplete_beta(self.p, self.q, g)?)
        }
    }

    fn derivatives(&self, arg: Arg, z: Complex) -> (Complex, Complex) {
        let (g, dg, ddg) = arg.at(z);
        let one = Complex::new(1.0, 0.0);
        let d = self.k * cpow(g, self.p - 1.0) * cpow(one - g, self.q - 1.0) * dg;
        let dd = d * (((self.p - 1.0) / g - (self.q - 1.0) / (one - g)) * dg + ddg / dg);
        (d, dd)
    }
}

struct BetaFamily<'a> {
    p: &'a HeunParams,
    variant: BetaVariant,
    mu: Complex,
}

impl BetaFamily<'_> {
    fn arg(&self) -> Arg {
        use BetaVariant::*;
        match self.variant {
            Gauss0 | EpsZeroOrigin | EpsZeroOne | EpsZeroInfinity => Arg::Z,
            DeltaZeroOrigin | DeltaZeroA | DeltaZeroInfinity => Arg::ZOverA(self.p.a()),
            GammaZeroOne | GammaZeroA => Arg::Reflected(self.p.a()),
            GaussZ2 | SymmetricZ2 | BinomialZ2 | TwoTermZ2 => Arg::Square,
        }
    }

    fn terms(&self, n: usize) -> Vec<BetaTerm> {
        use BetaVariant::*;
        let p = self.p;
        let (a, g, d, e) = (p.a(), p.gamma(), p.delta(), p.epsilon());
        let nf = n as f64;
        let mu = self.mu;
        let one = Complex::new(1.0, 0.0);
        let sign_d = minus_one_pow(-d);
        let gamma0 = one - g + mu;
        let half = |k: Complex, pp: Complex| BetaTerm {
            k: k / 2.0,
            p: pp / 2.0,
            q: one - d,
            at_one: false,
        };
        match self.variant {
            // Gauss forms are handled separately
            Gauss0 | GaussZ2 => vec![],
            EpsZeroOrigin => vec![BetaTerm {
                k: sign_d,
                p: 1.0 + nf - g + mu,
                q: one - d,
                at_one: false,
            }],
            EpsZeroOne => vec![BetaTerm {
                k: sign_d * minus_one_pow(nf + mu),
                p: one - g,
                q: 1.0 + nf - d + mu,
                at_one: true,
            }],
            EpsZeroInfinity => vec![BetaTerm {
                k: sign_d,
                p: 1.0 - nf - g - mu,
                q: one - d,
                at_one: false,
            }],
            DeltaZeroOrigin | DeltaZeroInfinity => {
                let gn = if self.variant == DeltaZeroOrigin {
                    1.0 + nf - g + mu
                } else {
                    1.0 - nf - g - mu
                };
                vec![BetaTerm {
                    k: cpow(a, gn) / cpow(-a, e),
                    p: gn,
                    q: one - e,
                    at_one: false,
                }]
            }
            DeltaZeroA => {
                let en = 1.0 + nf - e + mu;
                vec![BetaTerm {
                    k: -cpow(-a, en) / cpow(a, g),
                    p: one - g,
                    q: en,
                    at_one: true,
                }]
            }
            GammaZeroOne => {
                let dn = 1.0 + nf - d + mu;
                vec![BetaTerm {
                    k: -cpow(a - 1.0, dn) / cpow(one - a, e),
                    p: one - e,
                    q: dn,
                    at_one: true,
                }]
            }
            GammaZeroA => {
                let en = 1.0 + nf - e + mu;
                vec![BetaTerm {
                    k: cpow(one - a, en) / cpow(a - 1.0, d),
                    p: en,
                    q: one - d,
                    at_one: false,
                }]
            }
            SymmetricZ2 => vec![half(sign_d, nf + gamma0)],
            BinomialZ2 => vec![half(sign_d, nf + gamma0), half(sign_d, 1.0 + nf + gamma0)],
            TwoTermZ2 => vec![half(one, nf + gamma0)],
        }
    }

    /// `s = n + 1 - γ + μ` for the Gauss forms.
    fn gauss_s(&self, n: usize) -> Result<Complex> {
        let s = n as f64 + 1.0 - self.p.gamma() + self.mu;
        if s.norm() < 1e-14 {
            return Err(HeunError::Pole(format!("n + gamma0 = 0 at n = {n}")));
        }
        Ok(s)
    }
}

impl TermFamily for BetaFamily<'_> {
    fn value(&self, n: usize, z: Complex) -> Result<Complex> {
        let d = self.p.delta();
        let sign_d = minus_one_pow(-d);
        match self.variant {
            BetaVariant::Gauss0 => {
                let s = self.gauss_s(n)?;
                Ok(sign_d * cpow(z, s) / s * gauss_2f1(s, d, 1.0 + s, z, TOL)?)
            }
            BetaVariant::GaussZ2 => {
                let s = self.gauss_s(n)?;
                Ok(sign_d * cpow(z, s) / s * gauss_2f1(s / 2.0, d, 1.0 + s / 2.0, z * z, TOL)?)
            }
            _ => {
                let arg = self.arg();
                self.terms(n)
                    .iter()
                    .try_fold(Complex::new(0.0, 0.0), |acc, t| Ok(acc + t.value(arg, z)?))
            }
        }
    }

    fn derivatives(&self, n: usize, z: Complex) -> Result<(Complex, Complex)> {
        let d = self.p.delta();
        let one = Complex::new(1.0, 0.0);
        match self.variant {
            BetaVariant::Gauss0 => {
                let s = self.gauss_s(n)?;
                let du = minus_one_pow(-d) * cpow(z, s - 1.0) * cpow(one - z, -d);
                Ok((du, du * ((s - 1.0) / z + d / (one - z))))
            }
            BetaVariant::GaussZ2 => {
                let s = self.gauss_s(n)?;
                let du = minus_one_pow(-d) * cpow(z, s - 1.0) * cpow(one - z * z, -d);
                Ok((du, du * ((s - 1.0) / z + 2.0 * d * z / (one - z * z))))
            }
            _ => {
                let arg = self.arg();
                let mut out = (Complex::new(0.0, 0.0), Complex::new(0.0, 0.0));
                for t in self.terms(n) {
                    let (d1, d2) = t.derivatives(arg, z);
                    out.0 += d1;
                    out.1 += d2;
                }
                Ok(out)
            }
        }
    }
}

/// Sum a reduced expansion at `z`, with coefficients from the recurrence
/// of its center and `C₀` from the probe rule (`TwoTermZ2` uses its own
/// `C₀ = μ/(αβ)` and the closed-form coefficients).
pub fn beta_expansion(p: &HeunParams, variant: BetaVariant, mu: Complex, z: Complex) -> Result<SeriesSum> {
    if !variant.regime_ok(p) {
        return Err(HeunError::Regime(format!("{variant:?} does not apply to {p}")));
    }
    let fam = BetaFamily { p, variant, mu };
    let center = variant.center();
    if variant == BetaVariant::TwoTermZ2 {
        return two_term_sum(p, &fam, z);
    }
    adaptive_sum(p, &fam, center, z, DEFAULT_TOL, DEFAULT_N_MAX, |n| {
        run(&center_coeffs(p, center.kind(), mu)?, n)
    })
}

fn two_term_sum(p: &HeunParams, fam: &BetaFamily<'_>, z: Complex) -> Result<SeriesSum> {
    let ratio = checked_ratio(p, Center::Origin, z)?;
    let n_terms = super::terms_needed(ratio, DEFAULT_TOL, DEFAULT_N_MAX);
    let coeffs = closed_form_origin(p, fam.mu, n_terms)?;
    let c0 = fam.mu / p.ab();
    let mut u = c0;
    let mut peak = u.norm();
    let mut small = 0;
    let mut last = [0.0f64; 3];
    let mut used = 0;
    for (n, &an) in coeffs.values.iter().enumerate() {
        used = n + 1;
        if an.norm() == 0.0 {
            continue;
        }
        let inc = an * fam.value(n, z)?;
        u += inc;
        peak = peak.max(u.norm());
        last = [last[1], last[2], inc.norm()];
        if inc.norm() <= DEFAULT_TOL * peak {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
    }
    let mut warnings = Vec::new();
    if small < 3 {
        warnings.push(format!("slow convergence: all {used} terms used"));
    }
    Ok(SeriesSum {
        u,
        terms_used: used,
        est_error: last.iter().sum(),
        c0,
        warnings,
    })
}

/// The `TwoTermZ2` sum with an explicit number of coefficients and no tail rule,
/// for limits at the boundary `z = 1` where the terms decay only
/// algebraically.
pub fn two_term_partial_sum(p: &HeunParams, mu: Complex, z: Complex, n_terms: usize) -> Result<Complex> {
    if !BetaVariant::TwoTermZ2.regime_ok(p) {
        return Err(HeunError::Regime(format!("TwoTermZ2 does not apply to {p}")));
    }
    let fam = BetaFamily {
        p,
        variant: BetaVariant::TwoTermZ2,
        mu,
    };
    let coeffs = closed_form_origin(p, mu, n_terms)?;
    let mut u = mu / p.ab();
    for (n, &an) in coeffs.values.iter().enumerate() {
        if an.norm() != 0.0 {
            u += an * fam.value(n, z)?;
        }
    }
    Ok(u)
}

struct LerchFamily<'a> {
    p: &'a HeunParams,
    mu: Complex,
}

impl LerchFamily<'_> {
    fn s(&self, n: usize) -> Result<Complex> {
        let s = n as f64 + 1.0 - self.p.gamma() + self.mu;
        if s.re <= 0.0 && (s - s.re.round()).norm() < 1e-14 {
            return Err(HeunError::Pole(format!("n + gamma0 = {s} at n = {n}")));
        }
        Ok(s)
    }
}

impl TermFamily for LerchFamily<'_> {
    fn value(&self, n: usize, z: Complex) -> Result<Complex> {
        let s = self.s(n)?;
        let phi = lerch_phi(z, Complex::new(1.0, 0.0), s, TOL)?;
        Ok(cpow(z, s) * (1.0 / s + (self.p.a() - 1.0) * phi))
    }

    fn derivatives(&self, n: usize, z: Complex) -> Result<(Complex, Complex)> {
        let s = self.s(n)?;
        let a = self.p.a();
        let du = cpow(z, s - 1.0) * (z - a) / (z - 1.0);
        Ok((du, du * ((s - 1.0) / z + 1.0 / (z - a) - 1.0 / (z - 1.0))))
    }
}

/// `C₀ + Σ a_n z^{n+γ₀}[1/(n+γ₀) + (a-1) Φ(z, 1, n+γ₀)]` for `δ = 1`,
/// `ε = -1`, `γ₀ = 1-γ+μ`, with `Φ(z, s, α) = Σ z^k/(k+α)^s`.
pub fn lerch_expansion(p: &HeunParams, mu: Complex, z: Complex) -> Result<SeriesSum> {
    if !classify(p, CLASSIFY_TOL).contains(&ReductionClass::LerchCase) {
        return Err(HeunError::Regime(format!(
            "the Lerch form needs delta = 1, epsilon = -1; got {p}"
        )));
    }
    if p.q().norm() < CLASSIFY_TOL {
        return Err(HeunError::Regime("the Lerch form needs q != 0".into()));
    }
    let fam = LerchFamily { p, mu };
    adaptive_sum(p, &fam, Center::Origin, z, DEFAULT_TOL, DEFAULT_N_MAX, |n| {
        run(&center_coeffs(p, RecurrenceKind::Origin, mu)?, n)
    })
}

struct ComboFamily<'a> {
    p: &'a HeunParams,
    z0: Complex,
}

impl TermFamily for ComboFamily<'_> {
    fn value(&self, n: usize, z: Complex) -> Result<Complex> {
        let (p, z0) = (self.p, self.z0);
        Ok(z0_function(p, z0, n + 1, z)? + (z0 - p.a()) * z0_function(p, z0, n, z)?)
    }

    fn derivatives(&self, n: usize, z: Complex) -> Result<(Complex, Complex)> {
        let p = self.p;
        let (g, d, a) = (p.gamma(), p.delta(), p.a());
        let m = n as i32 + 2;
        let du = z0_weight(p, self.z0, z) * (z - self.z0).powi(m) * (z - a);
        let log_d = -g / z - d / (z - 1.0) + m as f64 / (z - self.z0) + 1.0 / (z - a);
        Ok((du, du * log_d))
    }
}

/// `C₀ + Σ a_n (u_{n+1} + (z₀-a) u_n)` about `z₀ = q/(αβ)` for `ε = -1`,
/// with `u_n` the expansion functions about `z₀` (`μ = 2`).
pub fn combo_expansion_eps_minus1(p: &HeunParams, z: Complex) -> Result<SeriesSum> {
    if (p.epsilon() + 1.0).norm() > CLASSIFY_TOL {
        return Err(HeunError::Regime(format!("epsilon = {} (needs -1)", p.epsilon())));
    }
    let z0 = z0_of(p)?;
    let fam = ComboFamily { p, z0 };
    let mu = Complex::new(2.0, 0.0);
    adaptive_sum(p, &fam, Center::Z0, z, DEFAULT_TOL, DEFAULT_N_MAX, |n| {
        run(&center_coeffs(p, RecurrenceKind::AtZ0, mu)?, n)
    })
}
