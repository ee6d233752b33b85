//! Heun parameters, singularity data of the derivative equation, regime
//! classification and the affine maps onto `a = -1`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::specials::ensure_finite;
use crate::{Complex, HeunError, Result};

/// Default absolute tolerance for regime detection.
pub const CLASSIFY_TOL: f64 = 1e-10;

/// The parameters `(a, q; α, β, γ, δ)` of the general Heun equation.
///
/// `ε` is never stored: it is always `1 + α + β - γ - δ`, so the Fuchsian
/// relation holds by construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeunParams {
    a: Complex,
    q: Complex,
    alpha: Complex,
    beta: Complex,
    gamma: Complex,
    delta: Complex,
}

/// Build parameters, deriving `ε` from the Fuchsian relation.
pub fn make_params(
    a: Complex,
    q: Complex,
    alpha: Complex,
    beta: Complex,
    gamma: Complex,
    delta: Complex,
) -> Result<HeunParams> {
    HeunParams::new(a, q, alpha, beta, gamma, delta)
}

impl HeunParams {
    pub fn new(a: Complex, q: Complex, alpha: Complex, beta: Complex, gamma: Complex, delta: Complex) -> Result<Self> {
        ensure_finite("HeunParams", &[a, q, alpha, beta, gamma, delta])?;
        if a.norm() < 1e-14 || (a - 1.0).norm() < 1e-14 {
            return Err(HeunError::InvalidSingularity(format!(
                "a = {a} collides with the singular point {}",
                if a.norm() < 1e-14 { 0 } else { 1 }
            )));
        }
        Ok(HeunParams {
            a,
            q,
            alpha,
            beta,
            gamma,
            delta,
        })
    }

    /// Real-parameter shorthand.
    pub fn real(a: f64, q: f64, alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        let r = |x: f64| Complex::new(x, 0.0);
        Self::new(r(a), r(q), r(alpha), r(beta), r(gamma), r(delta))
    }

    pub fn a(&self) -> Complex {
        self.a
    }
    pub fn q(&self) -> Complex {
        self.q
    }
    pub fn alpha(&self) -> Complex {
        self.alpha
    }
    pub fn beta(&self) -> Complex {
        self.beta
    }
    pub fn gamma(&self) -> Complex {
        self.gamma
    }
    pub fn delta(&self) -> Complex {
        self.delta
    }
    pub fn epsilon(&self) -> Complex {
        1.0 + self.alpha + self.beta - self.gamma - self.delta
    }

    /// The product αβ.
    pub fn ab(&self) -> Complex {
        self.alpha * self.beta
    }

    /// The extra singular point `q/(αβ)` of the derivative equation, if finite.
    pub fn z0(&self) -> Option<Complex> {
        let ab = self.ab();
        (ab.norm() > 1e-300).then(|| self.q / ab)
    }

    /// Same parameters with a different accessory parameter.
    pub fn with_q(&self, q: Complex) -> Self {
        HeunParams { q, ..*self }
    }

    /// The seven values `(a, q, α, β, γ, δ, ε)`.
    pub fn all(&self) -> [Complex; 7] {
        [
            self.a,
            self.q,
            self.alpha,
            self.beta,
            self.gamma,
            self.delta,
            self.epsilon(),
        ]
    }
}

impl fmt::Display for HeunParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "a={} q={} alpha={} beta={} gamma={} delta={} epsilon={}",
            self.a,
            self.q,
            self.alpha,
            self.beta,
            self.gamma,
            self.delta,
            self.epsilon()
        )
    }
}

/// A singular point location.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Location {
    Finite(Complex),
    Infinity,
}

/// Which existing singularity the point `q/(αβ)` merged into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Merge {
    Zero,
    One,
    A,
    Infinity,
}

/// One row of the Riemann P-symbol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularPoint {
    pub location: Location,
    pub exponents: (Complex, Complex),
}

/// Singular points and exponents of the equation obeyed by
/// `v = z^γ (z-1)^δ (z-a)^ε u'`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularityTable {
    pub points: Vec<SingularPoint>,
    /// Set when `q/(αβ)` coincides with another singular point.
    pub merge: Option<Merge>,
}

/// Rows `0, 1, a, q/(αβ), ∞` with exponents `(0,γ), (0,δ), (0,ε), (0,2),
/// (-α,-β)`. When `αβ = 0` the fourth row is dropped (the point has gone
/// to infinity); coincidences with `0, 1, a` are reported in `merge`.
pub fn derivative_singularity_table(p: &HeunParams) -> SingularityTable {
    let zero = Complex::new(0.0, 0.0);
    let row = |z: Complex, e: Complex| SingularPoint {
        location: Location::Finite(z),
        exponents: (zero, e),
    };
    let mut points = vec![
        row(zero, p.gamma()),
        row(Complex::new(1.0, 0.0), p.delta()),
        row(p.a(), p.epsilon()),
    ];
    let merge = if p.ab().norm() < CLASSIFY_TOL {
        Some(Merge::Infinity)
    } else {
        let z0 = p.q() / p.ab();
        points.push(row(z0, Complex::new(2.0, 0.0)));
        if z0.norm() < CLASSIFY_TOL {
            Some(Merge::Zero)
        } else if (z0 - 1.0).norm() < CLASSIFY_TOL {
            Some(Merge::One)
        } else if (z0 - p.a()).norm() < CLASSIFY_TOL {
            Some(Merge::A)
        } else {
            None
        }
    };
    points.push(SingularPoint {
        location: Location::Infinity,
        exponents: (-p.alpha(), -p.beta()),
    });
    SingularityTable { points, merge }
}

/// Parameter regimes with dedicated algorithms or closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ReductionClass {
    Generic,
    QZero,
    QEqualsAlphaBeta,
    QEqualsAAlphaBeta,
    AlphaBetaZero,
    EpsZero,
    DeltaZero,
    GammaZero,
    /// `a = -1`, `δ = ε`.
    SymmetricBeta,
    /// `q = 0`, `a = -1`, `δ = ε`: two-term recurrence at the origin.
    TwoTermOrigin,
    /// `δ = 1`, `ε = -1`.
    LerchCase,
    /// `a = -1`, `ε = δ - N` for a natural `N`.
    BinomialCase,
    /// `a = e^{±iπ/3}`, `q = αβ(1+a)/3`, `γ = δ = ε`.
    MaierCase,
}

impl fmt::Display for ReductionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// `e^{iπ/3}`, the principal cube root of `-1`.
pub fn cbrt_minus_one() -> Complex {
    Complex::from_polar(1.0, std::f64::consts::FRAC_PI_3)
}

/// Every regime tag that applies; `Generic` only when none does.
pub fn classify(p: &HeunParams, tol: f64) -> BTreeSet<ReductionClass> {
    use ReductionClass::*;
    let near = |x: Complex| x.norm() < tol;
    let (a, q, ab) = (p.a(), p.q(), p.ab());
    let (g, d, e) = (p.gamma(), p.delta(), p.epsilon());
    let mut tags = BTreeSet::new();
    if near(q) {
        tags.insert(QZero);
    }
    if near(q - ab) {
        tags.insert(QEqualsAlphaBeta);
    }
    if near(q - a * ab) {
        tags.insert(QEqualsAAlphaBeta);
    }
    if near(ab) {
        tags.insert(AlphaBetaZero);
    }
    if near(e) {
        tags.insert(EpsZero);
    }
    if near(d) {
        tags.insert(DeltaZero);
    }
    if near(g) {
        tags.insert(GammaZero);
    }
    let a_minus_one = near(a + 1.0);
    if a_minus_one && near(d - e) {
        tags.insert(SymmetricBeta);
        if near(q) {
            tags.insert(TwoTermOrigin);
        }
    }
    if near(d - 1.0) && near(e + 1.0) {
        tags.insert(LerchCase);
    }
    let n = d - e;
    if a_minus_one && n.re > 0.5 && near(n - n.re.round()) {
        tags.insert(BinomialCase);
    }
    let w = cbrt_minus_one();
    let cube_a = near(a - w) || near(a - w.conj());
    if cube_a && near(q - ab * (1.0 + a) / 3.0) && near(g - d) && near(d - e) {
        tags.insert(MaierCase);
    }
    if tags.is_empty() {
        tags.insert(Generic);
    }
    tags
}

/// The two variable changes that carry `a = 2` and `a = 1/2` to `a = -1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AffineMap {
    /// `z₁ = z - 1`, for `a = 2`.
    ShiftMinusOne,
    /// `z₁ = 2z - 1`, for `a = 1/2`.
    TwoZMinusOne,
}

impl AffineMap {
    /// Image `z₁` of a point `z`.
    pub fn map_point(self, z: Complex) -> Complex {
        match self {
            AffineMap::ShiftMinusOne => z - 1.0,
            AffineMap::TwoZMinusOne => 2.0 * z - 1.0,
        }
    }

    /// `dz₁/dz`.
    pub fn scale(self) -> f64 {
        match self {
            AffineMap::ShiftMinusOne => 1.0,
            AffineMap::TwoZMinusOne => 2.0,
        }
    }

    fn source_a(self) -> Complex {
        match self {
            AffineMap::ShiftMinusOne => Complex::new(2.0, 0.0),
            AffineMap::TwoZMinusOne => Complex::new(0.5, 0.0),
        }
    }
}

/// Parameters of the equation satisfied by `u(z(z₁))`, which has `a' = -1`.
///
/// For `z₁ = z - 1` the singular points `0, 1, 2` move to `-1, 0, 1`, so
/// `(γ', δ', ε') = (δ, ε, γ)` and `q' = q - αβ`. For `z₁ = 2z - 1` the
/// points `0, 1, 1/2` move to `-1, 1, 0`, so `(γ', δ', ε') = (ε, δ, γ)`
/// and `q' = 2q - αβ`.
pub fn affine_transform(p: &HeunParams, map: AffineMap) -> Result<HeunParams> {
    if (p.a() - map.source_a()).norm() > 1e-12 {
        return Err(HeunError::Precondition(format!(
            "{map:?} needs a = {}, got {}",
            map.source_a().re,
            p.a()
        )));
    }
    let ab = p.ab();
    let minus_one = Complex::new(-1.0, 0.0);
    match map {
        AffineMap::ShiftMinusOne => HeunParams::new(minus_one, p.q() - ab, p.alpha(), p.beta(), p.delta(), p.epsilon()),
        AffineMap::TwoZMinusOne => {
            HeunParams::new(minus_one, 2.0 * p.q() - ab, p.alpha(), p.beta(), p.epsilon(), p.delta())
        }
    }
}

/// Undo [`affine_transform`]: from `a = -1` back to `a = 2` or `a = 1/2`.
pub fn affine_inverse(p: &HeunParams, map: AffineMap) -> Result<HeunParams> {
    if (p.a() + 1.0).norm() > 1e-12 {
        return Err(HeunError::Precondition(format!(
            "inverse map needs a = -1, got {}",
            p.a()
        )));
    }
    let ab = p.ab();
    match map {
        AffineMap::ShiftMinusOne => {
            HeunParams::new(map.source_a(), p.q() + ab, p.alpha(), p.beta(), p.epsilon(), p.gamma())
        }
        AffineMap::TwoZMinusOne => HeunParams::new(
            map.source_a(),
            (p.q() + ab) / 2.0,
            p.alpha(),
            p.beta(),
            p.epsilon(),
            p.delta(),
        ),
    }
}
