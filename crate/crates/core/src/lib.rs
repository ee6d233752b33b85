//! Series solutions of the general Heun equation
//!
//! ```text
//! u'' + (γ/z + δ/(z-1) + ε/(z-a)) u' + (αβ z - q) / (z (z-1) (z-a)) u = 0,
//! 1 + α + β = γ + δ + ε
//! ```
//!
//! built from power series of the derivative equation obeyed by
//! `v = z^γ (z-1)^δ (z-a)^ε u'` and integrated term by term into Appell
//! F1 functions. The crate covers:
//!
//! - [`specials`]: complex Gamma, Pochhammer, ₂F₁, ₃F₂, incomplete Beta,
//!   Lerch Φ and Appell F1 (double series and Euler integral).
//! - [`heun_model`]: parameters, singularity table, regime classification
//!   and the two affine maps onto `a = -1`.
//! - [`recurrences`]: four-term recurrences at `z = 0` and `z = q/(αβ)`,
//!   closed-form two-term coefficients, convergence radii, termination.
//! - [`expansions`]: expansion functions at `0, 1, a, ∞, q/(αβ)`, the
//!   integration constant, summation, and every Beta / ₂F₁ / Lerch
//!   reduction.
//! - [`closed_forms`]: the `a = -1, q = 0, δ = ε` family and the cubic
//!   (`a = (-1)^{1/3}`) family.
//! - [`ode_oracle`]: direct integration of the Heun equation used to
//!   cross-check everything above.
//! - [`acceptance`]: the full cross-validation suite, also reachable as
//!   `heun selftest`.
//!
//! ```
//! use heun_appell::{HeunParams, Complex};
//! use heun_appell::expansions::{sum_expansion, Center, ExpansionSpec};
//!
//! let p = HeunParams::real(3.0, 0.5, 1.2, 0.7, 0.8, 0.6).unwrap();
//! let spec = ExpansionSpec::new(Center::Origin, p.gamma());
//! let s = sum_expansion(&p, &spec, Complex::new(0.3, 0.0)).unwrap();
//! assert!(s.est_error < 1e-9);
//! ```

pub mod acceptance;
pub mod cli;
pub mod closed_forms;
mod error;
pub mod expansions;
pub mod heun_model;
pub mod ode_oracle;
pub mod recurrences;
pub mod specials;

pub use error::{HeunError, Result};
pub use heun_model::{HeunParams, ReductionClass};

/// Complex scalar used throughout.
pub type Complex = num_complex::Complex64;

/// `Complex::new(re, 0.0)`.
#[inline]
pub fn c(re: f64) -> Complex {
    Complex::new(re, 0.0)
}
