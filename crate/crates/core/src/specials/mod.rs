//! Complex special-function kernels.
//!
//! Every kernel takes complex arguments and uses the principal branch for
//! non-integer powers. Series are truncated once three consecutive terms
//! fall below `tol` times the running maximum of the partial-sum modulus,
//! with a hard cap of [`MAX_TERMS`] terms.

mod appell;
mod gamma;
mod hypergeometric;
pub mod quadrature;

pub use appell::{appell_f1, appell_f1_auto, appell_f1_integral, F1Params};
pub use gamma::{beta, gamma, log_gamma, pochhammer, rgamma};
pub use hypergeometric::{clausen_3f2, gauss_2f1, incomplete_beta, lerch_phi};

use crate::{Complex, HeunError, Result};

/// Hard cap on the number of terms of any single-index series.
pub const MAX_TERMS: usize = 100_000;

/// Tolerance used by kernels that do not take one explicitly.
pub const MACHINE_TOL: f64 = 1e-16;

pub fn ensure_finite(name: &'static str, zs: &[Complex]) -> Result<()> {
    if zs.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(HeunError::NonFinite(name))
    }
}

/// True when `z` is (numerically) one of 0, -1, -2, ...
pub fn is_nonpositive_integer(z: Complex) -> bool {
    z.im.abs() < 1e-12 && z.re < 0.5 && (z.re - z.re.round()).abs() < 1e-12
}

/// True when `z` is numerically an integer.
pub fn is_integer(z: Complex) -> bool {
    z.im.abs() < 1e-12 && (z.re - z.re.round()).abs() < 1e-12
}

/// Principal `base^exp` with the limits at `base = 0` filled in.
pub fn cpow(base: Complex, exp: Complex) -> Complex {
    if base == Complex::new(0.0, 0.0) {
        if exp == Complex::new(0.0, 0.0) {
            Complex::new(1.0, 0.0)
        } else if exp.re > 0.0 {
            Complex::new(0.0, 0.0)
        } else {
            Complex::new(f64::INFINITY, 0.0)
        }
    } else if exp.im == 0.0 && exp.re == exp.re.round() && exp.re.abs() < 1024.0 {
        base.powi(exp.re as i32)
    } else {
        (exp * base.ln()).exp()
    }
}

/// `(-1)^x` on the principal branch, `exp(iπx)`.
pub fn minus_one_pow(x: Complex) -> Complex {
    (Complex::new(0.0, std::f64::consts::PI) * x).exp()
}

/// Stopping rule shared by all series.
#[derive(Debug, Clone)]
pub(crate) struct TailRule {
    tol: f64,
    peak: f64,
    small_run: usize,
}

impl TailRule {
    pub(crate) fn new(tol: f64) -> Self {
        TailRule {
            tol: tol.max(0.0),
            peak: 0.0,
            small_run: 0,
        }
    }

    /// Feed the latest term and the partial sum that includes it; returns
    /// `true` once the series can be stopped.
    pub(crate) fn push(&mut self, term: Complex, partial: Complex) -> bool {
        self.peak = self.peak.max(partial.norm());
        if term.norm() <= self.tol * self.peak {
            self.small_run += 1;
        } else {
            self.small_run = 0;
        }
        self.small_run >= 3
    }
}
