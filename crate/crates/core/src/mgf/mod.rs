//! Moment-generating functions extended to the complex plane.

mod bivariate;
mod closed;
pub mod special;

use std::fmt;
use std::sync::Arc;

pub use num_complex::Complex64;

pub use bivariate::{bivariate_slices, independent_pair, BivariateFn, BivariateSlices, SliceKind, SliceMgf};
pub use closed::{
    exponential_mgf, nig_from_standardized, nig_mgf, normal_mgf, poisson_mgf, Exponential, Nig,
    NigParams, Normal, Poisson,
};
pub use special::{complex_power, gamma_complex, gamma_real, ln_gamma_complex};

use crate::error::{Error, Result};

/// Value type carried by every MGF evaluation and integrand.
pub type ComplexScalar = Complex64;

/// Distance from a strip endpoint inside which evaluation is refused.
pub const STRIP_MARGIN: f64 = 1e-12;

/// Open interval `(s_min, s_max)` of real parts on which the MGF is finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Strip {
    pub s_min: f64,
    pub s_max: f64,
}

impl Strip {
    pub fn new(s_min: f64, s_max: f64) -> Result<Self> {
        if s_min.is_nan() || s_max.is_nan() || !(s_min < 0.0 && s_max > 0.0) {
            return Err(Error::Domain(format!(
                "degenerate strip ({s_min}, {s_max}): zero must be interior"
            )));
        }
        Ok(Self { s_min, s_max })
    }

    pub fn whole_line() -> Self {
        Self {
            s_min: f64::NEG_INFINITY,
            s_max: f64::INFINITY,
        }
    }

    /// True when `s` lies strictly inside, away from both endpoints.
    pub fn contains(&self, s: f64) -> bool {
        s.is_finite() && s > self.s_min + STRIP_MARGIN && s < self.s_max - STRIP_MARGIN
    }

    pub fn check(&self, z: Complex64) -> Result<()> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::domain(format!("non-finite MGF argument {z}")));
        }
        if self.contains(z.re) {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "Re(z) = {} outside the strip of regularity ({}, {})",
                z.re, self.s_min, self.s_max
            )))
        }
    }

    /// Largest `m` with both `m` and `-m` inside the strip.
    pub fn symmetric_radius(&self) -> f64 {
        self.s_max.min(-self.s_min)
    }
}

impl fmt::Display for Strip {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.s_min, self.s_max)
    }
}

/// Support contained in `offset + span * Z`. The characteristic function is
/// then periodic in `t` with period `2 pi / span`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    pub offset: f64,
    pub span: f64,
}

impl Lattice {
    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.span
    }

    /// Whether `x` is a lattice point (relative tolerance 1e-12).
    pub fn contains(&self, x: f64) -> bool {
        let k = (x - self.offset) / self.span;
        (k - k.round()).abs() <= 1e-12 * k.abs().max(1.0)
    }
}

/// A moment-generating function `M(z) = E[exp(zX)]` for real `X`, evaluable
/// for complex `z` inside its strip.
pub trait MgfModel: Send + Sync {
    fn eval(&self, z: Complex64) -> Result<Complex64>;

    fn strip(&self) -> Strip;

    fn descriptor(&self) -> String;

    /// `P(X = x)`. `None` when the model cannot say.
    fn point_mass(&self, _x: f64) -> Option<f64> {
        Some(0.0)
    }

    fn lattice(&self) -> Option<Lattice> {
        None
    }

    /// Lower end of the support (`-inf` when unbounded).
    fn support_min(&self) -> f64 {
        f64::NEG_INFINITY
    }

    /// Whether the law has a density (Gil-Pelaez inversion applies).
    fn is_continuous(&self) -> bool {
        self.lattice().is_none()
    }
}

impl<M: MgfModel + ?Sized> MgfModel for Arc<M> {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        (**self).eval(z)
    }
    fn strip(&self) -> Strip {
        (**self).strip()
    }
    fn descriptor(&self) -> String {
        (**self).descriptor()
    }
    fn point_mass(&self, x: f64) -> Option<f64> {
        (**self).point_mass(x)
    }
    fn lattice(&self) -> Option<Lattice> {
        (**self).lattice()
    }
    fn support_min(&self) -> f64 {
        (**self).support_min()
    }
    fn is_continuous(&self) -> bool {
        (**self).is_continuous()
    }
}

impl<M: MgfModel + ?Sized> MgfModel for &M {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        (**self).eval(z)
    }
    fn strip(&self) -> Strip {
        (**self).strip()
    }
    fn descriptor(&self) -> String {
        (**self).descriptor()
    }
    fn point_mass(&self, x: f64) -> Option<f64> {
        (**self).point_mass(x)
    }
    fn lattice(&self) -> Option<Lattice> {
        (**self).lattice()
    }
    fn support_min(&self) -> f64 {
        (**self).support_min()
    }
    fn is_continuous(&self) -> bool {
        (**self).is_continuous()
    }
}

/// `exp(w)` that refuses to overflow.
pub(crate) fn checked_exp(w: Complex64, what: &str) -> Result<Complex64> {
    if !(w.re.is_finite() && w.im.is_finite()) {
        return Err(Error::domain(format!("{what}: non-finite exponent")));
    }
    if w.re > 700.0 {
        return Err(Error::domain(format!(
            "{what}: exponent {:.3e} overflows, use a smaller abscissa",
            w.re
        )));
    }
    Ok(w.exp())
}
