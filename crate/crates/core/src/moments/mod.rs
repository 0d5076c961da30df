//! Moments, tail moments, distribution function, quantiles and expected
//! shortfall from a complex-extended MGF.

mod contour;
mod identities;
mod lattice;
mod risk;
mod summary;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use identities::{reciprocal_gamma, vanishing_integral};
pub use risk::{cdf, expected_shortfall, quantile, CdfValue, RiskMeasures};
pub use summary::{cross_moments, moment_summary, summary_from_raw, CrossMoments, MomentSummary};

use crate::error::{Error, Result};
use crate::mgf::{gamma_complex, gamma_real, MgfModel};
use crate::quadrature::QuadConfig;
use contour::{check_abscissa, check_order, contour_integral, fmt_order, Numerator, INV_PI};

/// Order, shift and contour settings for one moment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSpec {
    pub order: Complex64,
    pub shift: f64,
    pub contour_s: Option<f64>,
    pub quad: QuadConfig,
}

impl MomentSpec {
    pub fn new(r: f64) -> Self {
        Self::complex(Complex64::new(r, 0.0))
    }

    pub fn complex(r: Complex64) -> Self {
        Self {
            order: r,
            shift: 0.0,
            contour_s: None,
            quad: QuadConfig::default(),
        }
    }

    pub fn shift(mut self, xi: f64) -> Self {
        self.shift = xi;
        self
    }

    pub fn at(mut self, s: f64) -> Self {
        self.contour_s = Some(s);
        self
    }

    pub fn quad(mut self, quad: QuadConfig) -> Self {
        self.quad = quad;
        self
    }

    pub fn is_real(&self) -> bool {
        self.order.im == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentValue {
    pub value: Complex64,
    pub err_estimate: f64,
    /// Contour abscissa actually used.
    pub abscissa: f64,
    pub panels_used: usize,
}

impl MomentValue {
    pub fn re(&self) -> f64 {
        self.value.re
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Above,
    Below,
}

/// Which representation to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentKind {
    /// `E|X - xi|^r`
    Absolute,
    /// `E[(X - xi)^r]` for `X >= xi`
    NonNegative,
    /// `E[(X - xi)^k]`
    Integer,
    /// `E[(X - xi)^k 1{X > xi}]`
    TailAbove,
    /// `E[(X - xi)^k 1{X < xi}]`
    TailBelow,
}

/// `min(1, s_max / 2)`.
pub fn default_abscissa<M: MgfModel + ?Sized>(m: &M) -> f64 {
    1f64.min(0.5 * m.strip().s_max)
}

/// Abscissa for representations that also evaluate `M(-z)`.
pub fn two_sided_abscissa<M: MgfModel + ?Sized>(m: &M) -> f64 {
    default_abscissa(m).min(-0.5 * m.strip().s_min)
}

fn abscissa_for<M: MgfModel + ?Sized>(m: &M, num: Numerator) -> f64 {
    match num {
        Numerator::Upper => default_abscissa(m),
        Numerator::Lower => 1f64.min(-0.5 * m.strip().s_min),
        Numerator::Both { .. } => two_sided_abscissa(m),
    }
}

// Digits the default abscissa may give away to cancellation before it is
// moved towards the saddle point of the integrand peak.
const PEAK_SLACK: f64 = 9.210_340_371_976_182; // ln 1e4

/// `ln` of the integrand peak at `t = 0`: `|numerator(s)| s^-Re(r+1)`, with
/// the two numerator parts added in absolute value.
fn log_peak<M: MgfModel + ?Sized>(m: &M, num: Numerator, xi: f64, p: f64, s: f64) -> Option<f64> {
    let mut peak = 0.0;
    if num.needs_upper() {
        peak += m.eval(Complex64::from(s)).ok()?.norm() * (-xi * s).exp();
    }
    if num.needs_lower() {
        peak += m.eval(Complex64::from(-s)).ok()?.norm() * (xi * s).exp();
    }
    let v = peak.ln() - p * s.ln();
    v.is_finite().then_some(v)
}

/// Keeps the default abscissa unless the integrand peak there exceeds its
/// minimum over `(0, s0]` by more than four digits; then returns the
/// minimizer. The peak is log-convex in `s`, so golden-section search on
/// `ln s` finds it.
fn conditioned_abscissa<M: MgfModel + ?Sized>(m: &M, num: Numerator, xi: f64, r: Complex64, s0: f64) -> f64 {
    let p = r.re + 1.0;
    let Some(at_default) = log_peak(m, num, xi, p, s0) else {
        return s0;
    };
    let f = |u: f64| log_peak(m, num, xi, p, u.exp()).unwrap_or(f64::INFINITY);
    let (mut lo, mut hi) = ((s0 * 1e-6).ln(), s0.ln());
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..60 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
        if hi - lo < 1e-3 {
            break;
        }
    }
    let (u, best) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    if at_default - best > PEAK_SLACK {
        u.exp()
    } else {
        s0
    }
}

// Accepted ratio of the reported error to the requested tolerance; larger
// ratios only arise when round-off in a cancelling integrand dominates.
const CANCELLATION_FACTOR: f64 = 100.0;

// Halvings tried when the default abscissa hits a domain error inside the
// strip (for example a branch condition of a recursion).
const MAX_HALVINGS: usize = 12;

/// Runs `contour_integral` with the requested or default abscissa; only the
/// default is shrunk on domain errors.
fn evaluate<M: MgfModel + ?Sized>(
    m: &M,
    num: Numerator,
    xi: f64,
    r: Complex64,
    full_line: bool,
    contour_s: Option<f64>,
    quad: &QuadConfig,
    prefactor: Complex64,
) -> Result<MomentValue> {
    quad.validate()?;
    if !xi.is_finite() {
        return Err(Error::domain("shift must be finite"));
    }
    let mut s = match contour_s {
        Some(s) => s,
        None => conditioned_abscissa(m, num, xi, r, abscissa_for(m, num)),
    };
    check_abscissa(m, num, s)?;
    let mass = check_order(m, r, xi, s, quad)?;
    let mut attempt = 0;
    loop {
        match contour_integral(m, num, xi, s, r, mass, full_line, quad) {
            Ok(int) => {
                let tol = quad.abs_tol.max(quad.rel_tol * int.value.norm());
                if !(int.err <= CANCELLATION_FACTOR * tol) {
                    return Err(Error::Convergence {
                        message: format!(
                            "cancellation along the contour at s = {s}: error estimate {:.3e} against tolerance {tol:.3e}, try a smaller abscissa",
                            int.err
                        ),
                        partial: (prefactor * int.value).re,
                        err_estimate: prefactor.norm() * int.err,
                    });
                }
                return Ok(MomentValue {
                    value: prefactor * int.value,
                    err_estimate: prefactor.norm() * int.err,
                    abscissa: s,
                    panels_used: int.panels,
                })
            }
            Err(Error::Domain(msg)) if contour_s.is_none() && attempt < MAX_HALVINGS => {
                attempt += 1;
                s *= 0.5;
                if s < 1e-6 {
                    return Err(Error::Domain(msg));
                }
            }
            Err(e) => return Err(e),
        }
    }
}

fn gamma_prefactor(r: Complex64) -> Result<Complex64> {
    if r.im == 0.0 {
        Ok(Complex64::from(gamma_real(r.re + 1.0)?))
    } else {
        gamma_complex(r + 1.0)
    }
}

/// `E|X - xi|^r` for `Re(r) > -1`.
pub fn absolute_moment<M: MgfModel + ?Sized>(m: &M, spec: &MomentSpec) -> Result<MomentValue> {
    let r = spec.order;
    check_real_order_bound(r)?;
    let g = gamma_prefactor(r)?;
    let full = !spec.is_real();
    let pre = if full { g * (0.5 * INV_PI) } else { g * INV_PI };
    evaluate(m, Numerator::Both { sign: 1.0 }, spec.shift, r, full, spec.contour_s, &spec.quad, pre)
}

/// `E[(X - xi)^r]` for a variable with `P(X >= xi) = 1`.
pub fn nonneg_moment<M: MgfModel + ?Sized>(m: &M, spec: &MomentSpec) -> Result<MomentValue> {
    let r = spec.order;
    check_real_order_bound(r)?;
    if m.support_min() < spec.shift {
        return Err(Error::domain(format!(
            "P(X >= xi) = 1 required for the non-negative representation: support starts at {} < xi = {}",
            m.support_min(),
            spec.shift
        )));
    }
    let g = gamma_prefactor(r)?;
    let full = !spec.is_real();
    let pre = if full { g * (0.5 * INV_PI) } else { g * INV_PI };
    evaluate(m, Numerator::Upper, spec.shift, r, full, spec.contour_s, &spec.quad, pre)
}

/// `E[(X - xi)^k]`.
pub fn integer_moment<M: MgfModel + ?Sized>(m: &M, k: u32, xi: f64, quad: &QuadConfig, s: Option<f64>) -> Result<MomentValue> {
    if k == 0 {
        return Err(Error::domain("integer moment order k >= 1 required"));
    }
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let pre = Complex64::from(gamma_real(k as f64 + 1.0)? * INV_PI);
    evaluate(m, Numerator::Both { sign }, xi, Complex64::new(k as f64, 0.0), false, s, quad, pre)
}

/// `E[(X - xi)^k 1{X > xi}]` or `E[(X - xi)^k 1{X < xi}]` for odd `k`.
pub fn tail_moment<M: MgfModel + ?Sized>(
    m: &M,
    k: u32,
    xi: f64,
    side: Side,
    quad: &QuadConfig,
    s: Option<f64>,
) -> Result<MomentValue> {
    if k.is_multiple_of(2) {
        return Err(Error::domain(format!("tail moments need an odd order, got k = {k}")));
    }
    let fact = gamma_real(k as f64 + 1.0)? * INV_PI;
    let r = Complex64::new(k as f64, 0.0);
    match side {
        Side::Above => evaluate(m, Numerator::Upper, xi, r, false, s, quad, Complex64::from(fact)),
        // (X - xi)^k = -(xi - X)^k for odd k
        Side::Below => evaluate(m, Numerator::Lower, xi, r, false, s, quad, Complex64::from(-fact)),
    }
}

/// Dispatch on [`MomentKind`]. Integer and tail kinds need an integral order.
pub fn moment<M: MgfModel + ?Sized>(m: &M, kind: MomentKind, spec: &MomentSpec) -> Result<MomentValue> {
    let integral_order = || -> Result<u32> {
        let r = spec.order;
        if r.im == 0.0 && r.re >= 1.0 && r.re == r.re.round() && r.re <= 170.0 {
            Ok(r.re as u32)
        } else {
            Err(Error::domain(format!("positive integer order required, got r = {}", fmt_order(r))))
        }
    };
    match kind {
        MomentKind::Absolute => absolute_moment(m, spec),
        MomentKind::NonNegative => nonneg_moment(m, spec),
        MomentKind::Integer => integer_moment(m, integral_order()?, spec.shift, &spec.quad, spec.contour_s),
        MomentKind::TailAbove => tail_moment(m, integral_order()?, spec.shift, Side::Above, &spec.quad, spec.contour_s),
        MomentKind::TailBelow => tail_moment(m, integral_order()?, spec.shift, Side::Below, &spec.quad, spec.contour_s),
    }
}

fn check_real_order_bound(r: Complex64) -> Result<()> {
    if r.re <= -1.0 {
        Err(Error::domain(format!("Re(r) > -1 required, got r = {}", fmt_order(r))))
    } else {
        Ok(())
    }
}
