//! Conditional MGFs of dynamic models via affine recursions
//! `M(z) = exp(A(H, z) + B(H, z) . state)`.

mod arp;
pub mod fixtures;
mod harg;
mod hng;
mod term_structure;

pub use arp::{arp_mgf, arp_probe, ArpModel, ArpParams, ArpState};
pub use harg::{harg_mgf, harg_probe, ArgLaw, HargModel, HargParams, HargState, HAR_LAGS};
pub use hng::{hng_mgf, hng_probe, HngModel, HngParams, HngState};
pub use term_structure::{term_structure, DynamicSpec, TermCell, TermStructure};

use crate::error::{Error, Result};
use crate::mgf::Strip;

/// Outcome of a real-axis validity search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probe {
    /// Strip after the safety margin.
    pub strip: Strip,
    /// Largest valid positive abscissa found before the margin.
    pub s_plus: f64,
    /// Most negative valid abscissa found before the margin.
    pub s_minus: f64,
}

pub(crate) const PROBE_MARGIN: f64 = 0.9;
const BISECTIONS: usize = 80;

fn boundary(valid: &dyn Fn(f64) -> bool, cap: f64) -> f64 {
    if valid(cap) {
        return cap;
    }
    let (mut lo, mut hi) = (0.0, cap);
    for _ in 0..BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if valid(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Bisects for the widest `(s_minus, s_plus)` within `[neg_cap, pos_cap]` on
/// which `valid` holds, assuming validity is monotone in `|s|`.
pub(crate) fn probe_strip(valid: impl Fn(f64) -> bool, neg_cap: f64, pos_cap: f64, what: &str) -> Result<Probe> {
    let s_plus = boundary(&valid, pos_cap);
    let s_minus = -boundary(&|s: f64| valid(-s), -neg_cap);
    if s_plus < 1e-8 || -s_minus < 1e-8 {
        return Err(Error::DegenerateStrip(format!(
            "{what}: no feasible abscissa beyond 1e-8 (found ({s_minus:e}, {s_plus:e}))"
        )));
    }
    Ok(Probe {
        strip: Strip {
            s_min: PROBE_MARGIN * s_minus,
            s_max: PROBE_MARGIN * s_plus,
        },
        s_plus,
        s_minus,
    })
}

pub(crate) fn check_horizon(h: usize) -> Result<()> {
    if h == 0 {
        Err(Error::parameter("horizon must be at least 1"))
    } else {
        Ok(())
    }
}

pub(crate) fn non_negative(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::parameter(format!("{name} must be non-negative, got {v}")))
    }
}

pub(crate) fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::parameter(format!("{name} must be positive, got {v}")))
    }
}
