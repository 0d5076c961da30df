use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::contour::INV_PI;
use super::{integer_moment, tail_moment, Side};
use crate::error::{Error, Result};
use crate::mgf::MgfModel;
use crate::quadrature::{try_integrate_half_line, try_integrate_half_line_oscillating, QuadConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CdfValue {
    pub value: f64,
    pub err_estimate: f64,
    /// Set when a quadrature overshoot below the tolerance was clipped into
    /// `[0, 1]`.
    pub clamped: bool,
}

// First-pass budget before switching to the oscillatory tail method.
const PLAIN_BUDGET: usize = 20_000;

/// `F(x) = 1/2 - (1/pi) int_0^inf Re[M(it) exp(-itx) / (it)] dt`.
pub fn cdf<M: MgfModel + ?Sized>(m: &M, x: f64, quad: &QuadConfig) -> Result<CdfValue> {
    if !m.is_continuous() {
        return Err(Error::domain(format!(
            "distribution function inversion needs a continuous law, {} is discrete",
            m.descriptor()
        )));
    }
    if !x.is_finite() {
        return Err(Error::domain("cdf argument must be finite"));
    }
    let g = |t: f64| -> Result<f64> {
        let w = m.eval(Complex64::new(0.0, t))? * Complex64::new(0.0, -t * x).exp();
        Ok(w.im / t)
    };
    let plain = QuadConfig {
        max_panels: quad.max_panels.min(PLAIN_BUDGET),
        ..*quad
    };
    let res = match try_integrate_half_line(g, &plain) {
        Err(Error::Convergence { .. }) if x != 0.0 => try_integrate_half_line_oscillating(g, x.abs(), quad)?,
        other => other?,
    };
    let raw = 0.5 - INV_PI * res.value;
    let err = INV_PI * res.err_estimate;
    let slack = quad.abs_tol.max(err);
    if raw < -slack || raw > 1.0 + slack {
        return Err(Error::Computation(format!(
            "distribution function {raw} outside [0, 1] beyond the error estimate {err:e}"
        )));
    }
    let value = raw.clamp(0.0, 1.0);
    Ok(CdfValue {
        value,
        err_estimate: err,
        clamped: value != raw,
    })
}

fn check_level(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

/// `F^-1(alpha)`: bracket at mean +- 20 sd, bisect to a relative width of
/// 1e-12, then one secant step inside the final bracket.
pub fn quantile<M: MgfModel + ?Sized>(m: &M, alpha: f64, quad: &QuadConfig) -> Result<f64> {
    check_level(alpha)?;
    if !m.is_continuous() {
        return Err(Error::domain("quantiles need a continuous law"));
    }
    let mean = integer_moment(m, 1, 0.0, quad, None)?.re();
    let second = integer_moment(m, 2, 0.0, quad, None)?.re();
    let var = second - mean * mean;
    if !(var > 0.0) {
        return Err(Error::Computation(format!("non-positive variance {var:e} while bracketing")));
    }
    let sd = var.sqrt();
    let f = |x: f64| cdf(m, x, quad).map(|c| c.value - alpha);

    let (mut lo, mut hi) = (mean - 20.0 * sd, mean + 20.0 * sd);
    let (mut flo, mut fhi) = (f(lo)?, f(hi)?);
    let mut widen = 0;
    while !(flo <= 0.0 && fhi >= 0.0) {
        widen += 1;
        if widen > 8 {
            return Err(Error::Root(format!(
                "could not bracket the {alpha} quantile in [{lo}, {hi}]"
            )));
        }
        let w = hi - lo;
        if flo > 0.0 {
            lo -= w;
            flo = f(lo)?;
        }
        if fhi < 0.0 {
            hi += w;
            fhi = f(hi)?;
        }
    }

    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-12 * mid.abs().max(1.0) {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm < 0.0 {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    if fhi > flo {
        let x = lo - flo * (hi - lo) / (fhi - flo);
        if x >= lo && x <= hi {
            return Ok(x);
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskMeasures {
    pub alpha: f64,
    pub quantile: f64,
    pub expected_shortfall: f64,
}

/// `ES = -(1/alpha) E[(X - q) 1{X < q}] - q` at the `alpha`-quantile `q`.
pub fn expected_shortfall<M: MgfModel + ?Sized>(m: &M, alpha: f64, quad: &QuadConfig) -> Result<RiskMeasures> {
    let q = quantile(m, alpha, quad)?;
    let below = tail_moment(m, 1, q, Side::Below, quad, None)?.re();
    Ok(RiskMeasures {
        alpha,
        quantile: q,
        expected_shortfall: -below / alpha - q,
    })
}
