//! Semi-infinite and finite quadrature for MGF integrands.
//!
//! The half line is covered by panels `[0, w], [w, 2w], [2w, 4w], ...`, each
//! integrated by a globally adaptive 21-point Gauss-Kronrod rule.

mod gk;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum PanelRule {
    #[default]
    GaussKronrod21,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Budget of Kronrod subintervals over the whole call.
    pub max_panels: usize,
    pub panel_rule: PanelRule,
    /// `r` such that the integrand is `O(t^-(r+1))`.
    pub tail_exponent_hint: Option<f64>,
    /// Width of the first panel.
    pub first_width: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_panels: 1 << 20,
            panel_rule: PanelRule::GaussKronrod21,
            tail_exponent_hint: None,
            first_width: 1.0,
        }
    }
}

impl QuadConfig {
    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    pub fn with_hint(mut self, r: f64) -> Self {
        self.tail_exponent_hint = Some(r);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::parameter(format!("abs_tol must be positive, got {}", self.abs_tol)));
        }
        if !(self.rel_tol >= 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::parameter(format!("rel_tol must be non-negative, got {}", self.rel_tol)));
        }
        if self.max_panels < 1 {
            return Err(Error::parameter("max_panels must be at least 1"));
        }
        if !(self.first_width > 0.0 && self.first_width.is_finite()) {
            return Err(Error::parameter("first_width must be positive"));
        }
        Ok(())
    }

    fn tol(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub err_estimate: f64,
    /// Kronrod subintervals evaluated.
    pub panels_used: usize,
    pub truncation_point: f64,
}

// Panels with |I| below this multiple of their own error do not feed the
// ratio extrapolation.
const RATIO_NOISE: f64 = 50.0;
const MAX_RATIO: f64 = 0.95;
const MIN_PANELS: usize = 4;

/// `int_0^inf g(t) dt` for an infallible integrand.
pub fn integrate_half_line<F>(mut g: F, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_half_line(|t| Ok(g(t)), cfg)
}

/// `int_0^inf g(t) dt` where evaluating `g` may fail; the first failure is
/// returned unchanged.
///
/// Stopping: after at least four panels, the call ends when one of
/// * the envelope `C t^-(r+1)` fitted to the last panel (needs a hint
///   `r > 0`) bounds the remaining tail below `tol/4` and the panel itself
///   is below `tol/4`;
/// * without a usable hint, two consecutive panels carry `int |g| < tol/4`;
/// * three consecutive panels of one sign decay geometrically with a stable
///   ratio, and the geometrically extrapolated totals of the last two steps
///   agree within `tol/4` (the extrapolated tail is added to the value).
pub fn try_integrate_half_line<F>(mut g: F, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    cfg.validate()?;
    let mut budget = cfg.max_panels;
    let mut sum = 0.0;
    let mut err_sum = 0.0;
    let mut history: Vec<gk::Segment> = Vec::new();
    let mut prev_extrapolated: Option<f64> = None;
    let hint = cfg.tail_exponent_hint.filter(|r| *r > 0.0);

    let mut k = 0usize;
    loop {
        let a = if k == 0 { 0.0 } else { cfg.first_width * 2f64.powi(k as i32 - 1) };
        let b = cfg.first_width * 2f64.powi(k as i32);
        if !b.is_finite() || b > 1e300 {
            return Err(Error::Convergence {
                message: "integrand tail did not settle before t = 1e300".into(),
                partial: prev_extrapolated.unwrap_or(sum),
                err_estimate: err_sum + history.last().map_or(f64::INFINITY, |s| s.res_abs),
            });
        }
        let weight = 0.5 / ((k + 1) * (k + 1)) as f64;
        let panel_abs = cfg.abs_tol.max(cfg.rel_tol * sum.abs()) * weight;
        let seg = gk::adaptive(&mut g, a, b, panel_abs, cfg.rel_tol * weight, &mut budget).map_err(|e| match e {
            Error::Convergence { message, partial, err_estimate } => Error::Convergence {
                message: format!("{message} (half-line panel {k})"),
                partial: sum + partial,
                err_estimate: err_sum + err_estimate,
            },
            other => other,
        })?;
        sum += seg.value;
        err_sum += seg.err;
        history.push(seg);
        let used = cfg.max_panels - budget;
        let done = |value: f64, err: f64| QuadResult {
            value,
            err_estimate: err,
            panels_used: used,
            truncation_point: b,
        };

        let tol = cfg.tol(sum);
        let n = history.len();
        let extrapolated = geometric_extrapolation(&history).map(|tail| sum + tail);

        if n >= MIN_PANELS {
            let last = &history[n - 1];
            let before = &history[n - 2];
            if let Some(r) = hint {
                let envelope = last.res_abs / (2f64.powf(r) - 1.0);
                if last.value.abs() < 0.25 * tol && envelope < 0.25 * tol && before.res_abs < 0.25 * tol {
                    return Ok(done(sum, err_sum + envelope));
                }
            } else if last.res_abs < 0.25 * tol && before.res_abs < 0.25 * tol {
                return Ok(done(sum, err_sum + last.res_abs));
            }
            if let (Some(now), Some(then)) = (extrapolated, prev_extrapolated) {
                let shift = (now - then).abs();
                if shift < 0.25 * cfg.tol(now) {
                    return Ok(done(now, err_sum + shift));
                }
            }
        }
        prev_extrapolated = extrapolated;

        if budget < 2 {
            return Err(Error::Convergence {
                message: format!("subinterval budget {} exhausted at t = {b}", cfg.max_panels),
                partial: extrapolated.unwrap_or(sum),
                err_estimate: err_sum + history[n - 1].res_abs,
            });
        }
        k += 1;
    }
}

/// Tail `I_k rho / (1 - rho)` when the last three panels look geometric.
fn geometric_extrapolation(h: &[gk::Segment]) -> Option<f64> {
    let n = h.len();
    if n < 4 {
        return None;
    }
    let (i0, i1, i2) = (h[n - 3], h[n - 2], h[n - 1]);
    for s in [&i0, &i1, &i2] {
        if !(s.value.abs() > RATIO_NOISE * s.err) || s.value == 0.0 {
            return None;
        }
        // the panel must be essentially single-signed
        if s.res_abs > s.value.abs() * (1.0 + 1e-9) {
            return None;
        }
    }
    let rho_prev = i1.value / i0.value;
    let rho = i2.value / i1.value;
    if !(rho > 0.0 && rho < MAX_RATIO && rho_prev > 0.0 && rho_prev < 1.0) {
        return None;
    }
    if (rho - rho_prev).abs() > 0.05 * rho {
        return None;
    }
    Some(i2.value * rho / (1.0 - rho))
}

/// `int_{-inf}^{inf} g(t) dt` for complex `g`, as two half-line integrals of
/// `g(t) + g(-t)` (real and imaginary parts separately).
pub fn integrate_full_line<F>(mut g: F, cfg: &QuadConfig) -> Result<(Complex64, QuadResult, QuadResult)>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let re = try_integrate_half_line(|t| Ok((g(t)? + g(-t)?).re), cfg)?;
    let im = try_integrate_half_line(|t| Ok((g(t)? + g(-t)?).im), cfg)?;
    Ok((Complex64::new(re.value, im.value), re, im))
}

/// `int_a^b g(t) dt` by global adaptivity.
pub fn try_integrate_interval<F>(mut g: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("finite interval endpoints required"));
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            err_estimate: 0.0,
            panels_used: 0,
            truncation_point: b,
        });
    }
    let mut budget = cfg.max_panels;
    let seg = gk::adaptive(&mut g, a, b, cfg.abs_tol, cfg.rel_tol, &mut budget)?;
    Ok(QuadResult {
        value: seg.value,
        err_estimate: seg.err,
        panels_used: cfg.max_panels - budget,
        truncation_point: b,
    })
}

/// `int_0^b g(t) dt` over panels growing geometrically away from 0; useful
/// when the integrand is concentrated near the origin of a long interval.
pub fn try_integrate_outward<F>(mut g: F, b: f64, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    cfg.validate()?;
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::domain("positive finite upper limit required"));
    }
    let mut budget = cfg.max_panels;
    let mut edges = vec![0.0];
    let mut w = cfg.first_width.min(b);
    while w < b {
        edges.push(w);
        w *= 2.0;
    }
    edges.push(b);
    let npanels = edges.len() - 1;
    let mut sum = 0.0f64;
    let mut err = 0.0;
    let weight = 1.0 / npanels as f64;
    for pair in edges.windows(2) {
        let seg = gk::adaptive(
            &mut g,
            pair[0],
            pair[1],
            cfg.abs_tol.max(cfg.rel_tol * sum.abs()) * weight,
            cfg.rel_tol * weight,
            &mut budget,
        )?;
        sum += seg.value;
        err += seg.err;
    }
    Ok(QuadResult {
        value: sum,
        err_estimate: err,
        panels_used: cfg.max_panels - budget,
        truncation_point: b,
    })
}

/// `int_0^inf g(t) dt` for an integrand oscillating with angular frequency
/// `omega` about a slowly decaying envelope. Integrates half-periods past an
/// initial stretch and accelerates the partial sums with Wynn's epsilon
/// algorithm.
pub fn try_integrate_half_line_oscillating<F>(mut g: F, omega: f64, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    cfg.validate()?;
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::parameter(format!("oscillation frequency must be positive, got {omega}")));
    }
    let half_period = std::f64::consts::PI / omega;
    let start = (16.0 * cfg.first_width).max(8.0 * half_period);
    let head = try_integrate_outward(&mut g, start, &QuadConfig { abs_tol: 0.1 * cfg.abs_tol, ..*cfg })?;
    let mut used = head.panels_used;
    let mut err = head.err_estimate;

    let mut partial = vec![head.value];
    let mut last_estimate: Option<f64> = None;
    let max_cycles = 20_000usize;
    let mut a = start;
    for j in 0..max_cycles {
        let b = start + (j + 1) as f64 * half_period;
        let mut budget = cfg.max_panels.saturating_sub(used);
        if budget < 2 {
            break;
        }
        let before = budget;
        let seg = gk::adaptive(&mut g, a, b, 0.01 * cfg.abs_tol, 0.0, &mut budget)?;
        used += before - budget;
        err += seg.err;
        a = b;
        let next = partial.last().copied().unwrap_or(0.0) + seg.value;
        partial.push(next);

        if partial.len() >= 12 {
            let window = &partial[partial.len().saturating_sub(30)..];
            let estimate = wynn_epsilon(window);
            if let Some(prev) = last_estimate {
                let shift = (estimate - prev).abs();
                if shift < 0.25 * cfg.tol(estimate) {
                    return Ok(QuadResult {
                        value: estimate,
                        err_estimate: err + shift,
                        panels_used: used,
                        truncation_point: b,
                    });
                }
            }
            last_estimate = Some(estimate);
        }
    }
    Err(Error::Convergence {
        message: "oscillatory tail extrapolation did not settle".into(),
        partial: last_estimate.unwrap_or(*partial.last().unwrap_or(&0.0)),
        err_estimate: err,
    })
}

/// Highest even column of Wynn's epsilon table built from `seq`.
fn wynn_epsilon(seq: &[f64]) -> f64 {
    let n = seq.len();
    let mut prev = vec![0.0; n + 1];
    let mut cur: Vec<f64> = seq.to_vec();
    let mut best = seq[n - 1];
    let mut col = 0usize;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for j in 0..cur.len() - 1 {
            let d = cur[j + 1] - cur[j];
            if d == 0.0 || !d.is_finite() {
                return best;
            }
            next.push(prev[j + 1] + 1.0 / d);
        }
        prev = cur;
        cur = next;
        col += 1;
        if col.is_multiple_of(2) {
            let v = cur[cur.len() - 1];
            if v.is_finite() {
                best = v;
            } else {
                return best;
            }
        }
    }
    best
}
