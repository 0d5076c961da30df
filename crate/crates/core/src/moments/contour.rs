//! Shared engine: `int_0^inf Re[phi(z) / z^p] dt` or the full-line complex
//! version along `z = s + it`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::lattice;
use crate::error::{Error, Result};
use crate::mgf::{checked_exp, MgfModel};
use crate::quadrature::{integrate_full_line, try_integrate_half_line, try_integrate_outward, QuadConfig};

/// Which combination of `M(z)` and `M(-z)` sits in the numerator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Numerator {
    /// `exp(-xi z) M(z)`
    Upper,
    /// `exp(xi z) M(-z)`
    Lower,
    /// `exp(-xi z) M(z) + sign exp(xi z) M(-z)`
    Both { sign: f64 },
}

impl Numerator {
    pub(crate) fn needs_upper(self) -> bool {
        !matches!(self, Numerator::Lower)
    }

    pub(crate) fn needs_lower(self) -> bool {
        !matches!(self, Numerator::Upper)
    }

    /// Period mean of the numerator in units of `P(X = xi)`.
    fn atom_weight(self) -> f64 {
        match self {
            Numerator::Upper | Numerator::Lower => 1.0,
            Numerator::Both { sign } => 1.0 + sign,
        }
    }
}

pub(crate) struct Integral {
    pub value: Complex64,
    pub err: f64,
    pub panels: usize,
}

pub(crate) fn numerator<M: MgfModel + ?Sized>(m: &M, num: Numerator, xi: f64, z: Complex64) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    if num.needs_upper() {
        acc += m.eval(z)? * checked_exp(-xi * z, "shift factor")?;
    }
    if num.needs_lower() {
        let lower = m.eval(-z)? * checked_exp(xi * z, "shift factor")?;
        acc += match num {
            Numerator::Both { sign } => sign * lower,
            _ => lower,
        };
    }
    Ok(acc)
}

pub(crate) fn check_abscissa<M: MgfModel + ?Sized>(m: &M, num: Numerator, s: f64) -> Result<()> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::domain(format!("contour abscissa must be positive, got {s}")));
    }
    let strip = m.strip();
    if num.needs_upper() && !strip.contains(s) {
        return Err(Error::domain(format!("abscissa s = {s} outside the strip {strip}")));
    }
    if num.needs_lower() && !strip.contains(-s) {
        return Err(Error::domain(format!("abscissa -s = {} outside the strip {strip}", -s)));
    }
    Ok(())
}

/// `P(X = xi)` as declared, or measured as the period mean of the numerator.
fn atom_mass<M: MgfModel + ?Sized>(m: &M, xi: f64, s: f64, period: Option<f64>, quad: &QuadConfig) -> Result<f64> {
    if let Some(p) = m.point_mass(xi) {
        return Ok(p);
    }
    let Some(period) = period else {
        return Ok(0.0);
    };
    let cfg = QuadConfig { abs_tol: 1e-14, rel_tol: 1e-12, ..*quad };
    let half = 0.5 * period;
    let r = try_integrate_outward(
        |v| {
            let a = numerator(m, Numerator::Upper, xi, Complex64::new(s, v))?;
            let b = numerator(m, Numerator::Upper, xi, Complex64::new(s, -v))?;
            Ok((a + b).re)
        },
        half,
        &cfg,
    )?;
    Ok((r.value / period).max(0.0))
}

/// Precondition shared by every theorem: `Re(r) > -1`, and `Re(r) > 0` when
/// `X` has an atom at `xi`.
pub(crate) fn check_order<M: MgfModel + ?Sized>(m: &M, r: Complex64, xi: f64, s: f64, quad: &QuadConfig) -> Result<f64> {
    if !(r.re.is_finite() && r.im.is_finite()) {
        return Err(Error::domain("moment order must be finite"));
    }
    if r.re <= -1.0 {
        return Err(Error::domain(format!("Re(r) > -1 required, got r = {}", fmt_order(r))));
    }
    let period = m.lattice().filter(|l| l.contains(xi)).map(|l| l.period());
    let mass = atom_mass(m, xi, s, period, quad)?;
    if mass > 1e-300 && r.re <= 0.0 {
        return Err(Error::domain(format!(
            "Re(r) > 0 required: X has an atom at xi = {xi} (mass {mass:.3e}), got r = {}",
            fmt_order(r)
        )));
    }
    Ok(mass)
}

pub(crate) fn fmt_order(r: Complex64) -> String {
    if r.im == 0.0 {
        format!("{}", r.re)
    } else {
        format!("{}{:+}i", r.re, r.im)
    }
}

/// Integral of `phi(z) z^-(r+1)`: half-line real part when `full_line` is
/// false, whole line otherwise. `mass` is `P(X = xi)`.
pub(crate) fn contour_integral<M: MgfModel + ?Sized>(
    m: &M,
    num: Numerator,
    xi: f64,
    s: f64,
    r: Complex64,
    mass: f64,
    full_line: bool,
    quad: &QuadConfig,
) -> Result<Integral> {
    let p = r + 1.0;
    let lattice = m.lattice().filter(|l| l.contains(xi));
    let mut cfg = *quad;
    if cfg.tail_exponent_hint.is_none() && r.re > 0.0 {
        cfg.tail_exponent_hint = Some(r.re);
    }

    if let Some(l) = lattice {
        let period = l.period();
        let half = 0.5 * period;
        let mean = mass * num.atom_weight();
        let phi0 = |v: f64| -> Result<Complex64> { Ok(numerator(m, num, xi, Complex64::new(s, v))? - mean) };
        if full_line {
            let kernel = |v: f64| lattice::full_line_kernel(v, s, p, period);
            let re = try_integrate_outward(
                |v| Ok((phi0(v)? * kernel(v) + phi0(-v)? * kernel(-v)).re),
                half,
                &cfg,
            )?;
            let im = try_integrate_outward(
                |v| Ok((phi0(v)? * kernel(v) + phi0(-v)? * kernel(-v)).im),
                half,
                &cfg,
            )?;
            return Ok(Integral {
                value: Complex64::new(re.value, im.value),
                err: re.err_estimate + im.err_estimate,
                panels: re.panels_used + im.panels_used,
            });
        }
        let kernel = |v: f64| lattice::half_line_kernel(v, s, p, period);
        let res = try_integrate_outward(
            |v| Ok((phi0(v)? * kernel(v) + phi0(-v)? * kernel(-v)).re),
            half,
            &cfg,
        )?;
        return Ok(Integral {
            value: Complex64::new(res.value, 0.0),
            err: res.err_estimate,
            panels: res.panels_used,
        });
    }

    if let Some(l) = m.lattice() {
        return off_lattice_integral(m, num, xi, s, p, l.offset, l.span, full_line, &cfg);
    }

    let integrand = |t: f64| -> Result<Complex64> {
        let z = Complex64::new(s, t);
        Ok(numerator(m, num, xi, z)? * (-p * z.ln()).exp())
    };
    if full_line {
        let (v, re, im) = integrate_full_line(integrand, &cfg)?;
        Ok(Integral {
            value: v,
            err: re.err_estimate + im.err_estimate,
            panels: re.panels_used + im.panels_used,
        })
    } else {
        let res = try_integrate_half_line(|t| Ok(integrand(t)?.re), &cfg)?;
        Ok(Integral {
            value: Complex64::new(res.value, 0.0),
            err: res.err_estimate,
            panels: res.panels_used,
        })
    }
}

/// Lattice law with `xi` off the lattice: fold onto one period with the
/// twisted kernels of the upper and lower numerators.
#[allow(clippy::too_many_arguments)]
fn off_lattice_integral<M: MgfModel + ?Sized>(
    m: &M,
    num: Numerator,
    xi: f64,
    s: f64,
    p: Complex64,
    offset: f64,
    span: f64,
    full_line: bool,
    cfg: &QuadConfig,
) -> Result<Integral> {
    let period = 2.0 * PI / span;
    let d = (offset - xi).rem_euclid(span);
    let w = Complex64::from_polar(1.0, period * d);
    let folded = |v: f64| -> Result<Complex64> {
        let c = Complex64::new(s, v);
        let mut acc = Complex64::new(0.0, 0.0);
        if num.needs_upper() {
            let upper = m.eval(c)? * checked_exp(-xi * c, "shift factor")?;
            acc += upper * lattice::twisted_kernel(v, s, p, period, w, full_line)?;
        }
        if num.needs_lower() {
            let lower = m.eval(-c)? * checked_exp(xi * c, "shift factor")?;
            let sign = match num {
                Numerator::Both { sign } => sign,
                _ => 1.0,
            };
            acc += sign * lower * lattice::twisted_kernel(v, s, p, period, w.conj(), full_line)?;
        }
        Ok(acc)
    };
    let half = 0.5 * period;
    let re = try_integrate_outward(|v| Ok((folded(v)? + folded(-v)?).re), half, cfg)?;
    if !full_line {
        return Ok(Integral {
            value: Complex64::new(re.value, 0.0),
            err: re.err_estimate,
            panels: re.panels_used,
        });
    }
    let im = try_integrate_outward(|v| Ok((folded(v)? + folded(-v)?).im), half, cfg)?;
    Ok(Integral {
        value: Complex64::new(re.value, im.value),
        err: re.err_estimate + im.err_estimate,
        panels: re.panels_used + im.panels_used,
    })
}

pub(crate) const INV_PI: f64 = 1.0 / PI;
