use num_complex::Complex64;

use super::contour::INV_PI;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_full_line, try_integrate_half_line, try_integrate_half_line_oscillating, QuadConfig, QuadResult};

/// `1 / Gamma(r/2 + 1)` from the contour integral of `exp(z^2/2) / z^(r+1)`
/// along `Re z = 1`.
pub fn reciprocal_gamma(r: f64, quad: &QuadConfig) -> Result<f64> {
    if !(r > -1.0 && r.is_finite()) {
        return Err(Error::domain(format!("r > -1 required, got r = {r}")));
    }
    let p = r + 1.0;
    let (v, _, _) = integrate_full_line(
        |t| {
            let z = Complex64::new(1.0, t);
            Ok((0.5 * z * z - p * z.ln()).exp())
        },
        quad,
    )?;
    Ok(2f64.powf(0.5 * r) * INV_PI * v.re)
}

/// `int_0^inf Re[exp(z x) / z^(r+1)] dt` along `z = s + it`, which is
/// `x^r pi / Gamma(r+1)` for `x > 0` and zero for `x < 0`.
pub fn vanishing_integral(x: f64, s: f64, r: f64, quad: &QuadConfig) -> Result<QuadResult> {
    if !(s > 0.0) || !(r > -1.0) || !x.is_finite() {
        return Err(Error::domain("s > 0, r > -1 and finite x required"));
    }
    let p = r + 1.0;
    let g = |t: f64| {
        let z = Complex64::new(s, t);
        Ok((x * z - p * z.ln()).exp().re)
    };
    if x == 0.0 {
        try_integrate_half_line(g, &quad.with_hint(r))
    } else {
        try_integrate_half_line_oscillating(g, x.abs(), quad)
    }
}
