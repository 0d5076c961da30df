//! Modified Bessel function of the second kind, order one, real argument.

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `exp(x) K_1(x)` for `x > 0`.
pub fn bessel_k1_scaled(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("K1 needs a positive finite argument, got {x}")));
    }
    if x <= 2.0 {
        Ok(k1_series(x) * x.exp())
    } else {
        k1_steed_scaled(x)
    }
}

/// `K_1(x)` for `x > 0`.
pub fn bessel_k1(x: f64) -> Result<f64> {
    if x > 0.0 && x <= 2.0 {
        return Ok(k1_series(x));
    }
    Ok(bessel_k1_scaled(x)? * (-x).exp())
}

// K1(x) = 1/x + ln(x/2) I1(x) - (x/4) sum_k [psi(k+1) + psi(k+2)] (x^2/4)^k / (k! (k+1)!)
fn k1_series(x: f64) -> f64 {
    let y = 0.25 * x * x;
    let mut term = 1.0;
    let mut i1 = 0.0;
    let mut rest = 0.0;
    let mut harmonic = 0.0;
    for k in 0..60 {
        let kf = k as f64;
        if k > 0 {
            term *= y / (kf * (kf + 1.0));
            harmonic += 1.0 / kf;
        }
        let psi_sum = 2.0 * (harmonic - EULER_GAMMA) + 1.0 / (kf + 1.0);
        i1 += term;
        rest += psi_sum * term;
        if term < 1e-18 * i1 {
            break;
        }
    }
    1.0 / x + (0.5 * x).ln() * (0.5 * x * i1) - 0.25 * x * rest
}

// Steed's continued fraction for (K_0, K_1), scaled by exp(x); x > 1.
fn k1_steed_scaled(x: f64) -> Result<f64> {
    let mut a = -0.25;
    let mut b = 2.0 * (x + 1.0);
    let mut d = 1.0 / b;
    let mut delta = d;
    let mut f = d;
    let mut prev = 0.0;
    let mut cur = 1.0;
    let mut q = -a;
    let mut c = -a;
    let mut s = 1.0 + q * delta;
    for k in 2..10_000 {
        let kf = k as f64;
        a -= 2.0 * (kf - 1.0);
        b += 2.0;
        d = 1.0 / (a * d + b);
        delta *= b * d - 1.0;
        f += delta;
        let t = (prev - (b - 2.0) * cur) / a;
        prev = cur;
        cur = t;
        c *= -a / kf;
        q += c * t;
        s += q * delta;
        if (q * delta).abs() < s.abs() * f64::EPSILON / 2.0 {
            let k0 = (std::f64::consts::PI / (2.0 * x)).sqrt() / s;
            return Ok(k0 * (0.5 + x - 0.25 * f) / x);
        }
    }
    Err(Error::Computation(format!("K1 continued fraction did not converge at x = {x}")))
}
