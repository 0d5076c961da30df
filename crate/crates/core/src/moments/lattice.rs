//! Periodized contour integrals for lattice-valued variables.
//!
//! When `X - xi` lives on `span * Z`, `phi(t) = E[exp((s+it)(X-xi))]` is
//! periodic in `t` with period `P = 2 pi / span` and never decays, so the
//! half-line integral of `phi(t) (s+it)^-p` is folded onto one period:
//!
//! `int_0^inf phi(t) z^-p dt = int_{-P/2}^{P/2} phi(v) W(v) dv`,
//! `W(v) = 1{v >= 0} c^-p + sum_{k>=1} (c + ikP)^-p`, `c = s + iv`.
//!
//! Subtracting the constant `(s + ikP)^-p` from every term leaves the integral
//! unchanged once the period mean of `phi` (the atom at `xi`) is removed, and
//! makes the sum converge like `k^-(p+1)`. The tail of the sum is done by
//! Euler-Maclaurin.
//!
//! When `xi` sits off the lattice, `X - xi` lives on `d + span * Z` and each
//! period picks up the phase `w = exp(i P d)`. The sum over periods then
//! converges for every `Re(p) > 0` and is evaluated by [`twisted_sum`].

use num_complex::Complex64;

use crate::error::Result;
use crate::mgf::special::expm1_complex;
use crate::mgf::gamma_complex;
use crate::quadrature::{try_integrate_half_line, QuadConfig};

// B_{2j} / (2j)!
const BERNOULLI_OVER_FACT: [f64; 5] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
];

fn pow_neg(z: Complex64, p: Complex64) -> Complex64 {
    (-p * z.ln()).exp()
}

/// `sum_{k>=1} [(c + i sigma k P)^-p - (s + i sigma k P)^-p]` for `sigma = +-1`.
pub(crate) fn shifted_sum(c: Complex64, s: f64, p: Complex64, period: f64, sigma: f64) -> Complex64 {
    let q = Complex64::new(0.0, sigma * period);
    let n = ((2.0 * (p.norm() + 12.0 + c.norm()) / period).ceil() as usize).max(10);
    let sc = Complex64::from(s);
    let f = |x: f64, shift: f64| -> Complex64 {
        let xs = q * x;
        pow_neg(c + xs, p + shift) - pow_neg(sc + xs, p + shift)
    };

    let mut acc = Complex64::new(0.0, 0.0);
    for k in 1..n {
        acc += f(k as f64, 0.0);
    }

    let nf = n as f64;
    let a_c = c + q * nf;
    let a_s = sc + q * nf;
    // int_N^inf f = -(a_c^(1-p) - a_s^(1-p)) / ((1-p) q)
    let log_ratio = (a_c / a_s).ln();
    let one_minus_p = 1.0 - p;
    let g = if one_minus_p.norm() < 1e-14 {
        log_ratio
    } else {
        expm1_complex(one_minus_p * log_ratio) / one_minus_p
    };
    let a_s_pow = (one_minus_p * a_s.ln()).exp();
    let integral = -a_s_pow * g / q;

    let mut tail = integral + 0.5 * f(nf, 0.0);
    // f^(m)(N) = q^m (-p)(-p-1)...(-p-m+1) [(a_c)^-(p+m) - (a_s)^-(p+m)]
    let mut falling = Complex64::new(1.0, 0.0);
    let mut qpow = Complex64::new(1.0, 0.0);
    let mut m = 0usize;
    for (j, coef) in BERNOULLI_OVER_FACT.iter().enumerate() {
        let order = 2 * j + 1;
        while m < order {
            falling *= -p - m as f64;
            qpow *= q;
            m += 1;
        }
        let deriv = qpow * falling * f(nf, order as f64);
        tail -= *coef * deriv;
    }
    acc + tail
}

/// Kernel for the half-line form at `v` in `[-P/2, P/2]`.
pub(crate) fn half_line_kernel(v: f64, s: f64, p: Complex64, period: f64) -> Complex64 {
    let c = Complex64::new(s, v);
    let body = shifted_sum(c, s, p, period, 1.0);
    if v >= 0.0 {
        body + pow_neg(c, p)
    } else {
        body
    }
}

/// Kernel for the full-line form at `v` in `[-P/2, P/2]`.
pub(crate) fn full_line_kernel(v: f64, s: f64, p: Complex64, period: f64) -> Complex64 {
    let c = Complex64::new(s, v);
    pow_neg(c, p) + shifted_sum(c, s, p, period, 1.0) + shifted_sum(c, s, p, period, -1.0)
}

/// `sum_{k>=1} w^k (c + i sigma k P)^-p` for `|w| = 1`, `w != 1`, `Re c > 0`,
/// `|Im c| <= P/2` and `Re p > 0`.
///
/// Rotating the Laplace representation of each term onto the ray
/// `u = -i sigma y` turns the sum into a geometric series:
/// `(-i sigma)^p / Gamma(p) P^-p int_0^inf x^(p-1) exp(i sigma c x / P) w e^-x / (1 - w e^-x) dx`.
pub(crate) fn twisted_sum(c: Complex64, p: Complex64, period: f64, sigma: f64, w: Complex64) -> Result<Complex64> {
    let a = p.re;
    let phase = Complex64::new(0.0, sigma) * c / period;
    // exp(phase x) w e^-x / (1 - w e^-x); the exponents are joined so the
    // growth of exp(phase x) never meets the decay as inf * 0
    let body = |x: f64| -> Complex64 {
        let denom = Complex64::new(1.0, 0.0) - w * (-x).exp();
        w * ((phase - 1.0) * x).exp() / denom
    };
    // x = t^(1/a) removes the x^(a-1) endpoint singularity for a < 1
    let integrand = |t: f64| -> Complex64 {
        if t == 0.0 && a < 1.0 {
            return if p.im == 0.0 { body(0.0) / a } else { Complex64::new(0.0, 0.0) };
        }
        if a < 1.0 {
            let x = t.powf(1.0 / a);
            let pow = (Complex64::new(0.0, p.im / a) * t.ln()).exp();
            pow * body(x) / a
        } else {
            let pow = if t == 0.0 { Complex64::new(if a == 1.0 { 1.0 } else { 0.0 }, 0.0) } else { ((p - 1.0) * t.ln()).exp() };
            pow * body(t)
        }
    };
    // both parts share an absolute tolerance set by the size of the
    // complex integrand, so a part that nearly cancels does not stall
    let size = [0.01, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0]
        .iter()
        .map(|&t| integrand(t).norm())
        .fold(0.0f64, f64::max)
        * (1.0 + a);
    let cfg = QuadConfig {
        abs_tol: (1e-13 * size).max(1e-300),
        rel_tol: 1e-13,
        max_panels: 4000,
        tail_exponent_hint: None,
        first_width: 1.0,
        ..QuadConfig::default()
    };
    let re = try_integrate_half_line(|t| Ok(integrand(t).re), &cfg)?;
    let im = try_integrate_half_line(|t| Ok(integrand(t).im), &cfg)?;
    let rot = (Complex64::new(0.0, -sigma).ln() * p).exp();
    let scale = rot / gamma_complex(p)? * (-p * period.ln()).exp();
    Ok(scale * Complex64::new(re.value, im.value))
}

/// Twisted kernels for an off-lattice shift with period phase `w`, for the
/// upper and lower numerators. Half-line form unless `full_line`.
pub(crate) fn twisted_kernel(v: f64, s: f64, p: Complex64, period: f64, w: Complex64, full_line: bool) -> Result<Complex64> {
    let c = Complex64::new(s, v);
    let mut k = twisted_sum(c, p, period, 1.0, w)?;
    if full_line {
        k += pow_neg(c, p) + twisted_sum(c, p, period, -1.0, w.conj())?;
    } else if v >= 0.0 {
        k += pow_neg(c, p);
    }
    Ok(k)
}
