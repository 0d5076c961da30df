use rand_distr::{Distribution, InverseGaussian, StandardNormal};
use rayon::prelude::*;

use super::bessel::bessel_k1_scaled;
use super::{path_rng, Samples};
use crate::error::{Error, Result};
use crate::mgf::NigParams;
use crate::quadrature::{try_integrate_half_line, QuadConfig};

/// NIG density matching `M(z) = exp(loc z + scale (gamma - sqrt(tail^2 - (asym - z)^2)))`:
/// `tail scale K1(tail q) / (pi q) * exp(scale gamma - asym (x - loc))`,
/// `q = sqrt(scale^2 + (x - loc)^2)`.
pub fn nig_density(p: &NigParams, x: f64) -> Result<f64> {
    p.validate()?;
    let u = x - p.loc;
    let q = p.scale.hypot(u);
    let arg = p.tail * q;
    let k1s = bessel_k1_scaled(arg)?;
    let expo = p.scale * p.gamma() - p.asym * u - arg;
    Ok(p.tail * p.scale / (std::f64::consts::PI * q) * k1s * expo.exp())
}

/// `E|X - xi|^r` by integrating `|x - xi|^r f(x)` on both sides of `xi`.
pub fn density_moment(p: &NigParams, r: f64, xi: f64, quad: &QuadConfig) -> Result<f64> {
    p.validate()?;
    if !(r > -1.0) {
        return Err(Error::domain(format!("Re(r) > -1 required, got r = {r}")));
    }
    let mut cfg = *quad;
    cfg.tail_exponent_hint = None;
    cfg.first_width = (p.scale / p.gamma()).sqrt().max(1e-3);
    let power = |u: f64| if u == 0.0 { if r == 0.0 { 1.0 } else { 0.0 } } else { u.powf(r) };
    let above = try_integrate_half_line(|u| Ok(power(u) * nig_density(p, xi + u)?), &cfg)?;
    let below = try_integrate_half_line(|u| Ok(power(u) * nig_density(p, xi - u)?), &cfg)?;
    Ok(above.value + below.value)
}

/// Draws by normal variance-mean mixing: `V ~ IG(scale / gamma, scale^2)`,
/// `X = loc - asym V + sqrt(V) Z`.
pub fn sample_nig(p: &NigParams, n: usize, seed: u64) -> Result<Samples> {
    p.validate()?;
    let mixing = InverseGaussian::new(p.scale / p.gamma(), p.scale * p.scale)
        .map_err(|e| Error::parameter(format!("inverse Gaussian mixing law: {e}")))?;
    let values = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(seed, i as u64);
            let v: f64 = mixing.sample(&mut rng);
            let z: f64 = StandardNormal.sample(&mut rng);
            p.loc - p.asym * v + v.sqrt() * z
        })
        .collect();
    Ok(Samples { values, seed })
}
