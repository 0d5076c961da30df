//! Independent checks: Monte-Carlo simulators, a density-integration baseline
//! for NIG and brute-force two-step conditional expectations.

mod bessel;
mod brute;
mod nig;
mod simulate;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use bessel::{bessel_k1, bessel_k1_scaled};
pub use brute::{gauss_hermite, two_step_arp, two_step_harg, two_step_hng, GaussHermite};
pub use nig::{density_moment, nig_density, sample_nig};
pub use simulate::{
    simulate_arg_horizons, simulate_arp, simulate_arp_horizons, simulate_harg, simulate_harg_horizons, simulate_hng,
    simulate_hng_horizons,
};

use crate::error::{Error, Result};
use crate::moments::MomentKind;

/// Generator for path `index` of a run: the seed fixes the key and the path
/// index selects the stream, so results do not depend on scheduling.
pub fn path_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Simulated draws and the seed that produced them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Samples {
    pub values: Vec<f64>,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McResult {
    pub estimate: f64,
    pub std_err: f64,
    pub n: usize,
    pub seed: u64,
}

impl McResult {
    /// `|value - estimate| / std_err` (infinite when the error is zero and
    /// the values differ).
    pub fn z_score(&self, value: f64) -> f64 {
        let d = (value - self.estimate).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.std_err
        }
    }
}

/// Sample analogue of the moment `kind` of order `r` about `xi`.
pub fn mc_moment(samples: &Samples, r: f64, xi: f64, kind: MomentKind) -> Result<McResult> {
    let n = samples.values.len();
    if n < 2 {
        return Err(Error::domain("at least two samples required"));
    }
    let integral = r >= 1.0 && r == r.round();
    if !matches!(kind, MomentKind::Absolute | MomentKind::NonNegative) && !integral {
        return Err(Error::domain(format!("positive integer order required, got r = {r}")));
    }
    let k = r as i32;
    let mut values = Vec::with_capacity(n);
    for &x in &samples.values {
        let u = x - xi;
        let v = match kind {
            MomentKind::Absolute => u.abs().powf(r),
            MomentKind::NonNegative => {
                if u < 0.0 || (u == 0.0 && r < 0.0) {
                    return Err(Error::domain(format!(
                        "non-negative moment of order {r} needs samples above xi = {xi}, got {x}"
                    )));
                }
                u.powf(r)
            }
            MomentKind::Integer => u.powi(k),
            MomentKind::TailAbove => {
                if u > 0.0 {
                    u.powi(k)
                } else {
                    0.0
                }
            }
            MomentKind::TailBelow => {
                if u < 0.0 {
                    u.powi(k)
                } else {
                    0.0
                }
            }
        };
        values.push(v);
    }
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (nf - 1.0);
    Ok(McResult {
        estimate: mean,
        std_err: (var / nf).sqrt(),
        n,
        seed: samples.seed,
    })
}

/// `-log10(sigma / sqrt(n))`: decimal places a Monte-Carlo mean of `n` draws
/// with per-draw standard deviation `sigma` gets right.
pub fn accurate_digits(sigma: f64, n: usize) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::domain(format!("sigma must be positive, got {sigma}")));
    }
    if n == 0 {
        return Err(Error::domain("n >= 1 required"));
    }
    Ok(-(sigma / (n as f64).sqrt()).log10())
}
