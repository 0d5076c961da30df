use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson, StandardNormal};
use rayon::prelude::*;

use super::{path_rng, Samples};
use crate::dynamic::{ArgLaw, ArpParams, HargParams, HngParams};
use crate::error::{Error, Result};

/// Simulates `n` paths out to the largest horizon and returns one sample set
/// per requested horizon (in the order given). `step(rng, t)` advances a path
/// by one period and returns the quantity observed at `t`.
fn run_paths<S, I, F>(n: usize, seed: u64, horizons: &[usize], init: I, step: F) -> Result<Vec<Samples>>
where
    I: Fn() -> S + Sync,
    F: Fn(&mut S, &mut rand_chacha::ChaCha8Rng, usize) -> f64 + Sync,
{
    if horizons.contains(&0) {
        return Err(Error::parameter("horizon must be at least 1"));
    }
    let h_max = horizons.iter().copied().max().unwrap_or(0);
    let k = horizons.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(seed, i as u64);
            let mut state = init();
            let mut row = vec![0.0; k];
            for t in 1..=h_max {
                let obs = step(&mut state, &mut rng, t);
                for (slot, &h) in row.iter_mut().zip(horizons) {
                    if h == t {
                        *slot = obs;
                    }
                }
            }
            row
        })
        .collect();
    Ok((0..k)
        .map(|j| Samples {
            values: rows.iter().map(|row| row[j]).collect(),
            seed,
        })
        .collect())
}

fn poisson<R: Rng>(rng: &mut R, mean: f64) -> f64 {
    if mean <= 0.0 {
        0.0
    } else {
        Poisson::new(mean).expect("finite positive intensity").sample(rng)
    }
}

/// Cumulative returns `R_{T,H} = r_{T+1} + ... + r_{T+H}` at each horizon.
pub fn simulate_hng_horizons(p: &HngParams, h_next: f64, horizons: &[usize], n: usize, seed: u64) -> Result<Vec<Samples>> {
    p.validate()?;
    if !(h_next > 0.0) {
        return Err(Error::parameter(format!("h_next must be positive, got {h_next}")));
    }
    run_paths(
        n,
        seed,
        horizons,
        || (h_next, 0.0),
        |(h, cum), rng, _| {
            let z: f64 = StandardNormal.sample(rng);
            let sd = h.sqrt();
            *cum += p.r_f + (p.lambda_rp - 0.5) * *h + sd * z;
            let shock = z - p.gamma * sd;
            *h = p.omega + p.beta * *h + p.alpha * shock * shock;
            *cum
        },
    )
}

pub fn simulate_hng(p: &HngParams, h_next: f64, horizon: usize, n: usize, seed: u64) -> Result<Samples> {
    Ok(simulate_hng_horizons(p, h_next, &[horizon], n, seed)?.remove(0))
}

/// `X_{T+H}` of an autoregressive gamma process: given the past,
/// `K ~ Poisson(theta)` then `X ~ Gamma(delta + K, eta)`.
pub fn simulate_arg_horizons(law: &ArgLaw, lags: &[f64], horizons: &[usize], n: usize, seed: u64) -> Result<Vec<Samples>> {
    law.validate()?;
    if lags.len() != law.lags() {
        return Err(Error::parameter(format!("{} lags required, got {}", law.lags(), lags.len())));
    }
    run_paths(
        n,
        seed,
        horizons,
        || lags.to_vec(),
        |buf, rng, _| {
            let k = poisson(rng, law.theta(buf));
            let x = Gamma::new(law.delta + k, law.eta).expect("positive shape and scale").sample(rng);
            buf.rotate_right(1);
            buf[0] = x;
            x
        },
    )
}

pub fn simulate_harg_horizons(p: &HargParams, lags: &[f64], horizons: &[usize], n: usize, seed: u64) -> Result<Vec<Samples>> {
    p.validate()?;
    simulate_arg_horizons(&p.law(), lags, horizons, n, seed)
}

pub fn simulate_harg(p: &HargParams, lags: &[f64], horizon: usize, n: usize, seed: u64) -> Result<Samples> {
    Ok(simulate_harg_horizons(p, lags, &[horizon], n, seed)?.remove(0))
}

/// Average counts `(Y_{T+1} + ... + Y_{T+H}) / H` at each horizon.
pub fn simulate_arp_horizons(p: &ArpParams, lambda_next: f64, horizons: &[usize], n: usize, seed: u64) -> Result<Vec<Samples>> {
    p.validate()?;
    if !(lambda_next > 0.0) {
        return Err(Error::parameter(format!("lambda_next must be positive, got {lambda_next}")));
    }
    run_paths(
        n,
        seed,
        horizons,
        || (lambda_next, 0.0),
        |(lambda, total), rng, t| {
            let y = poisson(rng, *lambda);
            *total += y;
            *lambda = p.omega + p.beta * *lambda + p.alpha * y;
            *total / t as f64
        },
    )
}

pub fn simulate_arp(p: &ArpParams, lambda_next: f64, horizon: usize, n: usize, seed: u64) -> Result<Samples> {
    Ok(simulate_arp_horizons(p, lambda_next, &[horizon], n, seed)?.remove(0))
}
