//! Two-step conditional MGFs by direct integration or summation over the
//! one-step conditional law, for checking the affine recursions at `H = 2`.

use num_complex::Complex64;

use crate::dynamic::{ArgLaw, ArpParams, HngParams};
use crate::error::{Error, Result};
use crate::mgf::ln_gamma_complex;
use crate::quadrature::{try_integrate_half_line, QuadConfig};

/// Gauss-Hermite rule for the weight `exp(-x^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermite {
    /// `E[g(Z)]` for standard normal `Z`.
    pub fn expect_normal<F>(&self, mut g: F) -> Result<Complex64>
    where
        F: FnMut(f64) -> Result<Complex64>,
    {
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += *w * g(std::f64::consts::SQRT_2 * x)?;
        }
        Ok(acc / std::f64::consts::PI.sqrt())
    }
}

/// `n`-point rule by Newton iteration on the orthonormal Hermite recurrence.
pub fn gauss_hermite(n: usize) -> Result<GaussHermite> {
    if n == 0 {
        return Err(Error::domain("at least one node required"));
    }
    let nf = n as f64;
    let pim4 = std::f64::consts::PI.powf(-0.25);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    let mut z = 0.0f64;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * nodes[0],
            3 => 1.91 * z - 0.91 * nodes[1],
            _ => 2.0 * z - nodes[i - 2],
        };
        let mut dp = 0.0;
        let mut converged = false;
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            dp = (2.0 * nf).sqrt() * p2;
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Root(format!("Gauss-Hermite node {i} of {n} did not converge")));
        }
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        weights[i] = 2.0 / (dp * dp);
        weights[n - 1 - i] = weights[i];
    }
    Ok(GaussHermite { nodes, weights })
}

/// `E_T[exp(z (r_{T+1} + r_{T+2}))]` with the first shock integrated by
/// Gauss-Hermite and the second step in closed form given `h_{T+2}`.
pub fn two_step_hng(p: &HngParams, h_next: f64, z: Complex64) -> Result<Complex64> {
    p.validate()?;
    let rule = gauss_hermite(160)?;
    let sd = h_next.sqrt();
    let second = z * (p.lambda_rp - 0.5) + 0.5 * z * z;
    rule.expect_normal(|e| {
        let r1 = p.r_f + (p.lambda_rp - 0.5) * h_next + sd * e;
        let shock = e - p.gamma * sd;
        let h2 = p.omega + p.beta * h_next + p.alpha * shock * shock;
        Ok((z * (r1 + p.r_f) + second * h2).exp())
    })
}

const TAIL_MASS: f64 = 1e-14;

/// Poisson weights up to the point where the remaining mass is below 1e-14.
fn poisson_weights(mean: f64) -> Vec<f64> {
    if mean <= 0.0 {
        return vec![1.0];
    }
    let mut out = Vec::new();
    let mut ln_pk = -mean;
    let mut cum = 0.0;
    let mut k = 0usize;
    loop {
        let pk = ln_pk.exp();
        out.push(pk);
        cum += pk;
        if (k as f64) > mean && 1.0 - cum < TAIL_MASS {
            return out;
        }
        k += 1;
        ln_pk += mean.ln() - (k as f64).ln();
    }
}

/// `E[exp(u X)]` for `X ~ Gamma(shape, scale)` by integrating the density.
fn gamma_expectation(shape: f64, scale: f64, u: Complex64) -> Result<Complex64> {
    if !(u.re * scale < 1.0) {
        return Err(Error::domain(format!("gamma MGF undefined at {u}")));
    }
    let ln_norm = ln_gamma_complex(Complex64::new(shape, 0.0))?.re + shape * scale.ln();
    let log_integrand = move |x: f64| (shape - 1.0) * x.ln() - x / scale - ln_norm + u * x;
    // Below shape 2 the density is not smooth at 0; x = w^(1 / shape) removes
    // the x^(shape - 1) factor entirely.
    let smooth = shape < 2.0;
    let typical = scale * shape.max(1.0);
    let cfg = QuadConfig {
        first_width: if smooth { typical.powf(shape) } else { typical },
        ..QuadConfig::with_tolerances(1e-14, 1e-12)
    };
    let kernel = |w: f64| -> Complex64 {
        if w == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if smooth {
            let x = w.powf(1.0 / shape);
            (-x / scale - ln_norm + u * x).exp() / shape
        } else {
            log_integrand(w).exp()
        }
    };
    let re = try_integrate_half_line(|x| Ok(kernel(x).re), &cfg)?;
    let im = try_integrate_half_line(|x| Ok(kernel(x).im), &cfg)?;
    Ok(Complex64::new(re.value, im.value))
}

/// `E_T[exp(z X_{T+2})]` for an autoregressive gamma law: the one-step MGF of
/// `X_{T+2}` given `X_{T+1}` averaged over the Poisson-mixed gamma law of
/// `X_{T+1}`, summed term by term.
pub fn two_step_harg(law: &ArgLaw, lags: &[f64], z: Complex64) -> Result<Complex64> {
    law.validate()?;
    if lags.len() != law.lags() {
        return Err(Error::parameter(format!("{} lags required, got {}", law.lags(), lags.len())));
    }
    let one = 1.0 - law.eta * z;
    if !(one.re > 0.0) {
        return Err(Error::domain(format!("Re(1 - eta z) > 0 required, z = {z}")));
    }
    let c = law.eta * z / one;
    // theta_{T+2} = beta_1 X_{T+1} + sum_{j >= 2} beta_j X_{T+2-j}
    let rest: f64 = law.betas.iter().skip(1).zip(lags).map(|(b, x)| b * x).sum();
    let u = c * law.betas[0];
    let mut mixed = Complex64::new(0.0, 0.0);
    for (k, w) in poisson_weights(law.theta(lags)).into_iter().enumerate() {
        mixed += w * gamma_expectation(law.delta + k as f64, law.eta, u)?;
    }
    Ok((c * rest - law.delta * one.ln()).exp() * mixed)
}

/// `E_T[exp(z (Y_{T+1} + Y_{T+2}) / 2)]` by summing over `Y_{T+1}`.
pub fn two_step_arp(p: &ArpParams, lambda_next: f64, z: Complex64) -> Result<Complex64> {
    p.validate()?;
    let half = 0.5 * z;
    let g = half.exp() - 1.0;
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, w) in poisson_weights(lambda_next).into_iter().enumerate() {
        let kf = k as f64;
        let lambda2 = p.omega + p.beta * lambda_next + p.alpha * kf;
        acc += w * (half * kf + lambda2 * g).exp();
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_rule_integrates_normal_moments() {
        let rule = gauss_hermite(40).unwrap();
        let m2 = rule.expect_normal(|x| Ok(Complex64::new(x * x, 0.0))).unwrap();
        let m4 = rule.expect_normal(|x| Ok(Complex64::new(x.powi(4), 0.0))).unwrap();
        let mgf = rule.expect_normal(|x| Ok(Complex64::new(0.3 * x, 0.0).exp())).unwrap();
        assert!((m2.re - 1.0).abs() < 1e-13);
        assert!((m4.re - 3.0).abs() < 1e-12);
        assert!((mgf.re - (0.045f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn gamma_expectation_matches_closed_form() {
        let u = Complex64::new(0.3, 2.0);
        let got = gamma_expectation(2.5, 0.5, u).unwrap();
        let want = (1.0 - 0.5 * u).powf(-2.5);
        assert!((got - want).norm() < 1e-11 * want.norm());
        let got = gamma_expectation(0.7, 1.0, u).unwrap();
        let want = (1.0 - u).powf(-0.7);
        assert!((got - want).norm() < 1e-10 * want.norm());
    }

    #[test]
    fn poisson_weights_sum_to_one() {
        let w = poisson_weights(3.2);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-13);
    }
}
