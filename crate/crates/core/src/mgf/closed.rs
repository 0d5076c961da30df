use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{checked_exp, special, Lattice, MgfModel, Strip};
use crate::error::{Error, Result};

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::parameter(format!("{name} must be finite, got {v}")))
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::parameter(format!("{name} must be positive, got {v}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normal {
    pub mu: f64,
    pub sigma: f64,
}

pub fn normal_mgf(mu: f64, sigma: f64) -> Result<Normal> {
    finite("mu", mu)?;
    positive("sigma", sigma)?;
    Ok(Normal { mu, sigma })
}

impl MgfModel for Normal {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.strip().check(z)?;
        checked_exp(self.mu * z + 0.5 * self.sigma * self.sigma * z * z, "normal MGF")
    }

    fn strip(&self) -> Strip {
        Strip::whole_line()
    }

    fn descriptor(&self) -> String {
        format!("normal(mu={}, sigma={})", self.mu, self.sigma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponential {
    pub lambda: f64,
}

pub fn exponential_mgf(lambda: f64) -> Result<Exponential> {
    positive("lambda", lambda)?;
    Ok(Exponential { lambda })
}

impl MgfModel for Exponential {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.strip().check(z)?;
        Ok(self.lambda / (self.lambda - z))
    }

    fn strip(&self) -> Strip {
        Strip {
            s_min: f64::NEG_INFINITY,
            s_max: self.lambda,
        }
    }

    fn descriptor(&self) -> String {
        format!("exponential(lambda={})", self.lambda)
    }

    fn support_min(&self) -> f64 {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Poisson {
    pub lambda: f64,
}

pub fn poisson_mgf(lambda: f64) -> Result<Poisson> {
    positive("lambda", lambda)?;
    Ok(Poisson { lambda })
}

impl MgfModel for Poisson {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.strip().check(z)?;
        checked_exp(self.lambda * (z.exp() - 1.0), "Poisson MGF")
    }

    fn strip(&self) -> Strip {
        Strip::whole_line()
    }

    fn descriptor(&self) -> String {
        format!("poisson(lambda={})", self.lambda)
    }

    fn point_mass(&self, x: f64) -> Option<f64> {
        if x < 0.0 || x != x.round() {
            return Some(0.0);
        }
        let lg = special::ln_gamma_complex(Complex64::new(x + 1.0, 0.0)).ok()?.re;
        Some((x * self.lambda.ln() - self.lambda - lg).exp())
    }

    fn lattice(&self) -> Option<Lattice> {
        Some(Lattice {
            offset: 0.0,
            span: 1.0,
        })
    }

    fn support_min(&self) -> f64 {
        0.0
    }
}

/// Normal-inverse-Gaussian parameters: location, scale, tail heaviness and
/// asymmetry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NigParams {
    pub loc: f64,
    pub scale: f64,
    pub tail: f64,
    pub asym: f64,
}

impl NigParams {
    pub fn new(loc: f64, scale: f64, tail: f64, asym: f64) -> Result<Self> {
        let p = Self {
            loc,
            scale,
            tail,
            asym,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        finite("loc", self.loc)?;
        positive("scale", self.scale)?;
        positive("tail", self.tail)?;
        finite("asym", self.asym)?;
        if self.asym.abs() >= self.tail {
            return Err(Error::parameter(format!(
                "NIG requires |asym| < tail, got asym={} tail={}",
                self.asym, self.tail
            )));
        }
        Ok(())
    }

    /// `sqrt(alpha^2 - beta^2)`.
    pub fn gamma(&self) -> f64 {
        ((self.tail - self.asym) * (self.tail + self.asym)).sqrt()
    }

    /// Mean under `M(z) = exp(loc z + scale (gamma - sqrt(tail^2 - (asym - z)^2)))`.
    pub fn mean(&self) -> f64 {
        self.loc - self.scale * self.asym / self.gamma()
    }

    pub fn variance(&self) -> f64 {
        self.scale * self.tail * self.tail / self.gamma().powi(3)
    }
}

/// Parameters of the zero-mean, unit-variance NIG with steepness `xi` and
/// asymmetry `chi`, `0 <= |chi| < xi < 1`.
pub fn nig_from_standardized(xi: f64, chi: f64) -> Result<NigParams> {
    if !(xi.is_finite() && chi.is_finite() && chi.abs() < xi && xi < 1.0) {
        return Err(Error::parameter(format!(
            "standardized NIG requires 0 <= |chi| < xi < 1, got xi={xi} chi={chi}"
        )));
    }
    let d = xi * xi - chi * chi;
    let zeta = (1.0 - xi * xi).sqrt() / d;
    NigParams::new(
        chi * zeta * d / (xi * xi),
        zeta * d.powf(1.5) / (xi * xi),
        xi * zeta,
        chi * zeta,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nig {
    pub params: NigParams,
    gamma: f64,
}

pub fn nig_mgf(params: NigParams) -> Result<Nig> {
    params.validate()?;
    Ok(Nig {
        params,
        gamma: params.gamma(),
    })
}

impl MgfModel for Nig {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.strip().check(z)?;
        let p = &self.params;
        let w = p.asym - z;
        let root = (p.tail * p.tail - w * w).sqrt();
        // gamma - root rewritten without cancellation near z = 0
        let diff = -z * (2.0 * p.asym - z) / (self.gamma + root);
        checked_exp(p.loc * z + p.scale * diff, "NIG MGF")
    }

    fn strip(&self) -> Strip {
        Strip {
            s_min: self.params.asym - self.params.tail,
            s_max: self.params.asym + self.params.tail,
        }
    }

    fn descriptor(&self) -> String {
        let p = &self.params;
        format!(
            "nig(loc={}, scale={}, tail={}, asym={})",
            p.loc, p.scale, p.tail, p.asym
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn normal_examples() {
        let m = normal_mgf(0.0, 1.0).unwrap();
        assert_eq!(m.eval(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert_relative_eq!(m.eval(c(1.0, 0.0)).unwrap().re, 1.648_721_270_7, epsilon = 1e-10);
        let ci = m.eval(c(0.0, 1.0)).unwrap();
        assert_relative_eq!(ci.re, 0.606_530_659_7, epsilon = 1e-10);
        assert!(ci.im.abs() < 1e-16);
        assert!(normal_mgf(0.0, 0.0).is_err());
        assert!(normal_mgf(0.0, -1.0).is_err());
    }

    #[test]
    fn exponential_examples() {
        let m = exponential_mgf(1.0).unwrap();
        assert_eq!(m.eval(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(m.eval(c(0.5, 0.0)).unwrap(), c(2.0, 0.0));
        let m2 = exponential_mgf(2.0).unwrap();
        assert_eq!(m2.eval(c(1.0, 0.0)).unwrap(), c(2.0, 0.0));
        assert!(matches!(m.eval(c(1.0, 0.0)), Err(Error::Domain(_))));
        assert!(m.eval(c(1.2, 3.0)).is_err());
        assert!(exponential_mgf(0.0).is_err());
    }

    #[test]
    fn poisson_examples() {
        let m = poisson_mgf(3.2).unwrap();
        assert_eq!(m.eval(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        let m1 = poisson_mgf(1.0).unwrap();
        assert_relative_eq!(
            m1.eval(c(2f64.ln(), 0.0)).unwrap().re,
            std::f64::consts::E,
            max_relative = 1e-15
        );
        assert_relative_eq!(m.point_mass(0.0).unwrap(), (-3.2f64).exp(), max_relative = 1e-14);
        assert_relative_eq!(
            m.point_mass(2.0).unwrap(),
            (-3.2f64).exp() * 3.2 * 3.2 / 2.0,
            max_relative = 1e-13
        );
        assert_eq!(m.point_mass(0.5), Some(0.0));
        assert_eq!(m.point_mass(-1.0), Some(0.0));
        assert!(!m.is_continuous());
    }

    #[test]
    fn standardized_nig_parameters() {
        let p = nig_from_standardized(0.5, -1.0 / 3.0).unwrap();
        assert_relative_eq!(p.loc, -1.154_700_538_4, epsilon = 1e-9);
        assert_relative_eq!(p.scale, 1.290_994_448_7, epsilon = 1e-9);
        assert_relative_eq!(p.tail, 3.117_691_453_6, epsilon = 1e-9);
        assert_relative_eq!(p.asym, -2.078_460_969_1, epsilon = 1e-9);
        assert!(p.mean().abs() < 1e-14);
        assert_relative_eq!(p.variance(), 1.0, max_relative = 1e-14);
        let m = nig_mgf(p).unwrap();
        assert_relative_eq!(m.strip().s_max, 1.039_230_484_5, epsilon = 1e-9);
        assert!(nig_from_standardized(0.5, 0.5).is_err());
        assert!(nig_from_standardized(1.0, 0.0).is_err());
        assert!(nig_from_standardized(0.0, 0.0).is_err());
    }

    #[test]
    fn standardized_nig_mean_and_variance_by_differences() {
        // independent check: central differences of M on the real axis
        for (xi, chi) in [(0.5, -1.0 / 3.0), (0.125, -0.0625), (0.5, 0.0)] {
            let m = nig_mgf(nig_from_standardized(xi, chi).unwrap()).unwrap();
            let h = 1e-5;
            let f = |s: f64| m.eval(c(s, 0.0)).unwrap().re;
            let d1 = (f(h) - f(-h)) / (2.0 * h);
            let d2 = (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
            assert!(d1.abs() < 1e-6, "mean {d1}");
            assert!((d2 - 1.0).abs() < 1e-5, "second moment {d2}");
        }
    }

    #[test]
    fn nig_at_zero_is_one() {
        let m = nig_mgf(NigParams::new(0.3, 0.7, 2.0, 0.5).unwrap()).unwrap();
        assert_eq!(m.eval(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert!(m.eval(c(2.5, 0.0)).is_err());
        assert!(m.eval(c(-1.5, 0.0)).is_err());
        assert!(NigParams::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(NigParams::new(0.0, -1.0, 2.0, 1.0).is_err());
    }
}
