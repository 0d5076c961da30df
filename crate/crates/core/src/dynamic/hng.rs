use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_horizon, non_negative, positive, probe_strip, Probe};
use crate::error::{Error, Result};
use crate::mgf::{checked_exp, MgfModel, Strip};

/// Heston-Nandi GARCH parameters in daily units:
/// `r = r_f + (lambda - 1/2) h + sqrt(h) z`,
/// `h' = omega + beta h + alpha (z - gamma sqrt(h))^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HngParams {
    pub omega: f64,
    pub beta: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub lambda_rp: f64,
    pub r_f: f64,
}

impl HngParams {
    pub fn validate(&self) -> Result<()> {
        non_negative("omega", self.omega)?;
        non_negative("beta", self.beta)?;
        non_negative("alpha", self.alpha)?;
        for (name, v) in [("gamma", self.gamma), ("lambda_rp", self.lambda_rp), ("r_f", self.r_f)] {
            if !v.is_finite() {
                return Err(Error::parameter(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(())
    }

    /// `beta + alpha gamma^2`.
    pub fn persistence(&self) -> f64 {
        self.beta + self.alpha * self.gamma * self.gamma
    }

    /// `(omega + alpha) / (1 - persistence)` when stationary.
    pub fn unconditional_variance(&self) -> Option<f64> {
        let p = self.persistence();
        (p < 1.0).then(|| (self.omega + self.alpha) / (1.0 - p))
    }

    pub fn warnings(&self) -> Vec<String> {
        let p = self.persistence();
        if p >= 1.0 {
            vec![format!("variance persistence {p} >= 1: no stationary variance")]
        } else {
            Vec::new()
        }
    }
}

/// `h_{T+1}` and the horizon `H`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HngState {
    pub h_next: f64,
    pub horizon: usize,
}

/// MGF of the cumulative return over `H` days.
#[derive(Debug, Clone, PartialEq)]
pub struct HngModel {
    pub params: HngParams,
    pub state: HngState,
    probe: Probe,
}

fn real_path_valid(p: &HngParams, st: &HngState, s: f64) -> bool {
    let mut a = s * p.r_f;
    let mut b = s * (p.lambda_rp - 0.5) + 0.5 * s * s;
    for _ in 1..st.horizon {
        let d = 1.0 - 2.0 * p.alpha * b;
        if !(d > 0.0 && b.is_finite()) {
            return false;
        }
        a += s * p.r_f + b * p.omega - 0.5 * d.ln();
        let u = s - 2.0 * p.alpha * p.gamma * b;
        b = s * (p.lambda_rp - 0.5) + b * p.persistence() + u * u / (2.0 * d);
    }
    let d = 1.0 - 2.0 * p.alpha * b;
    let expo = a + b * st.h_next;
    d > 0.0 && expo.is_finite() && expo <= 700.0
}

/// Validity strip for horizon `H`: bisection on `[-2, 2]` for the real
/// recursion staying inside `1 - 2 alpha B(h, s) > 0`, then a 10% margin.
pub fn hng_probe(p: &HngParams, st: &HngState) -> Result<Probe> {
    p.validate()?;
    check_horizon(st.horizon)?;
    probe_strip(|s| real_path_valid(p, st, s), -2.0, 2.0, "HNG recursion")
}

pub fn hng_mgf(params: &HngParams, state: HngState) -> Result<HngModel> {
    params.validate()?;
    positive("h_next", state.h_next)?;
    check_horizon(state.horizon)?;
    let probe = hng_probe(params, &state)?;
    Ok(HngModel {
        params: *params,
        state,
        probe,
    })
}

impl HngModel {
    pub fn probe(&self) -> Probe {
        self.probe
    }

    /// Whether the real recursion at abscissa `s` stays valid up to `H`.
    pub fn real_abscissa_valid(&self, s: f64) -> bool {
        real_path_valid(&self.params, &self.state, s)
    }

    /// `(A(H, z), B(H, z))`.
    pub fn coefficients(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let p = &self.params;
        let pers = p.persistence();
        let mut a = z * p.r_f;
        let mut b = z * (p.lambda_rp - 0.5) + 0.5 * z * z;
        for h in 1..self.state.horizon {
            let d = 1.0 - 2.0 * p.alpha * b;
            if !(d.re > 0.0) {
                return Err(Error::domain(format!(
                    "HNG recursion leaves Re(1 - 2 alpha B) > 0 at horizon h = {h} for z = {z}"
                )));
            }
            a += z * p.r_f + b * p.omega - 0.5 * d.ln();
            let u = z - 2.0 * p.alpha * p.gamma * b;
            b = z * (p.lambda_rp - 0.5) + b * pers + u * u / (2.0 * d);
        }
        Ok((a, b))
    }
}

impl MgfModel for HngModel {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.probe.strip.check(z)?;
        let (a, b) = self.coefficients(z)?;
        checked_exp(a + b * self.state.h_next, "HNG MGF")
    }

    fn strip(&self) -> Strip {
        self.probe.strip
    }

    fn descriptor(&self) -> String {
        let p = &self.params;
        format!(
            "hng(omega={}, beta={}, alpha={}, gamma={}, lambda={}, r_f={}; h_next={}, H={})",
            p.omega, p.beta, p.alpha, p.gamma, p.lambda_rp, p.r_f, self.state.h_next, self.state.horizon
        )
    }
}
