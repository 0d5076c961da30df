use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_horizon, non_negative, positive, probe_strip, Probe};
use crate::error::{Error, Result};
use crate::mgf::{checked_exp, MgfModel, Strip};

/// Number of lags in the daily/weekly/monthly structure.
pub const HAR_LAGS: usize = 22;

/// Heterogeneous autoregressive gamma parameters. `beta_*` are the raw
/// loadings on the lagged averages; `eta * beta_*` are the AR coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HargParams {
    pub beta_d: f64,
    pub beta_w: f64,
    pub beta_m: f64,
    pub eta: f64,
    pub delta: f64,
}

impl HargParams {
    /// From AR coefficients `eta * beta_*`.
    pub fn from_ar_coefficients(phi_d: f64, phi_w: f64, phi_m: f64, eta: f64, delta: f64) -> Result<Self> {
        positive("eta", eta)?;
        let p = Self {
            beta_d: phi_d / eta,
            beta_w: phi_w / eta,
            beta_m: phi_m / eta,
            eta,
            delta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        non_negative("beta_d", self.beta_d)?;
        non_negative("beta_w", self.beta_w)?;
        non_negative("beta_m", self.beta_m)?;
        positive("eta", self.eta)?;
        positive("delta", self.delta)?;
        Ok(())
    }

    /// Raw loadings on each of the 22 lags.
    pub fn lag_betas(&self) -> Vec<f64> {
        (1..=HAR_LAGS)
            .map(|j| match j {
                1 => self.beta_d,
                2..=5 => self.beta_w / 4.0,
                _ => self.beta_m / 17.0,
            })
            .collect()
    }

    /// `eta (beta_d + beta_w + beta_m)`.
    pub fn persistence(&self) -> f64 {
        self.eta * (self.beta_d + self.beta_w + self.beta_m)
    }

    /// `eta delta / (1 - persistence)` when stationary.
    pub fn unconditional_mean(&self) -> Option<f64> {
        let p = self.persistence();
        (p < 1.0).then(|| self.eta * self.delta / (1.0 - p))
    }

    pub fn warnings(&self) -> Vec<String> {
        let p = self.persistence();
        if p >= 1.0 {
            vec![format!("persistence {p} >= 1: no stationary mean")]
        } else {
            Vec::new()
        }
    }

    pub fn law(&self) -> ArgLaw {
        ArgLaw {
            betas: self.lag_betas(),
            eta: self.eta,
            delta: self.delta,
        }
    }
}

/// Autoregressive gamma law with `p` lags: given the past,
/// `X ~ Gamma(delta + K, scale eta)`, `K ~ Poisson(sum_j beta_j X_{-j})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArgLaw {
    pub betas: Vec<f64>,
    pub eta: f64,
    pub delta: f64,
}

impl ArgLaw {
    pub fn validate(&self) -> Result<()> {
        if self.betas.is_empty() {
            return Err(Error::parameter("at least one lag required"));
        }
        for (j, b) in self.betas.iter().enumerate() {
            non_negative(&format!("lag beta {}", j + 1), *b)?;
        }
        positive("eta", self.eta)?;
        positive("delta", self.delta)
    }

    pub fn lags(&self) -> usize {
        self.betas.len()
    }

    /// `phi_j = eta beta_j`.
    pub fn phis(&self) -> Vec<f64> {
        self.betas.iter().map(|b| self.eta * b).collect()
    }

    /// `theta = sum_j beta_j X_{T+1-j}` for lags ordered most recent first.
    pub fn theta(&self, lags: &[f64]) -> f64 {
        self.betas.iter().zip(lags).map(|(b, x)| b * x).sum()
    }
}

/// Lags `X_T, X_{T-1}, ...` (most recent first) and the horizon `H`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HargState {
    pub lags: Vec<f64>,
    pub horizon: usize,
}

impl HargState {
    pub fn flat(level: f64, lags: usize, horizon: usize) -> Self {
        Self {
            lags: vec![level; lags],
            horizon,
        }
    }
}

/// MGF of `X_{T+H}` given the lags.
#[derive(Debug, Clone, PartialEq)]
pub struct HargModel {
    pub law: ArgLaw,
    pub state: HargState,
    phis: Vec<f64>,
    probe: Probe,
}

fn real_path_valid(law: &ArgLaw, phis: &[f64], st: &HargState, s: f64) -> bool {
    let d0 = 1.0 - law.eta * s;
    if !(d0 > 0.0) {
        return false;
    }
    let mut a = -law.delta * d0.ln();
    let mut b: Vec<f64> = phis.iter().map(|ph| s * ph / d0).collect();
    let p = b.len();
    for _ in 1..st.horizon {
        let d = 1.0 - law.eta * b[0];
        if !(d > 0.0 && b[0].is_finite()) {
            return false;
        }
        a -= law.delta * d.ln();
        let lead = b[0] / d;
        for j in 0..p {
            let next = if j + 1 < p { b[j + 1] } else { 0.0 };
            b[j] = lead * phis[j] + next;
        }
    }
    let expo = a + b.iter().zip(&st.lags).map(|(bj, x)| bj * x).sum::<f64>();
    1.0 - law.eta * b[0] > 0.0 && expo.is_finite() && expo <= 700.0
}

/// Validity strip: bisection for `B_1(h, s) < 1/eta` on `(-1/eta, 1/eta)`,
/// then a 10% margin.
pub fn harg_probe(law: &ArgLaw, st: &HargState) -> Result<Probe> {
    law.validate()?;
    check_horizon(st.horizon)?;
    let phis = law.phis();
    let cap = 1.0 / law.eta;
    probe_strip(|s| real_path_valid(law, &phis, st, s), -cap, cap, "HARG recursion")
}

/// HARG(22) model from the daily/weekly/monthly parameters.
pub fn harg_mgf(params: &HargParams, state: HargState) -> Result<HargModel> {
    params.validate()?;
    HargModel::new(params.law(), state)
}

impl HargModel {
    /// General `p`-lag autoregressive gamma.
    pub fn new(law: ArgLaw, state: HargState) -> Result<Self> {
        law.validate()?;
        check_horizon(state.horizon)?;
        if state.lags.len() != law.lags() {
            return Err(Error::parameter(format!(
                "{} lags required, got {}",
                law.lags(),
                state.lags.len()
            )));
        }
        for x in &state.lags {
            non_negative("lagged value", *x)?;
        }
        let probe = harg_probe(&law, &state)?;
        Ok(Self {
            phis: law.phis(),
            law,
            state,
            probe,
        })
    }

    pub fn probe(&self) -> Probe {
        self.probe
    }

    /// Whether the real recursion at abscissa `s` stays valid up to `H`.
    pub fn real_abscissa_valid(&self, s: f64) -> bool {
        real_path_valid(&self.law, &self.phis, &self.state, s)
    }

    /// `(A(H, z), B_1..B_p(H, z))`.
    pub fn coefficients(&self, z: Complex64) -> Result<(Complex64, Vec<Complex64>)> {
        let eta = self.law.eta;
        let delta = self.law.delta;
        let d0 = 1.0 - eta * z;
        if !(d0.re > 0.0) {
            return Err(Error::domain(format!("Re(1 - eta z) > 0 required, z = {z}")));
        }
        let mut a = -delta * d0.ln();
        let mut b: Vec<Complex64> = self.phis.iter().map(|ph| z * *ph / d0).collect();
        let p = b.len();
        for h in 1..self.state.horizon {
            let d = 1.0 - eta * b[0];
            if !(d.re > 0.0) {
                return Err(Error::domain(format!(
                    "HARG recursion leaves Re(1 - eta B_1) > 0 at horizon h = {h} for z = {z}"
                )));
            }
            a -= delta * d.ln();
            let lead = b[0] / d;
            for j in 0..p {
                let next = if j + 1 < p { b[j + 1] } else { Complex64::new(0.0, 0.0) };
                b[j] = lead * self.phis[j] + next;
            }
        }
        Ok((a, b))
    }
}

impl MgfModel for HargModel {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.probe.strip.check(z)?;
        let (a, b) = self.coefficients(z)?;
        let expo = a + b.iter().zip(&self.state.lags).map(|(bj, x)| bj * x).sum::<Complex64>();
        checked_exp(expo, "HARG MGF")
    }

    fn strip(&self) -> Strip {
        self.probe.strip
    }

    fn descriptor(&self) -> String {
        format!(
            "harg(p={}, eta={}, delta={}; H={})",
            self.law.lags(),
            self.law.eta,
            self.law.delta,
            self.state.horizon
        )
    }

    fn support_min(&self) -> f64 {
        0.0
    }
}
