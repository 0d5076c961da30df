use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_horizon, non_negative, positive, Probe, PROBE_MARGIN};
use crate::error::{Error, Result};
use crate::mgf::{checked_exp, Lattice, MgfModel, Strip};

/// Autoregressive Poisson: `Y_t ~ Poisson(lambda_t)`,
/// `lambda_{t+1} = omega + beta lambda_t + alpha Y_t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArpParams {
    pub omega: f64,
    pub beta: f64,
    pub alpha: f64,
}

impl ArpParams {
    pub fn validate(&self) -> Result<()> {
        positive("omega", self.omega)?;
        non_negative("beta", self.beta)?;
        non_negative("alpha", self.alpha)
    }

    pub fn persistence(&self) -> f64 {
        self.beta + self.alpha
    }

    /// `omega / (1 - beta - alpha)` when stationary.
    pub fn stationary_mean(&self) -> Option<f64> {
        let p = self.persistence();
        (p < 1.0).then(|| self.omega / (1.0 - p))
    }

    pub fn warnings(&self) -> Vec<String> {
        let p = self.persistence();
        if p >= 1.0 {
            vec![format!("intensity persistence {p} >= 1: no stationary mean")]
        } else {
            Vec::new()
        }
    }
}

/// `lambda_{T+1}` and the horizon `H`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArpState {
    pub lambda_next: f64,
    pub horizon: usize,
}

/// MGF of the average count `(Y_{T+1} + ... + Y_{T+H}) / H`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArpModel {
    pub params: ArpParams,
    pub state: ArpState,
    probe: Probe,
    zero_mass: f64,
}

const EXP_CEILING: f64 = 700.0;

fn real_path_valid(p: &ArpParams, st: &ArpState, s: f64) -> bool {
    let step = s / st.horizon as f64;
    let mut a = 0.0;
    let mut b = step.exp_m1();
    for _ in 1..st.horizon {
        let inner = step + p.alpha * b;
        if !(inner.is_finite() && inner <= EXP_CEILING) {
            return false;
        }
        a += p.omega * b;
        b = p.beta * b + inner.exp_m1();
    }
    let expo = a + b * st.lambda_next;
    expo.is_finite() && expo <= EXP_CEILING
}

/// Validity strip. The negative half line is always valid (`M` is bounded by 1
/// there); the positive side is bisected on `(0, 2]` for a finite exponent.
pub fn arp_probe(p: &ArpParams, st: &ArpState) -> Result<Probe> {
    p.validate()?;
    check_horizon(st.horizon)?;
    positive("lambda_next", st.lambda_next)?;
    let cap = 2.0;
    let s_plus = if real_path_valid(p, st, cap) {
        cap
    } else {
        let (mut lo, mut hi) = (0.0, cap);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if real_path_valid(p, st, mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    if s_plus < 1e-8 {
        return Err(Error::DegenerateStrip(format!(
            "ARP recursion: no feasible abscissa beyond 1e-8 (found {s_plus:e})"
        )));
    }
    Ok(Probe {
        strip: Strip {
            s_min: f64::NEG_INFINITY,
            s_max: PROBE_MARGIN * s_plus,
        },
        s_plus,
        s_minus: f64::NEG_INFINITY,
    })
}

pub fn arp_mgf(params: &ArpParams, state: ArpState) -> Result<ArpModel> {
    let probe = arp_probe(params, &state)?;
    // Pr(Ybar = 0) is the z -> -inf limit: B(1) = -1, B' = beta B - 1.
    let mut a = 0.0;
    let mut b = -1.0;
    for _ in 1..state.horizon {
        a += params.omega * b;
        b = params.beta * b - 1.0;
    }
    let zero_mass = (a + b * state.lambda_next).exp();
    Ok(ArpModel {
        params: *params,
        state,
        probe,
        zero_mass,
    })
}

impl ArpModel {
    pub fn probe(&self) -> Probe {
        self.probe
    }

    /// Whether the real recursion at abscissa `s` stays valid up to `H`.
    pub fn real_abscissa_valid(&self, s: f64) -> bool {
        real_path_valid(&self.params, &self.state, s)
    }

    /// `(A(H, z), B(H, z))`.
    pub fn coefficients(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let step = z / self.state.horizon as f64;
        let p = &self.params;
        let mut a = Complex64::new(0.0, 0.0);
        let mut b = crate::mgf::special::expm1_complex(step);
        for h in 1..self.state.horizon {
            let inner = step + p.alpha * b;
            if !(inner.re.is_finite() && inner.re <= EXP_CEILING) {
                return Err(Error::domain(format!(
                    "ARP recursion overflows at horizon h = {h} for z = {z}; use a smaller s"
                )));
            }
            a += p.omega * b;
            b = p.beta * b + crate::mgf::special::expm1_complex(inner);
        }
        Ok((a, b))
    }

    pub fn zero_mass(&self) -> f64 {
        self.zero_mass
    }
}

impl MgfModel for ArpModel {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.probe.strip.check(z)?;
        let (a, b) = self.coefficients(z)?;
        checked_exp(a + b * self.state.lambda_next, "ARP MGF")
    }

    fn strip(&self) -> Strip {
        self.probe.strip
    }

    fn descriptor(&self) -> String {
        format!(
            "arp(omega={}, beta={}, alpha={}; lambda_next={}, H={})",
            self.params.omega, self.params.beta, self.params.alpha, self.state.lambda_next, self.state.horizon
        )
    }

    fn point_mass(&self, x: f64) -> Option<f64> {
        if x == 0.0 {
            Some(self.zero_mass)
        } else if x < 0.0 || !self.lattice().is_some_and(|l| l.contains(x)) {
            Some(0.0)
        } else {
            None
        }
    }

    fn lattice(&self) -> Option<Lattice> {
        Some(Lattice {
            offset: 0.0,
            span: 1.0 / self.state.horizon as f64,
        })
    }

    fn support_min(&self) -> f64 {
        0.0
    }
}
