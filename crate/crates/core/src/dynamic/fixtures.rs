//! Daily parameter sets of the three dynamic models and their reference
//! initial states.

use super::{ArpParams, ArpState, HargParams, HargState, HngParams, HngState, HAR_LAGS};

/// Heston-Nandi GARCH fitted to daily index returns. `omega` is numerically
/// zero; the risk-free rate is set to zero.
pub fn hng_params() -> HngParams {
    HngParams {
        omega: 1.15e-14,
        beta: 0.7593,
        alpha: 5.67e-6,
        gamma: 185.5,
        lambda_rp: 1.9781,
        r_f: 0.0,
    }
}

/// HNG started at the unconditional variance.
pub fn hng_state(horizon: usize) -> HngState {
    let p = hng_params();
    HngState {
        h_next: p.unconditional_variance().expect("fixture is stationary"),
        horizon,
    }
}

/// HARG fitted to daily realized variance. The fitted loadings are quoted as
/// AR coefficients `eta * beta_*`.
pub fn harg_params() -> HargParams {
    HargParams::from_ar_coefficients(0.4896, 0.2789, 0.0357, 0.0053, 0.9644).expect("fixture is valid")
}

/// HARG with every lag at a tenth of the unconditional mean.
pub fn harg_state(horizon: usize) -> HargState {
    let mean = harg_params().unconditional_mean().expect("fixture is stationary");
    HargState::flat(mean / 10.0, HAR_LAGS, horizon)
}

/// Autoregressive Poisson fitted to daily jump counts.
pub fn arp_params() -> ArpParams {
    ArpParams {
        omega: 0.1548,
        beta: 0.7473,
        alpha: 0.2043,
    }
}

/// ARP with the next intensity at a tenth of the stationary mean.
pub fn arp_state(horizon: usize) -> ArpState {
    ArpState {
        lambda_next: arp_params().stationary_mean().expect("fixture is stationary") / 10.0,
        horizon,
    }
}

/// ARP started at the stationary mean.
pub fn arp_stationary_state(horizon: usize) -> ArpState {
    ArpState {
        lambda_next: arp_params().stationary_mean().expect("fixture is stationary"),
        horizon,
    }
}
