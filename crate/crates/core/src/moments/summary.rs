use serde::{Deserialize, Serialize};

use super::integer_moment;
use crate::error::{Error, Result};
use crate::mgf::{BivariateSlices, MgfModel};
use crate::quadrature::QuadConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSummary {
    pub mean: f64,
    pub stdev: f64,
    pub skew: f64,
    /// Non-excess kurtosis.
    pub kurt: f64,
    /// `E[X^k]`, `k = 1..4`.
    pub raw: [f64; 4],
}

/// Mean, standard deviation, skewness and kurtosis from raw moments
/// `E[X], E[X^2], E[X^3], E[X^4]`.
pub fn summary_from_raw(raw: [f64; 4]) -> Result<MomentSummary> {
    let [e1, e2, e3, e4] = raw;
    let mu = e1;
    let var = e2 - mu * mu;
    if !(var > 0.0) || !var.is_finite() {
        return Err(Error::Computation(format!("non-positive variance {var:e} from raw moments")));
    }
    let sd = var.sqrt();
    let skew = (e3 - mu.powi(3)) / sd.powi(3) - 3.0 * mu / sd;
    let kurt = (e4 - mu.powi(4)) / var.powi(2) - 4.0 * (mu / sd) * skew - 6.0 * mu * mu / var;
    Ok(MomentSummary {
        mean: mu,
        stdev: sd,
        skew,
        kurt,
        raw,
    })
}

pub fn moment_summary<M: MgfModel + ?Sized>(m: &M, quad: &QuadConfig) -> Result<MomentSummary> {
    let mut raw = [0.0; 4];
    for (k, slot) in raw.iter_mut().enumerate() {
        *slot = integer_moment(m, k as u32 + 1, 0.0, quad, None)?.re();
    }
    summary_from_raw(raw)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossMoments {
    /// `E[X1 X2]`
    pub x1_x2: f64,
    /// `E[X1 X2^2]`
    pub x1_x2sq: f64,
}

/// `E[X1 X2]` by polarization and `E[X1 X2^2]` from third moments of the sum
/// and difference.
pub fn cross_moments(slices: &BivariateSlices, quad: &QuadConfig) -> Result<CrossMoments> {
    let k = |m: &dyn MgfModel, k: u32| integer_moment(m, k, 0.0, quad, None).map(|v| v.re());
    let sum2 = k(&slices.sum, 2)?;
    let first2 = k(&slices.first, 2)?;
    let second2 = k(&slices.second, 2)?;
    let diff3 = k(&slices.difference, 3)?;
    let sum3 = k(&slices.sum, 3)?;
    let first3 = k(&slices.first, 3)?;
    Ok(CrossMoments {
        x1_x2: 0.5 * (sum2 - first2 - second2),
        x1_x2sq: (diff3 + sum3 - 2.0 * first3) / 6.0,
    })
}
