use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{arp_mgf, harg_mgf, hng_mgf, ArpParams, ArpState, HargParams, HargState, HngParams, HngState};
use crate::error::{Error, Result};
use crate::mgf::MgfModel;
use crate::moments::{moment, MomentKind, MomentSpec, MomentValue};
use crate::quadrature::QuadConfig;

/// A dynamic model family with its parameters and time-`T` state; the horizon
/// is supplied per cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum DynamicSpec {
    Hng { params: HngParams, h_next: f64 },
    Harg { params: HargParams, lags: Vec<f64> },
    Arp { params: ArpParams, lambda_next: f64 },
}

impl DynamicSpec {
    pub fn build(&self, horizon: usize) -> Result<Box<dyn MgfModel>> {
        Ok(match self {
            DynamicSpec::Hng { params, h_next } => Box::new(hng_mgf(params, HngState { h_next: *h_next, horizon })?),
            DynamicSpec::Harg { params, lags } => Box::new(harg_mgf(
                params,
                HargState {
                    lags: lags.clone(),
                    horizon,
                },
            )?),
            DynamicSpec::Arp { params, lambda_next } => Box::new(arp_mgf(
                params,
                ArpState {
                    lambda_next: *lambda_next,
                    horizon,
                },
            )?),
        })
    }

    /// Returns are signed (raw integer moments); variance and counts are
    /// non-negative.
    pub fn default_kind(&self) -> MomentKind {
        match self {
            DynamicSpec::Hng { .. } => MomentKind::Integer,
            _ => MomentKind::NonNegative,
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            DynamicSpec::Hng { .. } => "hng",
            DynamicSpec::Harg { .. } => "harg",
            DynamicSpec::Arp { .. } => "arp",
        }
    }

    pub fn warnings(&self) -> Vec<String> {
        match self {
            DynamicSpec::Hng { params, .. } => params.warnings(),
            DynamicSpec::Harg { params, .. } => params.warnings(),
            DynamicSpec::Arp { params, .. } => params.warnings(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TermCell {
    pub horizon: usize,
    pub order: f64,
    pub result: Result<MomentValue>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TermStructure {
    pub kind: MomentKind,
    /// Sorted by horizon, then order.
    pub cells: Vec<TermCell>,
}

impl TermStructure {
    pub fn get(&self, horizon: usize, order: f64) -> Option<&TermCell> {
        self.cells.iter().find(|c| c.horizon == horizon && c.order == order)
    }

    pub fn failures(&self) -> usize {
        self.cells.iter().filter(|c| c.result.is_err()).count()
    }
}

/// Conditional moments `E_T[X_{T+H}^r]` over a grid. One model per horizon is
/// shared by all orders; cells are evaluated in parallel and failures are
/// kept per cell.
pub fn term_structure(
    spec: &DynamicSpec,
    kind: MomentKind,
    orders: &[f64],
    horizons: &[usize],
    quad: &QuadConfig,
) -> Result<TermStructure> {
    if orders.is_empty() || horizons.is_empty() {
        return Err(Error::domain("term structure needs at least one order and one horizon"));
    }
    quad.validate()?;
    let mut orders = orders.to_vec();
    if orders.iter().any(|r| !r.is_finite()) {
        return Err(Error::domain("orders must be finite"));
    }
    orders.sort_by(f64::total_cmp);
    orders.dedup();
    let mut horizons = horizons.to_vec();
    horizons.sort_unstable();
    horizons.dedup();

    let models: Vec<Result<Box<dyn MgfModel>>> = horizons.par_iter().map(|&h| spec.build(h)).collect();
    let grid: Vec<(usize, f64)> = (0..horizons.len())
        .flat_map(|i| orders.iter().map(move |&r| (i, r)))
        .collect();
    let cells = grid
        .par_iter()
        .map(|&(i, r)| {
            let result = match &models[i] {
                Ok(m) => moment(m.as_ref(), kind, &MomentSpec::new(r).quad(*quad)),
                Err(e) => Err(e.clone()),
            };
            TermCell {
                horizon: horizons[i],
                order: r,
                result,
            }
        })
        .collect();
    Ok(TermStructure { kind, cells })
}
