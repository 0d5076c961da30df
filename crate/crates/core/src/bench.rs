//! Median wall-clock timings of the contour method against density
//! integration and simulation on the NIG law.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mgf::{nig_mgf, NigParams};
use crate::moments::{absolute_moment, MomentKind, MomentSpec};
use crate::oracle::{density_moment, mc_moment, sample_nig};
use crate::quadrature::QuadConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchMethod {
    Cmgf,
    Density,
    Simulation,
}

impl BenchMethod {
    pub fn name(&self) -> &'static str {
        match self {
            BenchMethod::Cmgf => "cmgf",
            BenchMethod::Density => "density",
            BenchMethod::Simulation => "simulation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchSettings {
    /// Timed repetitions for the two quadrature methods.
    pub repetitions: usize,
    pub warmup: usize,
    /// Draws per simulation estimate.
    pub sim_draws: usize,
    /// Timed repetitions for the simulation method.
    pub sim_repetitions: usize,
    pub seed: u64,
}

impl Default for BenchSettings {
    fn default() -> Self {
        Self {
            repetitions: 100,
            warmup: 10,
            sim_draws: 1_000_000,
            sim_repetitions: 3,
            seed: 1,
        }
    }
}

impl BenchSettings {
    pub fn validate(&self) -> Result<()> {
        if self.repetitions < 1 || self.sim_repetitions < 1 {
            return Err(Error::domain("repetitions must be at least 1"));
        }
        if self.sim_draws < 2 {
            return Err(Error::domain("at least two simulation draws required"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub method: BenchMethod,
    pub order: f64,
    pub median_us: f64,
    pub repetitions: usize,
    pub value: f64,
    /// `|value - truth|` when the true moment is known.
    pub abs_error: Option<f64>,
}

/// Runs `f` `warmup` times untimed, then `reps` times timed, and returns the
/// median duration in microseconds with the last value.
pub fn median_time<F>(reps: usize, warmup: usize, mut f: F) -> Result<(f64, f64)>
where
    F: FnMut() -> Result<f64>,
{
    if reps == 0 {
        return Err(Error::domain("repetitions must be at least 1"));
    }
    let mut value = f64::NAN;
    for _ in 0..warmup {
        value = f()?;
    }
    let mut times = Vec::with_capacity(reps);
    for _ in 0..reps {
        let start = Instant::now();
        value = std::hint::black_box(f()?);
        times.push(start.elapsed().as_secs_f64() * 1e6);
    }
    times.sort_by(f64::total_cmp);
    let mid = reps / 2;
    let median = if reps % 2 == 1 { times[mid] } else { 0.5 * (times[mid - 1] + times[mid]) };
    Ok((median, value))
}

/// Times `E|X|^r` for each order with the three methods. `truth(r)` supplies
/// the exact moment where known.
pub fn bench_nig(
    p: &NigParams,
    orders: &[f64],
    quad: &QuadConfig,
    settings: &BenchSettings,
    truth: impl Fn(f64) -> Option<f64>,
) -> Result<Vec<BenchRow>> {
    settings.validate()?;
    let model = nig_mgf(*p)?;
    let mut rows = Vec::with_capacity(3 * orders.len());
    for &r in orders {
        let exact = truth(r);
        let spec = MomentSpec::new(r).quad(*quad);
        let (t, v) = median_time(settings.repetitions, settings.warmup, || Ok(absolute_moment(&model, &spec)?.re()))?;
        rows.push(row(BenchMethod::Cmgf, r, t, settings.repetitions, v, exact));
        let (t, v) = median_time(settings.repetitions, settings.warmup, || density_moment(p, r, 0.0, quad))?;
        rows.push(row(BenchMethod::Density, r, t, settings.repetitions, v, exact));
        let (t, v) = median_time(settings.sim_repetitions, 0, || {
            let draws = sample_nig(p, settings.sim_draws, settings.seed)?;
            Ok(mc_moment(&draws, r, 0.0, MomentKind::Absolute)?.estimate)
        })?;
        rows.push(row(BenchMethod::Simulation, r, t, settings.sim_repetitions, v, exact));
    }
    Ok(rows)
}

fn row(method: BenchMethod, order: f64, median_us: f64, repetitions: usize, value: f64, truth: Option<f64>) -> BenchRow {
    BenchRow {
        method,
        order,
        median_us,
        repetitions,
        value,
        abs_error: truth.map(|t| (value - t).abs()),
    }
}

/// Median of the per-order medians of one method.
pub fn method_median(rows: &[BenchRow], method: BenchMethod) -> Option<f64> {
    let mut t: Vec<f64> = rows.iter().filter(|r| r.method == method).map(|r| r.median_us).collect();
    if t.is_empty() {
        return None;
    }
    t.sort_by(f64::total_cmp);
    let mid = t.len() / 2;
    Some(if t.len() % 2 == 1 { t[mid] } else { 0.5 * (t[mid - 1] + t[mid]) })
}
