use std::time::Instant;

use mgfm_core::bench::{bench_nig, method_median, BenchMethod, BenchSettings};
use mgfm_core::dynamic::term_structure;
use mgfm_core::moments::{expected_shortfall, moment, summary_from_raw, MomentSpec};
use mgfm_core::quadrature::QuadConfig;
use mgfm_core::validation::{
    builtin_models, kind_name, mc_agreement, reciprocal_gamma_suite, reference_grids, s_invariance, share_within,
    theorem_agreement, vanishing_suite, Check, NamedModel,
};

use crate::config::{fixture_model, ModelSpec, RunConfig};
use crate::error::CliError;
use crate::output::{Cell, Report};

/// Settings resolved from the config file and command-line flags.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub quad: QuadConfig,
    pub s: Option<f64>,
    pub seed: u64,
    pub timing: bool,
}

fn model_spec(cfg: &RunConfig) -> Result<&ModelSpec, CliError> {
    cfg.model
        .as_ref()
        .ok_or_else(|| CliError::Usage("config has no [model] table".into()))
}

fn warn(spec: &ModelSpec) {
    for w in spec.warnings() {
        eprintln!("warning: {w}");
    }
}

pub fn moment_table(cfg: &RunConfig, st: &Settings) -> Result<Report, CliError> {
    let spec = model_spec(cfg)?;
    let section = cfg
        .moment
        .as_ref()
        .ok_or_else(|| CliError::Usage("config has no [moment] table".into()))?;
    if section.orders.is_empty() || section.shifts.is_empty() || section.kinds.is_empty() {
        return Err(CliError::Usage("moment.orders, shifts and kinds must be non-empty".into()));
    }
    warn(spec);
    let m = spec.build()?;
    let mut columns = vec!["model", "kind", "r", "xi", "value", "err_estimate", "abscissa", "panels"];
    if st.timing {
        columns.push("time_us");
    }
    let mut report = Report::new("moment", columns);
    let name = m.descriptor();
    for &kind in &section.kinds {
        for &xi in &section.shifts {
            for &r in &section.orders {
                let mut ms = MomentSpec::new(r).shift(xi).quad(st.quad);
                if let Some(s) = st.s {
                    ms = ms.at(s);
                }
                let start = Instant::now();
                let v = moment(m.as_ref(), kind, &ms)?;
                let micros = start.elapsed().as_secs_f64() * 1e6;
                let mut row = vec![
                    Cell::from(name.as_str()),
                    kind_name(kind).into(),
                    r.into(),
                    xi.into(),
                    v.re().into(),
                    v.err_estimate.into(),
                    v.abscissa.into(),
                    v.panels_used.into(),
                ];
                if st.timing {
                    row.push(micros.into());
                }
                report.push(row);
            }
        }
    }
    Ok(report)
}

pub fn term_structure_table(cfg: &RunConfig, st: &Settings) -> Result<Report, CliError> {
    let spec = model_spec(cfg)?;
    let section = cfg
        .term_structure
        .as_ref()
        .ok_or_else(|| CliError::Usage("config has no [term_structure] table".into()))?;
    if section.horizons.is_empty() {
        return Err(CliError::Usage("term_structure.horizons must be non-empty".into()));
    }
    let dynamic = spec.dynamic()?.ok_or_else(|| {
        CliError::Usage(format!("term structures need a dynamic model, got {}", spec.family()))
    })?;
    warn(spec);
    let kind = section.kind.unwrap_or_else(|| dynamic.default_kind());
    if section.summary {
        let ts = term_structure(&dynamic, kind, &[1.0, 2.0, 3.0, 4.0], &section.horizons, &st.quad)?;
        let mut report = Report::new("term-structure", vec!["H", "mean", "stdev", "skew", "kurt", "error"]);
        let mut horizons = section.horizons.clone();
        horizons.sort_unstable();
        horizons.dedup();
        for h in horizons {
            let raw: Result<Vec<f64>, mgfm_core::Error> = (1..=4)
                .map(|k| ts.get(h, k as f64).expect("cell").result.as_ref().map(|v| v.re()).map_err(Clone::clone))
                .collect();
            let summary = raw.and_then(|r| summary_from_raw([r[0], r[1], r[2], r[3]]));
            report.push(match summary {
                Ok(s) => vec![h.into(), s.mean.into(), s.stdev.into(), s.skew.into(), s.kurt.into(), Cell::Empty],
                Err(e) => vec![h.into(), Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, e.to_string().into()],
            });
        }
        return Ok(report);
    }
    if section.orders.is_empty() {
        return Err(CliError::Usage("term_structure.orders must be non-empty unless summary = true".into()));
    }
    let ts = term_structure(&dynamic, kind, &section.orders, &section.horizons, &st.quad)?;
    let mut report = Report::new("term-structure", vec!["H", "r", "value", "err_estimate", "error"]);
    for c in &ts.cells {
        report.push(match &c.result {
            Ok(v) => vec![c.horizon.into(), c.order.into(), v.re().into(), v.err_estimate.into(), Cell::Empty],
            Err(e) => vec![c.horizon.into(), c.order.into(), Cell::Empty, Cell::Empty, e.to_string().into()],
        });
    }
    Ok(report)
}

pub fn risk_table(cfg: &RunConfig, st: &Settings) -> Result<Report, CliError> {
    let spec = model_spec(cfg)?;
    let alphas = cfg.risk.as_ref().map(|r| r.alphas.clone()).unwrap_or_else(|| vec![0.01, 0.05]);
    if alphas.is_empty() {
        return Err(CliError::Usage("risk.alphas must be non-empty".into()));
    }
    warn(spec);
    let m = spec.build()?;
    let mut report = Report::new("risk", vec!["alpha", "quantile", "expected_shortfall"]);
    for alpha in alphas {
        let r = expected_shortfall(m.as_ref(), alpha, &st.quad)?;
        report.push(vec![alpha.into(), r.quantile.into(), r.expected_shortfall.into()]);
    }
    Ok(report)
}

fn check_row(c: &Check) -> Vec<Cell> {
    vec![
        c.suite.clone().into(),
        c.case.clone().into(),
        c.value.into(),
        c.reference.into(),
        c.discrepancy.into(),
        c.tolerance.into(),
        Cell::Bool(c.passed),
        c.error.clone().map_or(Cell::Empty, Cell::Text),
    ]
}

pub fn validate_table(cfg: &RunConfig, st: &Settings) -> Result<Report, CliError> {
    let section = cfg.validate.clone().unwrap_or_default();
    let tol = |default: f64| section.tolerance.unwrap_or(default);
    let mut models = builtin_models()?;
    if let Some(spec) = &cfg.model {
        let m = spec.build()?;
        // shift lattice laws with an atom at zero off it
        let shift = if m.lattice().is_some() && m.point_mass(0.0) != Some(0.0) { -1.0 } else { 0.0 };
        models.push(NamedModel {
            name: format!("config {}", m.descriptor()),
            bounded_below: m.support_min() >= shift,
            model: m,
            shift,
        });
    }
    let mut checks = s_invariance(&models, &st.quad, tol(1e-7));
    checks.extend(theorem_agreement(&models, &st.quad, tol(1e-7)));
    checks.extend(reciprocal_gamma_suite(&st.quad, tol(1e-8)));
    checks.extend(vanishing_suite(&st.quad, tol(1e-9)));
    if section.monte_carlo.unwrap_or(true) {
        let n_seeds = section.mc_seeds.unwrap_or(2);
        let paths = section.mc_paths.unwrap_or(50_000);
        if n_seeds == 0 || paths < 2 {
            return Err(CliError::Usage("validate.mc_seeds >= 1 and mc_paths >= 2 required".into()));
        }
        let seeds: Vec<u64> = (0..n_seeds as u64).map(|i| st.seed.wrapping_add(i)).collect();
        for grid in reference_grids() {
            let family = format!("{:?}", grid.family).to_lowercase();
            let case = format!("{family} grid, {n_seeds} seeds x {paths} paths, share within 4 SE");
            checks.push(match mc_agreement(&grid, &seeds, paths, &st.quad) {
                Ok(cells) => {
                    let share = share_within(&cells, 4.0);
                    Check {
                        suite: "monte-carlo".into(),
                        case,
                        value: share,
                        reference: 0.95,
                        discrepancy: (0.95 - share).max(0.0),
                        tolerance: 0.0,
                        passed: share >= 0.95,
                        error: None,
                    }
                }
                Err(e) => Check {
                    suite: "monte-carlo".into(),
                    case,
                    value: f64::NAN,
                    reference: 0.95,
                    discrepancy: f64::INFINITY,
                    tolerance: 0.0,
                    passed: false,
                    error: Some(e.to_string()),
                },
            });
        }
    }
    let mut report = Report::new(
        "validate",
        vec!["suite", "case", "value", "reference", "discrepancy", "tolerance", "passed", "error"],
    );
    for c in &checks {
        report.push(check_row(c));
    }
    report.passed = Some(checks.iter().all(|c| c.passed));
    Ok(report)
}

pub fn bench_table(cfg: &RunConfig, st: &Settings) -> Result<Report, CliError> {
    let spec = match &cfg.model {
        Some(s) => s.clone(),
        None => fixture_model("nig")?,
    };
    let p = spec
        .nig_params()?
        .ok_or_else(|| CliError::Usage(format!("bench runs on NIG models, got {}", spec.family())))?;
    let section = cfg.bench.clone().unwrap_or_default();
    let defaults = BenchSettings::default();
    let settings = BenchSettings {
        repetitions: section.repetitions.unwrap_or(defaults.repetitions),
        warmup: section.warmup.unwrap_or(defaults.warmup),
        sim_draws: section.sim_draws.unwrap_or(defaults.sim_draws),
        sim_repetitions: section.sim_repetitions.unwrap_or(defaults.sim_repetitions),
        seed: st.seed,
    };
    let orders = section
        .orders
        .unwrap_or_else(|| vec![-0.5, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0]);
    if orders.is_empty() {
        return Err(CliError::Usage("bench.orders must be non-empty".into()));
    }
    let fourth = match spec {
        ModelSpec::NigStandardized { xi, chi } => Some(3.0 * (1.0 + 4.0 * chi * chi) / (1.0 - xi * xi)),
        _ => None,
    };
    let second = p.variance() + p.mean() * p.mean();
    let truth = |r: f64| match r {
        0.0 => Some(1.0),
        2.0 => Some(second),
        4.0 => fourth,
        _ => None,
    };
    let rows = bench_nig(&p, &orders, &st.quad, &settings, truth)?;
    if let (Some(c), Some(d), Some(s)) = (
        method_median(&rows, BenchMethod::Cmgf),
        method_median(&rows, BenchMethod::Density),
        method_median(&rows, BenchMethod::Simulation),
    ) {
        eprintln!(
            "median us: cmgf {c:.1}, density {d:.1} ({:.1}x), simulation {s:.0} ({:.0}x)",
            d / c,
            s / c
        );
    }
    let mut report = Report::new("bench", vec!["method", "r", "median_us", "repetitions", "value", "abs_error"]);
    for r in rows {
        report.push(vec![
            r.method.name().into(),
            r.order.into(),
            r.median_us.into(),
            r.repetitions.into(),
            r.value.into(),
            r.abs_error.into(),
        ]);
    }
    Ok(report)
}
