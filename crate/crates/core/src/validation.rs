//! Invariant suites shared by the test harness and the command line:
//! abscissa invariance, agreement between representations, the reciprocal
//! gamma and vanishing integral identities, and Monte-Carlo agreement of the
//! dynamic models.

use serde::{Deserialize, Serialize};

use crate::dynamic::{fixtures, term_structure, DynamicSpec};
use crate::error::Result;
use crate::mgf::{exponential_mgf, gamma_real, nig_from_standardized, nig_mgf, normal_mgf, poisson_mgf, MgfModel};
use crate::moments::{
    absolute_moment, default_abscissa, integer_moment, nonneg_moment, reciprocal_gamma, two_sided_abscissa,
    vanishing_integral, MomentKind, MomentSpec,
};
use crate::oracle::{mc_moment, simulate_arp_horizons, simulate_harg_horizons, simulate_hng_horizons};
use crate::quadrature::QuadConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub suite: String,
    pub case: String,
    pub value: f64,
    pub reference: f64,
    /// Relative or absolute discrepancy, as the suite defines it.
    pub discrepancy: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Check {
    fn compare(suite: &str, case: String, value: f64, reference: f64, discrepancy: f64, tolerance: f64) -> Self {
        Self {
            suite: suite.into(),
            case,
            value,
            reference,
            discrepancy,
            tolerance,
            passed: discrepancy <= tolerance,
            error: None,
        }
    }

    fn failed(suite: &str, case: String, tolerance: f64, e: &crate::Error) -> Self {
        Self {
            suite: suite.into(),
            case,
            value: f64::NAN,
            reference: f64::NAN,
            discrepancy: f64::INFINITY,
            tolerance,
            passed: false,
            error: Some(e.to_string()),
        }
    }
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// A built-in model with the shift used for its moments. Models with an atom
/// at zero are shifted to `xi = -1` so that negative orders stay defined.
pub struct NamedModel {
    pub name: String,
    pub model: Box<dyn MgfModel>,
    pub shift: f64,
    /// `P(X >= shift) = 1`.
    pub bounded_below: bool,
}

pub fn builtin_models() -> Result<Vec<NamedModel>> {
    let named = |name: &str, model: Box<dyn MgfModel>, shift: f64, bounded_below: bool| NamedModel {
        name: name.into(),
        model,
        shift,
        bounded_below,
    };
    Ok(vec![
        named("normal(0,1)", Box::new(normal_mgf(0.0, 1.0)?), 0.0, false),
        named("normal(0.3,1.7)", Box::new(normal_mgf(0.3, 1.7)?), 0.0, false),
        named("exponential(1)", Box::new(exponential_mgf(1.0)?), 0.0, true),
        named("exponential(2)", Box::new(exponential_mgf(2.0)?), 0.0, true),
        named("poisson(3.2)", Box::new(poisson_mgf(3.2)?), -1.0, true),
        named("nig(1/2,-1/3)", Box::new(nig_mgf(nig_from_standardized(0.5, -1.0 / 3.0)?)?), 0.0, false),
        named("nig(1/8,-1/16)", Box::new(nig_mgf(nig_from_standardized(0.125, -1.0 / 16.0)?)?), 0.0, false),
        named("hng(H=21)", fixture_spec(Family::Hng).build(21)?, 0.0, false),
        named("harg(H=30)", fixture_spec(Family::Harg).build(30)?, 0.0, true),
        named("arp(H=30)", fixture_spec(Family::Arp).build(30)?, -1.0, true),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Hng,
    Harg,
    Arp,
}

/// Fixture parameters with the reference starting state: HNG at the
/// unconditional variance, HARG lags and ARP intensity at a tenth of their
/// unconditional means.
pub fn fixture_spec(family: Family) -> DynamicSpec {
    match family {
        Family::Hng => DynamicSpec::Hng {
            params: fixtures::hng_params(),
            h_next: fixtures::hng_state(1).h_next,
        },
        Family::Harg => DynamicSpec::Harg {
            params: fixtures::harg_params(),
            lags: fixtures::harg_state(1).lags,
        },
        Family::Arp => DynamicSpec::Arp {
            params: fixtures::arp_params(),
            lambda_next: fixtures::arp_state(1).lambda_next,
        },
    }
}

pub const INVARIANCE_ORDERS: [f64; 6] = [-0.5, 0.5, 1.0, 1.5, 2.0, 3.0];
pub const AGREEMENT_ORDERS: [f64; 4] = [0.5, 1.0, 1.5, 2.0];

/// Moments at the default abscissa and at half of it.
pub fn s_invariance(models: &[NamedModel], quad: &QuadConfig, tol: f64) -> Vec<Check> {
    let suite = "s-invariance";
    let mut out = Vec::new();
    for nm in models {
        let m = nm.model.as_ref();
        for r in INVARIANCE_ORDERS {
            let mut variants: Vec<(&str, f64)> = vec![("absolute", two_sided_abscissa(m))];
            if nm.bounded_below {
                variants.push(("non-negative", default_abscissa(m)));
            }
            for (variant, s1) in variants {
                let case = format!("{} {variant} r={r} xi={}", nm.name, nm.shift);
                let eval = |s: f64| {
                    let spec = MomentSpec::new(r).shift(nm.shift).at(s).quad(*quad);
                    if variant == "absolute" {
                        absolute_moment(m, &spec)
                    } else {
                        nonneg_moment(m, &spec)
                    }
                };
                match eval(s1).and_then(|a| Ok((a, eval(0.5 * s1)?))) {
                    Ok((a, b)) => out.push(Check::compare(
                        suite,
                        format!("{case} s={s1},{}", 0.5 * s1),
                        b.re(),
                        a.re(),
                        relative(b.re(), a.re()),
                        tol,
                    )),
                    Err(e) => out.push(Check::failed(suite, case, tol, &e)),
                }
            }
        }
    }
    out
}

/// For variables bounded below by the shift: absolute = non-negative
/// moments, and both equal the integer moment at integral orders. For all
/// models: even integer moments equal absolute moments.
pub fn theorem_agreement(models: &[NamedModel], quad: &QuadConfig, tol: f64) -> Vec<Check> {
    let suite = "theorem-agreement";
    let mut out = Vec::new();
    for nm in models {
        let m = nm.model.as_ref();
        let spec = |r: f64| MomentSpec::new(r).shift(nm.shift).quad(*quad);
        if nm.bounded_below {
            for r in AGREEMENT_ORDERS {
                let case = format!("{} absolute vs non-negative r={r}", nm.name);
                match absolute_moment(m, &spec(r)).and_then(|a| Ok((a, nonneg_moment(m, &spec(r))?))) {
                    Ok((a, b)) => out.push(Check::compare(suite, case, a.re(), b.re(), relative(a.re(), b.re()), tol)),
                    Err(e) => out.push(Check::failed(suite, case, tol, &e)),
                }
                if r.fract() == 0.0 {
                    let case = format!("{} integer vs non-negative k={r}", nm.name);
                    match integer_moment(m, r as u32, nm.shift, quad, None)
                        .and_then(|a| Ok((a, nonneg_moment(m, &spec(r))?)))
                    {
                        Ok((a, b)) => {
                            out.push(Check::compare(suite, case, a.re(), b.re(), relative(a.re(), b.re()), tol))
                        }
                        Err(e) => out.push(Check::failed(suite, case, tol, &e)),
                    }
                }
            }
        }
        for k in [2u32, 4] {
            let case = format!("{} integer vs absolute k={k}", nm.name);
            match integer_moment(m, k, nm.shift, quad, None).and_then(|a| Ok((a, absolute_moment(m, &spec(k as f64))?))) {
                Ok((a, b)) => out.push(Check::compare(suite, case, a.re(), b.re(), relative(a.re(), b.re()), tol)),
                Err(e) => out.push(Check::failed(suite, case, tol, &e)),
            }
        }
    }
    out
}

pub const RECIPROCAL_GAMMA_ORDERS: [f64; 5] = [-0.5, 0.0, 1.0, 2.0, 2.5];

/// Absolute error of the contour representation of `1/Gamma(r/2 + 1)`.
pub fn reciprocal_gamma_suite(quad: &QuadConfig, tol: f64) -> Vec<Check> {
    let suite = "reciprocal-gamma";
    RECIPROCAL_GAMMA_ORDERS
        .iter()
        .map(|&r| {
            let case = format!("r={r}");
            match reciprocal_gamma(r, quad).and_then(|v| Ok((v, 1.0 / gamma_real(0.5 * r + 1.0)?))) {
                Ok((v, want)) => Check::compare(suite, case, v, want, (v - want).abs(), tol),
                Err(e) => Check::failed(suite, case, tol, &e),
            }
        })
        .collect()
}

/// `int_0^inf Re[exp(z x) / z^(r+1)] dt = 0` for `x < 0`, `z = s + it`.
pub fn vanishing_suite(quad: &QuadConfig, tol: f64) -> Vec<Check> {
    let suite = "vanishing-integral";
    let mut out = Vec::new();
    for x in [-0.5, -2.0] {
        for s in [0.5, 1.0] {
            for r in [0.5, 2.0] {
                let case = format!("x={x} s={s} r={r}");
                match vanishing_integral(x, s, r, quad) {
                    Ok(v) => out.push(Check::compare(suite, case, v.value, 0.0, v.value.abs(), tol)),
                    Err(e) => out.push(Check::failed(suite, case, tol, &e)),
                }
            }
        }
    }
    out
}

/// Grid of the Monte-Carlo comparison for one family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McGrid {
    pub family: Family,
    pub orders: Vec<f64>,
    pub horizons: Vec<usize>,
}

pub fn reference_grids() -> Vec<McGrid> {
    vec![
        McGrid {
            family: Family::Hng,
            orders: vec![1.0, 2.0, 3.0, 4.0],
            horizons: vec![21, 63, 126],
        },
        McGrid {
            family: Family::Harg,
            orders: vec![-0.5, 0.5, 1.5, 2.0],
            horizons: vec![1, 30, 90, 180],
        },
        McGrid {
            family: Family::Arp,
            orders: vec![0.5, 1.0, 1.5, 2.0],
            horizons: vec![1, 30, 90, 180],
        },
    ]
}

/// Outcome of one (model, order, horizon, seed) comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McCell {
    pub family: Family,
    pub horizon: usize,
    pub order: f64,
    pub seed: u64,
    pub cmgf: f64,
    pub estimate: f64,
    pub std_err: f64,
    pub z: f64,
}

/// Contour moments of the fixture models against simulation, `seeds.len()`
/// independent runs of `n` paths each. Returns every cell; cells whose
/// contour value could not be computed are returned as errors.
pub fn mc_agreement(grid: &McGrid, seeds: &[u64], n: usize, quad: &QuadConfig) -> Result<Vec<McCell>> {
    let spec = fixture_spec(grid.family);
    let kind = spec.default_kind();
    let ts = term_structure(&spec, kind, &grid.orders, &grid.horizons, quad)?;
    let mut out = Vec::new();
    for &seed in seeds {
        let sims = match &spec {
            DynamicSpec::Hng { params, h_next } => simulate_hng_horizons(params, *h_next, &grid.horizons, n, seed)?,
            DynamicSpec::Harg { params, lags } => simulate_harg_horizons(params, lags, &grid.horizons, n, seed)?,
            DynamicSpec::Arp { params, lambda_next } => simulate_arp_horizons(params, *lambda_next, &grid.horizons, n, seed)?,
        };
        for cell in &ts.cells {
            let cmgf = cell.result.as_ref().map_err(Clone::clone)?.re();
            let i = grid.horizons.iter().position(|h| *h == cell.horizon).expect("horizon in grid");
            let mc = mc_moment(&sims[i], cell.order, 0.0, kind)?;
            out.push(McCell {
                family: grid.family,
                horizon: cell.horizon,
                order: cell.order,
                seed,
                cmgf,
                estimate: mc.estimate,
                std_err: mc.std_err,
                z: mc.z_score(cmgf),
            });
        }
    }
    Ok(out)
}

/// Share of cells within `bound` standard errors.
pub fn share_within(cells: &[McCell], bound: f64) -> f64 {
    if cells.is_empty() {
        return 0.0;
    }
    cells.iter().filter(|c| c.z <= bound).count() as f64 / cells.len() as f64
}

/// Kebab-case name of a moment kind.
pub fn kind_name(kind: MomentKind) -> &'static str {
    match kind {
        MomentKind::Absolute => "absolute",
        MomentKind::NonNegative => "non-negative",
        MomentKind::Integer => "integer",
        MomentKind::TailAbove => "tail-above",
        MomentKind::TailBelow => "tail-below",
    }
}
