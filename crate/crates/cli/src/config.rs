use std::path::Path;

use mgfm_core::dynamic::{
    arp_mgf, harg_mgf, hng_mgf, ArpParams, ArpState, DynamicSpec, HargParams, HargState, HngParams, HngState, HAR_LAGS,
};
use mgfm_core::mgf::{exponential_mgf, nig_from_standardized, nig_mgf, normal_mgf, poisson_mgf, MgfModel, NigParams};
use mgfm_core::moments::MomentKind;
use serde::Deserialize;

use crate::error::CliError;

pub const CONFIG_VERSION: u32 = 1;

/// Named model fixtures shipped with the binary.
pub const FIXTURES: [(&str, &str); 6] = [
    ("hng", include_str!("../fixtures/hng.toml")),
    ("harg", include_str!("../fixtures/harg.toml")),
    ("arp", include_str!("../fixtures/arp.toml")),
    ("arp-stationary", include_str!("../fixtures/arp-stationary.toml")),
    ("nig", include_str!("../fixtures/nig.toml")),
    ("nig-light", include_str!("../fixtures/nig-light.toml")),
];

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub version: u32,
    pub seed: Option<u64>,
    pub format: Option<String>,
    pub output: Option<String>,
    pub model: Option<ModelSpec>,
    #[serde(default)]
    pub quad: QuadSection,
    pub moment: Option<MomentSection>,
    pub term_structure: Option<TermSection>,
    pub risk: Option<RiskSection>,
    pub validate: Option<ValidateSection>,
    pub bench: Option<BenchSection>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadSection {
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub max_panels: Option<usize>,
    /// Contour abscissa override.
    pub s: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentSection {
    pub orders: Vec<f64>,
    #[serde(default = "zero_shift")]
    pub shifts: Vec<f64>,
    #[serde(default = "absolute_kind")]
    pub kinds: Vec<MomentKind>,
}

fn zero_shift() -> Vec<f64> {
    vec![0.0]
}

fn absolute_kind() -> Vec<MomentKind> {
    vec![MomentKind::Absolute]
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSection {
    #[serde(default)]
    pub orders: Vec<f64>,
    pub horizons: Vec<usize>,
    pub kind: Option<MomentKind>,
    /// Report mean, standard deviation, skewness and kurtosis per horizon.
    #[serde(default)]
    pub summary: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RiskSection {
    pub alphas: Vec<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateSection {
    /// Overrides every suite tolerance.
    pub tolerance: Option<f64>,
    pub monte_carlo: Option<bool>,
    pub mc_seeds: Option<usize>,
    pub mc_paths: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchSection {
    pub orders: Option<Vec<f64>>,
    pub repetitions: Option<usize>,
    pub warmup: Option<usize>,
    pub sim_draws: Option<usize>,
    pub sim_repetitions: Option<usize>,
}

/// Model family with parameters and, for dynamic families, the time-`T`
/// state. Omitted states default to the reference starting points.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelSpec {
    Normal {
        mu: f64,
        sigma: f64,
    },
    Exponential {
        lambda: f64,
    },
    Poisson {
        lambda: f64,
    },
    Nig {
        loc: f64,
        scale: f64,
        tail: f64,
        asym: f64,
    },
    NigStandardized {
        xi: f64,
        chi: f64,
    },
    Hng {
        omega: f64,
        beta: f64,
        alpha: f64,
        gamma: f64,
        lambda_rp: f64,
        #[serde(default)]
        r_f: f64,
        h_next: Option<f64>,
        horizon: Option<usize>,
    },
    Harg {
        phi_d: f64,
        phi_w: f64,
        phi_m: f64,
        eta: f64,
        delta: f64,
        lags: Option<Vec<f64>>,
        lag_level: Option<f64>,
        horizon: Option<usize>,
    },
    Arp {
        omega: f64,
        beta: f64,
        alpha: f64,
        lambda_next: Option<f64>,
        horizon: Option<usize>,
    },
}

impl ModelSpec {
    pub fn family(&self) -> &'static str {
        match self {
            ModelSpec::Normal { .. } => "normal",
            ModelSpec::Exponential { .. } => "exponential",
            ModelSpec::Poisson { .. } => "poisson",
            ModelSpec::Nig { .. } => "nig",
            ModelSpec::NigStandardized { .. } => "nig-standardized",
            ModelSpec::Hng { .. } => "hng",
            ModelSpec::Harg { .. } => "harg",
            ModelSpec::Arp { .. } => "arp",
        }
    }

    pub fn nig_params(&self) -> Result<Option<NigParams>, CliError> {
        Ok(match self {
            ModelSpec::Nig { loc, scale, tail, asym } => Some(NigParams::new(*loc, *scale, *tail, *asym)?),
            ModelSpec::NigStandardized { xi, chi } => Some(nig_from_standardized(*xi, *chi)?),
            _ => None,
        })
    }

    /// Dynamic families with their state resolved; `None` for static laws.
    pub fn dynamic(&self) -> Result<Option<DynamicSpec>, CliError> {
        Ok(match self {
            ModelSpec::Hng {
                omega,
                beta,
                alpha,
                gamma,
                lambda_rp,
                r_f,
                h_next,
                ..
            } => {
                let params = HngParams {
                    omega: *omega,
                    beta: *beta,
                    alpha: *alpha,
                    gamma: *gamma,
                    lambda_rp: *lambda_rp,
                    r_f: *r_f,
                };
                params.validate()?;
                let h_next = match h_next {
                    Some(h) => *h,
                    None => params.unconditional_variance().ok_or_else(|| {
                        CliError::Usage("h_next required: the variance has no stationary level".into())
                    })?,
                };
                Some(DynamicSpec::Hng { params, h_next })
            }
            ModelSpec::Harg {
                phi_d,
                phi_w,
                phi_m,
                eta,
                delta,
                lags,
                lag_level,
                ..
            } => {
                let params = HargParams::from_ar_coefficients(*phi_d, *phi_w, *phi_m, *eta, *delta)?;
                let lags = match (lags, lag_level) {
                    (Some(_), Some(_)) => return Err(CliError::Usage("give either lags or lag_level, not both".into())),
                    (Some(l), None) => l.clone(),
                    (None, Some(level)) => vec![*level; HAR_LAGS],
                    (None, None) => {
                        let mean = params.unconditional_mean().ok_or_else(|| {
                            CliError::Usage("lags required: the process has no stationary mean".into())
                        })?;
                        vec![mean / 10.0; HAR_LAGS]
                    }
                };
                Some(DynamicSpec::Harg { params, lags })
            }
            ModelSpec::Arp {
                omega,
                beta,
                alpha,
                lambda_next,
                ..
            } => {
                let params = ArpParams {
                    omega: *omega,
                    beta: *beta,
                    alpha: *alpha,
                };
                params.validate()?;
                let lambda_next = match lambda_next {
                    Some(l) => *l,
                    None => {
                        params.stationary_mean().ok_or_else(|| {
                            CliError::Usage("lambda_next required: the intensity has no stationary mean".into())
                        })? / 10.0
                    }
                };
                Some(DynamicSpec::Arp { params, lambda_next })
            }
            _ => None,
        })
    }

    fn horizon(&self) -> Option<usize> {
        match self {
            ModelSpec::Hng { horizon, .. } | ModelSpec::Harg { horizon, .. } | ModelSpec::Arp { horizon, .. } => *horizon,
            _ => None,
        }
    }

    pub fn warnings(&self) -> Vec<String> {
        match self.dynamic() {
            Ok(Some(d)) => d.warnings(),
            _ => Vec::new(),
        }
    }

    /// The law itself (dynamic families at their configured horizon).
    pub fn build(&self) -> Result<Box<dyn MgfModel>, CliError> {
        if let Some(d) = self.dynamic()? {
            let h = self
                .horizon()
                .ok_or_else(|| CliError::Usage(format!("model.horizon required for the {} family", self.family())))?;
            // built directly so parameter errors surface before probing
            return Ok(match d {
                DynamicSpec::Hng { params, h_next } => Box::new(hng_mgf(&params, HngState { h_next, horizon: h })?),
                DynamicSpec::Harg { params, lags } => Box::new(harg_mgf(&params, HargState { lags, horizon: h })?),
                DynamicSpec::Arp { params, lambda_next } => {
                    Box::new(arp_mgf(&params, ArpState { lambda_next, horizon: h })?)
                }
            });
        }
        Ok(match self {
            ModelSpec::Normal { mu, sigma } => Box::new(normal_mgf(*mu, *sigma)?),
            ModelSpec::Exponential { lambda } => Box::new(exponential_mgf(*lambda)?),
            ModelSpec::Poisson { lambda } => Box::new(poisson_mgf(*lambda)?),
            _ => Box::new(nig_mgf(self.nig_params()?.expect("NIG family"))?),
        })
    }
}

fn fixture_table(name: &str) -> Result<toml::Table, CliError> {
    let text = FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| {
            let names: Vec<&str> = FIXTURES.iter().map(|(n, _)| *n).collect();
            CliError::Usage(format!("unknown fixture {name:?}; available: {}", names.join(", ")))
        })?;
    let mut table: toml::Table = text.parse().map_err(|e| CliError::Usage(format!("fixture {name}: {e}")))?;
    match table.remove("model") {
        Some(toml::Value::Table(t)) => Ok(t),
        _ => Err(CliError::Usage(format!("fixture {name} has no model table"))),
    }
}

/// Replaces `model.fixture = "name"` by the named fixture's model table,
/// with any other keys of `model` overriding it.
fn expand_fixture(root: &mut toml::Table) -> Result<(), CliError> {
    let Some(toml::Value::Table(model)) = root.get_mut("model") else {
        return Ok(());
    };
    let Some(name) = model.remove("fixture") else {
        return Ok(());
    };
    let name = name
        .as_str()
        .ok_or_else(|| CliError::Usage("model.fixture must be a string".into()))?
        .to_string();
    let mut merged = fixture_table(&name)?;
    for (k, v) in std::mem::take(model) {
        merged.insert(k, v);
    }
    *model = merged;
    Ok(())
}

pub fn parse_config(text: &str, origin: &str) -> Result<RunConfig, CliError> {
    let mut root: toml::Table = text.parse().map_err(|e| CliError::Usage(format!("{origin}: {}", one_line(e))))?;
    expand_fixture(&mut root)?;
    let cfg: RunConfig = toml::Value::Table(root)
        .try_into()
        .map_err(|e: toml::de::Error| CliError::Usage(format!("{origin}: {}", one_line(e))))?;
    if cfg.version != CONFIG_VERSION {
        return Err(CliError::Usage(format!(
            "{origin}: unsupported config version {}, expected {CONFIG_VERSION}",
            cfg.version
        )));
    }
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text, &path.display().to_string())
}

/// The model of a fixture, for commands run without a config.
pub fn fixture_model(name: &str) -> Result<ModelSpec, CliError> {
    toml::Value::Table(fixture_table(name)?)
        .try_into()
        .map_err(|e: toml::de::Error| CliError::Usage(format!("fixture {name}: {}", one_line(e))))
}

pub fn one_line(e: impl std::fmt::Display) -> String {
    e.to_string().split_whitespace().collect::<Vec<_>>().join(" ")
}
