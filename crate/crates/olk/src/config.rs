//! Space configuration files.
//!
//! ```toml
//! gamma = "inf"                          # or 1
//! phi = { family = "power", p = 2.0 }
//! omega = { family = "exp", lambda = 1.0 }
//!
//! [tolerances]                           # optional
//! tol_root = 1e-12
//! tol_norm = 1e-10
//! k_horizon = 1e8
//! ```

use std::fmt;
use std::path::Path;

use olk_core::orlicz::{OrliczFunction, DEFAULT_INVERSION_HORIZON};
use olk_core::weight::WeightPiece;
use olk_core::{Domain, SpaceConfig, Weight, WeightFamily};
use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(String),
    #[error("invalid `{key}`: {message}")]
    Invalid { key: &'static str, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Gamma(Domain);

impl<'de> Deserialize<'de> for Gamma {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct GammaVisitor;

        impl Visitor<'_> for GammaVisitor {
            type Value = Gamma;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("1 or \"inf\"")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Gamma, E> {
                self.visit_f64(v as f64)
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Gamma, E> {
                if v == 1.0 {
                    Ok(Gamma(Domain::Unit))
                } else if v == f64::INFINITY {
                    Ok(Gamma(Domain::HalfLine))
                } else {
                    Err(E::custom(format!("gamma must be 1 or \"inf\", got {v}")))
                }
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Gamma, E> {
                match v.trim() {
                    "inf" | "infinity" | "+inf" => Ok(Gamma(Domain::HalfLine)),
                    "1" => Ok(Gamma(Domain::Unit)),
                    other => Err(E::custom(format!(
                        "gamma must be 1 or \"inf\", got {other:?}"
                    ))),
                }
            }
        }

        d.deserialize_any(GammaVisitor)
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
enum PhiSpec {
    Power { p: f64 },
    ExpMinusLinear,
    LogLinear,
    Tabulated { knots: Vec<[f64; 2]> },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
enum OmegaSpec {
    Constant {
        #[serde(default = "one")]
        c: f64,
    },
    TruncatedConstant {
        #[serde(default = "one")]
        c: f64,
        alpha: f64,
    },
    PowerDecay {
        a: f64,
    },
    Exp {
        lambda: f64,
    },
    /// `pieces = [[len, value], ...]`; `len` may be `inf` for the last piece.
    Step {
        pieces: Vec<[f64; 2]>,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Tolerances {
    tol_root: Option<f64>,
    tol_norm: Option<f64>,
    k_horizon: Option<f64>,
    conjugate_horizon: Option<f64>,
    delta2_u0: Option<f64>,
    delta2_horizon: Option<f64>,
    delta2_points: Option<usize>,
    delta2_ratio_ceiling: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceFile {
    gamma: Gamma,
    phi: PhiSpec,
    omega: OmegaSpec,
    #[serde(default)]
    tolerances: Tolerances,
}

fn positive(key: &'static str, v: Option<f64>) -> Result<Option<f64>, ConfigError> {
    match v {
        Some(x) if !(x > 0.0 && x.is_finite()) => Err(ConfigError::Invalid {
            key,
            message: format!("must be positive and finite, got {x}"),
        }),
        other => Ok(other),
    }
}

/// Parses a space definition from TOML text.
pub fn parse_space(text: &str) -> Result<SpaceConfig, ConfigError> {
    let file: SpaceFile = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    let domain = file.gamma.0;

    let phi = match file.phi {
        PhiSpec::Power { p } => OrliczFunction::power(p),
        PhiSpec::ExpMinusLinear => Ok(OrliczFunction::ExpMinusLinear),
        PhiSpec::LogLinear => Ok(OrliczFunction::LogLinear),
        PhiSpec::Tabulated { knots } => {
            OrliczFunction::tabulated(knots.into_iter().map(|[u, p]| (u, p)).collect())
        }
    }
    .map_err(|e| ConfigError::Invalid {
        key: "phi",
        message: e.to_string(),
    })?;

    let family = match file.omega {
        OmegaSpec::Constant { c } => WeightFamily::Constant { c },
        OmegaSpec::TruncatedConstant { c, alpha } => WeightFamily::TruncatedConstant { c, alpha },
        OmegaSpec::PowerDecay { a } => WeightFamily::PowerDecay { a },
        OmegaSpec::Exp { lambda } => WeightFamily::ExpDecay { lambda },
        OmegaSpec::Step { pieces } => WeightFamily::Step(
            pieces
                .into_iter()
                .map(|[len, value]| WeightPiece { len, value })
                .collect(),
        ),
    };
    let weight = Weight::new(family, domain).map_err(|e| ConfigError::Invalid {
        key: "omega",
        message: e.to_string(),
    })?;

    let t = file.tolerances;
    let conj_h = positive("tolerances.conjugate_horizon", t.conjugate_horizon)?
        .unwrap_or(DEFAULT_INVERSION_HORIZON);
    let mut cfg = SpaceConfig::new(phi, weight);
    cfg.pair = cfg.pair.phi.conjugate_with_horizon(conj_h);
    if let Some(v) = positive("tolerances.tol_root", t.tol_root)? {
        cfg.tol_root = v;
    }
    if let Some(v) = positive("tolerances.tol_norm", t.tol_norm)? {
        cfg.tol_norm = v;
    }
    if let Some(v) = positive("tolerances.k_horizon", t.k_horizon)? {
        cfg.k_horizon = v;
    }
    cfg.delta2.u0 = positive("tolerances.delta2_u0", t.delta2_u0)?;
    if let Some(v) = positive("tolerances.delta2_horizon", t.delta2_horizon)? {
        cfg.delta2.horizon = v;
    }
    if let Some(v) = t.delta2_points {
        cfg.delta2.points = v;
    }
    if let Some(v) = positive("tolerances.delta2_ratio_ceiling", t.delta2_ratio_ceiling)? {
        cfg.delta2.ratio_ceiling = v;
    }
    Ok(cfg)
}

/// Reads and parses a space file.
pub fn load_space(path: &Path) -> Result<SpaceConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_space(&text)
}
