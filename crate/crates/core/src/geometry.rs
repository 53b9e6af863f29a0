//! Non-squareness and local uniform non-squareness of the Orlicz-normed space.
//!
//! [`predict`] evaluates the characterizations symbolically from the weight and
//! the Δ₂ class of ψ. When non-squareness fails, the square-pair witnesses are
//! built explicitly and their four norms checked. When it holds, seeded random
//! sampling looks for pairs on the unit sphere with
//! `min{‖(x+y)/2‖°, ‖(x−y)/2‖°}` close to 1.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::norms::{
    k_interval_of_profile, orlicz_norm, orlicz_of_profile, KInterval, NormError, SpaceConfig,
    WeightedProfile,
};
use crate::orlicz::{OrliczError, Regime};
use crate::sampling::{stream, StepSampler};
use crate::stepfn::{Domain, Piece, StepError, StepFunction};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("‖{which}‖° = {norm} is outside the unit ball")]
    OutsideBall { which: &'static str, norm: f64 },
    #[error("‖x‖° = {norm} is not 1")]
    NotUnit { norm: f64 },
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Orlicz(#[from] OrliczError),
    #[error(transparent)]
    Step(#[from] StepError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    /// Non-square, `γ = ∞`.
    NsInfty,
    /// Non-square, `γ = 1`.
    NsUnit,
    /// Locally uniformly non-square, `γ = ∞`.
    LunsInfty,
    /// Locally uniformly non-square, `γ = 1`.
    LunsUnit,
    /// `L_{1,ω}` strictly monotone.
    SmL1w,
    /// `L_{1,ω}` lower locally uniformly monotone.
    LlumL1w,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::NsInfty => "NS_infty",
            Property::NsUnit => "NS_unit",
            Property::LunsInfty => "LUNS_infty",
            Property::LunsUnit => "LUNS_unit",
            Property::SmL1w => "SM_L1w",
            Property::LlumL1w => "LLUM_L1w",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerdictStatus {
    Holds,
    Fails,
    UndeterminedByPaper,
}

impl VerdictStatus {
    pub fn name(self) -> &'static str {
        match self {
            VerdictStatus::Holds => "Holds",
            VerdictStatus::Fails => "Fails",
            VerdictStatus::UndeterminedByPaper => "UndeterminedByPaper",
        }
    }
}

/// A predicted property with the predicate that decided it.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub reason: String,
    /// The verdict rests on a grid-based Δ₂ test.
    pub heuristic: bool,
}

impl Verdict {
    fn new(status: VerdictStatus, reason: String) -> Self {
        Self {
            status,
            reason,
            heuristic: false,
        }
    }

    pub fn holds(&self) -> bool {
        self.status == VerdictStatus::Holds
    }
}

pub type Predictions = BTreeMap<Property, Verdict>;

fn ext(v: f64) -> String {
    if v.is_infinite() {
        String::from("inf")
    } else {
        format!("{v}")
    }
}

/// Evaluates every applicable characterization for the space.
///
/// On `[0,∞)`: non-square iff `W(∞) = ∞`; locally uniformly non-square iff
/// additionally ψ ∈ Δ₂(ℝ). On `[0,1)`: non-square iff `α ∈ (1/2, 1]`; with
/// `α = 1`, locally uniformly non-square iff ψ ∈ Δ₂(∞). For `α ∈ (1/2, 1)` the
/// local uniform case is left undetermined.
pub fn predict(cfg: &SpaceConfig) -> Predictions {
    use VerdictStatus::*;
    let w = &cfg.weight;
    let mut out = Predictions::new();
    let tail = w.tail_mass();
    let alpha = w.alpha();

    match cfg.domain() {
        Domain::HalfLine => {
            let ns = if tail.is_infinite() {
                Verdict::new(Holds, String::from("W(inf)=inf"))
            } else {
                Verdict::new(Fails, format!("W(inf)={} < inf", ext(tail)))
            };
            let class = cfg.pair.classify_nabla2(Regime::AllValues, &cfg.delta2);
            let luns = if !tail.is_infinite() {
                Verdict::new(
                    Fails,
                    format!("not non-square (W(inf)={} < inf)", ext(tail)),
                )
            } else if class.holds {
                Verdict::new(Holds, String::from("psi in Delta2(R) and W(inf)=inf"))
            } else {
                Verdict::new(Fails, String::from("psi not in Delta2(R)"))
            };
            let luns = Verdict {
                heuristic: class.heuristic && tail.is_infinite(),
                ..luns
            };
            out.insert(Property::NsInfty, ns);
            out.insert(Property::LunsInfty, luns);
        }
        Domain::Unit => {
            let ns = if alpha > 0.5 {
                Verdict::new(Holds, format!("alpha={alpha} in (1/2, 1]"))
            } else {
                Verdict::new(Fails, format!("alpha={alpha} ≤ 1/2"))
            };
            let luns = if alpha <= 0.5 {
                Verdict::new(Fails, format!("not non-square (alpha={alpha} ≤ 1/2)"))
            } else if alpha < 1.0 {
                Verdict::new(
                    UndeterminedByPaper,
                    format!("alpha={alpha} in (1/2, 1): no characterization"),
                )
            } else {
                let class = cfg.pair.classify_nabla2(Regime::LargeValues, &cfg.delta2);
                let v = if class.holds {
                    Verdict::new(Holds, String::from("alpha=1 and psi in Delta2(inf)"))
                } else {
                    Verdict::new(Fails, String::from("alpha=1 and psi not in Delta2(inf)"))
                };
                Verdict {
                    heuristic: class.heuristic,
                    ..v
                }
            };
            out.insert(Property::NsUnit, ns);
            out.insert(Property::LunsUnit, luns);
        }
    }

    let mono = if w.l1_monotone() {
        Verdict::new(
            Holds,
            String::from("omega > 0 on [0,gamma) and W(inf)=inf when gamma=inf"),
        )
    } else if !w.positive_on_domain() {
        Verdict::new(Fails, format!("omega vanishes past alpha={}", ext(alpha)))
    } else {
        Verdict::new(Fails, format!("gamma=inf and W(inf)={} < inf", ext(tail)))
    };
    out.insert(Property::SmL1w, mono.clone());
    out.insert(Property::LlumL1w, mono);
    out
}

/// The non-squareness verdict for the space's domain.
pub fn non_square(pred: &Predictions) -> Option<&Verdict> {
    pred.get(&Property::NsInfty)
        .or_else(|| pred.get(&Property::NsUnit))
}

/// The local uniform non-squareness verdict for the space's domain.
pub fn luns(pred: &Predictions) -> Option<&Verdict> {
    pred.get(&Property::LunsInfty)
        .or_else(|| pred.get(&Property::LunsUnit))
}

/// A square pair: unit `x`, `y` with both midpoints on the unit sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub x: StepFunction,
    pub y: StepFunction,
    /// Common amplitude of every piece.
    pub amplitude: f64,
    /// `‖x‖°, ‖y‖°, ‖(x+y)/2‖°, ‖(x−y)/2‖°`.
    pub norms: [f64; 4],
}

impl Witness {
    fn from_pair(
        cfg: &SpaceConfig,
        x: StepFunction,
        y: StepFunction,
        amplitude: f64,
    ) -> Result<Self, GeometryError> {
        let (plus, minus) = x.midpoints(&y)?;
        let norms = [
            orlicz_norm(cfg, &x)?,
            orlicz_norm(cfg, &y)?,
            orlicz_norm(cfg, &plus)?,
            orlicz_norm(cfg, &minus)?,
        ];
        Ok(Self {
            x,
            y,
            amplitude,
            norms,
        })
    }

    /// Largest deviation of the four norms from 1.
    pub fn max_deviation(&self) -> f64 {
        self.norms
            .iter()
            .map(|n| (n - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Square pair on `[0,∞)` when `W(∞) < ∞`.
///
/// `x = c·χ_[0,∞)` and `y = c·χ_[0,T) − c·χ_[T,∞)` with
/// `c = 1/(ψ⁻¹(1/W(∞))·W(∞))`. `T` is the smallest power of two with
/// `W(T) = W(∞)` in floating point, so `(x+y)/2 = c·χ_[0,T)` has the same
/// norm as an indicator of an infinite-measure set.
pub fn build_witness_infty(cfg: &SpaceConfig) -> Result<Witness, GeometryError> {
    if cfg.domain() != Domain::HalfLine {
        return Err(GeometryError::Precondition(String::from(
            "the infinite-interval witness needs gamma=inf",
        )));
    }
    let tail = cfg.weight.tail_mass();
    if tail.is_infinite() {
        return Err(GeometryError::Precondition(String::from(
            "the infinite-interval witness needs W(inf) < inf",
        )));
    }
    let c = 1.0 / (cfg.pair.psi_inverse(1.0 / tail, cfg.tol_root)? * tail);
    let mut t = 1.0f64;
    while cfg.weight.mass(0.0, t) != tail {
        t *= 2.0;
        if t > 1e300 {
            return Err(GeometryError::Precondition(String::from(
                "W(t) never reaches W(inf) in floating point",
            )));
        }
    }
    let x = StepFunction::indicator(Domain::HalfLine, 0.0, f64::INFINITY, c)?;
    let y = StepFunction::new(
        Domain::HalfLine,
        alloc::vec![Piece::new(0.0, t, c), Piece::new(t, f64::INFINITY, -c)],
    )?;
    Witness::from_pair(cfg, x, y, c)
}

/// Square pair on `[0,1)` when `α ≤ 1/2`.
///
/// `x = c·χ_[0,2α)`, `y = c·χ_[0,α) − c·χ_[α,2α)` with
/// `c = 1/(ψ⁻¹(1/W(α))·W(2α))`; ω vanishes past α so `W(2α) = W(α)`.
pub fn build_witness_unit(cfg: &SpaceConfig) -> Result<Witness, GeometryError> {
    if cfg.domain() != Domain::Unit {
        return Err(GeometryError::Precondition(String::from(
            "the unit-interval witness needs gamma=1",
        )));
    }
    let alpha = cfg.weight.alpha();
    if alpha > 0.5 {
        return Err(GeometryError::Precondition(format!(
            "the unit-interval witness needs alpha ≤ 1/2, got alpha={alpha}"
        )));
    }
    let w_alpha = cfg.weight.mass(0.0, alpha);
    let w_2alpha = cfg.weight.mass(0.0, 2.0 * alpha);
    let c = 1.0 / (cfg.pair.psi_inverse(1.0 / w_alpha, cfg.tol_root)? * w_2alpha);
    let x = StepFunction::indicator(Domain::Unit, 0.0, 2.0 * alpha, c)?;
    let y = StepFunction::new(
        Domain::Unit,
        alloc::vec![Piece::new(0.0, alpha, c), Piece::new(alpha, alpha, -c)],
    )?;
    Witness::from_pair(cfg, x, y, c)
}

/// Builds whichever witness applies to the space's domain.
pub fn build_witness(cfg: &SpaceConfig) -> Result<Witness, GeometryError> {
    match cfg.domain() {
        Domain::HalfLine => build_witness_infty(cfg),
        Domain::Unit => build_witness_unit(cfg),
    }
}

/// `(‖(x+y)/2‖°, ‖(x−y)/2‖°)`.
pub fn midpoint_norms(
    cfg: &SpaceConfig,
    x: &StepFunction,
    y: &StepFunction,
) -> Result<(f64, f64), GeometryError> {
    let (plus, minus) = x.midpoints(y)?;
    Ok((orlicz_norm(cfg, &plus)?, orlicz_norm(cfg, &minus)?))
}

/// `min{‖(x+y)/2‖°, ‖(x−y)/2‖°}` for `x`, `y` in the unit ball.
pub fn square_defect(
    cfg: &SpaceConfig,
    x: &StepFunction,
    y: &StepFunction,
) -> Result<f64, GeometryError> {
    for (which, f) in [("x", x), ("y", y)] {
        let norm = orlicz_norm(cfg, f)?;
        if norm > 1.0 + cfg.tol_norm {
            return Err(GeometryError::OutsideBall { which, norm });
        }
    }
    let (p, m) = midpoint_norms(cfg, x, y)?;
    Ok(p.min(m))
}

fn normalized(
    cfg: &SpaceConfig,
    x: &StepFunction,
    radius: f64,
) -> Result<StepFunction, GeometryError> {
    let norm = orlicz_of_profile(cfg, &WeightedProfile::of(cfg, x))?;
    Ok(x.scale(radius / norm))
}

/// Random unit-sphere pair number `index` under `seed`.
pub fn probe_pair(
    cfg: &SpaceConfig,
    seed: u64,
    index: u64,
) -> Result<(StepFunction, StepFunction), GeometryError> {
    let sampler = StepSampler::new(cfg.domain());
    let mut rng = stream(seed, index);
    let x = sampler.sample(&mut rng);
    let y = sampler.sample(&mut rng);
    Ok((normalized(cfg, &x, 1.0)?, normalized(cfg, &y, 1.0)?))
}

/// Square defect of random pair `index`.
pub fn probe_defect(cfg: &SpaceConfig, seed: u64, index: u64) -> Result<f64, GeometryError> {
    let (x, y) = probe_pair(cfg, seed, index)?;
    let (p, m) = midpoint_norms(cfg, &x, &y)?;
    Ok(p.min(m))
}

/// Statistics of a non-squareness probe.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchStats {
    pub seed: u64,
    pub samples: u64,
    /// `None` when no samples were drawn.
    pub max_defect: Option<f64>,
    pub argmax_index: Option<u64>,
    pub argmax_pair: Option<(StepFunction, StepFunction)>,
    /// Pairs with defect `>= 1`.
    pub violations: u64,
}

impl SearchStats {
    /// All sampled defects were strictly below 1.
    pub fn strictly_below_one(&self) -> bool {
        self.violations == 0 && self.max_defect.is_none_or(|d| d < 1.0)
    }
}

fn argmax(values: &[f64]) -> Option<(u64, f64)> {
    let mut best: Option<(u64, f64)> = None;
    for (i, &v) in values.iter().enumerate() {
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((i as u64, v));
        }
    }
    best
}

/// Reduces per-index defects (in index order) to [`SearchStats`] and
/// regenerates the argmax pair from its stream.
pub fn summarize_probe(
    cfg: &SpaceConfig,
    seed: u64,
    defects: &[f64],
) -> Result<SearchStats, GeometryError> {
    let best = argmax(defects);
    let argmax_pair = match best {
        Some((i, _)) => Some(probe_pair(cfg, seed, i)?),
        None => None,
    };
    Ok(SearchStats {
        seed,
        samples: defects.len() as u64,
        max_defect: best.map(|b| b.1),
        argmax_index: best.map(|b| b.0),
        argmax_pair,
        violations: defects.iter().filter(|&&d| d >= 1.0).count() as u64,
    })
}

fn require_non_square(cfg: &SpaceConfig) -> Result<(), GeometryError> {
    let pred = predict(cfg);
    match non_square(&pred) {
        Some(v) if v.holds() => Ok(()),
        Some(v) => Err(GeometryError::Precondition(format!(
            "probe needs a non-square space, predicted {} ({})",
            v.status.name(),
            v.reason
        ))),
        None => Err(GeometryError::Precondition(String::from(
            "no non-squareness verdict",
        ))),
    }
}

/// Seeded search for near-square pairs on the unit sphere. Sequential; see
/// [`probe_defect`] and [`summarize_probe`] for fan-out.
pub fn probe_nonsquare(
    cfg: &SpaceConfig,
    seed: u64,
    n_samples: u64,
) -> Result<SearchStats, GeometryError> {
    require_non_square(cfg)?;
    let defects = (0..n_samples)
        .map(|i| probe_defect(cfg, seed, i))
        .collect::<Result<Vec<_>, _>>()?;
    summarize_probe(cfg, seed, &defects)
}

/// Checks the probe precondition without running it.
pub fn check_probe_precondition(cfg: &SpaceConfig) -> Result<(), GeometryError> {
    require_non_square(cfg)
}

/// Radii used for ball samples: `j/16`, `j = 1..=16`.
const BALL_RADII: u32 = 16;

/// Ball sample `index` for a LUNS estimate around `x`. Index 0 is `x` itself.
pub fn luns_partner(
    cfg: &SpaceConfig,
    x: &StepFunction,
    seed: u64,
    index: u64,
) -> Result<StepFunction, GeometryError> {
    use rand::Rng;
    if index == 0 {
        return Ok(x.clone());
    }
    let sampler = StepSampler::new(cfg.domain());
    let mut rng = stream(seed, index);
    let y = sampler.sample(&mut rng);
    let radius = rng.gen_range(1..=BALL_RADII) as f64 / BALL_RADII as f64;
    normalized(cfg, &y, radius)
}

/// Square defect and multiplier interval of one ball sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LunsSample {
    pub defect: f64,
    pub k: KInterval,
}

pub fn luns_sample(
    cfg: &SpaceConfig,
    x: &StepFunction,
    seed: u64,
    index: u64,
) -> Result<LunsSample, GeometryError> {
    let y = luns_partner(cfg, x, seed, index)?;
    let (p, m) = midpoint_norms(cfg, x, &y)?;
    let k = k_interval_of_profile(cfg, &WeightedProfile::of(cfg, &y))?;
    Ok(LunsSample {
        defect: p.min(m),
        k,
    })
}

/// Sampled lower estimate of the local uniform non-squareness constant `δ(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LunsEstimate {
    pub seed: u64,
    pub samples: u64,
    /// `1 − max defect`.
    pub delta_hat: f64,
    pub max_defect: f64,
    pub argmax_index: u64,
    /// Smallest `k*` seen over `x` and the samples.
    pub xi1_hat: f64,
    /// Largest `k**` seen over `x` and the samples.
    pub xi2_hat: f64,
    /// The space is not predicted to be locally uniformly non-square, so no
    /// positivity is expected.
    pub exploratory: bool,
}

/// Checks that `x` is on the unit sphere and returns whether a LUNS estimate
/// around it would be exploratory.
pub fn check_luns_precondition(cfg: &SpaceConfig, x: &StepFunction) -> Result<bool, GeometryError> {
    let norm = orlicz_norm(cfg, x)?;
    if (norm - 1.0).abs() > cfg.tol_norm {
        return Err(GeometryError::NotUnit { norm });
    }
    let pred = predict(cfg);
    Ok(!luns(&pred).is_some_and(Verdict::holds))
}

/// Reduces per-index LUNS samples (in index order).
pub fn summarize_luns(
    cfg: &SpaceConfig,
    x: &StepFunction,
    seed: u64,
    samples: &[LunsSample],
    exploratory: bool,
) -> Result<LunsEstimate, GeometryError> {
    let kx = k_interval_of_profile(cfg, &WeightedProfile::of(cfg, x))?;
    let defects: Vec<f64> = samples.iter().map(|s| s.defect).collect();
    let (argmax_index, max_defect) = argmax(&defects).unwrap_or((0, 0.0));
    let xi1_hat = samples.iter().map(|s| s.k.k_star).fold(kx.k_star, f64::min);
    let xi2_hat = samples
        .iter()
        .map(|s| s.k.k_double_star)
        .fold(kx.k_double_star, f64::max);
    Ok(LunsEstimate {
        seed,
        samples: samples.len() as u64,
        delta_hat: 1.0 - max_defect,
        max_defect,
        argmax_index,
        xi1_hat,
        xi2_hat,
        exploratory,
    })
}

/// `δ̂(x) = 1 − max_y min{‖(x+y)/2‖°, ‖(x−y)/2‖°}` over `n_samples` seeded
/// ball samples (the first being `y = x`).
pub fn estimate_luns_delta(
    cfg: &SpaceConfig,
    x: &StepFunction,
    seed: u64,
    n_samples: u64,
) -> Result<LunsEstimate, GeometryError> {
    let exploratory = check_luns_precondition(cfg, x)?;
    let samples = (0..n_samples)
        .map(|i| luns_sample(cfg, x, seed, i))
        .collect::<Result<Vec<_>, _>>()?;
    summarize_luns(cfg, x, seed, &samples, exploratory)
}

/// Everything known about one space's geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryReport {
    pub predicted: Predictions,
    pub witness: Option<Witness>,
    pub search: Option<SearchStats>,
}

impl GeometryReport {
    /// Predictions plus a witness when non-squareness fails, or a probe of
    /// `n_samples` pairs when it holds.
    pub fn assemble(cfg: &SpaceConfig, seed: u64, n_samples: u64) -> Result<Self, GeometryError> {
        let predicted = predict(cfg);
        let ns = non_square(&predicted).is_some_and(Verdict::holds);
        let (witness, search) = if ns {
            (None, Some(probe_nonsquare(cfg, seed, n_samples)?))
        } else {
            (Some(build_witness(cfg)?), None)
        };
        Ok(Self {
            predicted,
            witness,
            search,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orlicz::OrliczFunction;
    use crate::weight::{Weight, WeightFamily};

    fn space(phi: OrliczFunction, family: WeightFamily, domain: Domain) -> SpaceConfig {
        SpaceConfig::new(phi, Weight::new(family, domain).unwrap())
    }

    fn sq() -> OrliczFunction {
        OrliczFunction::power(2.0).unwrap()
    }

    #[test]
    fn predict_examples() {
        let p = predict(&space(
            sq(),
            WeightFamily::Constant { c: 1.0 },
            Domain::HalfLine,
        ));
        assert_eq!(p[&Property::NsInfty].status, VerdictStatus::Holds);
        let p = predict(&space(
            sq(),
            WeightFamily::ExpDecay { lambda: 1.0 },
            Domain::HalfLine,
        ));
        assert_eq!(p[&Property::NsInfty].status, VerdictStatus::Fails);
        assert_eq!(p[&Property::SmL1w].status, VerdictStatus::Fails);
        let p = predict(&space(
            sq(),
            WeightFamily::TruncatedConstant { c: 1.0, alpha: 0.4 },
            Domain::Unit,
        ));
        assert_eq!(p[&Property::NsUnit].status, VerdictStatus::Fails);
        assert_eq!(p[&Property::NsUnit].reason, "alpha=0.4 ≤ 1/2");
        let p = predict(&space(
            sq(),
            WeightFamily::TruncatedConstant {
                c: 1.0,
                alpha: 0.75,
            },
            Domain::Unit,
        ));
        assert_eq!(
            p[&Property::LunsUnit].status,
            VerdictStatus::UndeterminedByPaper
        );
        let p = predict(&space(
            OrliczFunction::LogLinear,
            WeightFamily::Constant { c: 1.0 },
            Domain::Unit,
        ));
        assert_eq!(p[&Property::LunsUnit].status, VerdictStatus::Fails);
        assert!(!p[&Property::LunsUnit].heuristic);
    }

    #[test]
    fn witness_preconditions() {
        let cfg = space(sq(), WeightFamily::Constant { c: 1.0 }, Domain::HalfLine);
        assert!(matches!(
            build_witness_infty(&cfg),
            Err(GeometryError::Precondition(_))
        ));
        let cfg = space(
            sq(),
            WeightFamily::TruncatedConstant { c: 1.0, alpha: 0.6 },
            Domain::Unit,
        );
        assert!(matches!(
            build_witness_unit(&cfg),
            Err(GeometryError::Precondition(_))
        ));
    }

    #[test]
    fn infty_witness_is_square() {
        let cfg = space(
            sq(),
            WeightFamily::ExpDecay { lambda: 1.0 },
            Domain::HalfLine,
        );
        let w = build_witness_infty(&cfg).unwrap();
        assert!((w.amplitude - 1.0 / core::f64::consts::SQRT_2).abs() < 1e-12);
        assert!(w.max_deviation() < 1e-8, "{:?}", w.norms);
        assert_eq!(w.x.rearrange(), w.y.rearrange());
        assert_eq!(
            square_defect(&cfg, &w.x, &w.y).map(|d| (d - 1.0).abs() < 1e-8),
            Ok(true)
        );
    }

    #[test]
    fn unit_witness_is_square() {
        let cfg = space(
            sq(),
            WeightFamily::TruncatedConstant { c: 1.0, alpha: 0.4 },
            Domain::Unit,
        );
        let w = build_witness_unit(&cfg).unwrap();
        // c = 1/(ψ⁻¹(2.5)·0.4) with ψ⁻¹(w) = sqrt(2w)
        assert!((w.amplitude - 1.0 / (libm::sqrt(5.0) * 0.4)).abs() < 1e-12);
        assert!(w.max_deviation() < 1e-8, "{:?}", w.norms);
    }

    #[test]
    fn defect_trivial_cases() {
        let cfg = space(sq(), WeightFamily::Constant { c: 1.0 }, Domain::Unit);
        let x = StepFunction::indicator(Domain::Unit, 0.0, 0.5, 1.0).unwrap();
        assert_eq!(square_defect(&cfg, &x, &x).unwrap(), 0.0);
        assert_eq!(square_defect(&cfg, &x, &x.scale(-1.0)).unwrap(), 0.0);
        assert!(matches!(
            square_defect(&cfg, &x.scale(2.0), &x),
            Err(GeometryError::OutsideBall { which: "x", .. })
        ));
    }

    #[test]
    fn probe_requires_non_square() {
        let cfg = space(
            sq(),
            WeightFamily::ExpDecay { lambda: 1.0 },
            Domain::HalfLine,
        );
        assert!(matches!(
            probe_nonsquare(&cfg, 1, 10),
            Err(GeometryError::Precondition(_))
        ));
        let cfg = space(sq(), WeightFamily::Constant { c: 1.0 }, Domain::Unit);
        let s = probe_nonsquare(&cfg, 1, 0).unwrap();
        assert_eq!(s.max_defect, None);
        assert_eq!(s.samples, 0);
        assert!(s.argmax_pair.is_none());
    }

    #[test]
    fn luns_first_sample_is_x() {
        let cfg = space(sq(), WeightFamily::Constant { c: 1.0 }, Domain::Unit);
        let x = StepFunction::indicator(Domain::Unit, 0.0, 0.5, 1.0).unwrap();
        assert_eq!(luns_partner(&cfg, &x, 7, 0).unwrap(), x);
        assert_eq!(luns_sample(&cfg, &x, 7, 0).unwrap().defect, 0.0);
        let est = estimate_luns_delta(&cfg, &x, 7, 1).unwrap();
        assert_eq!(est.delta_hat, 1.0);
        assert!(matches!(
            estimate_luns_delta(&cfg, &x.scale(0.5), 7, 1),
            Err(GeometryError::NotUnit { .. })
        ));
    }
}
