//! Modulars and norms on an Orlicz–Lorentz space.
//!
//! For a simple function `x` the modular `ρ(λx) = ∫ φ(λx*) ω` is the finite
//! sum `Σ φ(λ vᵢ)·(W(tᵢ) − W(tᵢ₋₁))` over the levels of `x*`. Both norms are
//! obtained from that sum:
//!
//! - Luxemburg: `inf{ε > 0 : ρ(x/ε) ≤ 1}` by bisection in `ε`.
//! - Orlicz (Amemiya): `inf_k (1 + ρ(kx))/k`. The infimum is attained exactly on
//!   `K(x) = [k*, k**]`, where `k*` and `k**` are the level-one crossings of the
//!   non-decreasing map `h ↦ ρ_ψ(p(h|x|))`. The norm is computed at `k*` and
//!   cross-checked against a golden-section minimization of the Amemiya
//!   function that never looks at `K(x)`.

use alloc::vec::Vec;

use libm::{exp, log};
use thiserror::Error;

use crate::orlicz::{ConjugatePair, Delta2Options, OrliczFunction};
use crate::solve::{bisect_switch, bracket_switch, golden_section_min, Bracket};
use crate::stepfn::{Domain, Rearrangement, StepError, StepFunction};
use crate::weight::Weight;

/// Smallest multiplier examined by the golden-section route.
const GOLDEN_K_FLOOR: f64 = 1e-300;
/// Absolute tolerance on `ln k` for the golden-section route.
const GOLDEN_LOG_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NormError {
    #[error("outside the space: the modular is infinite for every scaling")]
    OutsideSpace,
    #[error("the zero function has no multiplier interval")]
    ZeroFunction,
    #[error("horizon exceeded: ρ_ψ(p(h|x|)) < 1 for all h up to {horizon}")]
    HorizonExceeded { horizon: f64 },
    #[error("ρ_ψ(y) = {rho} exceeds 1")]
    OutsideDualBall { rho: f64 },
    #[error("Orlicz norm {norm} exceeds 1")]
    NormAboveOne { norm: f64 },
    #[error("Orlicz norm routes disagree: K-interval {k_route}, golden-section {golden_route}")]
    RouteDisagreement { k_route: f64, golden_route: f64 },
    #[error("function domain {found:?} does not match the space domain {expected:?}")]
    DomainMismatch { expected: Domain, found: Domain },
    #[error(transparent)]
    Step(#[from] StepError),
}

/// One Orlicz–Lorentz space `Λ_{φ,ω}[0,γ)` plus numeric tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceConfig {
    pub pair: ConjugatePair,
    pub weight: Weight,
    pub tol_root: f64,
    pub tol_norm: f64,
    pub k_horizon: f64,
    pub delta2: Delta2Options,
}

impl SpaceConfig {
    pub fn new(phi: OrliczFunction, weight: Weight) -> Self {
        Self {
            pair: phi.conjugate(),
            weight,
            tol_root: 1e-12,
            tol_norm: 1e-10,
            k_horizon: 1e8,
            delta2: Delta2Options::default(),
        }
    }

    pub fn phi(&self) -> &OrliczFunction {
        &self.pair.phi
    }

    pub fn psi(&self) -> &OrliczFunction {
        &self.pair.psi
    }

    pub fn domain(&self) -> Domain {
        self.weight.domain()
    }

    fn check_domain(&self, x: &StepFunction) -> Result<(), NormError> {
        if x.domain() != self.domain() {
            return Err(NormError::DomainMismatch {
                expected: self.domain(),
                found: x.domain(),
            });
        }
        Ok(())
    }
}

/// `K(x) = [k*, k**]`; `k**` may be `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KInterval {
    pub k_star: f64,
    pub k_double_star: f64,
}

impl KInterval {
    /// Whether the interval has collapsed to a point at relative tolerance `tol`.
    pub fn is_point(&self, tol: f64) -> bool {
        self.k_double_star - self.k_star <= tol * self.k_double_star
    }

    pub fn contains(&self, k: f64) -> bool {
        k >= self.k_star && k <= self.k_double_star
    }

    /// `K(c·x) = K(x)/c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            k_star: self.k_star / c,
            k_double_star: self.k_double_star / c,
        }
    }
}

/// Levels `vᵢ` of `x*` paired with their weight masses `W(tᵢ) − W(tᵢ₋₁)`.
/// Levels with zero mass (past the support of ω) are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedProfile {
    levels: Vec<(f64, f64)>,
}

impl WeightedProfile {
    pub fn new(weight: &Weight, r: &Rearrangement) -> Self {
        let levels = r
            .intervals()
            .map(|(a, b, v)| (v, weight.mass(a, b)))
            .filter(|&(_, m)| m > 0.0)
            .collect();
        Self { levels }
    }

    pub fn of(cfg: &SpaceConfig, x: &StepFunction) -> Self {
        Self::new(&cfg.weight, &x.rearrange())
    }

    pub fn levels(&self) -> &[(f64, f64)] {
        &self.levels
    }

    pub fn is_zero(&self) -> bool {
        self.levels.is_empty()
    }

    /// A positive level carries infinite weight mass.
    pub fn has_infinite_mass(&self) -> bool {
        self.levels.iter().any(|&(_, m)| m.is_infinite())
    }

    pub fn sup(&self) -> f64 {
        self.levels.first().map_or(0.0, |l| l.0)
    }

    /// `ρ_f(λx) = Σ f(λvᵢ) mᵢ`.
    pub fn modular(&self, f: &OrliczFunction, lambda: f64) -> f64 {
        self.levels
            .iter()
            .map(|&(v, m)| f.eval(lambda * v) * m)
            .sum()
    }

    /// `ρ_ψ(p(h|x|))`, non-decreasing in `h`.
    pub fn dual_level(&self, pair: &ConjugatePair, h: f64) -> f64 {
        self.levels
            .iter()
            .map(|&(v, m)| pair.psi.eval(pair.p(h * v)) * m)
            .sum()
    }

    /// Amemiya function `(1 + ρ(kx))/k`.
    pub fn amemiya(&self, phi: &OrliczFunction, k: f64) -> f64 {
        (1.0 + self.modular(phi, k)) / k
    }

    fn guard(&self) -> Result<(), NormError> {
        if self.has_infinite_mass() {
            Err(NormError::OutsideSpace)
        } else {
            Ok(())
        }
    }
}

/// `ρ_{φ,ω}(x)` as the weighted integral of `(φ∘x)*`. Overflow is `+∞`.
pub fn modular(cfg: &SpaceConfig, x: &StepFunction) -> f64 {
    modular_of(cfg.phi(), &cfg.weight, x)
}

/// `ρ_{f,ω}(x)` for an arbitrary Orlicz function `f`.
pub fn modular_of(f: &OrliczFunction, weight: &Weight, x: &StepFunction) -> f64 {
    match x.compose_phi(f) {
        Ok(fx) => weight.weighted_integral(&fx.rearrange()),
        Err(_) => f64::INFINITY,
    }
}

/// Luxemburg norm `inf{ε > 0 : ρ(x/ε) ≤ 1}`.
pub fn luxemburg_norm(cfg: &SpaceConfig, x: &StepFunction) -> Result<f64, NormError> {
    cfg.check_domain(x)?;
    luxemburg_of_profile(cfg, &WeightedProfile::of(cfg, x))
}

pub fn luxemburg_of_profile(cfg: &SpaceConfig, prof: &WeightedProfile) -> Result<f64, NormError> {
    if prof.is_zero() {
        return Ok(0.0);
    }
    prof.guard()?;
    let phi = cfg.phi();
    let inside = |eps: f64| prof.modular(phi, 1.0 / eps) <= 1.0;
    let (lo, hi) = match bracket_switch(prof.sup(), f64::MAX, inside) {
        Bracket::Found { lo, hi } => (lo, hi),
        Bracket::AlwaysHigh { floor } => (0.0, floor),
        Bracket::Exhausted { .. } => return Err(NormError::OutsideSpace),
    };
    let tol = cfg.tol_root.min(cfg.tol_norm);
    let (_, hi) = bisect_switch(lo, hi, tol, inside);
    Ok(hi)
}

/// `K(x) = [k*, k**]` with `k* = inf{h : ρ_ψ(p(h|x|)) ≥ 1}` and
/// `k** = sup{h : ρ_ψ(p(h|x|)) ≤ 1}`, searched on `(0, k_horizon]`.
pub fn k_interval(cfg: &SpaceConfig, x: &StepFunction) -> Result<KInterval, NormError> {
    cfg.check_domain(x)?;
    k_interval_of_profile(cfg, &WeightedProfile::of(cfg, x))
}

pub fn k_interval_of_profile(
    cfg: &SpaceConfig,
    prof: &WeightedProfile,
) -> Result<KInterval, NormError> {
    if prof.is_zero() {
        return Err(NormError::ZeroFunction);
    }
    prof.guard()?;
    let g = |h: f64| prof.dual_level(&cfg.pair, h);
    let start = (1.0 / prof.sup()).min(cfg.k_horizon);

    let reached = |h: f64| g(h) >= 1.0;
    let k_star = match bracket_switch(start, cfg.k_horizon, reached) {
        Bracket::Found { lo, hi } => bisect_switch(lo, hi, cfg.tol_root, reached).1,
        Bracket::AlwaysHigh { floor } => floor,
        Bracket::Exhausted { limit } => return Err(NormError::HorizonExceeded { horizon: limit }),
    };

    let exceeded = |h: f64| g(h) > 1.0;
    let k_double_star = match bracket_switch(k_star, cfg.k_horizon, exceeded) {
        Bracket::Found { lo, hi } => bisect_switch(lo, hi, cfg.tol_root, exceeded).0,
        Bracket::AlwaysHigh { .. } => k_star,
        Bracket::Exhausted { .. } => f64::INFINITY,
    };
    Ok(KInterval {
        k_star,
        k_double_star: k_double_star.max(k_star),
    })
}

/// Both evaluations of the Orlicz norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrliczNorm {
    /// Amemiya value at `k*`.
    pub value: f64,
    pub k: KInterval,
    /// Minimum found by golden-section search over `k`.
    pub golden_value: f64,
    pub golden_k: f64,
}

impl OrliczNorm {
    pub fn relative_gap(&self) -> f64 {
        (self.value - self.golden_value).abs() / self.value.abs().max(f64::MIN_POSITIVE)
    }
}

/// Orlicz norm; fails if the two routes disagree by more than `tol_norm`.
pub fn orlicz_norm(cfg: &SpaceConfig, x: &StepFunction) -> Result<f64, NormError> {
    cfg.check_domain(x)?;
    orlicz_of_profile(cfg, &WeightedProfile::of(cfg, x))
}

pub fn orlicz_of_profile(cfg: &SpaceConfig, prof: &WeightedProfile) -> Result<f64, NormError> {
    if prof.is_zero() {
        return Ok(0.0);
    }
    let n = orlicz_norm_detailed_of_profile(cfg, prof)?;
    if n.relative_gap() > cfg.tol_norm {
        return Err(NormError::RouteDisagreement {
            k_route: n.value,
            golden_route: n.golden_value,
        });
    }
    Ok(n.value)
}

/// Orlicz norm with both routes and `K(x)` reported, without the agreement check.
pub fn orlicz_norm_detailed(cfg: &SpaceConfig, x: &StepFunction) -> Result<OrliczNorm, NormError> {
    cfg.check_domain(x)?;
    orlicz_norm_detailed_of_profile(cfg, &WeightedProfile::of(cfg, x))
}

pub fn orlicz_norm_detailed_of_profile(
    cfg: &SpaceConfig,
    prof: &WeightedProfile,
) -> Result<OrliczNorm, NormError> {
    let k = k_interval_of_profile(cfg, prof)?;
    let value = prof.amemiya(cfg.phi(), k.k_star);
    let (golden_k, golden_value) = golden_amemiya(cfg, prof);
    Ok(OrliczNorm {
        value,
        k,
        golden_value,
        golden_k,
    })
}

/// Golden-section minimization of the Amemiya function in `ln k` over
/// `[GOLDEN_K_FLOOR, k_horizon]`.
pub fn golden_amemiya(cfg: &SpaceConfig, prof: &WeightedProfile) -> (f64, f64) {
    let phi = cfg.phi();
    let (lk, fv) = golden_section_min(
        log(GOLDEN_K_FLOOR),
        log(cfg.k_horizon),
        GOLDEN_LOG_TOL,
        |lk| prof.amemiya(phi, exp(lk)),
    );
    (exp(lk), fv)
}

/// `(1 + ρ(kx))/k`.
pub fn amemiya(cfg: &SpaceConfig, x: &StepFunction, k: f64) -> f64 {
    WeightedProfile::of(cfg, x).amemiya(cfg.phi(), k)
}

/// `∫ x* y* ω` for `y` in the unit ball of the ψ-modular. By the dual
/// description of the Orlicz norm the result never exceeds `‖x‖°`.
pub fn dual_pairing(
    cfg: &SpaceConfig,
    x: &StepFunction,
    y: &StepFunction,
) -> Result<f64, NormError> {
    cfg.check_domain(x)?;
    cfg.check_domain(y)?;
    let rho = modular_of(cfg.psi(), &cfg.weight, y);
    if rho > 1.0 + cfg.tol_norm {
        return Err(NormError::OutsideDualBall { rho });
    }
    Ok(rearrangement_pairing(
        &cfg.weight,
        &x.rearrange(),
        &y.rearrange(),
    ))
}

/// `∫ r₁ r₂ ω` for two decreasing rearrangements.
pub fn rearrangement_pairing(weight: &Weight, r1: &Rearrangement, r2: &Rearrangement) -> f64 {
    let mut cuts: Vec<f64> = r1
        .intervals()
        .chain(r2.intervals())
        .flat_map(|(a, b, _)| [a, b])
        .collect();
    cuts.sort_by(|l, r| l.partial_cmp(r).unwrap_or(core::cmp::Ordering::Equal));
    cuts.dedup();
    cuts.windows(2)
        .map(|w| {
            let v = r1.value_at(w[0]) * r2.value_at(w[0]);
            if v == 0.0 {
                0.0
            } else {
                v * weight.mass(w[0], w[1])
            }
        })
        .sum()
}

/// `ρ(x) ≤ ‖x‖°` for `‖x‖° ≤ 1`, with `tol_norm` slack.
pub fn check_property_i(cfg: &SpaceConfig, x: &StepFunction) -> Result<bool, NormError> {
    let norm = orlicz_norm(cfg, x)?;
    if norm > 1.0 + cfg.tol_norm {
        return Err(NormError::NormAboveOne { norm });
    }
    Ok(modular(cfg, x) <= norm + cfg.tol_norm)
}
