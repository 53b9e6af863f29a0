//! Non-increasing weights ω with closed-form antiderivatives `W(t) = ∫₀ᵗ ω`.

use alloc::vec::Vec;

use libm::{expm1, pow};
use thiserror::Error;

use crate::stepfn::{Domain, Rearrangement};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeightError {
    #[error("invalid weight parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("invalid step weight: {0}")]
    InvalidStep(&'static str),
    #[error("W({t}) requested beyond the domain end {domain_len}")]
    BeyondDomain { t: f64, domain_len: f64 },
}

/// A constant piece `(len, value)` of a step weight; pieces are laid out
/// consecutively from 0 and the weight vanishes after the last one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightPiece {
    pub len: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightFamily {
    /// `ω ≡ c`.
    Constant {
        c: f64,
    },
    /// `ω = c` on `[0, α)`, zero afterwards.
    TruncatedConstant {
        c: f64,
        alpha: f64,
    },
    /// `ω(t) = (1−a) t^{−a}`, so `W(t) = t^{1−a}`.
    PowerDecay {
        a: f64,
    },
    /// `ω(t) = λ e^{−λt}`.
    ExpDecay {
        lambda: f64,
    },
    Step(Vec<WeightPiece>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Weight {
    family: WeightFamily,
    domain: Domain,
}

fn positive(name: &'static str, value: f64) -> Result<(), WeightError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(WeightError::InvalidParameter { name, value })
    }
}

impl Weight {
    pub fn new(family: WeightFamily, domain: Domain) -> Result<Self, WeightError> {
        match &family {
            WeightFamily::Constant { c } => positive("c", *c)?,
            WeightFamily::TruncatedConstant { c, alpha } => {
                positive("c", *c)?;
                positive("alpha", *alpha)?;
                if *alpha > domain.len() {
                    return Err(WeightError::InvalidParameter {
                        name: "alpha",
                        value: *alpha,
                    });
                }
            }
            WeightFamily::PowerDecay { a } => {
                if !(*a >= 0.0 && *a < 1.0) {
                    return Err(WeightError::InvalidParameter {
                        name: "a",
                        value: *a,
                    });
                }
            }
            WeightFamily::ExpDecay { lambda } => positive("lambda", *lambda)?,
            WeightFamily::Step(pieces) => {
                if pieces.is_empty() {
                    return Err(WeightError::InvalidStep("no pieces"));
                }
                if !(pieces[0].value > 0.0 && pieces[0].value.is_finite()) {
                    return Err(WeightError::InvalidStep("first value must be positive"));
                }
                let mut total = 0.0;
                for (i, p) in pieces.iter().enumerate() {
                    if !(p.len > 0.0) {
                        return Err(WeightError::InvalidStep("lengths must be positive"));
                    }
                    if p.len.is_infinite() && i + 1 != pieces.len() {
                        return Err(WeightError::InvalidStep(
                            "only the last piece may be infinite",
                        ));
                    }
                    if !(p.value >= 0.0) {
                        return Err(WeightError::InvalidStep("values must be non-negative"));
                    }
                    if i > 0 && p.value > pieces[i - 1].value {
                        return Err(WeightError::InvalidStep("values must be non-increasing"));
                    }
                    total += p.len;
                }
                if total > domain.len() {
                    return Err(WeightError::InvalidStep("pieces extend past the domain"));
                }
            }
        }
        Ok(Self { family, domain })
    }

    pub fn family(&self) -> &WeightFamily {
        &self.family
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// `W(t)`; `t = +∞` is allowed on `[0,∞)`.
    pub fn antiderivative(&self, t: f64) -> Result<f64, WeightError> {
        let gamma = self.domain.len();
        if !(t >= 0.0) || t > gamma {
            return Err(WeightError::BeyondDomain {
                t,
                domain_len: gamma,
            });
        }
        Ok(self.w(t))
    }

    /// `W` without the domain check, `t` clamped into `[0, γ]`.
    pub(crate) fn w(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.domain.len());
        if t == 0.0 {
            return 0.0;
        }
        match &self.family {
            WeightFamily::Constant { c } => c * t,
            WeightFamily::TruncatedConstant { c, alpha } => c * t.min(*alpha),
            WeightFamily::PowerDecay { a } => pow(t, 1.0 - a),
            WeightFamily::ExpDecay { lambda } => -expm1(-lambda * t),
            WeightFamily::Step(pieces) => {
                let mut acc = 0.0;
                let mut at = 0.0;
                for p in pieces {
                    if p.value == 0.0 {
                        break;
                    }
                    let end = at + p.len;
                    if t <= end {
                        return acc + p.value * (t - at);
                    }
                    acc += p.value * p.len;
                    at = end;
                }
                acc
            }
        }
    }

    /// `∫_a^b ω` for `a <= b`, exact per family.
    pub fn mass(&self, a: f64, b: f64) -> f64 {
        if let WeightFamily::ExpDecay { lambda } = self.family {
            // e^{−λa} − e^{−λb} without cancellation in W(b) − W(a)
            let a = a.clamp(0.0, self.domain.len());
            let b = b.clamp(0.0, self.domain.len());
            return libm::exp(-lambda * a) * -expm1(-lambda * (b - a));
        }
        let wb = self.w(b);
        if wb.is_infinite() {
            return wb;
        }
        wb - self.w(a)
    }

    /// `W(∞)` (or `W(1)` on the unit interval).
    pub fn tail_mass(&self) -> f64 {
        self.w(self.domain.len())
    }

    /// `α = sup{t : ω(t) > 0}`.
    pub fn alpha(&self) -> f64 {
        match &self.family {
            WeightFamily::TruncatedConstant { alpha, .. } => *alpha,
            WeightFamily::Step(pieces) => pieces
                .iter()
                .take_while(|p| p.value > 0.0)
                .map(|p| p.len)
                .sum(),
            _ => self.domain.len(),
        }
    }

    /// `ω > 0` on all of `[0,γ)`.
    pub fn positive_on_domain(&self) -> bool {
        self.alpha() >= self.domain.len()
    }

    /// Strict monotonicity (equivalently, lower local uniform monotonicity) of
    /// `L_{1,ω}`: ω positive on `[0,γ)` and `W(∞) = ∞` when `γ = ∞`.
    pub fn l1_monotone(&self) -> bool {
        self.positive_on_domain() && (!self.domain.is_infinite() || self.tail_mass().is_infinite())
    }

    /// `∫₀^γ r(t) ω(t) dt` for a decreasing rearrangement `r`.
    pub fn weighted_integral(&self, r: &Rearrangement) -> f64 {
        let mut sum = 0.0;
        for (a, b, v) in r.intervals() {
            let m = self.mass(a, b);
            if m > 0.0 {
                sum += v * m;
            }
        }
        sum
    }
}
