//! Orlicz functions, their right derivatives and complementary functions.
//!
//! An Orlicz function φ is convex, even, vanishes only at zero and satisfies
//! `φ(u)/u → 0` at zero and `φ(u)/u → ∞` at infinity. Parametric families carry
//! closed forms for φ, its right derivative `p`, the complementary function
//! `ψ(v) = sup_u {uv − φ(u)}` and the Δ₂ classification. Tabulated functions are
//! conjugated numerically through a monotone inversion of `p`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use libm::{expm1, log1p, pow};
use thiserror::Error;

use crate::solve::{bisect_switch, bracket_switch, Bracket};

/// Default search horizon for numeric inversion of a right derivative.
pub const DEFAULT_INVERSION_HORIZON: f64 = 1e12;

/// Relative precision used for the inner inversions of numeric conjugates.
const INNER_REL_TOL: f64 = 4.0 * f64::EPSILON;

/// Below this argument the exponential and logarithmic families switch to
/// their Taylor series to avoid cancellation.
const SERIES_CUTOFF: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrliczError {
    #[error("invalid parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("invalid derivative table: {0}")]
    InvalidTable(String),
    #[error("argument must be non-negative, got {0}")]
    NegativeArgument(f64),
    #[error("horizon exceeded: right derivative stays <= {value} up to horizon {horizon}")]
    HorizonExceeded { horizon: f64, value: f64 },
}

/// Family tag of an [`OrliczFunction`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyTag {
    Power,
    ExpMinusLinear,
    LogLinear,
    PiecewiseTabulated,
    NumericConjugate,
}

impl FamilyTag {
    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::Power => "power",
            FamilyTag::ExpMinusLinear => "exp_minus_linear",
            FamilyTag::LogLinear => "log_linear",
            FamilyTag::PiecewiseTabulated => "tabulated",
            FamilyTag::NumericConjugate => "numeric_conjugate",
        }
    }
}

/// Right derivative given by knots `(u, p(u))` with linear interpolation.
///
/// The first knot is `(0, 0)`. Two knots sharing an abscissa encode a jump of
/// `p`; the later knot is the right limit and is the value taken at the jump.
/// Past the last knot `p` continues with the slope of the last segment, which
/// must be finite and positive so that `φ(u)/u → ∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeTable {
    knots: Vec<(f64, f64)>,
    /// φ at each knot.
    integral: Vec<f64>,
    tail_slope: f64,
}

impl DerivativeTable {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self, OrliczError> {
        let bad = |msg: &str| Err(OrliczError::InvalidTable(String::from(msg)));
        if knots.len() < 2 {
            return bad("need at least two knots");
        }
        if knots[0] != (0.0, 0.0) {
            return bad("first knot must be (0, 0)");
        }
        if !(knots[1].0 > 0.0 && knots[1].1 > 0.0) {
            return bad("second knot must have u > 0 and p > 0");
        }
        for w in knots.windows(2) {
            let ((u0, p0), (u1, p1)) = (w[0], w[1]);
            if !(u1.is_finite() && p1.is_finite()) {
                return bad("knots must be finite");
            }
            if u1 < u0 || p1 < p0 {
                return Err(OrliczError::InvalidTable(format!(
                    "knots must be non-decreasing in u and p: ({u0}, {p0}) then ({u1}, {p1})"
                )));
            }
            if u1 == u0 && p1 == p0 {
                return bad("duplicate knot");
            }
        }
        for w in knots.windows(3) {
            if w[0].0 == w[1].0 && w[1].0 == w[2].0 {
                return bad("at most two knots may share an abscissa");
            }
        }
        let n = knots.len();
        let (ua, pa) = knots[n - 2];
        let (ub, pb) = knots[n - 1];
        if !(ub > ua && pb > pa) {
            return bad("last segment must have finite positive slope");
        }
        let tail_slope = (pb - pa) / (ub - ua);
        let mut integral = Vec::with_capacity(n);
        integral.push(0.0);
        for i in 1..n {
            let (u0, p0) = knots[i - 1];
            let (u1, p1) = knots[i];
            integral.push(integral[i - 1] + 0.5 * (u1 - u0) * (p0 + p1));
        }
        Ok(Self {
            knots,
            integral,
            tail_slope,
        })
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    /// Index of the last knot with abscissa `<= u` (right-continuous choice).
    fn segment(&self, u: f64) -> usize {
        self.knots.partition_point(|k| k.0 <= u) - 1
    }

    fn derivative(&self, u: f64) -> f64 {
        let i = self.segment(u);
        let (ui, pi) = self.knots[i];
        if i + 1 == self.knots.len() {
            return pi + self.tail_slope * (u - ui);
        }
        let (uj, pj) = self.knots[i + 1];
        pi + (pj - pi) * (u - ui) / (uj - ui)
    }

    fn value(&self, u: f64) -> f64 {
        let i = self.segment(u);
        let (ui, pi) = self.knots[i];
        self.integral[i] + 0.5 * (u - ui) * (pi + self.derivative(u))
    }
}

/// An Orlicz function. Arguments are taken in absolute value (φ is even).
#[derive(Debug, Clone, PartialEq)]
pub enum OrliczFunction {
    /// `|u|^p / p` with `p > 1`.
    Power { exponent: f64 },
    /// `e^{|u|} − |u| − 1`.
    ExpMinusLinear,
    /// `(1+|u|) ln(1+|u|) − |u|`.
    LogLinear,
    /// φ integrated from a piecewise-linear right derivative.
    Tabulated(DerivativeTable),
    /// `ψ(v) = v q(v) − φ(q(v))` with `q` the right-continuous inverse of the
    /// primal derivative, found by bisection on `[0, horizon]`.
    NumericConjugate {
        primal: Box<OrliczFunction>,
        horizon: f64,
    },
}

fn exp_minus_linear(u: f64) -> f64 {
    if u < SERIES_CUTOFF {
        // Σ_{k≥2} u^k / k!
        let mut term = 0.5 * u * u;
        let mut sum = term;
        for k in 3..24 {
            term *= u / k as f64;
            sum += term;
        }
        sum
    } else {
        expm1(u) - u
    }
}

fn log_linear(v: f64) -> f64 {
    if v < SERIES_CUTOFF {
        // Σ_{k≥2} (−1)^k v^k / (k(k−1))
        let mut pow_v = v * v;
        let mut sum = 0.0;
        let mut sign = 1.0;
        for k in 2..40 {
            let kf = k as f64;
            sum += sign * pow_v / (kf * (kf - 1.0));
            pow_v *= v;
            sign = -sign;
        }
        sum
    } else {
        (1.0 + v) * log1p(v) - v
    }
}

impl OrliczFunction {
    pub fn power(exponent: f64) -> Result<Self, OrliczError> {
        if !(exponent.is_finite() && exponent > 1.0) {
            return Err(OrliczError::InvalidParameter {
                name: "exponent",
                value: exponent,
            });
        }
        Ok(OrliczFunction::Power { exponent })
    }

    pub fn tabulated(knots: Vec<(f64, f64)>) -> Result<Self, OrliczError> {
        DerivativeTable::new(knots).map(OrliczFunction::Tabulated)
    }

    pub fn family(&self) -> FamilyTag {
        match self {
            OrliczFunction::Power { .. } => FamilyTag::Power,
            OrliczFunction::ExpMinusLinear => FamilyTag::ExpMinusLinear,
            OrliczFunction::LogLinear => FamilyTag::LogLinear,
            OrliczFunction::Tabulated(_) => FamilyTag::PiecewiseTabulated,
            OrliczFunction::NumericConjugate { .. } => FamilyTag::NumericConjugate,
        }
    }

    /// Whether φ, ψ and the Δ₂ verdict are available in closed form.
    pub fn is_parametric(&self) -> bool {
        matches!(
            self,
            OrliczFunction::Power { .. }
                | OrliczFunction::ExpMinusLinear
                | OrliczFunction::LogLinear
        )
    }

    /// `φ(|u|)`. Overflow saturates to `+∞`; so does a numeric conjugate
    /// evaluated past its inversion horizon (use [`Self::try_eval`] to see the
    /// horizon error instead).
    pub fn eval(&self, u: f64) -> f64 {
        self.try_eval(u).unwrap_or(f64::INFINITY)
    }

    pub fn try_eval(&self, u: f64) -> Result<f64, OrliczError> {
        let u = u.abs();
        if u == 0.0 {
            return Ok(0.0);
        }
        if u == f64::INFINITY {
            return Ok(f64::INFINITY);
        }
        Ok(match self {
            OrliczFunction::Power { exponent } => pow(u, *exponent) / exponent,
            OrliczFunction::ExpMinusLinear => exp_minus_linear(u),
            OrliczFunction::LogLinear => log_linear(u),
            OrliczFunction::Tabulated(t) => t.value(u),
            OrliczFunction::NumericConjugate { primal, horizon } => {
                let q = invert_derivative(primal, u, *horizon)?;
                let val = u * q - primal.eval(q);
                // cancellation can leave a tiny negative residue
                val.max(0.0)
            }
        })
    }

    /// Right derivative `p(u)` for `u >= 0`.
    pub fn right_derivative(&self, u: f64) -> Result<f64, OrliczError> {
        if u < 0.0 || u.is_nan() {
            return Err(OrliczError::NegativeArgument(u));
        }
        self.try_derivative(u)
    }

    /// `p(|u|)`, saturating to `+∞` like [`Self::eval`].
    pub fn derivative(&self, u: f64) -> f64 {
        self.try_derivative(u.abs()).unwrap_or(f64::INFINITY)
    }

    fn try_derivative(&self, u: f64) -> Result<f64, OrliczError> {
        if u == 0.0 {
            return Ok(0.0);
        }
        if u == f64::INFINITY {
            return Ok(f64::INFINITY);
        }
        Ok(match self {
            OrliczFunction::Power { exponent } => pow(u, exponent - 1.0),
            OrliczFunction::ExpMinusLinear => expm1(u),
            OrliczFunction::LogLinear => log1p(u),
            OrliczFunction::Tabulated(t) => t.derivative(u),
            OrliczFunction::NumericConjugate { primal, horizon } => {
                invert_derivative(primal, u, *horizon)?
            }
        })
    }

    /// The unique `v >= 0` with `φ(v) = w`.
    pub fn inverse(&self, w: f64, rel_tol: f64) -> Result<f64, OrliczError> {
        if w < 0.0 || w.is_nan() {
            return Err(OrliczError::NegativeArgument(w));
        }
        if w == 0.0 {
            return Ok(0.0);
        }
        if w == f64::INFINITY {
            return Ok(f64::INFINITY);
        }
        if let OrliczFunction::Power { exponent } = self {
            return Ok(pow(exponent * w, 1.0 / exponent));
        }
        let mut failure = None;
        let mut reaches = |v: f64| match self.try_eval(v) {
            Ok(val) => val >= w,
            Err(e) => {
                failure.get_or_insert(e);
                true
            }
        };
        let (lo, hi) = match bracket_switch(1.0, f64::MAX, &mut reaches) {
            Bracket::Found { lo, hi } => (lo, hi),
            Bracket::AlwaysHigh { floor } => (0.0, floor),
            Bracket::Exhausted { limit } => return Ok(limit),
        };
        let (_, hi) = bisect_switch(lo, hi, rel_tol.max(INNER_REL_TOL), &mut reaches);
        match self.try_eval(hi) {
            Ok(_) => Ok(hi),
            Err(e) => Err(failure.unwrap_or(e)),
        }
    }

    /// Complementary function with the default inversion horizon.
    pub fn conjugate(&self) -> ConjugatePair {
        self.conjugate_with_horizon(DEFAULT_INVERSION_HORIZON)
    }

    /// Complementary function. Parametric families map to their closed-form
    /// partners; everything else gets a [`OrliczFunction::NumericConjugate`]
    /// that inverts `p` on `[0, horizon]`.
    pub fn conjugate_with_horizon(&self, horizon: f64) -> ConjugatePair {
        let psi = match self {
            OrliczFunction::Power { exponent } => OrliczFunction::Power {
                exponent: exponent / (exponent - 1.0),
            },
            OrliczFunction::ExpMinusLinear => OrliczFunction::LogLinear,
            OrliczFunction::LogLinear => OrliczFunction::ExpMinusLinear,
            other => OrliczFunction::NumericConjugate {
                primal: Box::new(other.clone()),
                horizon,
            },
        };
        ConjugatePair {
            phi: self.clone(),
            psi,
        }
    }

    /// Δ₂ classification with the default grid options.
    pub fn classify_delta2(&self, regime: Regime) -> Classification {
        self.classify_delta2_with(regime, &Delta2Options::default())
    }

    pub fn classify_delta2_with(&self, regime: Regime, opts: &Delta2Options) -> Classification {
        let u0 = opts.u0_for(regime);
        let exact =
            |holds: bool, constant: Option<f64>, observed: Option<(f64, f64)>| Classification {
                regime,
                holds,
                constant,
                heuristic: false,
                u0,
                horizon: None,
                observed,
            };
        match self {
            OrliczFunction::Power { exponent } => exact(true, Some(pow(2.0, *exponent)), None),
            // φ(2u)/φ(u) ≤ 4 everywhere, with the supremum approached at 0
            OrliczFunction::LogLinear => exact(true, Some(4.0), None),
            OrliczFunction::ExpMinusLinear => {
                let u = 20.0;
                exact(false, None, Some((u, self.eval(2.0 * u) / self.eval(u))))
            }
            _ => {
                let n = opts.points.max(2);
                let (a, b) = (libm::log(u0), libm::log(opts.horizon));
                let mut worst = (u0, 0.0f64);
                for i in 0..n {
                    let u = libm::exp(a + (b - a) * i as f64 / (n - 1) as f64);
                    let den = self.eval(u);
                    let ratio = if den > 0.0 {
                        self.eval(2.0 * u) / den
                    } else {
                        f64::INFINITY
                    };
                    if !(ratio <= worst.1) {
                        worst = (u, ratio);
                    }
                }
                let holds = worst.1 <= opts.ratio_ceiling;
                Classification {
                    regime,
                    holds,
                    constant: holds.then_some(worst.1),
                    heuristic: true,
                    u0,
                    horizon: Some(opts.horizon),
                    observed: Some(worst),
                }
            }
        }
    }
}

/// `q(v) = sup{u >= 0 : p(u) <= v}`, the right-continuous inverse of `p`.
fn invert_derivative(primal: &OrliczFunction, v: f64, horizon: f64) -> Result<f64, OrliczError> {
    let p_h = primal.derivative(horizon);
    if p_h <= v {
        return Err(OrliczError::HorizonExceeded { horizon, value: v });
    }
    let (_, hi) = bisect_switch(0.0, horizon, INNER_REL_TOL, |u| primal.derivative(u) > v);
    Ok(hi)
}

/// Which range of arguments a Δ₂ condition quantifies over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Regime {
    /// `φ(2u) <= Kφ(u)` for all `u`.
    AllValues,
    /// `φ(2u) <= Kφ(u)` for `u >= u₀`.
    LargeValues,
}

/// Grid knobs for the heuristic Δ₂ verdict on non-parametric functions.
#[derive(Debug, Clone, PartialEq)]
pub struct Delta2Options {
    /// Lower end of the grid; `None` picks `1e-8` for all values and `1` for
    /// large values.
    pub u0: Option<f64>,
    pub horizon: f64,
    pub points: usize,
    /// Largest sampled ratio `φ(2u)/φ(u)` still reported as Δ₂.
    pub ratio_ceiling: f64,
}

impl Default for Delta2Options {
    fn default() -> Self {
        Self {
            u0: None,
            horizon: 1e8,
            points: 64,
            ratio_ceiling: 1024.0,
        }
    }
}

impl Delta2Options {
    pub fn u0_for(&self, regime: Regime) -> f64 {
        self.u0.unwrap_or(match regime {
            Regime::AllValues => 1e-8,
            Regime::LargeValues => 1.0,
        })
    }
}

/// Outcome of a Δ₂ test.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub regime: Regime,
    pub holds: bool,
    /// A valid constant `K` when the condition holds.
    pub constant: Option<f64>,
    /// Set when the verdict comes from a finite grid rather than the family table.
    pub heuristic: bool,
    pub u0: f64,
    /// Upper grid end for heuristic verdicts.
    pub horizon: Option<f64>,
    /// `(u, φ(2u)/φ(u))` at the worst sampled point, or a witness of failure.
    pub observed: Option<(f64, f64)>,
}

/// An Orlicz function together with its complementary function.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugatePair {
    pub phi: OrliczFunction,
    pub psi: OrliczFunction,
}

impl ConjugatePair {
    /// `p(u)`, the right derivative of φ.
    pub fn p(&self, u: f64) -> f64 {
        self.phi.derivative(u)
    }

    /// `q(v)`, the right derivative of ψ.
    pub fn q(&self, v: f64) -> f64 {
        self.psi.derivative(v)
    }

    /// `ψ⁻¹(w)`.
    pub fn psi_inverse(&self, w: f64, rel_tol: f64) -> Result<f64, OrliczError> {
        self.psi.inverse(w, rel_tol)
    }

    /// ∇₂ for φ, answered as Δ₂ for ψ.
    pub fn classify_nabla2(&self, regime: Regime, opts: &Delta2Options) -> Classification {
        self.psi.classify_delta2_with(regime, opts)
    }
}
