//! Text formatting and JSON renderings of results.
//!
//! JSON numbers carry full `f64` precision; non-finite values become the
//! strings `"inf"`, `"-inf"` and `"nan"`.

use olk_core::geometry::{LunsEstimate, Predictions, SearchStats, Witness};
use olk_core::norms::OrliczNorm;
use olk_core::orlicz::Classification;
use olk_core::stepfn::Level;
use olk_core::{Domain, KInterval, OrliczFunction, SpaceConfig, StepFunction, WeightFamily};
use serde_json::{json, Map, Value};

/// Significant digits in text output.
pub const SIG_DIGITS: usize = 12;

/// `x` with [`SIG_DIGITS`] significant digits; fixed notation for moderate
/// magnitudes, scientific otherwise.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return format!("{:.*}", SIG_DIGITS - 1, 0.0);
    }
    // exponent after rounding to SIG_DIGITS
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::String(fmt_sig(x))
    }
}

pub fn domain_name(d: Domain) -> &'static str {
    match d {
        Domain::Unit => "unit",
        Domain::HalfLine => "half_line",
    }
}

pub fn step_json(x: &StepFunction) -> Value {
    json!({
        "domain": domain_name(x.domain()),
        "pieces": x.pieces().iter()
            .map(|p| json!([num(p.start), num(p.len), num(p.value)]))
            .collect::<Vec<_>>(),
    })
}

pub fn phi_json(f: &OrliczFunction) -> Value {
    match f {
        OrliczFunction::Power { exponent } => json!({"family": "power", "p": num(*exponent)}),
        OrliczFunction::ExpMinusLinear => json!({"family": "exp_minus_linear"}),
        OrliczFunction::LogLinear => json!({"family": "log_linear"}),
        OrliczFunction::Tabulated(t) => json!({
            "family": "tabulated",
            "knots": t.knots().iter().map(|&(u, p)| json!([num(u), num(p)])).collect::<Vec<_>>(),
        }),
        OrliczFunction::NumericConjugate { primal, horizon } => json!({
            "family": "numeric_conjugate",
            "primal": phi_json(primal),
            "horizon": num(*horizon),
        }),
    }
}

/// One-line description of an Orlicz function.
pub fn phi_text(f: &OrliczFunction) -> String {
    match f {
        OrliczFunction::Power { exponent } => format!("power(p={})", fmt_sig(*exponent)),
        OrliczFunction::ExpMinusLinear => "exp_minus_linear".into(),
        OrliczFunction::LogLinear => "log_linear".into(),
        OrliczFunction::Tabulated(t) => format!("tabulated({} knots)", t.knots().len()),
        OrliczFunction::NumericConjugate { primal, .. } => {
            format!("numeric_conjugate of {}", phi_text(primal))
        }
    }
}

pub fn space_json(cfg: &SpaceConfig) -> Value {
    let omega = match cfg.weight.family() {
        WeightFamily::Constant { c } => json!({"family": "constant", "c": num(*c)}),
        WeightFamily::TruncatedConstant { c, alpha } => {
            json!({"family": "truncated_constant", "c": num(*c), "alpha": num(*alpha)})
        }
        WeightFamily::PowerDecay { a } => json!({"family": "power_decay", "a": num(*a)}),
        WeightFamily::ExpDecay { lambda } => json!({"family": "exp", "lambda": num(*lambda)}),
        WeightFamily::Step(pieces) => json!({
            "family": "step",
            "pieces": pieces.iter().map(|p| json!([num(p.len), num(p.value)])).collect::<Vec<_>>(),
        }),
    };
    json!({
        "gamma": domain_name(cfg.domain()),
        "phi": phi_json(cfg.phi()),
        "psi": phi_json(cfg.psi()),
        "omega": omega,
        "tol_root": num(cfg.tol_root),
        "tol_norm": num(cfg.tol_norm),
        "k_horizon": num(cfg.k_horizon),
    })
}

pub fn k_json(k: &KInterval) -> Value {
    json!({"k_star": num(k.k_star), "k_double_star": num(k.k_double_star)})
}

pub fn orlicz_json(o: &OrliczNorm) -> Value {
    json!({
        "value": num(o.value),
        "k": k_json(&o.k),
        "golden_value": num(o.golden_value),
        "golden_k": num(o.golden_k),
    })
}

pub fn levels_json(levels: &[Level]) -> Value {
    Value::Array(
        levels
            .iter()
            .map(|l| json!({"value": num(l.value), "measure": num(l.measure)}))
            .collect(),
    )
}

pub fn classification_json(c: &Classification) -> Value {
    json!({
        "regime": format!("{:?}", c.regime),
        "holds": c.holds,
        "constant": c.constant.map(num),
        "heuristic": c.heuristic,
        "u0": num(c.u0),
        "horizon": c.horizon.map(num),
        "observed": c.observed.map(|(u, r)| json!({"u": num(u), "ratio": num(r)})),
    })
}

pub fn predictions_json(p: &Predictions) -> Value {
    let mut m = Map::new();
    for (prop, v) in p {
        m.insert(
            prop.name().into(),
            json!({"status": v.status.name(), "reason": v.reason, "heuristic": v.heuristic}),
        );
    }
    Value::Object(m)
}

pub fn witness_json(w: &Witness) -> Value {
    json!({
        "x": step_json(&w.x),
        "y": step_json(&w.y),
        "amplitude": num(w.amplitude),
        "norms": {
            "x": num(w.norms[0]),
            "y": num(w.norms[1]),
            "half_sum": num(w.norms[2]),
            "half_difference": num(w.norms[3]),
        },
        "max_deviation": num(w.max_deviation()),
    })
}

pub fn search_json(s: &SearchStats) -> Value {
    json!({
        "seed": s.seed,
        "samples": s.samples,
        "max_defect": s.max_defect.map(num),
        "argmax_index": s.argmax_index,
        "argmax_pair": s.argmax_pair.as_ref().map(|(x, y)| json!({"x": step_json(x), "y": step_json(y)})),
        "violations": s.violations,
        "strictly_below_one": s.strictly_below_one(),
    })
}

pub fn luns_json(e: &LunsEstimate) -> Value {
    json!({
        "seed": e.seed,
        "samples": e.samples,
        "delta_hat": num(e.delta_hat),
        "max_defect": num(e.max_defect),
        "argmax_index": e.argmax_index,
        "xi1_hat": num(e.xi1_hat),
        "xi2_hat": num(e.xi2_hat),
        "exploratory": e.exploratory,
    })
}
