#![allow(dead_code)]

use olk_core::weight::WeightPiece;
use olk_core::{Domain, OrliczFunction, Piece, SpaceConfig, StepFunction, Weight, WeightFamily};
use proptest::prelude::*;

pub const CELL: f64 = 1.0 / 1024.0;

/// Step functions with lattice breakpoints: `(gap, len, value)` triples laid
/// out left to right, all inside `[0, cells·2⁻¹⁰)`.
pub fn step_fn(domain: Domain, cells: u32) -> impl Strategy<Value = StepFunction> {
    prop::collection::vec((0u32..64, 1u32..128, -8i32..=8), 1..8).prop_map(move |raw| {
        let mut at = 0u32;
        let mut pieces = Vec::new();
        for (gap, len, v) in raw {
            let start = at + gap;
            if start + len > cells {
                break;
            }
            pieces.push(Piece::new(start as f64 * CELL, len as f64 * CELL, v as f64));
            at = start + len;
        }
        StepFunction::new(domain, pieces).unwrap()
    })
}

pub fn nonzero_step_fn(domain: Domain, cells: u32) -> impl Strategy<Value = StepFunction> {
    step_fn(domain, cells).prop_filter("non-zero", |x| !x.is_zero())
}

pub fn unit_fn() -> impl Strategy<Value = StepFunction> {
    nonzero_step_fn(Domain::Unit, 1024)
}

pub fn half_line_fn() -> impl Strategy<Value = StepFunction> {
    nonzero_step_fn(Domain::HalfLine, 4096)
}

pub fn kinked_table() -> OrliczFunction {
    OrliczFunction::tabulated(vec![
        (0.0, 0.0),
        (1.0, 1.0),
        (1.0, 2.0),
        (3.0, 2.0),
        (4.0, 3.0),
    ])
    .unwrap()
}

/// The four Orlicz functions used throughout the tests.
pub fn phis() -> Vec<(&'static str, OrliczFunction)> {
    vec![
        ("power2", OrliczFunction::power(2.0).unwrap()),
        ("power3", OrliczFunction::power(3.0).unwrap()),
        ("exp_minus_linear", OrliczFunction::ExpMinusLinear),
        ("log_linear", OrliczFunction::LogLinear),
    ]
}

pub fn weight(family: WeightFamily, domain: Domain) -> Weight {
    Weight::new(family, domain).unwrap()
}

/// One weight of every family on each domain.
pub fn weights() -> Vec<(&'static str, Weight)> {
    let step = |domain| {
        let pieces = vec![
            WeightPiece {
                len: 0.25,
                value: 2.0,
            },
            WeightPiece {
                len: 0.5,
                value: 1.0,
            },
            WeightPiece {
                len: 0.25,
                value: 0.5,
            },
        ];
        weight(WeightFamily::Step(pieces), domain)
    };
    vec![
        (
            "constant/unit",
            weight(WeightFamily::Constant { c: 1.0 }, Domain::Unit),
        ),
        (
            "constant/inf",
            weight(WeightFamily::Constant { c: 1.0 }, Domain::HalfLine),
        ),
        (
            "truncated/unit",
            weight(
                WeightFamily::TruncatedConstant {
                    c: 1.0,
                    alpha: 0.75,
                },
                Domain::Unit,
            ),
        ),
        (
            "truncated/inf",
            weight(
                WeightFamily::TruncatedConstant { c: 2.0, alpha: 0.5 },
                Domain::HalfLine,
            ),
        ),
        (
            "power_decay/unit",
            weight(WeightFamily::PowerDecay { a: 0.5 }, Domain::Unit),
        ),
        (
            "power_decay/inf",
            weight(WeightFamily::PowerDecay { a: 0.25 }, Domain::HalfLine),
        ),
        (
            "exp/unit",
            weight(WeightFamily::ExpDecay { lambda: 1.0 }, Domain::Unit),
        ),
        (
            "exp/inf",
            weight(WeightFamily::ExpDecay { lambda: 1.0 }, Domain::HalfLine),
        ),
        ("step/unit", step(Domain::Unit)),
        ("step/inf", step(Domain::HalfLine)),
    ]
}

pub fn space(phi: OrliczFunction, family: WeightFamily, domain: Domain) -> SpaceConfig {
    SpaceConfig::new(phi, weight(family, domain))
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
