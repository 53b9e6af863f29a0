mod common;

use common::*;
use olk_core::norms::modular;
use olk_core::{Domain, OrliczFunction, Piece, StepFunction, WeightFamily};
use proptest::prelude::*;

fn breakpoints_and_midpoints(x: &StepFunction) -> Vec<f64> {
    let mut thetas = vec![0.0];
    let mut vals: Vec<f64> = x.pieces().iter().map(|p| p.value.abs()).collect();
    vals.sort_by(f64::total_cmp);
    vals.dedup();
    for w in vals.windows(2) {
        thetas.push(0.5 * (w[0] + w[1]));
    }
    thetas.extend(vals.iter().copied());
    thetas.push(vals.last().copied().unwrap_or(0.0) + 1.0);
    thetas
}

proptest! {
    #[test]
    fn rearrangement_ignores_sign(x in unit_fn()) {
        prop_assert_eq!(x.rearrange(), x.scale(-1.0).rearrange());
        prop_assert_eq!(x.rearrange(), x.abs().rearrange());
    }

    #[test]
    fn rearrangement_ignores_permutation_of_equal_pieces(
        values in prop::collection::vec(-8i32..=8, 1..8),
        len in 1u32..64,
        seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let build = |vals: &[i32]| {
            let pieces = vals
                .iter()
                .enumerate()
                .map(|(i, &v)| Piece::new((i as u32 * len) as f64 * CELL, len as f64 * CELL, v as f64))
                .collect();
            StepFunction::new(Domain::Unit, pieces).unwrap()
        };
        let mut shuffled = values.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(build(&values).rearrange(), build(&shuffled).rearrange());
    }

    #[test]
    fn distribution_round_trip(x in half_line_fn()) {
        let r = x.rearrange();
        for theta in breakpoints_and_midpoints(&x) {
            prop_assert_eq!(r.distribution(theta), x.distribution(theta), "theta = {}", theta);
        }
        prop_assert_eq!(r.total_measure(), x.support_measure());
    }

    #[test]
    fn rearrangement_is_non_increasing_and_equimeasurable(x in unit_fn()) {
        let r = x.rearrange();
        for w in r.levels().windows(2) {
            prop_assert!(w[0].value > w[1].value);
        }
        let back = r.to_step_function(Domain::Unit);
        prop_assert_eq!(back.rearrange(), r);
    }

    #[test]
    fn scaling_scales_levels(x in unit_fn(), c in prop::sample::select(vec![-3.0, -0.5, 0.25, 2.0, 7.0])) {
        let scaled = x.scale(c).rearrange();
        let expected: Vec<(f64, f64)> =
            x.rearrange().levels().iter().map(|l| (l.value * c.abs(), l.measure)).collect();
        let got: Vec<(f64, f64)> = scaled.levels().iter().map(|l| (l.value, l.measure)).collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn modular_is_midpoint_convex(x in unit_fn(), y in unit_fn()) {
        for (name, phi) in phis() {
            let cfg = space(phi, WeightFamily::PowerDecay { a: 0.5 }, Domain::Unit);
            let (mid, _) = x.midpoints(&y).unwrap();
            let lhs = modular(&cfg, &mid);
            let rhs = 0.5 * modular(&cfg, &x) + 0.5 * modular(&cfg, &y);
            prop_assert!(lhs <= rhs * (1.0 + 1e-12), "{}: {} > {}", name, lhs, rhs);
        }
    }

    #[test]
    fn alignment_recovers_the_rearrangement(x in unit_fn()) {
        let (layout, sigma) = x.align().unwrap();
        let r = x.rearrange();
        prop_assert_eq!(layout.rearrange(), r.clone());
        for p in layout.pieces() {
            let t = p.start + 0.5 * p.len;
            let s = sigma.forward(t).unwrap();
            prop_assert_eq!(x.value_at(s).abs(), r.value_at(t));
            prop_assert_eq!(sigma.inverse(s), Some(t));
        }
    }
}

#[test]
fn distribution_of_known_function() {
    let x = StepFunction::new(
        Domain::HalfLine,
        vec![
            Piece::new(0.0, 0.5, 3.0),
            Piece::new(1.0, 2.0, -1.0),
            Piece::new(4.0, f64::INFINITY, 0.5),
        ],
    )
    .unwrap();
    assert_eq!(x.distribution(2.0), 0.5);
    assert_eq!(x.distribution(0.75), 2.5);
    assert_eq!(x.distribution(0.25), f64::INFINITY);
    let r = x.rearrange();
    assert_eq!(r.value_at(0.25), 3.0);
    assert_eq!(r.value_at(1.0), 1.0);
    assert_eq!(r.value_at(1e9), 0.5);
}

#[test]
fn overflowing_modular_is_reported() {
    let x = StepFunction::indicator(Domain::Unit, 0.0, 0.5, 800.0).unwrap();
    assert!(x.compose_phi(&OrliczFunction::ExpMinusLinear).is_err());
    let cfg = space(
        OrliczFunction::ExpMinusLinear,
        WeightFamily::Constant { c: 1.0 },
        Domain::Unit,
    );
    assert_eq!(modular(&cfg, &x), f64::INFINITY);
}
