mod common;

use common::*;
use olk_core::norms::{
    amemiya, check_property_i, dual_pairing, k_interval, luxemburg_norm, modular, orlicz_norm,
    orlicz_norm_detailed,
};
use olk_core::sampling::{stream, StepSampler};
use olk_core::{
    Domain, NormError, OrliczFunction, Piece, SpaceConfig, StepFunction, Weight, WeightFamily,
};
use proptest::prelude::*;

const TOL: f64 = 1e-10;

fn spaces(domain: Domain) -> Vec<(String, SpaceConfig)> {
    let mut out = Vec::new();
    for (pn, phi) in phis().into_iter().chain([("kinked_table", kinked_table())]) {
        for (wn, w) in weights() {
            if w.domain() == domain {
                out.push((format!("{pn}/{wn}"), SpaceConfig::new(phi.clone(), w)));
            }
        }
    }
    out
}

/// Test-side ψ⁻¹ by plain bisection on ψ.
fn psi_inverse(psi: &OrliczFunction, w: f64) -> f64 {
    let mut hi = 1.0;
    while psi.eval(hi) < w {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if psi.eval(mid) < w {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

#[test]
fn indicator_norms_match_closed_forms() {
    for domain in [Domain::Unit, Domain::HalfLine] {
        for (name, cfg) in spaces(domain) {
            let mut ts: Vec<f64> = (0..=6).map(|k| 2f64.powi(-k)).collect();
            if domain.is_infinite() && cfg.weight.tail_mass().is_finite() {
                ts.push(f64::INFINITY);
            }
            for t in ts {
                let w = cfg.weight.antiderivative(t).unwrap();
                let x = StepFunction::indicator(domain, 0.0, t, 1.0).unwrap();
                let expected = w * psi_inverse(cfg.psi(), 1.0 / w);
                let got = orlicz_norm(&cfg, &x).unwrap();
                assert!(
                    rel(got, expected) <= 1e-8,
                    "{name}, t={t}: {got} vs {expected}"
                );
                // Luxemburg: 1/φ⁻¹(1/W)
                let lux = luxemburg_norm(&cfg, &x).unwrap();
                let expected_lux = 1.0 / cfg.phi().inverse(1.0 / w, 1e-14).unwrap();
                assert!(
                    rel(lux, expected_lux) <= 1e-9,
                    "{name}, t={t}: {lux} vs {expected_lux}"
                );
            }
        }
    }
}

#[test]
fn infinite_tail_needs_finite_weight_mass() {
    let cfg = space(
        OrliczFunction::power(2.0).unwrap(),
        WeightFamily::Constant { c: 1.0 },
        Domain::HalfLine,
    );
    let x = StepFunction::indicator(Domain::HalfLine, 1.0, f64::INFINITY, 1.0).unwrap();
    assert_eq!(orlicz_norm(&cfg, &x), Err(NormError::OutsideSpace));
    assert_eq!(luxemburg_norm(&cfg, &x), Err(NormError::OutsideSpace));
    assert_eq!(modular(&cfg, &x), f64::INFINITY);
}

fn check_k_flatness(cfg: &SpaceConfig, x: &StepFunction) -> Result<(), TestCaseError> {
    let det = orlicz_norm_detailed(cfg, x).unwrap();
    prop_assert!(
        det.relative_gap() <= 1e-9,
        "routes: {} vs {}",
        det.value,
        det.golden_value
    );
    let k = det.k;
    for i in 0..=8 {
        let kk = k.k_star + (k.k_double_star - k.k_star) * i as f64 / 8.0;
        prop_assert!(
            rel(amemiya(cfg, x, kk), det.value) <= 1e-9,
            "F not flat at {}",
            kk
        );
    }
    let below = amemiya(cfg, x, 0.5 * k.k_star);
    let above = amemiya(cfg, x, 2.0 * k.k_double_star);
    prop_assert!(below > det.value && above > det.value);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn homogeneity(x in unit_fn(), c in prop::sample::select(vec![-4.0, -0.5, 0.125, 3.0, 10.0])) {
        for (name, cfg) in spaces(Domain::Unit) {
            let (l, lc) = (luxemburg_norm(&cfg, &x).unwrap(), luxemburg_norm(&cfg, &x.scale(c)).unwrap());
            prop_assert!(rel(lc, c.abs() * l) <= TOL, "{}: Luxemburg {} vs {}", name, lc, c.abs() * l);
            let (o, oc) = (orlicz_norm(&cfg, &x).unwrap(), orlicz_norm(&cfg, &x.scale(c)).unwrap());
            prop_assert!(rel(oc, c.abs() * o) <= TOL, "{}: Orlicz {} vs {}", name, oc, c.abs() * o);
        }
    }

    #[test]
    fn triangle_inequality(x in half_line_fn(), y in half_line_fn()) {
        let sum = x.add(&y).unwrap();
        for (name, cfg) in spaces(Domain::HalfLine) {
            let ls = luxemburg_norm(&cfg, &sum).unwrap();
            let (lx, ly) = (luxemburg_norm(&cfg, &x).unwrap(), luxemburg_norm(&cfg, &y).unwrap());
            prop_assert!(ls <= (lx + ly) * (1.0 + TOL), "{}: Luxemburg", name);
            let os = orlicz_norm(&cfg, &sum).unwrap();
            let (ox, oy) = (orlicz_norm(&cfg, &x).unwrap(), orlicz_norm(&cfg, &y).unwrap());
            prop_assert!(os <= (ox + oy) * (1.0 + TOL), "{}: Orlicz", name);
        }
    }

    #[test]
    fn luxemburg_orlicz_sandwich(x in unit_fn()) {
        for (name, cfg) in spaces(Domain::Unit) {
            let l = luxemburg_norm(&cfg, &x).unwrap();
            let o = orlicz_norm(&cfg, &x).unwrap();
            prop_assert!(l <= o * (1.0 + TOL) && o <= 2.0 * l * (1.0 + TOL), "{}: {} {}", name, l, o);
            let unit = x.scale(1.0 / o);
            prop_assert!(check_property_i(&cfg, &unit).unwrap(), "{}", name);
        }
    }

    #[test]
    fn amemiya_is_flat_on_k_interval(x in half_line_fn()) {
        for (_, cfg) in spaces(Domain::HalfLine) {
            check_k_flatness(&cfg, &x)?;
        }
    }

    #[test]
    fn scaling_scales_k_interval(x in unit_fn(), c in prop::sample::select(vec![0.25, 2.0, 5.0])) {
        let cfg = space(OrliczFunction::power(3.0).unwrap(), WeightFamily::PowerDecay { a: 0.5 }, Domain::Unit);
        let k = k_interval(&cfg, &x).unwrap();
        let kc = k_interval(&cfg, &x.scale(c)).unwrap();
        prop_assert!(rel(kc.k_star, k.k_star / c) <= 1e-10);
    }
}

#[test]
fn k_interval_can_be_a_nondegenerate_interval() {
    // p is flat at 1 on [1,3]: the crossing level is hit on a whole interval
    let phi =
        OrliczFunction::tabulated(vec![(0.0, 0.0), (1.0, 1.0), (3.0, 1.0), (4.0, 2.0)]).unwrap();
    let cfg = SpaceConfig::new(phi, weight(WeightFamily::Constant { c: 2.0 }, Domain::Unit));
    let x = StepFunction::indicator(Domain::Unit, 0.0, 1.0, 1.0).unwrap();
    let k = k_interval(&cfg, &x).unwrap();
    assert!(!k.is_point(1e-6));
    let cases = (0..=4).map(|i| k.k_star + (k.k_double_star - k.k_star) * i as f64 / 4.0);
    let f0 = amemiya(&cfg, &x, k.k_star);
    for kk in cases {
        assert!(rel(amemiya(&cfg, &x, kk), f0) <= 1e-12);
    }
}

/// `K` of `χ_[0,t)` scaled to norm 1 by the closed form, for shrinking t.
/// (Unscaled indicators of tiny sets can have `k*` beyond `k_horizon`.)
fn unit_indicator_k(cfg: &SpaceConfig, t: f64) -> (f64, f64) {
    let w = cfg.weight.antiderivative(t).unwrap();
    let c = 1.0 / (w * psi_inverse(cfg.psi(), 1.0 / w));
    let x = StepFunction::indicator(cfg.domain(), 0.0, t, c).unwrap();
    let k = k_interval(cfg, &x).unwrap();
    (k.k_star, k.k_double_star)
}

fn random_unit_vectors(cfg: &SpaceConfig, n: u64) -> Vec<StepFunction> {
    let s = StepSampler::new(cfg.domain());
    (0..n)
        .map(|i| {
            let x = s.sample(&mut stream(11, i));
            x.scale(1.0 / orlicz_norm(cfg, &x).unwrap())
        })
        .collect()
}

#[test]
fn k_star_margin_under_delta2() {
    for phi in [
        OrliczFunction::power(2.0).unwrap(),
        OrliczFunction::LogLinear,
    ] {
        let cfg = SpaceConfig::new(
            phi.clone(),
            weight(WeightFamily::Constant { c: 1.0 }, Domain::Unit),
        );
        let min_k = random_unit_vectors(&cfg, 200)
            .iter()
            .map(|x| k_interval(&cfg, x).unwrap().k_star)
            .fold(f64::INFINITY, f64::min);
        let indicator_min = (0..20)
            .map(|j| unit_indicator_k(&cfg, 2f64.powi(-j)).0)
            .fold(f64::INFINITY, f64::min);
        let margin = min_k.min(indicator_min) - 1.0;
        println!("{phi:?}: empirical k* margin {margin:.6}");
        assert!(margin > 0.1, "{phi:?}: margin {margin}");
    }
}

#[test]
fn k_star_tends_to_one_without_delta2() {
    let cfg = space(
        OrliczFunction::ExpMinusLinear,
        WeightFamily::Constant { c: 1.0 },
        Domain::Unit,
    );
    let ks: Vec<f64> = (0..40)
        .step_by(4)
        .map(|j| unit_indicator_k(&cfg, 2f64.powi(-j)).0)
        .collect();
    println!("ExpMinusLinear k*: {ks:?}");
    for w in ks.windows(2) {
        assert!(w[1] < w[0], "k* not decreasing: {ks:?}");
    }
    assert!(ks.iter().all(|&k| k > 1.0));
}

#[test]
fn k_double_star_bounded_iff_psi_delta2() {
    let bounded = |phi: OrliczFunction| {
        let cfg = space(phi, WeightFamily::Constant { c: 1.0 }, Domain::Unit);
        let samples = random_unit_vectors(&cfg, 200);
        let max_sample = samples
            .iter()
            .map(|x| k_interval(&cfg, x).unwrap().k_double_star)
            .fold(0.0, f64::max);
        let max_ind = (0..40)
            .map(|j| unit_indicator_k(&cfg, 2f64.powi(-j)).1)
            .fold(0.0, f64::max);
        max_sample.max(max_ind)
    };
    let p2 = bounded(OrliczFunction::power(2.0).unwrap());
    let eml = bounded(OrliczFunction::ExpMinusLinear);
    println!("max k** bounds: power2 {p2:.6}, exp_minus_linear {eml:.6}");
    assert!(p2 <= 2.0 + 1e-9);
    assert!(eml.is_finite());

    // ψ = e^v − v − 1 fails Δ₂: k** grows on shrinking indicators
    let cfg = space(
        OrliczFunction::LogLinear,
        WeightFamily::Constant { c: 1.0 },
        Domain::Unit,
    );
    let ks: Vec<f64> = (0..40)
        .step_by(4)
        .map(|j| unit_indicator_k(&cfg, 2f64.powi(-j)).1)
        .collect();
    println!("LogLinear k**: {ks:?}");
    for w in ks.windows(2) {
        assert!(w[1] > w[0], "k** not increasing: {ks:?}");
    }
}

#[test]
fn dual_pairing_never_exceeds_the_norm() {
    let w = weight(WeightFamily::PowerDecay { a: 0.5 }, Domain::Unit);
    for phi in [
        OrliczFunction::power(3.0).unwrap(),
        OrliczFunction::LogLinear,
        kinked_table(),
    ] {
        let cfg = SpaceConfig::new(phi.clone(), w.clone());
        let dual = SpaceConfig::new(cfg.psi().clone(), w.clone());
        let s = StepSampler::new(Domain::Unit);
        let x = s.sample(&mut stream(3, 0));
        let norm = orlicz_norm(&cfg, &x).unwrap();
        let mut best: f64 = 0.0;
        for i in 1..=1000 {
            let y = s.sample(&mut stream(3, i));
            let y = y.scale(1.0 / luxemburg_norm(&dual, &y).unwrap());
            let pairing = dual_pairing(&cfg, &x, &y).unwrap();
            assert!(pairing <= norm * (1.0 + TOL), "{phi:?}: {pairing} > {norm}");
            best = best.max(pairing);
        }
        if phi == kinked_table() {
            // p jumps, so p(k*|x|) can leave the dual ball
            continue;
        }
        // y = p(k*|x|) attains it
        let k = k_interval(&cfg, &x).unwrap().k_star;
        let y0 = x.abs().map_values(|v| cfg.pair.p(k * v));
        let attained = dual_pairing(&cfg, &x, &y0).unwrap();
        assert!(rel(attained, norm) <= 1e-8, "{phi:?}: {attained} vs {norm}");
        assert!(best <= attained * (1.0 + TOL));
    }
}

#[test]
fn alignment_with_a_non_family_weight() {
    // ω(t) = 1 − t on [0,1): W(t) = t − t²/2, integrated by hand over the
    // layout produced by `align`.
    let big_w = |t: f64| t - 0.5 * t * t;
    let x = StepFunction::new(
        Domain::Unit,
        vec![
            Piece::new(0.0, 0.25, 1.0),
            Piece::new(0.5, 0.125, -3.0),
            Piece::new(0.75, 0.25, 2.0),
        ],
    )
    .unwrap();
    let (layout, sigma) = x.align().unwrap();
    let by_layout: f64 = layout
        .pieces()
        .iter()
        .map(|p| p.value * (big_w(p.end()) - big_w(p.start)))
        .sum();
    let by_levels: f64 = x
        .rearrange()
        .intervals()
        .map(|(a, b, v)| v * (big_w(b) - big_w(a)))
        .sum();
    assert_eq!(by_layout, by_levels);
    assert_eq!(
        by_layout,
        3.0 * big_w(0.125) + 2.0 * (big_w(0.375) - big_w(0.125)) + (big_w(0.625) - big_w(0.375))
    );
    assert!(!sigma.is_identity());
    assert_eq!(sigma.forward(0.0), Some(0.5));
}

#[test]
fn weight_of_the_exp_family_on_the_tail() {
    let w: Weight = weight(WeightFamily::ExpDecay { lambda: 2.0 }, Domain::HalfLine);
    let cfg = SpaceConfig::new(OrliczFunction::power(2.0).unwrap(), w);
    let x = StepFunction::indicator(Domain::HalfLine, 3.0, f64::INFINITY, 1.0).unwrap();
    // W-mass of the level set [0,∞) is W(∞) = 1
    let expected = 1.0 * psi_inverse(cfg.psi(), 1.0);
    assert!(rel(orlicz_norm(&cfg, &x).unwrap(), expected) <= 1e-10);
}
