// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use sipf_core::elliptic::elliptic_k;
use sipf_core::purcell::{
    env_admittance, purcell_t1, total_t1, Environment, Lifetime, QubitSpec, ReadoutSpec, Scenario,
};
use sipf_core::sipf::{band_edges, calibrate_section_lengths, SipfSpec, Transition};
use sipf_core::{
    abcd_to_sparams, cascade, cpw_characteristics, lumped_abcd, tline_abcd, CpwGeometry,
    LumpedElement, LumpedKind, TLineSpec, TwoPortABCD,
};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn frequency() -> impl Strategy<Value = f64> {
    1e6..20e9
}

fn lossless_line() -> impl Strategy<Value = TLineSpec> {
    (5.0..200.0, 1.0..12.0, 0.0..50e-3).prop_map(|(z0, eps, len)| TLineSpec::lossless(z0, eps, len))
}

fn lossy_line() -> impl Strategy<Value = TLineSpec> {
    (lossless_line(), 0.0..50.0, 0.0..0.05).prop_map(|(l, r, td)| l.with_loss(r, td))
}

fn reactive_element() -> impl Strategy<Value = LumpedElement> {
    prop_oneof![
        (0.01e-9..20e-9).prop_map(|v| LumpedElement::new(LumpedKind::SeriesInductor, v)),
        (1e-15..10e-12).prop_map(|v| LumpedElement::new(LumpedKind::SeriesCapacitor, v)),
        (0.01e-9..20e-9).prop_map(|v| LumpedElement::new(LumpedKind::ShuntInductor, v)),
        (1e-15..10e-12).prop_map(|v| LumpedElement::new(LumpedKind::ShuntCapacitor, v)),
    ]
}

fn any_element() -> impl Strategy<Value = LumpedElement> {
    prop_oneof![
        reactive_element(),
        (0.1..500.0).prop_map(|v| LumpedElement::new(LumpedKind::SeriesResistor, v)),
        (0.1..5000.0).prop_map(|v| LumpedElement::new(LumpedKind::ShuntResistor, v)),
    ]
}

#[derive(Debug, Clone)]
enum Part {
    Line(TLineSpec),
    Lumped(LumpedElement),
}

impl Part {
    fn abcd(&self, f: f64) -> TwoPortABCD {
        match self {
            Part::Line(l) => tline_abcd(l, f).unwrap(),
            Part::Lumped(e) => lumped_abcd(e, f).unwrap(),
        }
    }
}

fn lossless_chain() -> impl Strategy<Value = Vec<Part>> {
    prop::collection::vec(
        prop_oneof![
            lossless_line().prop_map(Part::Line),
            reactive_element().prop_map(Part::Lumped)
        ],
        1..8,
    )
}

fn lossy_chain() -> impl Strategy<Value = Vec<Part>> {
    prop::collection::vec(
        prop_oneof![
            lossy_line().prop_map(Part::Line),
            any_element().prop_map(Part::Lumped)
        ],
        1..8,
    )
}

fn chain_abcd(parts: &[Part], f: f64) -> TwoPortABCD {
    cascade(&parts.iter().map(|p| p.abcd(f)).collect::<Vec<_>>()).unwrap()
}

/// Series expansion `K(k) = π/2 Σ [(2n)! / (2²ⁿ n!²)]² k²ⁿ`.
fn elliptic_k_series(k: f64) -> f64 {
    let m = k * k;
    let (mut coeff, mut power, mut sum) = (1.0f64, 1.0f64, 1.0f64);
    for n in 1..20_000 {
        let r = (2 * n - 1) as f64 / (2 * n) as f64;
        coeff *= r * r;
        power *= m;
        let term = coeff * power;
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    PI / 2.0 * sum
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn reciprocity(parts in lossy_chain(), f in frequency()) {
        let m = chain_abcd(&parts, f);
        let scale = (m.a * m.d).norm().max((m.b * m.c).norm()).max(1.0);
        prop_assert!(m.reciprocity_error() <= 1e-9 * scale, "{}", m.reciprocity_error());
    }

    #[test]
    fn lossless_unitarity(parts in lossless_chain(), f in frequency()) {
        let m = chain_abcd(&parts, f);
        let s = abcd_to_sparams(&m, 50.0).unwrap();
        prop_assert!((s.power_sum() - 1.0).abs() <= 1e-9, "{}", s.power_sum());
        let p2 = s.s12.norm_sqr() + s.s22.norm_sqr();
        prop_assert!((p2 - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn lossy_chains_are_passive(parts in lossy_chain(), f in frequency()) {
        let s = abcd_to_sparams(&chain_abcd(&parts, f), 50.0).unwrap();
        prop_assert!(s.power_sum() <= 1.0 + 1e-9);
    }

    #[test]
    fn segment_splitting(line in lossy_line(), split in 0.0..1.0f64, f in frequency()) {
        let whole = tline_abcd(&line, f).unwrap();
        let first = tline_abcd(&line.with_length(split * line.length), f).unwrap();
        let rest = tline_abcd(&line.with_length((1.0 - split) * line.length), f).unwrap();
        let d = whole.relative_difference(&first.then(&rest), line.z0);
        prop_assert!(d <= 1e-12, "{d}");
    }

    #[test]
    fn cascade_associativity(a in lossy_chain(), b in lossy_chain(), c in lossy_chain(), f in frequency()) {
        let (ma, mb, mc) = (chain_abcd(&a, f), chain_abcd(&b, f), chain_abcd(&c, f));
        let left = ma.then(&mb).then(&mc);
        let right = ma.then(&mb.then(&mc));
        prop_assert!(left.relative_difference(&right, 50.0) <= 1e-12);
    }

    #[test]
    fn cpw_duality_product(w in 1e-6..100e-6, s in 1e-6..100e-6, eps in 1.0..13.0) {
        let g = CpwGeometry::new(w, s, eps);
        let dual = g.complementary();
        let (z, zd) = (cpw_characteristics(&g).unwrap(), cpw_characteristics(&dual).unwrap());
        let want = (30.0 * PI).powi(2) / z.eps_eff;
        prop_assert!((z.z0 * zd.z0 - want).abs() <= 1e-10 * want);
        prop_assert!((dual.complementary().gap_width - s).abs() <= 1e-9 * s);
    }

    #[test]
    fn cpw_impedance_grows_with_gap(w in 1e-6..100e-6, s in 1e-6..100e-6, grow in 1.01..3.0, eps in 1.0..13.0) {
        let narrow = cpw_characteristics(&CpwGeometry::new(w, s, eps)).unwrap();
        let wide = cpw_characteristics(&CpwGeometry::new(w, s * grow, eps)).unwrap();
        prop_assert!(wide.z0 > narrow.z0);
    }

    #[test]
    fn elliptic_agm_matches_series(k in 0.0..0.97f64) {
        let agm = elliptic_k(k).unwrap();
        let series = elliptic_k_series(k);
        prop_assert!((agm - series).abs() <= 1e-10 * series, "{agm} vs {series}");
    }

    #[test]
    fn rate_composition(re_y in 1e-12..1.0, f in 1e9..10e9, q in 1e3..1e8) {
        let qubit = QubitSpec { c_sigma: 70e-15, q_intrinsic: Some(q) };
        let tp = purcell_t1(Complex64::new(re_y, 0.0), f, &qubit).unwrap();
        let total = total_t1(tp, f, &qubit).seconds();
        let intrinsic = q / (2.0 * PI * f);
        prop_assert!(total <= tp.seconds().min(intrinsic));
        prop_assert!(total < tp.seconds() && total < intrinsic);
        prop_assert!((total_t1(Lifetime::Unbounded, f, &qubit).seconds() - intrinsic).abs() <= 1e-15 * intrinsic);
    }
}

fn environment() -> impl Strategy<Value = Environment> {
    prop_oneof![
        Just(Environment::NoFilter),
        Just(Environment::integrated()),
        (1e-3..30e-3).prop_map(Environment::standalone),
        (3e9..8e9).prop_map(Environment::quarter_wave_stub),
        (4e9..8e9).prop_map(Environment::low_q_bandpass),
    ]
}

fn scenario() -> impl Strategy<Value = Scenario> {
    (environment(), 0.0..100e-15, 0.1e-15..100e-15, 0.0..4e-9).prop_map(|(env, ck, cq, lb)| {
        let readout = ReadoutSpec {
            c_kappa: ck,
            c_q: cq,
            ..ReadoutSpec::reference()
        };
        Scenario::new(QubitSpec::reference(), readout, env).with_wirebond(lb)
    })
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn environment_is_passive(sc in scenario(), f in 0.5e9..12e9) {
        if let Ok(y) = env_admittance(&sc, f) {
            prop_assert!(y.re >= -1e-15, "{sc:?} at {f}: {y}");
        }
    }

    #[test]
    fn lossless_detached_chain_has_no_decay(sc in scenario(), f in 0.5e9..12e9) {
        let mut sc = sc;
        sc.readout_mut().unwrap().c_kappa = 0.0;
        if let Ok(y) = env_admittance(&sc, f) {
            prop_assert!(y.re.abs() <= 1e-15, "{y}");
        }
    }
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn band_edge_calibration_round_trip(len_lo in 4e-3..9e-3, len_hi in 4e-3..9e-3) {
        let source = SipfSpec::reference_template().with_lengths(len_lo, len_hi);
        let edges = band_edges(&source, 1e8, 20e9).unwrap();
        let entry = edges.iter().find(|e| e.transition == Transition::StopbandEntry).unwrap().frequency;
        let exit = edges.iter().find(|e| e.transition == Transition::StopbandExit).unwrap().frequency;
        let cal = calibrate_section_lengths(entry, exit, &SipfSpec::reference_template()).unwrap();
        let got = band_edges(&cal, 0.5 * entry, exit + 0.5 * (exit - entry)).unwrap();
        prop_assert!(got.len() >= 2);
        prop_assert!((got[0].frequency - entry).abs() <= 1e6);
        prop_assert!((got[1].frequency - exit).abs() <= 1e6);
        prop_assert!(cal.total_length() <= source.total_length() * (1.0 + 1e-9) + 1e-7);
    }
}
