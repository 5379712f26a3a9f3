// SPDX-License-Identifier: Apache-2.0

use proptest::prelude::*;
use sipf_cli::config::{to_text, OutputFormat, RunConfig};
use sipf_cli::output::{emit_csv, emit_touchstone};
use sipf_cli::parse_config;
use sipf_cli::presets::{figure_2, trace_dip};
use sipf_cli::run::{manifest_json, Runner};
use sipf_core::sipf::filter_response;
use sipf_core::{FrequencyGrid, Quantity, ScenarioKind, SipfSpec};

/// `(frequency, [S11, S21, S12, S22])` with each entry as `(re, im)`.
type Row = (f64, [(f64, f64); 4]);

/// Minimal Touchstone v1 reader: comment lines, one option line, then
/// `f re im re im re im re im` rows in RI format.
fn read_touchstone(text: &str) -> (f64, Vec<Row>) {
    let mut z_ref = None;
    let mut rows = Vec::new();
    for line in text.lines() {
        let line = line.split('!').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if let Some(opts) = line.strip_prefix('#') {
            let toks: Vec<String> = opts.split_whitespace().map(str::to_uppercase).collect();
            assert_eq!(&toks[..4], ["HZ", "S", "RI", "R"]);
            z_ref = Some(toks[4].parse().unwrap());
            continue;
        }
        let v: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse().unwrap())
            .collect();
        assert_eq!(v.len(), 9);
        rows.push((
            v[0],
            [(v[1], v[2]), (v[3], v[4]), (v[5], v[6]), (v[7], v[8])],
        ));
    }
    (z_ref.expect("option line"), rows)
}

fn cfg_strategy() -> impl Strategy<Value = RunConfig> {
    let kinds = prop::sample::select(ScenarioKind::ALL.to_vec());
    let quantities = prop::sample::subsequence(
        vec![
            Quantity::S11,
            Quantity::S21,
            Quantity::ReY,
            Quantity::T1Purcell,
            Quantity::T1Total,
            Quantity::Detuning,
        ],
        1..=6,
    );
    let formats = prop::sample::subsequence(
        vec![
            OutputFormat::Csv,
            OutputFormat::Touchstone,
            OutputFormat::Plot,
        ],
        1..=3,
    );
    (
        (
            kinds,
            10e-15..500e-15,
            prop::option::of(1e4..1e8),
            3e9..9e9,
            30.0..80.0,
            1.0..12.0,
        ),
        (
            1e5..5e7,
            prop::option::of((1e-15..80e-15, 1e-15..80e-15)),
            0.0..5e-9,
            prop::sample::select(vec![3usize, 5, 7, 9]),
        ),
        (
            1e9..3e9,
            3.5e9..6e9,
            prop::option::of((1e-3..20e-3, 1e-3..20e-3)),
            0.0..1e-2,
            1e-3..30e-3,
        ),
        (
            0.5e9..3e9,
            1e6..1e8,
            any::<bool>(),
            quantities,
            formats,
            "[a-z][a-z0-9-]{0,12}",
        ),
    )
        .prop_map(|(a, b, c, d)| {
            let mut cfg = RunConfig::default();
            let (kind, cs, q, fr, z0, eps) = a;
            let (kappa, caps, bond, n) = b;
            let (entry, exit, lens, tan, trace) = c;
            let (start, step, intr, quantities, formats, name) = d;
            cfg.name = name;
            cfg.scenario.kind = kind;
            cfg.scenario.c_sigma = cs;
            cfg.scenario.q_intrinsic = q;
            cfg.scenario.f_r = fr;
            cfg.scenario.z0_res = z0;
            cfg.scenario.eps_eff_res = eps;
            cfg.scenario.kappa = kappa;
            cfg.scenario.c_kappa = caps.map(|c| c.0);
            cfg.scenario.c_q = caps.map(|c| c.1);
            cfg.scenario.wirebond = bond;
            cfg.filter.sections = n;
            cfg.filter.stopband_entry = entry;
            cfg.filter.stopband_exit = exit;
            cfg.filter.len_lo = lens.map(|l| l.0);
            cfg.filter.len_hi = lens.map(|l| l.1);
            cfg.filter.tan_delta = tan;
            cfg.trace.length = trace;
            cfg.sweep.start = start;
            cfg.sweep.stop = start + 2e9;
            cfg.sweep.step = step;
            cfg.sweep.include_intrinsic = intr;
            cfg.output.quantities = quantities;
            cfg.output.formats = formats;
            cfg
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn config_text_round_trips(cfg in cfg_strategy()) {
        let text = to_text(&cfg);
        let back = parse_config(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
        prop_assert_eq!(back, cfg);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn touchstone_round_trips(len_lo in 2e-3..12e-3, len_hi in 2e-3..12e-3, n in prop::sample::select(vec![3usize, 5, 7]), tan in 0.0..1e-2) {
        let mut spec = SipfSpec::reference_template().with_sections(n).with_lengths(len_lo, len_hi);
        spec.tan_delta = tan;
        let grid = FrequencyGrid::linear(1e8, 8e9, 4e8).unwrap();
        let sweep = filter_response(&spec, &grid).unwrap();
        let (z_ref, rows) = read_touchstone(&emit_touchstone(&sweep, 50.0).unwrap());
        prop_assert_eq!(z_ref, 50.0);
        prop_assert_eq!(rows.len(), sweep.len());
        for ((f, s), p) in rows.iter().zip(&sweep.points) {
            let sp = p.sparams.unwrap();
            prop_assert!((f - p.frequency).abs() <= 1e-8 * p.frequency);
            let s21 = (s[1].0 * s[1].0 + s[1].1 * s[1].1).sqrt();
            prop_assert!((s21 - sp.s21.norm()).abs() < 1e-8);
            for (read, want) in s.iter().zip([sp.s11, sp.s21, sp.s12, sp.s22]) {
                prop_assert!((read.0 - want.re).abs() < 1e-8 && (read.1 - want.im).abs() < 1e-8);
            }
        }
    }
}

fn small_config(kind: ScenarioKind) -> RunConfig {
    let mut cfg = RunConfig {
        name: "small".into(),
        ..RunConfig::default()
    };
    cfg.scenario.kind = kind;
    cfg.sweep.start = 4e9;
    cfg.sweep.stop = 7e9;
    cfg.sweep.step = 10e6;
    cfg.output.quantities = vec![Quantity::S21, Quantity::T1Purcell, Quantity::ReY];
    cfg
}

#[test]
fn csv_lifetimes_match_conductance() {
    let cfg = small_config(ScenarioKind::IntegratedSipf);
    let out = Runner::new().run(&cfg).unwrap();
    let text = emit_csv(&out.sweep, &cfg.output.quantities).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let (t1_col, y_col) = (col("t1_purcell_s"), col("re_y_s"));
    let mut checked = 0;
    for rec in reader.records() {
        let rec = rec.unwrap();
        let (t1, y) = (&rec[t1_col], &rec[y_col]);
        if t1.is_empty() || t1 == "inf" {
            continue;
        }
        let (t1, y): (f64, f64) = (t1.parse().unwrap(), y.parse().unwrap());
        let expect = cfg.scenario.c_sigma / y;
        assert!((t1 - expect).abs() <= 1e-12 * expect, "{t1} vs {expect}");
        checked += 1;
    }
    assert!(checked > 300);
}

#[test]
fn outputs_are_deterministic() {
    for kind in [ScenarioKind::NoFilter, ScenarioKind::StandaloneSipf] {
        let cfg = small_config(kind);
        let a = Runner::new().run(&cfg).unwrap();
        let b = Runner::new().run(&cfg).unwrap();
        assert_eq!(a.parameter_hash, b.parameter_hash);
        assert_eq!(a.artifacts, b.artifacts);
        let ma = manifest_json(std::slice::from_ref(&a), &[], 1);
        let mb = manifest_json(std::slice::from_ref(&b), &[], 2);
        let strip = |m: &str| {
            m.lines()
                .filter(|l| !l.contains("created_unix_s"))
                .collect::<Vec<_>>()
                .join("\n")
        };
        assert_ne!(ma, mb);
        assert_eq!(strip(&ma), strip(&mb));
    }
}

#[test]
fn written_files_match_between_runs() {
    let cfg = small_config(ScenarioKind::IntegratedSipf);
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        sipf_cli::run(&cfg, Some(d.path())).unwrap();
    }
    for file in ["small.csv", "small.s2p", "small.svg", "small.gp"] {
        let a = std::fs::read(dirs[0].path().join(file)).unwrap();
        let b = std::fs::read(dirs[1].path().join(file)).unwrap();
        assert_eq!(a, b, "{file}");
    }
    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dirs[0].path().join("manifest.json")).unwrap(),
    )
    .unwrap();
    let files = manifest["files"].as_array().unwrap();
    assert_eq!(files.len(), 4);
    let s2p = std::fs::read_to_string(dirs[0].path().join("small.s2p")).unwrap();
    let hash = manifest["runs"][0]["parameter_hash"].as_str().unwrap();
    assert!(s2p.contains(hash));
}

#[test]
fn trace_table_dips_move_down() {
    let report = figure_2(&mut Runner::new()).unwrap();
    let dips: Vec<f64> = report
        .runs
        .iter()
        .map(|r| trace_dip(&r.sweep, &r.resolved.filter).unwrap().frequency)
        .collect();
    assert!(dips.windows(2).all(|w| w[1] < w[0]), "{dips:?}");
    let table = &report
        .extra
        .iter()
        .find(|a| a.file_name == "dips.csv")
        .unwrap()
        .contents;
    assert_eq!(table.lines().filter(|l| l.ends_with(",true")).count(), 4);
}
