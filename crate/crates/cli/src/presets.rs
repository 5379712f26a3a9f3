// SPDX-License-Identifier: Apache-2.0

//! Ready-made run sets behind the `figure-*` subcommands.

use serde_json::{json, Value};
use sipf_core::purcell::{default_band, lifetime_bandwidth_fom};
use sipf_core::sipf::{band_edges, filter_response};
use sipf_core::{find_dips, Dip, FrequencyGrid, Quantity, ScenarioKind, SipfSpec, SweepResult};

use crate::config::{OutputFormat, RunConfig};
use crate::error::{CliError, Result};
use crate::output::format_value;
use crate::plot::{Figure, Series};
use crate::run::{Artifact, RunOutput, Runner};

pub const PRESETS: [&str; 4] = ["figure-1c", "figure-1d", "figure-2", "figure-3b"];

/// Trace lengths swept by the standalone preset (m).
pub const TRACE_LENGTHS: [f64; 4] = [5e-3, 10e-3, 15e-3, 20e-3];

#[derive(Debug, Clone)]
pub struct PresetReport {
    pub runs: Vec<RunOutput>,
    /// Combined figures and tables beyond the per-run files.
    pub extra: Vec<Artifact>,
    pub summary: Value,
}

fn base(
    name: &str,
    kind: ScenarioKind,
    quantities: Vec<Quantity>,
    start: f64,
    stop: f64,
) -> RunConfig {
    let mut cfg = RunConfig {
        name: name.into(),
        ..RunConfig::default()
    };
    cfg.scenario.kind = kind;
    cfg.sweep.start = start;
    cfg.sweep.stop = stop;
    cfg.output.quantities = quantities;
    cfg
}

fn lifetime_config(name: &str, kind: ScenarioKind, q: Option<f64>, start: f64) -> RunConfig {
    let mut cfg = base(
        name,
        kind,
        vec![
            Quantity::T1Purcell,
            Quantity::T1Total,
            Quantity::ReY,
            Quantity::Detuning,
        ],
        start,
        7e9,
    );
    cfg.scenario.q_intrinsic = q;
    cfg.sweep.include_intrinsic = q.is_some();
    cfg.output.formats = vec![OutputFormat::Csv, OutputFormat::Plot];
    cfg
}

fn point_value(sweep: &SweepResult, f: f64, q: Quantity) -> Option<f64> {
    sweep
        .points
        .iter()
        .find(|p| p.frequency == f)
        .and_then(|p| q.value(p))
}

fn dips_json(dips: &[Dip]) -> Value {
    Value::Array(
        dips.iter()
            .map(|d| json!({"frequency_hz": d.frequency, "t1_s": d.value}))
            .collect(),
    )
}

/// Lowest-frequency lifetime dip inside the filter stopband: the first
/// package-trace resonance.
pub fn trace_dip(sweep: &SweepResult, filter: &SipfSpec) -> Option<Dip> {
    let edges = band_edges(filter, 1e8, 8e9).ok()?;
    let (entry, exit) = (edges.first()?.frequency, edges.get(1)?.frequency);
    find_dips(sweep, Quantity::T1Purcell)
        .into_iter()
        .find(|d| d.frequency >= entry && d.frequency <= exit)
}

/// Dips away from the readout resonance (more than 20κ from `f_r`).
pub fn off_resonance_dips(run: &RunOutput) -> Vec<Dip> {
    let s = &run.config.scenario;
    find_dips(&run.sweep, Quantity::T1Purcell)
        .into_iter()
        .filter(|d| (d.frequency - s.f_r).abs() > 20.0 * s.kappa)
        .collect()
}

fn overlay(
    title: &str,
    runs: &[&RunOutput],
    q: Quantity,
    label: impl Fn(&RunOutput) -> String,
) -> Figure {
    Figure {
        title: title.into(),
        y_label: "T1 (μs)".into(),
        log_y: true,
        y_scale: 1e6,
        series: runs
            .iter()
            .map(|r| Series {
                label: label(r),
                csv_column: 2 + r
                    .config
                    .output
                    .quantities
                    .iter()
                    .position(|x| *x == q)
                    .unwrap_or(0),
                csv_file: format!("{}.csv", r.config.name),
                xs: r.sweep.frequencies(),
                ys: r.sweep.values(q),
            })
            .collect(),
    }
}

fn figure_artifacts(name: &str, fig: &Figure) -> [Artifact; 2] {
    [
        Artifact {
            file_name: format!("{name}.gp"),
            contents: fig.gnuplot(&format!("{name}_gnuplot.svg")),
        },
        Artifact {
            file_name: format!("{name}.svg"),
            contents: fig.svg(),
        },
    ]
}

fn summary_artifact(summary: &Value) -> Artifact {
    Artifact {
        file_name: "summary.json".into(),
        contents: serde_json::to_string_pretty(summary).expect("summary serializes") + "\n",
    }
}

/// Filter transmission and reflection from DC to 10 GHz.
pub fn figure_1c(runner: &mut Runner) -> Result<PresetReport> {
    let mut cfg = base(
        "figure-1c",
        ScenarioKind::NoFilter,
        vec![Quantity::S11, Quantity::S21],
        1e3,
        10e9,
    );
    cfg.sweep.step = 5e6;
    let run = runner.run(&cfg)?;
    let filter = run.resolved.filter;
    let edges = band_edges(&filter, 1e8, 8e9).map_err(CliError::core("band edges"))?;
    let probe = FrequencyGrid::new(vec![1e3, 6.5e9]).map_err(CliError::core("probe grid"))?;
    let probe = filter_response(&filter, &probe).map_err(CliError::core("filter response"))?;
    let [entry, exit, ..] = edges[..] else {
        return Err(CliError::Core {
            context: "band edges".into(),
            source: sipf_core::Error::CalibrationFailure(format!(
                "expected a stopband, found {} edges",
                edges.len()
            )),
        });
    };
    let stop = FrequencyGrid::linear(entry.frequency, exit.frequency, 1e6)
        .map_err(CliError::core("stopband grid"))?;
    let stop = filter_response(&filter, &stop).map_err(CliError::core("filter response"))?;
    let (f_min, min_db) = stop
        .minimum(Quantity::S21)
        .expect("stopband grid is non-empty");
    let summary = json!({
        "preset": "figure-1c",
        "section_lengths_m": [filter.len_lo, filter.len_hi],
        "total_length_m": filter.total_length(),
        "band_edges_hz": edges.iter().map(|e| e.frequency).collect::<Vec<_>>(),
        "stopband_min_s21_db": min_db,
        "stopband_min_frequency_hz": f_min,
        "s21_db_at_1khz": probe.points[0].sparams.map(|s| s.s21_db()),
        "s21_db_at_6_5ghz": probe.points[1].sparams.map(|s| s.s21_db()),
    });
    Ok(PresetReport {
        runs: vec![run],
        extra: vec![summary_artifact(&summary)],
        summary,
    })
}

/// Lifetime with and without the on-chip filter, 4–7 GHz.
pub fn figure_1d(runner: &mut Runner) -> Result<PresetReport> {
    let q = Some(1e6);
    let bare = runner.run(&lifetime_config(
        "no-filter",
        ScenarioKind::NoFilter,
        q,
        4e9,
    ))?;
    let sipf = runner.run(&lifetime_config(
        "integrated-sipf",
        ScenarioKind::IntegratedSipf,
        q,
        4e9,
    ))?;
    let mut nb = lifetime_config(
        "integrated-sipf-no-wirebond",
        ScenarioKind::IntegratedSipf,
        q,
        4e9,
    );
    nb.scenario.wirebond = 0.0;
    let no_bond = runner.run(&nb)?;

    let band = default_band();
    let sc = sipf.resolved.scenario;
    let fom_purcell =
        lifetime_bandwidth_fom(&sc, band, false).map_err(CliError::core("figure of merit"))?;
    let fom_total =
        lifetime_bandwidth_fom(&sc, band, true).map_err(CliError::core("figure of merit"))?;
    let summary = json!({
        "preset": "figure-1d",
        "t1_purcell_no_filter_5ghz_s": point_value(&bare.sweep, 5e9, Quantity::T1Purcell),
        "t1_purcell_sipf_5ghz_s": point_value(&sipf.sweep, 5e9, Quantity::T1Purcell),
        "t1_total_sipf_5ghz_s": point_value(&sipf.sweep, 5e9, Quantity::T1Total),
        "off_resonance_dips": dips_json(&off_resonance_dips(&sipf)),
        "off_resonance_dips_without_wirebond": dips_json(&off_resonance_dips(&no_bond)),
        "fom_band_hz": [band.0, band.1],
        "fom_purcell_us_mhz": fom_purcell.value,
        "fom_purcell_divergent": fom_purcell.divergent,
        "fom_total_us_mhz": fom_total.value,
        "fom_total_divergent": fom_total.divergent,
    });
    let runs = vec![bare, sipf, no_bond];
    let fig = overlay(
        "lifetime with and without the integrated filter",
        &runs.iter().collect::<Vec<_>>(),
        Quantity::T1Purcell,
        |r| r.config.name.clone(),
    );
    let mut extra = figure_artifacts("figure-1d", &fig).to_vec();
    extra.push(summary_artifact(&summary));
    Ok(PresetReport {
        runs,
        extra,
        summary,
    })
}

/// Standalone filter behind package traces of several lengths, 1–7 GHz.
pub fn figure_2(runner: &mut Runner) -> Result<PresetReport> {
    let mut runs = Vec::new();
    for len in TRACE_LENGTHS {
        let mut cfg = lifetime_config(
            &format!("trace-{}mm", (len * 1e3).round()),
            ScenarioKind::StandaloneSipf,
            None,
            1e9,
        );
        cfg.trace.length = len;
        runs.push(runner.run(&cfg)?);
    }
    let mut table = String::from("trace_length_m,dip_frequency_hz,t1_purcell_s,trace_dip\n");
    let mut rows = Vec::new();
    for r in &runs {
        let main = trace_dip(&r.sweep, &r.resolved.filter);
        for d in off_resonance_dips(r) {
            let is_main = main.is_some_and(|m| m.frequency == d.frequency);
            table.push_str(&format!(
                "{},{},{},{}\n",
                format_value(r.config.trace.length),
                format_value(d.frequency),
                format_value(d.value),
                is_main
            ));
        }
        rows.push(json!({
            "trace_length_m": r.config.trace.length,
            "trace_dip_hz": main.map(|d| d.frequency),
            "dips_below_4ghz": dips_json(&off_resonance_dips(r).into_iter().filter(|d| d.frequency < 4e9).collect::<Vec<_>>()),
        }));
    }
    let summary = json!({"preset": "figure-2", "lengths": rows});
    let fig = overlay(
        "standalone filter behind a package trace",
        &runs.iter().collect::<Vec<_>>(),
        Quantity::T1Purcell,
        |r| format!("{} mm", r.config.trace.length * 1e3),
    );
    let mut extra = figure_artifacts("figure-2", &fig).to_vec();
    extra.push(Artifact {
        file_name: "dips.csv".into(),
        contents: table,
    });
    extra.push(summary_artifact(&summary));
    Ok(PresetReport {
        runs,
        extra,
        summary,
    })
}

/// Standalone filter with a 10 mm trace against no filter, 4–7 GHz.
pub fn figure_3b(runner: &mut Runner) -> Result<PresetReport> {
    let q = Some(2.4e6);
    let bare = runner.run(&lifetime_config(
        "no-filter",
        ScenarioKind::NoFilter,
        q,
        4e9,
    ))?;
    let standalone = runner.run(&lifetime_config(
        "standalone-sipf",
        ScenarioKind::StandaloneSipf,
        q,
        4e9,
    ))?;
    let summary = json!({
        "preset": "figure-3b",
        "t1_purcell_no_filter_5ghz_s": point_value(&bare.sweep, 5e9, Quantity::T1Purcell),
        "t1_purcell_standalone_5ghz_s": point_value(&standalone.sweep, 5e9, Quantity::T1Purcell),
        "t1_total_standalone_5ghz_s": point_value(&standalone.sweep, 5e9, Quantity::T1Total),
        "off_resonance_dips": dips_json(&off_resonance_dips(&standalone)),
    });
    let runs = vec![bare, standalone];
    let fig = overlay(
        "standalone filter lifetime",
        &runs.iter().collect::<Vec<_>>(),
        Quantity::T1Total,
        |r| r.config.name.clone(),
    );
    let mut extra = figure_artifacts("figure-3b", &fig).to_vec();
    extra.push(summary_artifact(&summary));
    Ok(PresetReport {
        runs,
        extra,
        summary,
    })
}

pub fn run_preset(name: &str, runner: &mut Runner) -> Result<PresetReport> {
    match name {
        "figure-1c" => figure_1c(runner),
        "figure-1d" => figure_1d(runner),
        "figure-2" => figure_2(runner),
        "figure-3b" => figure_3b(runner),
        other => Err(CliError::Core {
            context: "preset".into(),
            source: sipf_core::Error::Usage(format!(
                "unknown preset `{other}`; expected one of {}",
                PRESETS.join(", ")
            )),
        }),
    }
}
