// SPDX-License-Identifier: Apache-2.0

//! Resolve a configuration into core models, execute its sweeps and render
//! the output artifacts.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use sipf_core::purcell::{
    calibrate_readout, retune_resonator, t1_sweep, Calibration, Environment, ReadoutSpec, Scenario,
};
use sipf_core::sipf::{
    calibrate_section_lengths_with, filter_response_at, LengthCalibrationOptions,
};
use sipf_core::{
    FrequencyGrid, Quantity, QubitSpec, ScenarioKind, SipfSpec, SweepPoint, SweepResult, TLineSpec,
};

use crate::config::{to_text, OutputFormat, RunConfig};
use crate::error::{CliError, Result};
use crate::output::{column_name, emit_csv, emit_touchstone_with};
use crate::plot::{Figure, Series};

/// Core models a configuration resolves to.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resolved {
    pub filter: SipfSpec,
    pub scenario: Scenario,
    /// Present when the coupling capacitors were calibrated.
    pub calibration: Option<Calibration>,
}

/// A file to be written, relative to the output directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub file_name: String,
    pub contents: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub config: RunConfig,
    pub resolved: Resolved,
    pub sweep: SweepResult,
    /// Digest of the resolved parameters; carried in file headers.
    pub parameter_hash: String,
    pub artifacts: Vec<Artifact>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn is_lifetime_quantity(q: Quantity) -> bool {
    !matches!(q, Quantity::S11 | Quantity::S21)
}

/// Caches calibrations across runs that share readout or filter settings.
#[derive(Debug, Default)]
pub struct Runner {
    filters: Vec<(String, SipfSpec)>,
    readouts: Vec<(String, Calibration)>,
}

impl Runner {
    pub fn new() -> Self {
        Self::default()
    }

    fn filter(&mut self, cfg: &RunConfig) -> Result<SipfSpec> {
        let f = &cfg.filter;
        let template = SipfSpec {
            n_sections: f.sections,
            z_lo: f.z_lo,
            z_hi: f.z_hi,
            eps_eff: f.eps_eff,
            ..SipfSpec::reference_template()
        };
        let lossless = match (f.len_lo, f.len_hi) {
            (Some(lo), Some(hi)) => template.with_lengths(lo, hi),
            _ => {
                let key = format!(
                    "{template:?}{:?}{:?}",
                    (f.stopband_entry, f.stopband_exit),
                    cfg.tolerance
                );
                if let Some((_, spec)) = self.filters.iter().find(|(k, _)| *k == key) {
                    *spec
                } else {
                    let opts = LengthCalibrationOptions {
                        edge_tolerance: cfg.tolerance.length_edge_tolerance,
                        ..LengthCalibrationOptions::default()
                    };
                    let spec = calibrate_section_lengths_with(
                        f.stopband_entry,
                        f.stopband_exit,
                        &template,
                        &opts,
                    )
                    .map_err(CliError::core("filter section-length calibration"))?;
                    self.filters.push((key, spec));
                    spec
                }
            }
        };
        Ok(SipfSpec {
            r_per_len: f.r_per_len,
            tan_delta: f.tan_delta,
            ..lossless
        })
    }

    fn readout(
        &mut self,
        cfg: &RunConfig,
        qubit: QubitSpec,
    ) -> Result<(ReadoutSpec, Option<Calibration>)> {
        let s = &cfg.scenario;
        let mut readout = ReadoutSpec::new(
            s.f_r,
            s.z0_res,
            s.eps_eff_res,
            s.c_kappa.unwrap_or(ReadoutSpec::reference().c_kappa),
            s.c_q.unwrap_or(ReadoutSpec::reference().c_q),
            s.kappa,
        );
        let template = Scenario {
            qubit: QubitSpec {
                q_intrinsic: None,
                ..qubit
            },
            readout: Some(readout),
            environment: Environment::NoFilter,
            wirebond_l: s.wirebond,
            z_env: s.z_env,
        };
        if let (Some(_), Some(_)) = (s.c_kappa, s.c_q) {
            let mut sc = template;
            retune_resonator(&mut sc).map_err(CliError::core("resonator retune"))?;
            readout = sc.readout.expect("template has a readout");
            return Ok((readout, None));
        }
        let key = format!("{template:?}{:?}", (s.t1_anchor_frequency, s.t1_anchor));
        let cal = match self.readouts.iter().find(|(k, _)| *k == key) {
            Some((_, cal)) => *cal,
            None => {
                let cal =
                    calibrate_readout(&template, s.kappa, (s.t1_anchor_frequency, s.t1_anchor))
                        .map_err(CliError::core("readout calibration"))?;
                self.readouts.push((key, cal));
                cal
            }
        };
        Ok((cal.scenario.readout.expect("calibrated readout"), Some(cal)))
    }

    pub fn resolve(&mut self, cfg: &RunConfig) -> Result<Resolved> {
        let s = &cfg.scenario;
        let filter = self.filter(cfg)?;
        let qubit = QubitSpec {
            c_sigma: s.c_sigma,
            q_intrinsic: s.q_intrinsic,
        };
        qubit.validate().map_err(CliError::core("qubit"))?;
        let (readout, calibration) = self.readout(cfg, qubit)?;
        let t = &cfg.trace;
        let environment = match s.kind {
            ScenarioKind::NoFilter => Environment::NoFilter,
            ScenarioKind::IntegratedSipf => Environment::IntegratedSipf { filter },
            ScenarioKind::StandaloneSipf => Environment::StandaloneSipf {
                filter,
                trace: TLineSpec::lossless(t.z0, t.eps_r, t.length)
                    .with_loss(t.r_per_len, t.tan_delta),
            },
            ScenarioKind::QuarterWaveStub => Environment::QuarterWaveStub {
                stub: TLineSpec::lossless(
                    s.z_env,
                    cfg.filter.eps_eff,
                    TLineSpec::quarter_wave_length(cfg.filter.eps_eff, s.stub_frequency),
                ),
            },
            ScenarioKind::LowQBandpass => Environment::LowQBandpass {
                center: s.f_r,
                loaded_q: s.bandpass_q,
            },
        };
        let scenario = Scenario {
            qubit,
            readout: Some(readout),
            environment,
            wirebond_l: s.wirebond,
            z_env: s.z_env,
        };
        scenario.validate().map_err(CliError::core("scenario"))?;
        Ok(Resolved {
            filter,
            scenario,
            calibration,
        })
    }

    /// Execute one configuration and render its artifacts in memory.
    pub fn run(&mut self, cfg: &RunConfig) -> Result<RunOutput> {
        let resolved = self.resolve(cfg)?;
        let w = &cfg.sweep;
        let mut grid =
            FrequencyGrid::linear(w.start, w.stop, w.step).map_err(CliError::core("sweep grid"))?;
        let wants_t1 = cfg
            .output
            .quantities
            .iter()
            .any(|&q| is_lifetime_quantity(q));
        if wants_t1 && w.resonance_step > 0.0 {
            grid = grid
                .refined_around(
                    cfg.scenario.f_r,
                    20.0 * cfg.scenario.kappa,
                    w.resonance_step,
                )
                .map_err(CliError::core("sweep grid"))?;
        }
        let wants_s = cfg
            .output
            .quantities
            .iter()
            .any(|&q| !is_lifetime_quantity(q))
            || cfg.output.formats.contains(&OutputFormat::Touchstone);

        let filter_sweep = if wants_s {
            Some(
                filter_response_at(&resolved.filter, &grid, cfg.scenario.z_env)
                    .map_err(CliError::core("filter response"))?,
            )
        } else {
            None
        };
        let include_intrinsic =
            w.include_intrinsic || cfg.output.quantities.contains(&Quantity::T1Total);
        let t1 = if wants_t1 {
            Some(
                t1_sweep(&resolved.scenario, &grid, include_intrinsic)
                    .map_err(CliError::core("lifetime sweep"))?,
            )
        } else {
            None
        };
        let sweep = merge(&grid, filter_sweep, t1);

        let parameter_hash = sha256_hex(parameter_record(cfg, &resolved).as_bytes());
        let artifacts = render(cfg, &sweep, &parameter_hash)?;
        Ok(RunOutput {
            config: cfg.clone(),
            resolved,
            sweep,
            parameter_hash,
            artifacts,
        })
    }
}

fn merge(
    grid: &FrequencyGrid,
    filter: Option<SweepResult>,
    t1: Option<SweepResult>,
) -> SweepResult {
    let points = grid
        .points()
        .iter()
        .enumerate()
        .map(|(i, &f)| {
            let mut p = t1
                .as_ref()
                .map_or_else(|| SweepPoint::empty(f), |t| t.points[i].clone());
            if let Some(fs) = &filter {
                p.sparams = fs.points[i].sparams;
                p.annotation = p.annotation.or(fs.points[i].annotation);
            }
            p
        })
        .collect();
    SweepResult { points }
}

/// Canonical text of everything that determines a run's numbers.
pub fn parameter_record(cfg: &RunConfig, resolved: &Resolved) -> String {
    format!(
        "{}\n{}\n{}",
        to_text(cfg),
        serde_json::to_string(resolved).expect("resolved models serialize"),
        env!("CARGO_PKG_VERSION")
    )
}

fn render(cfg: &RunConfig, sweep: &SweepResult, hash: &str) -> Result<Vec<Artifact>> {
    let mut out = Vec::new();
    let name = &cfg.name;
    let csv_name = format!("{name}.csv");
    let formats = &cfg.output.formats;
    if formats.contains(&OutputFormat::Csv) || formats.contains(&OutputFormat::Plot) {
        out.push(Artifact {
            file_name: csv_name.clone(),
            contents: emit_csv(sweep, &cfg.output.quantities)?,
        });
    }
    if formats.contains(&OutputFormat::Touchstone) {
        let comments = vec![
            format!("{name}: filter response, {} sections", cfg.filter.sections),
            format!("manifest-sha256 {hash}"),
        ];
        out.push(Artifact {
            file_name: format!("{name}.s2p"),
            contents: emit_touchstone_with(sweep, cfg.scenario.z_env, &comments)
                .map_err(CliError::core("touchstone output"))?,
        });
    }
    if formats.contains(&OutputFormat::Plot) {
        let fig = run_figure(cfg, sweep, &csv_name);
        out.push(Artifact {
            file_name: format!("{name}.gp"),
            contents: fig.gnuplot(&format!("{name}_gnuplot.svg")),
        });
        out.push(Artifact {
            file_name: format!("{name}.svg"),
            contents: fig.svg(),
        });
    }
    Ok(out)
}

/// Lifetimes if any were requested, otherwise S-parameters, otherwise the
/// remaining columns.
fn run_figure(cfg: &RunConfig, sweep: &SweepResult, csv_name: &str) -> Figure {
    let qs = &cfg.output.quantities;
    let pick: Vec<Quantity> = [
        vec![Quantity::T1Purcell, Quantity::T1Total],
        vec![Quantity::S11, Quantity::S21],
        vec![Quantity::ReY, Quantity::Detuning],
    ]
    .into_iter()
    .map(|group| {
        group
            .into_iter()
            .filter(|q| qs.contains(q))
            .collect::<Vec<_>>()
    })
    .find(|g| !g.is_empty())
    .unwrap_or_default();
    let lifetimes = pick
        .first()
        .is_some_and(|q| matches!(q, Quantity::T1Purcell | Quantity::T1Total));
    let series = pick
        .iter()
        .map(|&q| Series {
            label: column_name(q).to_string(),
            csv_column: 2 + qs
                .iter()
                .position(|x| *x == q)
                .expect("picked from request"),
            csv_file: csv_name.to_string(),
            xs: sweep.frequencies(),
            ys: sweep.values(q),
        })
        .collect();
    Figure {
        title: format!("{} ({})", cfg.name, cfg.scenario.kind.name()),
        y_label: if lifetimes {
            "T1 (μs)".into()
        } else if pick.contains(&Quantity::S21) || pick.contains(&Quantity::S11) {
            "|S| (dB)".into()
        } else {
            "value (SI)".into()
        },
        log_y: lifetimes,
        y_scale: if lifetimes { 1e6 } else { 1.0 },
        series,
    }
}

#[derive(Debug, Serialize)]
struct ManifestFile<'a> {
    path: &'a str,
    sha256: String,
}

#[derive(Debug, Serialize)]
struct ManifestRun<'a> {
    name: &'a str,
    parameter_hash: &'a str,
    config: String,
    resolved: &'a Resolved,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    created_unix_s: u64,
    runs: Vec<ManifestRun<'a>>,
    files: Vec<ManifestFile<'a>>,
}

/// Manifest JSON; `created_unix_s` is the only time-dependent field.
pub fn manifest_json(runs: &[RunOutput], extra: &[Artifact], created_unix_s: u64) -> String {
    let files = runs
        .iter()
        .flat_map(|r| r.artifacts.iter())
        .chain(extra)
        .map(|a| ManifestFile {
            path: &a.file_name,
            sha256: sha256_hex(a.contents.as_bytes()),
        })
        .collect();
    let m = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        created_unix_s,
        runs: runs
            .iter()
            .map(|r| ManifestRun {
                name: &r.config.name,
                parameter_hash: &r.parameter_hash,
                config: to_text(&r.config),
                resolved: &r.resolved,
            })
            .collect(),
        files,
    };
    serde_json::to_string_pretty(&m).expect("manifest serializes") + "\n"
}

/// Write all artifacts plus `manifest.json` into `dir`, in order.
pub fn write_outputs(dir: &Path, runs: &[RunOutput], extra: &[Artifact]) -> Result<Vec<PathBuf>> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    let mut written = Vec::new();
    for a in runs.iter().flat_map(|r| r.artifacts.iter()).chain(extra) {
        let path = dir.join(&a.file_name);
        std::fs::write(&path, &a.contents).map_err(io(&path))?;
        written.push(path);
    }
    let now = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    let path = dir.join("manifest.json");
    std::fs::write(&path, manifest_json(runs, extra, now)).map_err(io(&path))?;
    written.push(path);
    Ok(written)
}

/// Parse-free entry point: run one configuration and write its outputs to
/// `dir` (or the configured directory).
pub fn run(cfg: &RunConfig, dir: Option<&Path>) -> Result<RunOutput> {
    let out = Runner::new().run(cfg)?;
    let dir = dir.map_or_else(|| PathBuf::from(&cfg.output.directory), Path::to_path_buf);
    write_outputs(&dir, std::slice::from_ref(&out), &[])?;
    Ok(out)
}
