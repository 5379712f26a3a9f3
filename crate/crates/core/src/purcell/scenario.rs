// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{device, trace, C0, EPS_R_SAPPHIRE, Z_ENV};
use crate::elements::{open_stub_shunt_abcd, LumpedElement, TLineSpec};
use crate::error::{Error, Result};
use crate::sipf::SipfSpec;
use crate::sweep::{sweep_points, Annotation, FrequencyGrid, SweepPoint, SweepResult};
use crate::twoport::{input_admittance, Termination, TwoPortABCD};

use super::lifetime::{purcell_t1, total_t1, QubitSpec};

/// Readout resonator: a half-wave open-open line with series coupling
/// capacitors at each end (`c_q` towards the qubit, `c_kappa` towards the
/// feedline).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReadoutSpec {
    /// Target resonance frequency (Hz).
    pub f_r: f64,
    pub z0_res: f64,
    pub eps_eff_res: f64,
    /// Feedline coupling capacitance (F); zero detaches the resonator.
    pub c_kappa: f64,
    /// Qubit coupling capacitance (F); `+∞` is a direct connection.
    pub c_q: f64,
    /// Design linewidth (Hz).
    pub kappa_target: f64,
    /// Physical line length (m). Starts as the bare half wavelength at
    /// `f_r`; readout calibration shortens it to pull the loaded resonance
    /// back onto `f_r`.
    pub length: f64,
}

impl ReadoutSpec {
    pub fn new(
        f_r: f64,
        z0_res: f64,
        eps_eff_res: f64,
        c_kappa: f64,
        c_q: f64,
        kappa_target: f64,
    ) -> Self {
        Self {
            f_r,
            z0_res,
            eps_eff_res,
            c_kappa,
            c_q,
            kappa_target,
            length: C0 / (2.0 * f_r * eps_eff_res.sqrt()),
        }
    }

    /// 6.42 GHz, 50 Ω CPW on sapphire, 7 MHz linewidth target. The coupling
    /// capacitances are starting guesses for calibration.
    pub fn reference() -> Self {
        Self::new(
            device::F_RESONATOR_HZ,
            device::Z0_RESONATOR,
            (1.0 + EPS_R_SAPPHIRE) / 2.0,
            20e-15,
            10e-15,
            device::KAPPA_HZ,
        )
    }

    pub fn line(&self) -> TLineSpec {
        TLineSpec::lossless(self.z0_res, self.eps_eff_res, self.length)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.f_r > 0.0
            && self.z0_res > 0.0
            && self.eps_eff_res >= 1.0
            && self.c_kappa >= 0.0
            && self.c_q > 0.0
            && self.kappa_target >= 0.0
            && self.length > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::validation(format!(
                "invalid readout parameters: {self:?}"
            )))
        }
    }
}

/// What sits between the resonator's feed capacitor and the environment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Environment {
    NoFilter,
    /// On-chip filter; the chip is wirebonded to the environment at the
    /// filter output.
    IntegratedSipf {
        filter: SipfSpec,
    },
    /// Wirebond, package trace, wirebond, then the filter chip.
    StandaloneSipf {
        filter: SipfSpec,
        trace: TLineSpec,
    },
    /// Open stub in shunt on the feedline.
    QuarterWaveStub {
        stub: TLineSpec,
    },
    /// Shunt parallel LC resonant at `center` whose loaded Q (against the
    /// environment impedance) is `loaded_q`.
    LowQBandpass {
        center: f64,
        loaded_q: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    NoFilter,
    IntegratedSipf,
    StandaloneSipf,
    QuarterWaveStub,
    LowQBandpass,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 5] = [
        ScenarioKind::NoFilter,
        ScenarioKind::IntegratedSipf,
        ScenarioKind::StandaloneSipf,
        ScenarioKind::QuarterWaveStub,
        ScenarioKind::LowQBandpass,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::NoFilter => "no-filter",
            ScenarioKind::IntegratedSipf => "integrated-sipf",
            ScenarioKind::StandaloneSipf => "standalone-sipf",
            ScenarioKind::QuarterWaveStub => "quarter-wave-stub",
            ScenarioKind::LowQBandpass => "low-q-bandpass",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl Environment {
    pub fn kind(&self) -> ScenarioKind {
        match self {
            Environment::NoFilter => ScenarioKind::NoFilter,
            Environment::IntegratedSipf { .. } => ScenarioKind::IntegratedSipf,
            Environment::StandaloneSipf { .. } => ScenarioKind::StandaloneSipf,
            Environment::QuarterWaveStub { .. } => ScenarioKind::QuarterWaveStub,
            Environment::LowQBandpass { .. } => ScenarioKind::LowQBandpass,
        }
    }

    pub fn integrated() -> Self {
        Environment::IntegratedSipf {
            filter: SipfSpec::reference(),
        }
    }

    /// FR408 stripline trace of the given length into the reference filter.
    pub fn standalone(trace_length: f64) -> Self {
        Environment::StandaloneSipf {
            filter: SipfSpec::reference(),
            trace: reference_trace(trace_length),
        }
    }

    /// Stub on the filter substrate, a quarter wavelength at `f_notch`.
    pub fn quarter_wave_stub(f_notch: f64) -> Self {
        let eps = SipfSpec::reference_template().eps_eff;
        Environment::QuarterWaveStub {
            stub: TLineSpec::lossless(Z_ENV, eps, TLineSpec::quarter_wave_length(eps, f_notch)),
        }
    }

    pub fn low_q_bandpass(center: f64) -> Self {
        Environment::LowQBandpass {
            center,
            loaded_q: 30.0,
        }
    }
}

/// Package signal trace: buried stripline, so `eps_eff` equals the laminate
/// permittivity.
pub fn reference_trace(length: f64) -> TLineSpec {
    TLineSpec::lossless(trace::Z0, trace::EPS_R, length)
        .with_loss(trace::R_PER_LEN, trace::TAN_DELTA)
}

/// One element of the qubit-to-environment chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Section {
    Lumped(LumpedElement),
    Line(TLineSpec),
    OpenStub(TLineSpec),
    /// Shunt parallel LC (H, F).
    ShuntResonator {
        inductance: f64,
        capacitance: f64,
    },
}

impl Section {
    pub fn abcd(&self, f: f64) -> Result<TwoPortABCD> {
        match self {
            Section::Lumped(el) => el.abcd(f),
            Section::Line(l) => l.abcd(f),
            Section::OpenStub(s) => open_stub_shunt_abcd(s, f),
            Section::ShuntResonator {
                inductance,
                capacitance,
            } => {
                let w = TAU * f;
                Ok(TwoPortABCD::shunt(Complex64::new(
                    0.0,
                    w * capacitance - 1.0 / (w * inductance),
                )))
            }
        }
    }
}

/// A complete qubit environment terminated in `z_env`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub qubit: QubitSpec,
    /// `None` connects the qubit straight to the environment chain.
    pub readout: Option<ReadoutSpec>,
    pub environment: Environment,
    /// Wirebond inductance (H); zero removes the bonds.
    pub wirebond_l: f64,
    pub z_env: f64,
}

impl Scenario {
    pub fn new(qubit: QubitSpec, readout: ReadoutSpec, environment: Environment) -> Self {
        Self {
            qubit,
            readout: Some(readout),
            environment,
            wirebond_l: device::WIREBOND_H,
            z_env: Z_ENV,
        }
    }

    pub fn reference_no_filter() -> Self {
        Self::new(
            QubitSpec::reference(),
            ReadoutSpec::reference(),
            Environment::NoFilter,
        )
    }

    pub fn kind(&self) -> ScenarioKind {
        self.environment.kind()
    }

    /// Same qubit and readout, different environment.
    pub fn with_environment(mut self, environment: Environment) -> Self {
        self.environment = environment;
        self
    }

    pub fn with_intrinsic_q(mut self, q: Option<f64>) -> Self {
        self.qubit.q_intrinsic = q;
        self
    }

    pub fn with_wirebond(mut self, henry: f64) -> Self {
        self.wirebond_l = henry;
        self
    }

    pub fn readout_mut(&mut self) -> Option<&mut ReadoutSpec> {
        self.readout.as_mut()
    }

    pub fn validate(&self) -> Result<()> {
        self.qubit.validate()?;
        if let Some(r) = &self.readout {
            r.validate()?;
        }
        if !(self.z_env > 0.0) || !(self.wirebond_l >= 0.0) {
            return Err(Error::validation(
                "z_env must be positive and wirebond_l non-negative",
            ));
        }
        match &self.environment {
            Environment::StandaloneSipf { trace, .. } if !(trace.length > 0.0) => Err(
                Error::validation("standalone scenario requires a trace of positive length"),
            ),
            Environment::LowQBandpass { center, loaded_q }
                if !(*center > 0.0 && *loaded_q > 0.0) =>
            {
                Err(Error::validation(
                    "bandpass centre and loaded Q must be positive",
                ))
            }
            _ => Ok(()),
        }
    }

    /// Sections from the qubit terminals outwards, plus the termination.
    pub fn network(&self) -> Result<(Vec<Section>, Termination)> {
        self.validate()?;
        let mut out = Vec::new();
        if let Some(r) = &self.readout {
            if r.c_q.is_finite() {
                out.push(Section::Lumped(LumpedElement::series_capacitor(r.c_q)));
            }
            out.push(Section::Line(r.line()));
            if r.c_kappa == 0.0 {
                return Ok((out, Termination::Open));
            }
            out.push(Section::Lumped(LumpedElement::series_capacitor(r.c_kappa)));
        }
        let bond = (self.wirebond_l > 0.0)
            .then(|| Section::Lumped(LumpedElement::series_inductor(self.wirebond_l)));
        match &self.environment {
            Environment::NoFilter => {}
            Environment::IntegratedSipf { filter } => {
                out.extend(filter.sections()?.into_iter().map(Section::Line));
                out.extend(bond);
            }
            Environment::StandaloneSipf { filter, trace } => {
                out.extend(bond);
                out.push(Section::Line(*trace));
                out.extend(bond);
                out.extend(filter.sections()?.into_iter().map(Section::Line));
            }
            Environment::QuarterWaveStub { stub } => out.push(Section::OpenStub(*stub)),
            Environment::LowQBandpass { center, loaded_q } => {
                let w0 = TAU * center;
                let capacitance = loaded_q / (self.z_env * w0);
                out.push(Section::ShuntResonator {
                    inductance: 1.0 / (w0 * w0 * capacitance),
                    capacitance,
                });
            }
        }
        Ok((out, Termination::resistive(self.z_env)))
    }

    pub fn detuning(&self, f: f64) -> Option<f64> {
        self.readout.map(|r| r.f_r - f)
    }
}

/// Admittance seen from the qubit terminals looking into the environment.
pub fn env_admittance(sc: &Scenario, f: f64) -> Result<Complex64> {
    let (sections, termination) = sc.network()?;
    env_admittance_of(&sections, termination, f)
}

pub(crate) fn env_admittance_of(
    sections: &[Section],
    termination: Termination,
    f: f64,
) -> Result<Complex64> {
    let m = sections
        .iter()
        .try_fold(TwoPortABCD::identity(), |acc, s| Ok(acc.then(&s.abcd(f)?)))
        .map_err(|e: Error| e.at_frequency(f))?;
    input_admittance(&m, termination).map_err(|e| e.at_frequency(f))
}

/// Admittance, Purcell lifetime and (optionally) total lifetime per point.
/// Singular or non-passive points are annotated and left empty.
pub fn t1_sweep(
    sc: &Scenario,
    grid: &FrequencyGrid,
    include_intrinsic: bool,
) -> Result<SweepResult> {
    let (sections, termination) = sc.network()?;
    let qubit = sc.qubit;
    Ok(sweep_points(grid, |f| {
        let mut p = SweepPoint::empty(f);
        p.detuning = sc.detuning(f);
        let result = env_admittance_of(&sections, termination, f).and_then(|y| {
            p.admittance = Some(y);
            purcell_t1(y, f, &qubit)
        });
        match result {
            Ok(t1) => {
                p.t1_purcell = Some(t1);
                if include_intrinsic {
                    p.t1_total = Some(total_t1(t1, f, &qubit));
                }
            }
            Err(e) => p.annotation = Annotation::from_error(&e),
        }
        p
    }))
}

/// Default lifetime grid: `step` everywhere, 0.1 MHz within ±20κ of the
/// resonator.
pub fn default_t1_grid(sc: &Scenario, start: f64, stop: f64, step: f64) -> Result<FrequencyGrid> {
    let grid = FrequencyGrid::linear(start, stop, step)?;
    match sc.readout {
        Some(r) if r.kappa_target > 0.0 => grid.refined_around(r.f_r, 20.0 * r.kappa_target, 0.1e6),
        _ => Ok(grid),
    }
}
