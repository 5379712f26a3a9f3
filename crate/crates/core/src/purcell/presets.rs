// SPDX-License-Identifier: Apache-2.0

use std::sync::OnceLock;

use crate::constants::device;

use super::calibrate::{calibrate_readout, Calibration};
use super::scenario::{Environment, Scenario, ScenarioKind};

/// Reference no-filter scenario calibrated to a 7 MHz linewidth and a 5 μs
/// lifetime at 5 GHz. Computed once.
pub fn reference_calibration() -> &'static Calibration {
    static CAL: OnceLock<Calibration> = OnceLock::new();
    CAL.get_or_init(|| {
        calibrate_readout(
            &Scenario::reference_no_filter(),
            device::KAPPA_HZ,
            device::T1_ANCHOR,
        )
        .expect("reference readout calibration")
    })
}

/// Reference environment for each scenario kind: 10 mm package trace,
/// stub notch at 5 GHz, bandpass centred on the resonator.
pub fn reference_environment(kind: ScenarioKind) -> Environment {
    match kind {
        ScenarioKind::NoFilter => Environment::NoFilter,
        ScenarioKind::IntegratedSipf => Environment::integrated(),
        ScenarioKind::StandaloneSipf => Environment::standalone(crate::constants::trace::LENGTH_M),
        ScenarioKind::QuarterWaveStub => Environment::quarter_wave_stub(device::QUBIT_DESIGN_HZ),
        ScenarioKind::LowQBandpass => Environment::low_q_bandpass(device::F_RESONATOR_HZ),
    }
}

/// Calibrated readout placed in the reference environment of `kind`,
/// without intrinsic loss.
pub fn reference_scenario(kind: ScenarioKind) -> Scenario {
    reference_calibration()
        .scenario
        .with_environment(reference_environment(kind))
}
