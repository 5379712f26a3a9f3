// SPDX-License-Identifier: Apache-2.0

//! Qubit environments, Purcell lifetimes, readout calibration and the
//! lifetime-bandwidth figure of merit.

mod calibrate;
mod fom;
mod lifetime;
pub mod presets;
mod scenario;

pub use calibrate::{
    calibrate_readout, linewidth_kappa, resonance, retune_resonator, Calibration, Resonance,
    COUPLING_BRACKET,
};
pub use fom::{default_band, lifetime_bandwidth_fom, trapezoid, Fom};
pub use lifetime::{purcell_t1, total_t1, Lifetime, QubitSpec};
pub use scenario::{
    default_t1_grid, env_admittance, reference_trace, t1_sweep, Environment, ReadoutSpec, Scenario,
    ScenarioKind, Section,
};
