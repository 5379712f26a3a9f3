// SPDX-License-Identifier: Apache-2.0

//! Two-port network models for stepped-impedance Purcell filters and the
//! qubit lifetimes they imply.
//!
//! Layers, bottom up: [`twoport`] (ABCD algebra and S-parameters),
//! [`elements`] (lines, lumped parts, CPW geometry), [`sipf`] (filter chain,
//! dispersion and band edges), [`purcell`] (scenarios, lifetimes,
//! calibration, figure of merit). [`sweep`] holds the shared grid and
//! result types.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod elements;
pub mod elliptic;
pub mod error;
pub mod purcell;
pub mod sipf;
pub mod sweep;
pub mod twoport;

pub use elements::{
    cpw_characteristics, lumped_abcd, open_stub_shunt_abcd, tline_abcd, CpwCharacteristics,
    CpwGeometry, LumpedElement, LumpedKind, TLineSpec,
};
pub use error::{Error, Result, SingularKind};
pub use purcell::{
    calibrate_readout, env_admittance, lifetime_bandwidth_fom, linewidth_kappa, purcell_t1,
    t1_sweep, total_t1, Calibration, Environment, Fom, Lifetime, QubitSpec, ReadoutSpec, Scenario,
    ScenarioKind,
};
pub use sipf::{
    band_edges, build_sipf_chain, calibrate_section_lengths, dispersion_lhs, filter_response,
    BandEdge, SipfSpec, Transition,
};
pub use sweep::{find_dips, Annotation, Dip, FrequencyGrid, Quantity, SweepPoint, SweepResult};
pub use twoport::{
    abcd_to_sparams, cascade, input_admittance, input_impedance, ComplexValue, SParams2,
    Termination, TwoPortABCD,
};
