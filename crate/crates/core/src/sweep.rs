// SPDX-License-Identifier: Apache-2.0

//! Frequency grids, per-point sweep records and local-minimum extraction.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, SingularKind};
use crate::purcell::Lifetime;
use crate::twoport::SParams2;

/// Strictly increasing list of positive frequencies (Hz).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid(Vec<f64>);

impl FrequencyGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::validation("frequency grid is empty"));
        }
        if points.iter().any(|f| !(f.is_finite() && *f > 0.0)) {
            return Err(Error::validation("frequency grid has non-positive points"));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::validation(
                "frequency grid is not strictly increasing",
            ));
        }
        Ok(Self(points))
    }

    /// `start, start + step, …` up to and including `stop` (within 1e-9 step).
    /// Points are computed as `start + i·step` so that round values land
    /// exactly on the grid.
    pub fn linear(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::validation(format!(
                "sweep step must be positive, got {step}"
            )));
        }
        if !(stop > start) {
            return Err(Error::validation(format!(
                "sweep range is empty or inverted: start {start}, stop {stop}"
            )));
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        Self::new((0..=n).map(|i| start + i as f64 * step).collect())
    }

    /// Merge in a finer uniform grid over `center ± half_width`.
    pub fn refined_around(&self, center: f64, half_width: f64, fine_step: f64) -> Result<Self> {
        let lo = (center - half_width).max(self.0[0]);
        let hi = (center + half_width).min(*self.0.last().unwrap());
        if hi <= lo {
            return Ok(self.clone());
        }
        let fine = Self::linear(lo, hi, fine_step)?;
        let mut merged: Vec<f64> = self.0.iter().chain(fine.0.iter()).copied().collect();
        merged.sort_by(f64::total_cmp);
        // Drop coincident or nearly coincident points.
        let tol = fine_step * 1e-6;
        merged.dedup_by(|b, a| (*b - *a).abs() <= tol);
        Self::new(merged)
    }

    pub fn points(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Why a sweep point carries no (or partial) results.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Annotation {
    Singular(SingularKind),
    PassivityViolation,
}

impl Annotation {
    pub(crate) fn from_error(err: &Error) -> Option<Self> {
        match err {
            Error::Singular { kind, .. } => Some(Annotation::Singular(*kind)),
            Error::PassivityViolation { .. } => Some(Annotation::PassivityViolation),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Annotation::Singular(SingularKind::ResonantShort) => "singular-short",
            Annotation::Singular(SingularKind::ResonantOpen) => "singular-open",
            Annotation::Singular(SingularKind::DegenerateConversion) => "singular-conversion",
            Annotation::PassivityViolation => "passivity-violation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub frequency: f64,
    pub sparams: Option<SParams2>,
    /// Environmental admittance at the qubit port (S).
    pub admittance: Option<Complex64>,
    pub t1_purcell: Option<Lifetime>,
    pub t1_total: Option<Lifetime>,
    /// Resonator minus qubit frequency (Hz).
    pub detuning: Option<f64>,
    pub annotation: Option<Annotation>,
}

impl SweepPoint {
    pub fn empty(frequency: f64) -> Self {
        Self {
            frequency,
            sparams: None,
            admittance: None,
            t1_purcell: None,
            t1_total: None,
            detuning: None,
            annotation: None,
        }
    }
}

/// Scalar quantities that can be extracted from a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// |S11| in dB.
    S11,
    /// |S21| in dB.
    S21,
    /// Re[Y] (S).
    ReY,
    /// Purcell lifetime (s); unbounded maps to +∞.
    T1Purcell,
    /// Purcell plus intrinsic lifetime (s).
    T1Total,
    Detuning,
}

impl Quantity {
    pub const ALL: [Quantity; 6] = [
        Quantity::S11,
        Quantity::S21,
        Quantity::ReY,
        Quantity::T1Purcell,
        Quantity::T1Total,
        Quantity::Detuning,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Quantity::S11 => "s11",
            Quantity::S21 => "s21",
            Quantity::ReY => "re_y",
            Quantity::T1Purcell => "t1_purcell",
            Quantity::T1Total => "t1_total",
            Quantity::Detuning => "detuning",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|q| q.name() == name)
    }

    pub fn value(&self, p: &SweepPoint) -> Option<f64> {
        match self {
            Quantity::S11 => p.sparams.map(|s| s.s11_db()),
            Quantity::S21 => p.sparams.map(|s| s.s21_db()),
            Quantity::ReY => p.admittance.map(|y| y.re),
            Quantity::T1Purcell => p.t1_purcell.map(Lifetime::seconds),
            Quantity::T1Total => p.t1_total.map(Lifetime::seconds),
            Quantity::Detuning => p.detuning,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
}

impl SweepResult {
    pub fn frequencies(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.frequency).collect()
    }

    pub fn values(&self, q: Quantity) -> Vec<Option<f64>> {
        self.points.iter().map(|p| q.value(p)).collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Point with the smallest defined value of `q`.
    pub fn minimum(&self, q: Quantity) -> Option<(f64, f64)> {
        self.points
            .iter()
            .filter_map(|p| q.value(p).map(|v| (p.frequency, v)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }

    /// Nearest sample at or after `f`.
    pub fn at(&self, f: f64) -> Option<&SweepPoint> {
        let idx = self.points.partition_point(|p| p.frequency < f);
        self.points.get(idx)
    }
}

/// Evaluate `eval` on every grid point in parallel, keeping grid order.
pub(crate) fn sweep_points<F>(grid: &FrequencyGrid, eval: F) -> SweepResult
where
    F: Fn(f64) -> SweepPoint + Sync + Send,
{
    SweepResult {
        points: grid.points().par_iter().map(|&f| eval(f)).collect(),
    }
}

/// A refined local minimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dip {
    pub frequency: f64,
    pub value: f64,
}

/// Strict interior local minima of `q`, each refined by a parabola through
/// the three bracketing samples.
pub fn find_dips(sweep: &SweepResult, q: Quantity) -> Vec<Dip> {
    let xs = sweep.frequencies();
    let ys = sweep.values(q);
    find_dips_in(&xs, &ys)
}

/// Same as [`find_dips`] on raw samples; `None` values never form a dip.
pub fn find_dips_in(xs: &[f64], ys: &[Option<f64>]) -> Vec<Dip> {
    let mut out = Vec::new();
    for i in 1..xs.len().saturating_sub(1) {
        let (Some(y0), Some(y1), Some(y2)) = (ys[i - 1], ys[i], ys[i + 1]) else {
            continue;
        };
        if !(y1 < y0 && y1 < y2) {
            continue;
        }
        out.push(parabolic_vertex(
            (xs[i - 1], y0),
            (xs[i], y1),
            (xs[i + 1], y2),
        ));
    }
    out
}

fn parabolic_vertex((x0, y0): (f64, f64), (x1, y1): (f64, f64), (x2, y2): (f64, f64)) -> Dip {
    let fallback = Dip {
        frequency: x1,
        value: y1,
    };
    if !(y0.is_finite() && y2.is_finite()) {
        return fallback;
    }
    let d10 = x1 - x0;
    let d12 = x1 - x2;
    let num = d10 * d10 * (y1 - y2) - d12 * d12 * (y1 - y0);
    let den = d10 * (y1 - y2) - d12 * (y1 - y0);
    if den == 0.0 {
        return fallback;
    }
    let xv = (x1 - 0.5 * num / den).clamp(x0, x2);
    // Lagrange form evaluated at the vertex.
    let l0 = (xv - x1) * (xv - x2) / ((x0 - x1) * (x0 - x2));
    let l1 = (xv - x0) * (xv - x2) / ((x1 - x0) * (x1 - x2));
    let l2 = (xv - x0) * (xv - x1) / ((x2 - x0) * (x2 - x1));
    Dip {
        frequency: xv,
        value: (y0 * l0 + y1 * l1 + y2 * l2).min(y1),
    }
}
