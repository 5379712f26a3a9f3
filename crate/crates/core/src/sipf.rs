// SPDX-License-Identifier: Apache-2.0

//! Stepped-impedance Purcell filter: a cascade of alternating low- and
//! high-impedance line sections with low-impedance sections at both ends.
//!
//! Two views of the same structure live here. The finite chain
//! ([`SipfSpec::abcd`], [`filter_response`]) is exact for the given number of
//! sections; the infinite-periodic cutoff condition ([`dispersion_lhs`],
//! [`band_edges`]) gives the idealised stopband and is what
//! [`calibrate_section_lengths`] inverts.

use std::f64::consts::TAU;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::constants::{filter, C0, Z_ENV};
use crate::elements::TLineSpec;
use crate::error::{Error, Result};
use crate::sweep::{sweep_points, Annotation, FrequencyGrid, SweepPoint, SweepResult};
use crate::twoport::{abcd_to_sparams, TwoPortABCD};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SipfSpec {
    /// Odd, at least 3.
    pub n_sections: usize,
    pub z_lo: f64,
    pub z_hi: f64,
    /// Length of each low-impedance section (m).
    pub len_lo: f64,
    /// Length of each high-impedance section (m).
    pub len_hi: f64,
    /// Effective permittivity shared by all sections.
    pub eps_eff: f64,
    pub r_per_len: f64,
    pub tan_delta: f64,
    /// Optional separate permittivity for the high-impedance sections. Only
    /// the finite chain honours it; the cutoff condition always uses
    /// `eps_eff`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_eff_hi: Option<f64>,
}

impl SipfSpec {
    /// Reference impedances and permittivity with placeholder lengths.
    pub fn reference_template() -> Self {
        Self {
            n_sections: filter::N_SECTIONS,
            z_lo: filter::Z_LO,
            z_hi: filter::Z_HI,
            len_lo: 5e-3,
            len_hi: 5e-3,
            eps_eff: filter::EPS_EFF,
            r_per_len: 0.0,
            tan_delta: 0.0,
            eps_eff_hi: None,
        }
    }

    /// The reference filter: section lengths calibrated so the cutoff
    /// condition places the stopband at 2.6–5.7 GHz. Computed once.
    pub fn reference() -> Self {
        static CALIBRATED: OnceLock<SipfSpec> = OnceLock::new();
        *CALIBRATED.get_or_init(|| {
            calibrate_section_lengths(
                filter::STOPBAND_ENTRY_HZ,
                filter::STOPBAND_EXIT_HZ,
                &Self::reference_template(),
            )
            .expect("reference filter calibration")
        })
    }

    pub fn with_sections(mut self, n: usize) -> Self {
        self.n_sections = n;
        self
    }

    pub fn with_lengths(mut self, len_lo: f64, len_hi: f64) -> Self {
        self.len_lo = len_lo;
        self.len_hi = len_hi;
        self
    }

    /// Impedance asymmetry `z_hi / z_lo`.
    pub fn asymmetry(&self) -> f64 {
        self.z_hi / self.z_lo
    }

    pub fn lo_count(&self) -> usize {
        self.n_sections.div_ceil(2)
    }

    pub fn hi_count(&self) -> usize {
        self.n_sections / 2
    }

    pub fn total_length(&self) -> f64 {
        self.lo_count() as f64 * self.len_lo + self.hi_count() as f64 * self.len_hi
    }

    /// Checks everything except the `z_hi > z_lo` ordering, which the
    /// degenerate uniform case (`z_lo == z_hi`) deliberately violates.
    fn validate_structure(&self) -> Result<()> {
        if self.n_sections < 3 || self.n_sections.is_multiple_of(2) {
            return Err(Error::validation(format!(
                "section count must be odd and at least 3, got {}",
                self.n_sections
            )));
        }
        if !(self.z_lo > 0.0 && self.z_hi > 0.0) {
            return Err(Error::validation("section impedances must be positive"));
        }
        if !(self.len_lo >= 0.0 && self.len_hi >= 0.0) {
            return Err(Error::validation("section lengths must be non-negative"));
        }
        if !(self.eps_eff >= 1.0) || self.eps_eff_hi.is_some_and(|e| !(e >= 1.0)) {
            return Err(Error::validation("effective permittivity must be >= 1"));
        }
        Ok(())
    }

    /// Section list, source side first.
    pub fn sections(&self) -> Result<Vec<TLineSpec>> {
        build_sipf_chain(self)
    }

    pub fn abcd(&self, f: f64) -> Result<TwoPortABCD> {
        let lines = build_sipf_chain(self)?;
        lines
            .iter()
            .try_fold(TwoPortABCD::identity(), |acc, l| Ok(acc.then(&l.abcd(f)?)))
    }
}

/// Alternating lo/hi/…/lo line sections.
pub fn build_sipf_chain(spec: &SipfSpec) -> Result<Vec<TLineSpec>> {
    spec.validate_structure()?;
    let lo = TLineSpec::lossless(spec.z_lo, spec.eps_eff, spec.len_lo)
        .with_loss(spec.r_per_len, spec.tan_delta);
    let hi = TLineSpec::lossless(
        spec.z_hi,
        spec.eps_eff_hi.unwrap_or(spec.eps_eff),
        spec.len_hi,
    )
    .with_loss(spec.r_per_len, spec.tan_delta);
    Ok((0..spec.n_sections)
        .map(|i| if i % 2 == 0 { lo } else { hi })
        .collect())
}

/// Left-hand side of the periodic cutoff condition,
/// `2 cos kℓ_lo cos kℓ_hi − (α + 1/α) sin kℓ_lo sin kℓ_hi`.
/// `|F| ≤ 2` propagates, `|F| > 2` is evanescent.
pub fn dispersion_lhs(spec: &SipfSpec, f: f64) -> Result<f64> {
    if !(f >= 0.0 && f.is_finite()) {
        return Err(Error::validation(format!(
            "frequency must be >= 0, got {f}"
        )));
    }
    spec.validate_structure()?;
    Ok(dispersion_unchecked(spec, f))
}

fn wavenumber(spec: &SipfSpec, f: f64) -> f64 {
    TAU * f * spec.eps_eff.sqrt() / C0
}

fn dispersion_unchecked(spec: &SipfSpec, f: f64) -> f64 {
    let k = wavenumber(spec, f);
    let a = spec.asymmetry();
    let (s_lo, c_lo) = (k * spec.len_lo).sin_cos();
    let (s_hi, c_hi) = (k * spec.len_hi).sin_cos();
    2.0 * c_lo * c_hi - (a + 1.0 / a) * s_lo * s_hi
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Transition {
    StopbandEntry,
    StopbandExit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandEdge {
    pub frequency: f64,
    pub transition: Transition,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandEdgeOptions {
    /// Uniform scan step (Hz).
    pub scan_step: f64,
    /// Bisection bracket width at convergence (Hz).
    pub tolerance: f64,
}

impl Default for BandEdgeOptions {
    fn default() -> Self {
        Self {
            scan_step: 1e6,
            tolerance: 1e3,
        }
    }
}

/// Values of `|F| − 2` below this are treated as exact touches.
const TOUCH_EPS: f64 = 1e-12;

/// All solutions of `|F(f)| = 2` in `[f_lo, f_hi]` with default options.
pub fn band_edges(spec: &SipfSpec, f_lo: f64, f_hi: f64) -> Result<Vec<BandEdge>> {
    band_edges_with(spec, f_lo, f_hi, &BandEdgeOptions::default())
}

/// Scan-and-bisect band-edge search. The scan is repeated at a 4× finer
/// step; if the two disagree, once more at 16×, and the search fails if the
/// last two still differ.
pub fn band_edges_with(
    spec: &SipfSpec,
    f_lo: f64,
    f_hi: f64,
    opts: &BandEdgeOptions,
) -> Result<Vec<BandEdge>> {
    if !(f_lo >= 0.0 && f_hi > f_lo && f_hi.is_finite()) {
        return Err(Error::validation(format!(
            "band-edge interval must satisfy 0 <= f_lo < f_hi, got [{f_lo}, {f_hi}]"
        )));
    }
    if !(opts.scan_step > 0.0 && opts.tolerance > 0.0) {
        return Err(Error::validation(
            "band-edge step and tolerance must be positive",
        ));
    }
    spec.validate_structure()?;

    let agree = |a: &[BandEdge], b: &[BandEdge]| {
        a.len() == b.len()
            && a.iter().zip(b).all(|(x, y)| {
                x.transition == y.transition
                    && (x.frequency - y.frequency).abs() <= 2.0 * opts.tolerance
            })
    };
    let coarse = scan_edges(spec, f_lo, f_hi, opts.scan_step, opts.tolerance);
    let fine = scan_edges(spec, f_lo, f_hi, opts.scan_step / 4.0, opts.tolerance);
    if agree(&coarse, &fine) {
        return Ok(coarse);
    }
    let finer = scan_edges(spec, f_lo, f_hi, opts.scan_step / 16.0, opts.tolerance);
    if agree(&fine, &finer) {
        return Ok(fine);
    }
    Err(Error::GridTooCoarse(format!(
        "{} / {} / {} edges found at steps {} / {} / {} Hz",
        coarse.len(),
        fine.len(),
        finer.len(),
        opts.scan_step,
        opts.scan_step / 4.0,
        opts.scan_step / 16.0
    )))
}

fn scan_edges(spec: &SipfSpec, f_lo: f64, f_hi: f64, step: f64, tol: f64) -> Vec<BandEdge> {
    let g = |f: f64| dispersion_unchecked(spec, f).abs() - 2.0;
    let sign = |v: f64| {
        if v > TOUCH_EPS {
            1
        } else if v < -TOUCH_EPS {
            -1
        } else {
            0
        }
    };
    let n = ((f_hi - f_lo) / step).ceil() as usize;
    let mut edges = Vec::new();
    let mut last: Option<(f64, i32)> = None;
    for i in 0..=n {
        let f = (f_lo + i as f64 * step).min(f_hi);
        let s = sign(g(f));
        if s == 0 {
            continue;
        }
        if let Some((fa, sa)) = last {
            if sa != s {
                let root = bisect(&g, fa, f, sa, tol);
                edges.push(BandEdge {
                    frequency: root,
                    transition: classify(spec, root, sa),
                });
            }
        }
        last = Some((f, s));
    }
    edges
}

fn bisect(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, sign_a: i32, tol: f64) -> f64 {
    while b - a > tol {
        let m = 0.5 * (a + b);
        let gm = g(m);
        if (gm > 0.0) == (sign_a > 0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Rising `|F|` through 2 enters the stopband. Central difference with a
/// 1 kHz step; falls back to the bracket direction if that is flat.
fn classify(spec: &SipfSpec, root: f64, sign_before: i32) -> Transition {
    let h = 1e3;
    let lo = (root - h).max(0.0);
    let slope = dispersion_unchecked(spec, root + h).abs() - dispersion_unchecked(spec, lo).abs();
    let rising = if slope != 0.0 {
        slope > 0.0
    } else {
        sign_before < 0
    };
    if rising {
        Transition::StopbandEntry
    } else {
        Transition::StopbandExit
    }
}

/// Options for [`calibrate_section_lengths_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LengthCalibrationOptions {
    /// Search domain for each section length (m).
    pub min_length: f64,
    pub max_length: f64,
    /// Coarse bracketing grid step (m).
    pub scan_step: f64,
    /// Allowed band-edge error after calibration (Hz).
    pub edge_tolerance: f64,
}

impl Default for LengthCalibrationOptions {
    fn default() -> Self {
        Self {
            min_length: 1e-3,
            max_length: 20e-3,
            scan_step: 0.25e-3,
            edge_tolerance: 1e6,
        }
    }
}

pub fn calibrate_section_lengths(
    target_entry: f64,
    target_exit: f64,
    template: &SipfSpec,
) -> Result<SipfSpec> {
    calibrate_section_lengths_with(
        target_entry,
        target_exit,
        template,
        &LengthCalibrationOptions::default(),
    )
}

/// Solve `F(entry) = F(exit) = −2` for `(len_lo, len_hi)`.
///
/// Sign-change cells of both residuals on a coarse grid seed a damped Newton
/// iteration. Each converged root is accepted only if [`band_edges`] then
/// reports a stopband entering at `target_entry` and leaving at
/// `target_exit` with nothing in between. Among accepted roots the one with
/// the smallest total length wins.
pub fn calibrate_section_lengths_with(
    target_entry: f64,
    target_exit: f64,
    template: &SipfSpec,
    opts: &LengthCalibrationOptions,
) -> Result<SipfSpec> {
    if !(target_entry > 0.0 && target_exit > target_entry && target_exit.is_finite()) {
        return Err(Error::validation(format!(
            "calibration targets must satisfy 0 < entry < exit, got {target_entry}, {target_exit}"
        )));
    }
    template.validate_structure()?;
    let k1 = wavenumber(template, target_entry);
    let k2 = wavenumber(template, target_exit);
    let big_a = template.asymmetry() + 1.0 / template.asymmetry();

    let residual = |lo: f64, hi: f64| -> [f64; 2] {
        let r = |k: f64| {
            let (s1, c1) = (k * lo).sin_cos();
            let (s2, c2) = (k * hi).sin_cos();
            2.0 * c1 * c2 - big_a * s1 * s2 + 2.0
        };
        [r(k1), r(k2)]
    };
    let jacobian = |lo: f64, hi: f64| -> [[f64; 2]; 2] {
        let row = |k: f64| {
            let (s1, c1) = (k * lo).sin_cos();
            let (s2, c2) = (k * hi).sin_cos();
            [
                k * (-2.0 * s1 * c2 - big_a * c1 * s2),
                k * (-2.0 * c1 * s2 - big_a * s1 * c2),
            ]
        };
        [row(k1), row(k2)]
    };

    let n = ((opts.max_length - opts.min_length) / opts.scan_step).round() as usize;
    let at = |i: usize| opts.min_length + i as f64 * opts.scan_step;
    let grid: Vec<Vec<[f64; 2]>> = (0..=n)
        .map(|i| (0..=n).map(|j| residual(at(i), at(j))).collect())
        .collect();

    let mut best_grid = (f64::INFINITY, 0.0, 0.0);
    let mut roots: Vec<(f64, f64)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let corners = [
                grid[i][j],
                grid[i + 1][j],
                grid[i][j + 1],
                grid[i + 1][j + 1],
            ];
            let norm = corners[0][0].hypot(corners[0][1]);
            if norm < best_grid.0 {
                best_grid = (norm, at(i), at(j));
            }
            let changes = |c: usize| {
                let pos = corners.iter().any(|r| r[c] >= 0.0);
                let neg = corners.iter().any(|r| r[c] <= 0.0);
                pos && neg
            };
            if !(changes(0) && changes(1)) {
                continue;
            }
            let seed = (at(i) + 0.5 * opts.scan_step, at(j) + 0.5 * opts.scan_step);
            if let Some(root) = damped_newton(seed, &residual, &jacobian) {
                let inside = |x: f64| x >= opts.min_length && x <= opts.max_length;
                let dup = roots
                    .iter()
                    .any(|r| (r.0 - root.0).abs() < 1e-9 && (r.1 - root.1).abs() < 1e-9);
                if inside(root.0) && inside(root.1) && !dup {
                    roots.push(root);
                }
            }
        }
    }

    let mut accepted: Vec<SipfSpec> = roots
        .into_iter()
        .map(|(lo, hi)| template.with_lengths(lo, hi))
        .filter(|cand| reproduces_stopband(cand, target_entry, target_exit, opts.edge_tolerance))
        .collect();
    accepted.sort_by(|a, b| {
        a.total_length()
            .total_cmp(&b.total_length())
            .then(a.len_lo.total_cmp(&b.len_lo))
    });
    accepted.into_iter().next().ok_or_else(|| {
        Error::CalibrationFailure(format!(
            "no section lengths in [{:.3}, {:.3}] mm give a stopband {:.6} to {:.6} GHz \
             (alpha = {:.4}); smallest grid residual {:.3e} at ({:.3}, {:.3}) mm",
            opts.min_length * 1e3,
            opts.max_length * 1e3,
            target_entry / 1e9,
            target_exit / 1e9,
            template.asymmetry(),
            best_grid.0,
            best_grid.1 * 1e3,
            best_grid.2 * 1e3
        ))
    })
}

fn damped_newton(
    seed: (f64, f64),
    residual: &impl Fn(f64, f64) -> [f64; 2],
    jacobian: &impl Fn(f64, f64) -> [[f64; 2]; 2],
) -> Option<(f64, f64)> {
    let (mut x, mut y) = seed;
    let mut r = residual(x, y);
    let mut norm = r[0].hypot(r[1]);
    for _ in 0..100 {
        if norm < 1e-13 {
            return Some((x, y));
        }
        let j = jacobian(x, y);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-300 || !det.is_finite() {
            return None;
        }
        let dx = (j[1][1] * r[0] - j[0][1] * r[1]) / det;
        let dy = (-j[1][0] * r[0] + j[0][0] * r[1]) / det;
        let mut t = 1.0;
        loop {
            let (nx, ny) = (x - t * dx, y - t * dy);
            let nr = residual(nx, ny);
            let nn = nr[0].hypot(nr[1]);
            if nn < norm {
                x = nx;
                y = ny;
                r = nr;
                norm = nn;
                break;
            }
            t *= 0.5;
            if t < 1e-10 {
                return (norm < 1e-10).then_some((x, y));
            }
        }
    }
    (norm < 1e-10).then_some((x, y))
}

fn reproduces_stopband(spec: &SipfSpec, entry: f64, exit: f64, tol: f64) -> bool {
    let margin = 10.0 * tol;
    let Ok(edges) = band_edges(spec, (entry - margin).max(0.0), exit + margin) else {
        return false;
    };
    let inside: Vec<&BandEdge> = edges
        .iter()
        .filter(|e| e.frequency > entry - margin && e.frequency < exit + margin)
        .collect();
    matches!(
        inside.as_slice(),
        [a, b] if a.transition == Transition::StopbandEntry
            && b.transition == Transition::StopbandExit
            && (a.frequency - entry).abs() <= tol
            && (b.frequency - exit).abs() <= tol
    )
}

/// Reflection and transmission of the finite filter between `Z_ENV` ports.
pub fn filter_response(spec: &SipfSpec, grid: &FrequencyGrid) -> Result<SweepResult> {
    filter_response_at(spec, grid, Z_ENV)
}

pub fn filter_response_at(
    spec: &SipfSpec,
    grid: &FrequencyGrid,
    z_ref: f64,
) -> Result<SweepResult> {
    spec.validate_structure()?;
    if !(z_ref > 0.0) {
        return Err(Error::validation("reference impedance must be positive"));
    }
    Ok(sweep_points(grid, |f| {
        let mut p = SweepPoint::empty(f);
        match spec.abcd(f).and_then(|m| abcd_to_sparams(&m, z_ref)) {
            Ok(s) => p.sparams = Some(s),
            Err(e) => p.annotation = Annotation::from_error(&e),
        }
        p
    }))
}
