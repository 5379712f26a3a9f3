// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::constants::device;
use crate::error::{Error, Result};
use crate::sweep::FrequencyGrid;

use super::lifetime::Lifetime;
use super::scenario::{t1_sweep, Scenario};

/// Lifetime-bandwidth product over a band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fom {
    /// Integral in μs·MHz. A lower bound when `divergent`.
    pub value: f64,
    pub divergent: bool,
}

/// Default band: the design qubit frequency ± half the expected spread.
pub fn default_band() -> (f64, f64) {
    (
        device::QUBIT_DESIGN_HZ - device::QUBIT_SPREAD_HZ / 2.0,
        device::QUBIT_DESIGN_HZ + device::QUBIT_SPREAD_HZ / 2.0,
    )
}

/// Trapezoidal integral of `ys` over `xs`.
pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

/// Integral of T1 (μs) against frequency (MHz) on `step`, with `None`
/// when any point is singular or unbounded. The finite part is still
/// summed so a lower bound is available.
fn integrate(
    sc: &Scenario,
    band: (f64, f64),
    step: f64,
    include_intrinsic: bool,
) -> Result<(f64, bool)> {
    let grid = FrequencyGrid::linear(band.0, band.1, step)?;
    let sweep = t1_sweep(sc, &grid, include_intrinsic)?;
    let mut open = false;
    let mut xs = Vec::with_capacity(sweep.len());
    let mut ys = Vec::with_capacity(sweep.len());
    for p in &sweep.points {
        let t = if include_intrinsic {
            p.t1_total
        } else {
            p.t1_purcell
        };
        match t {
            Some(Lifetime::Finite(s)) => {
                xs.push(p.frequency * 1e-6);
                ys.push(s * 1e6);
            }
            _ => {
                open = true;
                xs.push(p.frequency * 1e-6);
                ys.push(0.0);
            }
        }
    }
    Ok((trapezoid(&xs, &ys), open))
}

/// Integrate the lifetime over `band` on a 1 MHz grid, then on 0.5 MHz.
/// Growth by more than 2× under refinement, or any singular or unbounded
/// point, marks the result divergent; the refined value is then reported.
pub fn lifetime_bandwidth_fom(
    sc: &Scenario,
    band: (f64, f64),
    include_intrinsic: bool,
) -> Result<Fom> {
    if !(band.0 > 0.0 && band.1 > band.0) {
        return Err(Error::validation(format!(
            "FOM band [{:e}, {:e}] Hz is empty or inverted",
            band.0, band.1
        )));
    }
    let (coarse, open_coarse) = integrate(sc, band, 1e6, include_intrinsic)?;
    let (fine, open_fine) = integrate(sc, band, 0.5e6, include_intrinsic)?;
    let divergent = open_coarse || open_fine || fine > 2.0 * coarse;
    Ok(Fom {
        value: if divergent { fine.max(coarse) } else { coarse },
        divergent,
    })
}
