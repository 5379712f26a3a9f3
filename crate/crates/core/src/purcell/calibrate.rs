// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::constants::PASSIVITY_SLACK_S;
use crate::error::{Error, Result};

use super::lifetime::{purcell_t1, Lifetime};
use super::scenario::{env_admittance_of, Environment, ReadoutSpec, Scenario};

/// Bracket for both coupling capacitors (F).
pub const COUPLING_BRACKET: (f64, f64) = (0.1e-15, 100e-15);

const CROSSING_TOL_HZ: f64 = 1e3;
const RETUNE_TOL_HZ: f64 = 1e3;
const SAMPLES_PER_KAPPA: f64 = 20.0;

/// Loaded resonance as seen in Re[Y] at the qubit port.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resonance {
    pub peak_frequency: f64,
    pub peak_conductance: f64,
    /// Full width at half maximum (Hz).
    pub fwhm: f64,
}

fn readout_of(sc: &Scenario) -> Result<ReadoutSpec> {
    sc.readout
        .ok_or_else(|| Error::validation("scenario has no readout resonator"))
}

/// Locate the Re[Y] peak within `f_r ± 50·kappa_target` and measure its
/// full width at half maximum.
pub fn resonance(sc: &Scenario) -> Result<Resonance> {
    let r = readout_of(sc)?;
    if !(r.kappa_target > 0.0) {
        return Err(Error::AmbiguousResonance(
            "linewidth window needs a positive kappa_target".into(),
        ));
    }
    let (sections, termination) = sc.network()?;
    let g = |f: f64| env_admittance_of(&sections, termination, f).map(|y| y.re);

    let half_window = 50.0 * r.kappa_target;
    let lo = (r.f_r - half_window).max(1.0);
    let hi = r.f_r + half_window;
    let n = (2.0 * half_window / (r.kappa_target / SAMPLES_PER_KAPPA)).ceil() as usize;
    let step = (hi - lo) / n as f64;
    let xs: Vec<f64> = (0..=n).map(|i| lo + i as f64 * step).collect();
    let ys = xs.iter().map(|&f| g(f)).collect::<Result<Vec<_>>>()?;

    let (imax, &ymax) = ys
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("window has samples");
    if !(ymax > PASSIVITY_SLACK_S) {
        return Err(Error::AmbiguousResonance(
            "no conductance peak inside the window".into(),
        ));
    }
    if imax == 0 || imax == n {
        return Err(Error::AmbiguousResonance(format!(
            "conductance maximum at the window edge ({:.6e} Hz)",
            xs[imax]
        )));
    }

    let (peak_f, peak_g) = golden_max(&g, xs[imax - 1], xs[imax + 1])?;
    let half = peak_g / 2.0;

    let below = |f: f64| g(f).map(|v| v < half);
    let left_out = (0..=imax)
        .rev()
        .find(|&i| xs[i] < peak_f && ys[i] < half)
        .map(|i| xs[i]);
    let right_out = (imax..=n)
        .find(|&i| xs[i] > peak_f && ys[i] < half)
        .map(|i| xs[i]);
    let (Some(left_out), Some(right_out)) = (left_out, right_out) else {
        return Err(Error::AmbiguousResonance(
            "half-maximum crossing outside the window".into(),
        ));
    };
    let left = bisect_crossing(&below, left_out, peak_f)?;
    let right = bisect_crossing(&below, right_out, peak_f)?;

    let width = right - left;
    if xs
        .iter()
        .zip(&ys)
        .any(|(&f, &y)| (f < left - width || f > right + width) && y >= half)
    {
        return Err(Error::AmbiguousResonance(
            "more than one conductance peak above half maximum".into(),
        ));
    }
    Ok(Resonance {
        peak_frequency: peak_f,
        peak_conductance: peak_g,
        fwhm: width,
    })
}

/// Linewidth κ/2π (Hz) of the readout resonator.
pub fn linewidth_kappa(sc: &Scenario) -> Result<f64> {
    resonance(sc).map(|r| r.fwhm)
}

fn golden_max(g: &impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut gc, mut gd) = (g(c)?, g(d)?);
    for _ in 0..200 {
        if b - a <= 1e-3_f64.max(1e-15 * b) {
            break;
        }
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = g(c)?;
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = g(d)?;
        }
    }
    let x = 0.5 * (a + b);
    Ok((x, g(x)?))
}

/// Bisect between `outside` (below half max) and `peak` (above).
fn bisect_crossing(below: &impl Fn(f64) -> Result<bool>, outside: f64, peak: f64) -> Result<f64> {
    let (mut out, mut inn) = (outside, peak);
    for _ in 0..200 {
        let gap = (out - inn).abs();
        if gap <= CROSSING_TOL_HZ.min(1e-4 * (outside - peak).abs()) {
            break;
        }
        let mid = 0.5 * (out + inn);
        if below(mid)? {
            out = mid;
        } else {
            inn = mid;
        }
    }
    Ok(0.5 * (out + inn))
}

/// Fundamental Re[Y] peak searched over `[0.5, 1.5]·f_r`, below the
/// second harmonic.
fn coarse_peak(sc: &Scenario) -> Result<f64> {
    let f_r = readout_of(sc)?.f_r;
    let (sections, termination) = sc.network()?;
    let g = |f: f64| env_admittance_of(&sections, termination, f).map(|y| y.re);
    let n = 4000;
    let xs: Vec<f64> = (0..=n).map(|i| f_r * (0.5 + i as f64 / n as f64)).collect();
    let mut best = (0, f64::NEG_INFINITY);
    for (i, &f) in xs.iter().enumerate() {
        // Exact network resonances on the coarse grid are skipped.
        if let Ok(v) = g(f) {
            if v > best.1 {
                best = (i, v);
            }
        }
    }
    if !(best.1 > PASSIVITY_SLACK_S) || best.0 == 0 || best.0 == n {
        return Err(Error::AmbiguousResonance(
            "no fundamental conductance peak near f_r".into(),
        ));
    }
    Ok(golden_max(&g, xs[best.0 - 1], xs[best.0 + 1])?.0)
}

/// Rescale the resonator length until the loaded Re[Y] peak sits on `f_r`.
pub fn retune_resonator(sc: &mut Scenario) -> Result<Resonance> {
    let f_r = readout_of(sc)?.f_r;
    let coarse = coarse_peak(sc)?;
    sc.readout_mut().expect("checked above").length *= coarse / f_r;
    let mut res = resonance(sc)?;
    for _ in 0..50 {
        if (res.peak_frequency - f_r).abs() <= RETUNE_TOL_HZ {
            return Ok(res);
        }
        let r = sc.readout_mut().expect("checked above");
        r.length *= res.peak_frequency / f_r;
        res = resonance(sc)?;
    }
    Err(Error::CalibrationFailure(format!(
        "resonator retune stalled: loaded peak at {:.6e} Hz for target {f_r:.6e} Hz",
        res.peak_frequency
    )))
}

/// Outcome of readout calibration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub scenario: Scenario,
    /// Achieved κ/2π (Hz).
    pub kappa: f64,
    /// Achieved Purcell lifetime at the anchor frequency (s).
    pub t1_anchor: f64,
    pub anchor_frequency: f64,
    /// Relative change of κ across the refinement pass.
    pub kappa_drift: f64,
    /// Relative κ error left by the qubit-side coupling after the first
    /// pass.
    pub kappa_backaction: f64,
}

/// Monotone log-space bisection of `eval(c) = target` over the coupling
/// bracket. `increasing` states the direction of `eval`.
fn bisect_coupling(
    what: &str,
    target: f64,
    increasing: bool,
    eval: &mut impl FnMut(f64) -> Result<f64>,
) -> Result<f64> {
    let (mut lo, mut hi) = COUPLING_BRACKET;
    let v_lo = eval(lo);
    let v_hi = eval(hi);
    let (v_lo, v_hi) = match (v_lo, v_hi) {
        (Ok(a), Ok(b)) => (a, b),
        (a, b) => {
            return Err(Error::CalibrationFailure(format!(
                "{what}: cannot evaluate bracket ends [{lo:e}, {hi:e}] F: {a:?} / {b:?}"
            )))
        }
    };
    let (min, max) = if increasing {
        (v_lo, v_hi)
    } else {
        (v_hi, v_lo)
    };
    if !(target >= min && target <= max) {
        return Err(Error::CalibrationFailure(format!(
            "{what}: target {target:e} unreachable; bracket [{lo:e}, {hi:e}] F achieves [{min:e}, {max:e}]"
        )));
    }
    for _ in 0..100 {
        let mid = (lo * hi).sqrt();
        let v = eval(mid)?;
        if ((v - target) / target).abs() <= 1e-7 || hi / lo <= 1.0 + 1e-12 {
            return Ok(mid);
        }
        if (v < target) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo * hi).sqrt())
}

fn purcell_seconds(sc: &Scenario, f: f64) -> Result<f64> {
    let (sections, termination) = sc.network()?;
    let y = env_admittance_of(&sections, termination, f)?;
    match purcell_t1(y, f, &sc.qubit)? {
        Lifetime::Finite(t) => Ok(t),
        Lifetime::Unbounded => Ok(f64::INFINITY),
    }
}

/// Calibrate `c_kappa` to the linewidth target, then `c_q` to the lifetime
/// anchor, retuning the resonator length so the loaded resonance stays on
/// `f_r`. A second pass refines both; it must move κ by less than 1%.
pub fn calibrate_readout(
    template: &Scenario,
    kappa_target: f64,
    t1_anchor: (f64, f64),
) -> Result<Calibration> {
    if template.environment != Environment::NoFilter {
        return Err(Error::validation(
            "readout calibration needs a no-filter template",
        ));
    }
    readout_of(template)?;
    template.validate()?;
    let (anchor_f, anchor_t1) = t1_anchor;
    if !(kappa_target > 0.0) {
        return Err(Error::CalibrationFailure(format!(
            "linewidth target {kappa_target} Hz is unreachable"
        )));
    }
    if !(anchor_f > 0.0 && anchor_t1 > 0.0) {
        return Err(Error::validation("lifetime anchor must be positive"));
    }

    let mut sc = *template;
    sc.readout_mut().expect("checked").kappa_target = kappa_target;

    let mut kappa_after = Vec::with_capacity(2);
    let mut backaction = 0.0;
    for pass in 0..2 {
        let c_kappa = bisect_coupling("c_kappa", kappa_target, true, &mut |c| {
            let mut trial = sc;
            trial.readout_mut().expect("checked").c_kappa = c;
            Ok(retune_resonator(&mut trial)?.fwhm)
        })?;
        sc.readout_mut().expect("checked").c_kappa = c_kappa;
        retune_resonator(&mut sc)?;

        let c_q = bisect_coupling("c_q", anchor_t1, false, &mut |c| {
            let mut trial = sc;
            trial.readout_mut().expect("checked").c_q = c;
            retune_resonator(&mut trial)?;
            purcell_seconds(&trial, anchor_f)
        })?;
        sc.readout_mut().expect("checked").c_q = c_q;
        let kappa = retune_resonator(&mut sc)?.fwhm;
        if pass == 0 {
            backaction = (kappa - kappa_target).abs() / kappa_target;
        }
        kappa_after.push(kappa);
    }

    let kappa = kappa_after[1];
    let kappa_drift = (kappa - kappa_after[0]).abs() / kappa_after[0];
    if kappa_drift >= 0.01 {
        return Err(Error::CalibrationFailure(format!(
            "refinement pass moved kappa by {:.3}%",
            100.0 * kappa_drift
        )));
    }
    let t1 = purcell_seconds(&sc, anchor_f)?;
    for (name, got, want) in [("kappa", kappa, kappa_target), ("t1 anchor", t1, anchor_t1)] {
        if ((got - want) / want).abs() > 0.01 {
            return Err(Error::CalibrationFailure(format!(
                "{name} settled at {got:e} against target {want:e}"
            )));
        }
    }
    Ok(Calibration {
        scenario: sc,
        kappa,
        t1_anchor: t1,
        anchor_frequency: anchor_f,
        kappa_drift,
        kappa_backaction: backaction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::device;
    use crate::purcell::presets::reference_calibration;

    #[test]
    fn reference_calibration_hits_targets() {
        let cal = reference_calibration();
        assert!((cal.kappa - 7e6).abs() <= 0.01 * 7e6, "{}", cal.kappa);
        assert!(
            (cal.t1_anchor - 5e-6).abs() <= 0.01 * 5e-6,
            "{}",
            cal.t1_anchor
        );
        assert!(cal.kappa_drift < 0.01);
        let r = cal.scenario.readout.unwrap();
        assert!(r.c_kappa > COUPLING_BRACKET.0 && r.c_kappa < COUPLING_BRACKET.1);
        assert!(r.c_q > COUPLING_BRACKET.0 && r.c_q < COUPLING_BRACKET.1);
        // Independent re-measurement of both observables.
        assert!((linewidth_kappa(&cal.scenario).unwrap() - cal.kappa).abs() < 2e3);
        let t1 = purcell_seconds(&cal.scenario, 5e9).unwrap();
        assert!((t1 - 5e-6).abs() <= 0.01 * 5e-6);
    }

    #[test]
    fn peak_sits_on_resonator_frequency() {
        let res = resonance(&reference_calibration().scenario).unwrap();
        assert!((res.peak_frequency - device::F_RESONATOR_HZ).abs() <= 1e3);
    }

    #[test]
    fn doubling_feed_coupling_quadruples_linewidth() {
        let sc = reference_calibration().scenario;
        let k1 = linewidth_kappa(&sc).unwrap();
        let mut doubled = sc;
        doubled.readout_mut().unwrap().c_kappa *= 2.0;
        let k2 = linewidth_kappa(&doubled).unwrap();
        let ratio = k2 / k1;
        assert!((ratio - 4.0).abs() <= 0.2 * 4.0, "{ratio}");
    }

    #[test]
    fn linewidth_nondecreasing_in_feed_coupling() {
        let sc = reference_calibration().scenario;
        let mut last = 0.0;
        for c in [5e-15, 15e-15, 40e-15] {
            let mut s = sc;
            s.readout_mut().unwrap().c_kappa = c;
            let k = retune_resonator(&mut s).unwrap().fwhm;
            assert!(k >= last, "{c}: {k} < {last}");
            last = k;
        }
    }

    #[test]
    fn detached_resonator_is_ambiguous() {
        let mut sc = Scenario::reference_no_filter();
        sc.readout_mut().unwrap().c_kappa = 0.0;
        assert!(matches!(
            linewidth_kappa(&sc),
            Err(Error::AmbiguousResonance(_))
        ));
    }

    #[test]
    fn zero_linewidth_target_fails() {
        let err =
            calibrate_readout(&Scenario::reference_no_filter(), 0.0, (5e9, 5e-6)).unwrap_err();
        assert!(matches!(err, Error::CalibrationFailure(_)));
    }

    #[test]
    fn unreachable_linewidth_reports_extremes() {
        let err =
            calibrate_readout(&Scenario::reference_no_filter(), 1e9, (5e9, 5e-6)).unwrap_err();
        let Error::CalibrationFailure(msg) = err else {
            panic!("{err:?}")
        };
        assert!(msg.contains("bracket"), "{msg}");
    }

    #[test]
    fn filtered_template_rejected() {
        let sc =
            Scenario::reference_no_filter().with_environment(Environment::low_q_bandpass(6.42e9));
        assert!(matches!(
            calibrate_readout(&sc, 7e6, (5e9, 5e-6)),
            Err(Error::Validation(_))
        ));
    }
}
