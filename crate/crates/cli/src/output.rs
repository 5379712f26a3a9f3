// SPDX-License-Identifier: Apache-2.0

//! CSV tables and Touchstone files.

use std::fmt::Write as _;

use sipf_core::{Error, Quantity, SweepResult};

/// Column header, including the unit.
pub fn column_name(q: Quantity) -> &'static str {
    match q {
        Quantity::S11 => "s11_db",
        Quantity::S21 => "s21_db",
        Quantity::ReY => "re_y_s",
        Quantity::T1Purcell => "t1_purcell_s",
        Quantity::T1Total => "t1_total_s",
        Quantity::Detuning => "detuning_hz",
    }
}

/// Shortest round-trip representation; `inf` for unbounded lifetimes.
pub fn format_value(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v:e}")
    }
}

/// One row per frequency: `frequency_hz`, the requested quantities in
/// order, then `flag` (empty unless the point is annotated).
pub fn emit_csv(sweep: &SweepResult, quantities: &[Quantity]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["frequency_hz"];
    header.extend(quantities.iter().map(|&q| column_name(q)));
    header.push("flag");
    w.write_record(&header)?;
    for p in &sweep.points {
        let mut row = vec![format_value(p.frequency)];
        row.extend(
            quantities
                .iter()
                .map(|q| q.value(p).map(format_value).unwrap_or_default()),
        );
        row.push(
            p.annotation
                .map(|a| a.label().to_string())
                .unwrap_or_default(),
        );
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Round to 9 significant digits and print compactly: plain decimals for
/// moderate magnitudes, exponent form otherwise.
pub fn touchstone_number(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{v:.8e}").parse().expect("formatted float parses");
    let exp = rounded.abs().log10().floor();
    if (-4.0..6.0).contains(&exp) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

/// Touchstone v1 two-port file with the given comment lines.
///
/// Rows hold `f S11 S21 S12 S22` as real/imaginary pairs. Points without
/// S-parameters are skipped; a sweep with none at all is a usage error.
pub fn emit_touchstone_with(
    sweep: &SweepResult,
    z_ref: f64,
    comments: &[String],
) -> Result<String, Error> {
    if !sweep.points.iter().any(|p| p.sparams.is_some()) {
        return Err(Error::Usage(
            "sweep has no S-parameter data to write".into(),
        ));
    }
    if !(z_ref > 0.0) {
        return Err(Error::Validation(format!(
            "reference impedance {z_ref} must be positive"
        )));
    }
    let mut out = String::new();
    for c in comments {
        writeln!(out, "! {c}").expect("write to string");
    }
    writeln!(out, "# Hz S RI R {}", touchstone_number(z_ref)).expect("write to string");
    for p in &sweep.points {
        let Some(s) = p.sparams else { continue };
        let mut row = vec![touchstone_number(p.frequency)];
        for z in [s.s11, s.s21, s.s12, s.s22] {
            row.push(touchstone_number(z.re));
            row.push(touchstone_number(z.im));
        }
        writeln!(out, "{}", row.join(" ")).expect("write to string");
    }
    Ok(out)
}

pub fn emit_touchstone(sweep: &SweepResult, z_ref: f64) -> Result<String, Error> {
    emit_touchstone_with(sweep, z_ref, &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use sipf_core::{abcd_to_sparams, SweepPoint, TwoPortABCD};

    fn through(f: f64) -> SweepResult {
        let mut p = SweepPoint::empty(f);
        p.sparams = Some(abcd_to_sparams(&TwoPortABCD::identity(), 50.0).unwrap());
        SweepResult { points: vec![p] }
    }

    #[test]
    fn matched_through_row() {
        let text = emit_touchstone(&through(1e9), 50.0).unwrap();
        assert_eq!(text, "# Hz S RI R 50\n1e9 0 0 1 0 1 0 0 0\n");
    }

    #[test]
    fn empty_sweep_is_usage_error() {
        let err = emit_touchstone(&SweepResult { points: vec![] }, 50.0).unwrap_err();
        assert!(matches!(err, Error::Usage(_)));
    }

    #[test]
    fn nine_significant_digits() {
        assert_eq!(touchstone_number(0.123456789123), "0.123456789");
        assert_eq!(touchstone_number(-1.0 / 3.0), "-0.333333333");
        assert_eq!(touchstone_number(6.4212345678e9), "6.42123457e9");
        assert_eq!(touchstone_number(1.5e-7), "1.5e-7");
    }

    #[test]
    fn csv_layout() {
        let mut p = SweepPoint::empty(2e9);
        p.admittance = Some(Complex64::new(0.02, 0.0));
        p.t1_purcell = Some(sipf_core::Lifetime::Unbounded);
        let text = emit_csv(
            &SweepResult { points: vec![p] },
            &[Quantity::T1Purcell, Quantity::ReY],
        )
        .unwrap();
        assert_eq!(
            text,
            "frequency_hz,t1_purcell_s,re_y_s,flag\n2e9,inf,2e-2,\n"
        );
    }
}
