// SPDX-License-Identifier: Apache-2.0

//! Run configuration files.
//!
//! Line grammar, one entry per line:
//!
//! ```text
//! # comment
//! [section]
//! key: value [unit]
//! ```
//!
//! Dimensioned values must carry a unit; dimensionless ones must not.
//! Unknown sections, keys and units are errors, as are repeated keys.
//! Omitted keys take the reference device values. [`to_text`] writes every
//! field in SI base units so that `parse_config(&to_text(c)) == c`.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use sipf_core::constants::{device, filter, trace, EPS_R_SAPPHIRE, Z_ENV};
use sipf_core::{Quantity, ScenarioKind};

/// Physical dimension of a configuration value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Frequency,
    Length,
    Capacitance,
    Inductance,
    Resistance,
    ResistancePerLength,
    Time,
}

impl Dimension {
    /// Accepted unit spellings with their SI scale as a power of ten; the
    /// first entry is the base unit used for serialization.
    pub fn units(self) -> &'static [(&'static str, i32)] {
        match self {
            Dimension::Frequency => &[("Hz", 0), ("kHz", 3), ("MHz", 6), ("GHz", 9)],
            Dimension::Length => &[("m", 0), ("mm", -3), ("um", -6), ("μm", -6), ("nm", -9)],
            Dimension::Capacitance => &[("F", 0), ("pF", -12), ("fF", -15)],
            Dimension::Inductance => &[("H", 0), ("nH", -9), ("pH", -12)],
            Dimension::Resistance => &[("ohm", 0), ("Ω", 0), ("kohm", 3)],
            Dimension::ResistancePerLength => &[
                ("ohm/m", 0),
                ("Ω/m", 0),
                ("mohm/m", -3),
                ("ohm/mm", 3),
                ("nohm/um", -3),
                ("nΩ/μm", -3),
            ],
            Dimension::Time => &[("s", 0), ("ms", -3), ("us", -6), ("μs", -6), ("ns", -9)],
        }
    }

    fn base(self) -> &'static str {
        self.units()[0].0
    }

    fn name(self) -> &'static str {
        match self {
            Dimension::Frequency => "frequency",
            Dimension::Length => "length",
            Dimension::Capacitance => "capacitance",
            Dimension::Inductance => "inductance",
            Dimension::Resistance => "resistance",
            Dimension::ResistancePerLength => "resistance per length",
            Dimension::Time => "time",
        }
    }

    fn spellings(self) -> String {
        self.units()
            .iter()
            .map(|u| u.0)
            .collect::<Vec<_>>()
            .join(", ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigErrorKind {
    Syntax(String),
    UnknownSection,
    UnknownKey,
    DuplicateKey,
    UnitMissing(Dimension),
    UnexpectedUnit(String),
    UnknownUnit { unit: String, dimension: Dimension },
    InvalidValue(String),
    RangeInverted(String),
}

/// A configuration problem located by line (when known) and field.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ConfigError {
    pub line: Option<usize>,
    /// `section.key`, or the section name for section-level errors.
    pub field: String,
    pub kind: ConfigErrorKind,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}, ")?;
        }
        write!(f, "field `{}`: ", self.field)?;
        match &self.kind {
            ConfigErrorKind::Syntax(m) => write!(f, "syntax error: {m}"),
            ConfigErrorKind::UnknownSection => f.write_str("unknown section"),
            ConfigErrorKind::UnknownKey => f.write_str("unknown key"),
            ConfigErrorKind::DuplicateKey => f.write_str("key given more than once"),
            ConfigErrorKind::UnitMissing(d) => {
                write!(
                    f,
                    "unit missing; {} needs one of {}",
                    d.name(),
                    d.spellings()
                )
            }
            ConfigErrorKind::UnexpectedUnit(u) => write!(f, "dimensionless value given unit `{u}`"),
            ConfigErrorKind::UnknownUnit { unit, dimension } => write!(
                f,
                "unknown {} unit `{unit}`; expected one of {}",
                dimension.name(),
                dimension.spellings()
            ),
            ConfigErrorKind::InvalidValue(m) => write!(f, "invalid value: {m}"),
            ConfigErrorKind::RangeInverted(m) => write!(f, "range inverted: {m}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Touchstone,
    Plot,
}

impl OutputFormat {
    pub const ALL: [OutputFormat; 3] = [
        OutputFormat::Csv,
        OutputFormat::Touchstone,
        OutputFormat::Plot,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Touchstone => "touchstone",
            OutputFormat::Plot => "plot",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    pub c_sigma: f64,
    pub q_intrinsic: Option<f64>,
    pub f_r: f64,
    pub z0_res: f64,
    pub eps_eff_res: f64,
    pub kappa: f64,
    /// `None` calibrates against `kappa`.
    pub c_kappa: Option<f64>,
    /// `None` calibrates against the lifetime anchor.
    pub c_q: Option<f64>,
    pub t1_anchor_frequency: f64,
    pub t1_anchor: f64,
    pub wirebond: f64,
    pub z_env: f64,
    pub stub_frequency: f64,
    pub bandpass_q: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterConfig {
    pub sections: usize,
    pub z_lo: f64,
    pub z_hi: f64,
    pub eps_eff: f64,
    pub stopband_entry: f64,
    pub stopband_exit: f64,
    /// Explicit section lengths; `None` calibrates to the stopband targets.
    pub len_lo: Option<f64>,
    pub len_hi: Option<f64>,
    pub r_per_len: f64,
    pub tan_delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceConfig {
    pub length: f64,
    pub z0: f64,
    pub eps_r: f64,
    pub tan_delta: f64,
    pub r_per_len: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    /// Step inside `f_r ± 20κ`; zero disables refinement.
    pub resonance_step: f64,
    pub include_intrinsic: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub directory: String,
    pub quantities: Vec<Quantity>,
    pub formats: Vec<OutputFormat>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ToleranceConfig {
    pub band_edge_scan_step: f64,
    pub band_edge_tolerance: f64,
    pub length_edge_tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub name: String,
    pub scenario: ScenarioConfig,
    pub filter: FilterConfig,
    pub trace: TraceConfig,
    pub sweep: SweepConfig,
    pub output: OutputConfig,
    pub tolerance: ToleranceConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            name: "run".into(),
            scenario: ScenarioConfig {
                kind: ScenarioKind::IntegratedSipf,
                c_sigma: device::C_SIGMA_F,
                q_intrinsic: None,
                f_r: device::F_RESONATOR_HZ,
                z0_res: device::Z0_RESONATOR,
                eps_eff_res: (1.0 + EPS_R_SAPPHIRE) / 2.0,
                kappa: device::KAPPA_HZ,
                c_kappa: None,
                c_q: None,
                t1_anchor_frequency: device::T1_ANCHOR.0,
                t1_anchor: device::T1_ANCHOR.1,
                wirebond: device::WIREBOND_H,
                z_env: Z_ENV,
                stub_frequency: device::QUBIT_DESIGN_HZ,
                bandpass_q: 30.0,
            },
            filter: FilterConfig {
                sections: filter::N_SECTIONS,
                z_lo: filter::Z_LO,
                z_hi: filter::Z_HI,
                eps_eff: filter::EPS_EFF,
                stopband_entry: filter::STOPBAND_ENTRY_HZ,
                stopband_exit: filter::STOPBAND_EXIT_HZ,
                len_lo: None,
                len_hi: None,
                r_per_len: 0.0,
                tan_delta: 0.0,
            },
            trace: TraceConfig {
                length: trace::LENGTH_M,
                z0: trace::Z0,
                eps_r: trace::EPS_R,
                tan_delta: trace::TAN_DELTA,
                r_per_len: trace::R_PER_LEN,
            },
            sweep: SweepConfig {
                start: 1e9,
                stop: 7e9,
                step: 1e6,
                resonance_step: 0.1e6,
                include_intrinsic: false,
            },
            output: OutputConfig {
                directory: "out".into(),
                quantities: vec![Quantity::S21, Quantity::T1Purcell],
                formats: OutputFormat::ALL.to_vec(),
            },
            tolerance: ToleranceConfig {
                band_edge_scan_step: 1e6,
                band_edge_tolerance: 1e3,
                length_edge_tolerance: 1e6,
            },
        }
    }
}

/// One `key: value [unit]` entry.
struct Entry<'a> {
    line: usize,
    field: String,
    value: &'a str,
}

impl Entry<'_> {
    fn err(&self, kind: ConfigErrorKind) -> ConfigError {
        ConfigError {
            line: Some(self.line),
            field: self.field.clone(),
            kind,
        }
    }

    fn invalid(&self, msg: impl Into<String>) -> ConfigError {
        self.err(ConfigErrorKind::InvalidValue(msg.into()))
    }

    fn split(&self) -> (&str, Option<&str>) {
        match self.value.split_once(char::is_whitespace) {
            Some((num, unit)) => (num, Some(unit.trim())),
            None => (self.value, None),
        }
    }

    fn number(&self, text: &str) -> Result<f64, ConfigError> {
        text.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| self.invalid(format!("`{text}` is not a finite number")))
    }

    fn quantity(&self, dim: Dimension) -> Result<f64, ConfigError> {
        let (num, unit) = self.split();
        let Some(unit) = unit else {
            self.number(num)?;
            return Err(self.err(ConfigErrorKind::UnitMissing(dim)));
        };
        let scale = dim
            .units()
            .iter()
            .find(|(name, _)| *name == unit)
            .map(|u| u.1)
            .ok_or_else(|| {
                self.err(ConfigErrorKind::UnknownUnit {
                    unit: unit.to_string(),
                    dimension: dim,
                })
            })?;
        let v = self.number(num)?;
        // Dividing by an exact power of ten keeps decimal input exact.
        Ok(if scale >= 0 {
            v * 10f64.powi(scale)
        } else {
            v / 10f64.powi(-scale)
        })
    }

    fn positive(&self, dim: Dimension) -> Result<f64, ConfigError> {
        let v = self.quantity(dim)?;
        if v > 0.0 {
            Ok(v)
        } else {
            Err(self.invalid("must be positive"))
        }
    }

    fn non_negative(&self, dim: Dimension) -> Result<f64, ConfigError> {
        let v = self.quantity(dim)?;
        if v >= 0.0 {
            Ok(v)
        } else {
            Err(self.invalid("must not be negative"))
        }
    }

    /// `auto` or a positive dimensioned value.
    fn auto(&self, dim: Dimension) -> Result<Option<f64>, ConfigError> {
        if self.value == "auto" {
            Ok(None)
        } else {
            self.positive(dim).map(Some)
        }
    }

    fn scalar(&self) -> Result<f64, ConfigError> {
        let (num, unit) = self.split();
        if let Some(u) = unit {
            return Err(self.err(ConfigErrorKind::UnexpectedUnit(u.to_string())));
        }
        self.number(num)
    }

    fn scalar_at_least(&self, min: f64) -> Result<f64, ConfigError> {
        let v = self.scalar()?;
        if v >= min {
            Ok(v)
        } else {
            Err(self.invalid(format!("must be at least {min}")))
        }
    }

    fn boolean(&self) -> Result<bool, ConfigError> {
        match self.value {
            "true" => Ok(true),
            "false" => Ok(false),
            other => Err(self.invalid(format!("`{other}` is not true or false"))),
        }
    }

    fn list(&self) -> Vec<&str> {
        self.value
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect()
    }
}

fn located(field: &str, lines: &HashMap<String, usize>, kind: ConfigErrorKind) -> ConfigError {
    ConfigError {
        line: lines.get(field).copied(),
        field: field.to_string(),
        kind,
    }
}

/// Parse and validate a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut section = String::from("run");
    let mut seen: HashMap<String, usize> = HashMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| ConfigError {
                line: Some(line),
                field: rest.to_string(),
                kind: ConfigErrorKind::Syntax("section header needs a closing `]`".into()),
            })?;
            let name = name.trim();
            if ![
                "run",
                "scenario",
                "filter",
                "trace",
                "sweep",
                "output",
                "tolerance",
            ]
            .contains(&name)
            {
                return Err(ConfigError {
                    line: Some(line),
                    field: name.to_string(),
                    kind: ConfigErrorKind::UnknownSection,
                });
            }
            section = name.to_string();
            continue;
        }
        let (key, value) = content.split_once(':').ok_or_else(|| ConfigError {
            line: Some(line),
            field: format!("{section}.{content}"),
            kind: ConfigErrorKind::Syntax("expected `key: value`".into()),
        })?;
        let entry = Entry {
            line,
            field: format!("{section}.{}", key.trim()),
            value: value.trim(),
        };
        if entry.value.is_empty() {
            return Err(entry.err(ConfigErrorKind::Syntax("missing value".into())));
        }
        if seen.insert(entry.field.clone(), line).is_some() {
            return Err(entry.err(ConfigErrorKind::DuplicateKey));
        }
        apply(&mut cfg, &entry)?;
    }
    validate(&cfg, &seen)?;
    Ok(cfg)
}

fn apply(cfg: &mut RunConfig, e: &Entry) -> Result<(), ConfigError> {
    use Dimension::*;
    let s = &mut cfg.scenario;
    let fl = &mut cfg.filter;
    let tr = &mut cfg.trace;
    let sw = &mut cfg.sweep;
    match e.field.as_str() {
        "run.name" => {
            if e.value
                .chars()
                .any(|c| c.is_whitespace() || c == '/' || c == '\\')
            {
                return Err(e.invalid("name must be a single path-safe word"));
            }
            cfg.name = e.value.to_string();
        }
        "scenario.kind" => {
            s.kind = ScenarioKind::from_name(e.value).ok_or_else(|| {
                let names: Vec<_> = ScenarioKind::ALL.iter().map(|k| k.name()).collect();
                e.invalid(format!(
                    "unknown scenario kind; expected one of {}",
                    names.join(", ")
                ))
            })?
        }
        "scenario.c_sigma" => s.c_sigma = e.positive(Capacitance)?,
        "scenario.q_intrinsic" => {
            s.q_intrinsic = if e.value == "none" {
                None
            } else {
                let q = e.scalar()?;
                if !(q > 0.0) {
                    return Err(e.invalid("must be positive or `none`"));
                }
                Some(q)
            }
        }
        "scenario.f_r" => s.f_r = e.positive(Frequency)?,
        "scenario.z0_res" => s.z0_res = e.positive(Resistance)?,
        "scenario.eps_eff_res" => s.eps_eff_res = e.scalar_at_least(1.0)?,
        "scenario.kappa" => s.kappa = e.positive(Frequency)?,
        "scenario.c_kappa" => s.c_kappa = e.auto(Capacitance)?,
        "scenario.c_q" => s.c_q = e.auto(Capacitance)?,
        "scenario.t1_anchor_frequency" => s.t1_anchor_frequency = e.positive(Frequency)?,
        "scenario.t1_anchor" => s.t1_anchor = e.positive(Time)?,
        "scenario.wirebond" => s.wirebond = e.non_negative(Inductance)?,
        "scenario.z_env" => s.z_env = e.positive(Resistance)?,
        "scenario.stub_frequency" => s.stub_frequency = e.positive(Frequency)?,
        "scenario.bandpass_q" => {
            s.bandpass_q = e.scalar()?;
            if !(s.bandpass_q > 0.0) {
                return Err(e.invalid("must be positive"));
            }
        }
        "filter.sections" => {
            let n: usize = e
                .value
                .parse()
                .map_err(|_| e.invalid("expected an integer"))?;
            if n < 3 || n.is_multiple_of(2) {
                return Err(e.invalid("section count must be odd and at least 3"));
            }
            fl.sections = n;
        }
        "filter.z_lo" => fl.z_lo = e.positive(Resistance)?,
        "filter.z_hi" => fl.z_hi = e.positive(Resistance)?,
        "filter.eps_eff" => fl.eps_eff = e.scalar_at_least(1.0)?,
        "filter.stopband_entry" => fl.stopband_entry = e.positive(Frequency)?,
        "filter.stopband_exit" => fl.stopband_exit = e.positive(Frequency)?,
        "filter.len_lo" => fl.len_lo = e.auto(Length)?,
        "filter.len_hi" => fl.len_hi = e.auto(Length)?,
        "filter.r_per_len" => fl.r_per_len = e.non_negative(ResistancePerLength)?,
        "filter.tan_delta" => fl.tan_delta = e.scalar_at_least(0.0)?,
        "trace.length" | "scenario.trace_length" => tr.length = e.non_negative(Length)?,
        "trace.z0" => tr.z0 = e.positive(Resistance)?,
        "trace.eps_r" => tr.eps_r = e.scalar_at_least(1.0)?,
        "trace.tan_delta" => tr.tan_delta = e.scalar_at_least(0.0)?,
        "trace.r_per_len" => tr.r_per_len = e.non_negative(ResistancePerLength)?,
        "sweep.start" => sw.start = e.positive(Frequency)?,
        "sweep.stop" => sw.stop = e.positive(Frequency)?,
        "sweep.step" => sw.step = e.positive(Frequency)?,
        "sweep.resonance_step" => sw.resonance_step = e.non_negative(Frequency)?,
        "sweep.include_intrinsic" => sw.include_intrinsic = e.boolean()?,
        "output.directory" => cfg.output.directory = e.value.to_string(),
        "output.quantities" => {
            let mut qs = Vec::new();
            for name in e.list() {
                let q = Quantity::from_name(name)
                    .ok_or_else(|| e.invalid(format!("unknown quantity `{name}`")))?;
                if qs.contains(&q) {
                    return Err(e.invalid(format!("quantity `{name}` listed twice")));
                }
                qs.push(q);
            }
            if qs.is_empty() {
                return Err(e.invalid("at least one quantity is required"));
            }
            cfg.output.quantities = qs;
        }
        "output.formats" => {
            let mut fs = Vec::new();
            for name in e.list() {
                let f = OutputFormat::from_name(name)
                    .ok_or_else(|| e.invalid(format!("unknown format `{name}`")))?;
                if !fs.contains(&f) {
                    fs.push(f);
                }
            }
            cfg.output.formats = fs;
        }
        "tolerance.band_edge_scan_step" => {
            cfg.tolerance.band_edge_scan_step = e.positive(Frequency)?
        }
        "tolerance.band_edge_tolerance" => {
            cfg.tolerance.band_edge_tolerance = e.positive(Frequency)?
        }
        "tolerance.length_edge_tolerance" => {
            cfg.tolerance.length_edge_tolerance = e.positive(Frequency)?
        }
        _ => return Err(e.err(ConfigErrorKind::UnknownKey)),
    }
    Ok(())
}

fn validate(cfg: &RunConfig, lines: &HashMap<String, usize>) -> Result<(), ConfigError> {
    let sw = &cfg.sweep;
    if sw.stop <= sw.start {
        let field = if lines.contains_key("sweep.stop") {
            "sweep.stop"
        } else {
            "sweep.start"
        };
        return Err(located(
            field,
            lines,
            ConfigErrorKind::RangeInverted(format!(
                "sweep stop {} Hz is not above start {} Hz",
                sw.stop, sw.start
            )),
        ));
    }
    if sw.step > sw.stop - sw.start {
        return Err(located(
            "sweep.step",
            lines,
            ConfigErrorKind::InvalidValue("step exceeds the sweep range".into()),
        ));
    }
    let fl = &cfg.filter;
    if fl.stopband_exit <= fl.stopband_entry {
        let field = if lines.contains_key("filter.stopband_exit") {
            "filter.stopband_exit"
        } else {
            "filter.stopband_entry"
        };
        return Err(located(
            field,
            lines,
            ConfigErrorKind::RangeInverted("stopband exit must lie above entry".into()),
        ));
    }
    if fl.len_lo.is_some() != fl.len_hi.is_some() {
        return Err(located(
            "filter.len_hi",
            lines,
            ConfigErrorKind::InvalidValue("give both section lengths or neither".into()),
        ));
    }
    if cfg.scenario.kind == ScenarioKind::StandaloneSipf && !(cfg.trace.length > 0.0) {
        return Err(located(
            "trace.length",
            lines,
            ConfigErrorKind::InvalidValue(
                "standalone scenario needs a positive trace length".into(),
            ),
        ));
    }
    if cfg.output.directory.is_empty() {
        return Err(located(
            "output.directory",
            lines,
            ConfigErrorKind::InvalidValue("must not be empty".into()),
        ));
    }
    Ok(())
}

/// Shortest round-trip text; exponent form outside `[1e-3, 1e7)`.
fn number_text(v: f64) -> String {
    if v == 0.0 || (1e-3..1e7).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn quantity_text(v: f64, dim: Dimension) -> String {
    format!("{} {}", number_text(v), dim.base())
}

fn auto_text(v: Option<f64>, dim: Dimension) -> String {
    v.map_or_else(|| "auto".to_string(), |v| quantity_text(v, dim))
}

/// Serialize every field in SI base units.
pub fn to_text(cfg: &RunConfig) -> String {
    use Dimension::*;
    let mut out = String::new();
    let mut put = |key: &str, value: String| {
        writeln!(out, "{key}: {value}").expect("write to string");
    };
    put("name", cfg.name.clone());

    let s = &cfg.scenario;
    put("\n[scenario]\nkind", s.kind.name().to_string());
    put("c_sigma", quantity_text(s.c_sigma, Capacitance));
    put(
        "q_intrinsic",
        s.q_intrinsic
            .map_or_else(|| "none".into(), |q| number_text(q)),
    );
    put("f_r", quantity_text(s.f_r, Frequency));
    put("z0_res", quantity_text(s.z0_res, Resistance));
    put("eps_eff_res", number_text(s.eps_eff_res));
    put("kappa", quantity_text(s.kappa, Frequency));
    put("c_kappa", auto_text(s.c_kappa, Capacitance));
    put("c_q", auto_text(s.c_q, Capacitance));
    put(
        "t1_anchor_frequency",
        quantity_text(s.t1_anchor_frequency, Frequency),
    );
    put("t1_anchor", quantity_text(s.t1_anchor, Time));
    put("wirebond", quantity_text(s.wirebond, Inductance));
    put("z_env", quantity_text(s.z_env, Resistance));
    put("stub_frequency", quantity_text(s.stub_frequency, Frequency));
    put("bandpass_q", number_text(s.bandpass_q));

    let f = &cfg.filter;
    put("\n[filter]\nsections", f.sections.to_string());
    put("z_lo", quantity_text(f.z_lo, Resistance));
    put("z_hi", quantity_text(f.z_hi, Resistance));
    put("eps_eff", number_text(f.eps_eff));
    put("stopband_entry", quantity_text(f.stopband_entry, Frequency));
    put("stopband_exit", quantity_text(f.stopband_exit, Frequency));
    put("len_lo", auto_text(f.len_lo, Length));
    put("len_hi", auto_text(f.len_hi, Length));
    put("r_per_len", quantity_text(f.r_per_len, ResistancePerLength));
    put("tan_delta", number_text(f.tan_delta));

    let t = &cfg.trace;
    put("\n[trace]\nlength", quantity_text(t.length, Length));
    put("z0", quantity_text(t.z0, Resistance));
    put("eps_r", number_text(t.eps_r));
    put("tan_delta", number_text(t.tan_delta));
    put("r_per_len", quantity_text(t.r_per_len, ResistancePerLength));

    let w = &cfg.sweep;
    put("\n[sweep]\nstart", quantity_text(w.start, Frequency));
    put("stop", quantity_text(w.stop, Frequency));
    put("step", quantity_text(w.step, Frequency));
    put("resonance_step", quantity_text(w.resonance_step, Frequency));
    put("include_intrinsic", w.include_intrinsic.to_string());

    let o = &cfg.output;
    put("\n[output]\ndirectory", o.directory.clone());
    put(
        "quantities",
        o.quantities
            .iter()
            .map(|q| q.name())
            .collect::<Vec<_>>()
            .join(", "),
    );
    put(
        "formats",
        o.formats
            .iter()
            .map(|f| f.name())
            .collect::<Vec<_>>()
            .join(", "),
    );

    let tol = &cfg.tolerance;
    put(
        "\n[tolerance]\nband_edge_scan_step",
        quantity_text(tol.band_edge_scan_step, Frequency),
    );
    put(
        "band_edge_tolerance",
        quantity_text(tol.band_edge_tolerance, Frequency),
    );
    put(
        "length_edge_tolerance",
        quantity_text(tol.length_edge_tolerance, Frequency),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_integrated_body_takes_reference_values() {
        let cfg = parse_config("[scenario]\nkind: integrated-sipf\n").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.filter.z_lo, 25.0);
        assert_eq!(cfg.filter.z_hi, 120.0);
        assert_eq!(cfg.filter.sections, 5);
        assert_eq!(cfg.scenario.f_r, 6.42e9);
        assert_eq!(cfg.scenario.kappa, 7e6);
        assert_eq!(cfg.scenario.wirebond, 2e-9);
        assert_eq!((cfg.trace.eps_r, cfg.trace.tan_delta), (3.66, 0.0127));
        assert!((cfg.trace.r_per_len - 8.7e-3).abs() < 1e-18);
        assert_eq!(cfg.trace.length, 10e-3);
    }

    #[test]
    fn bare_number_for_length_is_unit_missing() {
        let err =
            parse_config("[scenario]\nkind: standalone-sipf\ntrace_length: 10\n").unwrap_err();
        assert_eq!(err.line, Some(3));
        assert_eq!(err.field, "scenario.trace_length");
        assert_eq!(err.kind, ConfigErrorKind::UnitMissing(Dimension::Length));
    }

    #[test]
    fn units_are_normalized() {
        let cfg = parse_config(
            "[trace]\nlength: 15 mm\nr_per_len: 8.7 nΩ/μm\n[scenario]\nc_kappa: 20 fF\nwirebond: 1.5 nH\nt1_anchor: 5 us\n",
        )
        .unwrap();
        assert!((cfg.trace.length - 15e-3).abs() < 1e-18);
        assert!((cfg.trace.r_per_len - 8.7e-3).abs() < 1e-18);
        assert!((cfg.scenario.c_kappa.unwrap() - 20e-15).abs() < 1e-28);
        assert!((cfg.scenario.wirebond - 1.5e-9).abs() < 1e-22);
        assert!((cfg.scenario.t1_anchor - 5e-6).abs() < 1e-20);
    }

    #[test]
    fn unknown_key_section_and_unit() {
        let e = parse_config("[sweep]\nstrat: 1 GHz\n").unwrap_err();
        assert_eq!((e.line, e.kind), (Some(2), ConfigErrorKind::UnknownKey));
        let e = parse_config("[swep]\n").unwrap_err();
        assert_eq!(e.kind, ConfigErrorKind::UnknownSection);
        let e = parse_config("[sweep]\nstart: 1 Ghz\n").unwrap_err();
        assert!(matches!(e.kind, ConfigErrorKind::UnknownUnit { .. }));
        let e = parse_config("[filter]\neps_eff: 5.7 ohm\n").unwrap_err();
        assert!(matches!(e.kind, ConfigErrorKind::UnexpectedUnit(_)));
    }

    #[test]
    fn inverted_and_empty_ranges() {
        let e = parse_config("[sweep]\nstart: 5 GHz\nstop: 4 GHz\n").unwrap_err();
        assert_eq!(e.line, Some(3));
        assert!(matches!(e.kind, ConfigErrorKind::RangeInverted(_)));
        let e = parse_config("[sweep]\nstart: 5 GHz\nstop: 5 GHz\n").unwrap_err();
        assert!(matches!(e.kind, ConfigErrorKind::RangeInverted(_)));
        let e = parse_config("[filter]\nstopband_entry: 6 GHz\n").unwrap_err();
        assert_eq!(e.line, Some(2));
    }

    #[test]
    fn duplicate_keys_rejected() {
        let e = parse_config("[sweep]\nstep: 1 MHz\nstep: 2 MHz\n").unwrap_err();
        assert_eq!((e.line, e.kind), (Some(3), ConfigErrorKind::DuplicateKey));
    }

    #[test]
    fn error_message_names_line_and_field() {
        let e = parse_config("\n[trace]\nlength: 10\n").unwrap_err();
        let msg = e.to_string();
        assert!(
            msg.starts_with("line 3, field `trace.length`: unit missing"),
            "{msg}"
        );
    }

    #[test]
    fn round_trip_of_defaults() {
        let cfg = RunConfig::default();
        assert_eq!(parse_config(&to_text(&cfg)).unwrap(), cfg);
    }

    #[test]
    fn comments_and_blank_lines() {
        let cfg = parse_config("# header\n\n[sweep]  \nstep: 2 MHz # coarse\n").unwrap();
        assert_eq!(cfg.sweep.step, 2e6);
    }
}
