//! Flat `key = value` run configuration.
//!
//! Lines are `key = value`; `#` starts a comment; blank lines are ignored. Values may
//! be wrapped in double quotes. Every key has a default except `scenario`, which may
//! instead be supplied by the subcommand.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Safety,
    Backhaul,
    Coverage,
    Materials,
}

impl Scenario {
    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::Safety => "safety",
            Scenario::Backhaul => "backhaul",
            Scenario::Coverage => "coverage",
            Scenario::Materials => "materials",
        }
    }
}

impl FromStr for Scenario {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "safety" => Ok(Scenario::Safety),
            "backhaul" => Ok(Scenario::Backhaul),
            "coverage" => Ok(Scenario::Coverage),
            "materials" => Ok(Scenario::Materials),
            _ => Err(format!(
                "expected one of safety, backhaul, coverage, materials; got `{s}`"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeatmapFormat {
    Csv,
    Pgm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackhaulModes {
    Mimo,
    Ideal,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PowerSetting {
    Auto,
    Milliwatts(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SafetySection {
    pub lambda_start_nm: f64,
    pub lambda_end_nm: f64,
    pub lambda_step_nm: f64,
    pub waists_um: Vec<f64>,
    pub exposure_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BackhaulSection {
    pub n_side: usize,
    pub waist_start_um: f64,
    pub waist_end_um: f64,
    pub waist_step_um: f64,
    pub distance_m: f64,
    pub lambda_nm: f64,
    pub mode: BackhaulModes,
    pub rx_pitch_mm: f64,
    pub pd_half_side_mm: f64,
    pub bandwidth_ghz: f64,
    pub gap_db: f64,
    pub per_beam_power_mw: PowerSetting,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageSection {
    pub resolution: usize,
    pub room_x_m: f64,
    pub room_y_m: f64,
    pub room_z_m: f64,
    pub waist_um: f64,
    pub lambda_nm: f64,
    pub power_mw: f64,
    pub bandwidth_ghz: f64,
    pub gap_db: f64,
    pub pd_area_cm2: f64,
    pub wall_margin_m: f64,
    pub threshold_gbps: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PdSection {
    pub responsivity_a_per_w: f64,
    pub thermal_pa_per_sqrthz: f64,
    pub dark_current_na: f64,
}

/// Fully validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub safety: SafetySection,
    pub backhaul: BackhaulSection,
    pub coverage: CoverageSection,
    pub pd: PdSection,
    pub heatmap_format: HeatmapFormat,
    /// Set from the command line, never from the file.
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn defaults(scenario: Scenario) -> Self {
        RunConfig {
            scenario,
            safety: SafetySection {
                lambda_start_nm: 700.0,
                lambda_end_nm: 1600.0,
                lambda_step_nm: 10.0,
                waists_um: vec![10.0, 50.0, 100.0],
                exposure_s: 30_000.0,
            },
            backhaul: BackhaulSection {
                n_side: 16,
                waist_start_um: 10.0,
                waist_end_um: 100.0,
                waist_step_um: 1.0,
                distance_m: 2.0,
                lambda_nm: 850.0,
                mode: BackhaulModes::Both,
                rx_pitch_mm: 10.0,
                pd_half_side_mm: 2.5,
                bandwidth_ghz: 5.0,
                gap_db: 9.0,
                per_beam_power_mw: PowerSetting::Auto,
            },
            coverage: CoverageSection {
                resolution: 100,
                room_x_m: 5.0,
                room_y_m: 5.0,
                room_z_m: 3.0,
                waist_um: 5.0,
                lambda_nm: 950.0,
                power_mw: 10.0,
                bandwidth_ghz: 5.0,
                gap_db: 9.0,
                pd_area_cm2: 2.0,
                wall_margin_m: 0.25,
                threshold_gbps: 10.0,
            },
            pd: PdSection {
                responsivity_a_per_w: 0.6,
                thermal_pa_per_sqrthz: 10.0,
                dark_current_na: 0.0,
            },
            heatmap_format: HeatmapFormat::Csv,
            output_path: None,
        }
    }
}

type Setter = fn(&mut RunConfig, &str) -> std::result::Result<(), String>;
type Getter = fn(&RunConfig) -> String;

struct KeySpec {
    name: &'static str,
    help: &'static str,
    set: Setter,
    get: Getter,
}

fn num(v: &str) -> std::result::Result<f64, String> {
    let x: f64 = v.parse().map_err(|_| format!("`{v}` is not a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("`{v}` is not finite"))
    }
}

fn ranged(v: &str, lo: f64, hi: f64, lo_open: bool) -> std::result::Result<f64, String> {
    let x = num(v)?;
    let ok_lo = if lo_open { x > lo } else { x >= lo };
    if ok_lo && x <= hi {
        Ok(x)
    } else {
        let open = if lo_open { "(" } else { "[" };
        Err(format!("{x} outside {open}{lo}, {hi}]"))
    }
}

fn positive(v: &str) -> std::result::Result<f64, String> {
    ranged(v, 0.0, f64::MAX, true)
}

fn non_negative(v: &str) -> std::result::Result<f64, String> {
    ranged(v, 0.0, f64::MAX, false)
}

fn count(v: &str, lo: usize, hi: usize) -> std::result::Result<usize, String> {
    let n: usize = v.parse().map_err(|_| format!("`{v}` is not a non-negative integer"))?;
    if (lo..=hi).contains(&n) {
        Ok(n)
    } else {
        Err(format!("{n} outside {lo}..={hi}"))
    }
}

fn list(v: &str, lo: f64, hi: f64) -> std::result::Result<Vec<f64>, String> {
    let items: std::result::Result<Vec<f64>, String> = v.split(',').map(|s| ranged(s.trim(), lo, hi, true)).collect();
    let items = items?;
    if items.is_empty() {
        return Err("list must not be empty".into());
    }
    Ok(items)
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

macro_rules! key {
    ($name:literal, $help:literal, |$c:ident, $v:ident| $set:expr, |$g:ident| $get:expr) => {
        KeySpec {
            name: $name,
            help: $help,
            set: |$c: &mut RunConfig, $v: &str| {
                $set;
                Ok(())
            },
            get: |$g: &RunConfig| $get,
        }
    };
}

const KEYS: &[KeySpec] = &[
    key!(
        "safety.lambda_start_nm",
        "first wavelength, nm [700, 1600]",
        |c, v| c.safety.lambda_start_nm = ranged(v, 700.0, 1600.0, false)?,
        |c| c.safety.lambda_start_nm.to_string()
    ),
    key!(
        "safety.lambda_end_nm",
        "last wavelength, nm [700, 1600], >= start",
        |c, v| c.safety.lambda_end_nm = ranged(v, 700.0, 1600.0, false)?,
        |c| c.safety.lambda_end_nm.to_string()
    ),
    key!(
        "safety.lambda_step_nm",
        "wavelength step, nm (0, 900]",
        |c, v| c.safety.lambda_step_nm = ranged(v, 0.0, 900.0, true)?,
        |c| c.safety.lambda_step_nm.to_string()
    ),
    key!(
        "safety.waists_um",
        "comma-separated beam waists, um (0, 10000]",
        |c, v| c.safety.waists_um = list(v, 0.0, 10_000.0)?,
        |c| format!("\"{}\"", join(&c.safety.waists_um))
    ),
    key!(
        "safety.exposure_s",
        "exposure duration, s (> 0; below 100 s is unsupported)",
        |c, v| c.safety.exposure_s = positive(v)?,
        |c| c.safety.exposure_s.to_string()
    ),
    key!(
        "backhaul.n_side",
        "array side; n_side x n_side beams and detectors, 2..=32",
        |c, v| c.backhaul.n_side = count(v, 2, 32)?,
        |c| c.backhaul.n_side.to_string()
    ),
    key!(
        "backhaul.waist_start_um",
        "first beam waist, um [1, 500]",
        |c, v| c.backhaul.waist_start_um = ranged(v, 1.0, 500.0, false)?,
        |c| c.backhaul.waist_start_um.to_string()
    ),
    key!(
        "backhaul.waist_end_um",
        "last beam waist, um [1, 500], >= start",
        |c, v| c.backhaul.waist_end_um = ranged(v, 1.0, 500.0, false)?,
        |c| c.backhaul.waist_end_um.to_string()
    ),
    key!(
        "backhaul.waist_step_um",
        "waist step, um (0, 500]",
        |c, v| c.backhaul.waist_step_um = ranged(v, 0.0, 500.0, true)?,
        |c| c.backhaul.waist_step_um.to_string()
    ),
    key!(
        "backhaul.distance_m",
        "link distance, m (0, 1000]",
        |c, v| c.backhaul.distance_m = ranged(v, 0.0, 1000.0, true)?,
        |c| c.backhaul.distance_m.to_string()
    ),
    key!(
        "backhaul.lambda_nm",
        "wavelength, nm [700, 1600]",
        |c, v| c.backhaul.lambda_nm = ranged(v, 700.0, 1600.0, false)?,
        |c| c.backhaul.lambda_nm.to_string()
    ),
    key!(
        "backhaul.mode",
        "mimo | ideal | both",
        |c, v| c.backhaul.mode = match v {
            "mimo" => BackhaulModes::Mimo,
            "ideal" => BackhaulModes::Ideal,
            "both" => BackhaulModes::Both,
            _ => return Err(format!("expected mimo, ideal or both; got `{v}`")),
        },
        |c| format!(
            "\"{}\"",
            match c.backhaul.mode {
                BackhaulModes::Mimo => "mimo",
                BackhaulModes::Ideal => "ideal",
                BackhaulModes::Both => "both",
            }
        )
    ),
    key!(
        "backhaul.rx_pitch_mm",
        "detector (and transmitter) pitch, mm (> 0)",
        |c, v| c.backhaul.rx_pitch_mm = positive(v)?,
        |c| c.backhaul.rx_pitch_mm.to_string()
    ),
    key!(
        "backhaul.pd_half_side_mm",
        "square detector half side, mm (> 0, <= pitch / 2)",
        |c, v| c.backhaul.pd_half_side_mm = positive(v)?,
        |c| c.backhaul.pd_half_side_mm.to_string()
    ),
    key!(
        "backhaul.bandwidth_ghz",
        "modulation bandwidth, GHz (> 0)",
        |c, v| c.backhaul.bandwidth_ghz = positive(v)?,
        |c| c.backhaul.bandwidth_ghz.to_string()
    ),
    key!(
        "backhaul.gap_db",
        "SNR gap, dB (>= 0)",
        |c, v| c.backhaul.gap_db = non_negative(v)?,
        |c| c.backhaul.gap_db.to_string()
    ),
    key!(
        "backhaul.per_beam_power_mw",
        "\"auto\" (eye-safe limit) or power per beam, mW (> 0)",
        |c, v| c.backhaul.per_beam_power_mw = if v == "auto" {
            PowerSetting::Auto
        } else {
            PowerSetting::Milliwatts(positive(v)?)
        },
        |c| match c.backhaul.per_beam_power_mw {
            PowerSetting::Auto => "\"auto\"".to_string(),
            PowerSetting::Milliwatts(p) => p.to_string(),
        }
    ),
    key!(
        "coverage.resolution",
        "cells per side, 10..=2000",
        |c, v| c.coverage.resolution = count(v, 10, 2000)?,
        |c| c.coverage.resolution.to_string()
    ),
    key!(
        "coverage.room_x_m",
        "room length, m (> 0)",
        |c, v| c.coverage.room_x_m = positive(v)?,
        |c| c.coverage.room_x_m.to_string()
    ),
    key!(
        "coverage.room_y_m",
        "room width, m (> 0)",
        |c, v| c.coverage.room_y_m = positive(v)?,
        |c| c.coverage.room_y_m.to_string()
    ),
    key!(
        "coverage.room_z_m",
        "room height (AP to receiver plane), m (> 0)",
        |c, v| c.coverage.room_z_m = positive(v)?,
        |c| c.coverage.room_z_m.to_string()
    ),
    key!(
        "coverage.waist_um",
        "beam waist, um (> 0)",
        |c, v| c.coverage.waist_um = positive(v)?,
        |c| c.coverage.waist_um.to_string()
    ),
    key!(
        "coverage.lambda_nm",
        "wavelength, nm (0, 10000]",
        |c, v| c.coverage.lambda_nm = ranged(v, 0.0, 10_000.0, true)?,
        |c| c.coverage.lambda_nm.to_string()
    ),
    key!(
        "coverage.power_mw",
        "power per VCSEL, mW (>= 0)",
        |c, v| c.coverage.power_mw = non_negative(v)?,
        |c| c.coverage.power_mw.to_string()
    ),
    key!(
        "coverage.bandwidth_ghz",
        "modulation bandwidth, GHz (> 0)",
        |c, v| c.coverage.bandwidth_ghz = positive(v)?,
        |c| c.coverage.bandwidth_ghz.to_string()
    ),
    key!(
        "coverage.gap_db",
        "SNR gap, dB (>= 0)",
        |c, v| c.coverage.gap_db = non_negative(v)?,
        |c| c.coverage.gap_db.to_string()
    ),
    key!(
        "coverage.pd_area_cm2",
        "receiver effective area, cm2 (> 0)",
        |c, v| c.coverage.pd_area_cm2 = positive(v)?,
        |c| c.coverage.pd_area_cm2.to_string()
    ),
    key!(
        "coverage.wall_margin_m",
        "margin excluded from the coverage percentage, m (>= 0)",
        |c, v| c.coverage.wall_margin_m = non_negative(v)?,
        |c| c.coverage.wall_margin_m.to_string()
    ),
    key!(
        "coverage.threshold_gbps",
        "rate threshold for the coverage percentage, Gb/s (>= 0)",
        |c, v| c.coverage.threshold_gbps = non_negative(v)?,
        |c| c.coverage.threshold_gbps.to_string()
    ),
    key!(
        "coverage.heatmap_format",
        "csv | pgm",
        |c, v| c.heatmap_format = match v {
            "csv" => HeatmapFormat::Csv,
            "pgm" => HeatmapFormat::Pgm,
            _ => return Err(format!("expected csv or pgm; got `{v}`")),
        },
        |c| format!(
            "\"{}\"",
            match c.heatmap_format {
                HeatmapFormat::Csv => "csv",
                HeatmapFormat::Pgm => "pgm",
            }
        )
    ),
    key!(
        "pd.responsivity_a_per_w",
        "responsivity, A/W (0, 1.5]",
        |c, v| c.pd.responsivity_a_per_w = ranged(v, 0.0, 1.5, true)?,
        |c| c.pd.responsivity_a_per_w.to_string()
    ),
    key!(
        "pd.thermal_pa_per_sqrthz",
        "thermal noise current density, pA/sqrt(Hz) (>= 0)",
        |c, v| c.pd.thermal_pa_per_sqrthz = non_negative(v)?,
        |c| c.pd.thermal_pa_per_sqrthz.to_string()
    ),
    key!(
        "pd.dark_current_na",
        "dark current, nA (>= 0)",
        |c, v| c.pd.dark_current_na = non_negative(v)?,
        |c| c.pd.dark_current_na.to_string()
    ),
];

/// Names of every accepted key except `scenario`, in documentation order.
pub fn known_keys() -> impl Iterator<Item = &'static str> {
    KEYS.iter().map(|k| k.name)
}

fn config_error(key: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Config {
        key: key.to_string(),
        line,
        message: message.into(),
    }
}

fn unquote(v: &str) -> &str {
    v.strip_prefix('"')
        .and_then(|s| s.strip_suffix('"'))
        .unwrap_or(v)
        .trim()
}

/// Parses a configuration document. `scenario` must be present.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_for(text, None)
}

/// Parses a configuration document, taking the scenario from `fallback` when the
/// document has no `scenario` key. A document scenario that contradicts `fallback`
/// is an error.
pub fn parse_config_for(text: &str, fallback: Option<Scenario>) -> Result<RunConfig> {
    let mut scenario: Option<(Scenario, usize)> = None;
    let mut seen: HashMap<&'static str, usize> = HashMap::new();
    let mut cfg = RunConfig::defaults(Scenario::Safety);

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| config_error(content, line_no, "expected `key = value`"))?;
        let key = key.trim();
        let value = unquote(value.trim());
        if key == "scenario" {
            if scenario.is_some() {
                return Err(config_error(key, line_no, "duplicate key"));
            }
            let s = value.parse::<Scenario>().map_err(|m| config_error(key, line_no, m))?;
            scenario = Some((s, line_no));
            continue;
        }
        let spec = KEYS
            .iter()
            .find(|k| k.name == key)
            .ok_or_else(|| config_error(key, line_no, "unknown key"))?;
        if seen.insert(spec.name, line_no).is_some() {
            return Err(config_error(key, line_no, "duplicate key"));
        }
        (spec.set)(&mut cfg, value).map_err(|m| config_error(key, line_no, m))?;
    }

    cfg.scenario = match (scenario, fallback) {
        (Some((s, line)), Some(f)) if s != f => {
            return Err(config_error(
                "scenario",
                line,
                format!("file declares `{}` but `{}` was requested", s.as_str(), f.as_str()),
            ))
        }
        (Some((s, _)), _) => s,
        (None, Some(f)) => f,
        (None, None) => return Err(config_error("scenario", 0, "missing required key")),
    };

    let line_of = |k: &str| seen.get(k).copied().unwrap_or(0);
    if cfg.safety.lambda_end_nm < cfg.safety.lambda_start_nm {
        return Err(config_error(
            "safety.lambda_end_nm",
            line_of("safety.lambda_end_nm").max(line_of("safety.lambda_start_nm")),
            "must be >= safety.lambda_start_nm",
        ));
    }
    if cfg.backhaul.waist_end_um < cfg.backhaul.waist_start_um {
        return Err(config_error(
            "backhaul.waist_end_um",
            line_of("backhaul.waist_end_um").max(line_of("backhaul.waist_start_um")),
            "must be >= backhaul.waist_start_um",
        ));
    }
    if cfg.backhaul.pd_half_side_mm > 0.5 * cfg.backhaul.rx_pitch_mm {
        return Err(config_error(
            "backhaul.pd_half_side_mm",
            line_of("backhaul.pd_half_side_mm").max(line_of("backhaul.rx_pitch_mm")),
            "must be <= backhaul.rx_pitch_mm / 2 (detectors may not overlap)",
        ));
    }
    Ok(cfg)
}

/// Serialises `cfg` as a configuration document listing every key.
pub fn render_config(cfg: &RunConfig) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario = {}", cfg.scenario.as_str());
    let mut section = "";
    for k in KEYS {
        let prefix = k.name.split('.').next().unwrap_or("");
        if prefix != section {
            section = prefix;
            out.push('\n');
        }
        let _ = writeln!(out, "# {}", k.help);
        let _ = writeln!(out, "{} = {}", k.name, (k.get)(cfg));
    }
    out
}

/// The documented defaults for `scenario`.
pub fn print_defaults(scenario: Scenario) -> String {
    render_config(&RunConfig::defaults(scenario))
}
