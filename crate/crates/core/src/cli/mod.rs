//! Scenario runners behind the `lumenplan` binary.
//!
//! Each runner computes everything first and then encodes it, so output bytes depend
//! only on the configuration.

pub mod config;
pub mod output;

use crate::backhaul::{aggregate_rate, BeamPower, MimoBackhaulConfig, RateMode};
use crate::coverage::{aggregate_ap_rate, coverage_map, ApArrayOfArrays, CoverageGrid, RoomScenario, SteeredAp};
use crate::error::Result;
use crate::geometry::Vec3;
use crate::photodetection::{cutoff_wavelength, material_noise_rank, Material, OfdmLinkParams, PhotodetectorModel};
use crate::safety::{max_transmit_power, SafetyStandardParams};

pub use config::{parse_config, parse_config_for, print_defaults, RunConfig, Scenario};
use config::{BackhaulModes, HeatmapFormat, PowerSetting};
use output::{encode_pgm16, format_number, Csv};

/// Bytes for the output file plus the optional summary lines.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub data: Vec<u8>,
    pub summary: Option<String>,
}

pub fn run(cfg: &RunConfig) -> Result<RunOutput> {
    match cfg.scenario {
        Scenario::Safety => run_safety(cfg),
        Scenario::Backhaul => run_backhaul(cfg),
        Scenario::Coverage => run_coverage(cfg),
        Scenario::Materials => run_materials(cfg),
    }
}

/// `start, start + step, …` up to and including `end` (with a small tolerance for
/// accumulated rounding in `end - start`).
pub fn sweep_points(start: f64, end: f64, step: f64) -> Vec<f64> {
    let n = ((end - start) / step + 1e-9).floor() as usize;
    (0..=n).map(|k| start + k as f64 * step).collect()
}

fn detector(cfg: &RunConfig, area_m2: f64) -> Result<PhotodetectorModel<f64>> {
    PhotodetectorModel::from_material(
        Material::Si,
        cfg.pd.responsivity_a_per_w,
        area_m2,
        cfg.pd.thermal_pa_per_sqrthz * 1e-12,
        cfg.pd.dark_current_na * 1e-9,
    )
}

/// Maximum eye-safe power versus wavelength, one curve per waist.
pub fn run_safety(cfg: &RunConfig) -> Result<RunOutput> {
    let s = &cfg.safety;
    let params = SafetyStandardParams::default().with_exposure(s.exposure_s);
    let lambdas = sweep_points(s.lambda_start_nm, s.lambda_end_nm, s.lambda_step_nm);
    let mut csv = Csv::with_header(&["wavelength_nm", "beam_waist_um", "max_power_mw"]);
    let mut rows = Vec::with_capacity(lambdas.len() * s.waists_um.len());
    for &w in &s.waists_um {
        for &l in &lambdas {
            let a = max_transmit_power(l, w * 1e-6, &params)?;
            rows.push([
                format_number(l),
                format_number(w),
                format_number(a.max_transmit_power * 1e3),
            ]);
        }
    }
    rows.into_iter().for_each(|r| csv.row(r));
    Ok(RunOutput {
        data: csv.into_bytes(),
        summary: None,
    })
}

/// Builds the backhaul model described by the configuration.
pub fn backhaul_model(cfg: &RunConfig) -> Result<MimoBackhaulConfig<f64>> {
    let b = &cfg.backhaul;
    let half = b.pd_half_side_mm * 1e-3;
    let pitch = b.rx_pitch_mm * 1e-3;
    let model = MimoBackhaulConfig {
        n_side: b.n_side,
        link_distance: b.distance_m,
        wavelength_nm: b.lambda_nm,
        tx_pitch: pitch,
        rx_pitch: pitch,
        pd_half_side: half,
        per_beam_power: match b.per_beam_power_mw {
            PowerSetting::Auto => BeamPower::EyeSafe,
            PowerSetting::Milliwatts(p) => BeamPower::Fixed(p * 1e-3),
        },
        pd: detector(cfg, 4.0 * half * half)?,
        link: OfdmLinkParams::from_db(b.bandwidth_ghz * 1e9, b.gap_db)?,
        safety: SafetyStandardParams::default(),
    };
    model.validate()?;
    Ok(model)
}

/// Aggregate backhaul rate versus beam waist.
pub fn run_backhaul(cfg: &RunConfig) -> Result<RunOutput> {
    let b = &cfg.backhaul;
    let model = backhaul_model(cfg)?;
    let modes: &[RateMode] = match b.mode {
        BackhaulModes::Mimo => &[RateMode::Mimo],
        BackhaulModes::Ideal => &[RateMode::Ideal],
        BackhaulModes::Both => &[RateMode::Mimo, RateMode::Ideal],
    };
    let mut csv = Csv::with_header(&["waist_um", "n_side", "mode", "aggregate_rate_gbps"]);
    let mut rows = Vec::new();
    for w in sweep_points(b.waist_start_um, b.waist_end_um, b.waist_step_um) {
        for &mode in modes {
            let rate = aggregate_rate(&model, w * 1e-6, mode)?;
            rows.push([
                format_number(w),
                b.n_side.to_string(),
                mode.as_str().to_string(),
                format_number(rate * 1e-9),
            ]);
        }
    }
    rows.into_iter().for_each(|r| csv.row(r));
    Ok(RunOutput {
        data: csv.into_bytes(),
        summary: None,
    })
}

/// Builds the room and access point described by the configuration.
pub fn coverage_model(cfg: &RunConfig) -> Result<(RoomScenario<f64>, ApArrayOfArrays<f64>)> {
    let c = &cfg.coverage;
    let scenario = RoomScenario::new(
        Vec3::new(c.room_x_m, c.room_y_m, c.room_z_m),
        detector(cfg, c.pd_area_cm2 * 1e-4)?,
        OfdmLinkParams::from_db(c.bandwidth_ghz * 1e9, c.gap_db)?,
    )?;
    let ap = ApArrayOfArrays::new(
        &scenario,
        9,
        25,
        c.lambda_nm * 1e-9,
        c.waist_um * 1e-6,
        c.power_mw * 1e-3,
    )?;
    Ok((scenario, ap))
}

/// Coverage statistics reported alongside the map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageSummary {
    pub aggregate_tbps: f64,
    pub coverage_pct: f64,
}

impl CoverageSummary {
    pub fn render(&self) -> String {
        format!(
            "aggregate_tbps={}\ncoverage_10gbps_pct={}\n",
            format_number(self.aggregate_tbps),
            format_number(self.coverage_pct)
        )
    }
}

/// Computes the coverage grid and its summary.
pub fn coverage_results(cfg: &RunConfig) -> Result<(CoverageGrid<f64>, CoverageSummary)> {
    let c = &cfg.coverage;
    let (scenario, ap) = coverage_model(cfg)?;
    let steered = SteeredAp::new(&ap, &scenario)?;
    let grid = coverage_map(&scenario, &steered, c.resolution)?;
    let summary = CoverageSummary {
        aggregate_tbps: aggregate_ap_rate(&scenario, &steered) * 1e-12,
        coverage_pct: 100.0 * grid.coverage_fraction(c.threshold_gbps * 1e9, c.wall_margin_m),
    };
    Ok((grid, summary))
}

/// Data-rate map over the receiver plane.
pub fn run_coverage(cfg: &RunConfig) -> Result<RunOutput> {
    let (grid, summary) = coverage_results(cfg)?;
    let n = grid.resolution;
    let data = match cfg.heatmap_format {
        HeatmapFormat::Csv => {
            let mut csv = Csv::with_header(&["x_m", "y_m", "rate_gbps", "serving_beam"]);
            for row in 0..n {
                for col in 0..n {
                    csv.row([
                        format_number(grid.cell_x(col)),
                        format_number(grid.cell_y(row)),
                        format_number(grid.rate(row, col) * 1e-9),
                        grid.serving_beam[row * n + col].to_string(),
                    ]);
                }
            }
            csv.into_bytes()
        }
        HeatmapFormat::Pgm => {
            let gbps: Vec<f64> = grid.rates.iter().map(|r| r * 1e-9).collect();
            encode_pgm16(n, n, &gbps)
        }
    };
    Ok(RunOutput {
        data,
        summary: Some(summary.render()),
    })
}

/// Band gap, cutoff and noise rank of the built-in detector materials.
pub fn run_materials(cfg: &RunConfig) -> Result<RunOutput> {
    let models = Material::ALL
        .iter()
        .map(|&m| {
            PhotodetectorModel::from_material(
                m,
                cfg.pd.responsivity_a_per_w,
                1e-6,
                cfg.pd.thermal_pa_per_sqrthz * 1e-12,
                cfg.pd.dark_current_na * 1e-9,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let ranked = material_noise_rank(&models);
    let mut csv = Csv::with_header(&["material", "band_gap_ev", "cutoff_nm", "noise_rank"]);
    for m in &models {
        let rank = ranked.iter().position(|r| r.material == m.material).expect("ranked") + 1;
        csv.row([
            m.material.name().to_string(),
            format_number(m.band_gap),
            format_number(cutoff_wavelength(m.band_gap)),
            rank.to_string(),
        ]);
    }
    Ok(RunOutput {
        data: csv.into_bytes(),
        summary: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_includes_end() {
        assert_eq!(sweep_points(700.0, 1600.0, 10.0).len(), 91);
        assert_eq!(sweep_points(10.0, 100.0, 1.0).len(), 91);
        assert_eq!(sweep_points(0.1, 0.3, 0.1).len(), 3);
        assert_eq!(sweep_points(5.0, 5.0, 1.0), vec![5.0]);
    }

    #[test]
    fn materials_table() {
        let out = run_materials(&RunConfig::defaults(Scenario::Materials)).unwrap();
        let text = String::from_utf8(out.data).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "material,band_gap_ev,cutoff_nm,noise_rank");
        assert_eq!(lines.len(), 7);
        assert!(lines.contains(&"Si,1.12,1107,4"));
        assert!(lines.contains(&"GaN,3.4,364.658824,1"));
    }
}
