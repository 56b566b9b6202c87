//! Sweeps the receiver thermal noise density and reports, for each value, the smallest
//! waist reaching 1 Tb/s for 9x9, 16x16 and 25x25 arrays plus the regime boundary of
//! the 16x16 link.
//!
//! ```text
//! cargo run --release -p lumenplan --example calibrate_backhaul
//! ```

use lumenplan::backhaul::{min_waist_for_target, regime_boundary, RegimeBoundary, WaistThreshold};
use lumenplan::{MimoBackhaulConfig, Result};

const REFERENCE_UM: [(usize, f64); 3] = [(9, 75.0), (16, 54.0), (25, 47.0)];

fn fmt_threshold(t: WaistThreshold<f64>) -> String {
    match t {
        WaistThreshold::Found(w) => format!("{:6.1}", w * 1e6),
        WaistThreshold::Infeasible => "  none".to_string(),
    }
}

fn main() -> Result<()> {
    println!("thermal_pA  t9_um  t16_um  t25_um  worst_dev  boundary_um");
    for thermal in (10..=150).step_by(10) {
        let mut cells = Vec::new();
        let mut worst = 0.0f64;
        for (n, reference) in REFERENCE_UM {
            let mut cfg = MimoBackhaulConfig::with_side(n)?;
            cfg.pd.thermal_current_density = thermal as f64 * 1e-12;
            let t = min_waist_for_target(&cfg, 1e12)?;
            worst = worst.max(match t {
                WaistThreshold::Found(w) => (w * 1e6 / reference - 1.0).abs(),
                WaistThreshold::Infeasible => f64::INFINITY,
            });
            cells.push(fmt_threshold(t));
        }
        let mut cfg = MimoBackhaulConfig::with_side(16)?;
        cfg.pd.thermal_current_density = thermal as f64 * 1e-12;
        let boundary = match regime_boundary(&cfg)? {
            RegimeBoundary::Within(w) => format!("{:.1}", w * 1e6),
            RegimeBoundary::OutsideDomain(r) => format!("{r:?}"),
        };
        println!(
            "{thermal:>10}  {}  {}  {}  {:>8.1}%  {boundary}",
            cells[0],
            cells[1],
            cells[2],
            worst * 100.0
        );
    }
    Ok(())
}
