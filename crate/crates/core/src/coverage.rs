//! Room-scale multi-user access: a ceiling access point built from several VCSEL
//! arrays, every beam aimed at its own spot on the receiver plane.

use rayon::prelude::*;

use crate::beam::GaussianBeam;
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::photodetection::{dco_ofdm_rate, sinr_from_sums, OfdmLinkParams, PhotodetectorModel};
use crate::scalar::Scalar;

pub const MIN_RESOLUTION: usize = 10;
pub const MAX_RESOLUTION: usize = 2000;

/// Room, access-point placement and the upward-facing receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoomScenario<S> {
    /// Room extents (x, y, height), m.
    pub room: Vec3<S>,
    pub ap_position: Vec3<S>,
    /// Height of the receiver plane above the floor, m.
    pub rx_plane_height: S,
    pub receiver: PhotodetectorModel<S>,
    pub link: OfdmLinkParams<S>,
    /// Receiver field-of-view half angle, rad. `None` accepts light from any direction.
    pub fov_half_angle: Option<S>,
}

impl<S: Scalar> RoomScenario<S> {
    /// Room of the given size with the AP at the centre of the ceiling and the
    /// receiver plane on the floor.
    pub fn new(room: Vec3<S>, receiver: PhotodetectorModel<S>, link: OfdmLinkParams<S>) -> Result<Self> {
        let half = S::lit(0.5);
        let s = RoomScenario {
            room,
            ap_position: Vec3::new(half * room.x, half * room.y, room.z),
            rx_plane_height: S::zero(),
            receiver,
            link,
            fov_half_angle: None,
        };
        s.validate()?;
        Ok(s)
    }

    /// 5 × 5 × 3 m room, 2 cm² silicon receiver, 5 GHz with a 9 dB gap.
    pub fn standard() -> Result<Self> {
        Self::new(
            Vec3::new(S::lit(5.0), S::lit(5.0), S::lit(3.0)),
            PhotodetectorModel::silicon(S::lit(2e-4))?,
            OfdmLinkParams::from_db(S::lit(5e9), S::lit(9.0))?,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.room;
        if !(r.is_finite() && r.x > S::zero() && r.y > S::zero() && r.z > S::zero()) {
            return Err(Error::invalid("room", "extents must be > 0"));
        }
        let ap = self.ap_position;
        let inside = ap.x >= S::zero() && ap.x <= r.x && ap.y >= S::zero() && ap.y <= r.y;
        if !inside || ap.z != r.z {
            return Err(Error::invalid("ap_position", "must be on the ceiling inside the room"));
        }
        if !(self.rx_plane_height >= S::zero() && self.rx_plane_height < r.z) {
            return Err(Error::invalid("rx_plane_height", "must lie in [0, room height)"));
        }
        if let Some(fov) = self.fov_half_angle {
            if fov.is_nan() || fov <= S::zero() {
                return Err(Error::invalid("fov_half_angle", "must be > 0"));
            }
        }
        Ok(())
    }
}

/// Array-of-arrays transmitter layout and per-VCSEL beam parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ApArrayOfArrays<S> {
    pub n_arrays: usize,
    pub beams_per_array: usize,
    /// m
    pub wavelength: S,
    /// m
    pub waist_radius: S,
    /// W per VCSEL
    pub power: S,
    /// Spot centre on the receiver plane for each beam, m. Beam `k` belongs to array
    /// `k / beams_per_array`.
    pub targets: Vec<[S; 2]>,
}

fn exact_sqrt(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r * r == n).then_some(r)
}

/// Spot centres: a uniform cell-centred grid over the room footprint, split into
/// contiguous square blocks, one block per array. Ordered by array, then row-major
/// within the block.
pub fn beam_targets<S: Scalar>(
    scenario: &RoomScenario<S>,
    n_arrays: usize,
    beams_per_array: usize,
) -> Result<Vec<[S; 2]>> {
    let per_side_arrays = exact_sqrt(n_arrays)
        .filter(|&v| v > 0)
        .ok_or_else(|| Error::invalid("n_arrays", "must be a non-zero perfect square"))?;
    let per_side_beams = exact_sqrt(beams_per_array)
        .filter(|&v| v > 0)
        .ok_or_else(|| Error::invalid("beams_per_array", "must be a non-zero perfect square"))?;
    let m = per_side_arrays * per_side_beams;
    let pitch_x = scenario.room.x / S::lit(m as f64);
    let pitch_y = scenario.room.y / S::lit(m as f64);
    let half = S::lit(0.5);
    let mut out = Vec::with_capacity(m * m);
    for a in 0..n_arrays {
        let (ax, ay) = (a % per_side_arrays, a / per_side_arrays);
        for b in 0..beams_per_array {
            let col = ax * per_side_beams + b % per_side_beams;
            let row = ay * per_side_beams + b / per_side_beams;
            out.push([
                (S::lit(col as f64) + half) * pitch_x,
                (S::lit(row as f64) + half) * pitch_y,
            ]);
        }
    }
    Ok(out)
}

impl<S: Scalar> ApArrayOfArrays<S> {
    pub fn new(
        scenario: &RoomScenario<S>,
        n_arrays: usize,
        beams_per_array: usize,
        wavelength: S,
        waist_radius: S,
        power: S,
    ) -> Result<Self> {
        let targets = beam_targets(scenario, n_arrays, beams_per_array)?;
        let ap = ApArrayOfArrays {
            n_arrays,
            beams_per_array,
            wavelength,
            waist_radius,
            power,
            targets,
        };
        ap.validate(scenario)?;
        Ok(ap)
    }

    /// Nine 5 × 5 arrays of 950 nm VCSELs, 5 μm waist, 10 mW each.
    pub fn standard(scenario: &RoomScenario<S>) -> Result<Self> {
        Self::new(scenario, 9, 25, S::lit(950e-9), S::lit(5e-6), S::lit(10e-3))
    }

    pub fn validate(&self, scenario: &RoomScenario<S>) -> Result<()> {
        if self.n_arrays * self.beams_per_array != self.targets.len() {
            return Err(Error::invalid("targets", "count must equal n_arrays * beams_per_array"));
        }
        let r = scenario.room;
        for t in &self.targets {
            if !(t[0] >= S::zero() && t[0] <= r.x && t[1] >= S::zero() && t[1] <= r.y) {
                return Err(Error::invalid(
                    "targets",
                    "every target must lie inside the room footprint",
                ));
            }
        }
        Ok(())
    }

    pub fn beam_count(&self) -> usize {
        self.targets.len()
    }
}

/// Beam `k` leaving the AP aimed at its target (ideal steering).
pub fn steered_beam<S: Scalar>(
    ap: &ApArrayOfArrays<S>,
    scenario: &RoomScenario<S>,
    k: usize,
) -> Result<GaussianBeam<S>> {
    let t = ap
        .targets
        .get(k)
        .ok_or_else(|| Error::invalid("beam_index", format!("{k} >= {}", ap.targets.len())))?;
    let target = Vec3::new(t[0], t[1], scenario.rx_plane_height);
    GaussianBeam::new(
        ap.wavelength,
        ap.waist_radius,
        ap.power,
        scenario.ap_position,
        target - scenario.ap_position,
    )
}

/// Optical power (W) a receiver at `point` on the receiver plane collects from `beam`.
pub fn received_power_at<S: Scalar>(point: [S; 2], beam: &GaussianBeam<S>, scenario: &RoomScenario<S>) -> S {
    let p = Vec3::new(point[0], point[1], scenario.rx_plane_height);
    let (r, z) = beam.beam_frame(p);
    if z <= S::zero() {
        return S::zero();
    }
    let to_source = beam.origin() - p;
    let cos_incidence = to_source.z / to_source.norm();
    if cos_incidence <= S::zero() {
        return S::zero();
    }
    if let Some(fov) = scenario.fov_half_angle {
        if cos_incidence < fov.cos() {
            return S::zero();
        }
    }
    beam.intensity(r, z) * scenario.receiver.active_area * cos_incidence
}

/// The AP with every beam steered, ready for repeated rate queries.
#[derive(Debug, Clone)]
pub struct SteeredAp<S> {
    beams: Vec<GaussianBeam<S>>,
    targets: Vec<[S; 2]>,
}

impl<S: Scalar> SteeredAp<S> {
    pub fn new(ap: &ApArrayOfArrays<S>, scenario: &RoomScenario<S>) -> Result<Self> {
        ap.validate(scenario)?;
        let beams = (0..ap.beam_count())
            .map(|k| steered_beam(ap, scenario, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(SteeredAp {
            beams,
            targets: ap.targets.clone(),
        })
    }

    pub fn beams(&self) -> &[GaussianBeam<S>] {
        &self.beams
    }

    pub fn targets(&self) -> &[[S; 2]] {
        &self.targets
    }

    /// Same AP with beam `k` switched off and removed.
    pub fn without_beam(&self, k: usize) -> Self {
        let mut out = self.clone();
        out.beams.remove(k);
        out.targets.remove(k);
        out
    }
}

fn powers_at<S: Scalar>(point: [S; 2], ap: &SteeredAp<S>, scenario: &RoomScenario<S>) -> Vec<S> {
    ap.beams.iter().map(|b| received_power_at(point, b, scenario)).collect()
}

fn rate_for<S: Scalar>(powers: &[S], serving: usize, scenario: &RoomScenario<S>) -> S {
    let mut incident = S::zero();
    let mut interference = S::zero();
    for (k, &p) in powers.iter().enumerate() {
        incident = incident + p;
        if k != serving {
            interference = interference + p * p;
        }
    }
    let sinr = sinr_from_sums(
        powers[serving],
        incident,
        interference,
        &scenario.receiver,
        scenario.link.bandwidth,
    );
    dco_ofdm_rate(sinr, &scenario.link)
}

/// Rate (bit/s) at `point` served by the strongest beam (lowest index on ties), with
/// every other beam treated as an interferer.
pub fn point_rate<S: Scalar>(point: [S; 2], scenario: &RoomScenario<S>, ap: &SteeredAp<S>) -> (S, usize) {
    let powers = powers_at(point, ap, scenario);
    let serving = powers
        .iter()
        .enumerate()
        .fold(0usize, |best, (k, &p)| if p > powers[best] { k } else { best });
    (rate_for(&powers, serving, scenario), serving)
}

/// Rate at `point` when beam `serving` is the designated server.
pub fn rate_served_by<S: Scalar>(point: [S; 2], serving: usize, scenario: &RoomScenario<S>, ap: &SteeredAp<S>) -> S {
    let powers = powers_at(point, ap, scenario);
    rate_for(&powers, serving, scenario)
}

/// Rates sampled at cell centres over the room footprint, row-major from the
/// `(0, 0)` corner (rows along y, columns along x).
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageGrid<S> {
    pub resolution: usize,
    pub extent_x: S,
    pub extent_y: S,
    pub rates: Vec<S>,
    pub serving_beam: Vec<usize>,
}

impl<S: Scalar> CoverageGrid<S> {
    pub fn cell_x(&self, col: usize) -> S {
        (S::lit(col as f64) + S::lit(0.5)) * self.extent_x / S::lit(self.resolution as f64)
    }

    pub fn cell_y(&self, row: usize) -> S {
        (S::lit(row as f64) + S::lit(0.5)) * self.extent_y / S::lit(self.resolution as f64)
    }

    pub fn rate(&self, row: usize, col: usize) -> S {
        self.rates[row * self.resolution + col]
    }

    pub fn max_rate(&self) -> S {
        self.rates.iter().fold(S::zero(), |m, &r| m.max(r))
    }

    /// Mean rate; cells have equal area.
    pub fn mean_rate(&self) -> S {
        let sum = self.rates.iter().fold(S::zero(), |acc, &r| acc + r);
        sum / S::lit(self.rates.len() as f64)
    }

    /// Fraction of cells farther than `wall_margin` from every wall whose rate is at least
    /// `threshold` (bit/s).
    pub fn coverage_fraction(&self, threshold: S, wall_margin: S) -> S {
        let n = self.resolution;
        let mut interior = 0usize;
        let mut covered = 0usize;
        for row in 0..n {
            let y = self.cell_y(row);
            if !(y > wall_margin && y < self.extent_y - wall_margin) {
                continue;
            }
            for col in 0..n {
                let x = self.cell_x(col);
                if !(x > wall_margin && x < self.extent_x - wall_margin) {
                    continue;
                }
                interior += 1;
                if self.rate(row, col) >= threshold {
                    covered += 1;
                }
            }
        }
        if interior == 0 {
            S::zero()
        } else {
            S::lit(covered as f64) / S::lit(interior as f64)
        }
    }
}

/// Evaluates [`point_rate`] at every cell centre.
pub fn coverage_map<S: Scalar>(
    scenario: &RoomScenario<S>,
    ap: &SteeredAp<S>,
    resolution: usize,
) -> Result<CoverageGrid<S>> {
    if !(MIN_RESOLUTION..=MAX_RESOLUTION).contains(&resolution) {
        return Err(Error::invalid(
            "resolution",
            format!("must lie in {MIN_RESOLUTION}..={MAX_RESOLUTION}"),
        ));
    }
    let mut grid = CoverageGrid {
        resolution,
        extent_x: scenario.room.x,
        extent_y: scenario.room.y,
        rates: Vec::new(),
        serving_beam: Vec::new(),
    };
    let cells: Vec<(S, usize)> = (0..resolution * resolution)
        .into_par_iter()
        .map(|idx| {
            let (row, col) = (idx / resolution, idx % resolution);
            point_rate([grid.cell_x(col), grid.cell_y(row)], scenario, ap)
        })
        .collect();
    if cells.iter().any(|(r, _)| !r.is_finite()) {
        return Err(Error::NumericFailure("non-finite rate in coverage map".into()));
    }
    (grid.rates, grid.serving_beam) = cells.into_iter().unzip();
    Ok(grid)
}

/// Rate of each beam at its own spot centre, in beam order.
pub fn spot_center_rates<S: Scalar>(scenario: &RoomScenario<S>, ap: &SteeredAp<S>) -> Vec<S> {
    (0..ap.beams.len())
        .into_par_iter()
        .map(|k| rate_served_by(ap.targets[k], k, scenario, ap))
        .collect()
}

/// Sum over beams of the rate each beam delivers at its own spot centre.
pub fn aggregate_ap_rate<S: Scalar>(scenario: &RoomScenario<S>, ap: &SteeredAp<S>) -> S {
    spot_center_rates(scenario, ap)
        .iter()
        .fold(S::zero(), |acc, &r| acc + r)
}
