//! Photodetector materials, receiver noise and the DCO-OFDM rate mapping.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, ELEMENTARY_CHARGE, EV_NM};

/// Semiconductor used for the photodiode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Material {
    GaN,
    GaAlAs,
    GaAs,
    Si,
    Ge,
    InGaAs,
}

impl Material {
    pub const ALL: [Material; 6] = [
        Material::GaN,
        Material::GaAlAs,
        Material::GaAs,
        Material::Si,
        Material::Ge,
        Material::InGaAs,
    ];

    /// Band gap in eV as a `(low, high)` range; single values have `low == high`.
    pub fn band_gap_range_ev(self) -> (f64, f64) {
        match self {
            Material::GaN => (3.4, 3.4),
            Material::GaAlAs => (1.42, 2.16),
            Material::GaAs => (1.43, 1.43),
            Material::Si => (1.12, 1.12),
            Material::Ge => (0.67, 0.67),
            Material::InGaAs => (0.36, 1.43),
        }
    }

    /// Representative band gap: the midpoint of the tabulated range.
    pub fn band_gap_ev(self) -> f64 {
        let (lo, hi) = self.band_gap_range_ev();
        0.5 * (lo + hi)
    }

    pub fn name(self) -> &'static str {
        match self {
            Material::GaN => "GaN",
            Material::GaAlAs => "GaAlAs",
            Material::GaAs => "GaAs",
            Material::Si => "Si",
            Material::Ge => "Ge",
            Material::InGaAs => "InGaAs",
        }
    }
}

impl fmt::Display for Material {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Photodiode receiver front end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotodetectorModel<S> {
    pub material: Material,
    /// eV
    pub band_gap: S,
    /// A/W at the operating wavelength.
    pub responsivity: S,
    /// m²
    pub active_area: S,
    /// Input-referred thermal noise current density, A/√Hz.
    pub thermal_current_density: S,
    /// A
    pub dark_current: S,
}

impl<S: Scalar> PhotodetectorModel<S> {
    pub fn new(
        material: Material,
        band_gap: S,
        responsivity: S,
        active_area: S,
        thermal_current_density: S,
        dark_current: S,
    ) -> Result<Self> {
        if !(band_gap.is_finite() && band_gap > S::zero()) {
            return Err(Error::invalid("band_gap", "must be > 0"));
        }
        if !(responsivity > S::zero() && responsivity <= S::lit(1.5)) {
            return Err(Error::invalid("responsivity", "must lie in (0, 1.5] A/W"));
        }
        if !(active_area.is_finite() && active_area > S::zero()) {
            return Err(Error::invalid("active_area", "must be > 0"));
        }
        if !(thermal_current_density.is_finite() && thermal_current_density >= S::zero()) {
            return Err(Error::invalid("thermal_current_density", "must be >= 0"));
        }
        if !(dark_current.is_finite() && dark_current >= S::zero()) {
            return Err(Error::invalid("dark_current", "must be >= 0"));
        }
        Ok(PhotodetectorModel {
            material,
            band_gap,
            responsivity,
            active_area,
            thermal_current_density,
            dark_current,
        })
    }

    /// Detector of `material` using its representative band gap.
    pub fn from_material(
        material: Material,
        responsivity: S,
        active_area: S,
        thermal_current_density: S,
        dark_current: S,
    ) -> Result<Self> {
        Self::new(
            material,
            S::lit(material.band_gap_ev()),
            responsivity,
            active_area,
            thermal_current_density,
            dark_current,
        )
    }

    /// Silicon receiver with 0.6 A/W, 10 pA/√Hz and no dark current.
    pub fn silicon(active_area: S) -> Result<Self> {
        Self::from_material(Material::Si, S::lit(0.6), active_area, S::lit(10e-12), S::zero())
    }

    pub fn with_active_area(mut self, area: S) -> Result<Self> {
        self.active_area = area;
        Self::new(
            self.material,
            self.band_gap,
            self.responsivity,
            area,
            self.thermal_current_density,
            self.dark_current,
        )
    }
}

/// DCO-OFDM link: modulation bandwidth and SNR gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OfdmLinkParams<S> {
    /// Hz
    pub bandwidth: S,
    /// Linear SNR gap, ≥ 1.
    pub gap: S,
}

impl<S: Scalar> OfdmLinkParams<S> {
    pub fn new(bandwidth: S, gap: S) -> Result<Self> {
        if !(bandwidth.is_finite() && bandwidth > S::zero()) {
            return Err(Error::invalid("bandwidth", "must be > 0"));
        }
        if !(gap.is_finite() && gap >= S::one()) {
            return Err(Error::invalid("gap", "must be >= 1 (>= 0 dB)"));
        }
        Ok(OfdmLinkParams { bandwidth, gap })
    }

    pub fn from_db(bandwidth: S, gap_db: S) -> Result<Self> {
        Self::new(bandwidth, S::lit(10.0).powf(gap_db / S::lit(10.0)))
    }

    pub fn gap_db(&self) -> S {
        S::lit(10.0) * self.gap.log10()
    }
}

/// Long-wavelength detection cutoff (nm) for a band gap in eV.
pub fn cutoff_wavelength<S: Scalar>(band_gap_ev: S) -> S {
    S::lit(EV_NM) / band_gap_ev
}

/// Orders detectors from lowest to highest expected noise, i.e. by descending band gap.
/// Equal band gaps keep their input order.
pub fn material_noise_rank<S: Scalar>(detectors: &[PhotodetectorModel<S>]) -> Vec<PhotodetectorModel<S>> {
    let mut ranked = detectors.to_vec();
    ranked.sort_by(|a, b| b.band_gap.partial_cmp(&a.band_gap).unwrap_or(std::cmp::Ordering::Equal));
    ranked
}

/// Total receiver noise variance (A²): shot noise of signal plus dark current, plus thermal noise.
pub fn noise_variance<S: Scalar>(incident_power: S, pd: &PhotodetectorModel<S>, bandwidth: S) -> S {
    let q = S::lit(ELEMENTARY_CHARGE);
    let two = S::lit(2.0);
    let shot = two * q * (pd.responsivity * incident_power + pd.dark_current) * bandwidth;
    let thermal = pd.thermal_current_density * pd.thermal_current_density * bandwidth;
    shot + thermal
}

/// Electrical SNR of a single interference-free link.
pub fn electrical_snr<S: Scalar>(received_power: S, pd: &PhotodetectorModel<S>, bandwidth: S) -> S {
    let i = pd.responsivity * received_power;
    let var = noise_variance(received_power, pd, bandwidth);
    if var > S::zero() {
        i * i / var
    } else if i == S::zero() {
        S::zero()
    } else {
        S::infinity()
    }
}

/// SINR with interferers contributing both electrical interference and shot noise.
pub fn sinr<S: Scalar>(signal_power: S, interferer_powers: &[S], pd: &PhotodetectorModel<S>, bandwidth: S) -> S {
    let mut incident = signal_power;
    let mut interference_sq = S::zero();
    for &p in interferer_powers {
        incident = incident + p;
        interference_sq = interference_sq + p * p;
    }
    sinr_from_sums(signal_power, incident, interference_sq, pd, bandwidth)
}

/// SINR from pre-accumulated sums: `incident_power` is the total optical power on the
/// detector and `interference_power_sq` the sum of squared interfering optical powers.
pub fn sinr_from_sums<S: Scalar>(
    signal_power: S,
    incident_power: S,
    interference_power_sq: S,
    pd: &PhotodetectorModel<S>,
    bandwidth: S,
) -> S {
    let r = pd.responsivity;
    let signal = r * signal_power;
    let denom = noise_variance(incident_power, pd, bandwidth) + r * r * interference_power_sq;
    if denom > S::zero() {
        signal * signal / denom
    } else if signal == S::zero() {
        S::zero()
    } else {
        S::infinity()
    }
}

/// Achievable DCO-OFDM rate (bit/s): `(B/2) log2(1 + sinr/Γ)`.
pub fn dco_ofdm_rate<S: Scalar>(sinr: S, link: &OfdmLinkParams<S>) -> S {
    S::lit(0.5) * link.bandwidth * (sinr.max(S::zero()) / link.gap).ln_1p() / S::LN_2()
}
