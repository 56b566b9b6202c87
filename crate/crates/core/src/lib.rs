//! Link-level planning tools for indoor laser-based optical wireless networks.
//!
//! - [`beam`]: Gaussian-beam propagation and aperture coupling
//! - [`safety`]: Class 1 eye-safety limits and the maximum transmit power
//! - [`photodetection`]: detector materials, receiver noise, SINR and DCO-OFDM rates
//! - [`backhaul`]: VCSEL-array to photodiode-array MIMO backhaul
//! - [`coverage`]: room-scale array-of-arrays access point coverage
//! - [`cli`]: configuration parsing, scenario runners and CSV/PGM output
//!
//! The models are generic over the floating-point type through [`Scalar`]; the
//! aliases below fix it to `f64`, which is what the command-line tool uses.

pub mod backhaul;
pub mod beam;
pub mod cli;
pub mod coverage;
pub mod error;
pub mod geometry;
pub mod photodetection;
pub mod quadrature;
pub mod safety;
pub mod scalar;

pub use error::{Error, Result};
pub use photodetection::Material;
pub use scalar::Scalar;

pub type Vec3 = geometry::Vec3<f64>;
pub type GaussianBeam = beam::GaussianBeam<f64>;
pub type CircularAperture = beam::CircularAperture<f64>;
pub type SafetyStandardParams = safety::SafetyStandardParams<f64>;
pub type SafetyAssessment = safety::SafetyAssessment<f64>;
pub type PhotodetectorModel = photodetection::PhotodetectorModel<f64>;
pub type OfdmLinkParams = photodetection::OfdmLinkParams<f64>;
pub type MimoBackhaulConfig = backhaul::MimoBackhaulConfig<f64>;
pub type ChannelMatrix = backhaul::ChannelMatrix<f64>;
pub type RoomScenario = coverage::RoomScenario<f64>;
pub type ApArrayOfArrays = coverage::ApArrayOfArrays<f64>;
pub type SteeredAp = coverage::SteeredAp<f64>;
pub type CoverageGrid = coverage::CoverageGrid<f64>;

/// Single-precision aliases for memory-bound sweeps.
pub mod f32 {
    pub type Vec3 = crate::geometry::Vec3<f32>;
    pub type GaussianBeam = crate::beam::GaussianBeam<f32>;
    pub type PhotodetectorModel = crate::photodetection::PhotodetectorModel<f32>;
    pub type OfdmLinkParams = crate::photodetection::OfdmLinkParams<f32>;
    pub type MimoBackhaulConfig = crate::backhaul::MimoBackhaulConfig<f32>;
    pub type RoomScenario = crate::coverage::RoomScenario<f32>;
}
