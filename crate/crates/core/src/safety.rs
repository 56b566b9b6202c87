//! Class 1 accessible emission limits for continuous-wave near-infrared lasers
//! under long exposure, and the resulting eye-safe transmit power.
//!
//! Only the CW branch for exposures of at least 100 s is modelled, with C6 = 1
//! (point source). Wavelengths are given in nanometres.

use crate::beam::GaussianBeam;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Shortest exposure handled by the long-exposure CW limit.
pub const MIN_EXPOSURE_S: f64 = 100.0;

const AEL_RETINAL_BASE_W: f64 = 3.9e-4;
const AEL_ABOVE_1400_W: f64 = 1.0e-2;

/// Measurement conditions for the accessible emission.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SafetyStandardParams<S> {
    /// Limiting aperture (pupil) diameter, m.
    pub pupil_diameter: S,
    /// Closest viewing distance from the source, m.
    pub measurement_distance: S,
    /// Exposure duration, s.
    pub exposure_duration: S,
    /// Supported wavelengths, nm (inclusive).
    pub wavelength_domain: (S, S),
}

impl<S: Scalar> Default for SafetyStandardParams<S> {
    fn default() -> Self {
        SafetyStandardParams {
            pupil_diameter: S::lit(7e-3),
            measurement_distance: S::lit(0.1),
            exposure_duration: S::lit(30_000.0),
            wavelength_domain: (S::lit(700.0), S::lit(1600.0)),
        }
    }
}

impl<S: Scalar> SafetyStandardParams<S> {
    pub fn with_exposure(mut self, seconds: S) -> Self {
        self.exposure_duration = seconds;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.pupil_diameter.is_finite() && self.pupil_diameter > S::zero()) {
            return Err(Error::invalid("pupil_diameter", "must be > 0"));
        }
        if !(self.measurement_distance.is_finite() && self.measurement_distance >= S::zero()) {
            return Err(Error::invalid("measurement_distance", "must be >= 0"));
        }
        if !(self.exposure_duration.is_finite() && self.exposure_duration > S::zero()) {
            return Err(Error::invalid("exposure_duration", "must be > 0"));
        }
        let (lo, hi) = self.wavelength_domain;
        if !(lo >= S::lit(700.0) && hi <= S::lit(1600.0) && lo <= hi) {
            return Err(Error::invalid("wavelength_domain", "must lie within [700, 1600] nm"));
        }
        Ok(())
    }
}

/// Outcome of the eye-safety evaluation for one transmitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SafetyAssessment<S> {
    /// Accessible emission limit, W.
    pub ael: S,
    /// Most hazardous viewing distance from the source, m.
    pub mhp_distance: S,
    /// Fraction of the emitted power passing the pupil at the MHP.
    pub pupil_coupling: S,
    /// `ael / pupil_coupling`, W.
    pub max_transmit_power: S,
}

fn check_domain<S: Scalar>(lambda_nm: S, lo: f64, hi: f64) -> Result<()> {
    if lambda_nm.is_finite() && lambda_nm >= S::lit(lo) && lambda_nm <= S::lit(hi) {
        Ok(())
    } else {
        Err(Error::WavelengthDomain {
            wavelength_nm: lambda_nm.as_f64(),
            min_nm: lo,
            max_nm: hi,
        })
    }
}

/// Wavelength correction C4 on 700–1400 nm.
pub fn coefficient_c4<S: Scalar>(lambda_nm: S) -> Result<S> {
    check_domain(lambda_nm, 700.0, 1400.0)?;
    if lambda_nm <= S::lit(1050.0) {
        Ok(S::lit(10.0).powf(S::lit(0.002) * (lambda_nm - S::lit(700.0))))
    } else {
        Ok(S::lit(5.0))
    }
}

/// Wavelength correction C7 on 700–1400 nm.
pub fn coefficient_c7<S: Scalar>(lambda_nm: S) -> Result<S> {
    check_domain(lambda_nm, 700.0, 1400.0)?;
    if lambda_nm <= S::lit(1150.0) {
        Ok(S::one())
    } else if lambda_nm <= S::lit(1200.0) {
        Ok(S::lit(10.0).powf(S::lit(0.018) * (lambda_nm - S::lit(1150.0))))
    } else {
        Ok(S::lit(8.0))
    }
}

/// Class 1 AEL (W) for a CW source viewed for `exposure_s` seconds.
pub fn class1_ael_cw<S: Scalar>(lambda_nm: S, exposure_s: S) -> Result<S> {
    check_domain(lambda_nm, 700.0, 1600.0)?;
    if exposure_s.is_nan() || exposure_s < S::lit(MIN_EXPOSURE_S) {
        return Err(Error::UnsupportedRegime(format!(
            "exposure {} s is below the {MIN_EXPOSURE_S} s long-exposure branch",
            exposure_s.as_f64()
        )));
    }
    if lambda_nm <= S::lit(1400.0) {
        Ok(S::lit(AEL_RETINAL_BASE_W) * coefficient_c4(lambda_nm)? * coefficient_c7(lambda_nm)?)
    } else {
        Ok(S::lit(AEL_ABOVE_1400_W))
    }
}

/// Fraction of the beam power passing the pupil at distance `z` from the source.
pub fn pupil_coupling<S: Scalar>(beam: &GaussianBeam<S>, params: &SafetyStandardParams<S>, z: S) -> S {
    beam.encircled_fraction(z, S::lit(0.5) * params.pupil_diameter)
}

/// Viewing distance `z >= measurement_distance` that maximises pupil coupling.
///
/// The waist sits at the source and the encircled fraction through a fixed
/// aperture only falls as the beam expands, so the maximum is the nearest
/// allowed position.
pub fn most_hazardous_position<S: Scalar>(_beam: &GaussianBeam<S>, params: &SafetyStandardParams<S>) -> S {
    params.measurement_distance.max(S::zero())
}

/// Largest CW power a source of waist `waist_radius` (m) can emit and stay Class 1.
pub fn max_transmit_power<S: Scalar>(
    lambda_nm: S,
    waist_radius: S,
    params: &SafetyStandardParams<S>,
) -> Result<SafetyAssessment<S>> {
    params.validate()?;
    let (lo, hi) = params.wavelength_domain;
    check_domain(lambda_nm, lo.as_f64(), hi.as_f64())?;
    let ael = class1_ael_cw(lambda_nm, params.exposure_duration)?;
    let beam = GaussianBeam::on_axis(lambda_nm * S::lit(1e-9), waist_radius, S::one())?;
    let mhp_distance = most_hazardous_position(&beam, params);
    let eta = pupil_coupling(&beam, params, mhp_distance);
    if eta.is_nan() || eta <= S::zero() {
        return Err(Error::NumericFailure(format!(
            "pupil coupling underflowed to {} at {} nm",
            eta.as_f64(),
            lambda_nm.as_f64()
        )));
    }
    Ok(SafetyAssessment {
        ael,
        mhp_distance,
        pupil_coupling: eta,
        max_transmit_power: ael / eta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn c4_values() {
        assert_eq!(coefficient_c4(700.0f64).unwrap(), 1.0);
        assert_relative_eq!(coefficient_c4(850.0f64).unwrap(), 1.995_262_3, max_relative = 1e-7);
        let formula = coefficient_c4(1050.0f64).unwrap();
        let plateau = coefficient_c4(1050.5f64).unwrap();
        assert_relative_eq!(formula, 5.011_872_3, max_relative = 1e-7);
        assert_eq!(plateau, 5.0);
        assert!((formula / plateau - 1.0).abs() < 3e-3);
    }

    #[test]
    fn c7_values() {
        assert_eq!(coefficient_c7(1000.0f64).unwrap(), 1.0);
        assert_relative_eq!(coefficient_c7(1200.0f64).unwrap(), 7.943_282_3, max_relative = 1e-7);
        assert_eq!(coefficient_c7(1300.0f64).unwrap(), 8.0);
    }

    #[test]
    fn coefficients_reject_out_of_domain() {
        assert!(matches!(coefficient_c4(699.0f64), Err(Error::WavelengthDomain { .. })));
        assert!(matches!(coefficient_c7(1401.0f64), Err(Error::WavelengthDomain { .. })));
        assert!(matches!(
            class1_ael_cw(1601.0f64, 1e4),
            Err(Error::WavelengthDomain { .. })
        ));
        assert!(matches!(
            class1_ael_cw(650.0f64, 1e4),
            Err(Error::WavelengthDomain { .. })
        ));
        assert!(class1_ael_cw(f64::NAN, 1e4).is_err());
    }

    #[test]
    fn ael_values() {
        assert_relative_eq!(
            class1_ael_cw(850.0f64, 30_000.0).unwrap(),
            7.781_523e-4,
            max_relative = 1e-6
        );
        assert_eq!(class1_ael_cw(1550.0f64, 30_000.0).unwrap(), 1e-2);
        let ratio = class1_ael_cw(1200.0f64, 3e4).unwrap() / class1_ael_cw(1050.0f64, 3e4).unwrap();
        assert!((ratio - 7.9).abs() < 0.1, "{ratio}");
    }

    #[test]
    fn short_exposure_is_unsupported() {
        assert!(matches!(
            class1_ael_cw(850.0f64, 10.0),
            Err(Error::UnsupportedRegime(_))
        ));
        let p = SafetyStandardParams::default().with_exposure(1.0f64);
        assert!(matches!(
            max_transmit_power(850.0, 10e-6, &p),
            Err(Error::UnsupportedRegime(_))
        ));
    }

    #[test]
    fn max_power_at_850_nm() {
        let a = max_transmit_power(850.0f64, 10e-6, &SafetyStandardParams::default()).unwrap();
        assert_relative_eq!(a.ael, 7.781_523e-4, max_relative = 1e-6);
        assert_relative_eq!(a.pupil_coupling, 0.964_801_1, max_relative = 1e-6);
        assert_relative_eq!(a.max_transmit_power, 8.065_42e-4, max_relative = 1e-5);
        assert_eq!(a.mhp_distance, 0.1);
        assert_eq!(a.max_transmit_power, a.ael / a.pupil_coupling);
    }

    #[test]
    fn larger_waist_lowers_power() {
        let p = SafetyStandardParams::default();
        let small = max_transmit_power(850.0f64, 10e-6, &p).unwrap().max_transmit_power;
        let big = max_transmit_power(850.0f64, 20e-6, &p).unwrap().max_transmit_power;
        assert!(big < small);
    }

    #[test]
    fn ael_does_not_depend_on_waist() {
        let p = SafetyStandardParams::default();
        for lambda in [700.0f64, 905.0, 1310.0, 1550.0] {
            let a = max_transmit_power(lambda, 5e-6, &p).unwrap();
            let b = max_transmit_power(lambda, 80e-6, &p).unwrap();
            assert_eq!(a.ael, b.ael);
            assert_eq!(a.ael, class1_ael_cw(lambda, p.exposure_duration).unwrap());
        }
    }

    #[test]
    fn rejects_wavelength_outside_params_domain() {
        let p = SafetyStandardParams {
            wavelength_domain: (800.0f64, 900.0),
            ..Default::default()
        };
        assert!(max_transmit_power(950.0, 10e-6, &p).is_err());
    }
}
