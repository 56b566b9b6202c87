//! Gaussian-beam propagation and aperture coupling.
//!
//! A beam is a fundamental (TEM00) Gaussian mode with its waist at `origin`,
//! propagating along the unit vector `axis`. Receiving apertures are evaluated
//! in the plane perpendicular to the axis at their axial distance from the waist.

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::quadrature::AdaptiveQuadrature;
use crate::scalar::Scalar;

/// Fundamental-mode Gaussian beam.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianBeam<S> {
    wavelength: S,
    waist_radius: S,
    power: S,
    origin: Vec3<S>,
    axis: Vec3<S>,
}

/// Circular aperture in the transverse plane of a beam.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircularAperture<S> {
    pub radius: S,
    /// Distance of the aperture centre from the beam axis.
    pub lateral_offset: S,
    /// Distance from the waist along the beam axis.
    pub axial_distance: S,
}

impl<S: Scalar> CircularAperture<S> {
    pub fn new(radius: S, lateral_offset: S, axial_distance: S) -> Result<Self> {
        if !(radius.is_finite() && radius > S::zero()) {
            return Err(Error::invalid("radius", "must be finite and > 0"));
        }
        if !(lateral_offset.is_finite() && lateral_offset >= S::zero()) {
            return Err(Error::invalid("lateral_offset", "must be finite and >= 0"));
        }
        if !(axial_distance.is_finite() && axial_distance >= S::zero()) {
            return Err(Error::invalid("axial_distance", "must be finite and >= 0"));
        }
        Ok(CircularAperture {
            radius,
            lateral_offset,
            axial_distance,
        })
    }
}

impl<S: Scalar> GaussianBeam<S> {
    /// Creates a beam. The axis is normalised; a zero axis is rejected.
    pub fn new(wavelength: S, waist_radius: S, power: S, origin: Vec3<S>, axis: Vec3<S>) -> Result<Self> {
        if !(wavelength.is_finite() && wavelength > S::zero()) {
            return Err(Error::invalid("wavelength", "must be finite and > 0"));
        }
        if !(waist_radius.is_finite() && waist_radius > S::zero()) {
            return Err(Error::invalid("waist_radius", "must be finite and > 0"));
        }
        if !(power.is_finite() && power >= S::zero()) {
            return Err(Error::invalid("power", "must be finite and >= 0"));
        }
        if !origin.is_finite() {
            return Err(Error::invalid("origin", "must be finite"));
        }
        let axis = axis
            .normalized()
            .ok_or_else(|| Error::invalid("axis", "must be a finite non-zero vector"))?;
        Ok(GaussianBeam {
            wavelength,
            waist_radius,
            power,
            origin,
            axis,
        })
    }

    /// Beam with its waist at the origin propagating along +z.
    pub fn on_axis(wavelength: S, waist_radius: S, power: S) -> Result<Self> {
        Self::new(wavelength, waist_radius, power, Vec3::zero(), Vec3::unit_z())
    }

    pub fn wavelength(&self) -> S {
        self.wavelength
    }

    pub fn waist_radius(&self) -> S {
        self.waist_radius
    }

    pub fn power(&self) -> S {
        self.power
    }

    pub fn origin(&self) -> Vec3<S> {
        self.origin
    }

    pub fn axis(&self) -> Vec3<S> {
        self.axis
    }

    /// Same beam carrying a different optical power.
    pub fn with_power(self, power: S) -> Result<Self> {
        Self::new(self.wavelength, self.waist_radius, power, self.origin, self.axis)
    }

    /// `z_R = π w0² / λ`.
    pub fn rayleigh_range(&self) -> S {
        S::PI() * self.waist_radius * self.waist_radius / self.wavelength
    }

    /// `w(z) = w0 √(1 + (z/z_R)²)`. Even in `z`, so distances before the waist are allowed.
    pub fn beam_radius(&self, z: S) -> S {
        let t = z / self.rayleigh_range();
        self.waist_radius * (S::one() + t * t).sqrt()
    }

    /// Far-field half-angle divergence `λ / (π w0)`.
    pub fn divergence_half_angle(&self) -> S {
        self.wavelength / (S::PI() * self.waist_radius)
    }

    /// Irradiance (W/m²) at radial distance `r` from the axis and axial distance `z`.
    pub fn intensity(&self, r: S, z: S) -> S {
        let w = self.beam_radius(z);
        self.intensity_with_radius(r, w)
    }

    fn intensity_with_radius(&self, r: S, w: S) -> S {
        let two = S::lit(2.0);
        let w2 = w * w;
        two * self.power / (S::PI() * w2) * (-two * r * r / w2).exp()
    }

    /// Power through a centred circular aperture of radius `a` at distance `z`.
    pub fn encircled_power(&self, z: S, a: S) -> S {
        let w = self.beam_radius(z);
        let x = S::lit(2.0) * a * a / (w * w);
        // 1 - e^{-x} without cancellation for small x
        self.power * -(-x).exp_m1()
    }

    /// Fraction of the power through a centred circular aperture.
    pub fn encircled_fraction(&self, z: S, a: S) -> S {
        let w = self.beam_radius(z);
        -(-(S::lit(2.0) * a * a / (w * w))).exp_m1()
    }

    /// Power through an off-axis circular aperture, by adaptive quadrature in polar
    /// coordinates centred on the aperture.
    pub fn coupled_power_offset(&self, aperture: &CircularAperture<S>) -> Result<S> {
        if self.power == S::zero() {
            return Ok(S::zero());
        }
        let w = self.beam_radius(aperture.axial_distance);
        let d = aperture.lateral_offset;
        let a = aperture.radius;
        let two = S::lit(2.0);
        let peak = two * self.power / (S::PI() * w * w);
        let inv_w2 = S::one() / (w * w);

        let inner_q = AdaptiveQuadrature::<S>::default().with_target(S::lit(1e-12).max(S::epsilon() * S::lit(64.0)));
        let outer_q = AdaptiveQuadrature::<S>::default().with_target(S::lit(1e-11).max(S::epsilon() * S::lit(64.0)));

        let radial = |rho: S| -> Result<S> {
            if rho == S::zero() {
                return Ok(S::zero());
            }
            let ring = inner_q.integrate(
                |phi: S| {
                    let r2 = (d * d + rho * rho + two * d * rho * phi.cos()).max(S::zero());
                    (-two * r2 * inv_w2).exp()
                },
                S::zero(),
                S::PI(),
            )?;
            Ok(two * rho * ring.value)
        };
        let total = outer_q.try_integrate(radial, S::zero(), a)?;
        Ok((peak * total.value).min(self.power).max(S::zero()))
    }

    /// Power through an axis-aligned square of half-side `half_side` centred at
    /// transverse offset `(offset_x, offset_y)` from the beam axis at distance `z`.
    /// The Gaussian is separable, so this is a product of two 1-D segment integrals.
    pub fn coupled_power_square(&self, half_side: S, offset_x: S, offset_y: S, z: S) -> S {
        let w = self.beam_radius(z);
        self.power
            * segment_fraction(offset_x - half_side, offset_x + half_side, w)
            * segment_fraction(offset_y - half_side, offset_y + half_side, w)
    }

    /// Transverse distance from the axis and signed axial distance from the waist
    /// of `point`, in the beam frame.
    pub fn beam_frame(&self, point: Vec3<S>) -> (S, S) {
        let v = point - self.origin;
        let z = v.dot(self.axis);
        let r2 = (v.norm_squared() - z * z).max(S::zero());
        (r2.sqrt(), z)
    }
}

/// Fraction of a 1-D Gaussian marginal `∝ exp(-2x²/w²)` that falls in `[lo, hi]`.
pub fn segment_fraction<S: Scalar>(lo: S, hi: S, w: S) -> S {
    if hi <= lo {
        return S::zero();
    }
    let k = S::SQRT_2() / w;
    let (u, v) = (lo * k, hi * k);
    let half = S::lit(0.5);
    // Work in the tail where erfc keeps relative precision.
    let f = if u >= S::zero() {
        half * (u.erfc() - v.erfc())
    } else if v <= S::zero() {
        half * ((-v).erfc() - (-u).erfc())
    } else {
        half * (v.erf() - u.erf())
    };
    f.max(S::zero()).min(S::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn beam(lambda: f64, w0: f64) -> GaussianBeam<f64> {
        GaussianBeam::on_axis(lambda, w0, 1.0).unwrap()
    }

    #[test]
    fn rayleigh_range_examples() {
        assert_relative_eq!(beam(850e-9, 10e-6).rayleigh_range(), 3.695_991e-4, max_relative = 1e-6);
        assert_relative_eq!(beam(850e-9, 100e-6).rayleigh_range(), 3.695_991e-2, max_relative = 1e-6);
        let r1 = beam(850e-9, 20e-6).rayleigh_range();
        let r2 = beam(850e-9, 40e-6).rayleigh_range();
        assert_relative_eq!(r2 / r1, 4.0, max_relative = 1e-14);
    }

    #[test]
    fn beam_radius_examples() {
        let b = beam(850e-9, 10e-6);
        assert_eq!(b.beam_radius(0.0), 10e-6);
        assert_relative_eq!(b.beam_radius(2.0), 5.411_268e-2, max_relative = 1e-6);
        assert_relative_eq!(beam(950e-9, 5e-6).beam_radius(3.0), 0.181_436_6, max_relative = 1e-6);
    }

    #[test]
    fn divergence_examples() {
        let b = beam(850e-9, 10e-6);
        assert_relative_eq!(b.divergence_half_angle(), 2.705_634e-2, max_relative = 1e-6);
        let z = 100.0 * b.rayleigh_range();
        let ratio = b.beam_radius(z) / z / b.divergence_half_angle();
        assert!((ratio - 1.0).abs() < 0.01);
        assert!(beam(850e-9, 1.0).divergence_half_angle() < 1e-6);
    }

    #[test]
    fn intensity_profile_points() {
        let b = GaussianBeam::on_axis(950e-9, 5e-6, 10e-3).unwrap();
        let z = 3.0;
        let w = b.beam_radius(z);
        let i0 = b.intensity(0.0, z);
        assert_relative_eq!(i0, 2.0 * 10e-3 / (std::f64::consts::PI * w * w), max_relative = 1e-15);
        assert_relative_eq!(b.intensity(w, z), i0 * (-2.0f64).exp(), max_relative = 1e-14);
        assert_relative_eq!(i0, 0.193_388_3, max_relative = 1e-6);
    }

    #[test]
    fn encircled_power_examples() {
        let b = GaussianBeam::on_axis(850e-9, 10e-6, 2.0).unwrap();
        let w = b.beam_radius(0.1);
        assert_relative_eq!(
            b.encircled_power(0.1, w),
            2.0 * (1.0 - (-2.0f64).exp()),
            max_relative = 1e-14
        );
        assert_eq!(b.encircled_power(0.1, 1.0), 2.0);
        assert_relative_eq!(b.encircled_fraction(0.1, 3.5e-3), 0.964_801_1, max_relative = 1e-6);
    }

    #[test]
    fn offset_coupling_matches_closed_form_when_concentric() {
        let b = GaussianBeam::on_axis(850e-9, 10e-6, 1.0).unwrap();
        for &(a, z) in &[(3.5e-3, 0.1), (1e-3, 2.0), (0.02, 2.0), (1e-5, 0.0)] {
            let ap = CircularAperture::new(a, 0.0, z).unwrap();
            let p = b.coupled_power_offset(&ap).unwrap();
            assert_relative_eq!(p, b.encircled_power(z, a), max_relative = 1e-8);
        }
    }

    #[test]
    fn far_offset_tail_is_negligible() {
        let b = GaussianBeam::on_axis(850e-9, 10e-6, 1.0).unwrap();
        let w = b.beam_radius(1.0);
        let ap = CircularAperture::new(w, 10.0 * w, 1.0).unwrap();
        let p = b.coupled_power_offset(&ap).unwrap();
        assert!((0.0..1e-10).contains(&p), "{p}");
    }

    #[test]
    fn square_coupling_limits_and_symmetry() {
        let b = GaussianBeam::on_axis(850e-9, 10e-6, 3.0).unwrap();
        assert_relative_eq!(b.coupled_power_square(10.0, 0.0, 0.0, 2.0), 3.0, max_relative = 1e-15);
        let p1 = b.coupled_power_square(2.5e-3, 7e-3, -3e-3, 2.0);
        let p2 = b.coupled_power_square(2.5e-3, -7e-3, 3e-3, 2.0);
        assert_relative_eq!(p1, p2, max_relative = 1e-14);
    }

    #[test]
    fn segment_fraction_tails_keep_precision() {
        let w = 1.0;
        let far = segment_fraction(5.0, 6.0, w);
        // erfc(5√2)/2 dominates
        assert_relative_eq!(
            far,
            0.5 * libm::erfc(5.0 * std::f64::consts::SQRT_2),
            max_relative = 1e-6
        );
        assert_relative_eq!(segment_fraction(-6.0, -5.0, w), far, max_relative = 1e-14);
        assert_eq!(segment_fraction(1.0, 1.0, w), 0.0);
    }

    #[test]
    fn beam_frame_coordinates() {
        let b = GaussianBeam::new(850e-9, 10e-6, 1.0, Vec3::new(1.0, 1.0, 3.0), Vec3::new(0.0, 0.0, -2.0)).unwrap();
        assert_eq!(b.axis(), Vec3::new(0.0, 0.0, -1.0));
        let (r, z) = b.beam_frame(Vec3::new(1.3, 1.4, 0.0));
        assert_relative_eq!(r, 0.5, max_relative = 1e-12);
        assert_relative_eq!(z, 3.0, max_relative = 1e-12);
    }

    #[test]
    fn constructors_reject_invalid_input() {
        assert!(GaussianBeam::on_axis(0.0, 1e-5, 1.0).is_err());
        assert!(GaussianBeam::on_axis(850e-9, -1e-5, 1.0).is_err());
        assert!(GaussianBeam::on_axis(850e-9, 1e-5, -1.0).is_err());
        assert!(GaussianBeam::new(850e-9, 1e-5, 1.0, Vec3::zero(), Vec3::zero()).is_err());
        assert!(CircularAperture::new(0.0, 0.0, 0.0).is_err());
        assert!(CircularAperture::new(1.0, -1.0, 0.0).is_err());
        assert!(CircularAperture::<f64>::new(1.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn single_precision_beam() {
        let b = GaussianBeam::<f32>::on_axis(850e-9, 10e-6, 1.0).unwrap();
        assert!((b.beam_radius(2.0) - 5.411_268e-2).abs() < 1e-5);
        let ap = CircularAperture::new(3.5e-3f32, 0.0, 0.1).unwrap();
        let p = b.coupled_power_offset(&ap).unwrap();
        assert!((p - b.encircled_power(0.1, 3.5e-3)).abs() < 1e-4);
    }
}
