//! Globally adaptive Gauss–Kronrod (7/15) quadrature, generic over the scalar type.

// Node tables are kept at their published precision.
#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<S> {
    pub value: S,
    pub abs_error: S,
    pub evaluations: usize,
}

/// Tolerances and refinement budget for [`AdaptiveQuadrature`].
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveQuadrature<S> {
    /// Relative error the refinement aims for.
    pub target_rel: S,
    /// Absolute error below which refinement stops regardless of the relative target.
    pub abs_tol: S,
    /// Relative error estimate above which the result is reported as a failure.
    pub failure_rel: S,
    pub max_segments: usize,
}

impl<S: Scalar> Default for AdaptiveQuadrature<S> {
    fn default() -> Self {
        // f32 cannot reach 1e-12; floor the targets near its precision.
        let eps = S::epsilon() * S::lit(64.0);
        AdaptiveQuadrature {
            target_rel: S::lit(1e-12).max(eps),
            abs_tol: S::lit(1e-300).max(S::min_positive_value()),
            failure_rel: S::lit(1e-6).max(eps),
            max_segments: 200,
        }
    }
}

#[derive(Clone, Copy)]
struct Segment<S> {
    a: S,
    b: S,
    value: S,
    error: S,
}

fn kronrod<S: Scalar, F>(f: &mut F, a: S, b: S) -> Result<Segment<S>>
where
    F: FnMut(S) -> Result<S>,
{
    let half = S::lit(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let f_center = f(center)?;
    let mut kron = f_center * S::lit(WGK[7]);
    let mut gauss = f_center * S::lit(WG[3]);
    for (k, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half_len * S::lit(x);
        let pair = f(center - dx)? + f(center + dx)?;
        kron = kron + pair * S::lit(w);
        if k % 2 == 1 {
            gauss = gauss + pair * S::lit(WG[k / 2]);
        }
    }
    let value = kron * half_len;
    let error = ((kron - gauss) * half_len).abs();
    Ok(Segment { a, b, value, error })
}

impl<S: Scalar> AdaptiveQuadrature<S> {
    pub fn with_target(mut self, rel: S) -> Self {
        self.target_rel = rel;
        self
    }

    pub fn with_abs_tol(mut self, abs: S) -> Self {
        self.abs_tol = abs;
        self
    }

    /// Integrates a plain integrand over `[a, b]`.
    pub fn integrate<F>(&self, mut f: F, a: S, b: S) -> Result<Integral<S>>
    where
        F: FnMut(S) -> S,
    {
        self.try_integrate(|x| Ok(f(x)), a, b)
    }

    /// Integrates a fallible integrand; the first integrand error aborts the integration.
    /// Nested (iterated) integrals use this to propagate inner non-convergence.
    pub fn try_integrate<F>(&self, mut f: F, a: S, b: S) -> Result<Integral<S>>
    where
        F: FnMut(S) -> Result<S>,
    {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::NumericFailure("non-finite integration bounds".into()));
        }
        if a == b {
            return Ok(Integral {
                value: S::zero(),
                abs_error: S::zero(),
                evaluations: 0,
            });
        }
        let mut segments = vec![kronrod(&mut f, a, b)?];
        let mut evaluations = 15;
        loop {
            let total: S = segments.iter().fold(S::zero(), |acc, s| acc + s.value);
            let error: S = segments.iter().fold(S::zero(), |acc, s| acc + s.error);
            if !total.is_finite() || !error.is_finite() {
                return Err(Error::NumericFailure("non-finite integrand value".into()));
            }
            let goal = self.abs_tol.max(self.target_rel * total.abs());
            if error <= goal || segments.len() >= self.max_segments {
                let accept = self.abs_tol.max(self.failure_rel * total.abs());
                if error > accept {
                    return Err(Error::NumericFailure(format!(
                        "quadrature did not converge: error estimate {} for value {} after {} segments",
                        error.as_f64(),
                        total.as_f64(),
                        segments.len()
                    )));
                }
                return Ok(Integral {
                    value: total,
                    abs_error: error,
                    evaluations,
                });
            }
            // Bisect the segment with the largest error (first one on ties).
            let worst = segments.iter().enumerate().fold(
                0usize,
                |best, (i, s)| {
                    if s.error > segments[best].error {
                        i
                    } else {
                        best
                    }
                },
            );
            let seg = segments.swap_remove(worst);
            let mid = S::lit(0.5) * (seg.a + seg.b);
            if mid <= seg.a || mid >= seg.b {
                // Interval can no longer be split; keep it and stop refining here.
                segments.push(Segment {
                    error: S::zero(),
                    ..seg
                });
                continue;
            }
            segments.push(kronrod(&mut f, seg.a, mid)?);
            segments.push(kronrod(&mut f, mid, seg.b)?);
            evaluations += 30;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let q = AdaptiveQuadrature::<f64>::default();
        let r = q.integrate(|x| 3.0 * x * x - 2.0 * x + 1.0, -1.0, 2.0).unwrap();
        // x^3 - x^2 + x on [-1, 2] = 6 - (-3)
        assert!((r.value - 9.0).abs() < 1e-13);
        assert_eq!(r.evaluations, 15);
    }

    #[test]
    fn peaked_gaussian_converges() {
        let q = AdaptiveQuadrature::<f64>::default();
        let s: f64 = 1e-3;
        let r = q.integrate(|x| (-(x * x) / (2.0 * s * s)).exp(), -1.0, 1.0).unwrap();
        let exact = s * (2.0 * std::f64::consts::PI).sqrt();
        assert!(((r.value - exact) / exact).abs() < 1e-10, "{}", r.value);
    }

    #[test]
    fn zero_width_interval() {
        let q = AdaptiveQuadrature::<f64>::default();
        assert_eq!(q.integrate(|x| x, 1.0, 1.0).unwrap().value, 0.0);
    }

    #[test]
    fn singular_integrand_reports_failure() {
        let q = AdaptiveQuadrature {
            max_segments: 8,
            ..AdaptiveQuadrature::<f64>::default()
        };
        let err = q.integrate(|x| 1.0 / x.abs().sqrt().max(1e-300), -1.0, 1.0);
        assert!(matches!(err, Err(Error::NumericFailure(_))));
    }

    #[test]
    fn inner_failure_propagates() {
        let q = AdaptiveQuadrature::<f64>::default();
        let err = q.try_integrate(
            |x| {
                if x > 0.5 {
                    Err(Error::NumericFailure("inner".into()))
                } else {
                    Ok(x)
                }
            },
            0.0,
            1.0,
        );
        assert_eq!(err, Err(Error::NumericFailure("inner".into())));
    }

    #[test]
    fn works_in_single_precision() {
        let q = AdaptiveQuadrature::<f32>::default();
        let r = q.integrate(|x: f32| x.sin(), 0.0, std::f32::consts::PI).unwrap();
        assert!((r.value - 2.0).abs() < 1e-5);
    }
}
