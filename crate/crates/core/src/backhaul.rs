//! Point-to-point MIMO backhaul: an `n × n` VCSEL array facing an `n × n` array
//! of square photodiodes, each beam aimed at its own detector.
//!
//! Indices are row-major: element `k` sits at column `k % n`, row `k / n`, and
//! both arrays are centred on the common optical axis.

use rayon::prelude::*;

use crate::beam::{segment_fraction, GaussianBeam};
use crate::error::{Error, Result};
use crate::photodetection::{dco_ofdm_rate, noise_variance, sinr_from_sums, OfdmLinkParams, PhotodetectorModel};
use crate::safety::{max_transmit_power, SafetyStandardParams};
use crate::scalar::Scalar;

pub const MIN_SIDE: usize = 2;
pub const MAX_SIDE: usize = 32;

/// Waist domain accepted by the channel model, m.
pub const WAIST_LIMITS_M: (f64, f64) = (1e-6, 500e-6);
/// Waist interval searched for thresholds and regime boundaries, m.
pub const SEARCH_WAISTS_M: (f64, f64) = (10e-6, 100e-6);

/// Per-beam optical power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BeamPower<S> {
    /// Largest Class 1 power for the beam's wavelength and waist.
    EyeSafe,
    Fixed(S),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RateMode {
    /// Full crosstalk between beams.
    Mimo,
    /// Parallel links: off-diagonal gains zeroed.
    Ideal,
}

impl RateMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RateMode::Mimo => "mimo",
            RateMode::Ideal => "ideal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MimoBackhaulConfig<S> {
    pub n_side: usize,
    /// m
    pub link_distance: S,
    /// nm
    pub wavelength_nm: S,
    /// m
    pub tx_pitch: S,
    /// m
    pub rx_pitch: S,
    /// m
    pub pd_half_side: S,
    pub per_beam_power: BeamPower<S>,
    pub pd: PhotodetectorModel<S>,
    pub link: OfdmLinkParams<S>,
    /// Measurement conditions used when `per_beam_power` is [`BeamPower::EyeSafe`].
    pub safety: SafetyStandardParams<S>,
}

impl<S: Scalar> MimoBackhaulConfig<S> {
    /// Defaults: 16 × 16 array, 2 m link, 850 nm, 10 mm pitch, 5 mm square detectors,
    /// eye-safe power, 5 GHz and a 9 dB gap.
    pub fn with_side(n_side: usize) -> Result<Self> {
        let half = S::lit(2.5e-3);
        let pd = PhotodetectorModel::silicon(S::lit(4.0) * half * half)?;
        let cfg = MimoBackhaulConfig {
            n_side,
            link_distance: S::lit(2.0),
            wavelength_nm: S::lit(850.0),
            tx_pitch: S::lit(10e-3),
            rx_pitch: S::lit(10e-3),
            pd_half_side: half,
            per_beam_power: BeamPower::EyeSafe,
            pd,
            link: OfdmLinkParams::from_db(S::lit(5e9), S::lit(9.0))?,
            safety: SafetyStandardParams::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(MIN_SIDE..=MAX_SIDE).contains(&self.n_side) {
            return Err(Error::invalid("n_side", format!("must lie in {MIN_SIDE}..={MAX_SIDE}")));
        }
        let positive = |v: S| v.is_finite() && v > S::zero();
        if !positive(self.link_distance) {
            return Err(Error::invalid("link_distance", "must be > 0"));
        }
        if !positive(self.wavelength_nm) {
            return Err(Error::invalid("wavelength_nm", "must be > 0"));
        }
        if !positive(self.tx_pitch) || !positive(self.rx_pitch) {
            return Err(Error::invalid("pitch", "must be > 0"));
        }
        if !positive(self.pd_half_side) || self.pd_half_side > S::lit(0.5) * self.rx_pitch {
            return Err(Error::invalid("pd_half_side", "must be > 0 and <= rx_pitch / 2"));
        }
        if let BeamPower::Fixed(p) = self.per_beam_power {
            if !(p.is_finite() && p >= S::zero()) {
                return Err(Error::invalid("per_beam_power", "must be >= 0"));
            }
        }
        Ok(())
    }

    pub fn channel_count(&self) -> usize {
        self.n_side * self.n_side
    }

    fn centred(&self, k: usize, pitch: S) -> S {
        let mid = S::lit((self.n_side as f64 - 1.0) * 0.5);
        (S::lit(k as f64) - mid) * pitch
    }

    /// Transmitter position of beam `j` in the array plane, m.
    pub fn tx_position(&self, j: usize) -> (S, S) {
        let n = self.n_side;
        (self.centred(j % n, self.tx_pitch), self.centred(j / n, self.tx_pitch))
    }

    /// Centre of photodiode `i` in the receiver plane, m.
    pub fn rx_position(&self, i: usize) -> (S, S) {
        let n = self.n_side;
        (self.centred(i % n, self.rx_pitch), self.centred(i / n, self.rx_pitch))
    }

    /// Beam `j` for waist `waist_radius`, with unit power, propagating toward the detectors.
    pub fn beam(&self, waist_radius: S) -> Result<GaussianBeam<S>> {
        GaussianBeam::on_axis(self.wavelength_nm * S::lit(1e-9), waist_radius, S::one())
    }

    /// Optical power launched by every beam at this waist, W.
    pub fn beam_power(&self, waist_radius: S) -> Result<S> {
        match self.per_beam_power {
            BeamPower::Fixed(p) => Ok(p),
            BeamPower::EyeSafe => {
                Ok(max_transmit_power(self.wavelength_nm, waist_radius, &self.safety)?.max_transmit_power)
            }
        }
    }
}

/// Power-gain matrix `h[i][j]`: fraction of beam `j` collected by photodiode `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix<S> {
    n_side: usize,
    gains: Vec<S>,
}

impl<S: Scalar> ChannelMatrix<S> {
    /// Number of beams (and photodiodes).
    pub fn dim(&self) -> usize {
        self.n_side * self.n_side
    }

    pub fn n_side(&self) -> usize {
        self.n_side
    }

    #[inline]
    pub fn gain(&self, pd: usize, beam: usize) -> S {
        self.gains[pd * self.dim() + beam]
    }

    /// Row of gains seen by photodiode `pd`.
    pub fn row(&self, pd: usize) -> &[S] {
        let d = self.dim();
        &self.gains[pd * d..(pd + 1) * d]
    }

    /// Total fraction of beam `beam` captured by all photodiodes.
    pub fn column_sum(&self, beam: usize) -> S {
        (0..self.dim()).fold(S::zero(), |acc, i| acc + self.gain(i, beam))
    }
}

fn check_waist<S: Scalar>(w0: S) -> Result<()> {
    let (lo, hi) = WAIST_LIMITS_M;
    if w0 >= S::lit(lo) && w0 <= S::lit(hi) {
        Ok(())
    } else {
        Err(Error::invalid("waist_radius", format!("must lie in [{lo}, {hi}] m")))
    }
}

/// Channel matrix for beams of waist `w0`.
pub fn gain_matrix<S: Scalar>(cfg: &MimoBackhaulConfig<S>, w0: S) -> Result<ChannelMatrix<S>> {
    cfg.validate()?;
    check_waist(w0)?;
    let n = cfg.n_side;
    let w = cfg.beam(w0)?.beam_radius(cfg.link_distance);
    let a = cfg.pd_half_side;
    // The square-detector coupling is separable: one factor per transverse axis.
    let mut axis = vec![S::zero(); n * n];
    for (r, row) in axis.chunks_mut(n).enumerate() {
        let rx = cfg.centred(r, cfg.rx_pitch);
        for (t, cell) in row.iter_mut().enumerate() {
            let dx = rx - cfg.centred(t, cfg.tx_pitch);
            *cell = segment_fraction(dx - a, dx + a, w);
        }
    }
    let d = n * n;
    let mut gains = vec![S::zero(); d * d];
    gains.par_chunks_mut(d).enumerate().for_each(|(i, row)| {
        let (ix, iy) = (i % n, i / n);
        for (j, g) in row.iter_mut().enumerate() {
            *g = axis[ix * n + j % n] * axis[iy * n + j / n];
        }
    });
    Ok(ChannelMatrix { n_side: n, gains })
}

/// Received quantities at one photodiode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdBudget<S> {
    /// Optical power from the intended beam, W.
    pub signal_power: S,
    /// Total optical power on the detector, W.
    pub incident_power: S,
    /// Sum of squared interfering optical powers, W².
    pub interference_power_sq: S,
}

impl<S: Scalar> PdBudget<S> {
    /// Electrical interference power, A².
    pub fn interference_current_sq(&self, pd: &PhotodetectorModel<S>) -> S {
        pd.responsivity * pd.responsivity * self.interference_power_sq
    }

    pub fn noise_variance(&self, pd: &PhotodetectorModel<S>, bandwidth: S) -> S {
        noise_variance(self.incident_power, pd, bandwidth)
    }

    pub fn sinr(&self, pd: &PhotodetectorModel<S>, bandwidth: S) -> S {
        sinr_from_sums(
            self.signal_power,
            self.incident_power,
            self.interference_power_sq,
            pd,
            bandwidth,
        )
    }
}

/// Per-photodiode budgets for the given mode, in photodiode order.
pub fn pd_budgets<S: Scalar>(cfg: &MimoBackhaulConfig<S>, w0: S, mode: RateMode) -> Result<Vec<PdBudget<S>>> {
    let h = gain_matrix(cfg, w0)?;
    let power = cfg.beam_power(w0)?;
    Ok((0..h.dim())
        .into_par_iter()
        .map(|i| {
            let signal = power * h.gain(i, i);
            match mode {
                RateMode::Ideal => PdBudget {
                    signal_power: signal,
                    incident_power: signal,
                    interference_power_sq: S::zero(),
                },
                RateMode::Mimo => {
                    let mut incident = S::zero();
                    let mut interference = S::zero();
                    for (j, &g) in h.row(i).iter().enumerate() {
                        let p = power * g;
                        incident = incident + p;
                        if j != i {
                            interference = interference + p * p;
                        }
                    }
                    PdBudget {
                        signal_power: signal,
                        incident_power: incident,
                        interference_power_sq: interference,
                    }
                }
            }
        })
        .collect())
}

/// Sum of per-link DCO-OFDM rates (bit/s).
pub fn aggregate_rate<S: Scalar>(cfg: &MimoBackhaulConfig<S>, w0: S, mode: RateMode) -> Result<S> {
    let rates: Vec<S> = pd_budgets(cfg, w0, mode)?
        .par_iter()
        .map(|b| dco_ofdm_rate(b.sinr(&cfg.pd, cfg.link.bandwidth), &cfg.link))
        .collect();
    let total = rates.iter().fold(S::zero(), |acc, &r| acc + r);
    if total.is_finite() {
        Ok(total)
    } else {
        Err(Error::NumericFailure(format!(
            "non-finite aggregate rate at w0 = {} m",
            w0.as_f64()
        )))
    }
}

/// Result of the minimum-waist search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WaistThreshold<S> {
    Found(S),
    /// Target not reached even at the largest searched waist.
    Infeasible,
}

/// Bisection tolerance on the waist, m.
pub const THRESHOLD_TOLERANCE_M: f64 = 0.5e-6;

/// Smallest waist in the search interval whose crosstalk-limited aggregate rate meets
/// `target` (bit/s), assuming the rate is nondecreasing in the waist.
pub fn min_waist_for_target<S: Scalar>(cfg: &MimoBackhaulConfig<S>, target: S) -> Result<WaistThreshold<S>> {
    let (lo_m, hi_m) = SEARCH_WAISTS_M;
    let (mut lo, mut hi) = (S::lit(lo_m), S::lit(hi_m));
    let meets = |w0: S| -> Result<bool> { Ok(aggregate_rate(cfg, w0, RateMode::Mimo)? >= target) };
    if meets(lo)? {
        return Ok(WaistThreshold::Found(lo));
    }
    if !meets(hi)? {
        return Ok(WaistThreshold::Infeasible);
    }
    while hi - lo > S::lit(THRESHOLD_TOLERANCE_M) {
        let mid = S::lit(0.5) * (lo + hi);
        if meets(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(WaistThreshold::Found(hi))
}

/// Which term dominates the SINR denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    CrosstalkLimited,
    NoiseLimited,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegimeBoundary<S> {
    /// Waist where interference equals noise at the worst photodiode.
    Within(S),
    /// No crossing inside the search interval; the whole interval is in one regime.
    OutsideDomain(Regime),
}

/// Largest interference-to-noise ratio over all photodiodes.
pub fn interference_to_noise<S: Scalar>(cfg: &MimoBackhaulConfig<S>, w0: S) -> Result<S> {
    let budgets = pd_budgets(cfg, w0, RateMode::Mimo)?;
    let b = cfg.link.bandwidth;
    Ok(budgets.iter().fold(S::zero(), |worst, pd| {
        worst.max(pd.interference_current_sq(&cfg.pd) / pd.noise_variance(&cfg.pd, b))
    }))
}

/// Waist separating the crosstalk-limited (below) and noise-limited (above) regimes.
pub fn regime_boundary<S: Scalar>(cfg: &MimoBackhaulConfig<S>) -> Result<RegimeBoundary<S>> {
    let (lo_m, hi_m) = SEARCH_WAISTS_M;
    let (mut lo, mut hi) = (S::lit(lo_m), S::lit(hi_m));
    let excess = |w0: S| -> Result<bool> { Ok(interference_to_noise(cfg, w0)? > S::one()) };
    if !excess(lo)? {
        return Ok(RegimeBoundary::OutsideDomain(Regime::NoiseLimited));
    }
    if excess(hi)? {
        return Ok(RegimeBoundary::OutsideDomain(Regime::CrosstalkLimited));
    }
    while hi - lo > S::lit(1e-8) {
        let mid = S::lit(0.5) * (lo + hi);
        if excess(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(RegimeBoundary::Within(S::lit(0.5) * (lo + hi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg(n: usize) -> MimoBackhaulConfig<f64> {
        MimoBackhaulConfig::with_side(n).unwrap()
    }

    #[test]
    fn positions_are_centred() {
        let c = cfg(3);
        assert_eq!(c.tx_position(0), (-0.01, -0.01));
        assert_eq!(c.tx_position(4), (0.0, 0.0));
        assert_eq!(c.rx_position(5), (0.01, 0.0));
    }

    #[test]
    fn validation() {
        assert!(MimoBackhaulConfig::<f64>::with_side(1).is_err());
        assert!(MimoBackhaulConfig::<f64>::with_side(33).is_err());
        let mut c = cfg(4);
        c.pd_half_side = 6e-3;
        assert!(c.validate().is_err());
        assert!(gain_matrix(&cfg(4), 0.5e-6).is_err());
        assert!(gain_matrix(&cfg(4), 600e-6).is_err());
    }

    #[test]
    fn matches_square_coupling() {
        let mut c = cfg(3);
        c.rx_pitch = 12e-3;
        let h = gain_matrix(&c, 40e-6).unwrap();
        let beam = c.beam(40e-6).unwrap();
        for i in 0..9 {
            for j in 0..9 {
                let (rx, ry) = c.rx_position(i);
                let (tx, ty) = c.tx_position(j);
                let p = beam.coupled_power_square(c.pd_half_side, rx - tx, ry - ty, c.link_distance);
                assert_relative_eq!(h.gain(i, j), p, max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn tight_beams_give_identity() {
        let mut c = cfg(4);
        c.link_distance = 0.05;
        let h = gain_matrix(&c, 300e-6).unwrap();
        for i in 0..16 {
            for j in 0..16 {
                if i == j {
                    assert!(h.gain(i, j) > 0.999);
                } else {
                    assert!(h.gain(i, j) < 1e-6);
                }
            }
        }
    }

    #[test]
    fn wide_spot_collects_little() {
        let c = cfg(16);
        let h = gain_matrix(&c, 10e-6).unwrap();
        let max_diag = (0..h.dim()).map(|i| h.gain(i, i)).fold(0.0, f64::max);
        assert!(max_diag < 0.05, "{max_diag}");
    }

    #[test]
    fn four_fold_symmetry() {
        let c = cfg(5);
        let h = gain_matrix(&c, 30e-6).unwrap();
        let n = 5;
        let rot = |k: usize| {
            let (x, y) = (k % n, k / n);
            (n - 1 - y) + x * n
        };
        let mirror = |k: usize| (n - 1 - k % n) + (k / n) * n;
        for i in 0..25 {
            for j in 0..25 {
                assert_relative_eq!(h.gain(i, j), h.gain(rot(i), rot(j)), max_relative = 1e-12);
                assert_relative_eq!(h.gain(i, j), h.gain(mirror(i), mirror(j)), max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn ideal_mode_of_decoupled_links() {
        let mut c = cfg(3);
        c.link_distance = 0.05;
        c.per_beam_power = BeamPower::Fixed(1e-3);
        let w0 = 300e-6;
        let single = {
            let h = gain_matrix(&c, w0).unwrap();
            let p = 1e-3 * h.gain(4, 4);
            dco_ofdm_rate(
                crate::photodetection::electrical_snr(p, &c.pd, c.link.bandwidth),
                &c.link,
            )
        };
        let ideal = aggregate_rate(&c, w0, RateMode::Ideal).unwrap();
        assert_relative_eq!(ideal, 9.0 * single, max_relative = 1e-9);
        let mimo = aggregate_rate(&c, w0, RateMode::Mimo).unwrap();
        assert_relative_eq!(mimo, ideal, max_relative = 1e-6);
    }

    #[test]
    fn zero_target_returns_lower_bound() {
        let c = cfg(4);
        assert_eq!(min_waist_for_target(&c, 0.0).unwrap(), WaistThreshold::Found(10e-6));
    }

    #[test]
    fn small_array_misses_terabit() {
        assert_eq!(min_waist_for_target(&cfg(4), 1e12).unwrap(), WaistThreshold::Infeasible);
    }

    #[test]
    fn widely_spaced_array_is_noise_limited() {
        let mut c = cfg(4);
        c.rx_pitch = 0.5;
        c.tx_pitch = 0.5;
        assert_eq!(
            regime_boundary(&c).unwrap(),
            RegimeBoundary::OutsideDomain(Regime::NoiseLimited)
        );
    }

    #[test]
    fn fixed_power_is_used_verbatim() {
        let mut c = cfg(2);
        c.per_beam_power = BeamPower::Fixed(2e-3);
        assert_eq!(c.beam_power(50e-6).unwrap(), 2e-3);
        c.per_beam_power = BeamPower::EyeSafe;
        c.wavelength_nm = 650.0;
        assert!(c.beam_power(50e-6).is_err());
    }
}
