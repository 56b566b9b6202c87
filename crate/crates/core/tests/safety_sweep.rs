use approx::assert_relative_eq;
use lumenplan::safety::{class1_ael_cw, max_transmit_power};
use lumenplan::{Error, SafetyStandardParams};

const WAISTS: [f64; 3] = [10e-6, 50e-6, 100e-6];

fn curve(w0: f64) -> Vec<(f64, f64)> {
    let params = SafetyStandardParams::default();
    (700..=1600)
        .map(|l| {
            let l = l as f64;
            (l, max_transmit_power(l, w0, &params).unwrap().max_transmit_power)
        })
        .collect()
}

#[test]
fn curves_rise_within_each_coefficient_branch() {
    for w0 in WAISTS {
        let c = curve(w0);
        for pair in c.windows(2) {
            let ((l0, p0), (l1, p1)) = (pair[0], pair[1]);
            // branch edges of C4 (1050 nm) and of the retinal limit (1400 nm)
            if l0 == 1050.0 || l0 == 1400.0 {
                continue;
            }
            assert!(p1 >= p0, "w0 {w0}: {p0} at {l0} nm > {p1} at {l1} nm");
        }
    }
}

#[test]
fn branch_edges_follow_the_limit_table() {
    let t = 30_000.0;
    for w0 in WAISTS {
        let c = curve(w0);
        let at = |l: f64| c.iter().find(|p| p.0 == l).unwrap().1;
        // C4 saturates at 5 just past 1050 nm
        assert_relative_eq!(at(1051.0) / at(1050.0), 5.0 / 10f64.powf(0.7), max_relative = 1e-3);
        // the long-wavelength limit is lower than the last retinal value
        let jump = at(1401.0) / at(1400.0);
        let ael_ratio = class1_ael_cw(1401.0, t).unwrap() / class1_ael_cw(1400.0, t).unwrap();
        assert_relative_eq!(jump, ael_ratio, max_relative = 2e-3);
        assert!(jump < 1.0);
    }
}

#[test]
fn larger_waists_never_allow_more_power() {
    let curves: Vec<_> = WAISTS.iter().map(|&w| curve(w)).collect();
    for ((a, b), c) in curves[0].iter().zip(&curves[1]).zip(&curves[2]) {
        assert!(a.1 > b.1, "10 um vs 50 um at {} nm", a.0);
        assert!(b.1 >= c.1, "50 um vs 100 um at {} nm", a.0);
    }
}

#[test]
fn coefficient_driven_rise_between_1050_and_1200() {
    for w0 in WAISTS {
        let c = curve(w0);
        let at = |l: f64| c.iter().find(|p| p.0 == l).unwrap().1;
        let ratio = at(1200.0) / at(1050.0);
        assert!((6.0..=10.0).contains(&ratio), "w0 {w0}: {ratio}");
    }
}

#[test]
fn reference_point_at_850_nm() {
    let a = max_transmit_power(850.0, 10e-6, &SafetyStandardParams::default()).unwrap();
    assert_relative_eq!(a.ael, 7.781_523e-4, max_relative = 1e-6);
    assert_relative_eq!(a.pupil_coupling, 0.964_801_1, max_relative = 1e-6);
    assert!((a.max_transmit_power / 0.81e-3 - 1.0).abs() <= 0.02);
}

#[test]
fn short_exposures_are_rejected() {
    let params = SafetyStandardParams::default().with_exposure(10.0);
    assert!(matches!(
        max_transmit_power(850.0, 10e-6, &params),
        Err(Error::UnsupportedRegime(_))
    ));
}
