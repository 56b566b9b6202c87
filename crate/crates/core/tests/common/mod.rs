//! Independent oracles shared by the integration tests and the acceptance suite.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Composite Gauss–Legendre rule over `[a, b]` split into `panels` equal pieces.
pub fn composite_rule(a: f64, b: f64, panels: usize, nodes: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * nodes.len());
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for &(x, wt) in nodes {
            out.push((mid + 0.5 * h * x, 0.5 * h * wt));
        }
    }
    out
}

/// Normalised Gaussian irradiance `2/(πw²) exp(-2r²/w²)`.
pub fn unit_irradiance(x: f64, y: f64, w: f64) -> f64 {
    2.0 / (std::f64::consts::PI * w * w) * (-2.0 * (x * x + y * y) / (w * w)).exp()
}

/// Fraction of a beam of radius `w` falling on a square of half side `h` centred at
/// `(ox, oy)`, by brute-force 2-D tensor Gauss–Legendre.
pub fn square_fraction_2d(w: f64, h: f64, ox: f64, oy: f64) -> f64 {
    let gl = gauss_legendre(24);
    let xs = composite_rule(ox - h, ox + h, 40, &gl);
    let ys = composite_rule(oy - h, oy + h, 40, &gl);
    let mut total = 0.0;
    for &(y, wy) in &ys {
        let mut row = 0.0;
        for &(x, wx) in &xs {
            row += wx * unit_irradiance(x, y, w);
        }
        total += wy * row;
    }
    total
}

/// `∫₀^R I(r) 2πr dr` for a unit-power beam, by composite Gauss–Legendre.
pub fn radial_power(w: f64, r_max: f64) -> f64 {
    let gl = gauss_legendre(20);
    composite_rule(0.0, r_max, 200, &gl)
        .into_iter()
        .map(|(r, wt)| wt * unit_irradiance(r, 0.0, w) * 2.0 * std::f64::consts::PI * r)
        .sum()
}

/// Monte-Carlo estimate of the fraction of a beam of radius `w` landing inside a disc
/// of radius `a` offset by `d`. Returns `(estimate, standard error)`.
pub fn mc_disc_fraction(w: f64, a: f64, d: f64, samples: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = 0.5 * w;
    let mut hits = 0usize;
    for _ in 0..samples {
        let x: f64 = StandardNormal.sample(&mut rng);
        let y: f64 = StandardNormal.sample(&mut rng);
        let (dx, dy) = (sigma * x - d, sigma * y);
        if dx * dx + dy * dy <= a * a {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    (p, (p * (1.0 - p) / samples as f64).sqrt())
}

/// One randomly drawn off-axis coupling case.
#[derive(Debug, Clone, Copy)]
pub struct DiscCase {
    pub wavelength: f64,
    pub waist: f64,
    pub z: f64,
    pub radius: f64,
    pub offset: f64,
}

/// Ten reproducible cases with coupled fractions well away from 0 and 1.
pub fn disc_cases(seed: u64) -> Vec<DiscCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..10)
        .map(|_| {
            let wavelength = rng.random_range(700e-9..1600e-9);
            let waist = rng.random_range(5e-6..100e-6);
            let z = rng.random_range(0.1..3.0);
            let zr = std::f64::consts::PI * waist * waist / wavelength;
            let w = waist * (1.0 + (z / zr).powi(2)).sqrt();
            DiscCase {
                wavelength,
                waist,
                z,
                radius: rng.random_range(0.3..1.5) * w,
                offset: rng.random_range(0.0..1.5) * w,
            }
        })
        .collect()
}
