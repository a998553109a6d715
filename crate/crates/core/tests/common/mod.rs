//! Independent reference implementations used to check the library.
//!
//! Everything here is planar, written directly from the definitions, and
//! shares no code with the crate under test.

#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, TAU};

use metrics_lab::geometry::Point;
use metrics_lab::Complex64;

pub const SCAN_POINTS: usize = 1_000_000;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pt(z: Complex64) -> Point {
    Point::new(vec![z.re, z.im]).unwrap()
}

/// Minimum of `cost` over `n` equally spaced points of the unit circle, with
/// the minimizing angle.
pub fn circle_scan_min(n: usize, cost: impl Fn(Complex64) -> f64) -> (f64, f64) {
    (0..n)
        .map(|k| {
            let theta = TAU * k as f64 / n as f64;
            (cost(Complex64::from_polar(1.0, theta)), theta)
        })
        .fold((f64::INFINITY, 0.0), |best, cur| if cur.0 < best.0 { cur } else { best })
}

/// Triangular ratio metric of the unit disk by dense boundary scan.
pub fn s_disk_scan(x: Complex64, y: Complex64, n: usize) -> f64 {
    if x == y {
        return 0.0;
    }
    let (m, _) = circle_scan_min(n, |z| (x - z).norm() + (z - y).norm());
    (x - y).norm() / m
}

/// Barrlund metric of the unit disk by dense boundary scan.
pub fn barrlund_disk_scan(x: Complex64, y: Complex64, p: f64, n: usize) -> f64 {
    if x == y {
        return 0.0;
    }
    let (m, _) = circle_scan_min(n, |z| ((x - z).norm().powf(p) + (z - y).norm().powf(p)).powf(1.0 / p));
    (x - y).norm() / m
}

/// Hyperbolic distance of the unit disk, inverse hyperbolic cosine form.
pub fn rho_disk(x: Complex64, y: Complex64) -> f64 {
    let d2 = (x - y).norm_sqr();
    (1.0 + 2.0 * d2 / ((1.0 - x.norm_sqr()) * (1.0 - y.norm_sqr()))).acosh()
}

/// `th(ρ/2)` of the upper half-space from `cosh ρ = 1 + δ`,
/// `δ = |x−y|²/(2 x_n y_n)`.
pub fn th_half_rho_halfspace(x: &[f64], y: &[f64]) -> f64 {
    let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    let n = x.len() - 1;
    let delta = d2 / (2.0 * x[n] * y[n]);
    (delta / (2.0 + delta)).sqrt()
}

/// `(z − a)/(1 − ā z)`.
pub fn t_a(a: Complex64, z: Complex64) -> Complex64 {
    (z - a) / (1.0 - a.conj() * z)
}

/// Hyperbolic midpoint by bisection along the geodesic.
///
/// The geodesic from `x` to `y` is the image under `T_{−x}` of the segment
/// from 0 to `T_x(y)`; the parameter is bisected until both halves have equal
/// hyperbolic length.
pub fn midpoint_bisection(x: Complex64, y: Complex64) -> Complex64 {
    let end = t_a(x, y);
    let along = |s: f64| t_a(-x, end * s);
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let q = along(mid);
        if rho_disk(x, q) < rho_disk(q, y) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    along(0.5 * (lo + hi))
}

/// `𝒦(r) = ∫₀^{π/2} dθ/√(1 − r² sin²θ)` by adaptive Clenshaw-Curtis quadrature.
pub fn elliptic_k_quadrature(r: f64) -> f64 {
    let out = quadrature::clenshaw_curtis::integrate(
        |t: f64| 1.0 / (1.0 - r * r * t.sin().powi(2)).sqrt(),
        0.0,
        FRAC_PI_2,
        1e-15,
    );
    out.integral
}

/// `μ(r) = (π/2) 𝒦(√(1−r²))/𝒦(r)` from the quadrature.
pub fn mu_quadrature(r: f64) -> f64 {
    FRAC_PI_2 * elliptic_k_quadrature((1.0 - r * r).sqrt()) / elliptic_k_quadrature(r)
}

/// `w` on the sector `0 < arg z < θ` from the definition, with nearest
/// boundary points found by a dense scan of both rays.
pub fn sector_w_scan(theta: f64, x: Complex64, y: Complex64, n: usize) -> f64 {
    let feet = |z: Complex64| -> Vec<Complex64> {
        let reach = 2.0 * z.norm();
        let rays = [c(1.0, 0.0), Complex64::from_polar(1.0, theta)];
        let mut cands: Vec<(f64, Complex64)> = Vec::new();
        for dir in rays {
            let (d, t) = (0..=n)
                .map(|k| {
                    let t = reach * k as f64 / n as f64;
                    ((z - dir * t).norm(), t)
                })
                .fold((f64::INFINITY, 0.0), |b, cur| if cur.0 < b.0 { cur } else { b });
            cands.push((d, dir * t));
        }
        let best = cands.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        cands.into_iter().filter(|p| p.0 <= best + 1e-6).map(|p| p.1).collect()
    };
    let gap = |a: Complex64, b: Complex64| {
        feet(a).into_iter().map(|f| (b - (2.0 * f - a)).norm()).fold(f64::INFINITY, f64::min)
    };
    (x - y).norm() / gap(y, x).min(gap(x, y))
}

/// Extreme values of `|T_a(z)|` on `|z| = r` by dense scan.
pub fn image_radii_scan(a: Complex64, r: f64, n: usize) -> (f64, f64) {
    (0..n).fold((f64::INFINITY, 0.0f64), |(lo, hi), k| {
        let z = Complex64::from_polar(r, TAU * k as f64 / n as f64);
        let m = t_a(a, z).norm();
        (lo.min(m), hi.max(m))
    })
}
