//! Seeded experiments: uniform sampling on the disk, the comparison of the two
//! `s`-distortion estimates for `T_a`, supremum probes for `d(T_a x, T_a y)/d(x, y)`,
//! inequality fuzzing and the `l`/`u` surface grid.
//!
//! Every trial owns a ChaCha8 stream keyed by `(seed, trial index)`, so results
//! do not depend on scheduling or thread count; reductions are integer sums or
//! maxima.

mod fuzz;
pub mod output;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{
    conf_quotient_bounds, conformal_distortion_bounds, midpoint_branch, Interval, MidpointBranch,
    RadiusWindow,
};
use crate::error::{Error, Result};
use crate::geometry::{Domain, Point};
use crate::metrics::{self, MetricKind};
use crate::moebius::{hyperbolic_midpoint, make_ta};

pub use fuzz::{inequality_fuzz, FuzzConfig, FuzzReport, Violation};

/// The random stream of one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// A uniform point of the open unit disk, by rejection from `[-1, 1]²`.
pub fn sample_unit_disk<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    loop {
        let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if z.norm_sqr() < 1.0 {
            return z;
        }
    }
}

/// Radius from `U(0,1)` and argument from `U(0,2π)`. Not uniform on the disk;
/// kept for comparison with [`sample_unit_disk`].
pub fn sample_unit_disk_polar<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let r: f64 = rng.random_range(0.0..1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(r, phi)
}

/// A uniform point of the open unit ball `B^n`, by rejection from the cube.
pub fn sample_unit_ball<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Point {
    loop {
        let c: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        if c.iter().map(|v| v * v).sum::<f64>() < 1.0 {
            return Point::from_coords_unchecked(c);
        }
    }
}

/// Counts of the comparison between the annulus-based bounds and the
/// midpoint-based bounds for `s(T_a x, T_a y)/s(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComparisonSummary {
    pub total: u64,
    pub both_better: u64,
    pub lower_better: u64,
    pub upper_better: u64,
    pub seed: u64,
}

impl ComparisonSummary {
    pub fn fraction(&self) -> f64 {
        self.both_better as f64 / self.total as f64
    }
}

/// Both estimates for one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundPair {
    /// Annulus constants with the literal image radii.
    pub annulus: Interval,
    /// `(l(|q|,t), u(|q|,t))`.
    pub midpoint: Interval,
    pub q_abs: f64,
    pub t: f64,
}

/// `th(ρ(x,y)/4)` on the ball.
pub fn quarter_tanh(x: &Point, y: &Point) -> Result<f64> {
    let ball = Domain::unit_ball(x.dim())?;
    Ok((metrics::rho(&ball, x, y)? / 4.0).tanh())
}

/// The two bound intervals for `a` and the pair `x, y`, ordered so that
/// `|x| ≤ |y|`.
pub fn bound_pair(a: Complex64, x: Complex64, y: Complex64) -> Result<BoundPair> {
    let (x, y) = if x.norm() <= y.norm() { (x, y) } else { (y, x) };
    if x == y {
        return Err(Error::InvalidParameter("x and y must be distinct".into()));
    }
    let (px, py) = (Point::from_complex(x), Point::from_complex(y));
    let window = RadiusWindow::new(x.norm(), y.norm())?;
    let annulus = conformal_distortion_bounds(MetricKind::S, window, window.image_window_literal(a)?)?;
    let q_abs = hyperbolic_midpoint(&px, &py)?.norm();
    let t = quarter_tanh(&px, &py)?;
    Ok(BoundPair { annulus, midpoint: conf_quotient_bounds(q_abs, t)?, q_abs, t })
}

fn comparison_trial(seed: u64, trial: u64) -> (bool, bool) {
    let mut rng = trial_rng(seed, trial);
    loop {
        let a = sample_unit_disk(&mut rng);
        let x = sample_unit_disk(&mut rng);
        let y = sample_unit_disk(&mut rng);
        if x == y {
            continue;
        }
        if let Ok(p) = bound_pair(a, x, y) {
            return (p.midpoint.lower > p.annulus.lower, p.midpoint.upper < p.annulus.upper);
        }
    }
}

/// Draws `a, x, y` uniformly on the disk `trials` times and counts how often
/// the midpoint bounds beat the annulus bounds, per endpoint and on both.
pub fn compare_bound_methods(trials: u64, seed: u64) -> Result<ComparisonSummary> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be ≥ 1".into()));
    }
    let (both, lower, upper) = (0..trials)
        .into_par_iter()
        .map(|i| {
            let (l, u) = comparison_trial(seed, i);
            ((l && u) as u64, l as u64, u as u64)
        })
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    Ok(ComparisonSummary {
        total: trials,
        both_better: both,
        lower_better: lower,
        upper_better: upper,
        seed,
    })
}

const SUP_KINDS: [MetricKind; 6] = [
    MetricKind::T,
    MetricKind::JStar,
    MetricKind::W,
    MetricKind::S,
    MetricKind::P,
    MetricKind::Barrlund(2.0),
];

/// Probe radii for the pair `±k e^{i arg a}`.
pub const PROBE_RADII: [f64; 3] = [1e-2, 1e-3, 1e-4];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupEstimate {
    /// `max(probe, random)`.
    pub estimate: f64,
    pub probe: f64,
    pub random: f64,
}

fn distortion_ratio(kind: MetricKind, a: Complex64, x: Complex64, y: Complex64) -> Result<f64> {
    let ball = Domain::unit_ball(2)?;
    let m = make_ta(a)?;
    let (fx, fy) = (m.apply(x)?, m.apply(y)?);
    let before = metrics::evaluate(kind, &ball, &Point::from_complex(x), &Point::from_complex(y))?;
    let after = metrics::evaluate(kind, &ball, &Point::from_complex(fx), &Point::from_complex(fy))?;
    Ok(after / before)
}

/// Estimates `sup d(T_a x, T_a y)/d(x, y)` over the disk from `trials` uniform
/// pairs and the directed pairs `±k e^{i arg a}`, `k` in [`PROBE_RADII`].
pub fn sup_distortion_estimate(
    a: Complex64,
    kind: MetricKind,
    trials: u64,
    seed: u64,
) -> Result<SupEstimate> {
    if !SUP_KINDS.contains(&kind) {
        return Err(Error::InvalidParameter(format!(
            "{kind} is not one of t, jstar, w, s, p, barrlund:2"
        )));
    }
    make_ta(a)?;
    let dir = if a.norm() > 0.0 { a / a.norm() } else { Complex64::new(1.0, 0.0) };
    let probe = PROBE_RADII
        .iter()
        .map(|&k| distortion_ratio(kind, a, dir * k, -dir * k))
        .try_fold(f64::NEG_INFINITY, |m, r| r.map(|r| m.max(r)))?;
    let random = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            loop {
                let (x, y) = (sample_unit_disk(&mut rng), sample_unit_disk(&mut rng));
                if x != y {
                    return distortion_ratio(kind, a, x, y);
                }
            }
        })
        .try_reduce(|| f64::NEG_INFINITY, |p, q| Ok(p.max(q)))?;
    Ok(SupEstimate { estimate: probe.max(random), probe, random })
}

/// One row of the `l`/`u` surface table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridRow {
    pub q: f64,
    pub t: f64,
    pub l: f64,
    pub u: f64,
    pub branch: MidpointBranch,
}

/// `l` and `u` on `q_i = i/(res−1)`, `t_j = j/res` (`j = 1..res−1`), followed
/// by the seam rows `q = t_j²`.
pub fn grid_lu(resolution: usize) -> Result<Vec<GridRow>> {
    if resolution < 2 {
        return Err(Error::InvalidParameter(format!("resolution must be ≥ 2, got {resolution}")));
    }
    let ts: Vec<f64> = (1..resolution).map(|j| j as f64 / resolution as f64).collect();
    let row = |q: f64, t: f64| -> Result<GridRow> {
        let i = conf_quotient_bounds(q, t)?;
        Ok(GridRow { q, t, l: i.lower, u: i.upper, branch: midpoint_branch(q, t) })
    };
    let mut rows = Vec::with_capacity(resolution * ts.len() + ts.len());
    for i in 0..resolution {
        let q = i as f64 / (resolution - 1) as f64;
        for &t in &ts {
            rows.push(row(q, t)?);
        }
    }
    for &t in &ts {
        rows.push(row(t * t, t)?);
    }
    Ok(rows)
}

/// The worked comparison for `a = 0.7`, `x = 0.1+0.3i`, `y = 0.3+0.5i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundComparison {
    pub a: [f64; 2],
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub quotient: f64,
    pub annulus_bounds: Interval,
    pub midpoint_bounds: Interval,
    pub q_abs: f64,
    pub t: f64,
}

/// Evaluates the measured quotient `s(T_a x, T_a y)/s(x, y)` and both bound
/// intervals for the given configuration.
pub fn bound_comparison(a: Complex64, x: Complex64, y: Complex64) -> Result<BoundComparison> {
    let ball = Domain::unit_ball(2)?;
    let m = make_ta(a)?;
    let s = |u: Complex64, v: Complex64| {
        metrics::s_metric(&ball, &Point::from_complex(u), &Point::from_complex(v))
    };
    let quotient = s(m.apply(x)?, m.apply(y)?)? / s(x, y)?;
    let pair = bound_pair(a, x, y)?;
    Ok(BoundComparison {
        a: [a.re, a.im],
        x: [x.re, x.im],
        y: [y.re, y.im],
        quotient,
        annulus_bounds: pair.annulus,
        midpoint_bounds: pair.midpoint,
        q_abs: pair.q_abs,
        t: pair.t,
    })
}

/// [`bound_comparison`] at `a = 0.7`, `x = 0.1+0.3i`, `y = 0.3+0.5i`.
pub fn example_boundcomp() -> Result<BoundComparison> {
    bound_comparison(
        Complex64::new(0.7, 0.0),
        Complex64::new(0.1, 0.3),
        Complex64::new(0.3, 0.5),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_sampler_stays_inside() {
        let mut rng = trial_rng(1, 0);
        for _ in 0..10_000 {
            assert!(sample_unit_disk(&mut rng).norm() < 1.0);
            assert!(sample_unit_ball(&mut rng, 3).norm() < 1.0);
        }
    }

    #[test]
    fn streams_are_keyed_by_trial() {
        let a = sample_unit_disk(&mut trial_rng(7, 3));
        let b = sample_unit_disk(&mut trial_rng(7, 3));
        let c = sample_unit_disk(&mut trial_rng(7, 4));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn example_configuration_counts_as_both_better() {
        let p = bound_pair(
            Complex64::new(0.7, 0.0),
            Complex64::new(0.3, 0.5),
            Complex64::new(0.1, 0.3),
        )
        .unwrap();
        assert!(p.midpoint.lower > p.annulus.lower && p.midpoint.upper < p.annulus.upper);
    }

    #[test]
    fn small_comparison_is_deterministic() {
        let a = compare_bound_methods(200, 5).unwrap();
        assert_eq!(a, compare_bound_methods(200, 5).unwrap());
        assert!(a.both_better <= a.lower_better.min(a.upper_better));
        assert!(compare_bound_methods(0, 5).is_err());
    }

    #[test]
    fn identity_has_unit_distortion() {
        let e = sup_distortion_estimate(Complex64::new(0.0, 0.0), MetricKind::P, 50, 1).unwrap();
        assert!((e.estimate - 1.0).abs() < 1e-9);
        assert!(sup_distortion_estimate(Complex64::new(0.5, 0.0), MetricKind::J, 5, 1).is_err());
    }

    #[test]
    fn grid_rows() {
        let rows = grid_lu(3).unwrap();
        assert_eq!(rows.len(), 3 * 2 + 2);
        let r = rows.iter().find(|r| r.q == 0.0 && r.t == 1.0 / 3.0).unwrap();
        assert_eq!(r.l, 1.0);
        assert!(grid_lu(1).is_err());
        let rows = grid_lu(2).unwrap();
        let at = |q: f64| rows.iter().find(|r| r.q == q && r.t == 0.5).unwrap();
        assert_eq!((at(0.0).l, at(0.0).u), (1.0, 1.6));
        assert_eq!((at(1.0).l, at(1.0).u), (0.625, 1.0));
    }
}
