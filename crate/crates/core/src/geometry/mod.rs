//! Points, the three supported domains, boundary distances and the boundary
//! infimum routine behind `s_G` and `b_{G,p}`.

mod search;

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) use search::brent_minimize;

/// A point of `R^n`, `n ≥ 2`, with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidPoint(format!(
                "need at least 2 coordinates, got {}",
                coords.len()
            )));
        }
        if let Some(c) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidPoint(format!("non-finite coordinate {c}")));
        }
        Ok(Point(coords))
    }

    /// The planar point `(re z, im z)`.
    ///
    /// # Panics
    /// If `z` has a non-finite component.
    pub fn from_complex(z: Complex64) -> Self {
        assert!(z.re.is_finite() && z.im.is_finite(), "non-finite point {z}");
        Point(vec![z.re, z.im])
    }

    pub fn origin(dim: usize) -> Result<Self> {
        Point::new(vec![0.0; dim])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn last(&self) -> f64 {
        self.0[self.0.len() - 1]
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        if self.0.len() == 2 {
            self.0[0].hypot(self.0[1])
        } else {
            self.norm_sq().sqrt()
        }
    }

    /// Euclidean distance `|self - other|`.
    pub fn distance(&self, other: &Point) -> f64 {
        if self.0.len() == 2 && other.0.len() == 2 {
            return (self.0[0] - other.0[0]).hypot(self.0[1] - other.0[1]);
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn dot(&self, other: &Point) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// The point as a complex number; only planar points qualify.
    pub fn to_complex(&self) -> Result<Complex64> {
        match self.0.as_slice() {
            [re, im] => Ok(Complex64::new(*re, *im)),
            _ => Err(Error::UnsupportedDimension { n: self.dim() }),
        }
    }

    pub(crate) fn from_coords_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!(coords.len() >= 2 && coords.iter().all(|c| c.is_finite()));
        Point(coords)
    }

    pub(crate) fn scaled(&self, k: f64) -> Point {
        Point(self.0.iter().map(|c| c * k).collect())
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Point::new(coords)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Parses `"x1,x2,...,xn"` or, for planar points, a complex literal such as
/// `"0.1+0.3i"`.
impl FromStr for Point {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains(',') {
            let coords = s
                .split(',')
                .map(|c| {
                    c.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::InvalidPoint(format!("{c:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            Point::new(coords)
        } else {
            let z = Complex64::from_str(s)
                .map_err(|e| Error::InvalidPoint(format!("{s:?}: {e}")))?;
            Point::new(vec![z.re, z.im])
        }
    }
}

/// The domains on which the metrics are evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// `{x ∈ R^n : x_n > 0}`.
    HalfSpace { dim: usize },
    /// `{x ∈ R^n : |x| < 1}`.
    UnitBall { dim: usize },
    /// The planar sector `{z : 0 < arg z < θ}`, `0 < θ < 2π`.
    Sector { theta: f64 },
}

impl Domain {
    pub fn half_space(dim: usize) -> Result<Self> {
        let d = Domain::HalfSpace { dim };
        d.validate()?;
        Ok(d)
    }

    pub fn unit_ball(dim: usize) -> Result<Self> {
        let d = Domain::UnitBall { dim };
        d.validate()?;
        Ok(d)
    }

    pub fn sector(theta: f64) -> Result<Self> {
        let d = Domain::Sector { theta };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Domain::HalfSpace { dim } | Domain::UnitBall { dim } if dim < 2 => Err(
                Error::InvalidDomain(format!("dimension must be at least 2, got {dim}")),
            ),
            Domain::Sector { theta } if !(theta > 0.0 && theta < TAU) => Err(
                Error::InvalidDomain(format!("sector angle must lie in (0, 2π), got {theta}")),
            ),
            _ => Ok(()),
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            Domain::HalfSpace { dim } | Domain::UnitBall { dim } => dim,
            Domain::Sector { .. } => 2,
        }
    }

    pub fn is_convex(&self) -> bool {
        match *self {
            Domain::Sector { theta } => theta <= PI,
            _ => true,
        }
    }

    pub fn contains(&self, x: &Point) -> bool {
        if x.dim() != self.dim() {
            return false;
        }
        match *self {
            Domain::HalfSpace { .. } => x.last() > 0.0,
            Domain::UnitBall { .. } => x.norm() < 1.0,
            Domain::Sector { theta } => {
                let z = Complex64::new(x.coords()[0], x.coords()[1]);
                if z == Complex64::new(0.0, 0.0) {
                    return false;
                }
                let a = arg_positive(z);
                a > 0.0 && a < theta
            }
        }
    }

    /// Fails unless the domain is valid and contains `x`.
    pub fn require(&self, x: &Point) -> Result<()> {
        self.validate()?;
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.dim(),
            });
        }
        if !self.contains(x) {
            return Err(Error::DomainMembership(format!("{x} is not in {self}")));
        }
        Ok(())
    }

    pub(crate) fn require_convex(&self) -> Result<()> {
        match *self {
            Domain::Sector { theta } if theta > PI => Err(Error::NonConvexDomain { theta }),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Domain::HalfSpace { dim } => write!(f, "half{dim}"),
            Domain::UnitBall { dim } => write!(f, "ball{dim}"),
            Domain::Sector { theta } => write!(f, "sector:{theta}"),
        }
    }
}

/// Parses `ball<n>`, `half<n>` or `sector:<theta-radians>`.
impl FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidDomain(format!("cannot parse {s:?}"));
        if let Some(theta) = s.strip_prefix("sector:") {
            return Domain::sector(theta.trim().parse().map_err(|_| bad())?);
        }
        if let Some(n) = s.strip_prefix("ball") {
            return Domain::unit_ball(n.parse().map_err(|_| bad())?);
        }
        if let Some(n) = s.strip_prefix("half") {
            return Domain::half_space(n.parse().map_err(|_| bad())?);
        }
        Err(bad())
    }
}

/// Argument of `z` in `[0, 2π)`.
pub(crate) fn arg_positive(z: Complex64) -> f64 {
    let a = z.im.atan2(z.re);
    if a < 0.0 {
        a + TAU
    } else {
        a
    }
}

/// `1 - r²` evaluated as `(1 - r)(1 + r)`.
pub(crate) fn one_minus_sq(r: f64) -> f64 {
    (1.0 - r) * (1.0 + r)
}

/// Feet of the perpendiculars from `z` to the two rays bounding the sector,
/// clamped to the vertex, with their distances.
fn sector_feet(theta: f64, z: Complex64) -> [(Complex64, f64); 2] {
    let rays = [Complex64::new(1.0, 0.0), Complex64::from_polar(1.0, theta)];
    rays.map(|dir| {
        let proj = z.re * dir.re + z.im * dir.im;
        let foot = if proj > 0.0 { dir * proj } else { Complex64::new(0.0, 0.0) };
        (foot, (z - foot).norm())
    })
}

/// Euclidean distance `d_G(x)` from `x` to the boundary of `domain`.
pub fn boundary_distance(domain: &Domain, x: &Point) -> Result<f64> {
    domain.require(x)?;
    Ok(boundary_distance_unchecked(domain, x))
}

pub(crate) fn boundary_distance_unchecked(domain: &Domain, x: &Point) -> f64 {
    match *domain {
        Domain::HalfSpace { .. } => x.last(),
        Domain::UnitBall { .. } => 1.0 - x.norm(),
        Domain::Sector { theta } => {
            let z = Complex64::new(x.coords()[0], x.coords()[1]);
            let [(_, d0), (_, d1)] = sector_feet(theta, z);
            d0.min(d1)
        }
    }
}

/// All boundary points at distance `d_G(x)` from `x`.
///
/// Needs a convex domain. The center of the ball is rejected since every
/// point of the sphere is nearest to it.
pub fn nearest_boundary_points(domain: &Domain, x: &Point) -> Result<Vec<Point>> {
    domain.require(x)?;
    domain.require_convex()?;
    match *domain {
        Domain::HalfSpace { .. } => {
            let mut c = x.coords().to_vec();
            *c.last_mut().unwrap() = 0.0;
            Ok(vec![Point::from_coords_unchecked(c)])
        }
        Domain::UnitBall { .. } => {
            let r = x.norm();
            if r == 0.0 {
                return Err(Error::InvalidParameter(
                    "the center of the ball has no unique nearest boundary point".into(),
                ));
            }
            Ok(vec![x.scaled(1.0 / r)])
        }
        Domain::Sector { theta } => Ok(sector_nearest(theta, x.to_complex()?)
            .into_iter()
            .map(Point::from_complex)
            .collect()),
    }
}

pub(crate) fn sector_nearest(theta: f64, z: Complex64) -> Vec<Complex64> {
    let feet = sector_feet(theta, z);
    let d = feet[0].1.min(feet[1].1);
    let mut out: Vec<Complex64> = Vec::with_capacity(2);
    for (foot, dist) in feet {
        if dist - d <= 1e-12 * d && !out.contains(&foot) {
            out.push(foot);
        }
    }
    out
}

/// The Ahlfors bracket `A[x,y] = √(|x−y|² + (1−|x|²)(1−|y|²))` for points of
/// the unit ball.
pub fn ahlfors_bracket(x: &Point, y: &Point) -> Result<f64> {
    let ball = Domain::unit_ball(x.dim())?;
    ball.require(x)?;
    ball.require(y)?;
    Ok(ahlfors_unchecked(x, y))
}

pub(crate) fn ahlfors_unchecked(x: &Point, y: &Point) -> f64 {
    let d = x.distance(y);
    (d * d + one_minus_sq(x.norm()) * one_minus_sq(y.norm())).sqrt()
}

/// Number of boundary samples in the coarse scan of [`boundary_cost_infimum`].
pub const COARSE_SAMPLES: usize = 4096;
/// Local minima of the coarse scan that are refined.
const REFINED_BRACKETS: usize = 3;
/// Iteration budget of each refinement.
pub const REFINE_MAX_ITER: usize = 500;
/// Absolute parameter tolerance; the final bracket is about four times this.
const PARAM_TOL: f64 = 2.5e-15;

/// Value and location of a boundary infimum.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryMinimum {
    pub value: f64,
    pub argmin: Point,
}

#[derive(Debug, Clone, Copy)]
enum Arc {
    /// The unit circle, `z = e^{iu}`, `u ∈ [0, 2π)`.
    Circle,
    /// The real axis, `z = tan u`, `u ∈ (−π/2, π/2)`.
    Line,
    /// A sector edge `z = d tan u`, `u ∈ [0, π/2)`; `u = 0` is the vertex.
    Ray(Complex64),
}

struct SampleTable {
    params: Vec<f64>,
    values: Vec<Complex64>,
}

fn circle_table() -> &'static SampleTable {
    static TABLE: OnceLock<SampleTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let params: Vec<f64> = (0..COARSE_SAMPLES)
            .map(|k| TAU * k as f64 / COARSE_SAMPLES as f64)
            .collect();
        let values = params.iter().map(|&u| Complex64::cis(u)).collect();
        SampleTable { params, values }
    })
}

fn line_table() -> &'static SampleTable {
    static TABLE: OnceLock<SampleTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let params: Vec<f64> = (0..COARSE_SAMPLES)
            .map(|k| -FRAC_PI_2 + PI * (k as f64 + 0.5) / COARSE_SAMPLES as f64)
            .collect();
        let values = params.iter().map(|&u| Complex64::new(u.tan(), 0.0)).collect();
        SampleTable { params, values }
    })
}

/// Each edge of a sector gets half of the sample budget.
fn ray_table() -> &'static SampleTable {
    static TABLE: OnceLock<SampleTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = COARSE_SAMPLES / 2;
        let params: Vec<f64> = (0..n).map(|k| FRAC_PI_2 * k as f64 / n as f64).collect();
        let values = params.iter().map(|&u| Complex64::new(u.tan(), 0.0)).collect();
        SampleTable { params, values }
    })
}

impl Arc {
    fn point(self, u: f64) -> Complex64 {
        match self {
            Arc::Circle => Complex64::cis(u),
            Arc::Line => Complex64::new(u.tan(), 0.0),
            Arc::Ray(dir) => dir * u.tan(),
        }
    }

    fn table(self) -> &'static SampleTable {
        match self {
            Arc::Circle => circle_table(),
            Arc::Line => line_table(),
            Arc::Ray(_) => ray_table(),
        }
    }

    fn range(self) -> (f64, f64) {
        match self {
            Arc::Circle => (0.0, TAU),
            Arc::Line => (-FRAC_PI_2, FRAC_PI_2),
            Arc::Ray(_) => (0.0, FRAC_PI_2),
        }
    }

    /// Minimum of `cost` along the arc: coarse scan, then Brent refinement of
    /// the best local minima of the scan.
    fn minimize<F: Fn(Complex64) -> f64>(self, cost: &F) -> Result<(f64, Complex64)> {
        let table = self.table();
        let n = table.params.len();
        let sample = |z: Complex64| match self {
            Arc::Ray(dir) => dir * z.re,
            _ => z,
        };
        let values: Vec<f64> = table.values.iter().map(|&z| cost(sample(z))).collect();
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::ConvergenceFailure(
                "cost is NaN on the boundary".into(),
            ));
        }
        let periodic = matches!(self, Arc::Circle);

        let mut candidates: Vec<usize> = (0..n)
            .filter(|&i| {
                let left = if i > 0 {
                    values[i - 1]
                } else if periodic {
                    values[n - 1]
                } else {
                    f64::INFINITY
                };
                let right = if i + 1 < n {
                    values[i + 1]
                } else if periodic {
                    values[0]
                } else {
                    f64::INFINITY
                };
                values[i] <= left && values[i] <= right
            })
            .collect();
        candidates.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        candidates.truncate(REFINED_BRACKETS);

        let best_sample = candidates[0];
        let mut best = (values[best_sample], sample(table.values[best_sample]));
        let (lo_end, hi_end) = self.range();
        let step = table.params.get(1).map_or(0.0, |p| p - table.params[0]);
        for &i in &candidates {
            let lo = if i > 0 {
                table.params[i - 1]
            } else if periodic {
                table.params[0] - step
            } else {
                lo_end
            };
            let hi = if i + 1 < n {
                table.params[i + 1]
            } else if periodic {
                table.params[n - 1] + step
            } else {
                hi_end
            };
            let refined = brent_minimize(|u| cost(self.point(u)), lo, hi, PARAM_TOL, REFINE_MAX_ITER)
                .ok_or_else(|| {
                    Error::ConvergenceFailure(format!(
                        "refinement on [{lo}, {hi}] did not converge within {REFINE_MAX_ITER} iterations"
                    ))
                })?;
            if refined.value < best.0 {
                best = (refined.value, self.point(refined.x));
            }
        }
        Ok(best)
    }
}

/// Infimum of `cost` over the boundary of a planar domain.
///
/// A coarse scan of [`COARSE_SAMPLES`] boundary samples is followed by
/// Brent refinement around the three lowest local minima of the scan. The
/// half-plane boundary is compactified by `u ↦ tan u`; sector edges likewise,
/// with the vertex as the first sample of each edge.
pub fn boundary_cost_infimum<F>(domain: &Domain, cost: F) -> Result<BoundaryMinimum>
where
    F: Fn(Complex64) -> f64,
{
    domain.validate()?;
    if domain.dim() != 2 {
        return Err(Error::UnsupportedDimension { n: domain.dim() });
    }
    let (value, z) = boundary_infimum_planar(domain, &cost)?;
    Ok(BoundaryMinimum {
        value,
        argmin: Point::from_complex(z),
    })
}

pub(crate) fn boundary_infimum_planar<F>(domain: &Domain, cost: &F) -> Result<(f64, Complex64)>
where
    F: Fn(Complex64) -> f64,
{
    match *domain {
        Domain::UnitBall { .. } => Arc::Circle.minimize(cost),
        Domain::HalfSpace { .. } => Arc::Line.minimize(cost),
        Domain::Sector { theta } => {
            let vertex = Complex64::new(0.0, 0.0);
            let mut best = (cost(vertex), vertex);
            for dir in [Complex64::new(1.0, 0.0), Complex64::from_polar(1.0, theta)] {
                let m = Arc::Ray(dir).minimize(cost)?;
                if m.0 < best.0 {
                    best = m;
                }
            }
            Ok(best)
        }
    }
}
