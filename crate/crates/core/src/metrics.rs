//! The hyperbolic metric and the intrinsic metrics `j`, `j*`, `s`, `p`, `w`,
//! `t` and `b_p` on the unit ball, the upper half-space and sectors.
//!
//! Closed forms are used wherever they exist: everything on `H^n` except the
//! Barrlund metric with `p ≠ 2`, everything on `B^n` except `s` and `b_p`
//! with `p ≠ 2`. The remaining cases are reduced to the plane (through the
//! origin for the ball, perpendicular to the boundary for the half-space)
//! and evaluated with [`boundary_cost_infimum`](crate::geometry::boundary_cost_infimum).

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{
    ahlfors_unchecked, arg_positive, boundary_distance_unchecked, boundary_infimum_planar,
    one_minus_sq, sector_nearest, Domain, Point,
};

/// Selects one of the metrics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricKind {
    /// The hyperbolic metric `ρ`.
    Rho,
    /// The distance ratio metric.
    J,
    /// `j* = th(j/2)`.
    JStar,
    /// The triangular ratio metric.
    S,
    /// The point pair function.
    P,
    /// The `w`-quasi-metric (convex domains only).
    W,
    /// The `t`-metric.
    T,
    /// The Barrlund metric `b_{G,p}`, `p ≥ 1`.
    Barrlund(f64),
}

impl MetricKind {
    pub fn barrlund(p: f64) -> Result<Self> {
        let k = MetricKind::Barrlund(p);
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            MetricKind::Barrlund(p) if !(p >= 1.0 && p.is_finite()) => Err(
                Error::InvalidParameter(format!("Barrlund exponent must be finite and ≥ 1, got {p}")),
            ),
            _ => Ok(()),
        }
    }

    pub fn is_barrlund2(&self) -> bool {
        matches!(*self, MetricKind::Barrlund(p) if p == 2.0)
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MetricKind::Rho => write!(f, "rho"),
            MetricKind::J => write!(f, "j"),
            MetricKind::JStar => write!(f, "jstar"),
            MetricKind::S => write!(f, "s"),
            MetricKind::P => write!(f, "p"),
            MetricKind::W => write!(f, "w"),
            MetricKind::T => write!(f, "t"),
            MetricKind::Barrlund(p) => write!(f, "barrlund:{p}"),
        }
    }
}

/// Parses `rho`, `j`, `jstar`, `s`, `p`, `w`, `t`, `barrlund` (p = 2) or
/// `barrlund:<p>`.
impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if let Some(p) = s.strip_prefix("barrlund:") {
            let p = p
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad Barrlund exponent {p:?}")))?;
            return MetricKind::barrlund(p);
        }
        Ok(match s.as_str() {
            "rho" => MetricKind::Rho,
            "j" => MetricKind::J,
            "jstar" | "j*" => MetricKind::JStar,
            "s" => MetricKind::S,
            "p" => MetricKind::P,
            "w" => MetricKind::W,
            "t" => MetricKind::T,
            "barrlund" | "b" => MetricKind::Barrlund(2.0),
            _ => return Err(Error::InvalidParameter(format!("unknown metric {s:?}"))),
        })
    }
}

fn require_pair(domain: &Domain, x: &Point, y: &Point) -> Result<()> {
    domain.require(x)?;
    domain.require(y)
}

/// `z^{π/θ}` with the argument taken in `(0, θ)`; maps `S_θ` onto `H^2`.
fn sector_to_half_plane(theta: f64, x: &Point) -> Complex64 {
    let z = Complex64::new(x.coords()[0], x.coords()[1]);
    let k = PI / theta;
    Complex64::from_polar(z.norm().powf(k), k * arg_positive(z))
}

/// `|x − y|` and the product `P` with `th(ρ/2) = |x−y|/√(|x−y|² + P)`:
/// `P = (1−|x|²)(1−|y|²)` on the ball and `4 x_n y_n` on the half-space.
fn hyperbolic_parts(domain: &Domain, x: &Point, y: &Point) -> (f64, f64) {
    match *domain {
        Domain::UnitBall { .. } => (
            x.distance(y),
            one_minus_sq(x.norm()) * one_minus_sq(y.norm()),
        ),
        Domain::HalfSpace { .. } => (x.distance(y), 4.0 * x.last() * y.last()),
        Domain::Sector { theta } => {
            let u = sector_to_half_plane(theta, x);
            let v = sector_to_half_plane(theta, y);
            ((u - v).norm(), 4.0 * u.im * v.im)
        }
    }
}

/// The hyperbolic metric.
///
/// Evaluated as `2 arsinh(|x−y|/√P)` with `P` as in the `th(ρ/2)` closed
/// forms; this is the `th` form `2 artanh(|x−y|/√(|x−y|²+P))` written without
/// cancellation near the boundary. Sectors go through `z ↦ z^{π/θ}`.
pub fn rho(domain: &Domain, x: &Point, y: &Point) -> Result<f64> {
    require_pair(domain, x, y)?;
    if x == y {
        return Ok(0.0);
    }
    let (d, p) = hyperbolic_parts(domain, x, y);
    Ok(2.0 * (d / p.sqrt()).asinh())
}

/// `th(ρ_G(x,y)/2)`, computed directly.
pub fn tanh_half_rho(domain: &Domain, x: &Point, y: &Point) -> Result<f64> {
    require_pair(domain, x, y)?;
    Ok(tanh_half_rho_unchecked(domain, x, y))
}

pub(crate) fn tanh_half_rho_unchecked(domain: &Domain, x: &Point, y: &Point) -> f64 {
    if x == y {
        return 0.0;
    }
    if let Domain::UnitBall { .. } = domain {
        return x.distance(y) / ahlfors_unchecked(x, y);
    }
    let (d, p) = hyperbolic_parts(domain, x, y);
    d / (d * d + p).sqrt()
}

/// The defining formulas `ch ρ_H = 1 + |x−y|²/(2 d_x d_y)` and
/// `sh²(ρ_B/2) = |x−y|²/((1−|x|²)(1−|y|²))`, sectors via the power map.
/// Kept as an independent route for cross-checks; [`rho`] is more accurate
/// for nearby points.
pub fn rho_classical(domain: &Domain, x: &Point, y: &Point) -> Result<f64> {
    require_pair(domain, x, y)?;
    let half_plane = |d: f64, a: f64, b: f64| (1.0 + d * d / (2.0 * a * b)).acosh();
    Ok(match *domain {
        Domain::HalfSpace { .. } => half_plane(x.distance(y), x.last(), y.last()),
        Domain::UnitBall { .. } => {
            let sh2 = x.distance(y).powi(2) / ((1.0 - x.norm_sq()) * (1.0 - y.norm_sq()));
            2.0 * sh2.sqrt().asinh()
        }
        Domain::Sector { theta } => {
            let u = sector_to_half_plane(theta, x);
            let v = sector_to_half_plane(theta, y);
            half_plane((u - v).norm(), u.im, v.im)
        }
    })
}

fn min_boundary_distance(domain: &Domain, x: &Point, y: &Point) -> (f64, f64) {
    (
        boundary_distance_unchecked(domain, x),
        boundary_distance_unchecked(domain, y),
    )
}

/// The distance ratio metric `j_G = log(1 + |x−y|/min{d_G(x), d_G(y)})`.
pub fn j_metric(domain: &Domain, x: &Point, y: &Point) -> Result<f64> {
    require_pair(domain, x, y)?;
    let (dx, dy) = min_boundary_distance(domain, x, y);
    Ok((x.distance(y) / dx.min(dy)).ln_1p())
}

/// `j*_G = |x−y| / (|x−y| + 2 min{d_G(x), d_G(y)})`.
pub fn jstar_metric(domain: &Domain, x: &Point, y: &Point) -> Result<f64> {
    require_pair(domain, x, y)?;
    let (dx, dy) = min_boundary_distance(domain, x, y);
    let d = x.distance(y);
    Ok(d / (d + 2.0 * dx.min(dy)))
}

/// `t_G = |x−y| / (|x−y| + d_G(x) + d_G(y))`.
pub fn t_metric(domain: &Domain, x: &Point, y: &Point) -> Result<f64> {
    require_pair(domain, x, y)?;
    let (dx, dy) = min_boundary_distance(domain, x, y);
    let d = x.distance(y);
    Ok(d / (d + dx + dy))
}

/// Dispatch over `j`, `j*` and `t`.
pub fn j_family(kind: MetricKind, domain: &Domain, x: &Point, y: &Point) -> Result<f64> {
    match kind {
        MetricKind::J => j_metric(domain, x, y),
        MetricKind::JStar => jstar_metric(domain, x, y),
        MetricKind::T => t_metric(domain, x, y),
        other => Err(Error::UnsupportedCombination(format!(
            "{other} is not one of j, jstar, t"
        ))),
    }
}

/// Isometric identification of the 2-plane that determines the metrics of
/// `x, y` with `C`: the plane through `x`, `y` and the origin for the ball,
/// the vertical plane through `x` and `y` for the half-space.
pub(crate) fn planar_pair(domain: &Domain, x: &Point, y: &Point) -> (Domain, Complex64, Complex64) {
    if domain.dim() == 2 {
        return (
            *domain,
            Complex64::new(x.coords()[0], x.coords()[1]),
            Complex64::new(y.coords()[0], y.coords()[1]),
        );
    }
    match *domain {
        Domain::UnitBall { .. } => {
            let (rx, ry) = (x.norm(), y.norm());
            // Orient the plane along the longer vector.
            let (a, b, swapped) = if rx >= ry { (x, y, false) } else { (y, x, true) };
            let ra = rx.max(ry);
            if ra == 0.0 {
                let o = Complex64::new(0.0, 0.0);
                return (Domain::UnitBall { dim: 2 }, o, o);
            }
            let along = a.dot(b) / ra;
            let perp: f64 = a
                .coords()
                .iter()
                .zip(b.coords())
                .map(|(ai, bi)| {
                    let c = bi - along * ai / ra;
                    c * c
                })
                .sum::<f64>()
                .sqrt();
            let za = Complex64::new(ra, 0.0);
            let zb = Complex64::new(along, perp);
            let (zx, zy) = if swapped { (zb, za) } else { (za, zb) };
            (Domain::UnitBall { dim: 2 }, zx, zy)
        }
        Domain::HalfSpace { .. } => {
            let n = x.dim();
            let h: f64 = x.coords()[..n - 1]
                .iter()
                .zip(&y.coords()[..n - 1])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            (
                Domain::HalfSpace { dim: 2 },
                Complex64::new(0.0, x.last()),
                Complex64::new(h, y.last()),
            )
        }
        Domain::Sector { .. } => unreachable!("sectors are planar"),
    }
}

/// `inf_{z ∈ ∂G} cost(|x−z|, |z−y|)` over the boundary of the reduced plane.
fn broken_path_infimum<C>(domain: &Domain, x: &Point, y: &Point, combine: C) -> Result<f64>
where
    C: Fn(f64, f64) -> f64,
{
    let (plane, zx, zy) = planar_pair(domain, x, y);
    let (value, _) =
        boundary_infimum_planar(&plane, &|z: Complex64| combine((zx - z).norm(), (z - zy).norm()))?;
    Ok(value)
}

/// The triangular ratio metric `s_G = |x−y| / inf_{z∈∂G}(|x−z| + |z−y|)`.
///
/// Closed form `th(ρ/2)` on the half-space; boundary search otherwise.
pub fn s_metric(domain: &Domain, x: &Point, y: &Point) -> Result<f64> {
    require_pair(domain, x, y)?;
    if x == y {
        return Ok(0.0);
    }
    if let Domain::HalfSpace { .. } = domain {
        return Ok(tanh_half_rho_unchecked(domain, x, y));
    }
    let inf = broken_path_infimum(domain, x, y, |a, b| a + b)?;
    Ok((x.distance(y) / inf).min(1.0))
}

/// The point pair function `p_G = |x−y| / √(|x−y|² + 4 d_G(x) d_G(y))`.
pub fn p_function(domain: &Domain, x: &Point, y: &Point) -> Result<f64> {
    require_pair(domain, x, y)?;
    let (dx, dy) = min_boundary_distance(domain, x, y);
    let d = x.distance(y);
    if d == 0.0 {
        return Ok(0.0);
    }
    Ok(d / (d * d + 4.0 * dx * dy).sqrt())
}

/// The `w`-quasi-metric on a convex domain.
///
/// On the ball the pair is ordered so that `|y| ≤ |x|` and
/// `w = |x−y| / |y − x̃|` with `x̃ = x(2−|x|)/|x|`; on the half-space
/// `w = th(ρ/2)`; on sectors the definition is evaluated with the reflections
/// `2z − x` through every nearest boundary point `z`.
pub fn w_quasi(domain: &Domain, x: &Point, y: &Point) -> Result<f64> {
    require_pair(domain, x, y)?;
    domain.require_convex()?;
    if x == y {
        return Ok(0.0);
    }
    let d = x.distance(y);
    match *domain {
        Domain::UnitBall { .. } => {
            let (far, near) = if x.norm() >= y.norm() { (x, y) } else { (y, x) };
            let r = far.norm();
            let reflected = far.scaled((2.0 - r) / r);
            Ok(d / near.distance(&reflected))
        }
        Domain::HalfSpace { .. } => Ok(tanh_half_rho_unchecked(domain, x, y)),
        Domain::Sector { theta } => {
            let zx = Complex64::new(x.coords()[0], x.coords()[1]);
            let zy = Complex64::new(y.coords()[0], y.coords()[1]);
            let reflections_gap = |a: Complex64, b: Complex64| {
                sector_nearest(theta, a)
                    .into_iter()
                    .map(|foot| (b - (2.0 * foot - a)).norm())
                    .fold(f64::INFINITY, f64::min)
            };
            let denom = reflections_gap(zy, zx).min(reflections_gap(zx, zy));
            Ok(d / denom)
        }
    }
}

fn p_norm(a: f64, b: f64, p: f64) -> f64 {
    if p == 1.0 {
        return a + b;
    }
    if p == 2.0 {
        return a.hypot(b);
    }
    let m = a.max(b);
    if m == 0.0 {
        return 0.0;
    }
    m * (1.0 + (a.min(b) / m).powf(p)).powf(1.0 / p)
}

/// The Barrlund metric `b_{G,p} = sup_{z∈∂G} |x−y| / (|x−z|^p + |z−y|^p)^{1/p}`.
///
/// Closed forms for `p = 2` on the ball and the half-space:
/// `|x−y| / √(2 + |x|² + |y|² − 2|x+y|)` and
/// `√2|x−y| / √(|x−y|² + (x_n + y_n)²)`.
pub fn barrlund(domain: &Domain, p: f64, x: &Point, y: &Point) -> Result<f64> {
    MetricKind::Barrlund(p).validate()?;
    require_pair(domain, x, y)?;
    if x == y {
        return Ok(0.0);
    }
    let d = x.distance(y);
    match *domain {
        Domain::UnitBall { .. } if p == 2.0 => {
            let sum = Point::from_coords_unchecked(
                x.coords().iter().zip(y.coords()).map(|(a, b)| a + b).collect(),
            );
            Ok(d / (2.0 + x.norm_sq() + y.norm_sq() - 2.0 * sum.norm()).sqrt())
        }
        Domain::HalfSpace { .. } if p == 2.0 => {
            Ok(SQRT_2 * d / (d * d + (x.last() + y.last()).powi(2)).sqrt())
        }
        _ => barrlund_by_search(domain, p, x, y),
    }
}

/// [`barrlund`] evaluated by the boundary search regardless of closed forms.
pub fn barrlund_by_search(domain: &Domain, p: f64, x: &Point, y: &Point) -> Result<f64> {
    MetricKind::Barrlund(p).validate()?;
    require_pair(domain, x, y)?;
    if x == y {
        return Ok(0.0);
    }
    let inf = broken_path_infimum(domain, x, y, |a, b| p_norm(a, b, p))?;
    Ok(x.distance(y) / inf)
}

/// Uniform dispatch over all metrics.
pub fn evaluate(kind: MetricKind, domain: &Domain, x: &Point, y: &Point) -> Result<f64> {
    kind.validate()?;
    match kind {
        MetricKind::Rho => rho(domain, x, y),
        MetricKind::J | MetricKind::JStar | MetricKind::T => j_family(kind, domain, x, y),
        MetricKind::S => s_metric(domain, x, y),
        MetricKind::P => p_function(domain, x, y),
        MetricKind::W => w_quasi(domain, x, y),
        MetricKind::Barrlund(p) => barrlund(domain, p, x, y),
    }
}
