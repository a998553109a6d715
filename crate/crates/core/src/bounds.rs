//! Sharp constants comparing the intrinsic metrics with `th(ρ/2)` on annuli of
//! the unit ball, and the distortion intervals they imply for conformal
//! self-maps.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Domain;
use crate::metrics::MetricKind;

/// A closed interval `[lower, upper]` with `0 ≤ lower ≤ upper < ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite() && lower >= 0.0 && lower <= upper) {
            return Err(Error::InvalidParameter(format!(
                "invalid interval [{lower}, {upper}]"
            )));
        }
        Ok(Interval { lower, upper })
    }

    pub fn contains(&self, value: f64, slack: f64) -> bool {
        value >= self.lower - slack && value <= self.upper + slack
    }

    /// Whether `self ⊆ other` up to `slack`.
    pub fn is_within(&self, other: &Interval, slack: f64) -> bool {
        self.lower >= other.lower - slack && self.upper <= other.upper + slack
    }
}

/// Bounds `r_l ≤ |x| ≤ r_u` on the absolute values of the points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadiusWindow {
    pub r_l: f64,
    pub r_u: f64,
}

impl RadiusWindow {
    pub fn new(r_l: f64, r_u: f64) -> Result<Self> {
        if !(r_l >= 0.0 && r_l <= r_u && r_u < 1.0) {
            return Err(Error::InvalidWindow(format!(
                "need 0 ≤ r_l ≤ r_u < 1, got [{r_l}, {r_u}]"
            )));
        }
        Ok(RadiusWindow { r_l, r_u })
    }

    /// The smallest window containing both radii.
    pub fn spanning(a: f64, b: f64) -> Result<Self> {
        RadiusWindow::new(a.min(b), a.max(b))
    }

    /// `R_l = ||a| − r_l|/(1 − |a|r_l)`, `R_u = (|a| + r_u)/(1 + |a|r_u)`.
    ///
    /// `R_u` is exact. `R_l` is the smallest `|T_a|` on the inner circle only;
    /// points with `|z| > r_l` may map closer to the origin, so this is not a
    /// valid image window in general. See [`RadiusWindow::image_window`].
    pub fn image_window_literal(&self, a: Complex64) -> Result<RadiusWindow> {
        let m = a.norm();
        if !(m < 1.0) {
            return Err(Error::DomainMembership(format!("|a| must be < 1, got a = {a}")));
        }
        RadiusWindow::new(
            (m - self.r_l).abs() / (1.0 - m * self.r_l),
            (m + self.r_u) / (1.0 + m * self.r_u),
        )
    }

    /// The exact range of `|T_a(z)|` over `r_l ≤ |z| ≤ r_u`.
    pub fn image_window(&self, a: Complex64) -> Result<RadiusWindow> {
        let m = a.norm();
        if !(m < 1.0) {
            return Err(Error::DomainMembership(format!("|a| must be < 1, got a = {a}")));
        }
        let lower = if m < self.r_l {
            (self.r_l - m) / (1.0 - m * self.r_l)
        } else if m > self.r_u {
            (m - self.r_u) / (1.0 - m * self.r_u)
        } else {
            0.0
        };
        RadiusWindow::new(lower, (m + self.r_u) / (1.0 + m * self.r_u))
    }
}

/// Which lower constant to use for `j*`, `s` and `w` in
/// [`conformal_distortion_bounds_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConstantForm {
    /// `(1+r)/√(5+2r+r²)` throughout.
    #[default]
    Displayed,
    /// `(1+r²)/2` below [`jstar_threshold`], `(1+r)/√(5+2r+r²)` above.
    Refined,
}

/// The real root in `(0, 1)` of `1 − 3r − r² − r³`, from the cubic formula.
pub fn jstar_threshold() -> f64 {
    let c = (48.0 * 33f64.sqrt() + 208.0).cbrt();
    c / 6.0 - 16.0 / (3.0 * c) - 1.0 / 3.0
}

fn jstar_lower_displayed(r: f64) -> f64 {
    (1.0 + r) / (5.0 + 2.0 * r + r * r).sqrt()
}

fn jstar_lower_sharp(r: f64) -> f64 {
    if r < jstar_threshold() {
        (1.0 + r * r) / 2.0
    } else {
        jstar_lower_displayed(r)
    }
}

fn p_upper(r: f64) -> f64 {
    (1.0 + r * r) / (2.0 * (1.0 - 2.0 * r + 2.0 * r * r).sqrt())
}

fn lower_constant(kind: MetricKind, r_l: f64, form: ConstantForm) -> Result<f64> {
    Ok(match kind {
        MetricKind::T => 0.5,
        MetricKind::P => (1.0 + r_l) / 2.0,
        MetricKind::JStar | MetricKind::S | MetricKind::W => match form {
            ConstantForm::Displayed => jstar_lower_displayed(r_l),
            ConstantForm::Refined => jstar_lower_sharp(r_l),
        },
        k if k.is_barrlund2() => ((1.0 + r_l * r_l) / 2.0).sqrt(),
        k => return Err(unsupported(k)),
    })
}

fn upper_constant(kind: MetricKind, r_u: f64) -> Result<f64> {
    Ok(match kind {
        MetricKind::T | MetricKind::JStar => (1.0 + r_u) / 2.0,
        MetricKind::P | MetricKind::S | MetricKind::W => p_upper(r_u),
        k if k.is_barrlund2() => (1.0 + r_u) / SQRT_2,
        k => return Err(unsupported(k)),
    })
}

fn unsupported(kind: MetricKind) -> Error {
    Error::UnsupportedCombination(format!(
        "{kind} is not one of t, jstar, p, barrlund:2, s, w"
    ))
}

/// `(c_low, c_up)` with `c_low·th(ρ/2) ≤ d(x,y) ≤ c_up·th(ρ/2)` whenever
/// `|x|, |y| ∈ [r_l, r_u]`.
///
/// The `j*` lower constant switches form at [`jstar_threshold`]; the `s` and
/// `w` constants are the `j*` lower and `p` upper ones.
pub fn ratio_bounds_vs_half_rho(kind: MetricKind, window: RadiusWindow) -> Result<Interval> {
    let lower = match kind {
        MetricKind::JStar => jstar_lower_sharp(window.r_l),
        _ => lower_constant(kind, window.r_l, ConstantForm::Displayed)?,
    };
    Interval::new(lower, upper_constant(kind, window.r_u)?)
}

/// `th(ρ/2) ≤ b_{H^n,2} ≤ √2 th(ρ/2)`.
pub fn halfspace_barrlund_bounds() -> Interval {
    Interval { lower: 1.0, upper: SQRT_2 }
}

/// `th(ρ/2)/√2 ≤ b_{B^n,2} ≤ √2 th(ρ/2)`, the window `[0, 1)` limit.
pub fn ball_barrlund_bounds() -> Interval {
    Interval { lower: 1.0 / SQRT_2, upper: SQRT_2 }
}

/// Bounds for `d(f(x), f(y))/d(x, y)` under any conformal `f: G → G'`,
/// `G, G' ∈ {H^n, B^n}`.
pub fn fixed_conformal_constants(kind: MetricKind, from: &Domain, to: &Domain) -> Result<Interval> {
    from.validate()?;
    to.validate()?;
    if from.dim() != to.dim() {
        return Err(Error::DimensionMismatch { expected: from.dim(), found: to.dim() });
    }
    let half = |d: &Domain| match d {
        Domain::HalfSpace { .. } => Ok(true),
        Domain::UnitBall { .. } => Ok(false),
        Domain::Sector { .. } => Err(Error::UnsupportedCombination(
            "conformal constants are defined between half-spaces and balls".into(),
        )),
    };
    let (h_from, h_to) = (half(from)?, half(to)?);
    let (lower, upper) = match kind {
        MetricKind::T => (0.5, 2.0),
        MetricKind::JStar if h_from && h_to => (0.5, SQRT_2),
        MetricKind::JStar => (0.5, 2.0),
        MetricKind::W | MetricKind::S | MetricKind::P => match (h_from, h_to) {
            (true, false) => (0.5, 1.0),
            (false, true) => (1.0, 2.0),
            _ => (0.5, 2.0),
        },
        k if k.is_barrlund2() => match (h_from, h_to) {
            (true, true) => (1.0 / SQRT_2, SQRT_2),
            (true, false) => (0.5, SQRT_2),
            (false, true) => (1.0 / SQRT_2, 2.0),
            (false, false) => (0.5, 2.0),
        },
        k => return Err(unsupported(k)),
    };
    Interval::new(lower, upper)
}

/// [`conformal_distortion_bounds_with`] using the displayed constants.
pub fn conformal_distortion_bounds(
    kind: MetricKind,
    window: RadiusWindow,
    image: RadiusWindow,
) -> Result<Interval> {
    conformal_distortion_bounds_with(kind, window, image, ConstantForm::Displayed)
}

/// Bounds for `d(f(x), f(y))/d(x, y)` when `f` is a conformal self-map of
/// `B^n`, `|x|, |y| ∈ [r_l, r_u]` and `|f(x)|, |f(y)| ∈ [R_l, R_u]`:
/// `(c_low(R_l)/c_up(r_u), c_up(R_u)/c_low(r_l))`.
pub fn conformal_distortion_bounds_with(
    kind: MetricKind,
    window: RadiusWindow,
    image: RadiusWindow,
    form: ConstantForm,
) -> Result<Interval> {
    let lower = lower_constant(kind, image.r_l, form)? / upper_constant(kind, window.r_u)?;
    let upper = upper_constant(kind, image.r_u)? / lower_constant(kind, window.r_l, form)?;
    // Degenerate windows can invert by an ulp or two.
    let lower = if lower > upper && lower - upper <= 8.0 * f64::EPSILON * upper { upper } else { lower };
    Interval::new(lower, upper)
}

/// Which closed form applies at `(|q|, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MidpointBranch {
    /// `|q| < t²`.
    Inner,
    /// `|q| ≥ t²`.
    Outer,
}

pub fn midpoint_branch(q_abs: f64, t: f64) -> MidpointBranch {
    if q_abs < t * t {
        MidpointBranch::Inner
    } else {
        MidpointBranch::Outer
    }
}

fn check_qt(q_abs: f64, t: f64, q_max_inclusive: bool) -> Result<()> {
    let q_ok = q_abs >= 0.0 && if q_max_inclusive { q_abs <= 1.0 } else { q_abs < 1.0 };
    if !q_ok || !(t > 0.0 && t < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "need |q| in [0, 1{} and t in (0, 1), got |q| = {q_abs}, t = {t}",
            if q_max_inclusive { "]" } else { ")" }
        )));
    }
    Ok(())
}

/// Bounds on `s_{B^n}(x, y)` from the midpoint `q` and `t = th(ρ(x,y)/4)`.
pub fn s_midpoint_bounds(q_abs: f64, t: f64) -> Result<Interval> {
    check_qt(q_abs, t, false)?;
    let (q, t2) = (q_abs, t * t);
    let upper = (1.0 + q) * t / (1.0 + q * t2);
    let lower = match midpoint_branch(q, t) {
        MidpointBranch::Inner => ((q * q + t2) / (1.0 + q * q * t2)).sqrt(),
        MidpointBranch::Outer => t * (1.0 + q) / ((1.0 + t2) * (1.0 + q * q * t2)).sqrt(),
    };
    Interval::new(lower, upper)
}

/// `(l(|q|,t), u(|q|,t))` bounding `s(f(x),f(y))/s(x,y)` for conformal
/// self-maps of `B^n`; `|q| = 1` is accepted as the limiting row.
pub fn conf_quotient_bounds(q_abs: f64, t: f64) -> Result<Interval> {
    check_qt(q_abs, t, true)?;
    let (q, t2) = (q_abs, t * t);
    let l = (1.0 + q * t2) / (1.0 + q);
    let u = match midpoint_branch(q, t) {
        MidpointBranch::Inner => {
            2.0 * t / (1.0 + t2) * ((1.0 + q * q * t2) / (q * q + t2)).sqrt()
        }
        MidpointBranch::Outer => 2.0 / (1.0 + q) * ((1.0 + q * q * t2) / (1.0 + t2)).sqrt(),
    };
    Interval::new(l, u)
}

/// `((1+t²)/2, 2/(1+t²))`, the midpoint-free form.
pub fn conf_quotient_bounds_midpointfree(t: f64) -> Result<Interval> {
    check_qt(0.0, t, false)?;
    let t2 = t * t;
    Interval::new((1.0 + t2) / 2.0, 2.0 / (1.0 + t2))
}

/// `(1, β sin(α/2)/(α sin(β/2)))` bounding `w_{S_β}(f(x),f(y))/w_{S_α}(x,y)`
/// for `f(z) = z^{β/α}`, `0 < α ≤ β ≤ π`.
pub fn sector_w_power_bounds(alpha: f64, beta: f64) -> Result<Interval> {
    if !(alpha > 0.0 && alpha <= beta && beta <= std::f64::consts::PI) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < α ≤ β ≤ π, got α = {alpha}, β = {beta}"
        )));
    }
    Interval::new(1.0, beta * (alpha / 2.0).sin() / (alpha * (beta / 2.0).sin()))
}
