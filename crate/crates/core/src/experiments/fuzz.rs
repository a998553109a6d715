use std::f64::consts::{FRAC_PI_2, SQRT_2};

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{quarter_tanh, sample_unit_ball, sample_unit_disk, trial_rng};
use crate::bounds::{
    ball_barrlund_bounds, conf_quotient_bounds, conformal_distortion_bounds, halfspace_barrlund_bounds,
    s_midpoint_bounds, ratio_bounds_vs_half_rho, sector_w_power_bounds, Interval, RadiusWindow,
};
use crate::error::Result;
use crate::geometry::{Domain, Point};
use crate::metrics::{self, MetricKind};
use crate::moebius::{ball_automorphism, hyperbolic_midpoint, sector_power_map, MoebiusMap};

const RECORDED_VIOLATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuzzConfig {
    pub trials: u64,
    pub seed: u64,
    pub slack: f64,
    /// Shrinks every checked bound by this relative amount; a positive value
    /// must produce violations.
    pub tighten: f64,
    /// Evaluate `b_3` by boundary search on every `n`-th trial (0 disables).
    pub barrlund3_every: u64,
}

impl FuzzConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        FuzzConfig { trials, seed, slack: 1e-9, tighten: 0.0, barrlund3_every: 16 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub check: &'static str,
    pub trial: u64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub value: f64,
    pub bound: f64,
    /// How far `value` lies beyond `bound`.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzReport {
    pub domain: String,
    pub trials: u64,
    pub checks: u64,
    pub violation_count: u64,
    /// The first violations in trial order.
    pub violations: Vec<Violation>,
    /// `max |s − th(ρ/2)|`, `|w − th(ρ/2)|`, `|p − th(ρ/2)|` on half-spaces.
    pub max_halfspace_gap: Option<f64>,
}

struct Checker<'a> {
    config: &'a FuzzConfig,
    trial: u64,
    x: &'a Point,
    y: &'a Point,
    checks: u64,
    violations: Vec<Violation>,
    gap: f64,
}

impl Checker<'_> {
    /// `value ≤ bound`.
    fn le(&mut self, check: &'static str, value: f64, bound: f64) {
        self.checks += 1;
        let bound = bound * (1.0 - self.config.tighten);
        if !(value <= bound + self.config.slack) {
            self.record(check, value, bound, value - bound);
        }
    }

    /// `bound ≤ value`.
    fn ge(&mut self, check: &'static str, value: f64, bound: f64) {
        self.checks += 1;
        let bound = bound * (1.0 + self.config.tighten);
        if !(value >= bound - self.config.slack) {
            self.record(check, value, bound, bound - value);
        }
    }

    fn within(&mut self, check: &'static str, value: f64, interval: Interval) {
        self.ge(check, value, interval.lower);
        self.le(check, value, interval.upper);
    }

    fn equal(&mut self, check: &'static str, value: f64, target: f64, tol: f64) {
        self.checks += 1;
        self.gap = self.gap.max((value - target).abs());
        if !((value - target).abs() <= tol) {
            self.record(check, value, target, (value - target).abs());
        }
    }

    fn record(&mut self, check: &'static str, value: f64, bound: f64, margin: f64) {
        self.violations.push(Violation {
            check,
            trial: self.trial,
            x: self.x.coords().to_vec(),
            y: self.y.coords().to_vec(),
            value,
            bound,
            margin,
        });
    }
}

fn sample_pair(domain: &Domain, rng: &mut ChaCha8Rng) -> (Point, Point) {
    let one = |rng: &mut ChaCha8Rng| match *domain {
        Domain::UnitBall { dim } => sample_unit_ball(rng, dim),
        Domain::HalfSpace { dim } => {
            let mut c: Vec<f64> = (0..dim - 1).map(|_| rng.random_range(-2.0..2.0)).collect();
            c.push(10f64.powf(rng.random_range(-3.0..1.0)));
            Point::from_coords_unchecked(c)
        }
        Domain::Sector { theta } => {
            let r = 10f64.powf(rng.random_range(-2.0..0.5));
            let phi = rng.random_range(0.0..1.0) * theta;
            if phi <= 0.0 {
                return Point::from_complex(Complex64::from_polar(r, 0.5 * theta));
            }
            Point::from_complex(Complex64::from_polar(r, phi))
        }
    };
    loop {
        let (x, y) = (one(rng), one(rng));
        if x != y && domain.contains(&x) && domain.contains(&y) {
            return (x, y);
        }
    }
}

struct Values {
    jstar: f64,
    t: f64,
    s: f64,
    p: f64,
    w: f64,
    b2: f64,
}

fn values(domain: &Domain, x: &Point, y: &Point) -> Result<Values> {
    Ok(Values {
        jstar: metrics::jstar_metric(domain, x, y)?,
        t: metrics::t_metric(domain, x, y)?,
        s: metrics::s_metric(domain, x, y)?,
        p: metrics::p_function(domain, x, y)?,
        w: metrics::w_quasi(domain, x, y)?,
        b2: metrics::barrlund(domain, 2.0, x, y)?,
    })
}

fn general_checks(c: &mut Checker, v: &Values, b3: Option<f64>) {
    c.ge("s-ge-jstar", v.s, v.jstar);
    c.le("s-le-2jstar", v.s, 2.0 * v.jstar);
    c.ge("p-ge-jstar", v.p, v.jstar);
    c.le("p-le-sqrt2-jstar", v.p, SQRT_2 * v.jstar);
    c.ge("s-ge-p-over-sqrt2", v.s, v.p / SQRT_2);
    c.le("s-le-sqrt2-p", v.s, SQRT_2 * v.p);
    c.ge("t-ge-half-max-s-p", v.t, 0.5 * v.s.max(v.p));
    c.le("t-le-jstar", v.t, v.jstar);
    c.ge("b2-ge-s", v.b2, v.s);
    c.le("b2-le-sqrt2-s", v.b2, SQRT_2 * v.s);
    if let Some(b3) = b3 {
        c.ge("b3-ge-s", b3, v.s);
        c.le("b3-le-cbrt4-s", b3, 2f64.powf(1.0 - 1.0 / 3.0) * v.s);
    }
    c.ge("convex-w-ge-jstar", v.w, v.jstar);
    c.ge("convex-s-ge-w", v.s, v.w);
    c.ge("convex-p-ge-s", v.p, v.s);
    c.le("convex-p-le-sqrt2-jstar", v.p, SQRT_2 * v.jstar);
}

fn hyperbolic_checks(c: &mut Checker, v: &Values, th2: f64, th4: f64, half_space: bool) {
    c.ge("jstar-ge-th-quarter-rho", v.jstar, th4);
    if half_space {
        c.equal("half-w-eq-th", v.w, th2, 1e-12);
        c.equal("half-s-eq-th", v.s, th2, 1e-12);
        c.equal("half-p-eq-th", v.p, th2, 1e-12);
    } else {
        c.le("ball-p-le-th", v.p, th2);
    }
    c.ge("t-ge-half-th", v.t, 0.5 * th2);
    c.le("jstar-le-th", v.jstar, th2);
}

/// A random self-map of the ball sending `a` to the origin, followed by a
/// rotation in the planar case.
struct BallMap {
    planar: Option<MoebiusMap>,
    a: Point,
}

impl BallMap {
    fn draw(rng: &mut ChaCha8Rng, n: usize) -> Result<Self> {
        if n == 2 {
            let a = sample_unit_disk(rng);
            let phi = rng.random_range(0.0..std::f64::consts::TAU);
            let m = MoebiusMap::rotation(phi).compose(&MoebiusMap::disk_automorphism(a)?)?;
            Ok(BallMap { planar: Some(m), a: Point::from_complex(a) })
        } else {
            Ok(BallMap { planar: None, a: sample_unit_ball(rng, n) })
        }
    }

    fn apply(&self, x: &Point) -> Result<Point> {
        match &self.planar {
            Some(m) => Ok(Point::from_complex(m.apply(x.to_complex()?)?)),
            None => ball_automorphism(&self.a, x),
        }
    }

    /// `|a|` as a complex number on the real axis; only the modulus matters
    /// for image windows.
    fn a_abs(&self) -> Complex64 {
        Complex64::new(self.a.norm(), 0.0)
    }
}

const WINDOW_KINDS: [(MetricKind, &str, &str); 6] = [
    (MetricKind::T, "t-window", "t-quotient-window"),
    (MetricKind::JStar, "jstar-window", "jstar-quotient-window"),
    (MetricKind::P, "p-window", "p-quotient-window"),
    (MetricKind::Barrlund(2.0), "b2-window", "b2-quotient-window"),
    (MetricKind::S, "s-window", "s-quotient-window"),
    (MetricKind::W, "w-window", "w-quotient-window"),
];

fn pick(v: &Values, kind: MetricKind) -> f64 {
    match kind {
        MetricKind::T => v.t,
        MetricKind::JStar => v.jstar,
        MetricKind::P => v.p,
        MetricKind::S => v.s,
        MetricKind::W => v.w,
        _ => v.b2,
    }
}

fn ball_checks(c: &mut Checker, domain: &Domain, v: &Values, th2: f64, rng: &mut ChaCha8Rng) -> Result<()> {
    let (x, y) = (c.x, c.y);
    let window = RadiusWindow::spanning(x.norm(), y.norm())?;
    for (kind, name, _) in WINDOW_KINDS {
        c.within(name, pick(v, kind) / th2, ratio_bounds_vs_half_rho(kind, window)?);
    }
    c.within("ball-b2-over-th", v.b2 / th2, ball_barrlund_bounds());
    c.ge("ball-b2-ge-s", v.b2, v.s);
    c.ge("ball-b2-ge-scaled-p", v.b2, 4.0 / (10f64.sqrt() + SQRT_2) * v.p);
    c.le("ball-b2-le-sqrt2-s", v.b2, SQRT_2 * v.s);

    let q_abs = hyperbolic_midpoint(x, y)?.norm();
    let t = quarter_tanh(x, y)?;
    c.within("s-midpoint-bounds", v.s, s_midpoint_bounds(q_abs, t)?);

    let h = BallMap::draw(rng, domain.dim())?;
    let (hx, hy) = (h.apply(x)?, h.apply(y)?);
    if !(domain.contains(&hx) && domain.contains(&hy)) || hx == hy {
        return Ok(());
    }
    let hv = values(domain, &hx, &hy)?;
    for (before, after, name) in [
        (v.jstar, hv.jstar, "mobius-jstar"),
        (v.w, hv.w, "mobius-w"),
        (v.s, hv.s, "mobius-s"),
        (v.p, hv.p, "mobius-p"),
    ] {
        c.le(name, after, 2.0 * before / (1.0 + before * before));
    }
    c.within("s-quotient-midpoint", hv.s / v.s, conf_quotient_bounds(q_abs, t)?);
    let image = window.image_window(h.a_abs())?;
    for (kind, _, name) in WINDOW_KINDS {
        let bounds = conformal_distortion_bounds(kind, window, image)?;
        c.within(name, pick(&hv, kind) / pick(v, kind), bounds);
    }
    Ok(())
}

fn sector_checks(c: &mut Checker, theta: f64, v: &Values) -> Result<()> {
    if theta != FRAC_PI_2 {
        return Ok(());
    }
    let target = Domain::sector(std::f64::consts::PI)?;
    let (fx, fy) = (
        Point::from_complex(sector_power_map(theta, std::f64::consts::PI, c.x.to_complex()?)?),
        Point::from_complex(sector_power_map(theta, std::f64::consts::PI, c.y.to_complex()?)?),
    );
    if fx == fy {
        return Ok(());
    }
    let w_image = metrics::w_quasi(&target, &fx, &fy)?;
    c.within("sector-power-w", w_image / v.w, sector_w_power_bounds(theta, std::f64::consts::PI)?);
    Ok(())
}

fn run_trial(domain: &Domain, config: &FuzzConfig, trial: u64) -> Result<(u64, Vec<Violation>, f64)> {
    let mut rng = trial_rng(config.seed, trial);
    let (x, y) = sample_pair(domain, &mut rng);
    let mut c = Checker { config, trial, x: &x, y: &y, checks: 0, violations: Vec::new(), gap: 0.0 };
    let v = values(domain, &x, &y)?;
    let b3 = if config.barrlund3_every > 0 && trial % config.barrlund3_every == 0 {
        Some(metrics::barrlund(domain, 3.0, &x, &y)?)
    } else {
        None
    };
    general_checks(&mut c, &v, b3);
    match *domain {
        Domain::UnitBall { .. } | Domain::HalfSpace { .. } => {
            let th2 = metrics::tanh_half_rho(domain, &x, &y)?;
            let th4 = (metrics::rho(domain, &x, &y)? / 4.0).tanh();
            let half = matches!(domain, Domain::HalfSpace { .. });
            hyperbolic_checks(&mut c, &v, th2, th4, half);
            if half {
                c.within("half-b2-over-th", v.b2 / th2, halfspace_barrlund_bounds());
            } else {
                ball_checks(&mut c, domain, &v, th2, &mut rng)?;
            }
        }
        Domain::Sector { theta } => sector_checks(&mut c, theta, &v)?,
    }
    Ok((c.checks, c.violations, c.gap))
}

/// Samples `trials` pairs in `domain` and checks every applicable inequality
/// between the metrics, against `th(ρ/2)` and under self-maps of the ball.
pub fn inequality_fuzz(domain: &Domain, config: &FuzzConfig) -> Result<FuzzReport> {
    domain.validate()?;
    domain.require_convex()?;
    let results: Vec<(u64, Vec<Violation>, f64)> = (0..config.trials)
        .into_par_iter()
        .map(|i| run_trial(domain, config, i))
        .collect::<Result<_>>()?;
    let mut checks = 0;
    let mut count = 0;
    let mut gap: f64 = 0.0;
    let mut violations = Vec::new();
    for (n, v, g) in results {
        checks += n;
        count += v.len() as u64;
        gap = gap.max(g);
        for item in v {
            if violations.len() < RECORDED_VIOLATIONS {
                violations.push(item);
            }
        }
    }
    Ok(FuzzReport {
        domain: domain.to_string(),
        trials: config.trials,
        checks,
        violation_count: count,
        violations,
        max_halfspace_gap: matches!(domain, Domain::HalfSpace { .. }).then_some(gap),
    })
}
