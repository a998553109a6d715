//! Special functions of plane quasiconformal theory and the Schwarz-lemma
//! type bounds built on them.
//!
//! `𝒦` is evaluated with the arithmetic-geometric mean, `μ` as a ratio of two
//! AGMs, and `μ⁻¹` by a safeguarded regula falsi in `log r` using the bracket
//! `log(1/r) < μ(r) < log(4/r)`. Only the planar distortion function
//! `φ_{K,2}` has a closed route; for `n ≥ 3` the evaluators fall back to the
//! power forms with `λ_n` replaced by the upper end of its known range.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use serde::Serialize;

use crate::bounds::Interval;
use crate::error::{Error, Result};
use crate::geometry::{one_minus_sq, Domain, Point};

const AGM_MAX_STEPS: usize = 64;
const INVERSE_MAX_ITER: usize = 200;

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..AGM_MAX_STEPS {
        if (a - b).abs() <= 1e-15 * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    0.5 * (a + b)
}

/// The complete elliptic integral of the first kind, `𝒦(r) = π/(2 AGM(1, r'))`
/// with `r' = √(1 − r²)`.
pub fn elliptic_k(r: f64) -> Result<f64> {
    if !(r >= 0.0 && r < 1.0) {
        return Err(Error::InvalidParameter(format!("𝒦 needs 0 ≤ r < 1, got {r}")));
    }
    Ok(FRAC_PI_2 / agm(1.0, one_minus_sq(r).sqrt()))
}

fn mu_unchecked(r: f64) -> f64 {
    // (π/2) 𝒦(r')/𝒦(r) = (π/2) AGM(1, r')/AGM(1, r).
    FRAC_PI_2 * agm(1.0, one_minus_sq(r).sqrt()) / agm(1.0, r)
}

/// The modulus of the Grötzsch ring, `μ(r) = (π/2) 𝒦(√(1−r²))/𝒦(r)`.
pub fn mu(r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidParameter(format!("μ needs 0 < r < 1, got {r}")));
    }
    Ok(mu_unchecked(r))
}

/// Solves `μ(e^v) = y` for `y ≥ π/2`.
fn mu_inverse_small(y: f64) -> Result<f64> {
    if y > 700.0 {
        // μ(r) = log(4/r) + O(r²).
        return Ok(4.0 * (-y).exp());
    }
    let f = |v: f64| mu_unchecked(v.exp()) - y;
    let (mut lo, mut hi) = (-y, (4f64.ln() - y).min(-0.5 * LN_2));
    let (mut f_lo, mut f_hi) = (f(lo), f(hi));
    if f_lo <= 0.0 {
        return Ok(lo.exp());
    }
    if f_hi >= 0.0 {
        return Ok(hi.exp());
    }
    let mut side = 0i8;
    for _ in 0..INVERSE_MAX_ITER {
        if hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(1.0) {
            return Ok((0.5 * (lo + hi)).exp());
        }
        // Illinois step, falling back to bisection if it leaves the bracket.
        let mut v = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        if !(v > lo && v < hi) {
            v = 0.5 * (lo + hi);
        }
        let fv = f(v);
        if fv == 0.0 {
            return Ok(v.exp());
        }
        if fv > 0.0 {
            lo = v;
            f_lo = fv;
            if side == 1 {
                f_hi *= 0.5;
            }
            side = 1;
        } else {
            hi = v;
            f_hi = fv;
            if side == -1 {
                f_lo *= 0.5;
            }
            side = -1;
        }
    }
    Err(Error::ConvergenceFailure(format!("μ⁻¹({y}) did not converge")))
}

/// The inverse of [`mu`] on `(0, ∞)`.
///
/// For `y < π/2` the symmetry `μ(r) μ(√(1−r²)) = π²/4` reduces the problem to
/// the complementary modulus.
pub fn mu_inverse(y: f64) -> Result<f64> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::InvalidParameter(format!("μ⁻¹ needs y > 0, got {y}")));
    }
    if y >= FRAC_PI_2 {
        mu_inverse_small(y)
    } else {
        let rc = mu_inverse_small(PI * PI / (4.0 * y))?;
        Ok(one_minus_sq(rc).sqrt())
    }
}

/// The planar Grötzsch capacity `γ₂(s) = 2π/μ(1/s)`, `s > 1`.
pub fn gamma2(s: f64) -> Result<f64> {
    if !(s > 1.0 && s.is_finite()) {
        return Err(Error::InvalidParameter(format!("γ₂ needs s > 1, got {s}")));
    }
    Ok(2.0 * PI / mu_unchecked(1.0 / s))
}

/// The distortion function `φ_{K,2}(r) = μ⁻¹(μ(r)/K)`, with `φ(0) = 0`,
/// `φ(1) = 1` and `φ_{1,2}` the identity.
pub fn phi_k2(k: f64, r: f64) -> Result<f64> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidParameter(format!("φ needs K > 0, got {k}")));
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::InvalidParameter(format!("φ needs 0 ≤ r ≤ 1, got {r}")));
    }
    if r == 0.0 || r == 1.0 || k == 1.0 {
        return Ok(r);
    }
    mu_inverse(mu_unchecked(r) / k)
}

/// `c(K)` and its elementary upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CConstant {
    /// `2 arth(φ_{K,2}(th(1/2)))`.
    pub exact: f64,
    /// `v(K−1) + K`, `v = log(2(1 + √(1 − e⁻²)))`.
    pub upper: f64,
}

/// `log(2(1 + √(1 − e⁻²)))`.
pub fn v_constant() -> f64 {
    (2.0 * (1.0 + (1.0 - (-2f64).exp()).sqrt())).ln()
}

pub fn c_of_k(k: f64) -> Result<CConstant> {
    if !(k >= 1.0 && k.is_finite()) {
        return Err(Error::InvalidParameter(format!("c(K) needs K ≥ 1, got {k}")));
    }
    let exact = if k == 1.0 {
        1.0
    } else {
        2.0 * phi_k2(k, 0.5f64.tanh())?.atanh()
    };
    Ok(CConstant { exact, upper: v_constant() * (k - 1.0) + k })
}

/// The known range of the Grötzsch ring constant: `λ₂ = 4`,
/// `4 ≤ λ_n < 2e^{n−1}` for `n ≥ 3`.
pub fn lambda_range(n: usize) -> Result<Interval> {
    match n {
        0 | 1 => Err(Error::InvalidParameter(format!("λ_n needs n ≥ 2, got {n}"))),
        2 => Interval::new(4.0, 4.0),
        _ => Interval::new(4.0, 2.0 * ((n - 1) as f64).exp()),
    }
}

/// The `λ_n` used by the evaluators: exact for `n = 2`, the upper end of the
/// range otherwise.
pub fn lambda_conservative(n: usize) -> Result<f64> {
    Ok(lambda_range(n)?.upper)
}

/// Dilatation data of a quasiregular map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Dilatation {
    /// `K ≥ 1`.
    pub k: f64,
    /// Inner dilatation, `1 ≤ K_I ≤ K`.
    pub k_inner: f64,
    pub n: usize,
    /// `0 < α ≤ K_I^{1/(1−n)}`.
    pub alpha: f64,
}

impl Dilatation {
    /// `K_I = K` and `α = K^{1/(1−n)}`.
    pub fn new(k: f64, n: usize) -> Result<Self> {
        if !(k >= 1.0 && k.is_finite()) {
            return Err(Error::InvalidParameter(format!("K must be ≥ 1, got {k}")));
        }
        if n < 2 {
            return Err(Error::InvalidParameter(format!("n must be ≥ 2, got {n}")));
        }
        Ok(Dilatation { k, k_inner: k, n, alpha: Self::alpha_max(k, n) })
    }

    fn alpha_max(k_inner: f64, n: usize) -> f64 {
        k_inner.powf(1.0 / (1.0 - n as f64))
    }

    /// Sets `K_I` and resets `α` to `K_I^{1/(1−n)}`.
    pub fn with_inner(mut self, k_inner: f64) -> Result<Self> {
        if !(k_inner >= 1.0 && k_inner <= self.k) {
            return Err(Error::InvalidParameter(format!(
                "need 1 ≤ K_I ≤ K = {}, got {k_inner}",
                self.k
            )));
        }
        self.k_inner = k_inner;
        self.alpha = Self::alpha_max(k_inner, self.n);
        Ok(self)
    }

    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        let max = Self::alpha_max(self.k_inner, self.n);
        if !(alpha > 0.0 && alpha <= max) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < α ≤ K_I^(1/(1-n)) = {max}, got {alpha}"
            )));
        }
        self.alpha = alpha;
        Ok(self)
    }

    fn planar(&self) -> bool {
        self.n == 2
    }
}

/// Upper bounds for the hyperbolic distance of the images under a
/// `K`-quasiregular map between balls or half-spaces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchwarzRhoBounds {
    /// `2 arth(φ_{K,2}(th(ρ/2)))`, planar only.
    pub b1_phi: Option<f64>,
    /// `λ_n^{1−α} th(ρ/2)^α`, a bound for `th(ρ'/2)`.
    pub b1_power: f64,
    /// `K_I(ρ + log 4)`.
    pub b2: f64,
    /// `c(K) max{ρ, ρ^{1/K}}`, planar only.
    pub b3: Option<f64>,
}

pub fn schwarz_rho_bounds(d: &Dilatation, rho_xy: f64) -> Result<SchwarzRhoBounds> {
    if !(rho_xy >= 0.0 && rho_xy.is_finite()) {
        return Err(Error::InvalidParameter(format!("ρ must be ≥ 0, got {rho_xy}")));
    }
    let th = (rho_xy / 2.0).tanh();
    let lambda = lambda_conservative(d.n)?;
    let (b1_phi, b3) = if d.planar() {
        let b1 = if d.k == 1.0 { rho_xy } else { 2.0 * phi_k2(d.k, th)?.atanh() };
        let c = c_of_k(d.k)?.exact;
        (Some(b1), Some(c * rho_xy.max(rho_xy.powf(1.0 / d.k))))
    } else {
        (None, None)
    };
    Ok(SchwarzRhoBounds {
        b1_phi,
        b1_power: lambda.powf(1.0 - d.alpha) * th.powf(d.alpha),
        b2: d.k_inner * (rho_xy + 4f64.ln()),
        b3,
    })
}

/// Bounds on `d(f(x), f(y))` for `d ∈ {j*, w, s, p}` on the ball in terms of
/// `m = d(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricDistortionBounds {
    /// `φ_{K,2}(2m/(1+m²))`, planar only.
    pub phi_bound: Option<f64>,
    /// `λ_n^{1−α} (2m/(1+m²))^α`.
    pub power_bound: f64,
    /// `φ_{2K,2}(m²)`, planar only.
    pub sharp_phi: Option<f64>,
    /// `4^{1−1/(2K)} m^{1/K}`, planar only.
    pub sharp_power: Option<f64>,
}

pub fn metric_distortion_bounds(d: &Dilatation, metric_value: f64) -> Result<MetricDistortionBounds> {
    let m = metric_value;
    if !(0.0..1.0).contains(&m) {
        return Err(Error::InvalidParameter(format!("metric value must lie in [0, 1), got {m}")));
    }
    let z = 2.0 * m / (1.0 + m * m);
    let lambda = lambda_conservative(d.n)?;
    let planar = d.planar();
    Ok(MetricDistortionBounds {
        phi_bound: if planar { Some(phi_k2(d.k, z)?) } else { None },
        power_bound: lambda.powf(1.0 - d.alpha) * z.powf(d.alpha),
        sharp_phi: if planar { Some(phi_k2(2.0 * d.k, m * m)?) } else { None },
        sharp_power: planar.then(|| 4f64.powf(1.0 - 0.5 / d.k) * m.powf(1.0 / d.k)),
    })
}

/// `|x−y|√(|x−y|² + 4(1−|x|)(1−|y|)) / (|x−y|² + 2(1−|x|)(1−|y|))`, which is
/// `2p/(1+p²)` for the point pair function `p` of the ball.
pub fn jstar_argument(x: &Point, y: &Point) -> Result<f64> {
    let ball = Domain::unit_ball(x.dim())?;
    ball.require(x)?;
    ball.require(y)?;
    let d = x.distance(y);
    let e = (1.0 - x.norm()) * (1.0 - y.norm());
    Ok(d * (d * d + 4.0 * e).sqrt() / (d * d + 2.0 * e))
}

/// `|x|(2−|x|)/(|x|² − 2|x| + 2)`, the argument for pairs with `y = f(y) = 0`.
pub fn jstar_radius_argument(r: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidParameter(format!("|x| must lie in [0, 1), got {r}")));
    }
    Ok(r * (2.0 - r) / (r * r - 2.0 * r + 2.0))
}

/// `|u−v|/(|u−v| + 2 − 2 max{|u|, |v|})`.
pub fn jstar_ball_form(u: &Point, v: &Point) -> Result<f64> {
    let ball = Domain::unit_ball(u.dim())?;
    ball.require(u)?;
    ball.require(v)?;
    let d = u.distance(v);
    Ok(d / (d + 2.0 - 2.0 * u.norm().max(v.norm())))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JstarImageBounds {
    /// The `j*` form at the supplied images.
    pub lhs: Option<f64>,
    pub argument: f64,
    /// `φ_{K,2}(argument)`, planar only.
    pub phi_bound: Option<f64>,
    /// `λ_n^{1−α} argument^α`.
    pub power_bound: f64,
}

pub fn jstar_image_bounds(d: &Dilatation, x: &Point, y: &Point, images: Option<(&Point, &Point)>) -> Result<JstarImageBounds> {
    let argument = jstar_argument(x, y)?;
    let lhs = images.map(|(u, v)| jstar_ball_form(u, v)).transpose()?;
    let lambda = lambda_conservative(d.n)?;
    Ok(JstarImageBounds {
        lhs,
        argument,
        phi_bound: if d.planar() { Some(phi_k2(d.k, argument.min(1.0))?) } else { None },
        power_bound: lambda.powf(1.0 - d.alpha) * argument.powf(d.alpha),
    })
}

/// Bounds for `w_{S_β}(f(x), f(y))` under a `K`-quasiconformal
/// `f: S_α → S_β`, given `w = w_{S_α}(x, y)`.
pub fn sector_qc_bounds(k: f64, alpha: f64, beta: f64, w_value: f64) -> Result<Interval> {
    let in_range = |a: f64| a > 0.0 && a <= PI;
    if !(in_range(alpha) && in_range(beta)) {
        return Err(Error::InvalidParameter(format!(
            "sector angles must lie in (0, π], got α = {alpha}, β = {beta}"
        )));
    }
    if !(0.0..1.0).contains(&w_value) {
        return Err(Error::InvalidParameter(format!("w must lie in [0, 1), got {w_value}")));
    }
    let c = c_of_k(k)?.exact;
    let lower = beta * w_value.powf(k) / (c.powf(k) * PI * (beta / 2.0).sin());
    let upper = c * (PI / alpha * (alpha / 2.0).sin()).powf(1.0 / k) * w_value.powf(1.0 / k);
    Interval::new(lower, upper)
}
