//! Planar Möbius transformations `z ↦ (sz+t)/(uz+v)`, the disk automorphisms
//! `T_a`, sector power maps, the hyperbolic midpoint and the image radii of
//! centred disks under `T_a`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{ahlfors_unchecked, arg_positive, one_minus_sq, Domain, Point};

const DEGENERACY_FLOOR: f64 = 1e-300;

/// A sense-preserving Möbius transformation, stored projectively.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    s: Complex64,
    t: Complex64,
    u: Complex64,
    v: Complex64,
}

impl MoebiusMap {
    pub fn new(s: Complex64, t: Complex64, u: Complex64, v: Complex64) -> Result<Self> {
        let finite = [s, t, u, v].iter().all(|c| c.re.is_finite() && c.im.is_finite());
        let det = s * v - t * u;
        if !finite || !(det.norm() > DEGENERACY_FLOOR) {
            return Err(Error::DegenerateMap);
        }
        Ok(MoebiusMap { s, t, u, v })
    }

    pub fn identity() -> Self {
        let (one, zero) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        MoebiusMap { s: one, t: zero, u: zero, v: one }
    }

    /// `T_a(z) = (z − a)/(1 − āz)`, coefficients `(1, −a, −ā, 1)`.
    pub fn disk_automorphism(a: Complex64) -> Result<Self> {
        if !(a.norm() < 1.0) {
            return Err(Error::DomainMembership(format!("|a| must be < 1, got a = {a}")));
        }
        let one = Complex64::new(1.0, 0.0);
        MoebiusMap::new(one, -a, -a.conj(), one)
    }

    /// `z ↦ e^{iφ} z`.
    pub fn rotation(phi: f64) -> Self {
        let (zero, one) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        MoebiusMap { s: Complex64::cis(phi), t: zero, u: zero, v: one }
    }

    /// `z ↦ (z − i)/(z + i)`, mapping `H^2` onto `B^2`.
    pub fn cayley() -> Self {
        let (one, i) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0));
        MoebiusMap { s: one, t: -i, u: one, v: i }
    }

    pub fn coefficients(&self) -> [Complex64; 4] {
        [self.s, self.t, self.u, self.v]
    }

    pub fn apply(&self, z: Complex64) -> Result<Complex64> {
        let den = self.u * z + self.v;
        let scale = self.u.norm() * z.norm() + self.v.norm();
        if !(den.norm() > DEGENERACY_FLOOR * scale.max(1.0)) {
            return Err(Error::PoleAtInput);
        }
        let w = (self.s * z + self.t) / den;
        if !(w.re.is_finite() && w.im.is_finite()) {
            return Err(Error::PoleAtInput);
        }
        Ok(w)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MoebiusMap) -> Result<MoebiusMap> {
        let m = MoebiusMap::new(
            self.s * other.s + self.t * other.u,
            self.s * other.t + self.t * other.v,
            self.u * other.s + self.v * other.u,
            self.u * other.t + self.v * other.v,
        )?;
        Ok(m.normalized())
    }

    pub fn inverse(&self) -> Result<MoebiusMap> {
        MoebiusMap::new(self.v, -self.t, -self.u, self.s)
    }

    /// Divides by the largest-magnitude coefficient.
    pub fn normalized(&self) -> MoebiusMap {
        let c = self.coefficients();
        let pivot = c
            .iter()
            .copied()
            .fold(Complex64::new(0.0, 0.0), |best, z| if z.norm() > best.norm() { z } else { best });
        MoebiusMap {
            s: self.s / pivot,
            t: self.t / pivot,
            u: self.u / pivot,
            v: self.v / pivot,
        }
    }

    /// Equality as projective maps, up to `tol` after normalization.
    pub fn approx_eq(&self, other: &MoebiusMap, tol: f64) -> bool {
        let (a, b) = (self.normalized(), other.normalized());
        // The pivot positions may differ only when two coefficients tie; align on a's pivot.
        let ca = a.coefficients();
        let cb = b.coefficients();
        let k = (0..4).max_by(|&i, &j| ca[i].norm().total_cmp(&ca[j].norm())).unwrap();
        if cb[k].norm() == 0.0 {
            return false;
        }
        let phase = ca[k] / cb[k];
        ca.iter().zip(cb.iter()).all(|(x, y)| (x - y * phase).norm() <= tol)
    }
}

/// `T_a` as a [`MoebiusMap`].
pub fn make_ta(a: Complex64) -> Result<MoebiusMap> {
    MoebiusMap::disk_automorphism(a)
}

/// A sense-reversing map `z ↦ m(z̄)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SenseReversing(pub MoebiusMap);

impl SenseReversing {
    pub fn apply(&self, z: Complex64) -> Result<Complex64> {
        self.0.apply(z.conj())
    }
}

/// The automorphism of `B^n` sending `a` to the origin,
/// `((1−|a|²)(x−a) − |x−a|² a) / (1 − 2x·a + |x|²|a|²)`.
/// Agrees with `T_a` for `n = 2`.
pub fn ball_automorphism(a: &Point, x: &Point) -> Result<Point> {
    let ball = Domain::unit_ball(x.dim())?;
    ball.require(a)?;
    ball.require(x)?;
    let a2 = a.norm_sq();
    let xa = x.dot(a);
    let diff2 = x.distance(a).powi(2);
    let den = 1.0 - 2.0 * xa + x.norm_sq() * a2;
    let coords = x
        .coords()
        .iter()
        .zip(a.coords())
        .map(|(xi, ai)| (one_minus_sq(a.norm()) * (xi - ai) - diff2 * ai) / den)
        .collect();
    Ok(Point::from_coords_unchecked(coords))
}

/// `z ↦ |z|^{β/α} e^{i(β/α) arg z}` from `S_α` to `S_β`, with `arg z ∈ (0, α)`.
pub fn sector_power_map(alpha: f64, beta: f64, z: Complex64) -> Result<Complex64> {
    let source = Domain::sector(alpha)?;
    Domain::sector(beta)?;
    let p = Point::new(vec![z.re, z.im])?;
    source.require(&p)?;
    let k = beta / alpha;
    Ok(Complex64::from_polar(z.norm().powf(k), k * arg_positive(z)))
}

/// The hyperbolic midpoint of `x, y ∈ B^n`,
/// `q = (y(1−|x|²) + x(1−|y|²)) / (1 − |x|²|y|² + A[x,y]√((1−|x|²)(1−|y|²)))`.
///
/// The vector form is evaluated directly in any dimension; it coincides with
/// the planar formula in the plane through `x`, `y` and the origin.
pub fn hyperbolic_midpoint(x: &Point, y: &Point) -> Result<Point> {
    let ball = Domain::unit_ball(x.dim())?;
    ball.require(x)?;
    ball.require(y)?;
    let (cx, cy) = (one_minus_sq(x.norm()), one_minus_sq(y.norm()));
    let den = 1.0 - x.norm_sq() * y.norm_sq() + ahlfors_unchecked(x, y) * (cx * cy).sqrt();
    let coords = x
        .coords()
        .iter()
        .zip(y.coords())
        .map(|(xi, yi)| (yi * cx + xi * cy) / den)
        .collect();
    Ok(Point::from_coords_unchecked(coords))
}

/// `(||a| − r|/(1 − |a|r), (|a| + r)/(1 + |a|r))`: the minimum and maximum of
/// `|T_a(z)|` over `|z| = r`.
pub fn disk_image_radii(a: Complex64, r: f64) -> Result<(f64, f64)> {
    let m = a.norm();
    if !(m < 1.0) {
        return Err(Error::DomainMembership(format!("|a| must be < 1, got a = {a}")));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::DomainMembership(format!("radius must lie in (0, 1), got {r}")));
    }
    Ok(((m - r).abs() / (1.0 - m * r), (m + r) / (1.0 + m * r)))
}
