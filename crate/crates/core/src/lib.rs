//! Intrinsic metrics on the unit ball, the upper half-space and planar sectors.
//!
//! The crate evaluates the hyperbolic metric together with the distance ratio
//! metric `j`, the `j*`-metric, the triangular ratio metric `s`, the point pair
//! function `p`, the `w`-quasi-metric, the `t`-metric and the Barrlund metric
//! `b_p`, and on top of them:
//!
//! * sharp bounds of each metric against `th(ρ/2)` for points in an annulus
//!   `r_l ≤ |x| ≤ r_u` of the unit ball ([`bounds`]),
//! * distortion estimates under conformal self-maps of the ball, including the
//!   hyperbolic-midpoint based bounds for `s` ([`bounds`], [`moebius`]),
//! * the Schwarz lemma for `K`-quasiregular maps, built on the complete
//!   elliptic integral and the Grötzsch modulus `μ` ([`schwarz`]),
//! * seeded experiments: the Monte Carlo comparison of the two `s`-distortion
//!   estimates, supremum probes and inequality fuzzing ([`experiments`]).
//!
//! ```
//! use metrics_lab::{geometry::{Domain, Point}, metrics};
//!
//! let ball = Domain::unit_ball(2).unwrap();
//! let x = Point::new(vec![0.0, 0.0]).unwrap();
//! let y = Point::new(vec![0.5, 0.0]).unwrap();
//! let s = metrics::s_metric(&ball, &x, &y).unwrap();
//! assert!((s - 1.0 / 3.0).abs() < 1e-12);
//! ```

pub mod bounds;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod metrics;
pub mod moebius;
pub mod schwarz;

pub use error::{Error, Result};
pub use num_complex::Complex64;
