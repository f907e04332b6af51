//! Convex bodies in `R^d` through their gauges and support functions.
//!
//! A [`Body`] contains the origin in its interior. It maps to the energy
//! `½ p_B²` ([`energy::gauge_energy`]); conjugation of such energies is the
//! polar on bodies. On top of that calculus sit three rounding procedures
//! ([`rounding`]) and sampled certificates of strict convexity and
//! smoothness ([`certificates`]).
//!
//! ```
//! use convex_rounder::{presets, DirectionGrid, hausdorff, Body};
//!
//! let grid = DirectionGrid::new(2, 720, 0).unwrap();
//! let d = hausdorff(&presets::square(), &Body::ball(2, 1.0).unwrap(), &grid).unwrap();
//! assert!((d - (2f64.sqrt() - 1.0)).abs() < 1e-12);
//! ```

pub mod body;
pub mod certificates;
pub mod energy;
pub mod error;
pub mod exec;
pub mod grid;
pub mod io;
pub mod linalg;
pub mod lipschitz;
pub mod polytope;
pub mod presets;
pub mod rounding;
pub mod sphere;
pub mod table;

pub use body::{containment_ratio, diameter, hausdorff, minkowski_sum, Body, RecenterResult};
pub use certificates::{
    cross_duality_check, smooth_certificate, smooth_gap_at, strict_certificate,
    support_hyperplane, CertificateKind, CertificateReport,
};
pub use energy::{add, brute_conjugate, gauge_energy, inf_conv, level_body, QuadGauge};
pub use error::{Error, Result};
pub use grid::{DirectionGrid, GridSpec};
pub use lipschitz::{check_forward_lipschitz, check_inverse_lipschitz, LipschitzWitness};
pub use polytope::Polytope;
pub use rounding::{
    asplund_round, smoothify, strictify, AsplundOutput, IterationTrace, RoundingConfig,
};
