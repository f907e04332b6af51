//! Local Lipschitz bounds for `T(B) = ½ p_B²` and its inverse.
//!
//! Forward: `d(T(B), T(C)) <= M d_H(B, C)` with
//! `M = (1/(2δ)) max(P_B, P_C) (P_B + P_C)`, where `P_X = sup_{|x| <= 1} p_X`
//! and both bodies contain `δ B`.
//!
//! Inverse: `d_H(B, C) <= L sup_{|x| <= 1} |p_B - p_C|` with
//! `L = (β + γ + rβγ) α`, where `β`, `γ` are the circumradii of `C` and `B`,
//! `α` bounds both and `r` is the gauge distance itself.

use serde::{Deserialize, Serialize};

use crate::body::{hausdorff, Body};
use crate::error::{check_dim, Error, Result};
use crate::exec;
use crate::grid::DirectionGrid;

/// Inflation applied to every grid-sampled radius.
pub const RADIUS_SAFETY: f64 = 1.0 + 1e-6;
const SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LipschitzWitness {
    pub delta: f64,
    #[serde(rename = "boundM")]
    pub bound_m: f64,
    #[serde(rename = "boundL")]
    pub bound_l: f64,
    pub observed_ratio: f64,
    /// Whether the checked inequality held.
    pub holds: bool,
}

struct Sampled {
    gauge_a: Vec<f64>,
    gauge_c: Vec<f64>,
    hausdorff: f64,
}

fn sample(a: &Body, c: &Body, grid: &DirectionGrid) -> Result<Sampled> {
    check_dim(a.dim(), c.dim())?;
    check_dim(a.dim(), grid.dim())?;
    Ok(Sampled {
        gauge_a: a.gauge_on(grid),
        gauge_c: c.gauge_on(grid),
        hausdorff: hausdorff(a, c, grid)?,
    })
}

fn ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else if den == 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

fn inverse_constant(a: &Body, c: &Body, grid: &DirectionGrid, r: f64) -> f64 {
    let gamma = a.circumradius(grid) * RADIUS_SAFETY;
    let beta = c.circumradius(grid) * RADIUS_SAFETY;
    let alpha = beta.max(gamma);
    (beta + gamma + r * beta * gamma) * alpha
}

/// Checks `d(T(a), T(c)) <= M d_H(a, c)`. Both bodies must contain
/// `delta · Ball`, checked on `grid`.
pub fn check_forward_lipschitz(
    a: &Body,
    c: &Body,
    delta: f64,
    grid: &DirectionGrid,
) -> Result<LipschitzWitness> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
    }
    for (name, b) in [("first", a), ("second", c)] {
        let rho = b.inradius(grid);
        if rho < delta * (1.0 - 1e-12) {
            return Err(Error::Precondition(format!(
                "{name} body has inradius {rho} < delta = {delta}"
            )));
        }
    }
    let s = sample(a, c, grid)?;
    let d_t = exec::max_of(
        &s.gauge_a
            .iter()
            .zip(&s.gauge_c)
            .map(|(p, q)| 0.5 * (p * p - q * q).abs())
            .collect::<Vec<_>>(),
    );
    let pa = exec::max_of(&s.gauge_a) * RADIUS_SAFETY;
    let pc = exec::max_of(&s.gauge_c) * RADIUS_SAFETY;
    let bound_m = pa.max(pc) * (pa + pc) / (2.0 * delta);
    let r = gauge_distance(&s);
    Ok(LipschitzWitness {
        delta,
        bound_m,
        bound_l: inverse_constant(a, c, grid, r),
        observed_ratio: ratio(d_t, s.hausdorff),
        holds: d_t <= bound_m * s.hausdorff + SLACK,
    })
}

fn gauge_distance(s: &Sampled) -> f64 {
    s.gauge_a
        .iter()
        .zip(&s.gauge_c)
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max)
}

/// Checks `d_H(a, c) <= L sup |p_a - p_c|`.
pub fn check_inverse_lipschitz(
    a: &Body,
    c: &Body,
    grid: &DirectionGrid,
) -> Result<LipschitzWitness> {
    let s = sample(a, c, grid)?;
    let r = gauge_distance(&s);
    let bound_l = inverse_constant(a, c, grid, r);
    let pa = exec::max_of(&s.gauge_a) * RADIUS_SAFETY;
    let pc = exec::max_of(&s.gauge_c) * RADIUS_SAFETY;
    let delta = a.inradius(grid).min(c.inradius(grid));
    Ok(LipschitzWitness {
        delta,
        bound_m: pa.max(pc) * (pa + pc) / (2.0 * delta),
        bound_l,
        observed_ratio: ratio(s.hausdorff, r),
        holds: s.hausdorff <= bound_l * r + SLACK,
    })
}
