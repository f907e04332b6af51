//! Quadratic-homogeneous convex energies `f = ½ p²` and their calculus.
//!
//! Conjugation is structural wherever possible: the conjugate of
//! `(w/2) p_B²` is `(1/(2w)) σ_B²`, i.e. the squared gauge of the polar with
//! the reciprocal weight. Sums of two or more terms have no closed-form
//! conjugate; they are wrapped in [`QuadGauge::ConjugateOf`] and evaluated by
//! maximizing over the sphere, using
//!
//! `ℱh(u) = sup_{|w| = 1} <u, w>₊² / (4 h(w))`.

use std::sync::Arc;

use crate::body::Body;
use crate::error::{check_dim, check_finite, Error, Result};
use crate::exec;
use crate::grid::DirectionGrid;
use crate::linalg::{dot, norm, normalized, tangent_basis};
use crate::sphere;
use crate::table::AngularTable;

#[derive(Clone, Debug)]
pub enum QuadGauge {
    /// `(weight / 2) · p_body²`.
    SquaredGauge { body: Body, weight: f64 },
    Sum(Arc<Vec<QuadGauge>>),
    /// Fenchel conjugate of the inner energy, evaluated numerically.
    ConjugateOf(Arc<QuadGauge>),
    /// Planar energy `|x|² · T(θ)` with `T` a periodic spline.
    Tabulated(Arc<AngularTable>),
}

impl QuadGauge {
    pub fn squared_gauge(body: Body, weight: f64) -> Result<QuadGauge> {
        if !(weight >= 0.0 && weight.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "weight must be non-negative, got {weight}"
            )));
        }
        Ok(QuadGauge::SquaredGauge { body, weight })
    }

    /// Pointwise sum. Nested sums are flattened.
    pub fn sum(terms: Vec<QuadGauge>) -> Result<QuadGauge> {
        let Some(first) = terms.first() else {
            return Err(Error::InvalidParameter("empty sum".into()));
        };
        let d = first.dim();
        let mut flat = Vec::with_capacity(terms.len());
        for t in terms {
            check_dim(d, t.dim())?;
            match t {
                QuadGauge::Sum(inner) => flat.extend(inner.iter().cloned()),
                other => flat.push(other),
            }
        }
        Ok(QuadGauge::Sum(Arc::new(flat)))
    }

    /// Planar energy from values on the uniform angular grid `2πk/n`.
    pub fn tabulated(values: Vec<f64>) -> Result<QuadGauge> {
        Ok(QuadGauge::Tabulated(Arc::new(AngularTable::new(values)?)))
    }

    pub fn dim(&self) -> usize {
        match self {
            QuadGauge::SquaredGauge { body, .. } => body.dim(),
            QuadGauge::Sum(terms) => terms[0].dim(),
            QuadGauge::ConjugateOf(inner) => inner.dim(),
            QuadGauge::Tabulated(_) => 2,
        }
    }

    /// `f(x)`.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        check_finite("point", x)?;
        Ok(self.value(x))
    }

    /// `ℱf(u) = sup_x <u, x> - f(x)`.
    pub fn conjugate_at(&self, u: &[f64]) -> Result<f64> {
        check_dim(self.dim(), u.len())?;
        check_finite("point", u)?;
        Ok(self.conjugate_value(u))
    }

    pub(crate) fn value(&self, x: &[f64]) -> f64 {
        match self {
            QuadGauge::SquaredGauge { body, weight } => {
                if *weight == 0.0 {
                    return 0.0;
                }
                let p = body.p(x);
                0.5 * weight * p * p
            }
            QuadGauge::Sum(terms) => terms.iter().map(|t| t.value(x)).sum(),
            QuadGauge::ConjugateOf(inner) => inner.conjugate_value(x),
            QuadGauge::Tabulated(t) => dot(x, x) * t.eval(x[1].atan2(x[0])),
        }
    }

    pub(crate) fn conjugate_value(&self, u: &[f64]) -> f64 {
        match self {
            QuadGauge::SquaredGauge { body, weight } => {
                let s = body.sigma(u);
                s * s / (2.0 * weight)
            }
            QuadGauge::ConjugateOf(inner) => inner.value(u),
            QuadGauge::Sum(terms) if terms.len() == 1 => terms[0].conjugate_value(u),
            _ => numeric_conjugate(self, u),
        }
    }

    /// `f ↦ ℱf`. Exact for squared gauges and for conjugates; other forms
    /// become a lazily evaluated [`QuadGauge::ConjugateOf`].
    pub fn fenchel(&self) -> Result<QuadGauge> {
        match self {
            QuadGauge::SquaredGauge { body, weight } => {
                if *weight <= 0.0 {
                    return Err(Error::Domain(
                        "conjugate of a non-coercive energy".into(),
                    ));
                }
                QuadGauge::squared_gauge(body.polar()?, 1.0 / weight)
            }
            QuadGauge::Sum(terms) => {
                let live: Vec<QuadGauge> = terms
                    .iter()
                    .filter(|t| !matches!(t, QuadGauge::SquaredGauge { weight, .. } if *weight == 0.0))
                    .cloned()
                    .collect();
                match live.len() {
                    0 => Err(Error::Domain("conjugate of a non-coercive energy".into())),
                    1 => live[0].fenchel(),
                    _ => Ok(QuadGauge::ConjugateOf(Arc::new(QuadGauge::Sum(Arc::new(
                        live,
                    ))))),
                }
            }
            QuadGauge::ConjugateOf(inner) => Ok(inner.as_ref().clone()),
            QuadGauge::Tabulated(_) => Ok(QuadGauge::ConjugateOf(Arc::new(self.clone()))),
        }
    }

    /// `λ f` for `λ > 0`, using `ℱ(λh) = ℱh / λ` under conjugates.
    pub fn scale(&self, lambda: f64) -> Result<QuadGauge> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!("scale factor {lambda}")));
        }
        Ok(match self {
            QuadGauge::SquaredGauge { body, weight } => QuadGauge::SquaredGauge {
                body: body.clone(),
                weight: weight * lambda,
            },
            QuadGauge::Sum(terms) => QuadGauge::Sum(Arc::new(
                terms
                    .iter()
                    .map(|t| t.scale(lambda))
                    .collect::<Result<Vec<_>>>()?,
            )),
            QuadGauge::ConjugateOf(inner) => {
                QuadGauge::ConjugateOf(Arc::new(inner.scale(1.0 / lambda)?))
            }
            QuadGauge::Tabulated(t) => QuadGauge::Tabulated(Arc::new(t.scaled(lambda))),
        })
    }

    /// Smallest value on the unit directions of `grid`; positive for a
    /// coercive energy.
    pub fn min_on(&self, grid: &DirectionGrid) -> f64 {
        let v = self.values_on(grid);
        exec::min_of(&v)
    }

    pub fn values_on(&self, grid: &DirectionGrid) -> Vec<f64> {
        exec::map_range(grid.len(), |i| self.value(grid.direction(i)))
    }
}

/// `T(B) = ½ p_B²`.
pub fn gauge_energy(b: &Body) -> Result<QuadGauge> {
    b.check_interior()?;
    QuadGauge::squared_gauge(b.clone(), 1.0)
}

/// `{x : f(x) <= r}`.
pub fn level_body(f: &QuadGauge, r: f64) -> Result<Body> {
    Body::level_set(f.clone(), r)
}

pub fn add(f: &QuadGauge, g: &QuadGauge) -> Result<QuadGauge> {
    QuadGauge::sum(vec![f.clone(), g.clone()])
}

/// `f □ g = ℱ(ℱf + ℱg)`.
pub fn inf_conv(f: &QuadGauge, g: &QuadGauge) -> Result<QuadGauge> {
    check_dim(f.dim(), g.dim())?;
    add(&f.fenchel()?, &g.fenchel()?)?.fenchel()
}

/// `max_u |f(u) - g(u)|` over the directions of `grid`, which is the sup
/// over the unit ball for quadratic-homogeneous energies.
pub fn energy_distance(f: &QuadGauge, g: &QuadGauge, grid: &DirectionGrid) -> Result<f64> {
    check_dim(f.dim(), g.dim())?;
    let d = exec::map_range(grid.len(), |i| {
        let u = grid.direction(i);
        (f.value(u) - g.value(u)).abs()
    });
    Ok(exec::max_of(&d))
}

fn numeric_conjugate(h: &QuadGauge, u: &[f64]) -> f64 {
    if norm(u) == 0.0 {
        return 0.0;
    }
    let s = sphere::dual_gauge(u, |w| (2.0 * h.value(w)).sqrt());
    0.5 * s.max(0.0).powi(2)
}

/// Lower bound on `ℱf(u)` from the samples `x = t w`, with `w` ranging over
/// `search_grid` plus one refined direction and `t` over `radial_steps + 1`
/// equispaced radii. Uses evaluations of `f` only.
pub fn brute_conjugate(
    f: &QuadGauge,
    u: &[f64],
    search_grid: &DirectionGrid,
    radial_steps: usize,
) -> Result<f64> {
    check_dim(f.dim(), u.len())?;
    check_dim(f.dim(), search_grid.dim())?;
    if radial_steps < 2 {
        return Err(Error::InvalidParameter("radial_steps must be >= 2".into()));
    }
    // Ray maximizer t* = <u,w> / (2 f(w)); the radial range is fixed by the
    // grid alone so that refining `radial_steps` only adds samples.
    let rays: Vec<(f64, f64)> = exec::map_range(search_grid.len(), |i| {
        let w = search_grid.direction(i);
        (dot(u, w), f.value(w))
    });
    let t_max = 2.0
        * rays
            .iter()
            .filter(|(a, c)| *a > 0.0 && *c > 0.0)
            .map(|(a, c)| a / (2.0 * c))
            .fold(0.0f64, f64::max);
    if t_max == 0.0 {
        return Ok(0.0);
    }
    let (best_i, _) = rays
        .iter()
        .enumerate()
        .map(|(i, (a, c))| (i, if *a > 0.0 { a * a / c } else { 0.0 }))
        .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    let w_ref = chart_refine(
        |w| {
            let a = dot(u, w);
            if a > 0.0 {
                a * a / (4.0 * f.value(w))
            } else {
                0.0
            }
        },
        search_grid.direction(best_i),
        2.0 * search_grid.spacing(),
    );
    let dt = t_max / radial_steps as f64;
    let ray_best = |a: f64, c: f64| -> f64 {
        if a <= 0.0 {
            return 0.0;
        }
        let j = if c > 0.0 { a / (2.0 * c) / dt } else { radial_steps as f64 };
        let lo = (j.floor() as usize).min(radial_steps);
        let hi = (j.ceil() as usize).min(radial_steps);
        [lo, hi]
            .iter()
            .map(|&k| {
                let t = k as f64 * dt;
                a * t - c * t * t
            })
            .fold(0.0, f64::max)
    };
    let mut best = rays.iter().map(|&(a, c)| ray_best(a, c)).fold(0.0, f64::max);
    best = best.max(ray_best(dot(u, &w_ref), f.value(&w_ref)));
    Ok(best)
}

/// Maximizes a quasi-concave `obj` in the gnomonic chart `w ∝ start + Σ c_k b_k`
/// on `[-half, half]^(d-1)` by nested golden sections; great circles are
/// lines in the chart, so each restriction is unimodal. The chart is
/// recentred while the maximizer sits on its boundary.
fn chart_refine<F>(obj: F, start: &[f64], half: f64) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let mut best = start.to_vec();
    let mut best_v = obj(&best);
    for _ in 0..8 {
        let basis = tangent_basis(&best);
        let iters = match basis.len() {
            0..=2 => 100,
            3 => 60,
            _ => 30,
        };
        let point = |c: &[f64]| -> Option<Vec<f64>> {
            let mut x = best.clone();
            for (ck, b) in c.iter().zip(&basis) {
                for k in 0..x.len() {
                    x[k] += ck * b[k];
                }
            }
            normalized(&x)
        };
        let value = |c: &[f64]| point(c).map_or(f64::NEG_INFINITY, |w| obj(&w));
        let (coords, v) = chart_max(&value, basis.len(), &[], half, iters);
        if v <= best_v {
            break;
        }
        let Some(w) = point(&coords) else { break };
        best = w;
        best_v = v;
        if coords.iter().all(|c| c.abs() < 0.9 * half) {
            break;
        }
    }
    best
}

fn chart_max<V>(value: &V, dims: usize, prefix: &[f64], half: f64, iters: usize) -> (Vec<f64>, f64)
where
    V: Fn(&[f64]) -> f64,
{
    if prefix.len() == dims {
        return (prefix.to_vec(), value(prefix));
    }
    let inner = |t: f64| {
        let mut c = prefix.to_vec();
        c.push(t);
        chart_max(value, dims, &c, half, iters)
    };
    let (t, _) = sphere::golden_iter(&|t| -inner(t).1, -half, half, iters);
    inner(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Body {
        Body::polytope(vec![
            vec![1.0, 1.0],
            vec![-1.0, 1.0],
            vec![-1.0, -1.0],
            vec![1.0, -1.0],
        ])
        .unwrap()
    }

    fn euclid(d: usize) -> QuadGauge {
        gauge_energy(&Body::ball(d, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn energy_examples() {
        assert_eq!(euclid(2).eval(&[3.0, 4.0]).unwrap(), 12.5);
        let f = gauge_energy(&square()).unwrap();
        assert_eq!(f.eval(&[0.5, -1.0]).unwrap(), 0.5);
        let g = add(&f, &QuadGauge::squared_gauge(Body::ball(2, 1.0).unwrap(), 0.2).unwrap())
            .unwrap();
        assert!((g.eval(&[1.0, 0.0]).unwrap() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn conjugate_of_square_energy_is_half_l1_squared() {
        let f = gauge_energy(&square()).unwrap().fenchel().unwrap();
        let u = [0.3, -1.2];
        assert!((f.eval(&u).unwrap() - 0.5 * 1.5f64.powi(2)).abs() < 1e-14);
    }

    #[test]
    fn numeric_conjugate_of_sum_matches_closed_form() {
        // ½|x|² · (1 + 3) has conjugate |u|² / 8.
        let b = Body::ball(2, 1.0).unwrap();
        let h = QuadGauge::sum(vec![
            QuadGauge::squared_gauge(b.clone(), 1.0).unwrap(),
            QuadGauge::squared_gauge(b, 3.0).unwrap(),
        ])
        .unwrap();
        let u = [0.7, -0.2];
        let expect = dot(&u, &u) / 8.0;
        assert!((h.conjugate_at(&u).unwrap() - expect).abs() < 1e-15);
        let h3 = QuadGauge::sum(vec![euclid(3), euclid(3).scale(3.0).unwrap()]).unwrap();
        let u = [0.7, -0.2, 0.1];
        assert!((h3.conjugate_at(&u).unwrap() - dot(&u, &u) / 8.0).abs() < 1e-14);
    }

    #[test]
    fn scaling_commutes_with_conjugation() {
        let f = gauge_energy(&square()).unwrap();
        let u = [0.4, 0.9];
        let a = f.scale(2.5).unwrap().fenchel().unwrap().eval(&u).unwrap();
        let b = f.fenchel().unwrap().eval(&u).unwrap() / 2.5;
        assert!((a - b).abs() < 1e-15);
        let c = f.fenchel().unwrap().fenchel().unwrap().scale(2.0).unwrap();
        assert!((c.eval(&u).unwrap() - 2.0 * f.eval(&u).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn zero_weight_only_is_not_coercive() {
        let z = QuadGauge::squared_gauge(square(), 0.0).unwrap();
        assert!(z.fenchel().is_err());
        let f = QuadGauge::sum(vec![gauge_energy(&square()).unwrap(), z]).unwrap();
        let u = [0.2, 0.5];
        let a = f.fenchel().unwrap().eval(&u).unwrap();
        assert!((a - 0.5 * 0.49).abs() < 1e-15);
    }

    #[test]
    fn inf_conv_of_energy_with_itself_halves_it() {
        let f = gauge_energy(&square()).unwrap();
        let g = inf_conv(&f, &f).unwrap();
        let x = [0.8, -0.3];
        assert!((g.eval(&x).unwrap() - 0.5 * f.eval(&x).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn brute_conjugate_is_a_monotone_lower_bound() {
        let f = gauge_energy(&square()).unwrap();
        let g = DirectionGrid::new(2, 720, 0).unwrap();
        let u = [1.0, 1.0];
        let mut prev = 0.0;
        for r in [8, 16, 32, 64, 128, 256] {
            let v = brute_conjugate(&f, &u, &g, r).unwrap();
            assert!(v >= prev && v <= 2.0 + 1e-12);
            prev = v;
        }
        assert!((prev - 2.0).abs() < 1e-3);
        let e = brute_conjugate(&euclid(2), &[1.0, 0.0], &g, 256).unwrap();
        assert!(e <= 0.5 && e > 0.5 - 1e-4);
    }

    #[test]
    fn tabulated_constant_is_scaled_euclidean() {
        let t = QuadGauge::tabulated(vec![1.5; 32]).unwrap();
        let x = [0.3, 0.4];
        assert!((t.eval(&x).unwrap() - 1.5 * 0.25).abs() < 1e-15);
        assert!((t.conjugate_at(&x).unwrap() - 0.25 / 6.0).abs() < 1e-14);
    }
}
