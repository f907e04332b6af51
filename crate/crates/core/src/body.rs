//! Convex bodies with the origin in their interior.

use std::sync::Arc;

use crate::energy::QuadGauge;
use crate::error::{check_dim, check_finite, Error, Result};
use crate::exec;
use crate::grid::DirectionGrid;
use crate::linalg::{dot, norm};
use crate::polytope::Polytope;

/// Default fraction of the Chebyshev radius the origin must keep before
/// [`Body::recenter`] translates.
pub const DEFAULT_RECENTER_FRACTION: f64 = 0.5;

/// Outer polyhedral model `{x : <u_i, x> <= sigma_i}` built from support
/// samples on a direction grid.
#[derive(Clone, Debug)]
pub struct SupportSampled {
    grid: Arc<DirectionGrid>,
    values: Vec<f64>,
    /// The model as a V-polytope, kept in the plane only.
    model: Option<Polytope>,
}

impl SupportSampled {
    pub fn new(grid: Arc<DirectionGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "{} support values for a grid of {} directions",
                values.len(),
                grid.len()
            )));
        }
        check_finite("support values", &values)?;
        if let Some(v) = values.iter().find(|v| **v <= 0.0) {
            return Err(Error::Domain(format!(
                "support value {v} <= 0: origin is not interior"
            )));
        }
        let model = if grid.dim() == 2 {
            let pts: Vec<Vec<f64>> = grid
                .iter()
                .zip(&values)
                .map(|(u, s)| u.iter().map(|x| x / s).collect())
                .collect();
            let dual = Polytope::new(pts)?;
            Some(Polytope::new(dual.polar_vertices()?)?)
        } else {
            None
        };
        Ok(Self {
            grid,
            values,
            model,
        })
    }

    pub fn grid(&self) -> &DirectionGrid {
        &self.grid
    }

    pub fn grid_arc(&self) -> &Arc<DirectionGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn support(&self, u: &[f64]) -> f64 {
        if let Some(i) = self.grid.find(u) {
            let n = norm(u);
            return if (n - 1.0).abs() <= 4.0 * f64::EPSILON {
                self.values[i]
            } else {
                self.values[i] * n
            };
        }
        match &self.model {
            Some(m) => m.support(u),
            None => self.support_lp(u),
        }
    }

    fn support_lp(&self, u: &[f64]) -> f64 {
        use microlp::{ComparisonOp, OptimizationDirection, Problem};
        let mut p = Problem::new(OptimizationDirection::Maximize);
        let xs: Vec<_> = u
            .iter()
            .map(|&c| p.add_var(c, (f64::NEG_INFINITY, f64::INFINITY)))
            .collect();
        for (w, s) in self.grid.iter().zip(&self.values) {
            let expr: Vec<_> = xs.iter().zip(w).map(|(&v, &a)| (v, a)).collect();
            p.add_constraint(expr.as_slice(), ComparisonOp::Le, *s);
        }
        match p.solve().map(|o| o.into_solution()) {
            Ok(Ok(sol)) => sol.objective(),
            _ => f64::INFINITY,
        }
    }

    fn gauge(&self, x: &[f64]) -> f64 {
        self.grid
            .iter()
            .zip(&self.values)
            .map(|(u, s)| dot(u, x) / s)
            .fold(0.0, f64::max)
    }

    /// Largest inscribed ball of the model, by linear programming.
    fn chebyshev_center(&self) -> Result<(Vec<f64>, f64)> {
        use microlp::{ComparisonOp, OptimizationDirection, Problem};
        let d = self.grid.dim();
        let mut p = Problem::new(OptimizationDirection::Maximize);
        let xs: Vec<_> = (0..d)
            .map(|_| p.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY)))
            .collect();
        let r = p.add_var(1.0, (0.0, f64::INFINITY));
        for (w, s) in self.grid.iter().zip(&self.values) {
            let mut expr: Vec<_> = xs.iter().zip(w).map(|(&v, &a)| (v, a)).collect();
            expr.push((r, 1.0));
            p.add_constraint(expr.as_slice(), ComparisonOp::Le, *s);
        }
        let sol = p
            .solve()
            .map_err(|e| Error::Lp(e.to_string()))?
            .into_solution()
            .map_err(|_| Error::Lp("interrupted".into()))?;
        Ok((xs.iter().map(|&v| sol.var_value(v)).collect(), sol.var_value(r)))
    }
}

/// `{x : f(x) <= level}` for a quadratic-homogeneous energy `f`.
#[derive(Clone, Debug)]
pub struct LevelSet {
    pub energy: QuadGauge,
    pub level: f64,
}

/// A convex body in `R^d`.
#[derive(Clone, Debug)]
pub enum Body {
    Polytope(Arc<Polytope>),
    SupportSampled(Arc<SupportSampled>),
    Ball { dim: usize, radius: f64 },
    LevelSet(Arc<LevelSet>),
    /// Lazy polar of the inner body.
    PolarOf(Arc<Body>),
}

/// Result of [`Body::recenter`]: `body = input - offset`.
#[derive(Clone, Debug)]
pub struct RecenterResult {
    pub body: Body,
    pub offset: Vec<f64>,
}

impl Body {
    /// Hull of `vertices`. The origin is not required to be interior here;
    /// see [`Body::recenter`].
    pub fn polytope(vertices: Vec<Vec<f64>>) -> Result<Body> {
        Ok(Body::Polytope(Arc::new(Polytope::new(vertices)?)))
    }

    pub fn ball(dim: usize, radius: f64) -> Result<Body> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be >= 1".into()));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Degenerate(format!("ball radius {radius}")));
        }
        Ok(Body::Ball { dim, radius })
    }

    pub fn support_sampled(grid: Arc<DirectionGrid>, values: Vec<f64>) -> Result<Body> {
        Ok(Body::SupportSampled(Arc::new(SupportSampled::new(
            grid, values,
        )?)))
    }

    pub fn level_set(energy: QuadGauge, level: f64) -> Result<Body> {
        if !(level > 0.0 && level.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "level must be positive, got {level}"
            )));
        }
        Ok(Body::LevelSet(Arc::new(LevelSet { energy, level })))
    }

    pub fn dim(&self) -> usize {
        match self {
            Body::Polytope(p) => p.dim(),
            Body::SupportSampled(s) => s.grid.dim(),
            Body::Ball { dim, .. } => *dim,
            Body::LevelSet(l) => l.energy.dim(),
            Body::PolarOf(b) => b.dim(),
        }
    }

    /// `sigma_B(u) = sup { <u, x> : x in B }`.
    pub fn support(&self, u: &[f64]) -> Result<f64> {
        check_dim(self.dim(), u.len())?;
        check_finite("direction", u)?;
        if norm(u) == 0.0 {
            return Err(Error::Domain("zero direction".into()));
        }
        let s = self.sigma(u);
        if s.is_finite() {
            Ok(s)
        } else {
            Err(Error::Unbounded(u.to_vec()))
        }
    }

    /// Minkowski gauge `p_B(x) = inf { t > 0 : x in t B }`.
    pub fn gauge(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        check_finite("point", x)?;
        Ok(self.p(x))
    }

    pub(crate) fn sigma(&self, u: &[f64]) -> f64 {
        match self {
            Body::Polytope(p) => p.support(u),
            Body::SupportSampled(s) => s.support(u),
            Body::Ball { radius, .. } => radius * norm(u),
            Body::LevelSet(l) => {
                2.0 * (l.level * l.energy.conjugate_value(u).max(0.0)).sqrt()
            }
            Body::PolarOf(b) => b.p(u),
        }
    }

    pub(crate) fn p(&self, x: &[f64]) -> f64 {
        match self {
            Body::Polytope(p) => p.gauge(x),
            Body::SupportSampled(s) => s.gauge(x),
            Body::Ball { radius, .. } => norm(x) / radius,
            Body::LevelSet(l) => (l.energy.value(x).max(0.0) / l.level).sqrt(),
            Body::PolarOf(b) => b.sigma(x),
        }
    }

    /// Boundary point `u / p(u)` on the ray through `u`.
    pub fn boundary_point(&self, u: &[f64]) -> Vec<f64> {
        let p = self.p(u);
        u.iter().map(|x| x / p).collect()
    }

    /// Support values at every direction of `grid`, in grid order.
    pub fn support_on(&self, grid: &DirectionGrid) -> Vec<f64> {
        if let Body::SupportSampled(s) = self {
            if s.grid.as_ref() == grid {
                return s.values.clone();
            }
        }
        exec::map_range(grid.len(), |i| self.sigma(grid.direction(i)))
    }

    /// Gauge values at every direction of `grid`, in grid order.
    pub fn gauge_on(&self, grid: &DirectionGrid) -> Vec<f64> {
        exec::map_range(grid.len(), |i| self.p(grid.direction(i)))
    }

    /// Radius of the largest origin-centred ball inside the body, exact for
    /// polytopes and balls, sampled on `grid` otherwise.
    pub fn inradius(&self, grid: &DirectionGrid) -> f64 {
        match self {
            Body::Polytope(p) => p.inradius_about_origin(),
            Body::Ball { radius, .. } => *radius,
            _ => exec::min_of(&self.support_on(grid)),
        }
    }

    /// Radius of the smallest origin-centred ball containing the body, exact
    /// for polytopes and balls, sampled on `grid` otherwise.
    pub fn circumradius(&self, grid: &DirectionGrid) -> f64 {
        match self {
            Body::Polytope(p) => p.circumradius_about_origin(),
            Body::Ball { radius, .. } => *radius,
            _ => {
                let g = self.gauge_on(grid);
                1.0 / exec::min_of(&g)
            }
        }
    }

    /// Fails unless the origin is interior. Exact for polytopes; the other
    /// representations hold it by construction.
    pub fn check_interior(&self) -> Result<()> {
        if let Body::Polytope(p) = self {
            if !p.contains_origin_interior() {
                return Err(Error::Domain(
                    "origin is not in the interior of the polytope".into(),
                ));
            }
        }
        Ok(())
    }

    /// `B° = {u : <u, x> <= 1 for all x in B}`.
    ///
    /// Polytopes are dualized exactly; planar support samples become the
    /// polytope `conv{u_i / sigma_i}`; level sets map to the level set of the
    /// conjugate energy; everything else is wrapped lazily.
    pub fn polar(&self) -> Result<Body> {
        self.check_interior()?;
        match self {
            Body::Polytope(p) => match Polytope::new(p.polar_vertices()?) {
                Ok(q) => Ok(Body::Polytope(Arc::new(q))),
                Err(Error::Unsupported(_)) => Ok(Body::PolarOf(Arc::new(self.clone()))),
                Err(e) => Err(e),
            },
            Body::Ball { dim, radius } => Body::ball(*dim, 1.0 / radius),
            Body::SupportSampled(s) if s.grid.dim() == 2 => {
                let pts = s
                    .grid
                    .iter()
                    .zip(&s.values)
                    .map(|(u, v)| u.iter().map(|x| x / v).collect())
                    .collect();
                Body::polytope(pts)
            }
            Body::LevelSet(l) => Body::level_set(l.energy.fenchel()?, 0.25 / l.level),
            Body::PolarOf(b) => Ok(b.as_ref().clone()),
            _ => Ok(Body::PolarOf(Arc::new(self.clone()))),
        }
    }

    /// Membership through the gauge, with absolute slack `tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.p(x) <= 1.0 + tol
    }

    /// Translates the body so that an interior point becomes the origin.
    ///
    /// Polytopes and planar or spatial support models use a Chebyshev
    /// centre. If the origin already keeps `fraction` of the Chebyshev
    /// radius the body is returned unchanged with a zero offset. Balls,
    /// level sets and lazy polars contain the origin by construction.
    pub fn recenter(&self, fraction: f64) -> Result<RecenterResult> {
        let d = self.dim();
        let unchanged = || RecenterResult {
            body: self.clone(),
            offset: vec![0.0; d],
        };
        match self {
            Body::Polytope(p) => {
                let (c, r) = p.chebyshev_center()?;
                if r <= 0.0 {
                    return Err(Error::Degenerate("polytope has empty interior".into()));
                }
                if p.inradius_about_origin() >= fraction * r {
                    return Ok(unchanged());
                }
                let neg: Vec<f64> = c.iter().map(|v| -v).collect();
                Ok(RecenterResult {
                    body: Body::Polytope(Arc::new(p.translate(&neg))),
                    offset: c,
                })
            }
            Body::SupportSampled(s) => {
                let (c, r) = s.chebyshev_center()?;
                if r <= 0.0 {
                    return Err(Error::Degenerate("support model has empty interior".into()));
                }
                if exec::min_of(&s.values) >= fraction * r {
                    return Ok(unchanged());
                }
                let values = s
                    .grid
                    .iter()
                    .zip(&s.values)
                    .map(|(u, v)| v - dot(u, &c))
                    .collect();
                Ok(RecenterResult {
                    body: Body::support_sampled(s.grid.clone(), values)?,
                    offset: c,
                })
            }
            _ => Ok(unchanged()),
        }
    }

    /// `k B` for `k > 0`.
    pub fn scaled(&self, k: f64) -> Result<Body> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidParameter(format!("scale factor {k}")));
        }
        Ok(match self {
            Body::Polytope(p) => Body::Polytope(Arc::new(p.scaled(k))),
            Body::Ball { dim, radius } => Body::Ball {
                dim: *dim,
                radius: radius * k,
            },
            Body::SupportSampled(s) => Body::support_sampled(
                s.grid.clone(),
                s.values.iter().map(|v| v * k).collect(),
            )?,
            Body::LevelSet(l) => Body::level_set(l.energy.clone(), l.level * k * k)?,
            Body::PolarOf(b) => Body::PolarOf(Arc::new(b.scaled(1.0 / k)?)),
        })
    }
}

/// `a ⊕ b`. Exact vertex-sum hull for two planar polytopes, otherwise the
/// support model on `grid`.
pub fn minkowski_sum(a: &Body, b: &Body, grid: &DirectionGrid) -> Result<Body> {
    check_dim(a.dim(), b.dim())?;
    check_dim(a.dim(), grid.dim())?;
    if let (Body::Polytope(p), Body::Polytope(q)) = (a, b) {
        if p.dim() == 2 {
            let mut pts = Vec::with_capacity(p.vertices().len() * q.vertices().len());
            for v in p.vertices() {
                for w in q.vertices() {
                    pts.push(crate::linalg::add(v, w));
                }
            }
            return Body::polytope(pts);
        }
    }
    if let (Body::Ball { dim, radius: r }, Body::Ball { radius: s, .. }) = (a, b) {
        return Body::ball(*dim, r + s);
    }
    let sa = a.support_on(grid);
    let sb = b.support_on(grid);
    let values = sa.iter().zip(&sb).map(|(x, y)| x + y).collect();
    Body::support_sampled(Arc::new(grid.clone()), values)
}

/// `max_u |sigma_a(u) - sigma_b(u)|` over the directions of `grid`.
pub fn hausdorff(a: &Body, b: &Body, grid: &DirectionGrid) -> Result<f64> {
    check_dim(a.dim(), b.dim())?;
    check_dim(a.dim(), grid.dim())?;
    let sa = a.support_on(grid);
    let sb = b.support_on(grid);
    let d: Vec<f64> = sa.iter().zip(&sb).map(|(x, y)| (x - y).abs()).collect();
    let h = exec::max_of(&d);
    if h.is_nan() {
        return Err(Error::Domain("non-finite support values".into()));
    }
    Ok(h)
}

/// `max_u sigma_inner(u) / sigma_outer(u)` on `grid`: the outer body
/// contains `inner / k` for the returned `k`.
pub fn containment_ratio(inner: &Body, outer: &Body, grid: &DirectionGrid) -> Result<f64> {
    check_dim(inner.dim(), outer.dim())?;
    let si = inner.support_on(grid);
    let so = outer.support_on(grid);
    let r: Vec<f64> = si.iter().zip(&so).map(|(a, b)| a / b).collect();
    Ok(exec::max_of(&r))
}

/// Largest width over `grid`, which equals the diameter in the limit.
pub fn diameter(b: &Body, grid: &DirectionGrid) -> f64 {
    let s = b.support_on(grid);
    let w: Vec<f64> = grid
        .iter()
        .enumerate()
        .map(|(i, u)| {
            let neg: Vec<f64> = u.iter().map(|x| -x).collect();
            let j = grid.find(&neg).unwrap_or(i);
            s[i] + s[j]
        })
        .collect();
    exec::max_of(&w)
}
