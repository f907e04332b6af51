//! Body rounding: primal strictification, dual smoothification and the
//! Asplund averaging iteration.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::body::{hausdorff, Body};
use crate::energy::{gauge_energy, level_body, QuadGauge};
use crate::error::{Error, Result};
use crate::exec;
use crate::grid::{DirectionGrid, GridSpec};
use crate::polytope::hull_2d_tol;

/// Largest number of halvings of `reg_weight` tried by [`asplund_round`].
pub const MAX_HALVINGS: usize = 40;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundingConfig {
    /// Hausdorff budget between the inner and outer bodies.
    pub epsilon: f64,
    /// Weight `ε` of the added `(ε/2)|x|²`.
    pub reg_weight: f64,
    /// Stop once the uniform gap between the two energies drops below this.
    pub tol: f64,
    pub max_iter: usize,
    pub grid: GridSpec,
    /// Angular nodes per grid direction in the averaging tables.
    #[serde(default = "default_table_factor")]
    pub table_factor: usize,
}

fn default_table_factor() -> usize {
    8
}

impl Default for RoundingConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            reg_weight: 0.1,
            tol: 1e-6,
            max_iter: 200,
            grid: GridSpec::default_for(2),
            table_factor: default_table_factor(),
        }
    }
}

impl RoundingConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("epsilon", self.epsilon),
            ("reg_weight", self.reg_weight),
            ("tol", self.tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be >= 1".into()));
        }
        if self.table_factor == 0 {
            return Err(Error::InvalidParameter("table_factor must be >= 1".into()));
        }
        Ok(())
    }

    pub fn with_reg_weight(&self, reg_weight: f64) -> Self {
        Self {
            reg_weight,
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub iter: usize,
    /// `max |f_n - g_n|` over the table nodes.
    pub gap: f64,
    /// `f_n <= f_{n-1}`.
    pub monotone_upper_ok: bool,
    /// `g_n >= g_{n-1}`.
    pub monotone_lower_ok: bool,
    /// `f_n >= g_n`.
    pub sandwich_ok: bool,
    /// `max |f_n - f_{n-1}|`.
    pub drift: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub steps: Vec<StepRecord>,
    pub converged: bool,
    pub final_gap: f64,
    /// Regularization weight the run settled on.
    pub reg_weight: f64,
    pub halvings: usize,
    /// Geometric mean of successive gap ratios.
    pub empirical_rate: Option<f64>,
}

impl IterationTrace {
    pub fn all_flags_ok(&self) -> bool {
        self.steps
            .iter()
            .all(|s| s.monotone_upper_ok && s.monotone_lower_ok && s.sandwich_ok)
    }

    pub fn gaps_non_increasing(&self, slack: f64) -> bool {
        self.steps.windows(2).all(|w| w[1].gap <= w[0].gap + slack)
    }

    /// One header line and one row per step.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("iter,gap,monotone_upper_ok,monotone_lower_ok,sandwich_ok,drift\n");
        for s in &self.steps {
            let _ = writeln!(
                out,
                "{},{:.16e},{},{},{},{:.16e}",
                s.iter, s.gap, s.monotone_upper_ok, s.monotone_lower_ok, s.sandwich_ok, s.drift
            );
        }
        out
    }

    fn finish(&mut self) {
        self.final_gap = self.steps.last().map_or(f64::NAN, |s| s.gap);
        let gaps: Vec<f64> = self.steps.iter().map(|s| s.gap).filter(|g| *g > 0.0).collect();
        self.empirical_rate = (gaps.len() >= 2)
            .then(|| (gaps[gaps.len() - 1] / gaps[0]).powf(1.0 / (gaps.len() - 1) as f64));
    }
}

/// `{x : ½ p_b(x)² + (ε/2)|x|² <= ½}`: strictly convex and inside `b`.
pub fn strictify(b: &Body, cfg: &RoundingConfig) -> Result<Body> {
    strictify_with(b, cfg.reg_weight)
}

pub fn strictify_with(b: &Body, reg_weight: f64) -> Result<Body> {
    if !(reg_weight > 0.0 && reg_weight.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "reg_weight must be positive, got {reg_weight}"
        )));
    }
    let f = gauge_energy(b)?;
    let reg = QuadGauge::squared_gauge(Body::ball(b.dim(), 1.0)?, reg_weight)?;
    level_body(&QuadGauge::sum(vec![f, reg])?, 0.5)
}

/// Polar of the strictified polar: smooth and containing `b`.
pub fn smoothify(b: &Body, cfg: &RoundingConfig) -> Result<Body> {
    smoothify_with(b, cfg.reg_weight)
}

pub fn smoothify_with(b: &Body, reg_weight: f64) -> Result<Body> {
    strictify_with(&b.polar()?, reg_weight)?.polar()
}

#[derive(Clone, Debug)]
pub struct AsplundOutput {
    pub body: Body,
    pub trace: IterationTrace,
    /// Strictified inner body the iteration started from.
    pub inner: Body,
    /// Smoothified outer body the iteration started from.
    pub outer: Body,
}

/// Asplund averaging between a strictified inner body and a smoothified
/// outer body, in the plane.
///
/// Both energies live on a table of `grid_n · table_factor` angular nodes.
/// The upper sequence is `f_n = ½(f_{n-1} + g_{n-1})`; the lower one is
/// defined through its conjugate, `ℱg_n = ½(ℱf_{n-1} + ℱg_{n-1})`.
/// Conjugation on the tables is the discrete transform over the nodes,
/// which keeps the ordering `g_0 <= ... <= g_n <= f_n <= ... <= f_0` exact up
/// to rounding.
pub fn asplund_round(b: &Body, cfg: &RoundingConfig) -> Result<AsplundOutput> {
    cfg.validate()?;
    if b.dim() != 2 {
        return Err(Error::Unsupported(
            "the averaging iteration is implemented in the plane only".into(),
        ));
    }
    b.check_interior()?;
    let grid = cfg.grid.build(2)?;
    let (inner, outer, reg, halvings) = bracket(b, cfg, &grid)?;

    let n = grid.len() * cfg.table_factor;
    let nodes = Nodes::new(n);
    let f0: Vec<f64> = exec::map_range(n, |k| {
        let p = inner.p(&nodes.dir(k));
        0.5 * p * p
    });
    // ℱg_0 = ½ σ_C².
    let h0: Vec<f64> = exec::map_range(n, |k| {
        let s = outer.sigma(&nodes.dir(k));
        0.5 * s * s
    });

    let mut trace = IterationTrace {
        reg_weight: reg,
        halvings,
        ..Default::default()
    };
    let mut f = f0.clone();
    let mut h = h0;
    let mut fs = nodes.conjugate(&f);
    let mut g = nodes.conjugate(&h);
    let slack = |v: f64| 1e-12 * v.abs().max(1.0);
    trace.steps.push(StepRecord {
        iter: 0,
        gap: max_abs_diff(&f, &g),
        monotone_upper_ok: true,
        monotone_lower_ok: true,
        sandwich_ok: f.iter().zip(&g).all(|(a, b)| *a >= b - slack(*a)),
        drift: 0.0,
    });
    let mut steps = 0usize;
    while trace.steps.last().map_or(f64::INFINITY, |s| s.gap) >= cfg.tol && steps < cfg.max_iter {
        steps += 1;
        let f_next: Vec<f64> = f.iter().zip(&g).map(|(a, b)| 0.5 * (a + b)).collect();
        let h_next: Vec<f64> = fs.iter().zip(&h).map(|(a, b)| 0.5 * (a + b)).collect();
        let fs_next = nodes.conjugate(&f_next);
        let g_next = nodes.conjugate(&h_next);
        let rec = StepRecord {
            iter: steps,
            gap: max_abs_diff(&f_next, &g_next),
            monotone_upper_ok: f_next.iter().zip(&f).all(|(a, b)| *a <= b + slack(*b)),
            monotone_lower_ok: g_next.iter().zip(&g).all(|(a, b)| *a >= b - slack(*b)),
            sandwich_ok: f_next.iter().zip(&g_next).all(|(a, b)| *a >= b - slack(*a)),
            drift: max_abs_diff(&f_next, &f),
        };
        let ok = rec.monotone_upper_ok && rec.monotone_lower_ok && rec.sandwich_ok;
        trace.steps.push(rec);
        if !ok {
            trace.finish();
            return Err(Error::NonMonotone { step: steps, trace });
        }
        f = f_next;
        h = h_next;
        fs = fs_next;
        g = g_next;
    }
    if !trace.steps[0].sandwich_ok {
        trace.finish();
        return Err(Error::NonMonotone { step: 0, trace });
    }
    trace.converged = trace.steps.last().is_some_and(|s| s.gap < cfg.tol);
    trace.finish();

    // f_n = 2^{-n} f_0 + (a combination of the g_i); the f_0 part is kept
    // exact so that strict convexity of the inner body carries over.
    let w0 = 0.5f64.powi(steps as i32);
    let rest: Vec<f64> = f.iter().zip(&f0).map(|(a, b)| (a - w0 * b).max(0.0)).collect();
    let energy = QuadGauge::sum(vec![
        QuadGauge::squared_gauge(inner.clone(), w0)?,
        QuadGauge::tabulated(rest)?,
    ])?;
    let body = level_body(&energy, 0.5)?;
    Ok(AsplundOutput {
        body,
        trace,
        inner,
        outer,
    })
}

/// Inner and outer bodies within the Hausdorff budget, halving the
/// regularization weight as needed.
fn bracket(
    b: &Body,
    cfg: &RoundingConfig,
    grid: &DirectionGrid,
) -> Result<(Body, Body, f64, usize)> {
    let mut reg = cfg.reg_weight;
    let mut achieved = f64::INFINITY;
    for halvings in 0..=MAX_HALVINGS {
        let inner = strictify_with(b, reg)?;
        let outer = smoothify_with(b, reg)?;
        achieved = hausdorff(&inner, &outer, grid)?;
        if achieved < cfg.epsilon {
            return Ok((inner, outer, reg, halvings));
        }
        reg *= 0.5;
    }
    Err(Error::Budget {
        epsilon: cfg.epsilon,
        achieved,
        halvings: MAX_HALVINGS,
    })
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Uniform angular nodes `2πk/n` on the circle.
struct Nodes {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl Nodes {
    fn new(n: usize) -> Self {
        let (cos, sin) = (0..n)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / n as f64;
                (t.cos(), t.sin())
            })
            .unzip();
        Self { cos, sin }
    }

    fn dir(&self, k: usize) -> [f64; 2] {
        [self.cos[k], self.sin[k]]
    }

    /// Discrete conjugate `G_j = max_k <u_j, u_k>₊² / (4 F_k)`, i.e. half
    /// the squared support of `conv{u_k / sqrt(2 F_k)}` at `u_j`.
    /// Rotating calipers over the hull make it linear after the sort.
    fn conjugate(&self, table: &[f64]) -> Vec<f64> {
        let n = table.len();
        let pts: Vec<Vec<f64>> = (0..n)
            .map(|k| {
                let q = (2.0 * table[k]).sqrt();
                vec![self.cos[k] / q, self.sin[k] / q]
            })
            .collect();
        let (hull, _) = hull_2d_tol(&pts, 0.0);
        let m = hull.len();
        let sup = |j: usize, v: &[f64]| self.cos[j] * v[0] + self.sin[j] * v[1];
        let mut k = (0..m)
            .max_by(|&a, &b| sup(0, &hull[a]).total_cmp(&sup(0, &hull[b])))
            .unwrap_or(0);
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let mut moved = 0;
            while moved < m && sup(j, &hull[(k + 1) % m]) > sup(j, &hull[k]) {
                k = (k + 1) % m;
                moved += 1;
            }
            let s = sup(j, &hull[k]).max(0.0);
            out.push(0.5 * s * s);
        }
        out
    }
}
