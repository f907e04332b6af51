//! Sampled evidence of strict convexity and smoothness.
//!
//! Strictness is the midpoint modulus `1 - p((x + y)/2)` over separated
//! boundary pairs. Smoothness is the one-sided derivative gap
//! `p'(x; y) + p'(x; -y)`, estimated with forward differences at a fixed
//! step: at random boundary points, then at the worst of them after a
//! continuation that shrinks the step while tracking the kink.
//!
//! Both are evidence on a finite sample, never a proof.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::body::{diameter, Body};
use crate::error::{check_dim, Error, Result};
use crate::exec;
use crate::grid::DirectionGrid;
use crate::linalg::{dot, norm, normalized};
use crate::sphere;

pub const DEFAULT_STRICT_FLOOR: f64 = 1e-9;
pub const DEFAULT_SMOOTH_CEILING: f64 = 1e-3;
pub const DEFAULT_FD_STEP: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    Strict,
    Smooth,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub kind: CertificateKind,
    /// Strict: min over pairs of `1 - p(midpoint)`. Smooth: max derivative gap.
    pub value: f64,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub min_separation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fd_step: Option<f64>,
    /// Floor (strict) or ceiling (smooth).
    pub threshold: f64,
    pub seed: u64,
    pub pass: bool,
    /// Where the extreme value was attained.
    pub witness: Vec<Vec<f64>>,
}

impl CertificateReport {
    pub const CSV_HEADER: &'static str = "kind,value,samples,min_separation,fd_step,threshold,seed,pass";

    pub fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.16e}")).unwrap_or_default();
        format!(
            "{},{:.16e},{},{},{},{:.16e},{},{}",
            match self.kind {
                CertificateKind::Strict => "strict",
                CertificateKind::Smooth => "smooth",
            },
            self.value,
            self.samples,
            opt(self.min_separation),
            opt(self.fd_step),
            self.threshold,
            self.seed,
            self.pass
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StrictParams {
    pub n_pairs: usize,
    /// Defaults to a tenth of the sampled diameter.
    pub min_separation: Option<f64>,
    pub seed: u64,
    pub floor: f64,
}

impl Default for StrictParams {
    fn default() -> Self {
        Self {
            n_pairs: 512,
            min_separation: None,
            seed: 0,
            floor: DEFAULT_STRICT_FLOOR,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmoothParams {
    pub n_points: usize,
    pub n_probe_dirs: usize,
    pub fd_step: f64,
    pub seed: u64,
    pub ceiling: f64,
    /// Worst points followed by the kink continuation.
    pub refine: usize,
}

impl Default for SmoothParams {
    fn default() -> Self {
        Self {
            n_points: 256,
            n_probe_dirs: 4,
            fd_step: DEFAULT_FD_STEP,
            seed: 0,
            ceiling: DEFAULT_SMOOTH_CEILING,
            refine: 8,
        }
    }
}

fn random_unit(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        if let Some(u) = normalized(&v) {
            return u;
        }
    }
}

pub fn strict_certificate(
    b: &Body,
    n_pairs: usize,
    min_separation: f64,
    seed: u64,
) -> Result<CertificateReport> {
    strict_certificate_with(
        b,
        &StrictParams {
            n_pairs,
            min_separation: Some(min_separation),
            seed,
            ..Default::default()
        },
    )
}

pub fn strict_certificate_with(b: &Body, params: &StrictParams) -> Result<CertificateReport> {
    b.check_interior()?;
    if params.n_pairs == 0 {
        return Err(Error::InvalidParameter("n_pairs must be >= 1".into()));
    }
    let d = b.dim();
    let min_sep = match params.min_separation {
        Some(s) => s,
        None => 0.1 * diameter(b, &DirectionGrid::new(d, 256.max(2 * d), params.seed)?),
    };
    if !(min_sep > 0.0 && min_sep.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "min_separation must be positive, got {min_sep}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut pairs: Vec<(Vec<f64>, Vec<f64>)> = Vec::with_capacity(params.n_pairs);
    for _ in 0..64 {
        let dirs: Vec<Vec<f64>> = (0..2 * params.n_pairs).map(|_| random_unit(&mut rng, d)).collect();
        let pts = exec::map(&dirs, |u| b.boundary_point(u));
        for ch in pts.chunks_exact(2) {
            if pairs.len() == params.n_pairs {
                break;
            }
            if crate::linalg::dist(&ch[0], &ch[1]) >= min_sep {
                pairs.push((ch[0].clone(), ch[1].clone()));
            }
        }
        if pairs.len() == params.n_pairs {
            break;
        }
    }
    if pairs.len() < params.n_pairs {
        return Err(Error::Sampling(format!(
            "found {} of {} boundary pairs with separation >= {min_sep}",
            pairs.len(),
            params.n_pairs
        )));
    }
    let moduli = exec::map(&pairs, |(x, y)| 1.0 - b.p(&crate::linalg::midpoint(x, y)));
    let (worst, value) = moduli
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
    Ok(CertificateReport {
        kind: CertificateKind::Strict,
        value,
        samples: pairs.len(),
        min_separation: Some(min_sep),
        fd_step: None,
        threshold: params.floor,
        seed: params.seed,
        pass: value > params.floor,
        witness: vec![pairs[worst].0.clone(), pairs[worst].1.clone()],
    })
}

pub fn smooth_certificate(
    b: &Body,
    n_points: usize,
    n_probe_dirs: usize,
    fd_step: f64,
    seed: u64,
) -> Result<CertificateReport> {
    smooth_certificate_with(
        b,
        &SmoothParams {
            n_points,
            n_probe_dirs,
            fd_step,
            seed,
            ..Default::default()
        },
    )
}

/// `(p(x + t y) + p(x - t y) - 2 p(x)) / t`.
pub fn smooth_gap_at(b: &Body, x: &[f64], y: &[f64], fd_step: f64) -> Result<f64> {
    check_dim(b.dim(), x.len())?;
    check_dim(b.dim(), y.len())?;
    if !(fd_step > 0.0 && fd_step.is_finite()) {
        return Err(Error::InvalidParameter(format!("fd_step must be positive, got {fd_step}")));
    }
    Ok(gap(b, x, y, fd_step))
}

fn gap(b: &Body, x: &[f64], y: &[f64], t: f64) -> f64 {
    let plus: Vec<f64> = x.iter().zip(y).map(|(a, c)| a + t * c).collect();
    let minus: Vec<f64> = x.iter().zip(y).map(|(a, c)| a - t * c).collect();
    (b.p(&plus) + b.p(&minus) - 2.0 * b.p(x)) / t
}

/// Unit component of `y` orthogonal to `x`, if any.
fn tangential(y: &[f64], x: &[f64]) -> Option<Vec<f64>> {
    let c = dot(y, x) / dot(x, x);
    let v: Vec<f64> = y.iter().zip(x).map(|(a, b)| a - c * b).collect();
    (norm(&v) > 1e-9).then(|| normalized(&v)).flatten()
}

/// Directions of known corners, nudged off the corner along the sphere.
fn corner_hints(b: &Body) -> Vec<Vec<f64>> {
    let corners: Vec<Vec<f64>> = match b {
        Body::Polytope(p) => p.vertices().to_vec(),
        Body::PolarOf(inner) => match inner.as_ref() {
            Body::Polytope(p) => p.polar_vertices().unwrap_or_default(),
            _ => Vec::new(),
        },
        _ => Vec::new(),
    };
    corners
        .iter()
        .filter_map(|v| {
            let u = normalized(v)?;
            let basis = crate::linalg::tangent_basis(&u);
            let t = basis.first()?;
            normalized(&u.iter().zip(t).map(|(a, b)| a + 1e-7 * b).collect::<Vec<_>>())
        })
        .collect()
}

struct Probe {
    x: Vec<f64>,
    probes: Vec<Vec<f64>>,
}

pub fn smooth_certificate_with(b: &Body, params: &SmoothParams) -> Result<CertificateReport> {
    b.check_interior()?;
    let t_fd = params.fd_step;
    if !(t_fd > 0.0 && t_fd.is_finite()) {
        return Err(Error::InvalidParameter(format!("fd_step must be positive, got {t_fd}")));
    }
    if params.n_points == 0 {
        return Err(Error::InvalidParameter("n_points must be >= 1".into()));
    }
    let d = b.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut dirs: Vec<Vec<f64>> = (0..params.n_points).map(|_| random_unit(&mut rng, d)).collect();
    dirs.extend(corner_hints(b));
    let raw_probes: Vec<Vec<Vec<f64>>> = dirs
        .iter()
        .map(|_| (0..params.n_probe_dirs).map(|_| random_unit(&mut rng, d)).collect())
        .collect();
    let samples: Vec<Probe> = exec::map_range(dirs.len(), |i| {
        let x = b.boundary_point(&dirs[i]);
        let mut probes: Vec<Vec<f64>> = Vec::new();
        if d == 2 {
            probes.extend(normalized(&[-x[1], x[0]]));
        }
        probes.extend(raw_probes[i].iter().filter_map(|y| tangential(y, &x)));
        Probe { x, probes }
    });
    if d == 1 {
        return Ok(CertificateReport {
            kind: CertificateKind::Smooth,
            value: 0.0,
            samples: 0,
            min_separation: None,
            fd_step: Some(t_fd),
            threshold: params.ceiling,
            seed: params.seed,
            pass: true,
            witness: Vec::new(),
        });
    }
    let n_evals: usize = samples.iter().map(|s| s.probes.len()).sum();

    // Worst probe per point at the fine step and at a coarse step.
    let scale = samples.iter().map(|s| norm(&s.x)).sum::<f64>() / samples.len() as f64;
    let t0 = (1e-2 * scale).max(t_fd);
    let scored: Vec<[(f64, usize); 2]> = exec::map(&samples, |s| {
        let best = |t: f64| {
            s.probes
                .iter()
                .enumerate()
                .map(|(j, y)| (gap(b, &s.x, y, t), j))
                .fold((f64::NEG_INFINITY, 0), |a, c| if c.0 > a.0 { c } else { a })
        };
        [best(t_fd), best(t0)]
    });
    let (mut value, mut witness) = scored
        .iter()
        .enumerate()
        .fold((f64::NEG_INFINITY, Vec::new()), |acc, (i, sc)| {
            if sc[0].0 > acc.0 {
                let s = &samples[i];
                (sc[0].0, vec![s.x.clone(), s.probes[sc[0].1].clone()])
            } else {
                acc
            }
        });

    let mut order: Vec<usize> = (0..samples.len()).filter(|&i| !samples[i].probes.is_empty()).collect();
    order.sort_by(|&i, &j| scored[j][1].0.total_cmp(&scored[i][1].0).then(i.cmp(&j)));
    order.truncate(params.refine);
    let refined = exec::map(&order, |&i| {
        let s = &samples[i];
        track_kink(b, &s.x, &s.probes[scored[i][1].1], t0, t_fd)
    });
    for (v, x, y) in refined {
        if v > value {
            value = v;
            witness = vec![x, y];
        }
    }
    Ok(CertificateReport {
        kind: CertificateKind::Smooth,
        value,
        samples: n_evals,
        min_separation: None,
        fd_step: Some(t_fd),
        threshold: params.ceiling,
        seed: params.seed,
        pass: value < params.ceiling,
        witness,
    })
}

/// Continuation from step `t0` down to `t_fd`: at each step the boundary
/// point is moved to a local maximum of the gap within a few steps of
/// its previous position.
fn track_kink(b: &Body, x0: &[f64], y0: &[f64], t0: f64, t_fd: f64) -> (f64, Vec<f64>, Vec<f64>) {
    let d = x0.len();
    let mut w = normalized(x0).expect("boundary points are nonzero");
    let mut y = y0.to_vec();
    let mut t = t0;
    let probe_at = |w: &[f64], y: &[f64]| -> Option<(Vec<f64>, Vec<f64>)> {
        let x = b.boundary_point(w);
        let yy = if d == 2 {
            normalized(&[-x[1], x[0]])?
        } else {
            tangential(y, &x)?
        };
        Some((x, yy))
    };
    loop {
        let r = b.boundary_point(&w).iter().map(|v| v * v).sum::<f64>().sqrt();
        let radius = 2.0 * t / r;
        let objective = |v: &[f64]| match probe_at(v, &y) {
            Some((x, yy)) => gap(b, &x, &yy, t),
            None => f64::NEG_INFINITY,
        };
        let (w_new, _) = if d == 2 {
            sphere::refine(objective, &w, radius)
        } else {
            sphere::refine_to(objective, &w, radius, 1e-3 * radius)
        };
        w = w_new;
        if let Some((_, yy)) = probe_at(&w, &y) {
            y = yy;
        }
        if t <= t_fd {
            break;
        }
        t = (0.5 * t).max(t_fd);
    }
    match probe_at(&w, &y) {
        Some((x, yy)) => (gap(b, &x, &yy, t_fd), x, yy),
        None => (f64::NEG_INFINITY, b.boundary_point(&w), y),
    }
}

/// Subgradient selection at a boundary point: `u = w / σ(w)` for the
/// direction `w` maximizing `<w, x> / σ(w)`. Then `σ_B(u) = 1`, so
/// `<u, z> <= 1` on `B`, and `<u, x> = p(x)` at the optimum.
pub fn support_hyperplane(b: &Body, x: &[f64], grid: &DirectionGrid) -> Result<Vec<f64>> {
    check_dim(b.dim(), x.len())?;
    check_dim(b.dim(), grid.dim())?;
    let p = b.p(x);
    if (p - 1.0).abs() > 1e-6 {
        return Err(Error::NotOnBoundary { gauge: p });
    }
    let objective = |w: &[f64]| dot(w, x) / b.sigma(w);
    let vals = exec::map_range(grid.len(), |i| objective(grid.direction(i)));
    let best = vals
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |a, (i, &v)| if v > a.1 { (i, v) } else { a })
        .0;
    let (w, _) = sphere::refine(objective, grid.direction(best), 2.0 * grid.spacing());
    let s = b.sigma(&w);
    Ok(w.iter().map(|v| v / s).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossDualityReport {
    pub primal_smooth: CertificateReport,
    pub dual_strict: CertificateReport,
    pub primal_strict: CertificateReport,
    pub dual_smooth: CertificateReport,
    /// Zero when each primal/dual pair agrees on pass or fail; otherwise
    /// the smaller distance of the two values to their thresholds.
    pub violation: f64,
}

fn disagreement(strict: &CertificateReport, smooth: &CertificateReport) -> f64 {
    if strict.pass == smooth.pass {
        0.0
    } else {
        (strict.value - strict.threshold)
            .abs()
            .min((smooth.value - smooth.threshold).abs())
    }
}

/// Smoothness of `b` against strictness of its polar, and the reverse.
pub fn cross_duality_report(b: &Body, grid: &DirectionGrid) -> Result<CrossDualityReport> {
    let polar = b.polar()?;
    let strict_for = |body: &Body| -> Result<CertificateReport> {
        let sep = 0.1 * diameter(body, grid);
        strict_certificate_with(
            body,
            &StrictParams {
                min_separation: Some(sep),
                ..Default::default()
            },
        )
    };
    let smooth = SmoothParams::default();
    let primal_smooth = smooth_certificate_with(b, &smooth)?;
    let dual_strict = strict_for(&polar)?;
    let primal_strict = strict_for(b)?;
    let dual_smooth = smooth_certificate_with(&polar, &smooth)?;
    let violation = disagreement(&dual_strict, &primal_smooth)
        .max(disagreement(&primal_strict, &dual_smooth));
    Ok(CrossDualityReport {
        primal_smooth,
        dual_strict,
        primal_strict,
        dual_smooth,
        violation,
    })
}

pub fn cross_duality_check(b: &Body, grid: &DirectionGrid) -> Result<f64> {
    Ok(cross_duality_report(b, grid)?.violation)
}
