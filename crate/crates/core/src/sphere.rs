//! Maximization of functions on the unit sphere.
//!
//! The objectives met in this crate (`<u, w> / q(w)` for a gauge `q`, gap
//! functions near a kink) have connected superlevel sets, so a coarse scan
//! followed by local refinement finds the global maximum. In the plane the
//! refinement is a golden-section search on the angle; above it a pattern
//! search on the tangent space.

use crate::linalg::{dot, normalized, tangent_basis};

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Scan resolution in the plane.
const SCAN_2D: usize = 128;
/// Scan resolution for `d = 3`.
const SCAN_3D: usize = 512;

/// Global maximum of `f` over the unit sphere in `R^dim`.
pub fn maximize<F>(dim: usize, f: F) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    match dim {
        1 => {
            let (a, b) = (f(&[1.0]), f(&[-1.0]));
            if a >= b {
                (vec![1.0], a)
            } else {
                (vec![-1.0], b)
            }
        }
        2 => {
            let step = std::f64::consts::TAU / SCAN_2D as f64;
            let mut best = (0.0, f64::NEG_INFINITY);
            for k in 0..SCAN_2D {
                let t = step * k as f64;
                let v = f(&[t.cos(), t.sin()]);
                if v > best.1 {
                    best = (t, v);
                }
            }
            golden_angle(&f, best.0, step)
        }
        _ => {
            let starts = scan_points(dim);
            let mut best: (Vec<f64>, f64) = (starts[0].clone(), f64::NEG_INFINITY);
            for w in &starts {
                let v = f(w);
                if v > best.1 {
                    best = (w.clone(), v);
                }
            }
            let step = 2.0 * (4.0 * std::f64::consts::PI / starts.len() as f64).sqrt();
            pattern_search(&f, best.0, best.1, step, 1e-13)
        }
    }
}

/// `sup_w <u, w> / q(w)` for a gauge `q`, i.e. the reciprocal of
/// `min {q(x) : <u, x> = 1}`.
///
/// In `d = 3, 4` the minimization runs on the affine hyperplane by nested
/// golden sections, which is reliable for kinked `q` because the restriction
/// of a convex function to a line is unimodal and partial minima stay convex.
/// Other dimensions use [`maximize`].
pub fn dual_gauge<Q>(u: &[f64], q: Q) -> f64
where
    Q: Fn(&[f64]) -> f64,
{
    let d = u.len();
    let nu = crate::linalg::norm(u);
    if nu == 0.0 {
        return 0.0;
    }
    if !(3..=4).contains(&d) {
        return maximize(d, |w| dot(u, w) / q(w)).1;
    }
    let starts = scan_points(d);
    let mut q_min = f64::INFINITY;
    let mut best = (f64::NEG_INFINITY, starts[0].clone());
    for w in &starts {
        let qw = q(w);
        q_min = q_min.min(qw);
        let v = dot(u, w) / qw;
        if v > best.0 {
            best = (v, w.clone());
        }
    }
    if !(best.0 > 0.0) || !(q_min > 0.0) {
        return best.0;
    }
    // q(x*) <= q(x0) and q(x) >= q_min |x| bound the minimizer.
    let x0: Vec<f64> = best.1.iter().map(|v| v / dot(u, &best.1)).collect();
    let radius = 2.0 * q(&x0) / q_min;
    let unit: Vec<f64> = u.iter().map(|v| v / nu).collect();
    let foot: Vec<f64> = unit.iter().map(|v| v / nu).collect();
    let basis = tangent_basis(&unit);
    let iters = if d == 3 { 100 } else { 60 };
    let m = nested_min(&q, &foot, &basis, &[], radius, iters);
    (1.0 / m).max(best.0)
}

fn nested_min<Q>(q: &Q, foot: &[f64], basis: &[Vec<f64>], prefix: &[f64], radius: f64, iters: usize) -> f64
where
    Q: Fn(&[f64]) -> f64,
{
    if prefix.len() == basis.len() {
        let mut x = foot.to_vec();
        for (c, b) in prefix.iter().zip(basis) {
            for k in 0..x.len() {
                x[k] += c * b[k];
            }
        }
        return q(&x);
    }
    let g = |t: f64| {
        let mut c = prefix.to_vec();
        c.push(t);
        nested_min(q, foot, basis, &c, radius, iters)
    };
    golden_iter(&g, -radius, radius, iters).1
}

/// Golden-section minimum with a fixed iteration count.
pub(crate) fn golden_iter<G>(g: &G, mut a: f64, mut b: f64, iters: usize) -> (f64, f64)
where
    G: Fn(f64) -> f64,
{
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (g(c), g(d));
    for _ in 0..iters {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = g(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Local maximum of `f` near the unit vector `start`, searching roughly
/// `radius` radians around it.
pub fn refine<F>(f: F, start: &[f64], radius: f64) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    match start.len() {
        1 => (start.to_vec(), f(start)),
        2 => golden_angle(&f, start[1].atan2(start[0]), radius),
        _ => {
            let v = f(start);
            pattern_search(&f, start.to_vec(), v, radius, 1e-13)
        }
    }
}

/// As [`refine`], stopping the spatial pattern search once its step falls
/// below `min_step`.
pub fn refine_to<F>(f: F, start: &[f64], radius: f64, min_step: f64) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    if start.len() <= 2 {
        return refine(f, start, radius);
    }
    let v = f(start);
    pattern_search(&f, start.to_vec(), v, radius, min_step)
}

/// Golden-section maximization of `t -> f(cos t, sin t)` on
/// `[center - half, center + half]`.
fn golden_angle<F>(f: &F, center: f64, half: f64) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    let g = |t: f64| f(&[t.cos(), t.sin()]);
    let (best_t, best_v) = golden_max(g, center - half, center + half, 1e-15);
    (vec![best_t.cos(), best_t.sin()], best_v)
}

/// Golden-section search for the maximum of a unimodal `g` on `[a, b]`.
/// Returns the best point visited, endpoints included.
pub fn golden_max<G>(g: G, mut a: f64, mut b: f64, xtol: f64) -> (f64, f64)
where
    G: Fn(f64) -> f64,
{
    let mut best = (a, g(a));
    let vb = g(b);
    if vb > best.1 {
        best = (b, vb);
    }
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = g(c);
    let mut fd = g(d);
    for _ in 0..200 {
        if (b - a).abs() <= xtol * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = g(d);
        }
    }
    for (t, v) in [(c, fc), (d, fd)] {
        if v > best.1 {
            best = (t, v);
        }
    }
    best
}

/// Golden-section search for the minimum of a unimodal `g` on `[a, b]`.
pub fn golden_min<G>(g: G, a: f64, b: f64, xtol: f64) -> (f64, f64)
where
    G: Fn(f64) -> f64,
{
    let (t, v) = golden_max(|t| -g(t), a, b, xtol);
    (t, -v)
}

/// Direction sets for the tangent-space pattern search. In `d = 3` a ring of
/// 16 directions, rotated every sweep; above that the signed basis plus
/// rotating pairwise diagonals.
fn pattern_search<F>(
    f: &F,
    mut w: Vec<f64>,
    mut val: f64,
    mut step: f64,
    min_step: f64,
) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    let d = w.len();
    let mut sweep = 0usize;
    while step > min_step && sweep < 4000 {
        let basis = tangent_basis(&w);
        let dirs = tangent_directions(&basis, sweep);
        let mut improved: Option<(Vec<f64>, f64)> = None;
        for t in &dirs {
            let cand: Vec<f64> = (0..d).map(|k| w[k] + step * t[k]).collect();
            let Some(cand) = normalized(&cand) else {
                continue;
            };
            let v = f(&cand);
            if v > improved.as_ref().map_or(val, |b| b.1) {
                improved = Some((cand, v));
            }
        }
        match improved {
            Some((c, v)) => {
                w = c;
                val = v;
            }
            None => step *= 0.5,
        }
        sweep += 1;
    }
    (w, val)
}

fn tangent_directions(basis: &[Vec<f64>], sweep: usize) -> Vec<Vec<f64>> {
    let m = basis.len();
    let d = basis.first().map_or(0, |b| b.len());
    let offset = 2.399_963_229_728_653 * sweep as f64;
    if m == 2 {
        return (0..16)
            .map(|k| {
                let a = offset + std::f64::consts::TAU * k as f64 / 16.0;
                let (s, c) = a.sin_cos();
                (0..d).map(|i| c * basis[0][i] + s * basis[1][i]).collect()
            })
            .collect();
    }
    let mut dirs = Vec::with_capacity(4 * m);
    for b in basis {
        dirs.push(b.clone());
        dirs.push(b.iter().map(|v| -v).collect());
    }
    for i in 0..m {
        let j = (i + 1 + sweep % (m.max(2) - 1)) % m;
        if i == j {
            continue;
        }
        let (s, c) = offset.sin_cos();
        let t: Vec<f64> = (0..d).map(|k| c * basis[i][k] + s * basis[j][k]).collect();
        dirs.push(t.iter().map(|v| -v).collect());
        dirs.push(t);
    }
    dirs
}

fn scan_points(dim: usize) -> Vec<Vec<f64>> {
    if dim == 3 {
        let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
        (0..SCAN_3D)
            .map(|i| {
                let z = 1.0 - 2.0 * (i as f64 + 0.5) / SCAN_3D as f64;
                let r = (1.0 - z * z).sqrt();
                let phi = golden * i as f64;
                vec![r * phi.cos(), r * phi.sin(), z]
            })
            .collect()
    } else {
        crate::grid::DirectionGrid::new(dim, 128 * dim, 0x5eed)
            .expect("valid scan grid")
            .iter()
            .map(|w| w.to_vec())
            .collect()
    }
}
