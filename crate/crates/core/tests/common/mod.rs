//! Reference computations that share no code with the library beyond the
//! public constructors. Everything here is brute force.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let n = norm(&v);
        if n > 1e-8 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

pub fn random_units(seed: u64, dim: usize, count: usize) -> Vec<Vec<f64>> {
    let mut r = rng(seed);
    (0..count).map(|_| random_unit(&mut r, dim)).collect()
}

/// `max_v <u, v>`.
pub fn support_of_points(points: &[Vec<f64>], u: &[f64]) -> f64 {
    points.iter().map(|v| dot(v, u)).fold(f64::NEG_INFINITY, f64::max)
}

/// Facet inequalities `<a, x> <= 1` of `conv(points)` (origin interior),
/// found by testing every `d`-subset. Only for `d = 2, 3`.
pub fn facets_brute(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let d = points[0].len();
    let n = points.len();
    let mut out: Vec<Vec<f64>> = Vec::new();
    let mut consider = |idx: &[usize]| {
        let a = match d {
            2 => {
                let (p, q) = (&points[idx[0]], &points[idx[1]]);
                vec![q[1] - p[1], p[0] - q[0]]
            }
            3 => {
                let (p, q, r) = (&points[idx[0]], &points[idx[1]], &points[idx[2]]);
                let e1: Vec<f64> = (0..3).map(|k| q[k] - p[k]).collect();
                let e2: Vec<f64> = (0..3).map(|k| r[k] - p[k]).collect();
                vec![
                    e1[1] * e2[2] - e1[2] * e2[1],
                    e1[2] * e2[0] - e1[0] * e2[2],
                    e1[0] * e2[1] - e1[1] * e2[0],
                ]
            }
            _ => unreachable!(),
        };
        let c = dot(&a, &points[idx[0]]);
        if c.abs() < 1e-12 {
            return;
        }
        let a: Vec<f64> = a.iter().map(|x| x / c).collect();
        if points.iter().all(|v| dot(&a, v) <= 1.0 + 1e-9)
            && !out.iter().any(|b| norm(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>()) < 1e-9)
        {
            out.push(a);
        }
    };
    for i in 0..n {
        for j in i + 1..n {
            if d == 2 {
                consider(&[i, j]);
            } else {
                for k in j + 1..n {
                    consider(&[i, j, k]);
                }
            }
        }
    }
    out
}

/// `max_a <a, x>` over facet normals scaled to offset one.
pub fn gauge_from_facets(facets: &[Vec<f64>], x: &[f64]) -> f64 {
    facets.iter().map(|a| dot(a, x)).fold(0.0, f64::max)
}

/// Golden-section minimum of a unimodal `g` on `[a, b]`.
pub fn golden_min(g: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (g(c), g(d));
    for _ in 0..iters {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = g(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// `(f □ g)(x) = inf_y f(x - y) + g(y)` in the plane by nested golden
/// sections over a box of half-width `radius` centred at the origin.
pub fn inf_conv_direct(
    f: &dyn Fn(&[f64]) -> f64,
    g: &dyn Fn(&[f64]) -> f64,
    x: &[f64],
    radius: f64,
) -> f64 {
    let obj = |y0: f64, y1: f64| f(&[x[0] - y0, x[1] - y1]) + g(&[y0, y1]);
    let inner = |y0: f64| golden_min(&|y1| obj(y0, y1), -radius, radius, 90).1;
    golden_min(&inner, -radius, radius, 90).1
}

/// `sup_x <u, x> - h(x)` for quadratic-homogeneous `h` in the plane: the
/// ray maximum is `<u, w>² / (4 h(w))`, maximized over the angle by a dense
/// scan and golden refinement.
pub fn conjugate_direct_2d(h: &dyn Fn(&[f64]) -> f64, u: &[f64]) -> f64 {
    let ray = |t: f64| {
        let w = [t.cos(), t.sin()];
        let a = dot(u, &w);
        if a > 0.0 {
            a * a / (4.0 * h(&w))
        } else {
            0.0
        }
    };
    let n = 4096;
    let step = std::f64::consts::TAU / n as f64;
    let (mut bt, mut bv) = (0.0, f64::NEG_INFINITY);
    for k in 0..n {
        let v = ray(step * k as f64);
        if v > bv {
            bt = step * k as f64;
            bv = v;
        }
    }
    let (_, v) = golden_min(&|t| -ray(t), bt - step, bt + step, 90);
    bv.max(-v)
}

/// Euclidean gauge of the unit ball scaled by `r`.
pub fn ball_gauge(r: f64) -> impl Fn(&[f64]) -> f64 {
    move |x: &[f64]| norm(x) / r
}

/// Uniform angular nodes in the plane.
pub fn circle(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / n as f64;
            vec![t.cos(), t.sin()]
        })
        .collect()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + b.abs())
}
