//! Named bodies used by the CLI and the test suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::body::{Body, DEFAULT_RECENTER_FRACTION};
use crate::error::{Error, Result};
use crate::linalg::{dot, normalized, scale};

pub const PRESET_NAMES: [&str; 6] = ["ball", "square", "cross", "cube", "simplex", "random-polytope"];

/// `[-1, 1]²`.
pub fn square() -> Body {
    Body::polytope(vec![
        vec![1.0, 1.0],
        vec![-1.0, 1.0],
        vec![-1.0, -1.0],
        vec![1.0, -1.0],
    ])
    .expect("square is full-dimensional")
}

/// `conv{(±1, 0), (0, ±1)}`.
pub fn cross() -> Body {
    Body::polytope(vec![
        vec![1.0, 0.0],
        vec![0.0, 1.0],
        vec![-1.0, 0.0],
        vec![0.0, -1.0],
    ])
    .expect("cross is full-dimensional")
}

/// `[-1, 1]³`.
pub fn cube() -> Body {
    let mut v = Vec::with_capacity(8);
    for k in 0..8 {
        v.push((0..3).map(|i| if k >> i & 1 == 1 { 1.0 } else { -1.0 }).collect());
    }
    Body::polytope(v).expect("cube is full-dimensional")
}

/// Regular simplex centred at the origin with circumradius 1.
pub fn simplex(dim: usize) -> Result<Body> {
    if dim == 0 {
        return Err(Error::InvalidParameter("dimension must be >= 1".into()));
    }
    let m = dim + 1;
    let centered = |i: usize| -> Vec<f64> {
        (0..m)
            .map(|k| if k == i { 1.0 } else { 0.0 } - 1.0 / m as f64)
            .collect()
    };
    // Orthonormal basis of the hyperplane orthogonal to (1, ..., 1).
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut v = centered(i);
        for b in &basis {
            let c = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        basis.push(normalized(&v).expect("independent"));
    }
    let verts: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let v = centered(i);
            let c: Vec<f64> = basis.iter().map(|b| dot(&v, b)).collect();
            let n = crate::linalg::norm(&c);
            scale(&c, 1.0 / n)
        })
        .collect();
    Body::polytope(verts)
}

/// Affine image of `n_vertices` seeded points on the sphere, recentred at
/// its Chebyshev centre. Every point is a vertex.
pub fn random_polytope(dim: usize, n_vertices: usize, seed: u64) -> Result<Body> {
    if n_vertices <= dim {
        return Err(Error::InvalidParameter(format!(
            "{n_vertices} vertices cannot span dimension {dim}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: Vec<Vec<f64>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    let z: f64 = rng.sample(StandardNormal);
                    if i == j { 1.0 + 0.2 * z } else { 0.2 * z }
                })
                .collect()
        })
        .collect();
    let shift: Vec<f64> = (0..dim).map(|_| 0.3 * rng.sample::<f64, _>(StandardNormal)).collect();
    let pts: Vec<Vec<f64>> = (0..n_vertices)
        .map(|_| loop {
            let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
            if let Some(u) = normalized(&v) {
                break a.iter().zip(&shift).map(|(row, s)| dot(row, &u) + s).collect();
            }
        })
        .collect();
    Ok(Body::polytope(pts)?.recenter(DEFAULT_RECENTER_FRACTION)?.body)
}

/// Resolves a preset name. `dim` defaults to 2 (3 for `cube`), `vertices`
/// to 12 and `radius` to 1.
pub fn preset(
    name: &str,
    dim: Option<usize>,
    seed: u64,
    vertices: Option<usize>,
    radius: Option<f64>,
) -> Result<Body> {
    let fixed = |d: usize| -> Result<()> {
        match dim {
            Some(k) if k != d => Err(Error::InvalidParameter(format!(
                "preset {name} exists in dimension {d} only"
            ))),
            _ => Ok(()),
        }
    };
    match name {
        "ball" => Body::ball(dim.unwrap_or(2), radius.unwrap_or(1.0)),
        "square" => fixed(2).map(|_| square()),
        "cross" => fixed(2).map(|_| cross()),
        "cube" => fixed(3).map(|_| cube()),
        "simplex" => simplex(dim.unwrap_or(2)),
        "random-polytope" => random_polytope(dim.unwrap_or(2), vertices.unwrap_or(12), seed),
        other => Err(Error::InvalidParameter(format!(
            "unknown preset {other:?}; expected one of {PRESET_NAMES:?}"
        ))),
    }
}
