//! Deterministic, antipodally symmetric samplings of the unit sphere.
//!
//! In the plane the grid is the exact uniform angular grid `2πk/n`. In three
//! dimensions it is a Fibonacci lattice on the upper hemisphere together with
//! its antipodes, rotated by a seeded random rotation. Above three dimensions
//! it is a seeded Gaussian sample plus antipodes.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm};

/// Default grid size in the plane.
pub const DEFAULT_N_2D: usize = 720;
/// Default grid size for `d >= 3`.
pub const DEFAULT_N_HIGH: usize = 2048;

/// Serialized form of a grid: `{"n": int, "seed": int}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
}

impl GridSpec {
    pub fn new(n: usize, seed: u64) -> Self {
        Self { n, seed }
    }

    pub fn default_for(dim: usize) -> Self {
        Self {
            n: default_size(dim),
            seed: 0,
        }
    }

    pub fn build(&self, dim: usize) -> Result<DirectionGrid> {
        DirectionGrid::new(dim, self.n, self.seed)
    }
}

pub fn default_size(dim: usize) -> usize {
    if dim <= 2 {
        DEFAULT_N_2D
    } else {
        DEFAULT_N_HIGH
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DirectionGrid {
    dim: usize,
    seed: u64,
    coords: Vec<f64>,
}

impl DirectionGrid {
    /// Builds a grid of `n` unit directions in dimension `dim`.
    ///
    /// `n` must be even (antipodal symmetry) and at least `2 * dim`.
    pub fn new(dim: usize, n: usize, seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be >= 1".into()));
        }
        if n % 2 != 0 || n < 2 * dim {
            return Err(Error::InvalidParameter(format!(
                "grid size {n} must be even and at least {}",
                2 * dim
            )));
        }
        let coords = match dim {
            1 => {
                if n != 2 {
                    return Err(Error::InvalidParameter(
                        "the only symmetric grid in dimension 1 has 2 directions".into(),
                    ));
                }
                vec![1.0, -1.0]
            }
            2 => (0..n)
                .flat_map(|k| {
                    let t = std::f64::consts::TAU * k as f64 / n as f64;
                    [t.cos(), t.sin()]
                })
                .collect(),
            3 => fibonacci_3d(n / 2, seed),
            _ => gaussian_symmetric(dim, n / 2, seed),
        };
        Ok(Self { dim, seed, coords })
    }

    pub fn default_for(dim: usize) -> Self {
        Self::new(dim, default_size(dim), 0).expect("default grid parameters are valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn spec(&self) -> GridSpec {
        GridSpec::new(self.len(), self.seed)
    }

    pub fn direction(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    /// Index of a grid direction equal to `u / |u|` up to `1e-13`, if any.
    pub fn find(&self, u: &[f64]) -> Option<usize> {
        let n = norm(u);
        if n == 0.0 {
            return None;
        }
        if self.dim == 2 {
            let m = self.len() as f64;
            let t = u[1].atan2(u[0]).rem_euclid(std::f64::consts::TAU) * m
                / std::f64::consts::TAU;
            let k = t.round();
            if (t - k).abs() > 1e-9 {
                return None;
            }
            let k = (k as usize) % self.len();
            let c = dot(self.direction(k), u) / n;
            return (c > 1.0 - 1e-13).then_some(k);
        }
        self.iter()
            .position(|w| dot(w, u) / n > 1.0 - 1e-13)
    }

    /// Typical angular spacing between neighbouring directions.
    pub fn spacing(&self) -> f64 {
        let n = self.len() as f64;
        match self.dim {
            1 => std::f64::consts::PI,
            2 => std::f64::consts::TAU / n,
            d => {
                // Surface area of S^{d-1} divided among n points.
                let area = 2.0 * std::f64::consts::PI.powf(d as f64 / 2.0)
                    / gamma_half_integer(d);
                (area / n).powf(1.0 / (d as f64 - 1.0))
            }
        }
    }
}

/// `Γ(d/2)` for positive integers `d`.
fn gamma_half_integer(d: usize) -> f64 {
    if d % 2 == 0 {
        (1..d / 2).map(|k| k as f64).product()
    } else {
        let mut g = std::f64::consts::PI.sqrt();
        let mut x = 0.5;
        while x < d as f64 / 2.0 - 0.25 {
            g *= x;
            x += 1.0;
        }
        g
    }
}

fn fibonacci_3d(m: usize, seed: u64) -> Vec<f64> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let rot = random_rotation_3d(seed);
    let mut out = Vec::with_capacity(6 * m);
    let mut lower = Vec::with_capacity(3 * m);
    for i in 0..m {
        let z = 1.0 - (i as f64 + 0.5) / m as f64;
        let r = (1.0 - z * z).sqrt();
        let phi = golden * i as f64;
        let p = [r * phi.cos(), r * phi.sin(), z];
        let q = apply(&rot, &p);
        let n = norm(&q);
        out.extend(q.iter().map(|v| v / n));
        lower.extend(q.iter().map(|v| -v / n));
    }
    out.extend(lower);
    out
}

fn apply(m: &[[f64; 3]; 3], p: &[f64; 3]) -> [f64; 3] {
    [dot(&m[0], p), dot(&m[1], p), dot(&m[2], p)]
}

/// Rotation matrix from a seeded uniformly random unit quaternion.
fn random_rotation_3d(seed: u64) -> [[f64; 3]; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = [0.0f64; 4];
    for v in q.iter_mut() {
        *v = StandardNormal.sample(&mut rng);
    }
    let n = norm(&q);
    let [w, x, y, z] = q.map(|v| v / n);
    [
        [
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
        ],
        [
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
        ],
        [
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        ],
    ]
}

fn gaussian_symmetric(dim: usize, m: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut upper = Vec::with_capacity(dim * m);
    while upper.len() < dim * m {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        let n = norm(&v);
        if n > 1e-6 {
            upper.extend(v.iter().map(|x| x / n));
        }
    }
    let lower: Vec<f64> = upper.iter().map(|x| -x).collect();
    upper.extend(lower);
    upper
}
