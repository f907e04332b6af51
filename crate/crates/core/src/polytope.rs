//! V-polytopes with their facet description.
//!
//! The plane uses Andrew's monotone chain. For `d >= 3` facets are found by
//! enumerating affinely independent `d`-subsets of vertices and keeping the
//! supporting hyperplanes; this is exact but combinatorial, so vertex counts
//! are capped.

use crate::error::{Error, Result};
use crate::linalg::{dot, norm, null_vector, rank, solve, sub};

/// Largest number of `d`-subsets the brute-force facet enumeration visits.
const MAX_SUBSETS: u64 = 4_000_000;

/// Closed half-space `<normal, x> <= offset` with unit `normal`.
#[derive(Clone, Debug, PartialEq)]
pub struct Facet {
    pub normal: Vec<f64>,
    pub offset: f64,
}

/// Convex hull of finitely many points in `R^d`, full-dimensional.
#[derive(Clone, Debug, PartialEq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    facets: Vec<Facet>,
}

impl Polytope {
    /// Hull of `points`. Non-extreme points are dropped. Fails on empty,
    /// non-finite or lower-dimensional input.
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::Degenerate("polytope needs at least one vertex".into()));
        };
        let dim = first.len();
        if dim == 0 {
            return Err(Error::Degenerate("zero-dimensional vertices".into()));
        }
        for p in &points {
            crate::error::check_dim(dim, p.len())?;
            crate::error::check_finite("vertex", p)?;
        }
        let scale = points
            .iter()
            .flat_map(|p| p.iter())
            .fold(0.0f64, |a, v| a.max(v.abs()))
            .max(1e-300);
        let diffs: Vec<Vec<f64>> = points.iter().skip(1).map(|p| sub(p, first)).collect();
        if points.len() <= dim || rank(&diffs, 1e-10) < dim {
            return Err(Error::Degenerate(format!(
                "vertices do not span a {dim}-dimensional body"
            )));
        }
        let (vertices, facets) = match dim {
            1 => hull_1d(&points),
            2 => hull_2d(&points),
            _ => hull_brute(&points, dim, scale)?,
        };
        Ok(Self {
            dim,
            vertices,
            facets,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// `max_v <u, v>`.
    pub fn support(&self, u: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|v| dot(u, v))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Minkowski gauge about the origin. Only meaningful when the origin is
    /// interior, i.e. every facet offset is positive.
    pub fn gauge(&self, x: &[f64]) -> f64 {
        self.facets
            .iter()
            .map(|f| dot(&f.normal, x) / f.offset)
            .fold(0.0, f64::max)
    }

    /// Radius of the largest ball about the origin inside the polytope
    /// (negative when the origin is outside).
    pub fn inradius_about_origin(&self) -> f64 {
        self.facets
            .iter()
            .map(|f| f.offset)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn circumradius_about_origin(&self) -> f64 {
        self.vertices.iter().map(|v| norm(v)).fold(0.0, f64::max)
    }

    pub fn contains_origin_interior(&self) -> bool {
        self.inradius_about_origin() > 0.0
    }

    pub fn translate(&self, t: &[f64]) -> Polytope {
        let vertices = self
            .vertices
            .iter()
            .map(|v| v.iter().zip(t).map(|(a, b)| a + b).collect())
            .collect();
        let facets = self
            .facets
            .iter()
            .map(|f| Facet {
                normal: f.normal.clone(),
                offset: f.offset + dot(&f.normal, t),
            })
            .collect();
        Polytope {
            dim: self.dim,
            vertices,
            facets,
        }
    }

    pub fn scaled(&self, k: f64) -> Polytope {
        Polytope {
            dim: self.dim,
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().map(|x| x * k).collect())
                .collect(),
            facets: self
                .facets
                .iter()
                .map(|f| Facet {
                    normal: f.normal.clone(),
                    offset: f.offset * k,
                })
                .collect(),
        }
    }

    /// Vertices of the polar `{u : <u, v> <= 1 for all vertices v}`, i.e. the
    /// facet normals rescaled to `<a, x> <= 1` form.
    pub fn polar_vertices(&self) -> Result<Vec<Vec<f64>>> {
        if !self.contains_origin_interior() {
            return Err(Error::Domain(
                "polar requires the origin in the interior".into(),
            ));
        }
        Ok(self
            .facets
            .iter()
            .map(|f| f.normal.iter().map(|a| a / f.offset).collect())
            .collect())
    }

    /// Center and radius of a largest inscribed Euclidean ball.
    ///
    /// In `d <= 3` every `(d+1)`-subset of facets is solved as a square system
    /// and the feasible solutions with maximal radius are averaged (the
    /// optimal set is convex, so the average is optimal too). Larger
    /// dimensions go through a linear program.
    pub fn chebyshev_center(&self) -> Result<(Vec<f64>, f64)> {
        if self.dim <= 3 {
            self.chebyshev_brute()
        } else {
            self.chebyshev_lp()
        }
    }

    fn chebyshev_brute(&self) -> Result<(Vec<f64>, f64)> {
        let d = self.dim;
        let m = self.facets.len();
        let mut best_r = f64::NEG_INFINITY;
        let mut best: Vec<Vec<f64>> = Vec::new();
        let scale = self.circumradius_about_origin().max(1.0);
        for subset in Combinations::new(m, d + 1) {
            let rows: Vec<Vec<f64>> = subset
                .iter()
                .map(|&i| {
                    let mut r = self.facets[i].normal.clone();
                    r.push(1.0);
                    r
                })
                .collect();
            let rhs: Vec<f64> = subset.iter().map(|&i| self.facets[i].offset).collect();
            let Some(sol) = solve(&rows, &rhs) else {
                continue;
            };
            let r = sol[d];
            if r <= 0.0 {
                continue;
            }
            let c = &sol[..d];
            let feasible = self
                .facets
                .iter()
                .all(|f| dot(&f.normal, c) + r <= f.offset + 1e-10 * scale);
            if !feasible {
                continue;
            }
            if r > best_r + 1e-12 * scale {
                best_r = r;
                best.clear();
                best.push(c.to_vec());
            } else if (r - best_r).abs() <= 1e-12 * scale {
                best.push(c.to_vec());
            }
        }
        if best.is_empty() {
            return Err(Error::Degenerate("no inscribed ball found".into()));
        }
        let k = best.len() as f64;
        let mut center = vec![0.0; d];
        for c in &best {
            for (a, b) in center.iter_mut().zip(c) {
                *a += b / k;
            }
        }
        let radius = self
            .facets
            .iter()
            .map(|f| f.offset - dot(&f.normal, &center))
            .fold(f64::INFINITY, f64::min);
        Ok((center, radius))
    }

    fn chebyshev_lp(&self) -> Result<(Vec<f64>, f64)> {
        use microlp::{ComparisonOp, OptimizationDirection, Problem};
        let mut p = Problem::new(OptimizationDirection::Maximize);
        let xs: Vec<_> = (0..self.dim)
            .map(|_| p.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY)))
            .collect();
        let r = p.add_var(1.0, (0.0, f64::INFINITY));
        for f in &self.facets {
            let mut expr: Vec<_> = xs.iter().zip(&f.normal).map(|(&v, &a)| (v, a)).collect();
            expr.push((r, 1.0));
            p.add_constraint(expr.as_slice(), ComparisonOp::Le, f.offset);
        }
        let sol = p
            .solve()
            .map_err(|e| Error::Lp(e.to_string()))?
            .into_solution()
            .map_err(|_| Error::Lp("interrupted".into()))?;
        let center: Vec<f64> = xs.iter().map(|&v| sol.var_value(v)).collect();
        Ok((center, sol.var_value(r)))
    }
}

fn hull_1d(points: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<Facet>) {
    let lo = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
    (
        vec![vec![lo], vec![hi]],
        vec![
            Facet {
                normal: vec![-1.0],
                offset: -lo,
            },
            Facet {
                normal: vec![1.0],
                offset: hi,
            },
        ],
    )
}

fn cross2(o: &[f64], a: &[f64], b: &[f64]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Counter-clockwise hull without collinear points.
pub(crate) fn hull_2d(points: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<Facet>) {
    hull_2d_tol(points, 1e-14)
}

/// As [`hull_2d`], treating turns with cross product below
/// `rel_eps · scale²` as collinear.
pub(crate) fn hull_2d_tol(points: &[Vec<f64>], rel_eps: f64) -> (Vec<Vec<f64>>, Vec<Facet>) {
    let mut pts: Vec<&Vec<f64>> = points.iter().collect();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup_by(|a, b| a[0] == b[0] && a[1] == b[1]);
    let scale = pts
        .iter()
        .flat_map(|p| p.iter())
        .fold(0.0f64, |a, v| a.max(v.abs()));
    let eps = rel_eps * scale * scale;
    let mut lower: Vec<&Vec<f64>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross2(lower[lower.len() - 2], lower[lower.len() - 1], p) <= eps
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<&Vec<f64>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross2(upper[upper.len() - 2], upper[upper.len() - 1], p) <= eps
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let vertices: Vec<Vec<f64>> = lower.into_iter().cloned().collect();
    let n = vertices.len();
    let facets = (0..n)
        .map(|i| {
            let a = &vertices[i];
            let b = &vertices[(i + 1) % n];
            let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
            let len = dx.hypot(dy);
            let normal = vec![dy / len, -dx / len];
            let offset = 0.5 * (dot(&normal, a) + dot(&normal, b));
            Facet { normal, offset }
        })
        .collect();
    (vertices, facets)
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u64) / (i as u64 + 1);
    }
    acc
}

fn hull_brute(
    points: &[Vec<f64>],
    dim: usize,
    scale: f64,
) -> Result<(Vec<Vec<f64>>, Vec<Facet>)> {
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(points.len());
    for p in points {
        if !pts.iter().any(|q| crate::linalg::dist(p, q) <= 1e-14 * scale) {
            pts.push(p.clone());
        }
    }
    if binomial(pts.len(), dim) > MAX_SUBSETS {
        return Err(Error::Unsupported(format!(
            "{} vertices in dimension {dim} exceed the exact facet enumeration limit",
            pts.len()
        )));
    }
    let tol = 1e-10 * scale;
    let mut facets: Vec<Facet> = Vec::new();
    for subset in Combinations::new(pts.len(), dim) {
        let base = &pts[subset[0]];
        let rows: Vec<Vec<f64>> = subset[1..].iter().map(|&i| sub(&pts[i], base)).collect();
        if rank(&rows, 1e-10) < dim - 1 {
            continue;
        }
        let Some(mut normal) = null_vector(&rows, dim) else {
            continue;
        };
        let offset = dot(&normal, base);
        let (mut above, mut below) = (false, false);
        for p in &pts {
            let s = dot(&normal, p) - offset;
            above |= s > tol;
            below |= s < -tol;
            if above && below {
                break;
            }
        }
        if above && below {
            continue;
        }
        if above {
            normal.iter_mut().for_each(|v| *v = -*v);
        }
        // Refit the offset as the max over all points to absorb rounding.
        let offset = pts
            .iter()
            .map(|p| dot(&normal, p))
            .fold(f64::NEG_INFINITY, f64::max);
        let duplicate = facets.iter().any(|f| {
            crate::linalg::dist(&f.normal, &normal) < 1e-9 && (f.offset - offset).abs() < 1e-9 * scale
        });
        if !duplicate {
            facets.push(Facet { normal, offset });
        }
    }
    let vertices: Vec<Vec<f64>> = pts
        .iter()
        .filter(|p| {
            let active: Vec<Vec<f64>> = facets
                .iter()
                .filter(|f| (dot(&f.normal, p) - f.offset).abs() <= tol)
                .map(|f| f.normal.clone())
                .collect();
            rank(&active, 1e-9) == dim
        })
        .cloned()
        .collect();
    Ok((vertices, facets))
}

/// Lexicographic `k`-subsets of `0..n`.
pub(crate) struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            idx: (0..k).collect(),
            done: k > n || k == 0,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}
