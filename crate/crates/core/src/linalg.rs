//! Small dense helpers on `&[f64]` coordinates.
//!
//! Everything here is sized for `d <= ~8` and a few hundred rows; nothing is
//! blocked or vectorized.

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], k: f64) -> Vec<f64> {
    a.iter().map(|x| x * k).collect()
}

/// `a + k b`
pub fn axpy(a: &[f64], k: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + k * y).collect()
}

pub fn midpoint(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect()
}

/// Unit vector along `a`, or `None` for the zero vector.
pub fn normalized(a: &[f64]) -> Option<Vec<f64>> {
    let n = norm(a);
    if n > 0.0 && n.is_finite() {
        Some(scale(a, 1.0 / n))
    } else {
        None
    }
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Solves the square system `m x = rhs` by Gaussian elimination with partial
/// pivoting. Returns `None` when a pivot falls below `1e-12` relative to the
/// largest entry of its column.
pub fn solve(m: &[Vec<f64>], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .zip(rhs)
        .map(|(row, &b)| {
            let mut r = row.clone();
            r.push(b);
            r
        })
        .collect();
    let scale_ref = a
        .iter()
        .flat_map(|r| r[..n].iter())
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= 1e-12 * scale_ref {
            return None;
        }
        a.swap(col, piv);
        for row in (col + 1)..n {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                for k in col..=n {
                    a[row][k] -= f * a[col][k];
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = ((row + 1)..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (a[row][n] - s) / a[row][row];
    }
    Some(x)
}

/// Numerical rank of a set of row vectors (Gaussian elimination, relative
/// tolerance `tol`).
pub fn rank(rows: &[Vec<f64>], tol: f64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let scale_ref = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let mut r = 0;
    for col in 0..cols {
        if r == a.len() {
            break;
        }
        let piv = (r..a.len())
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[piv][col].abs() <= tol * scale_ref {
            continue;
        }
        a.swap(r, piv);
        for row in (r + 1)..a.len() {
            let f = a[row][col] / a[r][col];
            for k in col..cols {
                a[row][k] -= f * a[r][k];
            }
        }
        r += 1;
    }
    r
}

/// A unit vector orthogonal to the `d - 1` rows of `rows` (affinely
/// independent hyperplane normal). `None` if the rows are rank deficient.
pub fn null_vector(rows: &[Vec<f64>], dim: usize) -> Option<Vec<f64>> {
    debug_assert_eq!(rows.len() + 1, dim);
    // Try each coordinate as the free variable and keep the best conditioned.
    let mut best: Option<(f64, Vec<f64>)> = None;
    for free in 0..dim {
        let m: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| (0..dim).filter(|&k| k != free).map(|k| r[k]).collect())
            .collect();
        let rhs: Vec<f64> = rows.iter().map(|r| -r[free]).collect();
        let Some(sol) = (if dim == 1 { Some(vec![]) } else { solve(&m, &rhs) }) else {
            continue;
        };
        let mut v = Vec::with_capacity(dim);
        let mut it = sol.into_iter();
        for k in 0..dim {
            v.push(if k == free { 1.0 } else { it.next().unwrap() });
        }
        let n = norm(&v);
        // A small norm means the free coordinate carries most of the vector.
        let quality = 1.0 / n;
        if best.as_ref().is_none_or(|(q, _)| quality > *q) {
            best = Some((quality, scale(&v, 1.0 / n)));
        }
    }
    best.map(|(_, v)| v)
}

/// Orthonormal basis of the tangent space at unit vector `w`.
pub fn tangent_basis(w: &[f64]) -> Vec<Vec<f64>> {
    let d = w.len();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d.saturating_sub(1));
    let mut order: Vec<usize> = (0..d).collect();
    // Start from the coordinate axes least aligned with w.
    order.sort_by(|&i, &j| w[i].abs().total_cmp(&w[j].abs()));
    for &axis in &order {
        if basis.len() + 1 == d {
            break;
        }
        let mut v = vec![0.0; d];
        v[axis] = 1.0;
        let c = dot(&v, w);
        for k in 0..d {
            v[k] -= c * w[k];
        }
        for b in &basis {
            let c = dot(&v, b);
            for k in 0..d {
                v[k] -= c * b[k];
            }
        }
        if let Some(u) = normalized(&v) {
            if norm(&v) > 1e-8 {
                basis.push(u);
            }
        }
    }
    basis
}
