//! Periodic cubic spline on a uniform angular grid of the circle.

use crate::error::{check_finite, Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct AngularTable {
    values: Vec<f64>,
    /// Second derivatives at the nodes, with respect to the angle.
    curvature: Vec<f64>,
}

impl AngularTable {
    /// Interpolates `values[k]` at angle `2πk/n`.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        if n < 4 {
            return Err(Error::InvalidParameter(format!(
                "angular table needs at least 4 nodes, got {n}"
            )));
        }
        check_finite("table values", &values)?;
        let h = std::f64::consts::TAU / n as f64;
        let rhs: Vec<f64> = (0..n)
            .map(|k| {
                let prev = values[(k + n - 1) % n];
                let next = values[(k + 1) % n];
                6.0 * (next - 2.0 * values[k] + prev) / (h * h)
            })
            .collect();
        // M[k-1] + 4 M[k] + M[k+1] = rhs[k]; strictly diagonally dominant, so
        // Gauss-Seidel contracts by at least 1/2 per sweep.
        let mut m: Vec<f64> = rhs.iter().map(|r| r / 6.0).collect();
        let scale = rhs.iter().fold(0.0f64, |a, r| a.max(r.abs())).max(1e-300);
        for _ in 0..200 {
            let mut change = 0.0f64;
            for k in 0..n {
                let v = (rhs[k] - m[(k + n - 1) % n] - m[(k + 1) % n]) / 4.0;
                change = change.max((v - m[k]).abs());
                m[k] = v;
            }
            if change <= 1e-16 * scale {
                break;
            }
        }
        Ok(Self {
            values,
            curvature: m,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn scaled(&self, k: f64) -> AngularTable {
        AngularTable {
            values: self.values.iter().map(|v| v * k).collect(),
            curvature: self.curvature.iter().map(|v| v * k).collect(),
        }
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let n = self.values.len();
        let h = std::f64::consts::TAU / n as f64;
        let s = theta.rem_euclid(std::f64::consts::TAU) / h;
        let k = (s.floor() as usize).min(n - 1);
        let t = s - k as f64;
        let j = (k + 1) % n;
        let u = 1.0 - t;
        u * self.values[k]
            + t * self.values[j]
            + h * h / 6.0 * ((u * u * u - u) * self.curvature[k] + (t * t * t - t) * self.curvature[j])
    }
}
