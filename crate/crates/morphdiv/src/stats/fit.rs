//! Least-squares quadratic fit via the normal equations.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl QuadraticFit {
    /// x-coordinate of the parabola's extremum; None for a (near-)degenerate
    /// leading coefficient.
    pub fn vertex(&self) -> Option<f64> {
        if self.a.abs() < 1e-12 {
            None
        } else {
            Some(-self.b / (2.0 * self.a))
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.a * x + self.b) * x + self.c
    }
}

/// Fits y = a*x^2 + b*x + c by least squares. Requires at least three
/// distinct x values; a rank-deficient design is an error.
pub fn quadratic_fit(x: &[f64], y: &[f64]) -> Result<QuadraticFit> {
    if x.len() != y.len() {
        return Err(Error::stats(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    let mut distinct: Vec<f64> = x.to_vec();
    distinct.sort_by(|a, b| a.partial_cmp(b).expect("finite x"));
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::stats(
            "quadratic fit needs at least 3 distinct x values",
        ));
    }
    // Normal equations A^T A beta = A^T y with columns [x^2, x, 1].
    let n = x.len() as f64;
    let (mut s1, mut s2, mut s3, mut s4) = (0.0, 0.0, 0.0, 0.0);
    let (mut t0, mut t1, mut t2) = (0.0, 0.0, 0.0);
    for (&xi, &yi) in x.iter().zip(y) {
        let x2 = xi * xi;
        s1 += xi;
        s2 += x2;
        s3 += x2 * xi;
        s4 += x2 * x2;
        t0 += yi;
        t1 += xi * yi;
        t2 += x2 * yi;
    }
    let mut m = [[s4, s3, s2, t2], [s3, s2, s1, t1], [s2, s1, n, t0]];
    let beta = solve3(&mut m)?;
    Ok(QuadraticFit {
        a: beta[0],
        b: beta[1],
        c: beta[2],
    })
}

/// Gaussian elimination with partial pivoting on a 3x4 augmented matrix.
fn solve3(m: &mut [[f64; 4]; 3]) -> Result<[f64; 3]> {
    let scale = m
        .iter()
        .flat_map(|row| row[..3].iter())
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    for col in 0..3 {
        let pivot_row = (col..3)
            .max_by(|&i, &j| {
                m[i][col]
                    .abs()
                    .partial_cmp(&m[j][col].abs())
                    .expect("finite matrix")
            })
            .unwrap();
        m.swap(col, pivot_row);
        let pivot = m[col][col];
        if pivot.abs() <= scale * 1e-12 {
            return Err(Error::stats("rank-deficient design (collinear x values)"));
        }
        for row in (col + 1)..3 {
            let factor = m[row][col] / pivot;
            for k in col..4 {
                m[row][k] -= factor * m[col][k];
            }
        }
    }
    let mut beta = [0.0f64; 3];
    for row in (0..3).rev() {
        let mut acc = m[row][3];
        for k in (row + 1)..3 {
            acc -= m[row][k] * beta[k];
        }
        beta[row] = acc / m[row][row];
    }
    Ok(beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_parabola_is_interpolated() {
        let x = vec![0.0, 0.25, 0.5, 0.75, 1.0];
        let y: Vec<f64> = x.iter().map(|&v| -(v - 0.5) * (v - 0.5) + 0.1).collect();
        let fit = quadratic_fit(&x, &y).unwrap();
        assert!((fit.a + 1.0).abs() < 1e-9, "{fit:?}");
        assert!((fit.vertex().unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn constant_series_fits_mean() {
        let x = vec![1.0, 2.0, 3.0, 4.0];
        let y = vec![5.0, 5.0, 5.0, 5.0];
        let fit = quadratic_fit(&x, &y).unwrap();
        assert!(fit.a.abs() < 1e-9);
        assert!(fit.b.abs() < 1e-9);
        assert!((fit.c - 5.0).abs() < 1e-9);
        assert!(fit.vertex().is_none());
    }

    #[test]
    fn too_few_distinct_x_is_error() {
        let x = vec![1.0, 1.0, 2.0, 2.0];
        let y = vec![1.0, 1.0, 2.0, 2.0];
        assert!(quadratic_fit(&x, &y).is_err());
    }

    #[test]
    fn noisy_planted_parabola_recovers_vertex() {
        // Deterministic low-amplitude "noise" on a planted parabola.
        let planted_vertex = 0.42;
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..50 {
            let xi = i as f64 / 49.0;
            let noise = 0.01 * ((i * 2654435761u64 as usize % 100) as f64 / 100.0 - 0.5);
            x.push(xi);
            y.push(-2.0 * (xi - planted_vertex) * (xi - planted_vertex) + 0.3 + noise);
        }
        let fit = quadratic_fit(&x, &y).unwrap();
        assert!((fit.vertex().unwrap() - planted_vertex).abs() < 0.05);
    }
}
