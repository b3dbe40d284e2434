//! Gaussian kernel density estimation for score-delta samples.

use crate::error::{Error, Result};

pub const KDE_SAMPLES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bandwidth {
    /// 1.06 * sigma * n^(-1/5).
    Silverman,
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum KdeResult {
    /// All inputs equal: the density is a point mass, not a curve.
    PointMass { at: f64, n: usize },
    Curve(KdeCurve),
}

#[derive(Debug, Clone, PartialEq)]
pub struct KdeCurve {
    pub xs: Vec<f64>,
    pub densities: Vec<f64>,
    pub bandwidth: f64,
}

impl KdeCurve {
    pub fn trapezoid_integral(&self) -> f64 {
        let mut acc = 0.0;
        for i in 1..self.xs.len() {
            acc += 0.5 * (self.densities[i] + self.densities[i - 1]) * (self.xs[i] - self.xs[i - 1]);
        }
        acc
    }

    /// Density at an arbitrary point by linear interpolation of the curve.
    pub fn density_at(&self, x: f64) -> f64 {
        if x <= self.xs[0] || x >= *self.xs.last().unwrap() {
            return 0.0;
        }
        let idx = self
            .xs
            .partition_point(|&v| v < x)
            .min(self.xs.len() - 1)
            .max(1);
        let (x0, x1) = (self.xs[idx - 1], self.xs[idx]);
        let (y0, y1) = (self.densities[idx - 1], self.densities[idx]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

/// Gaussian KDE sampled at 256 evenly spaced points spanning the data range
/// extended by 3 bandwidths on each side.
pub fn kde(values: &[f64], bandwidth: Bandwidth) -> Result<KdeResult> {
    if values.len() < 2 {
        return Err(Error::stats("kde needs at least 2 values"));
    }
    let n = values.len() as f64;
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        return Ok(KdeResult::PointMass {
            at: lo,
            n: values.len(),
        });
    }
    let h = match bandwidth {
        Bandwidth::Fixed(h) if h > 0.0 => h,
        Bandwidth::Fixed(_) => return Err(Error::stats("bandwidth must be positive")),
        Bandwidth::Silverman => {
            let mean = values.iter().sum::<f64>() / n;
            let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
            1.06 * var.sqrt() * n.powf(-0.2)
        }
    };
    let start = lo - 3.0 * h;
    let end = hi + 3.0 * h;
    let step = (end - start) / (KDE_SAMPLES as f64 - 1.0);
    let norm = 1.0 / (n * h * (2.0 * std::f64::consts::PI).sqrt());
    let mut xs = Vec::with_capacity(KDE_SAMPLES);
    let mut densities = Vec::with_capacity(KDE_SAMPLES);
    for i in 0..KDE_SAMPLES {
        let x = start + step * i as f64;
        let mut acc = 0.0;
        for &v in values {
            let z = (x - v) / h;
            acc += (-0.5 * z * z).exp();
        }
        xs.push(x);
        densities.push(norm * acc);
    }
    Ok(KdeResult::Curve(KdeCurve {
        xs,
        densities,
        bandwidth: h,
    }))
}
