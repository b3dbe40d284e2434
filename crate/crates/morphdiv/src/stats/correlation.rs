//! Pearson and Kendall rank correlation with two-sided p-values.

use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

use crate::error::{Error, Result};

fn check_lengths(x: &[f64], y: &[f64]) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::stats(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 3 {
        return Err(Error::stats("need at least 3 observations"));
    }
    Ok(x.len())
}

/// Sample Pearson correlation with a two-sided p-value from the t
/// distribution with n-2 degrees of freedom.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let n = check_lengths(x, y)?;
    let mean_x = x.iter().sum::<f64>() / n as f64;
    let mean_y = y.iter().sum::<f64>() / n as f64;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for i in 0..n {
        let dx = x[i] - mean_x;
        let dy = y[i] - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::stats("zero variance in input series"));
    }
    let r = (sxy / sxx.sqrt() / syy.sqrt()).clamp(-1.0, 1.0);
    let p = if 1.0 - r * r <= 0.0 {
        0.0
    } else {
        let t = r * ((n as f64 - 2.0) / (1.0 - r * r)).sqrt();
        let dist = StudentsT::new(0.0, 1.0, n as f64 - 2.0)
            .map_err(|e| Error::stats(e.to_string()))?;
        2.0 * dist.sf(t.abs())
    };
    Ok((r, p))
}

/// Kendall tau-b with tie correction and a two-sided p-value from the
/// normal approximation z = 3*tau*sqrt(n(n-1)) / sqrt(2(2n+5)). The
/// approximation quality for small n is checked against exhaustive
/// permutation enumeration in the tests.
pub fn kendall_tau(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let n = check_lengths(x, y)?;
    let mut concordant = 0u64;
    let mut discordant = 0u64;
    let mut ties_x = 0u64; // pairs tied in x (including jointly tied)
    let mut ties_y = 0u64;
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = (x[i] - x[j]).partial_cmp(&0.0).ok_or_else(|| {
                Error::stats("NaN in input series")
            })?;
            let dy = (y[i] - y[j]).partial_cmp(&0.0).ok_or_else(|| {
                Error::stats("NaN in input series")
            })?;
            use std::cmp::Ordering::Equal;
            match (dx == Equal, dy == Equal) {
                (true, true) => {
                    ties_x += 1;
                    ties_y += 1;
                }
                (true, false) => ties_x += 1,
                (false, true) => ties_y += 1,
                (false, false) => {
                    if dx == dy {
                        concordant += 1;
                    } else {
                        discordant += 1;
                    }
                }
            }
        }
    }
    let n0 = (n * (n - 1) / 2) as f64;
    let denom_x = n0 - ties_x as f64;
    let denom_y = n0 - ties_y as f64;
    if denom_x == 0.0 || denom_y == 0.0 {
        return Err(Error::stats("all-tied series"));
    }
    let tau = (concordant as f64 - discordant as f64) / denom_x.sqrt() / denom_y.sqrt();
    let z = 3.0 * tau * (n as f64 * (n as f64 - 1.0)).sqrt() / (2.0 * (2.0 * n as f64 + 5.0)).sqrt();
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let p = 2.0 * normal.sf(z.abs());
    Ok((tau, p))
}
