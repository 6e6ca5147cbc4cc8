use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::pow_abs;

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Ratio of the two sides of the Simon inequality with the constant normalized to 1.
///
/// For `p ≥ 2` this is `(|x|^{p−2}x − |y|^{p−2}y)·(x−y) / |x−y|^p`; for `1 < p < 2` it is
/// `(|x|^{p−2}x − |y|^{p−2}y)·(x−y) · (|x|+|y|)^{2−p} / |x−y|²`. When `x = y` both sides vanish
/// and the ratio is `+∞` by convention.
pub fn simon_gap(p: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Parameter(format!("Simon exponent must exceed 1, got {p}")));
    }
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::Parameter("Simon vectors must share a positive dimension".into()));
    }
    let (nx, ny) = (norm(x), norm(y));
    if nx == 0.0 && ny == 0.0 {
        return Err(Error::Parameter("Simon pair is degenerate: both vectors vanish".into()));
    }
    if x == y {
        return Ok(f64::INFINITY);
    }
    let (wx, wy) = (pow_abs(nx, p - 2.0), pow_abs(ny, p - 2.0));
    let mut lhs = 0.0;
    let mut d2 = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        let d = a - b;
        let fx = if nx == 0.0 { 0.0 } else { wx * a };
        let fy = if ny == 0.0 { 0.0 } else { wy * b };
        lhs += (fx - fy) * d;
        d2 += d * d;
    }
    Ok(if p == 2.0 {
        lhs / d2
    } else if p > 2.0 {
        lhs / pow_abs(d2.sqrt(), p)
    } else {
        lhs * pow_abs(nx + ny, 2.0 - p) / d2
    })
}

/// Result of [`simon_sample`].
#[derive(Debug, Clone, Serialize)]
pub struct SimonSample {
    pub p: f64,
    pub dim: usize,
    pub pairs: usize,
    /// Smallest ratio observed, an empirical estimate of the best constant `C_p`.
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub argmin: (Vec<f64>, Vec<f64>),
    /// Pairs skipped because `x = y` or both vanish.
    pub excluded: usize,
}

/// Minimum of [`simon_gap`] over `pairs` seeded random pairs, uniform in `[−1, 1]^dim`.
pub fn simon_sample(p: f64, dim: usize, pairs: usize, seed: u64) -> Result<SimonSample> {
    if !(1..=3).contains(&dim) {
        return Err(Error::Parameter(format!("Simon sampler dimension must be 1, 2 or 3, got {dim}")));
    }
    if pairs == 0 {
        return Err(Error::Parameter("Simon sampler needs at least one pair".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SimonSample {
        p,
        dim,
        pairs,
        min_ratio: f64::INFINITY,
        max_ratio: f64::NEG_INFINITY,
        argmin: (Vec::new(), Vec::new()),
        excluded: 0,
    };
    let mut x = vec![0.0; dim];
    let mut y = vec![0.0; dim];
    for _ in 0..pairs {
        for v in x.iter_mut().chain(y.iter_mut()) {
            *v = rng.gen_range(-1.0..1.0);
        }
        let r = match simon_gap(p, &x, &y) {
            Ok(r) if r.is_finite() => r,
            Ok(_) => {
                out.excluded += 1;
                continue;
            }
            Err(Error::Parameter(_)) if norm(&x) == 0.0 && norm(&y) == 0.0 => {
                out.excluded += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        if r < out.min_ratio {
            out.min_ratio = r;
            out.argmin = (x.clone(), y.clone());
        }
        out.max_ratio = out.max_ratio.max(r);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_cases() {
        assert_eq!(simon_gap(3.0, &[1.0], &[0.0]).unwrap(), 1.0);
        assert_eq!(simon_gap(2.0, &[0.3, -1.2], &[2.0, 0.5]).unwrap(), 1.0);
        assert_eq!(simon_gap(1.5, &[1.0], &[1.0]).unwrap(), f64::INFINITY);
        assert!(simon_gap(1.5, &[0.0], &[0.0]).is_err());
        assert!(simon_gap(1.0, &[1.0], &[0.0]).is_err());
    }

    #[test]
    fn sampler_is_deterministic_and_positive() {
        let a = simon_sample(3.0, 3, 2000, 9).unwrap();
        let b = simon_sample(3.0, 3, 2000, 9).unwrap();
        assert_eq!(a.min_ratio, b.min_ratio);
        assert!(a.min_ratio > 0.0 && a.min_ratio <= 1.0);
        let s = simon_sample(1.5, 2, 2000, 1).unwrap();
        assert!(s.min_ratio > 0.0);
    }
}
