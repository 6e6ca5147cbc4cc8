use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::functionals::Nonlinearity;

const STEPS: usize = 4000;
const HEIGHT_LO: f64 = 1e-6;
const HEIGHT_HI: f64 = 1e6;

/// Positive radial solution of `u'' + ((d−1)/r) u' + f(u) = 0`, `u'(0) = 0`, `u(R) = 0`.
#[derive(Debug, Clone, Serialize)]
pub struct RadialProfile {
    pub dim: usize,
    pub radius: f64,
    /// The shooting parameter `u(0)`.
    pub height: f64,
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    #[serde(skip)]
    pub du: Vec<f64>,
    /// `Φ(u) = ∫ (½u'² − F(u)) ω_{d−1} r^{d−1} dr`; for `d = 1` the measure counts both halves.
    pub energy: f64,
}

impl RadialProfile {
    /// Linear interpolation of `u` at radius `r` (zero outside the ball).
    pub fn value_at(&self, r: f64) -> f64 {
        let r = r.abs();
        if r >= self.radius {
            return 0.0;
        }
        let h = self.radius / (self.r.len() - 1) as f64;
        let k = ((r / h) as usize).min(self.r.len() - 2);
        let w = (r - self.r[k]) / h;
        (1.0 - w) * self.u[k] + w * self.u[k + 1]
    }
}

struct Shot {
    crossed: bool,
    u: Vec<f64>,
    du: Vec<f64>,
}

/// RK4 from the series start at `r = h`; stops early at the first node with `u ≤ 0`.
fn shoot(f: &Nonlinearity, dim: usize, radius: f64, s: f64) -> Shot {
    let h = radius / STEPS as f64;
    let k = (dim - 1) as f64;
    let rhs = |r: f64, u: f64, v: f64| (v, -k / r * v - f.value(u));
    let fs = f.value(s);
    let mut u = vec![s, s - fs * h * h / (2.0 * dim as f64)];
    let mut du = vec![0.0, -fs * h / dim as f64];
    let mut crossed = !(u[1] > 0.0);
    for n in 1..STEPS {
        if crossed {
            break;
        }
        let r = n as f64 * h;
        let (y, z) = (u[n], du[n]);
        let (k1u, k1v) = rhs(r, y, z);
        let (k2u, k2v) = rhs(r + 0.5 * h, y + 0.5 * h * k1u, z + 0.5 * h * k1v);
        let (k3u, k3v) = rhs(r + 0.5 * h, y + 0.5 * h * k2u, z + 0.5 * h * k2v);
        let (k4u, k4v) = rhs(r + h, y + h * k3u, z + h * k3v);
        let next = y + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        let dnext = z + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        u.push(next);
        du.push(dnext);
        // u(R) = 0 exactly is the target, not a crossing
        crossed = if n + 1 < STEPS { !(next > 0.0) } else { !(next >= 0.0) };
    }
    Shot { crossed, u, du }
}

fn sphere_measure(dim: usize) -> f64 {
    match dim {
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 4.0 * PI,
    }
}

/// Shoots on the height `u(0) = s` with log-bisection on `[1e−6, 1e6]` until `|u(R)| ≤ tol`.
///
/// Only pure powers `f(t) = c|t|^{α−2}t` with `2 < α < 2d/(d−2)` are accepted.
pub fn radial_shooting(f: &Nonlinearity, dim: usize, radius: f64, tol: f64) -> Result<RadialProfile> {
    if !(1..=3).contains(&dim) {
        return Err(Error::Parameter(format!("oracle dimension must be 1, 2 or 3, got {dim}")));
    }
    if !(radius > 0.0 && radius.is_finite() && tol > 0.0) {
        return Err(Error::Parameter(format!("need R > 0 and tol > 0, got R = {radius}, tol = {tol}")));
    }
    let term = match f.terms() {
        [t] if t.coefficient > 0.0 => *t,
        _ => return Err(Error::Oracle("radial shooting needs a single positive power".into())),
    };
    let critical = if dim > 2 { 2.0 * dim as f64 / (dim as f64 - 2.0) } else { f64::INFINITY };
    if !(term.exponent > 2.0 && term.exponent < critical) {
        return Err(Error::Oracle(format!(
            "exponent {} is outside the subcritical window (2, {critical})",
            term.exponent
        )));
    }
    let (mut lo, mut hi) = (HEIGHT_LO, HEIGHT_HI);
    if shoot(f, dim, radius, lo).crossed || !shoot(f, dim, radius, hi).crossed {
        return Err(Error::Oracle(format!(
            "u(R; s) does not change sign for s in [{HEIGHT_LO:e}, {HEIGHT_HI:e}]"
        )));
    }
    let mut best = shoot(f, dim, radius, lo);
    while hi / lo - 1.0 > 1e-15 {
        let mid = (lo * hi).sqrt();
        let shot = shoot(f, dim, radius, mid);
        if shot.crossed {
            hi = mid;
        } else {
            lo = mid;
            let done = shot.u[STEPS].abs() <= tol;
            best = shot;
            if done {
                break;
            }
        }
    }
    let end = best.u[STEPS];
    if end.abs() > tol {
        return Err(Error::Oracle(format!("shooting stalled with |u(R)| = {:.3e} > {tol:e}", end.abs())));
    }
    let h = radius / STEPS as f64;
    let r: Vec<f64> = (0..=STEPS).map(|n| n as f64 * h).collect();
    let omega = sphere_measure(dim);
    let density: Vec<f64> = (0..=STEPS)
        .map(|n| (0.5 * best.du[n] * best.du[n] - f.primitive(best.u[n])) * omega * r[n].powi(dim as i32 - 1))
        .collect();
    let simpson = density
        .iter()
        .enumerate()
        .map(|(n, &v)| {
            let w = if n == 0 || n == STEPS {
                1.0
            } else if n % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * v
        })
        .sum::<f64>()
        * h
        / 3.0;
    Ok(RadialProfile {
        dim,
        radius,
        height: lo,
        r,
        u: best.u,
        du: best.du,
        energy: simpson,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_cubic_has_known_scaling() {
        // u'' + u³ = 0 on (−R, R): Φ scales like R^{-3} and u(0) like 1/R
        let f = Nonlinearity::pure_power(4.0).unwrap();
        let a = radial_shooting(&f, 1, 0.5, 1e-10).unwrap();
        let b = radial_shooting(&f, 1, 1.0, 1e-10).unwrap();
        assert!((a.height / b.height - 2.0).abs() < 1e-6);
        assert!((a.energy / b.energy - 8.0).abs() < 1e-5);
        assert!(a.u.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn tiny_heights_do_not_cross() {
        let f = Nonlinearity::pure_power(4.0).unwrap();
        let shot = shoot(&f, 3, 1.0, 1e-6);
        assert!(!shot.crossed && shot.u[STEPS] > 0.0);
    }

    #[test]
    fn ball_profiles_decrease() {
        let f = Nonlinearity::pure_power(4.0).unwrap();
        for d in [2, 3] {
            let p = radial_shooting(&f, d, 1.0, 1e-9).unwrap();
            assert!(p.u.windows(2).all(|w| w[1] <= w[0]));
            assert!(p.energy > 0.0);
            assert!(p.value_at(0.0) == p.height && p.value_at(1.0) == 0.0);
        }
    }

    #[test]
    fn rejects_supercritical_and_sums() {
        assert!(radial_shooting(&Nonlinearity::pure_power(7.0).unwrap(), 3, 1.0, 1e-9).is_err());
        assert!(radial_shooting(&Nonlinearity::pure_power(2.0).unwrap(), 1, 1.0, 1e-9).is_err());
    }
}
