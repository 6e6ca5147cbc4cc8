use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::{Field, Grid};

const MAX_DRAWS: usize = 64;

/// The Dirichlet sine mode `∏ sin(π k_i x_i / L_i)`; missing wave numbers default to 1.
pub fn sine_mode(grid: &Arc<Grid>, k: &[usize]) -> Field {
    let extents = grid.extents().to_vec();
    let k: Vec<f64> = (0..grid.dim()).map(|a| k.get(a).copied().unwrap_or(1) as f64).collect();
    Field::from_fn(grid.clone(), |x| {
        x.iter()
            .zip(&k)
            .zip(&extents)
            .map(|((&xi, &ki), &l)| (PI * ki * xi / l).sin())
            .product()
    })
    .expect("sine modes are finite")
}

/// Seeded superposition of the first `modes` sine modes per axis with coefficients in `[−1, 1]`.
///
/// With `nonnegative` the absolute value is taken. The result is never identically zero: a zero
/// draw is resampled, and as a last resort the fundamental mode is returned. The field is not
/// normalized.
pub fn random_init(grid: &Arc<Grid>, seed: u64, modes: usize, nonnegative: bool) -> Field {
    let modes = modes.max(1);
    let dim = grid.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis: Vec<(Vec<usize>, Field)> = (0..modes.pow(dim as u32))
        .map(|mut m| {
            let k: Vec<usize> = (0..dim)
                .map(|_| {
                    let ki = m % modes + 1;
                    m /= modes;
                    ki
                })
                .collect();
            let f = sine_mode(grid, &k);
            (k, f)
        })
        .collect();
    for _ in 0..MAX_DRAWS {
        let mut values = vec![0.0; grid.node_count()];
        for (_, mode) in &basis {
            let c: f64 = rng.gen_range(-1.0..=1.0);
            for (v, &m) in values.iter_mut().zip(mode.values()) {
                *v += c * m;
            }
        }
        if nonnegative {
            values.iter_mut().for_each(|v| *v = v.abs());
        }
        let field = Field::new(grid.clone(), values).expect("finite superposition");
        if !field.is_zero() {
            return field;
        }
    }
    sine_mode(grid, &[1, 1, 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_nonzero() {
        let g = Grid::build(2, &[1.0, 2.0], &[9, 12]).unwrap().shared();
        let a = random_init(&g, 11, 3, true);
        let b = random_init(&g, 11, 3, true);
        assert_eq!(a.values(), b.values());
        assert!(!a.is_zero());
        assert!(a.values().iter().all(|&v| v >= 0.0));
        assert_ne!(random_init(&g, 12, 3, true).values(), a.values());
        assert!(random_init(&g, 5, 2, false).values().iter().any(|&v| v < 0.0));
    }

    #[test]
    fn fundamental_mode() {
        let g = Grid::build(1, &[2.0], &[3]).unwrap().shared();
        let m = sine_mode(&g, &[1]);
        // nodes at 0.5, 1, 1.5
        assert!((m.values()[1] - 1.0).abs() < 1e-15);
        assert!((m.values()[0] - (PI / 4.0).sin()).abs() < 1e-15);
    }
}
