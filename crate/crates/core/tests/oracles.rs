//! Frozen values from closed forms, computed outside the crate.
//!
//! For `u'' + u³ = 0` on `(−L, L)` with `u(±L) = 0` the height is `s = √2 K / L` and the energy
//! `Φ = (√2/4) s³ E`, where `K = ∫₀¹ (1 − v⁴)^{−1/2} dv` and `E = ∫₀¹ (1 − v⁴)^{1/2} dv`
//! (mpmath quadrature at 30 digits).

use nehari::functionals::{Functional, Nonlinearity, QuasilinearOperator};
use nehari::grid::Grid;
use nehari::solver::{minimize, multi_start, random_init, SolveOptions};
use nehari::verify::{radial_shooting, simon_gap};

const HEIGHT_HALF: f64 = 3.708_149_354_602_744;
const ENERGY_HALF: f64 = 15.756_060_010_769_487;
/// `c` of the default 2D run (n = 64, seed 0), a regression baseline rather than ground truth.
const C_SQUARE_64: f64 = 37.737_476_70;

fn semilinear(dim: usize, n: usize) -> Functional {
    let g = Grid::build(dim, &vec![1.0; dim], &vec![n; dim]).unwrap().shared();
    Functional::new(
        QuasilinearOperator::laplacian(2.0).unwrap().into(),
        Nonlinearity::pure_power(4.0).unwrap(),
        g,
    )
    .unwrap()
}

#[test]
fn shooting_matches_the_elliptic_integral() {
    let p = radial_shooting(&Nonlinearity::pure_power(4.0).unwrap(), 1, 0.5, 1e-11).unwrap();
    assert!((p.height - HEIGHT_HALF).abs() <= 1e-8 * HEIGHT_HALF, "{}", p.height);
    assert!((p.energy - ENERGY_HALF).abs() <= 1e-7 * ENERGY_HALF, "{}", p.energy);
}

#[test]
fn solver_matches_the_elliptic_integral() {
    let f = semilinear(1, 400);
    let r = minimize(&f, &random_init(f.grid(), 0, 3, true), &SolveOptions::default()).unwrap();
    assert!(r.converged);
    assert!((r.c_value - ENERGY_HALF).abs() <= 1e-4 * ENERGY_HALF, "{}", r.c_value);
    assert!((r.ground_state.max_abs() - HEIGHT_HALF).abs() <= 1e-3 * HEIGHT_HALF);
}

#[test]
fn resolution_stability() {
    for (dim, n) in [(1, 50), (2, 24)] {
        let opts = SolveOptions::default();
        let coarse = semilinear(dim, n);
        let fine = semilinear(dim, 2 * n);
        let a = minimize(&coarse, &random_init(coarse.grid(), 0, 3, true), &opts).unwrap();
        let b = minimize(&fine, &random_init(fine.grid(), 0, 3, true), &opts).unwrap();
        assert!((a.c_value - b.c_value).abs() <= 0.05 * b.c_value);
    }
}

#[test]
fn square_baseline() {
    let f = semilinear(2, 64);
    let r = minimize(&f, &random_init(f.grid(), 0, 3, true), &SolveOptions::default()).unwrap();
    assert!((r.c_value - C_SQUARE_64).abs() <= 1e-8 * C_SQUARE_64, "{}", r.c_value);
}

#[test]
fn square_ground_state_is_reflection_symmetric() {
    let f = semilinear(2, 32);
    let r = multi_start(&f, 4, 0, &SolveOptions::default()).unwrap();
    let u = r.ground_state.values();
    let n = 32;
    let diff: f64 = (0..n * n).map(|j| (u[j] - u[(j % n) * n + j / n]).powi(2)).sum::<f64>().sqrt();
    let norm: f64 = u.iter().map(|v| v * v).sum::<f64>().sqrt();
    assert!(diff <= 1e-5 * norm, "{}", diff / norm);
}

#[test]
fn simon_identity_and_unit_case() {
    assert_eq!(simon_gap(3.0, &[1.0], &[0.0]).unwrap(), 1.0);
    // p = 4, x = 1, y = −1: (1 + 1)·2 / 2⁴ = 1/4, the extreme case of the 1D constant
    assert!((simon_gap(4.0, &[1.0], &[-1.0]).unwrap() - 0.25).abs() < 1e-15);
}
