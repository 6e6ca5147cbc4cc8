use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

fn line(n: usize) -> Arc<Grid> {
    Grid::build(1, &[1.0], &[n]).unwrap().shared()
}

fn sine(grid: &Arc<Grid>) -> Field {
    Field::from_fn(grid.clone(), |x| x.iter().map(|v| (PI * v).sin()).product()).unwrap()
}

fn random_field(grid: &Arc<Grid>, rng: &mut ChaCha8Rng) -> Field {
    let values = (0..grid.node_count()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    Field::new(grid.clone(), values).unwrap()
}

fn cubic() -> Nonlinearity {
    Nonlinearity::pure_power(4.0).unwrap()
}

fn families(grid: &Arc<Grid>) -> Vec<Functional> {
    let table = TabulatedCoefficient::sample(|t| 1.0 + t.powf(-1.0 / 3.0), 1e-8, 1e8, 400).unwrap();
    let mut ops: Vec<Operator> = vec![
        QuasilinearOperator::laplacian(2.0).unwrap().into(),
        QuasilinearOperator::laplacian(3.0).unwrap().into(),
        QuasilinearOperator::p_plus_q(3.0, 2.0).unwrap().into(),
        QuasilinearOperator::new(3.0, 2.0, Coefficient::Table(table)).unwrap().into(),
        KirchhoffOperator::new(KirchhoffCoefficient::Affine { a: 1.0, b: 1.0 }).unwrap().into(),
        KirchhoffOperator::new(KirchhoffCoefficient::Log { m0: 1.0 }).unwrap().into(),
    ];
    ops.push(match grid.dim() {
        1 => AnisotropicOperator::new(&[1.8]).unwrap().into(),
        _ => AnisotropicOperator::new(&[1.8, 2.2]).unwrap().into(),
    });
    ops.into_iter()
        .map(|op| Functional::new(op, cubic(), grid.clone()).unwrap())
        .collect()
}

#[test]
fn zero_field_has_zero_energy_everywhere() {
    let g = Grid::build(2, &[1.0, 1.0], &[6, 7]).unwrap().shared();
    let zero = Field::zeros(g.clone());
    for f in families(&g) {
        assert_eq!(f.energy(&zero).unwrap(), 0.0);
        let d = f.decompose(&zero).unwrap();
        assert_eq!((d.i0, d.i, d.j0, d.j), (0.0, 0.0, 0.0, 0.0));
        assert!(f.residual(&zero).unwrap().is_zero());
        assert_eq!(f.ambient_norm(&zero).unwrap(), 0.0);
    }
}

#[test]
fn semilinear_energy_and_pairing_of_sine() {
    let g = line(399);
    let u = sine(&g);
    let f = Functional::new(QuasilinearOperator::laplacian(2.0).unwrap().into(), cubic(), g).unwrap();
    let phi = f.energy(&u).unwrap();
    let expected = PI * PI / 4.0 - 3.0 / 32.0;
    assert!((phi - expected).abs() < 1e-4 * expected, "{phi} vs {expected}");
    let pair = f.pairing(&u, &u).unwrap();
    let expected = PI * PI / 2.0 - 3.0 / 8.0;
    assert!((pair - expected).abs() < 1e-4 * expected, "{pair} vs {expected}");
}

#[test]
fn kirchhoff_energy_of_sine() {
    let g = line(399);
    let u = sine(&g);
    let op = KirchhoffOperator::new(KirchhoffCoefficient::Affine { a: 1.0, b: 1.0 }).unwrap();
    let f = Functional::new(op.into(), cubic(), g).unwrap();
    let d = PI * PI / 2.0;
    let expected = 0.5 * (d + d * d / 2.0) - 3.0 / 32.0;
    let phi = f.energy(&u).unwrap();
    assert!((phi - expected).abs() < 1e-4 * expected, "{phi} vs {expected}");
    let norm = f.ambient_norm(&u).unwrap();
    assert!((norm - PI / 2f64.sqrt()).abs() < 1e-4);
}

#[test]
fn anisotropic_norm_of_bubble() {
    let g = Grid::build(2, &[1.0, 1.0], &[99, 99]).unwrap().shared();
    let u = Field::from_fn(g.clone(), |x| x[0] * (1.0 - x[0]) * x[1] * (1.0 - x[1])).unwrap();
    let f = Functional::new(AnisotropicOperator::new(&[2.0, 2.0]).unwrap().into(), cubic(), g).unwrap();
    let norm = f.ambient_norm(&u).unwrap();
    assert!((norm - 2.0 * (1.0f64 / 90.0).sqrt()).abs() < 1e-3 * norm, "{norm}");
}

#[test]
fn residual_approximates_euler_lagrange() {
    let g = line(199);
    let u = sine(&g);
    let f = Functional::new(QuasilinearOperator::laplacian(2.0).unwrap().into(), cubic(), g.clone()).unwrap();
    let r = f.residual(&u).unwrap();
    let err = r
        .values()
        .iter()
        .enumerate()
        .map(|(j, &v)| {
            let s = (PI * g.node_coords(j)[0]).sin();
            (v - (PI * PI * s - s * s * s)).abs()
        })
        .fold(0.0, f64::max);
    assert!(err < 1e-3, "{err}");
}

#[test]
fn residual_represents_pairing() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for g in [line(23), Grid::build(2, &[1.0, 1.5], &[7, 9]).unwrap().shared()] {
        for f in families(&g) {
            let u = random_field(&g, &mut rng);
            let r = f.residual(&u).unwrap();
            for _ in 0..10 {
                let v = random_field(&g, &mut rng);
                let a = r.dot(&v).unwrap();
                let b = f.pairing(&u, &v).unwrap();
                assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()), "{a} vs {b}");
            }
        }
    }
}

#[test]
fn pairing_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = Grid::build(2, &[1.0, 1.0], &[8, 8]).unwrap().shared();
    let eps = 1e-5;
    for f in families(&g) {
        for _ in 0..10 {
            let u = random_field(&g, &mut rng);
            let v = random_field(&g, &mut rng);
            let fd = (f.energy(&u.add_scaled(eps, &v).unwrap()).unwrap()
                - f.energy(&u.add_scaled(-eps, &v).unwrap()).unwrap())
                / (2.0 * eps);
            let exact = f.pairing(&u, &v).unwrap();
            assert!(
                (fd - exact).abs() <= 1e-5 * exact.abs().max(1.0),
                "{}: {fd} vs {exact}",
                f.operator().family_name()
            );
        }
    }
}

#[test]
fn decomposition_is_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let g = Grid::build(2, &[1.0, 1.0], &[9, 6]).unwrap().shared();
    for f in families(&g) {
        for _ in 0..5 {
            let u = random_field(&g, &mut rng);
            let d = f.decompose(&u).unwrap();
            let phi = f.energy(&u).unwrap();
            let pair = f.pairing(&u, &u).unwrap();
            assert!((phi - (d.i0 - d.i)).abs() <= 1e-12 * phi.abs().max(d.i0));
            assert!((pair - (d.j0 - d.j)).abs() <= 1e-12 * pair.abs().max(d.j0));
        }
    }
}

#[test]
fn anisotropic_pairing_is_sum_of_axis_norms() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let g = Grid::build(2, &[1.0, 1.0], &[10, 12]).unwrap().shared();
    let op = AnisotropicOperator::new(&[1.8, 2.2]).unwrap();
    let f = Functional::new(op.clone().into(), cubic(), g.clone()).unwrap();
    let u = random_field(&g, &mut rng);
    let j0 = f.decompose(&u).unwrap().j0;
    let sum: f64 = op
        .exponents()
        .iter()
        .enumerate()
        .map(|(a, &p)| crate::grid::axis_norm(&u, a, p).unwrap().powf(p))
        .sum();
    assert!((j0 - sum).abs() <= 1e-12 * j0);
}

#[test]
fn energy_is_even() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = Grid::build(2, &[1.0, 1.0], &[7, 7]).unwrap().shared();
    for f in families(&g) {
        let u = random_field(&g, &mut rng);
        assert_eq!(f.energy(&u).unwrap(), f.energy(&u.scaled(-1.0)).unwrap());
    }
    let g = line(30);
    for f in families(&g) {
        let u = random_field(&g, &mut rng);
        let a = f.energy(&u.abs()).unwrap();
        let b = f.energy(&u).unwrap();
        assert!(a <= b + 1e-10 * b.abs().max(1.0));
    }
}

#[test]
fn profile_matches_energy_along_the_ray() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let g = Grid::build(2, &[1.0, 1.0], &[9, 9]).unwrap().shared();
    for f in families(&g) {
        let u = random_field(&g, &mut rng);
        let prof = f.fiber_profile(&u).unwrap();
        for &t in &[0.1, 0.7, 1.0, 3.0] {
            let tu = u.scaled(t);
            let e = f.energy(&tu).unwrap();
            let pair = f.pairing(&tu, &u).unwrap();
            assert!(
                (prof.value(t) - e).abs() <= 1e-11 * e.abs().max(1.0),
                "{:?} t={t}: {} vs {e}",
                f.operator(),
                prof.value(t)
            );
            assert!(
                (prof.slope(t) - pair).abs() <= 1e-9 * pair.abs().max(1.0),
                "{:?} t={t}: {} vs {pair}",
                f.operator(),
                prof.slope(t)
            );
        }
    }
}

#[test]
fn rejects_mismatched_inputs() {
    let g = line(10);
    let other = line(11);
    let f = Functional::new(QuasilinearOperator::laplacian(2.0).unwrap().into(), cubic(), g).unwrap();
    assert!(matches!(f.energy(&Field::zeros(other)), Err(Error::Contract(_))));
    let g2 = Grid::build(2, &[1.0, 1.0], &[4, 4]).unwrap().shared();
    assert!(Functional::new(AnisotropicOperator::new(&[2.0]).unwrap().into(), cubic(), g2).is_err());
}

#[test]
fn family_exponents() {
    let g = line(10);
    let k = Functional::new(
        KirchhoffOperator::new(KirchhoffCoefficient::Log { m0: 1.0 }).unwrap().into(),
        cubic(),
        g.clone(),
    )
    .unwrap();
    assert_eq!((k.homogeneity_exponent(), k.small_ball_exponent()), (4.0, 2.0));
    let q = Functional::new(QuasilinearOperator::p_plus_q(3.0, 2.0).unwrap().into(), cubic(), g).unwrap();
    assert_eq!((q.homogeneity_exponent(), q.small_ball_exponent()), (3.0, 3.0));
}
