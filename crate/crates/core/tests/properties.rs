use std::sync::Arc;

use proptest::prelude::*;

use nehari::cli::{RawConfig, RunConfig};
use nehari::functionals::{
    AnisotropicOperator, Functional, KirchhoffCoefficient, KirchhoffOperator, Nonlinearity, Operator,
    QuasilinearOperator,
};
use nehari::grid::{Field, Grid};
use nehari::verify::simon_gap;

const N: usize = 5;

fn grid() -> Arc<Grid> {
    Grid::build(2, &[1.0, 1.5], &[N, N]).unwrap().shared()
}

fn family(k: usize) -> Functional {
    let op: Operator = match k {
        0 => QuasilinearOperator::laplacian(2.0).unwrap().into(),
        1 => QuasilinearOperator::p_plus_q(3.0, 1.5).unwrap().into(),
        2 => KirchhoffOperator::new(KirchhoffCoefficient::Affine { a: 0.5, b: 1.0 }).unwrap().into(),
        _ => AnisotropicOperator::new(&[2.0, 3.5]).unwrap().into(),
    };
    Functional::new(op, Nonlinearity::pure_power(5.0).unwrap(), grid()).unwrap()
}

fn field(values: Vec<f64>) -> Field {
    Field::new(grid(), values).unwrap()
}

fn values() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0..2.0f64, N * N)
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= 1e-9 * scale.max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn energy_is_even(k in 0..4usize, u in values()) {
        let f = family(k);
        let u = field(u);
        let (a, b) = (f.energy(&u).unwrap(), f.energy(&u.scaled(-1.0)).unwrap());
        prop_assert!(close(a, b, a.abs()), "{a} vs {b}");
    }

    #[test]
    fn laplacian_parts_scale_homogeneously(u in values(), t in 0.1..10.0f64) {
        let f = family(0);
        let u = field(u);
        let d = f.decompose(&u).unwrap();
        let s = f.decompose(&u.scaled(t)).unwrap();
        prop_assert!(close(s.i0, t * t * d.i0, s.i0));
        prop_assert!(close(s.i, t.powi(5) * d.i, s.i));
        prop_assert!(close(s.j0, 2.0 * s.i0, s.j0));
        prop_assert!(close(s.j, 5.0 * s.i, s.j));
    }

    #[test]
    fn anisotropic_parts_scale_per_axis(u in values(), t in 0.1..10.0f64) {
        // each axis term is homogeneous of its own degree, so J₀ = Σ p_i I₀,i is bracketed
        let f = family(3);
        let u = field(u);
        let d = f.decompose(&u.scaled(t)).unwrap();
        prop_assert!(d.j0 >= 2.0 * d.i0 * (1.0 - 1e-12) && d.j0 <= 3.5 * d.i0 * (1.0 + 1e-12));
    }

    #[test]
    fn pairing_is_linear(k in 0..4usize, u in values(), v in values(), w in values(), a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let f = family(k);
        let (u, v, w) = (field(u), field(v), field(w));
        let combo = v.scaled(a).add_scaled(b, &w).unwrap();
        let lhs = f.pairing(&u, &combo).unwrap();
        let rhs = a * f.pairing(&u, &v).unwrap() + b * f.pairing(&u, &w).unwrap();
        prop_assert!(close(lhs, rhs, lhs.abs() + rhs.abs()), "{lhs} vs {rhs}");
    }

    #[test]
    fn residual_represents_pairing(k in 0..4usize, u in values(), v in values()) {
        let f = family(k);
        let (u, v) = (field(u), field(v));
        let lhs = f.residual(&u).unwrap().dot(&v).unwrap();
        let rhs = f.pairing(&u, &v).unwrap();
        prop_assert!(close(lhs, rhs, lhs.abs() + rhs.abs()), "{lhs} vs {rhs}");
    }

    #[test]
    fn simon_gap_is_nonnegative(p in 1.1..6.0f64, x in prop::collection::vec(-5.0..5.0f64, 3), y in prop::collection::vec(-5.0..5.0f64, 3)) {
        prop_assume!(x.iter().any(|v| *v != 0.0) || y.iter().any(|v| *v != 0.0));
        prop_assert!(simon_gap(p, &x, &y).unwrap() >= 0.0);
    }

    #[test]
    fn simon_gap_is_one_at_two(x in prop::collection::vec(-5.0..5.0f64, 2), y in prop::collection::vec(-5.0..5.0f64, 2)) {
        prop_assume!(x != y);
        prop_assert!((simon_gap(2.0, &x, &y).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn config_parsing_never_panics(text in "(\\PC|\n|=|\\[|\\]|\\.|#){0,200}") {
        let _ = RawConfig::parse(&text);
        let _ = RunConfig::parse(&text);
    }

    #[test]
    fn config_lines_with_known_keys_never_panic(
        key in prop::sample::select(vec!["domain.dim", "domain.resolution", "family.kind", "family.p", "nonlinearity.terms", "fiber.scan", "solver.starts"]),
        value in "[-0-9a-z.,:e ]{0,12}",
    ) {
        let _ = RunConfig::parse(&format!("{key} = {value}\n"));
    }
}
