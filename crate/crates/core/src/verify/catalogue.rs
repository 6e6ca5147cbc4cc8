use crate::functionals::{
    AnisotropicOperator, KirchhoffCoefficient, KirchhoffOperator, Nonlinearity, PowerTerm, QuasilinearOperator,
};

/// A quasilinear operator with an admissible nonlinearity.
#[derive(Debug, Clone)]
pub struct QuasilinearCase {
    pub name: String,
    pub operator: QuasilinearOperator,
    pub nonlinearity: Nonlinearity,
    pub alpha: f64,
    pub dim: usize,
}

#[derive(Debug, Clone)]
pub struct KirchhoffCase {
    pub name: String,
    pub operator: KirchhoffOperator,
    pub nonlinearity: Nonlinearity,
    pub alpha: f64,
}

#[derive(Debug, Clone)]
pub struct AnisotropicCase {
    pub name: String,
    pub operator: AnisotropicOperator,
    pub nonlinearity: Nonlinearity,
    pub alpha: f64,
    pub dim: usize,
}

fn power(alpha: f64) -> Nonlinearity {
    Nonlinearity::pure_power(alpha).expect("catalogue exponent")
}

fn two_powers(a: f64, b: f64) -> Nonlinearity {
    Nonlinearity::sum_of_powers(&[
        PowerTerm { coefficient: 1.0, exponent: a },
        PowerTerm { coefficient: 0.5, exponent: b },
    ])
    .expect("catalogue exponents")
}

/// Operators and nonlinearities that satisfy every quasilinear hypothesis in `d = 3`.
pub fn quasilinear_catalogue() -> Vec<QuasilinearCase> {
    let ops = [
        ("one p=2", QuasilinearOperator::laplacian(2.0)),
        ("one p=3", QuasilinearOperator::laplacian(3.0)),
        ("p_plus_q p=3 q=2", QuasilinearOperator::p_plus_q(3.0, 2.0)),
        ("p_plus_q p=2.5 q=1.5", QuasilinearOperator::p_plus_q(2.5, 1.5)),
    ];
    let mut cases = Vec::new();
    for (name, op) in ops {
        let op = op.expect("catalogue operator");
        let alpha = op.p() + 1.5;
        for (fname, f) in [("pure", power(alpha)), ("sum", two_powers(op.p() + 1.0, alpha))] {
            cases.push(QuasilinearCase {
                name: format!("{name}, {fname} alpha={alpha}"),
                operator: op.clone(),
                nonlinearity: f,
                alpha,
                dim: 3,
            });
        }
    }
    cases
}

/// The three Kirchhoff coefficients of the catalogue with `f = |t|^{α−2}t`, `α ∈ {4.5, 5}`.
pub fn kirchhoff_catalogue() -> Vec<KirchhoffCase> {
    let ms = [
        ("affine(1,1)", KirchhoffCoefficient::Affine { a: 1.0, b: 1.0 }),
        ("log(m0=1)", KirchhoffCoefficient::Log { m0: 1.0 }),
        (
            "power_sum(m0=1,b=1,gamma=0.5)",
            KirchhoffCoefficient::PowerSum {
                m0: 1.0,
                terms: vec![(1.0, 0.5)],
            },
        ),
    ];
    let mut cases = Vec::new();
    for (name, m) in ms {
        let op = KirchhoffOperator::new(m).expect("catalogue coefficient");
        for alpha in [4.5, 5.0] {
            cases.push(KirchhoffCase {
                name: format!("{name}, alpha={alpha}"),
                operator: op.clone(),
                nonlinearity: power(alpha),
                alpha,
            });
        }
    }
    cases
}

/// Anisotropic exponent vectors in `d = 3` with admissible pure powers.
pub fn anisotropic_catalogue() -> Vec<AnisotropicCase> {
    [(vec![2.0, 2.0, 2.0], 4.0), (vec![1.5, 2.0, 2.5], 3.0), (vec![1.8, 2.0, 2.2], 3.5)]
        .into_iter()
        .map(|(p, alpha)| AnisotropicCase {
            name: format!("p={p:?}, alpha={alpha}"),
            operator: AnisotropicOperator::new(&p).expect("catalogue exponents"),
            nonlinearity: power(alpha),
            alpha,
            dim: 3,
        })
        .collect()
}
