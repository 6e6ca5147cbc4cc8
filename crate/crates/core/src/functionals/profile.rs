use super::{Coefficient, Functional, KirchhoffOperator, Operator, TabulatedCoefficient};
use crate::grid::{self, gradient, Field};
use crate::numeric::{pow_abs, CompensatedSum};

/// `I₀(tu)` as a function of `t` alone.
#[derive(Debug, Clone)]
enum PrincipalProfile {
    /// `Σ G_k t^{e_k} / e_k`.
    Powers(Vec<(f64, f64)>),
    /// `½ M̂(t² D)` with `D = ∫|∇u|²`.
    Kirchhoff { op: KirchhoffOperator, dirichlet: f64 },
    /// `Σ_c w A(t^p s_c) / p` over the corner samples `s_c = |∇u|^p`.
    Table {
        table: TabulatedCoefficient,
        p: f64,
        weight: f64,
        samples: Vec<f64>,
    },
}

/// The fiber map `t ↦ Φ(tu)` of a fixed direction, reduced to a few scalars.
///
/// Evaluating the profile costs `O(#terms)` instead of a sweep over the grid (except for
/// tabulated coefficients, which keep one sample per cell corner). Values agree with
/// [`Functional::energy`] on `t·u` up to roundoff.
#[derive(Debug, Clone)]
pub struct FiberProfile {
    principal: PrincipalProfile,
    /// `(c_k, α_k, m_k)` with `m_k = ∫|u|^{α_k}`.
    potential: Vec<(f64, f64, f64)>,
}

impl FiberProfile {
    pub(super) fn new(functional: &Functional, u: &Field) -> Self {
        let grad = gradient(u);
        let g = functional.grid();
        let vol = g.cell_volume();
        let corner_integral = |e: f64| {
            let cells = grid::corner_averaged(&grad, |v| pow_abs((v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt(), e));
            vol * cells.iter().copied().collect::<CompensatedSum>().value()
        };
        let principal = match functional.operator() {
            Operator::Quasilinear(op) => match op.coefficient() {
                Coefficient::One => PrincipalProfile::Powers(vec![(corner_integral(op.p()), op.p())]),
                Coefficient::PPlusQ => PrincipalProfile::Powers(vec![
                    (corner_integral(op.p()), op.p()),
                    (corner_integral(op.q()), op.q()),
                ]),
                Coefficient::Table(table) => {
                    let mut samples = Vec::with_capacity(g.cell_count() << g.dim());
                    grad.for_each_corner(|_, v| {
                        samples.push(pow_abs((v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt(), op.p()))
                    });
                    PrincipalProfile::Table {
                        table: table.clone(),
                        p: op.p(),
                        weight: vol / (1usize << g.dim()) as f64,
                        samples,
                    }
                }
            },
            Operator::Kirchhoff(op) => PrincipalProfile::Kirchhoff {
                op: op.clone(),
                dirichlet: vol * (0..g.dim()).map(|a| grid::edge_sum(&grad, a, |e| e * e)).sum::<f64>(),
            },
            Operator::Anisotropic(op) => PrincipalProfile::Powers(
                op.exponents()
                    .iter()
                    .enumerate()
                    .map(|(a, &p)| (vol * grid::edge_sum(&grad, a, |e| pow_abs(e, p)), p))
                    .collect(),
            ),
        };
        let potential = functional
            .nonlinearity()
            .terms()
            .iter()
            .map(|term| {
                let m = u.values().iter().map(|&v| pow_abs(v, term.exponent)).collect::<CompensatedSum>();
                (term.coefficient, term.exponent, vol * m.value())
            })
            .collect();
        FiberProfile { principal, potential }
    }

    /// `I₀(tu)`.
    pub fn principal(&self, t: f64) -> f64 {
        match &self.principal {
            PrincipalProfile::Powers(terms) => terms.iter().map(|&(g, e)| g * t.powf(e) / e).sum(),
            PrincipalProfile::Kirchhoff { op, dirichlet } => 0.5 * op.m_primitive(t * t * dirichlet),
            PrincipalProfile::Table {
                table,
                p,
                weight,
                samples,
            } => {
                let tp = t.powf(*p);
                weight / p * samples.iter().map(|&s| table.primitive(tp * s)).collect::<CompensatedSum>().value()
            }
        }
    }

    /// `J₀(tu) = Φ₀'(tu)(tu)`.
    pub fn principal_pairing(&self, t: f64) -> f64 {
        match &self.principal {
            PrincipalProfile::Powers(terms) => terms.iter().map(|&(g, e)| g * t.powf(e)).sum(),
            PrincipalProfile::Kirchhoff { op, dirichlet } => {
                let s = t * t * dirichlet;
                op.m_value(s) * s
            }
            PrincipalProfile::Table {
                table,
                p,
                weight,
                samples,
            } => {
                let tp = t.powf(*p);
                weight
                    * samples
                        .iter()
                        .filter(|&&s| s > 0.0)
                        .map(|&s| table.value(tp * s) * tp * s)
                        .collect::<CompensatedSum>()
                        .value()
            }
        }
    }

    /// `I(tu) = ∫F(tu)`.
    pub fn potential(&self, t: f64) -> f64 {
        self.potential.iter().map(|&(c, a, m)| c / a * t.powf(a) * m).sum()
    }

    /// `J(tu) = ∫f(tu)tu`.
    pub fn potential_pairing(&self, t: f64) -> f64 {
        self.potential.iter().map(|&(c, a, m)| c * t.powf(a) * m).sum()
    }

    /// `γ(t) = Φ(tu)`.
    pub fn value(&self, t: f64) -> f64 {
        self.principal(t) - self.potential(t)
    }

    /// `Φ'(tu)(tu) = J₀(tu) − J(tu)`, whose sign is that of `γ'(t)`.
    pub fn nehari_pairing(&self, t: f64) -> f64 {
        self.principal_pairing(t) - self.potential_pairing(t)
    }

    /// `g(t) = γ'(t) = Φ'(tu)u`.
    pub fn slope(&self, t: f64) -> f64 {
        self.nehari_pairing(t) / t
    }

    /// `J₀(tu) + J(tu)`, the natural size of [`Self::nehari_pairing`].
    pub fn pairing_scale(&self, t: f64) -> f64 {
        self.principal_pairing(t).abs() + self.potential_pairing(t).abs()
    }
}
