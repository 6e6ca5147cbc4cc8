//! Energy functionals `Φ = I₀ − I` of the three operator families.
//!
//! | family       | `I₀(u)`                       | ambient norm          | `p_hom` | `r`   |
//! |--------------|-------------------------------|-----------------------|---------|-------|
//! | quasilinear  | `(1/p) ∫ A(|∇u|^p)`           | `(∫|∇u|^p)^{1/p}`     | `p`     | `p`   |
//! | Kirchhoff    | `½ M̂(∫|∇u|²)`                 | `(∫|∇u|²)^{1/2}`      | 4       | 2     |
//! | anisotropic  | `Σ (1/p_i) ∫|∂_i u|^{p_i}`    | `Σ ‖∂_i u‖_{p_i}`     | `p_d`   | `p_d` |
//!
//! In every family `I(u) = ∫ F(u)` and `J(u) = ∫ f(u) u`, with nodal quadrature.

mod nonlinearity;
mod operators;
mod profile;

use std::sync::Arc;

pub use nonlinearity::{Nonlinearity, NonlinearityKind, PowerTerm};
pub use operators::{
    AnisotropicOperator, Coefficient, KirchhoffCoefficient, KirchhoffOperator, QuasilinearOperator,
    TabulatedCoefficient, GRADIENT_REGULARIZATION,
};
pub use profile::FiberProfile;

use crate::error::{Error, Result};
use crate::grid::{gradient, Field, GradientField, Grid};
use crate::numeric::{self, pow_abs, CompensatedSum};

/// The principal part of a functional.
#[derive(Debug, Clone, PartialEq)]
pub enum Operator {
    Quasilinear(QuasilinearOperator),
    Kirchhoff(KirchhoffOperator),
    Anisotropic(AnisotropicOperator),
}

impl From<QuasilinearOperator> for Operator {
    fn from(op: QuasilinearOperator) -> Self {
        Operator::Quasilinear(op)
    }
}

impl From<KirchhoffOperator> for Operator {
    fn from(op: KirchhoffOperator) -> Self {
        Operator::Kirchhoff(op)
    }
}

impl From<AnisotropicOperator> for Operator {
    fn from(op: AnisotropicOperator) -> Self {
        Operator::Anisotropic(op)
    }
}

impl Operator {
    pub fn family_name(&self) -> &'static str {
        match self {
            Operator::Quasilinear(_) => "quasilinear",
            Operator::Kirchhoff(_) => "kirchhoff",
            Operator::Anisotropic(_) => "anisotropic",
        }
    }
}

/// The four scalars of the splittings `Φ = I₀ − I` and `Φ'(u)u = J₀ − J`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    pub i0: f64,
    pub i: f64,
    pub j0: f64,
    pub j: f64,
}

/// Principal-part evaluation: energy, `J₀`, and optionally the edge fluxes.
struct Principal {
    energy: f64,
    pairing_self: f64,
    fluxes: Option<Vec<Vec<f64>>>,
}

/// A discrete energy functional on a fixed grid.
#[derive(Debug, Clone)]
pub struct Functional {
    operator: Operator,
    nonlinearity: Nonlinearity,
    grid: Arc<Grid>,
}

impl Functional {
    pub fn new(operator: Operator, nonlinearity: Nonlinearity, grid: Arc<Grid>) -> Result<Self> {
        if let Operator::Anisotropic(op) = &operator {
            if op.exponents().len() != grid.dim() {
                return Err(Error::Parameter(format!(
                    "{} anisotropic exponents for a {}-dimensional grid",
                    op.exponents().len(),
                    grid.dim()
                )));
            }
        }
        Ok(Functional {
            operator,
            nonlinearity,
            grid,
        })
    }

    pub fn operator(&self) -> &Operator {
        &self.operator
    }

    pub fn nonlinearity(&self) -> &Nonlinearity {
        &self.nonlinearity
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    /// The exponent `p` for which `t ↦ Φ'(tu)u / t^{p−1}` decreases.
    pub fn homogeneity_exponent(&self) -> f64 {
        match &self.operator {
            Operator::Quasilinear(op) => op.p(),
            Operator::Kirchhoff(_) => 4.0,
            Operator::Anisotropic(op) => op.max_exponent(),
        }
    }

    /// The exponent `r` of the small-ball bound `Φ'(u)u ≳ ‖u‖^r`.
    pub fn small_ball_exponent(&self) -> f64 {
        match &self.operator {
            Operator::Quasilinear(op) => op.p(),
            Operator::Kirchhoff(_) => 2.0,
            Operator::Anisotropic(op) => op.max_exponent(),
        }
    }

    fn check_grid(&self, u: &Field) -> Result<()> {
        if self.grid.same_as(u.grid()) {
            Ok(())
        } else {
            Err(Error::Contract("field does not live on the functional's grid".into()))
        }
    }

    fn principal(&self, grad: &GradientField, with_flux: bool) -> Principal {
        let grid = &self.grid;
        let vol = grid.cell_volume();
        let dim = grid.dim();
        match &self.operator {
            Operator::Quasilinear(op) => {
                let layout = grid.layout();
                let weight = 1.0 / layout.corner_count() as f64;
                let offsets = layout.corner_edge_offsets();
                let mut energy = CompensatedSum::new();
                let mut pairing = CompensatedSum::new();
                let mut fluxes = with_flux.then(|| vec![vec![0.0; layout.padded_len()]; dim]);
                for base in layout.cell_bases() {
                    for off in &offsets {
                        let mut g = [0.0; 3];
                        for axis in 0..dim {
                            g[axis] = grad.component(axis)[base + off[axis]];
                        }
                        let r2 = g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
                        energy.add(op.density(r2));
                        let w = op.flux_weight(r2);
                        pairing.add(w * r2);
                        if let Some(fl) = fluxes.as_mut() {
                            for axis in 0..dim {
                                fl[axis][base + off[axis]] += weight * w * g[axis];
                            }
                        }
                    }
                }
                Principal {
                    energy: vol * weight * energy.value(),
                    pairing_self: vol * weight * pairing.value(),
                    fluxes,
                }
            }
            Operator::Kirchhoff(op) => {
                let dirichlet = vol
                    * numeric::sum((0..dim).map(|axis| crate::grid::edge_sum(grad, axis, |e| e * e)));
                let m = op.m_value(dirichlet);
                let fluxes = with_flux.then(|| {
                    (0..dim)
                        .map(|axis| grad.component(axis).iter().map(|&e| m * e).collect())
                        .collect()
                });
                Principal {
                    energy: 0.5 * op.m_primitive(dirichlet),
                    pairing_self: m * dirichlet,
                    fluxes,
                }
            }
            Operator::Anisotropic(op) => {
                let mut energy = CompensatedSum::new();
                let mut pairing = CompensatedSum::new();
                for (axis, &p) in op.exponents().iter().enumerate() {
                    let s = crate::grid::edge_sum(grad, axis, |e| pow_abs(e, p));
                    energy.add(s / p);
                    pairing.add(s);
                }
                let fluxes = with_flux.then(|| {
                    op.exponents()
                        .iter()
                        .enumerate()
                        .map(|(axis, &p)| {
                            grad.component(axis)
                                .iter()
                                .map(|&e| {
                                    if p == 2.0 {
                                        e
                                    } else {
                                        (pow_abs(e, p) + GRADIENT_REGULARIZATION).powf((p - 2.0) / p) * e
                                    }
                                })
                                .collect()
                        })
                        .collect()
                });
                Principal {
                    energy: vol * energy.value(),
                    pairing_self: vol * pairing.value(),
                    fluxes,
                }
            }
        }
    }

    /// `I(u) = ∫ F(u)`.
    fn potential(&self, u: &Field) -> f64 {
        self.grid.cell_volume() * numeric::sum(u.values().iter().map(|&v| self.nonlinearity.primitive(v)))
    }

    /// `J(u) = ∫ f(u) u`.
    fn potential_pairing(&self, u: &Field) -> f64 {
        self.grid.cell_volume()
            * numeric::sum(u.values().iter().map(|&v| self.nonlinearity.value_times_argument(v)))
    }

    /// `Φ(u)`.
    pub fn energy(&self, u: &Field) -> Result<f64> {
        self.check_grid(u)?;
        let principal = self.principal(&gradient(u), false);
        Ok(principal.energy - self.potential(u))
    }

    /// The Gateaux derivative `Φ'(u)v`.
    pub fn pairing(&self, u: &Field, v: &Field) -> Result<f64> {
        self.check_grid(u)?;
        self.check_grid(v)?;
        let principal = self.principal(&gradient(u), true);
        let fluxes = principal.fluxes.expect("fluxes requested");
        let gv = gradient(v);
        let vol = self.grid.cell_volume();
        let mut acc = CompensatedSum::new();
        for (axis, flux) in fluxes.iter().enumerate() {
            for (a, b) in flux.iter().zip(gv.component(axis)) {
                acc.add(a * b);
            }
        }
        for (&a, &b) in u.values().iter().zip(v.values()) {
            acc.add(-self.nonlinearity.value(a) * b);
        }
        Ok(vol * acc.value())
    }

    /// The `L²`-Riesz representative `R` of `Φ'(u)`: `⟨R, v⟩ = Φ'(u)v` for every `v`.
    pub fn residual(&self, u: &Field) -> Result<Field> {
        Ok(self.residual_parts(u)?.0)
    }

    /// The residual together with `J₀(u)`.
    pub(crate) fn residual_parts(&self, u: &Field) -> Result<(Field, f64)> {
        self.check_grid(u)?;
        let principal = self.principal(&gradient(u), true);
        let fluxes = principal.fluxes.expect("fluxes requested");
        let mut values = crate::grid::negative_divergence(&self.grid, &fluxes);
        for (r, &v) in values.iter_mut().zip(u.values()) {
            *r -= self.nonlinearity.value(v);
        }
        Ok((Field::new(self.grid.clone(), values)?, principal.pairing_self))
    }

    /// The norm of the family's energy space.
    pub fn ambient_norm(&self, u: &Field) -> Result<f64> {
        self.check_grid(u)?;
        let grad = gradient(u);
        let vol = self.grid.cell_volume();
        Ok(match &self.operator {
            Operator::Quasilinear(op) => {
                let p = op.p();
                let cells = crate::grid::corner_averaged(&grad, |g| {
                    pow_abs((g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt(), p)
                });
                crate::grid::integrate(&self.grid, &cells)?.powf(1.0 / p)
            }
            Operator::Kirchhoff(_) => (vol
                * numeric::sum(
                    (0..self.grid.dim()).map(|axis| crate::grid::edge_sum(&grad, axis, |e| e * e)),
                ))
            .sqrt(),
            Operator::Anisotropic(op) => op
                .exponents()
                .iter()
                .enumerate()
                .map(|(axis, &p)| (vol * crate::grid::edge_sum(&grad, axis, |e| pow_abs(e, p))).powf(1.0 / p))
                .sum(),
        })
    }

    /// `(I₀, I, J₀, J)`.
    pub fn decompose(&self, u: &Field) -> Result<Decomposition> {
        self.check_grid(u)?;
        let principal = self.principal(&gradient(u), false);
        Ok(Decomposition {
            i0: principal.energy,
            i: self.potential(u),
            j0: principal.pairing_self,
            j: self.potential_pairing(u),
        })
    }

    /// Reduces `t ↦ Φ(tu)` to a handful of scalars (or per-corner samples for tabulated `a`).
    pub fn fiber_profile(&self, u: &Field) -> Result<FiberProfile> {
        self.check_grid(u)?;
        Ok(FiberProfile::new(self, u))
    }
}

#[cfg(test)]
mod tests;
