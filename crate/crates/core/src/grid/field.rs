use std::sync::Arc;

use super::Grid;
use crate::error::{Error, Result};
use crate::numeric::{self, pow_abs, CompensatedSum};

/// Nodal values of a discrete function on the interior nodes of a [`Grid`].
///
/// Boundary values are identically zero and masked-out nodes are clamped to zero.
#[derive(Debug, Clone)]
pub struct Field {
    grid: Arc<Grid>,
    values: Vec<f64>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.grid.same_as(&other.grid) && self.values == other.values
    }
}

impl Field {
    pub fn new(grid: Arc<Grid>, mut values: Vec<f64>) -> Result<Field> {
        if values.len() != grid.node_count() {
            return Err(Error::Contract(format!(
                "field has {} values, grid has {} interior nodes",
                values.len(),
                grid.node_count()
            )));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Contract(format!("non-finite value {} at node {j}", values[j])));
        }
        if let Some(mask) = grid.mask() {
            for (v, &active) in values.iter_mut().zip(mask) {
                if !active {
                    *v = 0.0;
                }
            }
        }
        Ok(Field { grid, values })
    }

    pub fn zeros(grid: Arc<Grid>) -> Field {
        let n = grid.node_count();
        Field {
            grid,
            values: vec![0.0; n],
        }
    }

    /// Samples `f` at the interior nodes.
    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(&[f64]) -> f64) -> Result<Field> {
        let values = (0..grid.node_count()).map(|j| f(&grid.node_coords(j))).collect();
        Field::new(grid, values)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn scaled(&self, t: f64) -> Field {
        Field {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| t * v).collect(),
        }
    }

    /// `self + s · other`.
    pub fn add_scaled(&self, s: f64, other: &Field) -> Result<Field> {
        self.check_same_grid(other)?;
        Ok(Field {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + s * b).collect(),
        })
    }

    pub fn abs(&self) -> Field {
        Field {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v.abs()).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Discrete `L²` inner product `Σ u_j v_j ∏h`.
    pub fn dot(&self, other: &Field) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self.grid.cell_volume() * numeric::sum(self.values.iter().zip(&other.values).map(|(a, b)| a * b)))
    }

    pub fn l2_norm(&self) -> f64 {
        self.dot(self).expect("same grid").sqrt()
    }

    pub(crate) fn check_same_grid(&self, other: &Field) -> Result<()> {
        if self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(Error::Contract("fields live on different grids".into()))
        }
    }

    /// Values on the padded lattice, zero on the boundary layer.
    pub(crate) fn padded(&self) -> Vec<f64> {
        let layout = self.grid.layout();
        let mut out = vec![0.0; layout.padded_len()];
        for (q, &v) in layout.interior_to_padded().zip(&self.values) {
            out[q] = v;
        }
        out
    }
}

/// Forward differences of a field on the staggered edge lattice.
///
/// Component `i` holds `(u(m + e_i) − u(m)) / h_i` for every edge along axis `i`, stored in the
/// padded lattice indexing (the slot of the edge's lower endpoint). Edges lying on the boundary
/// layer carry zeros.
#[derive(Debug, Clone)]
pub struct GradientField {
    grid: Arc<Grid>,
    components: Vec<Vec<f64>>,
}

impl GradientField {
    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    /// Edge differences along `axis`, in padded indexing.
    pub fn component(&self, axis: usize) -> &[f64] {
        &self.components[axis]
    }

    /// Iterates over the edge values along `axis` that belong to the edge lattice.
    pub fn edges(&self, axis: usize) -> impl Iterator<Item = f64> + '_ {
        let layout = self.grid.layout();
        let c = &self.components[axis];
        let stride = layout.padded_stride;
        let mut limit = layout.padded;
        limit[axis] -= 1;
        (0..limit[0]).flat_map(move |a| {
            (0..limit[1]).flat_map(move |b| (0..limit[2]).map(move |d| c[a * stride[0] + b * stride[1] + d * stride[2]]))
        })
    }

    /// Gradient vector at every (cell, corner) pair, in cell order then corner order.
    ///
    /// Component `i` at corner `c` of a cell is the axis-`i` edge through that corner. Averaging
    /// a density over the `2^d` corners of each cell integrates every edge with unit weight.
    pub fn for_each_corner(&self, mut visit: impl FnMut(usize, [f64; 3])) {
        let layout = self.grid.layout();
        let dim = layout.dim;
        let offsets = layout.corner_edge_offsets();
        for (cell, base) in layout.cell_bases().enumerate() {
            for off in &offsets {
                let mut g = [0.0; 3];
                for axis in 0..dim {
                    g[axis] = self.components[axis][base + off[axis]];
                }
                visit(cell, g);
            }
        }
    }
}

/// Forward-difference gradient with the implicit zero boundary values.
pub fn gradient(u: &Field) -> GradientField {
    let grid = u.grid.clone();
    let layout = grid.layout();
    let padded = u.padded();
    let components = (0..grid.dim())
        .map(|axis| {
            let stride = layout.padded_stride[axis];
            let inv_h = 1.0 / grid.spacing()[axis];
            let mut out = vec![0.0; padded.len()];
            let [p0, p1, p2] = layout.padded;
            let mut limit = [p0, p1, p2];
            limit[axis] -= 1;
            let s = layout.padded_stride;
            for a in 0..limit[0] {
                for b in 0..limit[1] {
                    for c in 0..limit[2] {
                        let q = a * s[0] + b * s[1] + c * s[2];
                        out[q] = (padded[q + stride] - padded[q]) * inv_h;
                    }
                }
            }
            out
        })
        .collect();
    GradientField { grid, components }
}

/// Midpoint rule over the cell lattice: `Σ v_cell ∏h`.
pub fn integrate(grid: &Grid, cell_values: &[f64]) -> Result<f64> {
    if cell_values.len() != grid.cell_count() {
        return Err(Error::Contract(format!(
            "expected {} cell values, got {}",
            grid.cell_count(),
            cell_values.len()
        )));
    }
    Ok(grid.cell_volume() * numeric::sum(cell_values.iter().copied()))
}

/// Per-cell average over the cell's corners of `density(gradient at corner)`.
pub(crate) fn corner_averaged(grad: &GradientField, density: impl Fn([f64; 3]) -> f64) -> Vec<f64> {
    let grid = grad.grid();
    let weight = 1.0 / grid.layout().corner_count() as f64;
    let mut cells = vec![0.0; grid.cell_count()];
    grad.for_each_corner(|cell, g| cells[cell] += weight * density(g));
    cells
}

/// `(∫ |∇u|^p)^{1/p}`.
pub fn seminorm(u: &Field, p: f64) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::Parameter(format!("seminorm exponent must exceed 1, got {p}")));
    }
    let grad = gradient(u);
    let cells = corner_averaged(&grad, |g| pow_abs((g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt(), p));
    Ok(integrate(u.grid(), &cells)?.powf(1.0 / p))
}

/// `(∫ |∂_axis u|^p)^{1/p}`.
pub fn axis_norm(u: &Field, axis: usize, p: f64) -> Result<f64> {
    if axis >= u.grid().dim() {
        return Err(Error::Parameter(format!(
            "axis {axis} is invalid for a {}-dimensional grid",
            u.grid().dim()
        )));
    }
    if !(p > 1.0) {
        return Err(Error::Parameter(format!("axis exponent must exceed 1, got {p}")));
    }
    let grad = gradient(u);
    let cells = corner_averaged(&grad, |g| pow_abs(g[axis], p));
    Ok(integrate(u.grid(), &cells)?.powf(1.0 / p))
}

/// `Σ_e w_e` over an edge lattice, compensated.
pub(crate) fn edge_sum(grad: &GradientField, axis: usize, f: impl Fn(f64) -> f64) -> f64 {
    grad.edges(axis).map(f).collect::<CompensatedSum>().value()
}

/// Nodal divergence of edge fluxes: `R_j = Σ_i (F_i[j − e_i] − F_i[j]) / h_i`, the adjoint of
/// [`gradient`] with respect to the nodal and edge quadratures.
pub(crate) fn negative_divergence(grid: &Grid, fluxes: &[Vec<f64>]) -> Vec<f64> {
    let layout = grid.layout();
    let mut out = vec![0.0; grid.node_count()];
    for (j, q) in layout.interior_to_padded().enumerate() {
        let mut acc = 0.0;
        for (axis, flux) in fluxes.iter().enumerate() {
            let s = layout.padded_stride[axis];
            acc += (flux[q - s] - flux[q]) / grid.spacing()[axis];
        }
        out[j] = acc;
    }
    if let Some(mask) = grid.mask() {
        for (v, &active) in out.iter_mut().zip(mask) {
            if !active {
                *v = 0.0;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid1(n: usize) -> Arc<Grid> {
        Grid::build(1, &[1.0], &[n]).unwrap().shared()
    }

    #[test]
    fn zero_field_has_zero_gradient() {
        let g = Grid::build(2, &[1.0, 1.0], &[5, 7]).unwrap().shared();
        let grad = gradient(&Field::zeros(g));
        for axis in 0..2 {
            assert!(grad.component(axis).iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn linear_field_has_unit_interior_slope() {
        let g = grid1(19);
        let u = Field::from_fn(g, |x| x[0]).unwrap();
        let grad = gradient(&u);
        let edges: Vec<f64> = grad.edges(0).collect();
        assert_eq!(edges.len(), 20);
        // all but the last cell, whose right end is the boundary zero
        for &e in &edges[..19] {
            assert!((e - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sine_gradient_is_first_order_accurate() {
        let n = 199;
        let g = grid1(n);
        let h = g.spacing()[0];
        let u = Field::from_fn(g.clone(), |x| (PI * x[0]).sin()).unwrap();
        let grad = gradient(&u);
        let err = grad
            .edges(0)
            .enumerate()
            .map(|(k, e)| (e - PI * (PI * (k as f64 + 0.5) * h).cos()).abs())
            .fold(0.0, f64::max);
        assert!(err < 2.0 * h, "max error {err}");
    }

    #[test]
    fn integrate_examples() {
        let g = Grid::build(2, &[1.0, 1.0], &[30, 30]).unwrap();
        let ones = vec![1.0; g.cell_count()];
        assert!((integrate(&g, &ones).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(integrate(&g, &vec![0.0; g.cell_count()]).unwrap(), 0.0);
        assert!(integrate(&g, &[1.0]).is_err());

        let n = 99;
        let g = Grid::build(1, &[1.0], &[n]).unwrap();
        let h = g.spacing()[0];
        let cells: Vec<f64> = (0..g.cell_count())
            .map(|c| (PI * g.cell_center(c)[0]).sin().powi(2))
            .collect();
        assert!((integrate(&g, &cells).unwrap() - 0.5).abs() < h * h);
    }

    #[test]
    fn integrate_is_linear() {
        let g = Grid::build(2, &[1.0, 2.0], &[6, 9]).unwrap();
        let v: Vec<f64> = (0..g.cell_count()).map(|c| (c as f64 * 0.37).sin()).collect();
        let w: Vec<f64> = (0..g.cell_count()).map(|c| (c as f64 * 1.3).cos()).collect();
        let (a, b) = (2.5, -0.75);
        let comb: Vec<f64> = v.iter().zip(&w).map(|(x, y)| a * x + b * y).collect();
        let lhs = integrate(&g, &comb).unwrap();
        let rhs = a * integrate(&g, &v).unwrap() + b * integrate(&g, &w).unwrap();
        assert!((lhs - rhs).abs() < 1e-13);
    }

    #[test]
    fn seminorm_examples() {
        let g = grid1(399);
        let h2 = g.spacing()[0].powi(2);
        let zero = Field::zeros(g.clone());
        assert_eq!(seminorm(&zero, 3.0).unwrap(), 0.0);
        let u = Field::from_fn(g, |x| (PI * x[0]).sin()).unwrap();
        let s2 = seminorm(&u, 2.0).unwrap();
        assert!((s2 - PI / 2f64.sqrt()).abs() < 5.0 * h2, "{s2}");
        let s4 = seminorm(&u, 4.0).unwrap();
        let exact = (3.0 * PI.powi(4) / 8.0).powf(0.25);
        assert!((s4 - exact).abs() < 5.0 * h2, "{s4} vs {exact}");
        assert!(seminorm(&u, 1.0).is_err());
    }

    #[test]
    fn axis_norm_of_bubble() {
        let n = 99;
        let g = Grid::build(2, &[1.0, 1.0], &[n, n]).unwrap().shared();
        let h2 = g.spacing()[0].powi(2);
        let u = Field::from_fn(g.clone(), |x| x[0] * (1.0 - x[0]) * x[1] * (1.0 - x[1])).unwrap();
        let v = axis_norm(&u, 0, 2.0).unwrap();
        assert!((v - (1.0f64 / 90.0).sqrt()).abs() < 2.0 * h2, "{v}");
        assert!(axis_norm(&u, 2, 2.0).is_err());
        assert_eq!(axis_norm(&Field::zeros(g), 1, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn seminorm_is_homogeneous() {
        let g = Grid::build(2, &[1.0, 1.0], &[12, 9]).unwrap().shared();
        let u = Field::from_fn(g, |x| (3.0 * x[0]).sin() * x[1] + x[0] * x[0]).unwrap();
        for &p in &[1.5, 2.0, 3.5] {
            let base = seminorm(&u, p).unwrap();
            for &t in &[0.5, 2.0, 10.0] {
                let scaled = seminorm(&u.scaled(t), p).unwrap();
                assert!((scaled - t * base).abs() <= 1e-12 * t * base);
            }
        }
    }

    #[test]
    fn dirichlet_energy_converges_at_second_order() {
        let exact = PI * PI / 2.0;
        let errors: Vec<f64> = [25usize, 50, 100]
            .iter()
            .map(|&n| {
                let g = Grid::build(2, &[1.0, 1.0], &[n, n]).unwrap().shared();
                let u = Field::from_fn(g, |x| (PI * x[0]).sin() * (PI * x[1]).sin()).unwrap();
                (seminorm(&u, 2.0).unwrap().powi(2) - exact).abs()
            })
            .collect();
        for w in errors.windows(2) {
            // resolutions n and 2n: h ratio is (2n+2)/(n+1) ≈ 2
            let order = (w[0] / w[1]).log2();
            assert!(order >= 1.8, "observed order {order}");
        }
    }

    #[test]
    fn divergence_is_adjoint_of_gradient() {
        let g = Grid::build(3, &[1.0, 0.7, 1.3], &[4, 5, 3]).unwrap().shared();
        let u = Field::from_fn(g.clone(), |x| (x[0] * 5.0).sin() + x[1] * x[2]).unwrap();
        let v = Field::from_fn(g.clone(), |x| (x[2] * 3.0).cos() * x[0]).unwrap();
        let gu = gradient(&u);
        let gv = gradient(&v);
        let fluxes: Vec<Vec<f64>> = (0..3).map(|a| gu.component(a).to_vec()).collect();
        let r = negative_divergence(&g, &fluxes);
        let lhs: f64 = r.iter().zip(v.values()).map(|(a, b)| a * b).sum::<f64>() * g.cell_volume();
        let rhs: f64 = (0..3)
            .map(|a| gu.edges(a).zip(gv.edges(a)).map(|(x, y)| x * y).sum::<f64>())
            .sum::<f64>()
            * g.cell_volume();
        assert!((lhs - rhs).abs() < 1e-12 * rhs.abs());
    }
}
