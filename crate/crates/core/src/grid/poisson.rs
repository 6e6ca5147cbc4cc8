use super::{Field, Grid};
use crate::error::Result;

/// Exact inverse of the standard second-difference Dirichlet Laplacian `−Δ_h` on a box, by
/// diagonalization in the discrete sine basis.
///
/// `−Δ_h` here is the operator whose quadratic form is `Σ_edges (Δu/h)² ∏h`, i.e. the
/// `(2d+1)`-point stencil. On masked grids the inverse is applied on the full box and the result
/// is clamped back to the active nodes, which keeps the operator symmetric positive definite on
/// the active subspace.
#[derive(Debug, Clone)]
pub struct DirichletLaplacian {
    /// Per axis: the sine matrix `S_jk = sin(π (j+1)(k+1) / (n+1))`, row-major `n × n`.
    sines: Vec<Vec<f64>>,
    /// Per axis eigenvalues `(4/h²) sin²(π k / (2(n+1)))`.
    eigen: Vec<Vec<f64>>,
    resolution: Vec<usize>,
}

impl DirichletLaplacian {
    pub fn new(grid: &Grid) -> Self {
        let mut sines = Vec::new();
        let mut eigen = Vec::new();
        for (&n, &h) in grid.resolution().iter().zip(grid.spacing()) {
            let np1 = (n + 1) as f64;
            let s: Vec<f64> = (0..n * n)
                .map(|jk| {
                    let (j, k) = (jk / n, jk % n);
                    (std::f64::consts::PI * ((j + 1) * (k + 1)) as f64 / np1).sin()
                })
                .collect();
            let lam = (1..=n)
                .map(|k| {
                    let s = (std::f64::consts::PI * k as f64 / (2.0 * np1)).sin();
                    4.0 * s * s / (h * h)
                })
                .collect();
            sines.push(s);
            eigen.push(lam);
        }
        DirichletLaplacian {
            sines,
            eigen,
            resolution: grid.resolution().to_vec(),
        }
    }

    /// Applies the sine matrix along `axis` in place (row-major nodal layout).
    fn transform_axis(&self, data: &mut [f64], axis: usize) {
        let n = self.resolution[axis];
        let inner: usize = self.resolution[axis + 1..].iter().product();
        let outer: usize = self.resolution[..axis].iter().product();
        let s = &self.sines[axis];
        let mut line = vec![0.0; n];
        let mut out = vec![0.0; n];
        for o in 0..outer {
            for i in 0..inner {
                let base = o * n * inner + i;
                for (k, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + k * inner];
                }
                for (j, slot) in out.iter_mut().enumerate() {
                    let row = &s[j * n..(j + 1) * n];
                    *slot = row.iter().zip(&line).map(|(a, b)| a * b).sum();
                }
                for (k, &v) in out.iter().enumerate() {
                    data[base + k * inner] = v;
                }
            }
        }
    }

    /// Solves `−Δ_h x = r` with zero Dirichlet values.
    pub fn solve(&self, rhs: &Field) -> Result<Field> {
        let grid = rhs.grid().clone();
        let mut data = rhs.values().to_vec();
        let dim = self.resolution.len();
        for axis in 0..dim {
            self.transform_axis(&mut data, axis);
        }
        // S·S = (n+1)/2 · I per axis
        let norm: f64 = self.resolution.iter().map(|&n| 2.0 / (n + 1) as f64).product();
        for (j, v) in data.iter_mut().enumerate() {
            let idx = grid.node_index(j);
            let lam: f64 = idx.iter().enumerate().map(|(a, &k)| self.eigen[a][k]).sum();
            *v *= norm / lam;
        }
        for axis in 0..dim {
            self.transform_axis(&mut data, axis);
        }
        Field::new(grid, data)
    }

    /// Applies `−Δ_h` directly with the stencil.
    pub fn apply(&self, u: &Field) -> Result<Field> {
        let grad = super::gradient(u);
        let fluxes: Vec<Vec<f64>> = (0..u.grid().dim()).map(|a| grad.component(a).to_vec()).collect();
        Field::new(u.grid().clone(), super::field::negative_divergence(u.grid(), &fluxes))
    }
}
