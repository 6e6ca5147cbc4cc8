//! Uniform tensor grids on box domains with homogeneous Dirichlet boundary values.
//!
//! A grid of `n_i` interior nodes per axis has spacing `h_i = L_i / (n_i + 1)`; node `k` on
//! axis `i` sits at `(k + 1) h_i`. Boundary nodes are implicit zeros. Derivatives are forward
//! differences on the edges of the node lattice and integrals are midpoint sums over the
//! `∏ (n_i + 1)` cells that tile the box.
//!
//! Internally every array lives on the *padded* lattice, which adds one boundary layer on each
//! side of every active axis. Unused axes (for `dim < 3`) have padded length 1, so every loop is
//! written once for three axes.

mod field;
mod io;
mod poisson;

use std::sync::Arc;

pub use field::{axis_norm, gradient, integrate, seminorm, Field, GradientField};
pub(crate) use field::{corner_averaged, edge_sum, negative_divergence};
pub use io::{read_field_csv, write_field_csv};
pub use poisson::DirichletLaplacian;

use crate::error::{Error, Result};

/// A tensor grid on `[0, L_1] × … × [0, L_d]` with an optional mask of active interior nodes.
///
/// Masked-out nodes are clamped to zero in every [`Field`], which embeds subdomains (for example
/// a ball) in the box with homogeneous Dirichlet values outside.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    dim: usize,
    extents: Vec<f64>,
    resolution: Vec<usize>,
    spacing: Vec<f64>,
    mask: Option<Vec<bool>>,
    layout: Layout,
}

/// Index arithmetic for interior, padded and cell lattices.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Layout {
    /// Interior counts, 1 on unused axes.
    pub interior: [usize; 3],
    /// Padded counts: `n + 2` on active axes, 1 on unused axes.
    pub padded: [usize; 3],
    /// Row-major strides of the padded lattice.
    pub padded_stride: [usize; 3],
    /// Offset of interior node 0 inside the padded lattice (1 on active axes).
    pub offset: [usize; 3],
    /// Cell counts: `n + 1` on active axes, 1 on unused axes.
    pub cells: [usize; 3],
    pub dim: usize,
}

impl Layout {
    fn new(resolution: &[usize]) -> Self {
        let dim = resolution.len();
        let mut interior = [1; 3];
        let mut padded = [1; 3];
        let mut offset = [0; 3];
        let mut cells = [1; 3];
        for (axis, &n) in resolution.iter().enumerate() {
            interior[axis] = n;
            padded[axis] = n + 2;
            offset[axis] = 1;
            cells[axis] = n + 1;
        }
        let padded_stride = [padded[1] * padded[2], padded[2], 1];
        Layout {
            interior,
            padded,
            padded_stride,
            offset,
            cells,
            dim,
        }
    }

    pub fn padded_len(&self) -> usize {
        self.padded.iter().product()
    }

    pub fn interior_len(&self) -> usize {
        self.interior.iter().product()
    }

    pub fn cell_len(&self) -> usize {
        self.cells.iter().product()
    }

    /// Padded index of every interior node, in row-major interior order.
    pub fn interior_to_padded(&self) -> impl Iterator<Item = usize> + '_ {
        let [n0, n1, n2] = self.interior;
        let [s0, s1, s2] = self.padded_stride;
        let [o0, o1, o2] = self.offset;
        (0..n0).flat_map(move |a| {
            (0..n1).flat_map(move |b| (0..n2).map(move |c| (a + o0) * s0 + (b + o1) * s1 + (c + o2) * s2))
        })
    }

    /// Padded index of the lower corner of every cell, in row-major cell order.
    pub fn cell_bases(&self) -> impl Iterator<Item = usize> + '_ {
        let [n0, n1, n2] = self.cells;
        let [s0, s1, s2] = self.padded_stride;
        (0..n0).flat_map(move |a| (0..n1).flat_map(move |b| (0..n2).map(move |c| a * s0 + b * s1 + c * s2)))
    }

    pub fn corner_count(&self) -> usize {
        1 << self.dim
    }

    /// For every cell corner `c ∈ {0,1}^d` and axis `i`, the padded offset of the axis-`i` edge
    /// that passes through that corner: `Σ_{j≠i} c_j stride_j`.
    pub fn corner_edge_offsets(&self) -> Vec<[usize; 3]> {
        (0..self.corner_count())
            .map(|corner| {
                let mut out = [0usize; 3];
                for (axis, slot) in out.iter_mut().enumerate().take(self.dim) {
                    *slot = (0..self.dim)
                        .filter(|&j| j != axis && corner & (1 << j) != 0)
                        .map(|j| self.padded_stride[j])
                        .sum();
                }
                out
            })
            .collect()
    }
}

impl Grid {
    /// Builds a grid with `resolution[i]` interior nodes on an axis of length `extents[i]`.
    pub fn build(dim: usize, extents: &[f64], resolution: &[usize]) -> Result<Grid> {
        if !(1..=3).contains(&dim) {
            return Err(Error::config(None, format!("dimension must be 1, 2 or 3, got {dim}")));
        }
        if extents.len() != dim {
            return Err(Error::config(
                None,
                format!("expected {dim} extents, got {}", extents.len()),
            ));
        }
        if resolution.len() != dim {
            return Err(Error::config(
                None,
                format!("expected {dim} resolutions, got {}", resolution.len()),
            ));
        }
        for (axis, (&l, &n)) in extents.iter().zip(resolution).enumerate() {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::config(axis, format!("extent must be positive and finite, got {l}")));
            }
            if n < 2 {
                return Err(Error::config(axis, format!("resolution must be at least 2, got {n}")));
            }
        }
        let spacing = extents
            .iter()
            .zip(resolution)
            .map(|(&l, &n)| l / (n + 1) as f64)
            .collect();
        Ok(Grid {
            dim,
            extents: extents.to_vec(),
            resolution: resolution.to_vec(),
            spacing,
            mask: None,
            layout: Layout::new(resolution),
        })
    }

    /// Restricts the active nodes to those whose coordinates satisfy `keep`.
    pub fn with_mask(mut self, keep: impl Fn(&[f64]) -> bool) -> Result<Grid> {
        let mask: Vec<bool> = (0..self.node_count()).map(|j| keep(&self.node_coords(j))).collect();
        if !mask.iter().any(|&m| m) {
            return Err(Error::config(None, "mask leaves no active node"));
        }
        self.mask = Some(mask);
        Ok(self)
    }

    /// Keeps the nodes strictly inside the ball of the given center and radius.
    pub fn with_ball_mask(self, center: &[f64], radius: f64) -> Result<Grid> {
        if center.len() != self.dim {
            return Err(Error::config(None, "ball center has the wrong dimension"));
        }
        if !(radius > 0.0) {
            return Err(Error::config(None, format!("ball radius must be positive, got {radius}")));
        }
        let center = center.to_vec();
        self.with_mask(move |x| {
            let r2: f64 = x.iter().zip(&center).map(|(a, b)| (a - b) * (a - b)).sum();
            r2 < radius * radius
        })
    }

    pub fn shared(self) -> Arc<Grid> {
        Arc::new(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn extents(&self) -> &[f64] {
        &self.extents
    }

    pub fn resolution(&self) -> &[usize] {
        &self.resolution
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    pub fn mask(&self) -> Option<&[bool]> {
        self.mask.as_deref()
    }

    pub fn is_active(&self, node: usize) -> bool {
        self.mask.as_ref().is_none_or(|m| m[node])
    }

    /// Number of interior nodes, `∏ n_i`.
    pub fn node_count(&self) -> usize {
        self.layout.interior_len()
    }

    /// Number of cells, `∏ (n_i + 1)`.
    pub fn cell_count(&self) -> usize {
        self.layout.cell_len()
    }

    /// Cell volume `∏ h_i`, also the quadrature weight of a node.
    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    /// Multi-index of interior node `j` (row-major, axis 0 slowest).
    pub fn node_index(&self, mut j: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim];
        for axis in (0..self.dim).rev() {
            idx[axis] = j % self.resolution[axis];
            j /= self.resolution[axis];
        }
        idx
    }

    /// Physical coordinates of interior node `j`.
    pub fn node_coords(&self, j: usize) -> Vec<f64> {
        self.node_index(j)
            .iter()
            .zip(&self.spacing)
            .map(|(&k, &h)| (k + 1) as f64 * h)
            .collect()
    }

    /// Physical coordinates of the center of cell `c` (row-major cell order).
    pub fn cell_center(&self, mut c: usize) -> Vec<f64> {
        let mut x = vec![0.0; self.dim];
        for axis in (0..self.dim).rev() {
            let n = self.resolution[axis] + 1;
            x[axis] = ((c % n) as f64 + 0.5) * self.spacing[axis];
            c /= n;
        }
        x
    }

    pub(crate) fn layout(&self) -> &Layout {
        &self.layout
    }

    /// Structural equality with a fast path for shared grids.
    pub fn same_as(self: &Arc<Self>, other: &Arc<Grid>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_examples() {
        let g = Grid::build(1, &[1.0], &[99]).unwrap();
        assert!((g.spacing()[0] - 0.01).abs() < 1e-15);
        let g = Grid::build(2, &[1.0, 2.0], &[9, 19]).unwrap();
        assert!((g.spacing()[0] - 0.1).abs() < 1e-15);
        assert!((g.spacing()[1] - 0.1).abs() < 1e-15);
        let g = Grid::build(3, &[1.0; 3], &[31; 3]).unwrap();
        assert_eq!(g.node_count(), 29791);
    }

    #[test]
    fn spacing_reconstructs_extent() {
        for &(l, n) in &[(1.0, 99usize), (2.7, 13), (0.3, 1000)] {
            let g = Grid::build(1, &[l], &[n]).unwrap();
            let back = g.spacing()[0] * (n + 1) as f64;
            assert!((back - l).abs() <= 2.0 * f64::EPSILON * l);
        }
    }

    #[test]
    fn invalid_configurations_name_the_axis() {
        assert!(matches!(Grid::build(4, &[1.0; 4], &[3; 4]), Err(Error::Config { axis: None, .. })));
        assert!(matches!(
            Grid::build(2, &[1.0, -1.0], &[3, 3]),
            Err(Error::Config { axis: Some(1), .. })
        ));
        assert!(matches!(
            Grid::build(2, &[1.0, 1.0], &[1, 3]),
            Err(Error::Config { axis: Some(0), .. })
        ));
        assert!(Grid::build(2, &[1.0], &[3, 3]).is_err());
    }

    #[test]
    fn node_indexing_is_row_major() {
        let g = Grid::build(2, &[1.0, 1.0], &[3, 4]).unwrap();
        assert_eq!(g.node_index(0), vec![0, 0]);
        assert_eq!(g.node_index(1), vec![0, 1]);
        assert_eq!(g.node_index(4), vec![1, 0]);
        let padded: Vec<usize> = g.layout().interior_to_padded().collect();
        // padded lattice is 5 x 6
        assert_eq!(padded[0], 6 + 1);
        assert_eq!(padded[4], 2 * 6 + 1);
    }

    #[test]
    fn ball_mask_keeps_interior_nodes() {
        let g = Grid::build(2, &[2.0, 2.0], &[9, 9])
            .unwrap()
            .with_ball_mask(&[1.0, 1.0], 1.0)
            .unwrap();
        let active = (0..g.node_count()).filter(|&j| g.is_active(j)).count();
        assert!(active > 0 && active < g.node_count());
        assert!(g.is_active(40)); // center node (4,4) at (1,1)
    }

    #[test]
    fn corner_offsets_in_2d() {
        let g = Grid::build(2, &[1.0, 1.0], &[3, 3]).unwrap();
        let offs = g.layout().corner_edge_offsets();
        // stride of axis 0 is 5, of axis 1 is 1
        assert_eq!(offs, vec![[0, 0, 0], [0, 5, 0], [1, 0, 0], [1, 5, 0]]);
    }
}
