//! Ground states of elliptic problems with nonhomogeneous principal part, computed by the
//! Nehari manifold method.
//!
//! The crate discretizes a box domain with a uniform tensor grid ([`grid`]), defines three
//! energy families ([`functionals`]): the quasilinear `p`–`q` operator, the Kirchhoff nonlocal
//! operator and the anisotropic per-axis operator, and computes ground states by minimizing
//! the fiber-maximum `Ψ(w) = max_t Φ(t w)` over the unit sphere ([`fiber`], [`solver`]).
//! The [`verify`] module audits the structural hypotheses that make this work and hosts two
//! independent oracles (radial shooting and the Simon inequality sampler).
//!
//! ```
//! use nehari::functionals::{Functional, Nonlinearity, QuasilinearOperator};
//! use nehari::grid::Grid;
//! use nehari::solver::{minimize, random_init, SolveOptions};
//!
//! let grid = Grid::build(1, &[1.0], &[99]).unwrap().shared();
//! let functional = Functional::new(
//!     QuasilinearOperator::laplacian(2.0).unwrap().into(),
//!     Nonlinearity::pure_power(4.0).unwrap(),
//!     grid.clone(),
//! )
//! .unwrap();
//! let init = random_init(&grid, 3, 2, true);
//! let report = minimize(&functional, &init, &SolveOptions::default()).unwrap();
//! assert!(report.converged && report.c_value > 0.0);
//! ```

pub mod cli;
pub mod error;
pub mod fiber;
pub mod functionals;
pub mod grid;
pub mod numeric;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
