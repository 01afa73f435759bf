//! One-dimensional spectral tools: Chebyshev–Gauss–Lobatto grids, dense complex
//! linear solves and composite Gauss–Legendre quadrature.

pub mod dense;
pub mod grid;
pub mod quadrature;

pub use dense::{solve_dense, DenseSolution, DenseSystem, LuFactors};
pub use grid::{Grid1D, GridSpec, RealMatrix};
pub use quadrature::{gauss_legendre, QuadGrid};
