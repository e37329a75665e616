//! Fourier (periodic) and sine (homogeneous Dirichlet) pseudospectral
//! operators on 1D and 2D grids: eigenvalue tables, fast transforms,
//! spectral multipliers, and the `sinc`/`verc` kernels used by the
//! trigonometric matrix functions.

pub mod basis;
pub mod dense;
pub mod error;
pub mod grid2d;
pub mod kernels;
pub mod space;

pub use basis::{second_derivative_eigenvalues, BasisKind, SpectralBasis};
pub use error::{Result, SpectralError};
pub use grid2d::Grid2D;
pub use kernels::{sinc, verc, verc2};
pub use rustfft::num_complex::Complex64;
pub use space::{multiplier, Block2, SpectralGrid, SpectralSpace};
