//! Multi-component Hamiltonian systems `dy_i/dt = S_i (L_i y_i + grad_i U)`,
//! averaged-vector-field discrete gradients, and the energy-preserving
//! exponential steppers EPAVF, its adjoint and their symmetric composition,
//! together with the EAVF, AVF and PAVF baselines.

pub mod dg;
pub mod error;
pub mod fixed_point;
pub mod propagator;
pub mod quadrature;
pub mod state;
pub mod steppers;
pub mod system;

pub use dg::{averaged_gradient, avf_line_segment, discrete_gradient, DgSpec, DgVariant};
pub use error::{CoreError, Result};
pub use fixed_point::{fixed_point_solve, try_fixed_point_solve, FixedPointConfig, FixedPointSolution};
pub use propagator::{
    build_dense_midpoint, build_dense_propagator, dense_midpoints, dense_propagators, expm_phi,
    lemma_identities_check, phi_by_quadrature, DenseMidpoint, DensePropagator, ExponentialPropagator,
    LemmaResiduals, MidpointPropagator,
};
pub use quadrature::QuadratureRule;
pub use state::BlockState;
pub use steppers::{
    avf_step, eavf_step, epavf_adjoint_step, epavf_c_step, epavf_step, pavf_adjoint_step, pavf_c_step,
    pavf_step, StepOutcome, StepperConfig,
};
pub use system::{hamiltonian_energy, BlockSystem, Component, GradientFn, HamiltonianSystem, PotentialFn};
