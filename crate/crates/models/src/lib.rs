//! Klein-Gordon-Schrodinger (periodic) and Klein-Gordon-Zakharov (Dirichlet)
//! pseudospectral models in 1D and 2D, with the EPAVF family of
//! energy-preserving exponential integrators, the EAVF / AVF / PAVF
//! comparison schemes through `epavf-core`, and the three-level CISP / DISP
//! schemes for KGZ.

pub mod baseline;
pub mod dense;
pub mod error;
pub mod kgs;
pub mod kgz;
pub mod modes;
pub mod presets;
pub mod run;
pub mod scheme;
pub mod snapshot;

pub use baseline::CoreRoute;
pub use dense::{dense_d2, kgs_dense_system, kgz_dense_system};
pub use error::{ModelError, Result};
pub use kgs::{KgsModel, KgsParams, KgsPropagators, KgsSolver, KgsState, KgsSystem};
pub use kgz::{Bootstrap, KgzModel, KgzParams, KgzPropagators, KgzSolver, KgzState, KgzSystem, ThreeLevelTables};
pub use modes::{cayley_entries, exp_phi_entries, property5_residual, LinearBlock, SpectralExp, SpectralMidpoint};
pub use presets::{kgs_example1, kgs_example2, kgz_example3, kgz_example4, Preset};
pub use run::{relative_energy_errors, run, step_count, Instability, Integrator, ModelState, RunReport, BLOWUP_FACTOR};
pub use scheme::{ModelKind, Scheme};
