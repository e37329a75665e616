//! Experiment orchestration for the KGS and KGZ integrators: reference
//! solutions, convergence tables with observed rates, energy-drift series,
//! error-versus-runtime records, and CSV/JSON reports.
//!
//! The `epavf` binary exposes the same operations as subcommands.

pub mod config;
pub mod error;
pub mod problem;
pub mod reference;
pub mod report;
pub mod study;

pub use config::{ConfigFile, ExperimentConfig, StudyKind};
pub use error::{HarnessError, Result};
pub use problem::{field_errors, initial_snapshot, simulate, ModelSpec, NamedField, Problem, RunSettings, Simulation, Snapshot};
pub use reference::{
    generate_reference, Provenance, Reference, ReferenceSource, ReferenceSpec, DESK_TAU_REF, PAPER_H_REF,
    PAPER_TAU_REF, REFERENCE_SCHEMA_VERSION,
};
pub use report::{emit, Report, ReportFormat, REPORT_SCHEMA_VERSION};
pub use study::{
    convergence_study, efficiency_study, energy_study, fill_rates, observed_rate, run_simulation, ConvergenceRow,
    EfficiencyRecord, EnergySeries, FieldError, FieldRate, SimulationRecord,
};
