//! Global quantum discord (GQD) of multi-qubit states.
//!
//! The crate computes GQD by explicit minimization over product projective
//! measurements, evaluates the monogamy deficits and identities built on it,
//! and reproduces the state-family and transverse-field Ising sweeps.
//!
//! Conventions used throughout:
//! - qubit 0 is the leftmost tensor factor (big-endian basis index);
//! - every entropy and correlation quantity is in bits (log base 2).

pub mod discord;
mod error;
pub mod ising;
pub mod measure;
pub mod monogamy;
pub mod optimize;
pub mod qstate;
pub mod states;
pub mod sweep;

pub use discord::{
    gqd, loss_of_correlation, monotonicity_condition_audit, mutual_information, GqdResult,
    MonotonicityReport, OptimizerConfig, Partition,
};
pub use error::{Error, Result};
pub use ising::{
    build_hamiltonian, eval_gqd_formula, gibbs_state, ground_state, symmetric_gqd_scan,
    GroundState, Hamiltonian, HamiltonianSpec, IsingSweepSpec, ThermalSpec,
};
pub use measure::{dephase, site_basis, AngleSet};
pub use monogamy::{
    general_deficit, identity_audit, power_inequality_check, residual_gqd, second_class_audit,
    standard_deficit, AuditReport, AuditSpec, IdentityMode,
};
pub use qstate::{partial_trace, von_neumann_entropy, DensityMatrix, QubitSubset};
pub use states::{make_state, mixed_w_residual_closed_form, random_density, Family, StateSpec};
pub use sweep::SweepRecord;

pub use num_complex::Complex64;
