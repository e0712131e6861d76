//! Sub-Riemannian geodesic flow on the step-3 Carnot group J²(ℝ²,ℝ) of 2-jets of
//! functions of two variables, its reduction to a two-degree-of-freedom Hamiltonian with
//! quartic potential, and numerical tools for studying that reduced system.

// Comparisons are written as `!(x < bound)` on purpose so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod bvp;
pub mod carnot;
pub mod error;
pub mod hamiltonian;
pub mod integrators;
pub mod quadrature;
pub mod reduction;
pub mod verify;

pub use carnot::{AlgebraVector, Basis, GroupPoint, StructureConstants};
pub use error::{ConfigError, IntegrationError, ReconstructionError};
pub use hamiltonian::{energy, full_vector_field, momentum_five, momentum_map, CotangentState};
pub use integrators::{IntegratorConfig, Scheme, Trajectory};
pub use reduction::{h_mu, phi, Mu, ReducedState};
