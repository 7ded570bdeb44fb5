//! Explicit table with a four-corner caustic.
//!
//! The caustic is four rotated copies `iᵏγ₀` of a curve from `A = −1 − i`
//! to `iA`, each parametrized by arc length through its tangent angle `φ`.
//! The table is assembled from two explicit string branches and their
//! rotations.

pub mod config;
pub mod gamma;
pub mod phi;
pub mod smoothness;
pub mod table;

pub use config::{feasibility, feasibility_window, germ_coeffs, string_lengths, Feasibility, SwitchedConfig};
pub use gamma::{build_gamma, Caustic};
pub use phi::{build_phi, PhiFunction};
pub use smoothness::{smoothness_config, smoothness_report, JumpEstimate};
pub use table::{explicit_table, BranchKind, ExplicitTable, TableOptions};
