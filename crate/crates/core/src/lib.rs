//! Billiard tables from convex caustics.
//!
//! * [`point`], [`curve`], [`body`]: plane geometry, arc-length sampled curves
//!   and convex bodies with support and cap-body queries.
//! * [`string_construct`]: the string (gardener's) construction of a table
//!   around a convex caustic, and the string-invariant check.
//! * [`switched`]: the explicit C² table whose caustic has four corners.
//! * [`billiard`]: the billiard map, rotation numbers and caustic verification.
//! * [`io`]: CSV formats for curves and orbits.

pub mod billiard;
pub mod body;
pub mod curve;
pub mod error;
pub mod io;
pub mod numeric;
pub mod point;
pub mod shapes;
pub mod string_construct;
pub mod switched;

pub use billiard::{billiard_map, orbit, rotation_number, verify_caustic, CausticCheck, OrbitRecord, PhaseState, RotationEstimate};
pub use body::{BodyKind, ConvexBody, TangentPair};
pub use curve::{CurveSample, SampledCurve};
pub use error::{Error, Infeasibility, Result};
pub use point::{half_dot, PlanePoint, I};
pub use string_construct::{string_invariant, string_table, StringParams};
