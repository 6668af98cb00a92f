//! Simulation and analysis toolkit for four inelastic point particles on a
//! line colliding with a fixed restitution coefficient.
//!
//! The crate has four layers:
//!
//! * [`dynamics`] — event-driven trajectories in relative coordinates (gaps
//!   and relative velocities), plus an independent absolute-coordinate
//!   oracle.
//! * [`spherical`] — the reduced map on {a, b, c} x S^2 that encodes the
//!   collision order of every trajectory through the plane spanned by the
//!   state, in trigonometric and purely vectorial forms.
//! * [`pattern`] — self-similar collapse analysis of periodic collision
//!   words: word matrices, eigenvalue branches, the Möbius shape map, its
//!   fixed points, realizability of the schedule, and the known critical
//!   restitution coefficients.
//! * [`sweep`] — deterministic parallel parameter sweeps of the reduced map
//!   with omega-limit sampling, clustering and CSV/JSON-lines output.
//!
//! All trajectory arithmetic is generic over [`scalar::Scalar`]; the
//! double-double type in [`dd`] extends the verification horizon of the
//! repelling self-similar collapses beyond what binary64 can resolve.

pub mod dd;
pub mod dynamics;
pub mod math;
pub mod pattern;
pub mod scalar;
pub mod spherical;
pub mod sweep;

pub use dynamics::{CollisionType, Restitution};
