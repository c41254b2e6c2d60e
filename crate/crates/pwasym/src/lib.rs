//! Symbolic abstractions and controller synthesis for discrete-time
//! piecewise-affine (PWA) control systems.
//!
//! The crate builds finite symbolic models of a PWA system by recursive
//! polytope refinement, certifies their accuracy through a granularity
//! bound on the simulation metric, and synthesizes symbolic controllers
//! enforcing nondeterministic finite-automaton specifications aligned
//! with the mode partition.
//!
//! Everything is computed over exact rationals: geometric predicates,
//! refinement invariants and controller containment checks are decided
//! without tolerances.
//!
//! Module map:
//! - [`geometry`]: exact polytope kernel (dual representation, projection,
//!   set difference, diameter, the pseudo-metric `d_p`).
//! - [`splitting`]: grid splitting policies with a contraction rate.
//! - [`pwa`]: the PWA system, its trajectories and its embedding into a
//!   transition system over a bounded analysis region.
//! - [`abstraction`]: the refinement sequence of symbolic models, spurious
//!   transition detection, granularity and simulation checks.
//! - [`synthesis`]: input-overlap graphs, symbolic control strategies,
//!   closed-loop simulation and enforcement checking.

pub mod abstraction;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod linalg;
pub mod lp;
pub mod pwa;
pub mod sample;
pub mod scalar;
pub mod splitting;
pub mod synthesis;

pub use error::{Error, Result};
pub use geometry::{dp_distance, set_difference, Halfspace, Polytope, PolytopeSet};
pub use linalg::{Matrix, Point};
pub use scalar::Scalar;
