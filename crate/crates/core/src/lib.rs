//! Shortest non-trivial closed curves and shortest essential arcs on weighted
//! combinatorial surfaces.
//!
//! A surface is a connected graph given by a rotation system, with positive
//! rational edge weights and a set of perforated faces acting as boundary
//! components. On top of that representation the crate provides homotopy
//! tests, deterministic shortest path trees, cutting along curves, the first,
//! second and third systoles, shortest essential arcs, and a brute-force
//! length-spectrum oracle used for validation.

pub mod curves;
pub mod cutting;
pub mod error;
pub mod essential_arcs;
pub mod fixtures;
pub mod format;
pub mod homotopy;
pub mod oracle;
mod par;
pub mod shortest_paths;
pub mod surface;
pub mod systoles;

pub use curves::{Arc, ArcEnd, Walk};
pub use error::{Error, Result};
pub use surface::{HalfEdge, Surface};

/// Exact rational number used for reported lengths and weights.
pub type Rational = num_rational::BigRational;

/// Formats a rational as `p/q`, printing integers as `p/1`.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}
