//! Computational engine for metric-affine gauge theory.
//!
//! The crate is organised bottom-up:
//!
//! * [`clifford`]: real and complexified Clifford algebras over a
//!   pseudo-Euclidean space, the Clifford/Pin/Spin group machinery and
//!   minimal left ideals.
//! * [`spin`]: γ-matrix representations for even dimension, spin
//!   generators, intertwiner analysis, tetrads and spinor connections.
//! * [`geometry`]: order-2 jet arithmetic and pointwise tensor calculus for
//!   metrics and general linear connections.
//! * [`field_eqs`]: the metric-affine Hilbert–Einstein Lagrangian, its
//!   Euler–Lagrange residuals and covariance checks.
//! * [`expr`]: the expression language used to define metric, connection
//!   and tetrad fields.
//!
//! All values are immutable after construction and every operation is a pure
//! function, so everything here is `Send + Sync`.

pub mod clifford;
pub mod error;
pub mod expr;
pub mod field_eqs;
pub mod geometry;
pub mod linalg;
pub mod spin;

pub use error::{Error, Result};
