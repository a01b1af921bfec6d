//! Exact-arithmetic workbench for the semi-infinite operator algebra acting on
//! Laurent-series spaces, the Witt and Neveu–Schwarz intermediate-series
//! representations, their cocycles, and truncated-jet flows on charts of the
//! Sato Grassmannian.
//!
//! Everything is computed over the rationals; every check in this crate is an
//! exact equality.

pub mod chart;
pub mod error;
pub mod flow;
pub mod grassmann;
pub mod jet;
pub mod json;
pub mod linalg;
pub mod operator;
pub mod scalar;
pub mod super_ns;
pub mod verify;
pub mod witt;

pub use error::{Error, Result};
pub use scalar::{Parity, Scalar};
