//! Exact computations with finite modules over subalgebras of the mod 2
//! Steenrod algebra, their minimal resolutions and Ext charts, and the
//! root-system test for Spin structures on adjoint representations.

pub mod error;
pub mod f2linalg;
pub mod fpmod;
pub mod resolve;
pub mod rootspin;
pub mod steenrod;

pub use error::{Error, Result};
