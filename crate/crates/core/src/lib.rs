//! Tensor algebra, parametric curves, curvilinear coordinates and surface
//! geometry, all driven by expression maps evaluated with exact derivatives.

pub mod cli;
pub mod coords;
pub mod curve;
pub mod error;
pub mod expr;
pub mod quad;
pub mod surface;
pub mod tensor2;
pub mod tensor4;

pub use error::{Error, Result};
