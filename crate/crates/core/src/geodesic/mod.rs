//! Minimum-dissipation protocols: geodesics of the thermodynamic metric.

mod christoffel;
mod solve;

pub use christoffel::*;
pub use solve::*;
