//! Finite-time thermodynamics of the driven resonant-level model.

pub mod cli;
pub mod control;
pub mod dynamics;
pub mod error;
pub mod geodesic;
pub mod geometry;
pub mod ode;
pub mod protocols;
pub mod special;

pub use control::{AnalyticPath, ControlPoint, Interpolation, Protocol, ProtocolFile, ProtocolSample, RadialProfile};
pub use error::{Error, Result};
