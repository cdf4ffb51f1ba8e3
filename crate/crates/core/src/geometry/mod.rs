//! Slow-driving geometry: metric, quasistatic work, excess work, weak coupling.

mod functional;
mod metric;

pub use functional::*;
pub use metric::*;
