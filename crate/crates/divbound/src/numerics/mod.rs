//! Numerical substrate: weighted Gaussian quadrature on Gamma and Gaussian
//! measures, bracketed scalar root finding, and divergence evaluation for
//! discrete and grid distributions.

mod dist;
mod interval;
mod quad;
mod roots;
pub mod special;

pub use dist::{DistributionSpec, Divergence};
pub use interval::Interval;
pub use quad::{QuadratureScheme, WeightKind, DEFAULT_NODE_COUNT};
pub use roots::find_root;
