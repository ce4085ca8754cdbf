//! Voronoi cells, competition processes and separated sphere covers on
//! Cayley graphs of a few finitely generated groups.

mod bits;
pub mod covering;
mod error;
pub mod graphs;
pub mod metric;
pub mod voronoi;

pub use bits::Bits;
pub use error::{Error, Result};
pub use graphs::{Family, GenStyle, GraphSpec, LatticeSpec, Vertex};
pub use metric::{ball, distance, sphere, BallTable, Distance, Limits};
