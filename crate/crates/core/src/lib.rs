//! Exact chain-level computations with the Barratt-Eccles operad `E`, its
//! little-cubes filtration `E_n`, the complete graph operad, dual cooperads,
//! cobar constructions and the twisting elements relating them.

pub mod barratt_eccles;
pub mod cobar;
pub mod complete_graph;
pub mod operad_core;
pub mod error;
pub mod linalg;
pub mod perm;
pub mod twisting;

pub use error::{Error, Result};
