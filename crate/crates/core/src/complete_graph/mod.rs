//! The complete graph operad `K` of oriented weight systems, its layers
//! `K_n`, and the cells `E(κ)` and `D_n(κ)` it indexes.

mod cells;
mod weight;

pub use cells::{
    build_cell, dual_kappa, latching, latching_by_colimit, latching_split, union_cells, Cell, CellKind, Latching,
    SplitReport,
};
pub use weight::{enumerate_kn, hasse_edges, poset_cmp, WeightSystem};

#[cfg(test)]
pub(crate) mod tests;
