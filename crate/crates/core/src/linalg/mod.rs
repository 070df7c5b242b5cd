//! Exact linear algebra over ℤ and prime fields: sparse matrices, Smith normal
//! form, integer solving, chain complexes and homology.

mod coeff;
mod complex;
mod elim;
mod kernel;
mod matrix;
mod reduce;
mod snf;

pub use complex::{ChainComplex, DegreeHomology, HomologyReport, Ring};
pub use kernel::{subcomplex_kernel, ChainMap, KernelComplex};
pub use matrix::IntMatrix;
pub use reduce::{abs_det, kernel_basis, rank_mod_p, rank_torsion, solve_integer, RankTorsion, Solution};
pub use snf::{smith_normal_form, Snf};

pub(crate) use reduce::solve_sparse_i64;
