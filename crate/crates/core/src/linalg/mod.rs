//! Dense-matrix primitives: row centering, the leading singular triple,
//! ranking, and residual-spectrum diagnostics.

mod matrix;
mod ranking;
mod svd;

pub use matrix::{center_rows, dot, norm2, CenteredMatrix, Matrix, ObservationMatrix};
pub use ranking::{rank_vector, Permutation, Ranking};
pub use svd::{
    leading_singular_triple, residual_spectrum, residual_spectrum_with, SignConvention,
    SingularTriple, SvdOptions,
};
