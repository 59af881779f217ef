//! Dense complex matrices and the decompositions the rest of the crate
//! consumes.

pub mod decomp;
pub mod eigen;
pub mod matrix;
pub mod spectral;
pub mod tolerance;

pub use decomp::{
    approx_eq, distance, inverse, matrix_sqrt_pd, null_space, op_norm, op_norm_le,
    orthogonalize_against, orthonormal_column_basis, vec_norm, rank_numeric, singular_values, Lu,
};
pub use eigen::{eigenvalues, hermitian_eigen, schur, spectral_radius, Schur};
pub use matrix::{c64, ComplexMatrix, C64};
pub use spectral::{spectral_split, SpectralComponent, SpectralSplit};
pub use tolerance::ToleranceConfig;
