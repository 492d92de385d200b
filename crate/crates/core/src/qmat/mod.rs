//! Dense complex linear algebra and quantum-state primitives.

mod eig;
mod matrix;
mod random;
mod state;

pub use eig::{hermitian_eig, hermitian_eigenvalues, HermitianEigen};
pub use matrix::{kron, kron_vec, ComplexMatrix};
pub use random::{random_density, random_haar_pure, random_local_unitary, random_unitary, RandomSource};
pub use state::{
    partial_trace, pure_to_density, purify, validate_density, DensityMatrix, PartyDims, PureState, State,
    Subset, ValidationReport, NEGATIVITY_TOL, SUPPORT_TOL,
};
