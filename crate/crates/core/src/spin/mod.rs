//! γ-matrix representations of ℂCl(n) for even n, spin generators,
//! intertwiners, tetrads and spinor connections.

mod connection;
mod gamma;
mod generators;
mod intertwiner;
mod tetrad;

pub use connection::{spin_connection_matrix, vertical_covariant_differential};
pub use gamma::{commutant_dimension, gamma_matrices, GammaRep};
pub use generators::{so_generator, spin_generators, vector_action_defect, SpinGenerators};
pub use intertwiner::{intertwiner_space, Intertwiners};
pub use tetrad::{coordinate_gammas, gamma_of_covector, Tetrad};

use crate::clifford::{complexify_map, minimal_left_ideal, primitive_idempotent, Signature};
use crate::linalg::CMatrix;
use crate::Result;

/// Matrices of left multiplication by the (complexified) generators on a
/// minimal left ideal of ℂCl(n). For even n this is the spinor
/// representation built from the algebra itself.
pub fn left_ideal_representation(sig: Signature) -> Result<Vec<CMatrix>> {
    let basis = complexify_map(sig);
    let p = primitive_idempotent(basis.target);
    let ideal = minimal_left_ideal(&p)?;
    Ok(basis.images.iter().map(|w| ideal.left_action(w)).collect())
}
