//! Finite tracial von Neumann algebras: direct sums of full matrix blocks
//! with a positive trace weight on each block.

mod algebra;
mod projection;
mod spectral;

pub use algebra::{BlockSpec, CMatrix, OperatorMatrix, TracialAlgebra};
pub use projection::{ProjectionOp, PROJECTION_TOL};
pub(crate) use spectral::require_bidisjoint;
pub use spectral::{
    abs_op, bidisjoint_square_identity, disjointness, kp_boundary, kp_membership,
    measure_distance_op, mu_op, operator_norm, psd_sqrt, schatten_lorentz_norm,
    singular_system, spectral_cut, supports, supports_with_tol, uniform_integrability_profile,
    Disjointness, SingularSystem, SingularTriple, SquareIdentity, DISJOINT_TOL, NOISE_FLOOR,
    RANK_TOL,
};
