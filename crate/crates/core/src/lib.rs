//! Computable objects of non-commutative Lorentz space theory on finite
//! tracial matrix algebras.
//!
//! The crate is organised bottom-up:
//!
//! * [`rearrangement`]: decreasing rearrangements as exact step functions,
//!   head integrals and submajorization.
//! * [`lorentz`]: `L_{p,q}` and `ℓ_{p,q}` quasi-norms and lattice inequality
//!   estimators.
//! * [`operator`]: tracial block algebras, singular value functions,
//!   supports and Schatten–Lorentz norms.
//! * [`amplification`]: row embeddings into matrices over the algebra and
//!   the disjointification map.
//! * [`rademacher`]: Rademacher averages and Khintchine-type ratios.
//! * [`diagnostics`]: distortion against `ℓ_r`, commutative transfer and
//!   the perturbation envelope.

pub mod amplification;
pub mod diagnostics;
pub mod error;
pub mod lorentz;
pub mod operator;
pub mod rademacher;
pub mod rearrangement;
pub mod sampling;

pub use error::{Error, Result};
pub use lorentz::LorentzIndex;
pub use operator::{OperatorMatrix, ProjectionOp, TracialAlgebra};
pub use rearrangement::{SimpleFunction, StepFunction};
