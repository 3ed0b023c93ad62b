use std::sync::Arc;

use super::algebra::{OperatorMatrix, TracialAlgebra};
use super::spectral::operator_norm;
use crate::error::{Error, Result};

/// Tolerance, in operator norm per block, for `p = p* = p²`.
pub const PROJECTION_TOL: f64 = 1e-10;

/// A self-adjoint idempotent element.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionOp(OperatorMatrix);

impl ProjectionOp {
    pub fn new(p: OperatorMatrix) -> Result<Self> {
        let herm = operator_norm(&p.checked_sub(&p.adjoint())?)?;
        let idem = operator_norm(&p.checked_sub(&p.checked_mul(&p)?)?)?;
        let deviation = herm.max(idem);
        if deviation > PROJECTION_TOL {
            return Err(Error::NotAProjection { deviation });
        }
        Ok(Self(p))
    }

    /// Skips validation; callers build `p` from orthonormal vectors.
    pub(crate) fn from_trusted(p: OperatorMatrix) -> Self {
        Self(p)
    }

    pub fn zero(algebra: Arc<TracialAlgebra>) -> Self {
        Self(OperatorMatrix::zeros(algebra))
    }

    pub fn identity(algebra: Arc<TracialAlgebra>) -> Self {
        Self(OperatorMatrix::identity(algebra))
    }

    pub fn as_operator(&self) -> &OperatorMatrix {
        &self.0
    }

    pub fn into_operator(self) -> OperatorMatrix {
        self.0
    }

    /// `τ(p)`.
    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// `p x p`.
    pub fn compress(&self, x: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.0.checked_mul(x)?.checked_mul(&self.0)
    }

    /// Whether `self ≤ other`, tested as `‖self·other − self‖ ≤ tol`.
    pub fn is_below(&self, other: &ProjectionOp) -> Result<bool> {
        let d = self.0.checked_mul(&other.0)?.checked_sub(&self.0)?;
        Ok(operator_norm(&d)? <= PROJECTION_TOL)
    }
}
