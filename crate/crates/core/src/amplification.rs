//! Matrices over a tracial algebra.
//!
//! `amplify(A, m)` realises `M_m(A)` with trace `Σ_i τ(a_ii)`: block `b` of
//! the result has dimension `m · dim_b` and keeps its trace weight, and the
//! `(i, j)` entry of an element occupies rows `i·dim_b..` and columns
//! `j·dim_b..` of each block. Slots are 0-based.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lorentz::LorentzIndex;
use crate::operator::{
    psd_sqrt, schatten_lorentz_norm, BlockSpec, CMatrix, OperatorMatrix, ProjectionOp,
    TracialAlgebra,
};
use crate::rademacher::{second_moment, AverageSpec};

/// `M_m(A)` together with the base algebra it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplifiedAlgebra {
    base: Arc<TracialAlgebra>,
    copies: usize,
    algebra: Arc<TracialAlgebra>,
}

pub fn amplify(base: &Arc<TracialAlgebra>, copies: usize) -> Result<AmplifiedAlgebra> {
    if copies == 0 {
        return Err(Error::OutOfRange("amplification needs at least one copy".into()));
    }
    let algebra = TracialAlgebra::new(
        base.blocks()
            .iter()
            .map(|b| BlockSpec {
                dim: copies * b.dim,
                scale: b.scale,
            })
            .collect(),
    )?;
    Ok(AmplifiedAlgebra {
        base: Arc::clone(base),
        copies,
        algebra: Arc::new(algebra),
    })
}

impl AmplifiedAlgebra {
    pub fn base(&self) -> &Arc<TracialAlgebra> {
        &self.base
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn algebra(&self) -> &Arc<TracialAlgebra> {
        &self.algebra
    }

    fn check_slot(&self, i: usize, j: usize) -> Result<()> {
        if i >= self.copies || j >= self.copies {
            return Err(Error::OutOfRange(format!(
                "slot ({i},{j}) outside a {m}x{m} amplification",
                m = self.copies
            )));
        }
        Ok(())
    }

    /// The element with `y` at position `(i, j)` and zeros elsewhere.
    pub fn embed(&self, y: &OperatorMatrix, i: usize, j: usize) -> Result<OperatorMatrix> {
        self.check_slot(i, j)?;
        if **y.algebra() != *self.base {
            return Err(Error::AlgebraMismatch);
        }
        let blocks = y
            .blocks()
            .iter()
            .map(|m| {
                let d = m.nrows();
                let mut out = CMatrix::zeros(self.copies * d, self.copies * d);
                out.view_mut((i * d, j * d), (d, d)).copy_from(m);
                out
            })
            .collect();
        OperatorMatrix::from_blocks(Arc::clone(&self.algebra), blocks)
    }

    /// The `(i, j)` entry of `x`, an element of the base algebra.
    pub fn entry(&self, x: &OperatorMatrix, i: usize, j: usize) -> Result<OperatorMatrix> {
        self.check_slot(i, j)?;
        if **x.algebra() != *self.algebra {
            return Err(Error::AlgebraMismatch);
        }
        let blocks = x
            .blocks()
            .iter()
            .zip(self.base.blocks())
            .map(|(m, spec)| {
                let d = spec.dim;
                m.view((i * d, j * d), (d, d)).into_owned()
            })
            .collect();
        OperatorMatrix::from_blocks(Arc::clone(&self.base), blocks)
    }

    /// `π_k`, the unit of the base algebra placed at `(k, k)`.
    pub fn slot_projection(&self, k: usize) -> Result<ProjectionOp> {
        let one = OperatorMatrix::identity(Arc::clone(&self.base));
        Ok(ProjectionOp::from_trusted(self.embed(&one, k, k)?))
    }
}

/// `[y_k]`: `y` at position `(0, k)` of `M_m(A)`.
pub fn row_embed(y: &OperatorMatrix, k: usize, copies: usize) -> Result<OperatorMatrix> {
    amplify(y.algebra(), copies)?.embed(y, 0, k)
}

/// Both sides of `‖Σ a_k [y_k]‖ = ‖(Σ |a_k|² y_k y_k*)^{1/2}‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowNormIdentity {
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs − rhs| / rhs` (absolute when `rhs = 0`).
    pub deviation: f64,
}

fn shared_algebra(xs: &[OperatorMatrix]) -> Result<&Arc<TracialAlgebra>> {
    let first = xs.first().ok_or(Error::EmptyFamily)?;
    if xs.iter().any(|x| !x.same_algebra(first)) {
        return Err(Error::AlgebraMismatch);
    }
    Ok(first.algebra())
}

fn check_lengths(xs: &[OperatorMatrix], a: &[Complex64]) -> Result<()> {
    if xs.len() != a.len() {
        return Err(Error::LengthMismatch {
            expected: xs.len(),
            actual: a.len(),
        });
    }
    Ok(())
}

/// `Σ_k |a_k|² y_k y_k*`.
pub(crate) fn row_square(ys: &[OperatorMatrix], a: &[Complex64]) -> Result<OperatorMatrix> {
    let alg = shared_algebra(ys)?;
    check_lengths(ys, a)?;
    let mut acc = OperatorMatrix::zeros(Arc::clone(alg));
    for (y, c) in ys.iter().zip(a) {
        let term = y.checked_mul(&y.adjoint())?.scale(Complex64::new(c.norm_sqr(), 0.0));
        acc = acc.checked_add(&term)?;
    }
    Ok(acc)
}

pub fn row_norm_identity(
    ys: &[OperatorMatrix],
    a: &[Complex64],
    idx: LorentzIndex,
) -> Result<RowNormIdentity> {
    let alg = shared_algebra(ys)?;
    check_lengths(ys, a)?;
    let amp = amplify(alg, ys.len())?;
    let embedded = ys
        .iter()
        .enumerate()
        .map(|(k, y)| amp.embed(y, 0, k))
        .collect::<Result<Vec<_>>>()?;
    let lhs = schatten_lorentz_norm(&OperatorMatrix::linear_combination(&embedded, a)?, idx)?;
    let rhs = schatten_lorentz_norm(&psd_sqrt(&row_square(ys, a)?)?, idx)?;
    let deviation = if rhs > 0.0 {
        (lhs - rhs).abs() / rhs
    } else {
        (lhs - rhs).abs()
    };
    Ok(RowNormIdentity { lhs, rhs, deviation })
}

/// Output of [`disjointify`]: the doubly amplified algebra and the
/// bi-disjoint sequence living in it.
#[derive(Debug, Clone)]
pub struct Disjointified {
    pub algebra: Arc<TracialAlgebra>,
    pub terms: Vec<OperatorMatrix>,
}

/// `s_k = [z_k*]*` with `z_k = [x_k]`, both amplifications of size `n`.
///
/// Block dimensions grow to `n² · dim_b`.
pub fn disjointify(xs: &[OperatorMatrix]) -> Result<Disjointified> {
    let alg = shared_algebra(xs)?;
    let n = xs.len();
    let first = amplify(alg, n)?;
    let second = amplify(first.algebra(), n)?;
    let terms = xs
        .iter()
        .enumerate()
        .map(|(k, x)| {
            let z = first.embed(x, 0, k)?;
            Ok(second.embed(&z.adjoint(), 0, k)?.adjoint())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Disjointified {
        algebra: Arc::clone(second.algebra()),
        terms,
    })
}

/// Ratio of the Rademacher second moment of `Σ a_k r_k x_k` to
/// `‖Σ a_k s_k‖²` for the disjointified sequence.
pub fn domination_ratio(
    xs: &[OperatorMatrix],
    a: &[Complex64],
    idx: LorentzIndex,
    spec: &AverageSpec,
) -> Result<f64> {
    let moment = second_moment(xs, a, idx, spec)?;
    let d = disjointify(xs)?;
    let norm = schatten_lorentz_norm(&OperatorMatrix::linear_combination(&d.terms, a)?, idx)?;
    if norm == 0.0 {
        return if moment == 0.0 {
            Err(Error::Degenerate("all terms vanish".into()))
        } else {
            Err(Error::NumericDegeneracy(
                "disjointified sum vanishes while the Rademacher moment does not".into(),
            ))
        };
    }
    Ok(moment / (norm * norm))
}
