use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// One full matrix block `M_dim` carrying the trace `scale · tr`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub dim: usize,
    pub scale: f64,
}

/// A finite direct sum of full matrix blocks with a faithful trace
/// `τ(x) = Σ_b scale_b · tr(x_b)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AlgebraRepr", into = "AlgebraRepr")]
pub struct TracialAlgebra {
    blocks: Vec<BlockSpec>,
}

#[derive(Serialize, Deserialize)]
struct AlgebraRepr {
    blocks: Vec<BlockSpec>,
}

impl TryFrom<AlgebraRepr> for TracialAlgebra {
    type Error = Error;
    fn try_from(r: AlgebraRepr) -> Result<Self> {
        TracialAlgebra::new(r.blocks)
    }
}

impl From<TracialAlgebra> for AlgebraRepr {
    fn from(a: TracialAlgebra) -> Self {
        AlgebraRepr { blocks: a.blocks }
    }
}

impl TracialAlgebra {
    pub fn new(blocks: Vec<BlockSpec>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidAlgebra("at least one block is required".into()));
        }
        for (i, b) in blocks.iter().enumerate() {
            if b.dim == 0 {
                return Err(Error::InvalidAlgebra(format!("block {i} has dimension 0")));
            }
            if !(b.scale.is_finite() && b.scale > 0.0) {
                return Err(Error::InvalidAlgebra(format!(
                    "block {i} has non-positive trace scale {}",
                    b.scale
                )));
            }
        }
        Ok(Self { blocks })
    }

    /// `M_dim` with trace `scale · tr`.
    pub fn matrix(dim: usize, scale: f64) -> Result<Self> {
        Self::new(vec![BlockSpec { dim, scale }])
    }

    /// `ℓ_∞^n` with point masses `weights`.
    pub fn commutative(weights: &[f64]) -> Result<Self> {
        Self::new(
            weights
                .iter()
                .map(|&scale| BlockSpec { dim: 1, scale })
                .collect(),
        )
    }

    pub fn blocks(&self) -> &[BlockSpec] {
        &self.blocks
    }

    pub fn is_commutative(&self) -> bool {
        self.blocks.iter().all(|b| b.dim == 1)
    }

    /// `τ(1)`.
    pub fn total_trace(&self) -> f64 {
        self.blocks.iter().map(|b| b.dim as f64 * b.scale).sum()
    }

    /// Sum of block dimensions.
    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.dim).sum()
    }
}

/// An element of a [`TracialAlgebra`], stored block by block.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    algebra: Arc<TracialAlgebra>,
    blocks: Vec<CMatrix>,
}

impl OperatorMatrix {
    pub fn from_blocks(algebra: Arc<TracialAlgebra>, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != algebra.blocks.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} blocks given for an algebra with {}",
                blocks.len(),
                algebra.blocks.len()
            )));
        }
        for (i, (m, spec)) in blocks.iter().zip(&algebra.blocks).enumerate() {
            if m.nrows() != spec.dim || m.ncols() != spec.dim {
                return Err(Error::ShapeMismatch(format!(
                    "block {i} is {}x{}, expected {}x{}",
                    m.nrows(),
                    m.ncols(),
                    spec.dim,
                    spec.dim
                )));
            }
            if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                return Err(Error::ShapeMismatch(format!("block {i} has non-finite entries")));
            }
        }
        Ok(Self { algebra, blocks })
    }

    pub fn zeros(algebra: Arc<TracialAlgebra>) -> Self {
        let blocks = algebra
            .blocks
            .iter()
            .map(|b| CMatrix::zeros(b.dim, b.dim))
            .collect();
        Self { algebra, blocks }
    }

    pub fn identity(algebra: Arc<TracialAlgebra>) -> Self {
        let blocks = algebra
            .blocks
            .iter()
            .map(|b| CMatrix::identity(b.dim, b.dim))
            .collect();
        Self { algebra, blocks }
    }

    /// Block-diagonal operator with the given diagonal entries, listed
    /// block after block.
    pub fn diagonal(algebra: Arc<TracialAlgebra>, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != algebra.total_dim() {
            return Err(Error::LengthMismatch {
                expected: algebra.total_dim(),
                actual: entries.len(),
            });
        }
        let mut rest = entries;
        let blocks = algebra
            .blocks
            .iter()
            .map(|b| {
                let (head, tail) = rest.split_at(b.dim);
                rest = tail;
                CMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(head))
            })
            .collect();
        Ok(Self { algebra, blocks })
    }

    /// Matrix unit `e_{row,col}` inside block `block`.
    pub fn matrix_unit(
        algebra: Arc<TracialAlgebra>,
        block: usize,
        row: usize,
        col: usize,
    ) -> Result<Self> {
        let dim = algebra
            .blocks
            .get(block)
            .ok_or_else(|| Error::OutOfRange(format!("block {block} does not exist")))?
            .dim;
        if row >= dim || col >= dim {
            return Err(Error::OutOfRange(format!(
                "matrix unit ({row},{col}) outside a {dim}x{dim} block"
            )));
        }
        let mut out = Self::zeros(algebra);
        out.blocks[block][(row, col)] = Complex64::new(1.0, 0.0);
        Ok(out)
    }

    pub fn algebra(&self) -> &Arc<TracialAlgebra> {
        &self.algebra
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &CMatrix {
        &self.blocks[i]
    }

    pub fn into_blocks(self) -> Vec<CMatrix> {
        self.blocks
    }

    pub fn same_algebra(&self, other: &OperatorMatrix) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) || *self.algebra == *other.algebra
    }

    fn require_same_algebra(&self, other: &OperatorMatrix) -> Result<()> {
        if self.same_algebra(other) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    fn zip_with(
        &self,
        other: &OperatorMatrix,
        f: impl Fn(&CMatrix, &CMatrix) -> CMatrix,
    ) -> Result<Self> {
        self.require_same_algebra(other)?;
        Ok(Self {
            algebra: Arc::clone(&self.algebra),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn checked_add(&self, other: &OperatorMatrix) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &OperatorMatrix) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn checked_mul(&self, other: &OperatorMatrix) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            algebra: Arc::clone(&self.algebra),
            blocks: self.blocks.iter().map(|b| b * c).collect(),
        }
    }

    /// Applies `f` to every stored entry.
    pub fn map_entries(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            algebra: Arc::clone(&self.algebra),
            blocks: self.blocks.iter().map(|b| b.map(&f)).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            algebra: Arc::clone(&self.algebra),
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    /// `τ(x)`.
    pub fn trace(&self) -> Complex64 {
        self.blocks
            .iter()
            .zip(&self.algebra.blocks)
            .map(|(m, spec)| m.trace() * spec.scale)
            .sum()
    }

    /// Unweighted Frobenius norm over all blocks.
    pub fn frobenius_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|m| m.norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    /// `τ(x* x)^{1/2}`.
    pub fn trace_l2_norm(&self) -> f64 {
        self.blocks
            .iter()
            .zip(&self.algebra.blocks)
            .map(|(m, spec)| spec.scale * m.norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks
            .iter()
            .all(|m| m.iter().all(|z| z.re == 0.0 && z.im == 0.0))
    }

    /// `max_b ‖x_b - x_b*‖_F`.
    pub fn hermitian_defect(&self) -> f64 {
        self.blocks
            .iter()
            .map(|m| (m - m.adjoint()).norm())
            .fold(0.0, f64::max)
    }

    /// `Σ_k c_k x_k` over operators in one algebra.
    pub fn linear_combination(xs: &[OperatorMatrix], coeffs: &[Complex64]) -> Result<Self> {
        let first = xs.first().ok_or(Error::EmptyFamily)?;
        if coeffs.len() != xs.len() {
            return Err(Error::LengthMismatch {
                expected: xs.len(),
                actual: coeffs.len(),
            });
        }
        let mut acc = Self::zeros(Arc::clone(&first.algebra));
        for (x, &c) in xs.iter().zip(coeffs) {
            acc.require_same_algebra(x)?;
            for (a, b) in acc.blocks.iter_mut().zip(&x.blocks) {
                *a += b * c;
            }
        }
        Ok(acc)
    }
}

/// JSON form `{"algebra":{"blocks":[...]},"blocks":[{"re":[[..]],"im":[[..]]}]}`.
#[derive(Serialize, Deserialize)]
struct OperatorRepr {
    algebra: TracialAlgebra,
    blocks: Vec<BlockRepr>,
}

#[derive(Serialize, Deserialize)]
struct BlockRepr {
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

fn block_from_repr(i: usize, dim: usize, b: BlockRepr) -> Result<CMatrix> {
    let ok_rows = |rows: &Vec<Vec<f64>>| rows.len() == dim && rows.iter().all(|r| r.len() == dim);
    if !ok_rows(&b.re) || !ok_rows(&b.im) {
        return Err(Error::ShapeMismatch(format!(
            "block {i} must have {dim}x{dim} re and im parts"
        )));
    }
    Ok(CMatrix::from_fn(dim, dim, |r, c| {
        Complex64::new(b.re[r][c], b.im[r][c])
    }))
}

impl Serialize for OperatorMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let blocks = self
            .blocks
            .iter()
            .map(|m| BlockRepr {
                re: (0..m.nrows())
                    .map(|r| (0..m.ncols()).map(|c| m[(r, c)].re).collect())
                    .collect(),
                im: (0..m.nrows())
                    .map(|r| (0..m.ncols()).map(|c| m[(r, c)].im).collect())
                    .collect(),
            })
            .collect();
        OperatorRepr {
            algebra: (*self.algebra).clone(),
            blocks,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OperatorMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = OperatorRepr::deserialize(d)?;
        let algebra = Arc::new(repr.algebra);
        if repr.blocks.len() != algebra.blocks().len() {
            return Err(serde::de::Error::custom(Error::ShapeMismatch(format!(
                "{} blocks given for an algebra with {}",
                repr.blocks.len(),
                algebra.blocks().len()
            ))));
        }
        let blocks = repr
            .blocks
            .into_iter()
            .zip(algebra.blocks())
            .enumerate()
            .map(|(i, (b, spec))| block_from_repr(i, spec.dim, b))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        OperatorMatrix::from_blocks(algebra, blocks).map_err(serde::de::Error::custom)
    }
}
