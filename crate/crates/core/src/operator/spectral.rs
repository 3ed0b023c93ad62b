use std::sync::Arc;

use nalgebra::{DVector, SymmetricEigen};
use num_complex::Complex64;

use super::algebra::{CMatrix, OperatorMatrix};
use super::projection::ProjectionOp;
use crate::error::{Error, Result};
use crate::lorentz::{lorentz_norm, LorentzIndex};
use crate::rearrangement::StepFunction;

/// Relative rank tolerance used for supports.
pub const RANK_TOL: f64 = 1e-10;
/// Operator-norm tolerance for `r(x)r(y) = 0` and `l(x)l(y) = 0`.
pub const DISJOINT_TOL: f64 = 1e-10;
/// Singular values below this fraction of the largest one in a block of
/// dimension above one are treated as rounding noise and dropped from `μ`.
pub const NOISE_FLOOR: f64 = 1e-13;

const EIGEN_EPS: f64 = f64::EPSILON;

/// `x_b v = σ u`, `x_b* u = σ v`.
#[derive(Debug, Clone)]
pub struct SingularTriple {
    pub value: f64,
    pub left: DVector<Complex64>,
    pub right: DVector<Complex64>,
}

/// Per-block singular triples in non-increasing order, noise dropped.
#[derive(Debug, Clone)]
pub struct SingularSystem {
    pub blocks: Vec<Vec<SingularTriple>>,
    pub largest: f64,
}

fn eigen_failure(dim: usize) -> Error {
    Error::NumericDegeneracy(format!("Hermitian eigensolver did not converge on a {dim}x{dim} block"))
}

fn hermitian_eigen(h: CMatrix) -> Result<SymmetricEigen<Complex64, nalgebra::Dyn>> {
    let dim = h.nrows();
    SymmetricEigen::try_new(h, EIGEN_EPS, 1000 * dim.max(8)).ok_or_else(|| eigen_failure(dim))
}

/// `[[0, m], [m*, 0]]`, whose spectrum is `±σ(m)`.
fn dilation(m: &CMatrix) -> CMatrix {
    let d = m.nrows();
    let mut out = CMatrix::zeros(2 * d, 2 * d);
    out.view_mut((0, d), (d, d)).copy_from(m);
    out.view_mut((d, 0), (d, d)).copy_from(&m.adjoint());
    out
}

fn block_triples(m: &CMatrix) -> Result<Vec<SingularTriple>> {
    let d = m.nrows();
    if d == 1 {
        let z = m[(0, 0)];
        let s = z.norm();
        if s == 0.0 {
            return Ok(Vec::new());
        }
        return Ok(vec![SingularTriple {
            value: s,
            left: DVector::from_element(1, z / s),
            right: DVector::from_element(1, Complex64::new(1.0, 0.0)),
        }]);
    }
    if m.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
        return Ok(Vec::new());
    }
    let eig = hermitian_eigen(dilation(m))?;
    let mut order: Vec<usize> = (0..2 * d).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let top = eig.eigenvalues[order[0]];
    let floor = NOISE_FLOOR * top;
    let root2 = std::f64::consts::SQRT_2;
    Ok(order[..d]
        .iter()
        .filter(|&&i| eig.eigenvalues[i] > floor)
        .map(|&i| {
            let w = eig.eigenvectors.column(i);
            SingularTriple {
                value: eig.eigenvalues[i],
                left: w.rows(0, d).into_owned() * Complex64::new(root2, 0.0),
                right: w.rows(d, d).into_owned() * Complex64::new(root2, 0.0),
            }
        })
        .collect())
}

pub fn singular_system(x: &OperatorMatrix) -> Result<SingularSystem> {
    let blocks = x
        .blocks()
        .iter()
        .map(block_triples)
        .collect::<Result<Vec<_>>>()?;
    let largest = blocks
        .iter()
        .filter_map(|b| b.first().map(|t| t.value))
        .fold(0.0, f64::max);
    Ok(SingularSystem { blocks, largest })
}

/// `‖x‖_∞`, the largest singular value.
pub fn operator_norm(x: &OperatorMatrix) -> Result<f64> {
    let mut best = 0.0f64;
    for m in x.blocks() {
        let s = if m.nrows() == 1 {
            m[(0, 0)].norm()
        } else {
            let h = dilation(m);
            let dim = h.nrows();
            SymmetricEigen::try_new(h, EIGEN_EPS, 1000 * dim.max(8))
                .ok_or_else(|| eigen_failure(dim))?
                .eigenvalues
                .iter()
                .fold(0.0f64, |a, &v| a.max(v))
        };
        best = best.max(s);
    }
    Ok(best)
}

fn outer_sum<'a>(
    dim: usize,
    terms: impl Iterator<Item = (f64, &'a DVector<Complex64>, &'a DVector<Complex64>)>,
) -> CMatrix {
    let mut out = CMatrix::zeros(dim, dim);
    for (c, a, b) in terms {
        out += a * b.adjoint() * Complex64::new(c, 0.0);
    }
    out
}

fn assemble(
    x: &OperatorMatrix,
    sys: &SingularSystem,
    f: impl Fn(&[SingularTriple], usize) -> CMatrix,
) -> Result<OperatorMatrix> {
    let blocks = sys
        .blocks
        .iter()
        .zip(x.algebra().blocks())
        .map(|(t, spec)| f(t, spec.dim))
        .collect();
    OperatorMatrix::from_blocks(Arc::clone(x.algebra()), blocks)
}

/// `|x| = (x* x)^{1/2}`.
pub fn abs_op(x: &OperatorMatrix) -> Result<OperatorMatrix> {
    let sys = singular_system(x)?;
    assemble(x, &sys, |t, d| {
        outer_sum(d, t.iter().map(|s| (s.value, &s.right, &s.right)))
    })
}

/// Generalized singular value function: singular values of each block with
/// widths equal to the block trace weight.
pub fn mu_op(x: &OperatorMatrix) -> Result<StepFunction> {
    let sys = singular_system(x)?;
    let pieces = sys
        .blocks
        .iter()
        .zip(x.algebra().blocks())
        .flat_map(|(t, spec)| t.iter().map(move |s| (s.value, spec.scale)))
        .collect();
    StepFunction::from_unordered(pieces)
}

/// Left and right support projections with the default [`RANK_TOL`].
pub fn supports(x: &OperatorMatrix) -> Result<(ProjectionOp, ProjectionOp)> {
    supports_with_tol(x, RANK_TOL)
}

/// Supports keeping singular values `> rank_tol · ‖x‖_∞`.
pub fn supports_with_tol(
    x: &OperatorMatrix,
    rank_tol: f64,
) -> Result<(ProjectionOp, ProjectionOp)> {
    let sys = singular_system(x)?;
    let cut = rank_tol * sys.largest;
    let left = assemble(x, &sys, |t, d| {
        outer_sum(d, t.iter().filter(|s| s.value > cut).map(|s| (1.0, &s.left, &s.left)))
    })?;
    let right = assemble(x, &sys, |t, d| {
        outer_sum(d, t.iter().filter(|s| s.value > cut).map(|s| (1.0, &s.right, &s.right)))
    })?;
    Ok((ProjectionOp::from_trusted(left), ProjectionOp::from_trusted(right)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Disjointness {
    pub right_disjoint: bool,
    pub left_disjoint: bool,
}

impl Disjointness {
    pub fn both(&self) -> bool {
        self.right_disjoint && self.left_disjoint
    }
}

fn supports_disjoint(
    sx: &(ProjectionOp, ProjectionOp),
    sy: &(ProjectionOp, ProjectionOp),
) -> Result<Disjointness> {
    let left = operator_norm(&sx.0.as_operator().checked_mul(sy.0.as_operator())?)?;
    let right = operator_norm(&sx.1.as_operator().checked_mul(sy.1.as_operator())?)?;
    Ok(Disjointness {
        right_disjoint: right <= DISJOINT_TOL,
        left_disjoint: left <= DISJOINT_TOL,
    })
}

pub fn disjointness(x: &OperatorMatrix, y: &OperatorMatrix) -> Result<Disjointness> {
    if !x.same_algebra(y) {
        return Err(Error::AlgebraMismatch);
    }
    supports_disjoint(&supports(x)?, &supports(y)?)
}

/// `‖μ(x)‖_{p,q}`.
pub fn schatten_lorentz_norm(x: &OperatorMatrix, idx: LorentzIndex) -> Result<f64> {
    Ok(lorentz_norm(&mu_op(x)?, idx))
}

/// Distance in the measure topology, `inf{t : μ_t(x − y) ≤ t}`.
pub fn measure_distance_op(x: &OperatorMatrix, y: &OperatorMatrix) -> Result<f64> {
    Ok(mu_op(&x.checked_sub(y)?)?.measure_distance())
}

/// Spectral projection of `|x|` on `[eps·‖x‖_{p,q}, ∞)`.
pub fn spectral_cut(x: &OperatorMatrix, eps: f64, idx: LorentzIndex) -> Result<ProjectionOp> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::OutOfRange(format!("eps = {eps} must lie in (0,1)")));
    }
    let sys = singular_system(x)?;
    if sys.largest == 0.0 {
        return Err(Error::ZeroOperator);
    }
    let mu = StepFunction::from_unordered(
        sys.blocks
            .iter()
            .zip(x.algebra().blocks())
            .flat_map(|(t, spec)| t.iter().map(move |s| (s.value, spec.scale)))
            .collect(),
    )?;
    let level = eps * lorentz_norm(&mu, idx);
    let p = assemble(x, &sys, |t, d| {
        outer_sum(d, t.iter().filter(|s| s.value >= level).map(|s| (1.0, &s.right, &s.right)))
    })?;
    Ok(ProjectionOp::from_trusted(p))
}

/// Whether `τ(σ(x, eps)) ≥ eps`.
pub fn kp_membership(x: &OperatorMatrix, eps: f64, idx: LorentzIndex) -> Result<bool> {
    Ok(spectral_cut(x, eps, idx)?.trace() >= eps)
}

/// Largest `eps ∈ (0,1]` with `τ(σ(x, eps)) ≥ eps`, capped at 1.
///
/// With `μ(x) = Σ v_i χ_{[t_{i-1}, t_i)}` and `N = ‖x‖_{p,q}` this is
/// `max_i min(v_i / N, t_i)`.
pub fn kp_boundary(x: &OperatorMatrix, idx: LorentzIndex) -> Result<f64> {
    let mu = mu_op(x)?;
    if mu.is_zero() {
        return Err(Error::ZeroOperator);
    }
    let norm = lorentz_norm(&mu, idx);
    let mut t = 0.0;
    let mut best = 0.0f64;
    for &(v, w) in mu.pieces() {
        t += w;
        best = best.max((v / norm).min(t));
    }
    Ok(best.min(1.0))
}

/// `n ↦ sup_{x ∈ K} ‖e_n x e_n‖_{p,q}` along a decreasing chain.
pub fn uniform_integrability_profile(
    family: &[OperatorMatrix],
    chain: &[ProjectionOp],
    idx: LorentzIndex,
) -> Result<Vec<f64>> {
    for (i, pair) in chain.windows(2).enumerate() {
        if !pair[1].is_below(&pair[0])? {
            return Err(Error::NonMonotoneChain { index: i + 1 });
        }
    }
    chain
        .iter()
        .map(|e| {
            family.iter().try_fold(0.0f64, |acc, x| {
                Ok(acc.max(schatten_lorentz_norm(&e.compress(x)?, idx)?))
            })
        })
        .collect()
}

/// Both sides of `|Σ a_i x_i|² = |Σ a_i |x_i||²` for a bi-disjoint family.
#[derive(Debug, Clone)]
pub struct SquareIdentity {
    pub lhs: OperatorMatrix,
    pub rhs: OperatorMatrix,
    /// `‖lhs − rhs‖_∞ / ‖lhs‖_∞` (absolute when `lhs = 0`).
    pub deviation: f64,
}

/// Checks pairwise left and right disjointness, reporting the first
/// offending pair.
pub(crate) fn require_bidisjoint(xs: &[OperatorMatrix]) -> Result<Vec<(ProjectionOp, ProjectionOp)>> {
    let first = xs.first().ok_or(Error::EmptyFamily)?;
    if xs.iter().any(|x| !x.same_algebra(first)) {
        return Err(Error::AlgebraMismatch);
    }
    let sup = xs.iter().map(supports).collect::<Result<Vec<_>>>()?;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let d = supports_disjoint(&sup[i], &sup[j])?;
            if !d.left_disjoint {
                return Err(Error::NotDisjoint { first: i, second: j, side: "left" });
            }
            if !d.right_disjoint {
                return Err(Error::NotDisjoint { first: i, second: j, side: "right" });
            }
        }
    }
    Ok(sup)
}

pub fn bidisjoint_square_identity(xs: &[OperatorMatrix], a: &[Complex64]) -> Result<SquareIdentity> {
    if a.len() != xs.len() {
        return Err(Error::LengthMismatch { expected: xs.len(), actual: a.len() });
    }
    require_bidisjoint(xs)?;
    let s = OperatorMatrix::linear_combination(xs, a)?;
    let lhs = s.adjoint().checked_mul(&s)?;
    let abs = xs.iter().map(abs_op).collect::<Result<Vec<_>>>()?;
    let t = OperatorMatrix::linear_combination(&abs, a)?;
    let rhs = t.adjoint().checked_mul(&t)?;
    let scale = operator_norm(&lhs)?;
    let diff = operator_norm(&lhs.checked_sub(&rhs)?)?;
    let deviation = if scale > 0.0 { diff / scale } else { diff };
    Ok(SquareIdentity { lhs, rhs, deviation })
}

/// Square root of a positive semi-definite element; negative rounding
/// eigenvalues are clamped to zero.
pub fn psd_sqrt(h: &OperatorMatrix) -> Result<OperatorMatrix> {
    let size = h.frobenius_norm().max(f64::MIN_POSITIVE);
    let deviation = h.hermitian_defect();
    if deviation > 1e-10 * size {
        return Err(Error::NotHermitian { deviation });
    }
    let blocks = h
        .blocks()
        .iter()
        .map(|m| {
            let d = m.nrows();
            if d == 1 {
                return Ok(CMatrix::from_element(1, 1, Complex64::new(m[(0, 0)].re.max(0.0).sqrt(), 0.0)));
            }
            let sym = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
            let eig = hermitian_eigen(sym)?;
            let mut out = CMatrix::zeros(d, d);
            for (i, &l) in eig.eigenvalues.iter().enumerate() {
                if l > 0.0 {
                    let v = eig.eigenvectors.column(i);
                    out += v * v.adjoint() * Complex64::new(l.sqrt(), 0.0);
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    OperatorMatrix::from_blocks(Arc::clone(h.algebra()), blocks)
}
