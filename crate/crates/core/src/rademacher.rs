//! Rademacher averages `∫₀¹ ‖Σ r_k(t) c_k‖² dt` computed by exact sign
//! enumeration or by seeded Monte Carlo.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amplification::{amplify, row_square, AmplifiedAlgebra};
use crate::error::{Error, Result};
use crate::lorentz::LorentzIndex;
use crate::operator::{psd_sqrt, schatten_lorentz_norm, OperatorMatrix};
use crate::sampling::rng_from_seed;

/// Largest `n` accepted by exact enumeration.
pub const EXACT_LIMIT: usize = 20;
/// Largest `n` for which [`AverageSpec::auto`] picks exact enumeration.
pub const EXACT_DEFAULT_LIMIT: usize = 12;

/// A choice of signs `θ ∈ {−1, 1}^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignPattern(Vec<i8>);

impl SignPattern {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::OutOfRange("a sign pattern needs at least one sign".into()));
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::OutOfRange("signs must be +1 or -1".into()));
        }
        Ok(Self(signs))
    }

    /// Bit `k` of `bits` set means `θ_k = −1`.
    pub fn from_bits(bits: u64, n: usize) -> Self {
        Self((0..n).map(|k| if bits >> k & 1 == 1 { -1 } else { 1 }).collect())
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum AverageMode {
    Exact,
    MonteCarlo { samples: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AverageSpec {
    #[serde(flatten)]
    pub mode: AverageMode,
    pub seed: u64,
}

impl AverageSpec {
    pub fn exact() -> Self {
        Self {
            mode: AverageMode::Exact,
            seed: 0,
        }
    }

    pub fn monte_carlo(samples: usize, seed: u64) -> Self {
        Self {
            mode: AverageMode::MonteCarlo { samples },
            seed,
        }
    }

    /// Exact enumeration up to [`EXACT_DEFAULT_LIMIT`] terms, Monte Carlo
    /// beyond.
    pub fn auto(n: usize, samples: usize, seed: u64) -> Self {
        if n <= EXACT_DEFAULT_LIMIT {
            Self {
                mode: AverageMode::Exact,
                seed,
            }
        } else {
            Self::monte_carlo(samples, seed)
        }
    }
}

/// Puts the terms `c_k` in a canonical order and sign so that the
/// enumeration, and hence the floating point sum, does not depend on how
/// the family was listed or on a global sign.
fn canonical_terms(terms: Vec<OperatorMatrix>) -> Vec<OperatorMatrix> {
    fn key(x: &OperatorMatrix) -> Vec<u64> {
        x.blocks()
            .iter()
            .flat_map(|m| m.iter().flat_map(|z| [z.re.to_bits(), z.im.to_bits()]))
            .collect()
    }
    // Adding +0.0 turns -0.0 into +0.0 so that x and -x have well defined keys.
    let mut out: Vec<(Vec<u64>, OperatorMatrix)> = terms
        .into_iter()
        .map(|x| {
            let x = x.map_entries(|z| Complex64::new(z.re + 0.0, z.im + 0.0));
            let neg = x.map_entries(|z| Complex64::new(-z.re + 0.0, -z.im + 0.0));
            let (kx, kn) = (key(&x), key(&neg));
            if kn < kx {
                (kn, neg)
            } else {
                (kx, x)
            }
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.into_iter().map(|(_, x)| x).collect()
}

fn signed_sum(terms: &[OperatorMatrix], signs: impl Iterator<Item = bool>) -> Result<OperatorMatrix> {
    let mut acc = OperatorMatrix::zeros(std::sync::Arc::clone(terms[0].algebra()));
    for (t, negative) in terms.iter().zip(signs) {
        acc = if negative { acc.checked_sub(t)? } else { acc.checked_add(t)? };
    }
    Ok(acc)
}

/// Mean of `‖Σ θ_k a_k x_k‖²_{p,q}` over sign patterns.
pub fn second_moment(
    xs: &[OperatorMatrix],
    a: &[Complex64],
    idx: LorentzIndex,
    spec: &AverageSpec,
) -> Result<f64> {
    rademacher_mean(xs, a, spec, |s| {
        let v = schatten_lorentz_norm(s, idx)?;
        Ok(v * v)
    })
}

/// Mean of `f(Σ θ_k a_k x_k)` over sign patterns, with `f(−s) = f(s)`
/// assumed so that only patterns with `θ_1 = +1` are evaluated.
pub fn rademacher_mean<F>(xs: &[OperatorMatrix], a: &[Complex64], spec: &AverageSpec, f: F) -> Result<f64>
where
    F: Fn(&OperatorMatrix) -> Result<f64> + Sync,
{
    let first = xs.first().ok_or(Error::EmptyFamily)?;
    if a.len() != xs.len() {
        return Err(Error::LengthMismatch {
            expected: xs.len(),
            actual: a.len(),
        });
    }
    if xs.iter().any(|x| !x.same_algebra(first)) {
        return Err(Error::AlgebraMismatch);
    }
    let n = xs.len();
    let terms = canonical_terms(xs.iter().zip(a).map(|(x, &c)| x.scale(c)).collect());
    let values: Vec<f64> = match spec.mode {
        AverageMode::Exact => {
            if n > EXACT_LIMIT {
                return Err(Error::EnumerationBudget { n, limit: EXACT_LIMIT });
            }
            (0..1u64 << (n - 1))
                .into_par_iter()
                .map(|bits| f(&signed_sum(&terms, (0..n).map(|k| k > 0 && bits >> (k - 1) & 1 == 1))?))
                .collect::<Result<_>>()?
        }
        AverageMode::MonteCarlo { samples } => {
            if samples == 0 {
                return Err(Error::OutOfRange("Monte Carlo needs at least one sample".into()));
            }
            let mut rng = rng_from_seed(spec.seed);
            let patterns: Vec<Vec<bool>> = (0..samples)
                .map(|_| (0..n).map(|_| rng.random_bool(0.5)).collect())
                .collect();
            patterns
                .par_iter()
                .map(|p| f(&signed_sum(&terms, p.iter().copied())?))
                .collect::<Result<_>>()?
        }
    };
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// `(Σ |a_k|² x_k x_k*)^{1/2}`.
pub fn square_function(xs: &[OperatorMatrix], a: &[Complex64]) -> Result<OperatorMatrix> {
    psd_sqrt(&row_square(xs, a)?)
}

/// `second_moment / ‖(Σ |a_k|² x_k x_k*)^{1/2}‖²_{p,q}`.
pub fn khintchine_ratio(
    xs: &[OperatorMatrix],
    a: &[Complex64],
    idx: LorentzIndex,
    spec: &AverageSpec,
) -> Result<f64> {
    if idx.p() >= 2.0 {
        log::warn!("khintchine_ratio is meant for p < 2, got p = {}", idx.p());
    }
    let moment = second_moment(xs, a, idx, spec)?;
    let sq = schatten_lorentz_norm(&square_function(xs, a)?, idx)?;
    ratio(moment, sq * sq)
}

fn ratio(num: f64, den: f64) -> Result<f64> {
    if den > 0.0 {
        Ok(num / den)
    } else if num == 0.0 {
        Err(Error::Degenerate("every term vanishes".into()))
    } else {
        Err(Error::NumericDegeneracy(
            "vanishing denominator with a nonzero numerator".into(),
        ))
    }
}

/// `Σ |a_k|² ‖x_k‖₁² / second_moment` at `p = q = 1`.
pub fn cotype2_ratio(xs: &[OperatorMatrix], a: &[Complex64], spec: &AverageSpec) -> Result<f64> {
    let l1 = LorentzIndex::new(1.0, 1.0)?;
    let mut num = 0.0;
    for (x, c) in xs.iter().zip(a) {
        let v = schatten_lorentz_norm(x, l1)?;
        num += c.norm_sqr() * v * v;
    }
    let moment = second_moment(xs, a, l1, spec)?;
    ratio(num, moment)
}

/// Quantities in the boundedness argument for the first-row map
/// `(a_ij) ↦ Σ_k r_k a_{0k}` on `L_p` of an amplified algebra.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SublemmaReport {
    /// Rademacher second moment of the first-row entries in `L_p`.
    pub moment: f64,
    /// `‖a‖²_p` in the amplified algebra.
    pub full_norm_sq: f64,
    /// `moment / full_norm_sq`.
    pub ratio: f64,
    /// `‖(Σ_k a_{0k} a_{0k}*)^{1/2}‖_p`.
    pub row_norm: f64,
    /// `‖e |a*|² e‖_{p/2}^{1/2}` with `e` the `(0,0)` slot projection.
    pub corner_norm: f64,
    /// `|row_norm − corner_norm| / corner_norm`.
    pub identity_deviation: f64,
}

pub fn sublemma_check(
    a: &OperatorMatrix,
    amp: &AmplifiedAlgebra,
    p: f64,
    spec: &AverageSpec,
) -> Result<SublemmaReport> {
    let lp = LorentzIndex::lp(p)?;
    let half = LorentzIndex::lp(p / 2.0)?;
    let row = (0..amp.copies())
        .map(|k| amp.entry(a, 0, k))
        .collect::<Result<Vec<_>>>()?;
    let ones = vec![Complex64::new(1.0, 0.0); row.len()];
    let moment = second_moment(&row, &ones, lp, spec)?;
    let full = schatten_lorentz_norm(a, lp)?;
    let row_norm = schatten_lorentz_norm(&square_function(&row, &ones)?, lp)?;
    let e = amp.slot_projection(0)?;
    let corner = e.compress(&a.checked_mul(&a.adjoint())?)?;
    let corner_norm = schatten_lorentz_norm(&corner, half)?.sqrt();
    let identity_deviation = if corner_norm > 0.0 {
        (row_norm - corner_norm).abs() / corner_norm
    } else {
        row_norm
    };
    Ok(SublemmaReport {
        moment,
        full_norm_sq: full * full,
        ratio: ratio(moment, full * full)?,
        row_norm,
        corner_norm,
        identity_deviation,
    })
}

/// Convenience wrapper building `M_m(A)` for [`sublemma_check`].
pub fn sublemma_check_in(
    a: &OperatorMatrix,
    base: &std::sync::Arc<crate::operator::TracialAlgebra>,
    copies: usize,
    p: f64,
    spec: &AverageSpec,
) -> Result<SublemmaReport> {
    sublemma_check(a, &amplify(base, copies)?, p, spec)
}
