//! Lorentz quasi-norms on step functions and finite sequences, and an
//! empirical estimator for lattice inequality constants.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rearrangement::{disjoint_sum, SimpleFunction, StepFunction};

/// The pair `(p, q)` of a Lorentz space `L_{p,q}`; `q` may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzIndex {
    p: f64,
    q: f64,
}

impl LorentzIndex {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::InvalidExponent {
                value: p,
                reason: "p must lie in (0, inf)",
            });
        }
        if q.is_nan() || q <= 0.0 {
            return Err(Error::InvalidExponent {
                value: q,
                reason: "q must lie in (0, inf]",
            });
        }
        Ok(Self { p, q })
    }

    /// `L_{p,∞}`.
    pub fn weak(p: f64) -> Result<Self> {
        Self::new(p, f64::INFINITY)
    }

    /// `L_{p,p} = L_p`.
    pub fn lp(p: f64) -> Result<Self> {
        Self::new(p, p)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn is_weak(&self) -> bool {
        self.q.is_infinite()
    }

    /// Rejects `q = INF` for operations that only make sense for finite `q`.
    pub fn require_finite(&self) -> Result<()> {
        if self.is_weak() {
            Err(Error::WeakIndexUnsupported)
        } else {
            Ok(())
        }
    }
}

/// `‖f‖_{p,q} = (∫ μ_t^q d(t^{q/p}))^{1/q}`, or `sup_t t^{1/p} μ_t` for `q = ∞`.
pub fn lorentz_norm(f: &StepFunction, idx: LorentzIndex) -> f64 {
    let top = f.sup();
    if top == 0.0 {
        return 0.0;
    }
    let (p, q) = (idx.p, idx.q);
    if idx.is_weak() {
        let mut t = 0.0;
        return f
            .pieces()
            .iter()
            .map(|&(v, w)| {
                t += w;
                v * t.powf(1.0 / p)
            })
            .fold(0.0, f64::max);
    }
    let r = q / p;
    let mut t = 0.0;
    let mut t_pow = 0.0;
    let mut acc = 0.0;
    for &(v, w) in f.pieces() {
        t += w;
        let next = t.powf(r);
        acc += (v / top).powf(q) * (next - t_pow);
        t_pow = next;
    }
    top * acc.powf(1.0 / q)
}

/// `ℓ_{p,q}` quasi-norm of a finite sequence.
pub fn lorentz_sequence_norm(a: &[Complex64], idx: LorentzIndex) -> Result<f64> {
    idx.require_finite()?;
    let mut mags: Vec<f64> = a.iter().map(|c| c.norm()).collect();
    mags.sort_by(|x, y| y.total_cmp(x));
    let top = mags.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return Ok(0.0);
    }
    let r = idx.q / idx.p;
    let acc: f64 = mags
        .iter()
        .enumerate()
        .take_while(|(_, &m)| m > 0.0)
        .map(|(k, &m)| {
            let k = k as f64;
            (m / top).powf(idx.q) * ((k + 1.0).powf(r) - k.powf(r))
        })
        .sum();
    Ok(top * acc.powf(1.0 / idx.q))
}

/// `(Σ v_i^r)^{1/r}` for non-negative `v`, computed relative to the maximum.
pub fn lr_combination(values: &[f64], r: f64) -> f64 {
    let top = values.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    top * values
        .iter()
        .map(|&v| (v / top).powf(r))
        .sum::<f64>()
        .powf(1.0 / r)
}

/// Which lattice inequality `estimate_constant` probes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InequalityKind {
    /// `‖(Σ|x_n|^r)^{1/r}‖ <= C (Σ‖x_n‖^r)^{1/r}`
    Convexity,
    /// `‖(Σ|x_n|^r)^{1/r}‖ >= C^{-1} (Σ‖x_n‖^r)^{1/r}`
    Concavity,
    /// `‖Σ x_n‖ <= C (Σ‖x_n‖^r)^{1/r}` for disjoint `x_n`
    UpperEstimate,
    /// `(Σ‖x_n‖^r)^{1/r} <= C ‖Σ x_n‖` for disjoint `x_n`
    LowerEstimate,
}

/// Largest observed inequality ratio over a set of families.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantEstimate {
    pub ratio_max: f64,
    pub witness: Vec<SimpleFunction>,
    pub samples: usize,
}

/// Rearrangement of `(Σ|x_n|^r)^{1/r}`.
///
/// For disjoint families this is the disjoint sum; otherwise it is taken
/// atomwise on the shared grid.
fn lattice_expression(family: &[SimpleFunction], r: f64, disjoint: bool) -> Result<StepFunction> {
    if disjoint {
        let parts: Vec<StepFunction> = family.iter().map(SimpleFunction::rearrange).collect();
        return Ok(disjoint_sum(&parts));
    }
    let first = &family[0];
    if family.iter().any(|f| !f.same_grid(first)) {
        return Err(Error::GridMismatch);
    }
    let atoms = (0..first.len())
        .map(|j| {
            let mags: Vec<f64> = family.iter().map(|f| f.atoms()[j].0.norm()).collect();
            (Complex64::new(lr_combination(&mags, r), 0.0), first.atoms()[j].1)
        })
        .collect();
    Ok(SimpleFunction::new(atoms)?.rearrange())
}

/// The inequality ratio of a single family, oriented so that the
/// inequality holds with constant `C` exactly when the ratio is `<= C`.
pub fn inequality_ratio(
    kind: InequalityKind,
    exponent: f64,
    idx: LorentzIndex,
    family: &[SimpleFunction],
    disjoint: bool,
) -> Result<f64> {
    idx.require_finite()?;
    if !(exponent.is_finite() && exponent > 0.0) {
        return Err(Error::InvalidExponent {
            value: exponent,
            reason: "inequality exponent must be positive",
        });
    }
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if matches!(kind, InequalityKind::UpperEstimate | InequalityKind::LowerEstimate) && !disjoint {
        return Err(Error::OutOfRange(
            "upper/lower estimates are defined for disjoint families".into(),
        ));
    }
    let combined = lorentz_norm(&lattice_expression(family, exponent, disjoint)?, idx);
    let norms: Vec<f64> = family
        .iter()
        .map(|f| lorentz_norm(&f.rearrange(), idx))
        .collect();
    let separate = lr_combination(&norms, exponent);
    let (num, den) = match kind {
        InequalityKind::Convexity | InequalityKind::UpperEstimate => (combined, separate),
        InequalityKind::Concavity | InequalityKind::LowerEstimate => (separate, combined),
    };
    if den == 0.0 {
        return Err(Error::Degenerate("family has zero norm".into()));
    }
    Ok(num / den)
}

/// Maximal [`inequality_ratio`] over the given families, with the
/// maximizing family as witness.
pub fn estimate_constant<I>(
    kind: InequalityKind,
    exponent: f64,
    idx: LorentzIndex,
    families: I,
    disjoint: bool,
) -> Result<ConstantEstimate>
where
    I: IntoIterator<Item = Vec<SimpleFunction>>,
{
    let families: Vec<Vec<SimpleFunction>> = families.into_iter().collect();
    if families.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    let ratios = families
        .par_iter()
        .map(|fam| inequality_ratio(kind, exponent, idx, fam, disjoint))
        .collect::<Result<Vec<f64>>>()?;
    let (best, ratio_max) = ratios
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, r)| if r > acc.1 { (i, r) } else { acc });
    Ok(ConstantEstimate {
        ratio_max,
        witness: families[best].clone(),
        samples: families.len(),
    })
}
