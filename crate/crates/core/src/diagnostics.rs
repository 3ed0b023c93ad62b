//! Sequence-level diagnostics: distortion of a span against `ℓ_r`, the
//! commutative transfer of bi-disjoint families, `ℓ_q` spike witnesses and
//! the perturbation envelope around a normalized disjoint sequence.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorentz::{lorentz_norm, lr_combination, LorentzIndex};
use crate::operator::{mu_op, require_bidisjoint, schatten_lorentz_norm, OperatorMatrix};
use crate::rearrangement::{disjoint_sum, SimpleFunction, StepFunction};

/// `a ↦ ‖Σ a_k x_k‖` for a fixed finite family.
pub trait SpanNorm: Sync {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn span_norm(&self, a: &[Complex64]) -> Result<f64>;
}

/// Span of operators in `S_{p,q}`.
pub struct OperatorSpan<'a> {
    pub terms: &'a [OperatorMatrix],
    pub idx: LorentzIndex,
}

impl SpanNorm for OperatorSpan<'_> {
    fn len(&self) -> usize {
        self.terms.len()
    }

    fn span_norm(&self, a: &[Complex64]) -> Result<f64> {
        schatten_lorentz_norm(&OperatorMatrix::linear_combination(self.terms, a)?, self.idx)
    }
}

/// Span of disjointly placed rearranged functions in `L_{p,q}`, where
/// `‖Σ a_k f_k‖ = ‖⊕ |a_k| f_k‖`.
pub struct DisjointSpan<'a> {
    pub parts: &'a [StepFunction],
    pub idx: LorentzIndex,
}

impl SpanNorm for DisjointSpan<'_> {
    fn len(&self) -> usize {
        self.parts.len()
    }

    fn span_norm(&self, a: &[Complex64]) -> Result<f64> {
        if a.len() != self.parts.len() {
            return Err(Error::LengthMismatch {
                expected: self.parts.len(),
                actual: a.len(),
            });
        }
        let scaled: Vec<StepFunction> = self
            .parts
            .iter()
            .zip(a)
            .map(|(f, c)| f.scale(c.norm()))
            .collect();
        Ok(lorentz_norm(&disjoint_sum(&scaled), self.idx))
    }
}

/// The fixed vectors every distortion run includes, in this order: unit
/// coordinate vectors, the all-ones vector, the lacunary vector
/// `2^{-k/r}` and the power-law vector `k^{-1/r}` (`k` from 1).
pub fn standard_sample_set(n: usize, r: f64) -> Vec<Vec<Complex64>> {
    let re = |v: f64| Complex64::new(v, 0.0);
    let mut out: Vec<Vec<Complex64>> = (0..n)
        .map(|i| (0..n).map(|j| re(if i == j { 1.0 } else { 0.0 })).collect())
        .collect();
    if n > 0 {
        out.push(vec![re(1.0); n]);
        out.push((1..=n).map(|k| re(2f64.powf(-(k as f64) / r))).collect());
        out.push((1..=n).map(|k| re((k as f64).powf(-1.0 / r))).collect());
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionReport {
    pub lower: f64,
    pub upper: f64,
    pub sample_count: usize,
    /// Coefficient vectors attaining `lower` and `upper`, in that order.
    pub worst_vectors: [Vec<Complex64>; 2],
}

impl DistortionReport {
    /// `upper / lower`.
    pub fn distortion(&self) -> f64 {
        self.upper / self.lower
    }
}

/// Extremes of `‖Σ a_k x_k‖ / ‖a‖_r` over `vectors` together with the
/// standard sample set. Zero vectors are skipped.
pub fn distortion_of<S: SpanNorm + ?Sized>(
    span: &S,
    target: f64,
    vectors: &[Vec<Complex64>],
) -> Result<DistortionReport> {
    if !(target > 0.0 && target.is_finite()) {
        return Err(Error::InvalidExponent {
            value: target,
            reason: "target exponent must be positive and finite",
        });
    }
    let n = span.len();
    if let Some(v) = vectors.iter().find(|v| v.len() != n) {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: v.len(),
        });
    }
    let mut all = standard_sample_set(n, target);
    all.extend(vectors.iter().cloned());
    let ratios: Vec<Option<f64>> = all
        .par_iter()
        .map(|a| {
            let mags: Vec<f64> = a.iter().map(|c| c.norm()).collect();
            let denom = lr_combination(&mags, target);
            if denom == 0.0 {
                return Ok(None);
            }
            Ok(Some(span.span_norm(a)? / denom))
        })
        .collect::<Result<_>>()?;
    let mut lower: Option<(f64, usize)> = None;
    let mut upper: Option<(f64, usize)> = None;
    for (i, r) in ratios.iter().enumerate() {
        if let Some(r) = *r {
            if lower.is_none_or(|(l, _)| r < l) {
                lower = Some((r, i));
            }
            if upper.is_none_or(|(u, _)| r > u) {
                upper = Some((r, i));
            }
        }
    }
    let (Some((lower, li)), Some((upper, ui))) = (lower, upper) else {
        return Err(Error::EmptySampleSet);
    };
    if lower <= 0.0 {
        return Err(Error::Degenerate(
            "a sampled combination vanishes, so the family is not independent".into(),
        ));
    }
    Ok(DistortionReport {
        lower,
        upper,
        sample_count: ratios.iter().filter(|r| r.is_some()).count(),
        worst_vectors: [all[li].clone(), all[ui].clone()],
    })
}

/// [`distortion_of`] for operators in `S_{p,q}`.
pub fn distortion(
    xs: &[OperatorMatrix],
    target: f64,
    idx: LorentzIndex,
    vectors: &[Vec<Complex64>],
) -> Result<DistortionReport> {
    distortion_of(&OperatorSpan { terms: xs, idx }, target, vectors)
}

/// `n` disjoint copies of `χ_{[0,1)}`.
pub fn unit_spikes(n: usize) -> Vec<StepFunction> {
    vec![StepFunction::spike(1.0, 1.0).expect("unit spike is valid"); n]
}

/// A rearranged function placed at `[offset, offset + width)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacedStep {
    pub function: StepFunction,
    pub offset: f64,
}

/// `x_k ↦ μ(x_k)` placed end to end on `[0, ∞)`.
pub fn disjoint_transfer(xs: &[OperatorMatrix]) -> Result<Vec<PlacedStep>> {
    require_bidisjoint(xs)?;
    let mut offset = 0.0;
    xs.iter()
        .map(|x| {
            let function = mu_op(x)?;
            let placed = PlacedStep {
                offset,
                function,
            };
            offset += placed.function.total_width();
            Ok(placed)
        })
        .collect()
}

/// `Σ a_k f_k` as an explicit simple function on `[0, Σ widths)`, atoms
/// listed left to right.
pub fn placed_combination(placed: &[PlacedStep], a: &[Complex64]) -> Result<SimpleFunction> {
    if a.len() != placed.len() {
        return Err(Error::LengthMismatch {
            expected: placed.len(),
            actual: a.len(),
        });
    }
    let atoms = placed
        .iter()
        .zip(a)
        .flat_map(|(p, &c)| p.function.pieces().iter().map(move |&(v, w)| (c * v, w)))
        .collect();
    SimpleFunction::new(atoms)
}

/// `‖Σ a_k f_k‖_{p,q}` for a transferred family.
pub fn transfer_norm(placed: &[PlacedStep], a: &[Complex64], idx: LorentzIndex) -> Result<f64> {
    Ok(lorentz_norm(&placed_combination(placed, a)?.rearrange(), idx))
}

/// `n` spikes of width `λ^k` and height `λ^{-k/p}`, `k = 1..n`, each of
/// unit `L_{p,q}` norm.
pub fn build_lq_spikes(idx: LorentzIndex, n: usize, lacunarity: f64) -> Result<Vec<StepFunction>> {
    if !(lacunarity > 0.0 && lacunarity < 1.0) {
        return Err(Error::OutOfRange(format!(
            "lacunarity {lacunarity} must lie in (0,1)"
        )));
    }
    if n == 0 {
        return Err(Error::EmptyFamily);
    }
    (1..=n)
        .map(|k| {
            let s = lacunarity.powi(k as i32);
            StepFunction::spike(s.powf(-1.0 / idx.p()), s)
        })
        .collect()
}

/// Outcome of [`perturbation_envelope`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeReport {
    pub holds: bool,
    pub samples: usize,
    /// Smallest of `(‖Σ a_k y_k‖ − lower) / ‖a‖_p` and
    /// `(upper − ‖Σ a_k y_k‖) / ‖a‖_p` over the samples.
    pub worst_margin: f64,
    pub first_violation: Option<Vec<Complex64>>,
}

/// Relative slack allowed on both sides of the envelope.
pub const ENVELOPE_SLACK: f64 = 1e-9;
const NORMALIZATION_TOL: f64 = 1e-9;

/// Checks
/// `‖a‖_p − ‖(a_k ε_k)‖_p ≤ ‖Σ a_k y_k‖_p ≤ ‖a‖_p + ‖(a_k ε_k)‖_p`
/// on the standard sample set and `vectors`.
///
/// `ds` must be bi-disjoint with `‖d_k‖_p = 1`, and
/// `‖y_k − d_k‖_p ≤ ε_k 2^{-(k+1)}` for the 0-based index `k`.
pub fn perturbation_envelope(
    ys: &[OperatorMatrix],
    ds: &[OperatorMatrix],
    p: f64,
    eps: &[f64],
    vectors: &[Vec<Complex64>],
) -> Result<EnvelopeReport> {
    if !(p >= 1.0 && p.is_finite()) || p == 2.0 {
        return Err(Error::InvalidExponent {
            value: p,
            reason: "the envelope needs 1 <= p < INF and p != 2",
        });
    }
    let n = ys.len();
    for other in [ds.len(), eps.len()] {
        if other != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: other,
            });
        }
    }
    if let Some(&e) = eps.iter().find(|e| !(e.is_finite() && **e >= 0.0)) {
        return Err(Error::OutOfRange(format!("envelope entry {e} must be finite and non-negative")));
    }
    let lp = LorentzIndex::lp(p)?;
    require_bidisjoint(ds)?;
    if ys.iter().any(|y| !y.same_algebra(&ds[0])) {
        return Err(Error::AlgebraMismatch);
    }
    for (k, (y, d)) in ys.iter().zip(ds).enumerate() {
        let dn = schatten_lorentz_norm(d, lp)?;
        if (dn - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Degenerate(format!(
                "comparison element {k} has norm {dn}, expected 1"
            )));
        }
        let ratio = schatten_lorentz_norm(&y.checked_sub(d)?, lp)? / dn;
        let bound = eps[k] * 0.5f64.powi(k as i32 + 1);
        if ratio > bound {
            return Err(Error::PerturbationTooLarge { index: k, ratio, bound });
        }
    }
    if let Some(v) = vectors.iter().find(|v| v.len() != n) {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: v.len(),
        });
    }
    let mut all = standard_sample_set(n, p);
    all.extend(vectors.iter().cloned());
    let span = OperatorSpan { terms: ys, idx: lp };
    let margins: Vec<Option<f64>> = all
        .par_iter()
        .map(|a| {
            let mags: Vec<f64> = a.iter().map(|c| c.norm()).collect();
            let base = lr_combination(&mags, p);
            if base == 0.0 {
                return Ok(None);
            }
            let weighted: Vec<f64> = mags.iter().zip(eps).map(|(m, e)| m * e).collect();
            let spread = lr_combination(&weighted, p);
            let norm = span.span_norm(a)?;
            Ok(Some(((norm - (base - spread)).min(base + spread - norm)) / base))
        })
        .collect::<Result<_>>()?;
    let mut worst = f64::INFINITY;
    let mut first_violation = None;
    let mut samples = 0;
    for (a, m) in all.iter().zip(&margins) {
        if let Some(m) = *m {
            samples += 1;
            worst = worst.min(m);
            if m < -ENVELOPE_SLACK && first_violation.is_none() {
                first_violation = Some(a.clone());
            }
        }
    }
    if samples == 0 {
        return Err(Error::EmptySampleSet);
    }
    Ok(EnvelopeReport {
        holds: first_violation.is_none(),
        samples,
        worst_margin: worst,
        first_violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentz::lorentz_sequence_norm;
    use crate::operator::TracialAlgebra;
    use crate::sampling;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn idx(p: f64, q: f64) -> LorentzIndex {
        LorentzIndex::new(p, q).unwrap()
    }

    fn diagonal_units(n: usize, scale: f64, p: f64) -> Vec<OperatorMatrix> {
        let alg = Arc::new(TracialAlgebra::matrix(n, scale).unwrap());
        let h = scale.powf(-1.0 / p);
        (0..n)
            .map(|k| OperatorMatrix::matrix_unit(Arc::clone(&alg), 0, k, k).unwrap().scale(c(h)))
            .collect()
    }

    #[test]
    fn standard_set_layout() {
        let s = standard_sample_set(3, 2.0);
        assert_eq!(s.len(), 6);
        assert_eq!(s[1], vec![c(0.0), c(1.0), c(0.0)]);
        assert_eq!(s[3], vec![c(1.0); 3]);
        assert_relative_eq!(s[4][1].re, 0.5, max_relative = 1e-15);
        assert_relative_eq!(s[5][3 - 1].re, 3f64.powf(-0.5), max_relative = 1e-15);
        assert!(standard_sample_set(0, 1.0).is_empty());
    }

    #[test]
    fn distortion_examples() {
        for (p, n) in [(1.0, 4), (1.5, 5), (3.0, 3)] {
            let spikes = unit_spikes(n);
            let r = distortion_of(&DisjointSpan { parts: &spikes, idx: idx(p, p) }, p, &[]).unwrap();
            assert_relative_eq!(r.lower, 1.0, max_relative = 1e-12);
            assert_relative_eq!(r.upper, 1.0, max_relative = 1e-12);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let alg = Arc::new(TracialAlgebra::matrix(3, 1.0).unwrap());
        let x = sampling::random_operator(&mut rng, &alg);
        let ix = idx(1.0, 2.0);
        let extra = vec![vec![Complex64::new(0.3, -2.0)], vec![c(0.0)]];
        let r = distortion(std::slice::from_ref(&x), 1.5, ix, &extra).unwrap();
        let norm = schatten_lorentz_norm(&x, ix).unwrap();
        assert_relative_eq!(r.lower, norm, max_relative = 1e-10);
        assert_relative_eq!(r.upper, norm, max_relative = 1e-10);
        assert_eq!(r.sample_count, 5);
        assert_eq!(distortion(&[], 1.0, ix, &[]).unwrap_err(), Error::EmptySampleSet);
    }

    #[test]
    fn distortion_witnesses_reproduce_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let alg = Arc::new(TracialAlgebra::matrix(3, 0.5).unwrap());
        let xs: Vec<_> = (0..3).map(|_| sampling::random_operator(&mut rng, &alg)).collect();
        let ix = idx(1.0, 2.0);
        let vectors: Vec<_> = (0..30).map(|_| sampling::random_coefficients(&mut rng, 3)).collect();
        let r = distortion(&xs, 1.0, ix, &vectors).unwrap();
        assert!(0.0 < r.lower && r.lower <= r.upper);
        let span = OperatorSpan { terms: &xs, idx: ix };
        for (v, target) in r.worst_vectors.iter().zip([r.lower, r.upper]) {
            let l1: f64 = v.iter().map(|z| z.norm()).sum();
            assert_eq!(span.span_norm(v).unwrap() / l1, target);
        }
    }

    #[test]
    fn unit_spikes_realize_sequence_norms() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let n = rng.random_range(1..=64);
            let (p, q) = (rng.random_range(0.3..4.0), rng.random_range(0.3..4.0));
            let spikes = unit_spikes(n);
            let a = sampling::random_coefficients(&mut rng, n);
            let span = DisjointSpan { parts: &spikes, idx: idx(p, q) };
            assert_relative_eq!(
                span.span_norm(&a).unwrap(),
                lorentz_sequence_norm(&a, idx(p, q)).unwrap(),
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn unit_spike_distortion_grows_when_indices_differ() {
        let dist = |p: f64, q: f64, n: usize| {
            let spikes = unit_spikes(n);
            distortion_of(&DisjointSpan { parts: &spikes, idx: idx(p, q) }, p, &[])
                .unwrap()
                .distortion()
        };
        for (p, q) in [(1.0, 2.0), (2.0, 1.0)] {
            let seq: Vec<f64> = (1..=6).map(|e| dist(p, q, 1 << e)).collect();
            assert!(seq.windows(2).all(|w| w[1] > w[0]), "{seq:?}");
        }
        for n in [2, 16, 128] {
            assert_relative_eq!(dist(1.5, 1.5, n), 1.0, max_relative = 1e-10);
        }
    }

    #[test]
    fn transfer_examples() {
        let alg = Arc::new(TracialAlgebra::matrix(3, 1.0).unwrap());
        let coeffs = [c(2.0), Complex64::new(0.0, -0.5), c(1.0)];
        let units: Vec<_> = [(0, 1), (1, 2), (2, 0)]
            .iter()
            .zip(coeffs)
            .map(|(&(i, j), a)| OperatorMatrix::matrix_unit(Arc::clone(&alg), 0, i, j).unwrap().scale(a))
            .collect();
        let placed = disjoint_transfer(&units).unwrap();
        for (k, p) in placed.iter().enumerate() {
            assert_eq!(p.offset, k as f64);
            assert_eq!(p.function.pieces(), &[(coeffs[k].norm(), 1.0)]);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = sampling::random_operator(&mut rng, &alg);
        let placed = disjoint_transfer(std::slice::from_ref(&x)).unwrap();
        assert_eq!(placed, vec![PlacedStep { function: mu_op(&x).unwrap(), offset: 0.0 }]);
        let e01 = OperatorMatrix::matrix_unit(Arc::clone(&alg), 0, 0, 1).unwrap();
        let e02 = OperatorMatrix::matrix_unit(Arc::clone(&alg), 0, 0, 2).unwrap();
        assert_eq!(
            disjoint_transfer(&[e01, e02]).unwrap_err(),
            Error::NotDisjoint { first: 0, second: 1, side: "left" }
        );
    }

    #[test]
    fn transfer_is_isometric_on_random_bidisjoint_families() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let xs = sampling::random_bidisjoint_family(&mut rng, 7, 0.8, 3).unwrap();
            let placed = disjoint_transfer(&xs).unwrap();
            let a = sampling::random_coefficients(&mut rng, 3);
            for (p, q) in [(1.0, 1.0), (1.0, 2.0), (0.5, 1.0), (2.0, 1.0)] {
                let lhs = transfer_norm(&placed, &a, idx(p, q)).unwrap();
                let rhs = schatten_lorentz_norm(&OperatorMatrix::linear_combination(&xs, &a).unwrap(), idx(p, q))
                    .unwrap();
                assert_relative_eq!(lhs, rhs, max_relative = 1e-10);
                let parts: Vec<_> = placed.iter().map(|p| p.function.clone()).collect();
                let via_sum = DisjointSpan { parts: &parts, idx: idx(p, q) }.span_norm(&a).unwrap();
                assert_relative_eq!(lhs, via_sum, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn lq_spike_examples() {
        let ix = idx(1.0, 2.0);
        let one = build_lq_spikes(ix, 1, 0.1).unwrap();
        assert_relative_eq!(lorentz_norm(&one[0], ix), 1.0, max_relative = 1e-14);
        for f in build_lq_spikes(idx(0.7, 3.0), 6, 0.01).unwrap() {
            assert_relative_eq!(lorentz_norm(&f, idx(0.7, 3.0)), 1.0, max_relative = 1e-12);
        }
        assert!(build_lq_spikes(ix, 3, 1.0).is_err());
        assert!(build_lq_spikes(ix, 0, 0.5).is_err());
        let spikes = build_lq_spikes(idx(1.5, 1.5), 6, 0.1).unwrap();
        let r = distortion_of(&DisjointSpan { parts: &spikes, idx: idx(1.5, 1.5) }, 1.5, &[]).unwrap();
        assert_relative_eq!(r.distortion(), 1.0, max_relative = 1e-10);
    }

    #[test]
    fn lq_spike_distortion_shrinks_with_lacunarity() {
        for (p, q) in [(1.0, 2.0), (2.0, 1.0)] {
            let d: Vec<f64> = [1e-1, 1e-2, 1e-3]
                .iter()
                .map(|&l| {
                    let spikes = build_lq_spikes(idx(p, q), 6, l).unwrap();
                    distortion_of(&DisjointSpan { parts: &spikes, idx: idx(p, q) }, q, &[])
                        .unwrap()
                        .distortion()
                })
                .collect();
            assert!(d.windows(2).all(|w| w[1] <= w[0]), "{d:?}");
        }
    }

    #[test]
    fn envelope_examples() {
        for p in [1.0, 1.5, 3.0] {
            let ds = diagonal_units(4, 0.5, p);
            let r = perturbation_envelope(&ds, &ds, p, &[0.0; 4], &[]).unwrap();
            assert!(r.holds);
            assert!(r.worst_margin.abs() < 1e-12);
        }
        let ds = diagonal_units(1, 1.0, 1.0);
        let ys = vec![ds[0].scale(c(1.2))];
        let r = perturbation_envelope(&ys, &ds, 1.0, &[0.3], &[]).unwrap_err();
        assert!(matches!(r, Error::PerturbationTooLarge { index: 0, .. }));
        let ys = vec![ds[0].scale(c(1.2))];
        assert!(perturbation_envelope(&ys, &ds, 1.0, &[0.41], &[]).unwrap().holds);
        assert!(perturbation_envelope(&ds, &ds, 2.0, &[0.0], &[]).is_err());
        assert!(perturbation_envelope(&ds, &ds, 0.5, &[0.0], &[]).is_err());
    }

    #[test]
    fn envelope_holds_for_small_perturbations() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for p in [1.0, 1.5, 3.0] {
            let n = 5;
            let ds = diagonal_units(n, 0.5, p);
            let eps: Vec<f64> = (1..=n).map(|k| 0.5f64.powi(k as i32)).collect();
            let alg = Arc::clone(ds[0].algebra());
            let ys: Vec<_> = ds
                .iter()
                .enumerate()
                .map(|(k, d)| {
                    let g = sampling::random_operator(&mut rng, &alg);
                    let gn = schatten_lorentz_norm(&g, LorentzIndex::lp(p).unwrap()).unwrap();
                    let size = rng.random_range(0.0..1.0) * eps[k] * 0.5f64.powi(k as i32 + 1);
                    d.checked_add(&g.scale(c(size / gn))).unwrap()
                })
                .collect();
            let vectors: Vec<_> = (0..200).map(|_| sampling::random_coefficients(&mut rng, n)).collect();
            let r = perturbation_envelope(&ys, &ds, p, &eps, &vectors).unwrap();
            assert!(r.holds, "{p} {}", r.worst_margin);
            assert_eq!(r.samples, n + 3 + 200);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn placed_combination_rearranges_to_disjoint_sum(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let parts: Vec<StepFunction> = sampling::random_disjoint_family(&mut rng, 4, 4)
                .iter()
                .map(SimpleFunction::rearrange)
                .collect();
            let mut offset = 0.0;
            let placed: Vec<PlacedStep> = parts
                .iter()
                .map(|f| {
                    let p = PlacedStep { function: f.clone(), offset };
                    offset += f.total_width();
                    p
                })
                .collect();
            let a = sampling::random_coefficients(&mut rng, parts.len());
            let ix = idx(1.3, 0.8);
            let lhs = transfer_norm(&placed, &a, ix).unwrap();
            let rhs = DisjointSpan { parts: &parts, idx: ix }.span_norm(&a).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
        }
    }
}
