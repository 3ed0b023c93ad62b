//! Decreasing rearrangements as exact step functions.
//!
//! Every singular value function produced by this crate is a finite,
//! non-increasing, right-continuous step function on `[0, a)` with an
//! implicit zero tail. Keeping that form exact means head integrals,
//! Lorentz quasi-norms and the measure-topology distance are all closed
//! form sums over the pieces.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Adjacent values closer than this (relative) are merged into one piece.
pub const MERGE_RTOL: f64 = 1e-14;

/// Relative slack used when comparing head integrals.
pub const SUBMAJORIZATION_RTOL: f64 = 1e-12;

/// A non-increasing step function `μ` on `[0, a)`, zero beyond `a`.
///
/// Pieces are `(value, width)` pairs with strictly decreasing positive
/// values and positive widths. The empty sequence is the zero function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StepFunctionRepr", into = "StepFunctionRepr")]
pub struct StepFunction {
    pieces: Vec<(f64, f64)>,
}

#[derive(Serialize, Deserialize)]
struct StepFunctionRepr {
    pieces: Vec<(f64, f64)>,
}

impl TryFrom<StepFunctionRepr> for StepFunction {
    type Error = Error;

    fn try_from(repr: StepFunctionRepr) -> Result<Self> {
        StepFunction::new(repr.pieces)
    }
}

impl From<StepFunction> for StepFunctionRepr {
    fn from(f: StepFunction) -> Self {
        StepFunctionRepr { pieces: f.pieces }
    }
}

fn validate_piece(value: f64, width: f64) -> Result<()> {
    if !value.is_finite() || value < 0.0 {
        return Err(Error::InvalidStepFunction(format!(
            "value {value} must be finite and non-negative"
        )));
    }
    if !width.is_finite() || width <= 0.0 {
        return Err(Error::InvalidStepFunction(format!(
            "width {width} must be finite and positive"
        )));
    }
    Ok(())
}

/// Sorts pieces by decreasing value, drops zero values and merges
/// values that agree to `MERGE_RTOL`.
fn canonicalize(mut pieces: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    pieces.retain(|&(v, _)| v > 0.0);
    // Ties on value are broken by width so that the result does not depend
    // on input order, down to the bits of the accumulated widths.
    pieces.sort_by(|a, b| b.0.total_cmp(&a.0).then(b.1.total_cmp(&a.1)));

    let mut out: Vec<(f64, f64)> = Vec::with_capacity(pieces.len());
    for (v, w) in pieces {
        match out.last_mut() {
            Some((head, width)) if *head - v <= MERGE_RTOL * *head => *width += w,
            _ => out.push((v, w)),
        }
    }
    out
}

impl StepFunction {
    /// Builds a step function from pieces listed in non-increasing value order.
    pub fn new(pieces: Vec<(f64, f64)>) -> Result<Self> {
        for &(v, w) in &pieces {
            validate_piece(v, w)?;
        }
        if let Some(i) = pieces.windows(2).position(|p| p[1].0 > p[0].0) {
            return Err(Error::InvalidStepFunction(format!(
                "values increase between pieces {i} and {}",
                i + 1
            )));
        }
        Ok(Self {
            pieces: canonicalize(pieces),
        })
    }

    /// Builds the decreasing rearrangement of pieces given in any order.
    pub fn from_unordered(pieces: Vec<(f64, f64)>) -> Result<Self> {
        for &(v, w) in &pieces {
            validate_piece(v, w)?;
        }
        Ok(Self {
            pieces: canonicalize(pieces),
        })
    }

    pub fn zero() -> Self {
        Self { pieces: Vec::new() }
    }

    /// Indicator of `[0, width)` scaled by `height`.
    pub fn spike(height: f64, width: f64) -> Result<Self> {
        Self::new(vec![(height, width)])
    }

    pub fn pieces(&self) -> &[(f64, f64)] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn total_width(&self) -> f64 {
        self.pieces.iter().map(|&(_, w)| w).sum()
    }

    /// Largest value, `μ_0`.
    pub fn sup(&self) -> f64 {
        self.pieces.first().map_or(0.0, |&(v, _)| v)
    }

    /// Right endpoints `t_1 < t_2 < ... < t_m` of the pieces.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.pieces
            .iter()
            .scan(0.0, |t, &(_, w)| {
                *t += w;
                Some(*t)
            })
            .collect()
    }

    /// `μ_t`, right-continuous.
    pub fn value_at(&self, t: f64) -> f64 {
        let mut end = 0.0;
        for &(v, w) in &self.pieces {
            end += w;
            if t < end {
                return v;
            }
        }
        0.0
    }

    /// `∫_0^t μ_s ds`, exact for step functions.
    pub fn head_integral(&self, t: f64) -> f64 {
        let mut remaining = t.max(0.0);
        let mut acc = 0.0;
        for &(v, w) in &self.pieces {
            if remaining <= 0.0 {
                break;
            }
            let span = remaining.min(w);
            acc += v * span;
            remaining -= span;
        }
        acc
    }

    /// `∫_0^∞ μ_s ds`.
    pub fn l1_norm(&self) -> f64 {
        self.pieces.iter().map(|&(v, w)| v * w).sum()
    }

    /// Hardy–Littlewood–Pólya submajorization `other ≺≺ self`.
    ///
    /// The difference of head integrals is piecewise linear between the
    /// breakpoints of both functions, so checking those suffices.
    pub fn submajorizes(&self, other: &StepFunction) -> bool {
        let mut ts = self.breakpoints();
        ts.extend(other.breakpoints());
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        ts.into_iter().all(|t| {
            let dominant = self.head_integral(t);
            let dominated = other.head_integral(t);
            dominated <= dominant + SUBMAJORIZATION_RTOL * dominant.max(dominated)
        })
    }

    /// `μ(|x|^p) = μ(x)^p`.
    pub fn power_transform(&self, p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::InvalidExponent {
                value: p,
                reason: "power must be positive and finite",
            });
        }
        if p == 1.0 {
            return Ok(self.clone());
        }
        Self::from_unordered(self.pieces.iter().map(|&(v, w)| (v.powf(p), w)).collect())
    }

    /// Multiplies every value by `|c|`.
    pub fn scale(&self, c: f64) -> Self {
        let c = c.abs();
        if c == 0.0 {
            return Self::zero();
        }
        Self {
            pieces: canonicalize(self.pieces.iter().map(|&(v, w)| (v * c, w)).collect()),
        }
    }

    /// `inf { t >= 0 : μ_t <= t }`, the measure-topology distance to zero.
    pub fn measure_distance(&self) -> f64 {
        let mut start = 0.0;
        for &(v, w) in &self.pieces {
            let end = start + w;
            // On [start, end) μ = v, so the first admissible t here is max(start, v).
            if v < end {
                return v.max(start);
            }
            start = end;
        }
        start
    }
}

/// A finitely valued function: disjoint atoms `(value, weight)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SimpleFunctionRepr", into = "SimpleFunctionRepr")]
pub struct SimpleFunction {
    atoms: Vec<(Complex64, f64)>,
}

#[derive(Serialize, Deserialize)]
struct SimpleFunctionRepr {
    atoms: Vec<(f64, f64, f64)>,
}

impl TryFrom<SimpleFunctionRepr> for SimpleFunction {
    type Error = Error;

    fn try_from(repr: SimpleFunctionRepr) -> Result<Self> {
        SimpleFunction::new(
            repr.atoms
                .into_iter()
                .map(|(re, im, w)| (Complex64::new(re, im), w))
                .collect(),
        )
    }
}

impl From<SimpleFunction> for SimpleFunctionRepr {
    fn from(f: SimpleFunction) -> Self {
        SimpleFunctionRepr {
            atoms: f.atoms.into_iter().map(|(c, w)| (c.re, c.im, w)).collect(),
        }
    }
}

impl SimpleFunction {
    pub fn new(atoms: Vec<(Complex64, f64)>) -> Result<Self> {
        for &(c, w) in &atoms {
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::InvalidSimpleFunction(format!("value {c} is not finite")));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidSimpleFunction(format!(
                    "weight {w} must be finite and positive"
                )));
            }
        }
        Ok(Self { atoms })
    }

    /// Real-valued atoms.
    pub fn from_real(atoms: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            atoms
                .iter()
                .map(|&(v, w)| (Complex64::new(v, 0.0), w))
                .collect(),
        )
    }

    pub fn atoms(&self) -> &[(Complex64, f64)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.atoms.iter().map(|&(_, w)| w)
    }

    /// Whether both functions use the same atom weights in the same order.
    pub fn same_grid(&self, other: &SimpleFunction) -> bool {
        self.atoms.len() == other.atoms.len()
            && self
                .atoms
                .iter()
                .zip(&other.atoms)
                .all(|(a, b)| a.1 == b.1)
    }

    /// Atomwise difference on a shared grid.
    pub fn sub(&self, other: &SimpleFunction) -> Result<Self> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            atoms: self
                .atoms
                .iter()
                .zip(&other.atoms)
                .map(|(a, b)| (a.0 - b.0, a.1))
                .collect(),
        })
    }

    /// Decreasing rearrangement of `|f|`.
    pub fn rearrange(&self) -> StepFunction {
        StepFunction {
            pieces: canonicalize(self.atoms.iter().map(|&(c, w)| (c.norm(), w)).collect()),
        }
    }
}

/// Decreasing rearrangement of `|f|`.
pub fn rearrange(f: &SimpleFunction) -> StepFunction {
    f.rearrange()
}

/// Rearrangement of a sum of disjointly supported functions with the
/// given rearrangements.
pub fn disjoint_sum<'a, I>(fs: I) -> StepFunction
where
    I: IntoIterator<Item = &'a StepFunction>,
{
    let pieces = fs
        .into_iter()
        .flat_map(|f| f.pieces.iter().copied())
        .collect();
    StepFunction {
        pieces: canonicalize(pieces),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn step(pieces: &[(f64, f64)]) -> StepFunction {
        StepFunction::new(pieces.to_vec()).unwrap()
    }

    fn random_simple(rng: &mut ChaCha8Rng, n: usize) -> SimpleFunction {
        let atoms = (0..n)
            .map(|_| {
                // A small value alphabet forces ties.
                let v = f64::from(rng.random_range(0..6u8)) * 0.5;
                let w = f64::from(rng.random_range(1..5u8)) * 0.25;
                (Complex64::from_polar(v, rng.random_range(0.0..std::f64::consts::TAU)), w)
            })
            .collect();
        SimpleFunction::new(atoms).unwrap()
    }

    fn random_step(rng: &mut ChaCha8Rng) -> StepFunction {
        let n = rng.random_range(0..8);
        StepFunction::from_unordered(
            (0..n)
                .map(|_| (rng.random_range(0.01..5.0), rng.random_range(0.05..2.0)))
                .collect(),
        )
        .unwrap()
    }

    /// Midpoint Riemann sum of μ on [0, t] with `cells` cells.
    fn grid_head_integral(f: &StepFunction, t: f64, cells: usize) -> f64 {
        let h = t / cells as f64;
        (0..cells).map(|i| f.value_at((i as f64 + 0.5) * h) * h).sum()
    }

    #[test]
    fn rearrange_sorts_descending() {
        let f = SimpleFunction::from_real(&[(1.0, 1.0), (3.0, 1.0), (2.0, 1.0)]).unwrap();
        assert_eq!(f.rearrange().pieces(), &[(3.0, 1.0), (2.0, 1.0), (1.0, 1.0)]);
    }

    #[test]
    fn rearrange_single_complex_atom() {
        let f = SimpleFunction::new(vec![(Complex64::new(3.0, -4.0), 0.7)]).unwrap();
        assert_eq!(f.rearrange().pieces(), &[(5.0, 0.7)]);
    }

    #[test]
    fn rearrange_matches_sort_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let f = random_simple(&mut rng, 50);
            // Oracle: bucket weights by exact modulus, then sort buckets.
            let mut buckets: Vec<(f64, f64)> = Vec::new();
            for &(c, w) in f.atoms() {
                let m = c.norm();
                if m == 0.0 {
                    continue;
                }
                match buckets.iter_mut().find(|b| (b.0 - m).abs() <= 1e-14 * m) {
                    Some(b) => b.1 += w,
                    None => buckets.push((m, w)),
                }
            }
            buckets.sort_by(|a, b| b.0.total_cmp(&a.0));
            let got = f.rearrange();
            assert_eq!(got.pieces().len(), buckets.len());
            for (g, o) in got.pieces().iter().zip(&buckets) {
                assert_relative_eq!(g.0, o.0, max_relative = 1e-14);
                assert_relative_eq!(g.1, o.1, max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn zero_atoms_are_dropped() {
        let f = SimpleFunction::from_real(&[(0.0, 3.0), (1.0, 1.0)]).unwrap();
        assert_eq!(f.rearrange().pieces(), &[(1.0, 1.0)]);
        assert_eq!(f.rearrange().total_width(), 1.0);
    }

    #[test]
    fn new_rejects_bad_pieces() {
        assert!(StepFunction::new(vec![(1.0, 1.0), (2.0, 1.0)]).is_err());
        assert!(StepFunction::new(vec![(1.0, 0.0)]).is_err());
        assert!(StepFunction::new(vec![(-1.0, 1.0)]).is_err());
        assert!(StepFunction::new(vec![(f64::NAN, 1.0)]).is_err());
        assert!(SimpleFunction::from_real(&[(1.0, -1.0)]).is_err());
    }

    #[test]
    fn near_equal_values_merge() {
        let f = StepFunction::new(vec![(1.0, 1.0), (1.0 - 1e-16, 2.0), (0.5, 1.0)]).unwrap();
        assert_eq!(f.pieces(), &[(1.0, 3.0), (0.5, 1.0)]);
    }

    #[test]
    fn head_integral_examples() {
        let f = step(&[(2.0, 1.0), (1.0, 2.0)]);
        assert_eq!(f.head_integral(3.0), 4.0);
        assert_eq!(f.head_integral(0.0), 0.0);
        assert_eq!(f.head_integral(10.0), 4.0);
        assert_eq!(f.head_integral(1.5), 2.5);
    }

    #[test]
    fn head_integral_matches_grid_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            // Breakpoints and t on a 1/8 grid, Riemann cells of 1/1024: no cell
            // straddles a jump, so the oracle is exact up to summation error.
            let n = rng.random_range(1..6);
            let f = StepFunction::from_unordered(
                (0..n)
                    .map(|_| {
                        (
                            rng.random_range(0.1..3.0),
                            f64::from(rng.random_range(1..9u8)) / 8.0,
                        )
                    })
                    .collect(),
            )
            .unwrap();
            let t = f64::from(rng.random_range(0..=(f.total_width() * 10.0) as u32)) / 8.0;
            let cells = (t * 1024.0) as usize;
            let oracle = if cells == 0 { 0.0 } else { grid_head_integral(&f, t, cells) };
            assert_relative_eq!(f.head_integral(t), oracle, max_relative = 1e-9);
        }
    }

    #[test]
    fn submajorization_examples() {
        let f = step(&[(2.0, 1.0)]);
        let g = step(&[(1.0, 2.0)]);
        assert!(f.submajorizes(&g));
        assert!(!g.submajorizes(&f));
        assert!(f.submajorizes(&f));
    }

    #[test]
    fn submajorization_matches_dense_grid_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let f = random_step(&mut rng);
            let g = random_step(&mut rng);
            let horizon = f.total_width().max(g.total_width());
            let oracle = (1..=4000).all(|i| {
                let t = horizon * f64::from(i) / 4000.0;
                g.head_integral(t) <= f.head_integral(t) * (1.0 + 1e-12)
            }) && f
                .breakpoints()
                .iter()
                .chain(g.breakpoints().iter())
                .all(|&t| g.head_integral(t) <= f.head_integral(t) * (1.0 + 1e-12));
            assert_eq!(f.submajorizes(&g), oracle);
        }
    }

    #[test]
    fn disjoint_sum_examples() {
        let spike = step(&[(1.0, 1.0)]);
        assert_eq!(disjoint_sum([&spike, &spike]).pieces(), &[(1.0, 2.0)]);
        let f = step(&[(3.0, 0.5), (1.0, 2.0)]);
        assert_eq!(disjoint_sum([&f]), f);
    }

    #[test]
    fn disjoint_sum_matches_concatenation_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let parts: Vec<SimpleFunction> = (0..4).map(|_| random_simple(&mut rng, 7)).collect();
            let concatenated = SimpleFunction::new(
                parts.iter().flat_map(|p| p.atoms().iter().copied()).collect(),
            )
            .unwrap();
            let rearranged: Vec<StepFunction> = parts.iter().map(|p| p.rearrange()).collect();
            let sum = disjoint_sum(&rearranged);
            let oracle = concatenated.rearrange();
            assert_eq!(sum.pieces().len(), oracle.pieces().len());
            for (a, b) in sum.pieces().iter().zip(oracle.pieces()) {
                assert_relative_eq!(a.0, b.0, max_relative = 1e-14);
                assert_relative_eq!(a.1, b.1, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn power_transform_examples() {
        let f = step(&[(4.0, 1.0)]);
        assert_eq!(f.power_transform(0.5).unwrap().pieces(), &[(2.0, 1.0)]);
        let g = step(&[(3.0, 1.0), (2.0, 0.5)]);
        assert_eq!(g.power_transform(1.0).unwrap(), g);
        assert_eq!(
            g.power_transform(2.0).unwrap().pieces(),
            &[(9.0, 1.0), (4.0, 0.5)]
        );
        assert!(g.power_transform(0.0).is_err());
    }

    #[test]
    fn measure_distance_examples() {
        assert_eq!(StepFunction::zero().measure_distance(), 0.0);
        assert_eq!(step(&[(2.0, 2.0)]).measure_distance(), 2.0);
        assert_eq!(step(&[(0.5, 3.0)]).measure_distance(), 0.5);
        assert_eq!(step(&[(3.0, 1.0), (1.5, 4.0)]).measure_distance(), 1.5);
    }

    #[test]
    fn measure_distance_matches_bisection_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let f = random_step(&mut rng);
            // μ_t - t is strictly decreasing, so bisect for its sign change.
            let (mut lo, mut hi) = (0.0, f.total_width().max(f.sup()) + 1.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f.value_at(mid) <= mid {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            assert!((f.measure_distance() - hi).abs() <= 1e-10);
        }
    }

    #[test]
    fn json_forms() {
        let f: StepFunction = serde_json::from_str(r#"{"pieces":[[2,1],[1,2]]}"#).unwrap();
        assert_eq!(f.pieces(), &[(2.0, 1.0), (1.0, 2.0)]);
        assert_eq!(
            serde_json::to_string(&f).unwrap(),
            r#"{"pieces":[[2.0,1.0],[1.0,2.0]]}"#
        );
        let s: SimpleFunction = serde_json::from_str(r#"{"atoms":[[3,4,0.5]]}"#).unwrap();
        assert_eq!(s.rearrange().pieces(), &[(5.0, 0.5)]);
        assert!(serde_json::from_str::<StepFunction>(r#"{"pieces":[[1,1],[2,1]]}"#).is_err());
    }

    fn simple_strategy(n: usize) -> impl Strategy<Value = Vec<(f64, f64, f64)>> {
        prop::collection::vec((-4.0f64..4.0, -4.0f64..4.0, 0.01f64..3.0), 1..n)
    }

    fn to_simple(atoms: &[(f64, f64, f64)]) -> SimpleFunction {
        SimpleFunction::new(
            atoms
                .iter()
                .map(|&(re, im, w)| (Complex64::new(re, im), w))
                .collect(),
        )
        .unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn rearrange_ignores_atom_order(
            atoms in simple_strategy(30),
            seed in any::<u64>(),
        ) {
            use rand::seq::SliceRandom;
            let mut shuffled = atoms.clone();
            shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(to_simple(&atoms).rearrange(), to_simple(&shuffled).rearrange());
        }

        #[test]
        fn head_integral_monotone_and_concave(atoms in simple_strategy(20)) {
            let f = to_simple(&atoms).rearrange();
            let mut ts = vec![0.0];
            ts.extend(f.breakpoints());
            ts.push(f.total_width() + 1.0);
            let heads: Vec<f64> = ts.iter().map(|&t| f.head_integral(t)).collect();
            for w in heads.windows(2) {
                prop_assert!(w[1] >= w[0]);
            }
            // Slopes between consecutive breakpoints are non-increasing.
            let slopes: Vec<f64> = ts
                .windows(2)
                .zip(heads.windows(2))
                .map(|(t, h)| (h[1] - h[0]) / (t[1] - t[0]))
                .collect();
            for s in slopes.windows(2) {
                prop_assert!(s[1] <= s[0] * (1.0 + 1e-12) + 1e-12);
            }
        }

        #[test]
        fn submajorization_is_a_preorder(
            a in simple_strategy(10),
            b in simple_strategy(10),
            c in simple_strategy(10),
        ) {
            let (f, g, h) = (to_simple(&a).rearrange(), to_simple(&b).rearrange(), to_simple(&c).rearrange());
            prop_assert!(f.submajorizes(&f));
            if f.submajorizes(&g) && g.submajorizes(&h) {
                prop_assert!(f.submajorizes(&h));
            }
        }

        #[test]
        fn disjoint_sum_adds_widths_and_mass(
            a in simple_strategy(10),
            b in simple_strategy(10),
        ) {
            let (f, g) = (to_simple(&a).rearrange(), to_simple(&b).rearrange());
            let s = disjoint_sum([&f, &g]);
            let width = f.total_width() + g.total_width();
            prop_assert!((s.total_width() - width).abs() <= 1e-12 * width.max(1.0));
            let mass = f.l1_norm() + g.l1_norm();
            prop_assert!((s.l1_norm() - mass).abs() <= 1e-12 * mass.max(1.0));
        }

        #[test]
        fn power_transform_composes(
            atoms in simple_strategy(20),
            a in 0.2f64..3.0,
            b in 0.2f64..3.0,
        ) {
            let f = to_simple(&atoms).rearrange();
            let twice = f.power_transform(a).unwrap().power_transform(b).unwrap();
            let once = f.power_transform(a * b).unwrap();
            prop_assert_eq!(twice.pieces().len(), once.pieces().len());
            for (x, y) in twice.pieces().iter().zip(once.pieces()) {
                prop_assert!((x.0 - y.0).abs() <= 1e-12 * y.0);
                prop_assert!((x.1 - y.1).abs() <= 1e-12 * y.1);
            }
        }

        #[test]
        fn measure_distance_triangle_inequality(
            grid in prop::collection::vec(0.05f64..2.0, 1..12),
            seed in any::<u64>(),
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut draw = || {
                SimpleFunction::new(
                    grid.iter()
                        .map(|&w| (Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)), w))
                        .collect(),
                )
                .unwrap()
            };
            let (f, g, h) = (draw(), draw(), draw());
            let d = |x: &SimpleFunction, y: &SimpleFunction| x.sub(y).unwrap().rearrange().measure_distance();
            prop_assert!(d(&f, &h) <= d(&f, &g) + d(&g, &h) + 1e-12);
        }
    }
}
