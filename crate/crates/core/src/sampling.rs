//! Seeded generators for test families and CLI scenarios.
//!
//! Every generator draws from a caller-supplied [`ChaCha8Rng`], which is
//! stable across platforms for a given seed.

use std::sync::Arc;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::operator::{BlockSpec, CMatrix, OperatorMatrix, TracialAlgebra};
use crate::rearrangement::SimpleFunction;

/// Name recorded in reports next to the seed.
pub const RNG_NAME: &str = "ChaCha8Rng";

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian.
pub fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_coefficients<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| random_complex(rng)).collect()
}

/// Magnitudes spread over several orders so that families are not all
/// of comparable size.
fn random_magnitude<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let g: f64 = rng.sample(StandardNormal);
    (1.5 * g).exp()
}

fn random_width<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random_range(0.05..2.0)
}

fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

/// A family of `1..=max_members` simple functions, each with its own
/// `1..=max_atoms` atoms, to be read as disjointly supported.
pub fn random_disjoint_family<R: Rng + ?Sized>(
    rng: &mut R,
    max_members: usize,
    max_atoms: usize,
) -> Vec<SimpleFunction> {
    let members = rng.random_range(1..=max_members.max(1));
    (0..members)
        .map(|_| {
            let atoms = rng.random_range(1..=max_atoms.max(1));
            let atoms = (0..atoms)
                .map(|_| (random_phase(rng) * random_magnitude(rng), random_width(rng)))
                .collect();
            SimpleFunction::new(atoms).expect("generated atoms are valid")
        })
        .collect()
}

/// A family of `1..=max_members` simple functions on one shared grid of
/// `atoms` cells. Some values are zeroed so that supports overlap only
/// partially.
pub fn random_grid_family<R: Rng + ?Sized>(
    rng: &mut R,
    max_members: usize,
    atoms: usize,
) -> Vec<SimpleFunction> {
    let members = rng.random_range(1..=max_members.max(1));
    let widths: Vec<f64> = (0..atoms.max(1)).map(|_| random_width(rng)).collect();
    (0..members)
        .map(|_| {
            let atoms = widths
                .iter()
                .map(|&w| {
                    let v = if rng.random_bool(0.25) {
                        Complex64::new(0.0, 0.0)
                    } else {
                        random_phase(rng) * random_magnitude(rng)
                    };
                    (v, w)
                })
                .collect();
            SimpleFunction::new(atoms).expect("generated atoms are valid")
        })
        .collect()
}

/// An algebra with `1..=max_blocks` blocks of dimension `1..=max_dim`.
pub fn random_algebra<R: Rng + ?Sized>(rng: &mut R, max_blocks: usize, max_dim: usize) -> TracialAlgebra {
    let blocks = rng.random_range(1..=max_blocks.max(1));
    TracialAlgebra::new(
        (0..blocks)
            .map(|_| BlockSpec {
                dim: rng.random_range(1..=max_dim.max(1)),
                scale: rng.random_range(0.25..2.0),
            })
            .collect(),
    )
    .expect("generated blocks are valid")
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| random_complex(rng))
}

/// Gaussian entries in every block.
pub fn random_operator<R: Rng + ?Sized>(rng: &mut R, algebra: &Arc<TracialAlgebra>) -> OperatorMatrix {
    let blocks = algebra
        .blocks()
        .iter()
        .map(|b| random_matrix(rng, b.dim, b.dim))
        .collect();
    OperatorMatrix::from_blocks(Arc::clone(algebra), blocks).expect("shapes match the algebra")
}

/// Each block is a product of Gaussian factors of random inner rank, so
/// supports are proper subprojections.
pub fn random_low_rank_operator<R: Rng + ?Sized>(
    rng: &mut R,
    algebra: &Arc<TracialAlgebra>,
) -> OperatorMatrix {
    let blocks = algebra
        .blocks()
        .iter()
        .map(|b| {
            let rank = rng.random_range(0..=b.dim);
            random_matrix(rng, b.dim, rank) * random_matrix(rng, rank, b.dim)
        })
        .collect();
    OperatorMatrix::from_blocks(Arc::clone(algebra), blocks).expect("shapes match the algebra")
}

/// Haar-distributed unitary from the QR factorization of a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    let qr = random_matrix(rng, dim, dim).qr();
    let r = qr.r();
    let mut q = qr.q();
    for (j, mut col) in q.column_iter_mut().enumerate() {
        let d = r[(j, j)];
        let n = d.norm();
        if n > 0.0 {
            col *= d / n;
        }
    }
    q
}

pub fn random_block_unitary<R: Rng + ?Sized>(rng: &mut R, algebra: &Arc<TracialAlgebra>) -> OperatorMatrix {
    let blocks = algebra
        .blocks()
        .iter()
        .map(|b| random_unitary(rng, b.dim))
        .collect();
    OperatorMatrix::from_blocks(Arc::clone(algebra), blocks).expect("shapes match the algebra")
}

/// Splits a random permutation of `0..dim` into `n` nonempty runs.
fn random_partition<R: Rng + ?Sized>(rng: &mut R, dim: usize, n: usize) -> Vec<Vec<usize>> {
    let mut idx: Vec<usize> = (0..dim).collect();
    idx.shuffle(rng);
    let mut cuts: Vec<usize> = (1..dim).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(n - 1).collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(n);
    let mut start = 0;
    for c in cuts.into_iter().chain(std::iter::once(dim)) {
        out.push(idx[start..c].to_vec());
        start = c;
    }
    out
}

/// `n` pairwise left and right disjoint operators in `M_dim` with trace
/// weight `scale`: Gaussian entries on disjoint row and column index sets,
/// rotated by independent random unitaries on each side.
pub fn random_bidisjoint_family<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    scale: f64,
    n: usize,
) -> Result<Vec<OperatorMatrix>> {
    if n == 0 {
        return Err(Error::EmptyFamily);
    }
    if n > dim {
        return Err(Error::OutOfRange(format!(
            "{n} bi-disjoint members need dimension at least {n}, got {dim}"
        )));
    }
    let algebra = Arc::new(TracialAlgebra::matrix(dim, scale)?);
    let rows = random_partition(rng, dim, n);
    let cols = random_partition(rng, dim, n);
    let u = random_unitary(rng, dim);
    let v = random_unitary(rng, dim);
    rows.iter()
        .zip(&cols)
        .map(|(r, c)| {
            let mut g = CMatrix::zeros(dim, dim);
            let magnitude = random_magnitude(rng);
            for &i in r {
                for &j in c {
                    g[(i, j)] = random_complex(rng) * magnitude;
                }
            }
            OperatorMatrix::from_blocks(Arc::clone(&algebra), vec![&u * g * v.adjoint()])
        })
        .collect()
}

/// `n` operators in `M_dim` that are pairwise orthogonal for `τ(y* x)`:
/// each is supported on its own set of matrix units, then conjugated by
/// one unitary pair.
pub fn random_hs_orthogonal_family<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    scale: f64,
    n: usize,
) -> Result<Vec<OperatorMatrix>> {
    if n == 0 {
        return Err(Error::EmptyFamily);
    }
    if n > dim * dim {
        return Err(Error::OutOfRange(format!(
            "{n} orthogonal members need at least {n} matrix units, got {}",
            dim * dim
        )));
    }
    let algebra = Arc::new(TracialAlgebra::matrix(dim, scale)?);
    let cells = random_partition(rng, dim * dim, n);
    let u = random_unitary(rng, dim);
    let v = random_unitary(rng, dim);
    cells
        .iter()
        .map(|set| {
            let mut g = CMatrix::zeros(dim, dim);
            for &k in set {
                g[(k / dim, k % dim)] = random_complex(rng);
            }
            OperatorMatrix::from_blocks(Arc::clone(&algebra), vec![&u * g * v.adjoint()])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = rng_from_seed(1);
        for d in 1..6 {
            let u = random_unitary(&mut rng, d);
            let e = u.adjoint() * &u - CMatrix::identity(d, d);
            assert!(e.norm() < 1e-13);
        }
    }

    #[test]
    fn partitions_cover_exactly() {
        let mut rng = rng_from_seed(2);
        for _ in 0..50 {
            let parts = random_partition(&mut rng, 9, 4);
            assert_eq!(parts.len(), 4);
            assert!(parts.iter().all(|p| !p.is_empty()));
            let mut all: Vec<usize> = parts.concat();
            all.sort_unstable();
            assert_eq!(all, (0..9).collect::<Vec<_>>());
        }
    }

    #[test]
    fn hs_orthogonal_family_is_orthogonal() {
        let mut rng = rng_from_seed(3);
        let xs = random_hs_orthogonal_family(&mut rng, 3, 0.5, 5).unwrap();
        for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                let ip = xs[j].adjoint().checked_mul(&xs[i]).unwrap().trace();
                assert!(ip.norm() < 1e-13);
            }
        }
    }

    #[test]
    fn generators_are_reproducible() {
        let a = random_operator(&mut rng_from_seed(9), &Arc::new(random_algebra(&mut rng_from_seed(8), 3, 4)));
        let b = random_operator(&mut rng_from_seed(9), &Arc::new(random_algebra(&mut rng_from_seed(8), 3, 4)));
        assert_eq!(a, b);
        assert!(random_bidisjoint_family(&mut rng_from_seed(1), 3, 1.0, 4).is_err());
    }
}
