#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use shorted::corpus::random_unitary;
use shorted::{Complex, Mat, Subspace, Tol};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Mat {
    Mat::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex::new(re, im)
    })
}

/// Random matrix of the given rank.
pub fn low_rank(rng: &mut ChaCha8Rng, rows: usize, cols: usize, rank: usize) -> Mat {
    &gaussian(rng, rows, rank) * &gaussian(rng, rank, cols)
}

/// Random `k`-dimensional subspace of `ambient` (Haar-like).
pub fn subspace(rng: &mut ChaCha8Rng, ambient: usize, k: usize) -> Subspace {
    Subspace::from_orthonormal(random_unitary::<f64>(ambient, rng).column_range(0, k)).unwrap()
}

pub fn any_subspace(rng: &mut ChaCha8Rng, ambient: usize) -> Subspace {
    let k = rng.random_range(0..=ambient);
    subspace(rng, ambient, k)
}

pub fn tol() -> Tol {
    Tol::default()
}

pub fn same(a: &Subspace, b: &Subspace, limit: f64) -> bool {
    let inc = a.same_as(b, &tol()).unwrap();
    inc.defect <= limit
}
