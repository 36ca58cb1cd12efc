//! Dense kernels: SVD, numerical rank, pseudoinverse, operator norm and the
//! reduced minimum modulus.
//!
//! The SVD is a one-sided (Hestenes) Jacobi iteration with a fixed cyclic
//! pivot order, so identical inputs always produce identical factors.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{czero, Real};

const MAX_SWEEPS: usize = 80;

/// Tolerances shared by every rank and equality decision.
///
/// The rank threshold of a matrix `M` is `max(rank_rtol · σ_max(M), abs_floor)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct TolPolicy<R: Real = f64> {
    pub rank_rtol: R,
    pub eq_rtol: R,
    pub abs_floor: R,
}

impl<R: Real> Default for TolPolicy<R> {
    /// `1e-10 / 1e-9 / 1e-13` in double precision. Lower precisions get the
    /// relative tolerances widened to a fixed multiple of their epsilon.
    fn default() -> Self {
        let eps = R::epsilon();
        Self {
            rank_rtol: R::lit(1e-10).max(eps * R::lit(1e3)),
            eq_rtol: R::lit(1e-9).max(eps * R::lit(1e4)),
            abs_floor: R::lit(1e-13),
        }
    }
}

impl<R: Real> TolPolicy<R> {
    pub fn new(rank_rtol: R, eq_rtol: R, abs_floor: R) -> Result<Self> {
        let ok = |x: R| x.is_finite() && x > R::zero();
        if !(ok(rank_rtol) && ok(eq_rtol) && ok(abs_floor)) {
            return Err(Error::invalid("tolerances must be finite and strictly positive"));
        }
        Ok(Self {
            rank_rtol,
            eq_rtol,
            abs_floor,
        })
    }

    /// Rank threshold τ for a matrix whose largest singular value is `sigma_max`.
    pub fn threshold(&self, sigma_max: R) -> R {
        (self.rank_rtol * sigma_max).max(self.abs_floor)
    }
}

/// Thin SVD `M = U · diag(S) · Vh` with `p = min(rows, cols)` singular triplets.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SvdFactors<R: Real = f64> {
    /// `rows × p`, orthonormal columns.
    pub u: Matrix<R>,
    /// Nonincreasing, nonnegative.
    pub s: Vec<R>,
    /// `p × cols`, orthonormal rows.
    pub vh: Matrix<R>,
}

impl<R: Real> SvdFactors<R> {
    pub fn reconstruct(&self) -> Matrix<R> {
        let us = Matrix::from_fn(self.u.rows(), self.s.len(), |i, j| self.u[(i, j)] * self.s[j]);
        &us * &self.vh
    }

    pub fn sigma_max(&self) -> R {
        self.s.first().copied().unwrap_or_else(R::zero)
    }

    /// Number of singular values strictly above the rank threshold.
    pub fn rank(&self, tol: &TolPolicy<R>) -> usize {
        let tau = tol.threshold(self.sigma_max());
        self.s.iter().take_while(|&&s| s > tau).count()
    }
}

/// Singular value decomposition of a finite matrix.
pub fn svd<R: Real>(m: &Matrix<R>) -> Result<SvdFactors<R>> {
    if !m.is_finite() {
        return Err(Error::invalid("svd: matrix has non-finite entries"));
    }
    Ok(svd_unchecked(m))
}

pub(crate) fn svd_unchecked<R: Real>(m: &Matrix<R>) -> SvdFactors<R> {
    if m.rows() >= m.cols() {
        jacobi_tall(m, true)
    } else {
        // M* = U' S V'*  ⇒  M = V' S U'*
        let f = jacobi_tall(&m.adjoint(), true);
        SvdFactors {
            u: f.vh.adjoint(),
            s: f.s,
            vh: f.u.adjoint(),
        }
    }
}

/// Singular values only, in nonincreasing order.
pub fn singular_values<R: Real>(m: &Matrix<R>) -> Vec<R> {
    if m.rows() >= m.cols() {
        jacobi_tall(m, false).s
    } else {
        jacobi_tall(&m.adjoint(), false).s
    }
}

fn dot_conj<R: Real>(x: &[Complex<R>], y: &[Complex<R>]) -> Complex<R> {
    x.iter().zip(y).fold(czero(), |acc, (&a, &b)| acc + a.conj() * b)
}

fn norm_sqr<R: Real>(x: &[Complex<R>]) -> R {
    x.iter().map(|z| z.norm_sqr()).sum()
}

/// Applies the rotation `(x, y) ← (c·x − s·ȳ, s·x + c·ȳ)` where `ȳ = y · conj(phase)`.
fn rotate<R: Real>(x: &mut [Complex<R>], y: &mut [Complex<R>], c: R, s: R, phase: Complex<R>) {
    let ph = phase.conj();
    for (a, b) in x.iter_mut().zip(y.iter_mut()) {
        let ap = *a;
        let aq = *b * ph;
        *a = ap * c - aq * s;
        *b = ap * s + aq * c;
    }
}

/// One-sided Jacobi on a matrix with `rows ≥ cols`.
fn jacobi_tall<R: Real>(m: &Matrix<R>, want_vectors: bool) -> SvdFactors<R> {
    let (rows, n) = m.shape();
    debug_assert!(rows >= n);
    let mut a = m.columns();
    let mut v: Vec<Vec<Complex<R>>> = if want_vectors {
        Matrix::<R>::identity(n).columns()
    } else {
        Vec::new()
    };

    let tol = R::epsilon() * R::lit((rows.max(1) as f64).sqrt());
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = norm_sqr(&a[p]);
                let beta = norm_sqr(&a[q]);
                if alpha == R::zero() || beta == R::zero() {
                    continue;
                }
                let g = dot_conj(&a[p], &a[q]);
                let gabs = g.norm();
                if gabs.is_nan() || gabs <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = g / gabs;
                let zeta = (beta - alpha) / (gabs + gabs);
                let t = zeta.signum() / (zeta.abs() + zeta.hypot(R::one()));
                let c = R::one() / t.hypot(R::one());
                let s = c * t;
                let (left, right) = a.split_at_mut(q);
                rotate(&mut left[p], &mut right[0], c, s, phase);
                if want_vectors {
                    let (left, right) = v.split_at_mut(q);
                    rotate(&mut left[p], &mut right[0], c, s, phase);
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<R> = a.iter().map(|col| norm_sqr(col).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // stable: equal singular values keep their column order
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(std::cmp::Ordering::Equal));
    let s: Vec<R> = order.iter().map(|&j| norms[j]).collect();

    if !want_vectors {
        return SvdFactors {
            u: Matrix::zeros(rows, 0),
            s,
            vh: Matrix::zeros(0, n),
        };
    }

    let mut u_cols: Vec<Option<Vec<Complex<R>>>> = order
        .iter()
        .map(|&j| {
            let sj = norms[j];
            if sj > R::min_positive_value() {
                Some(a[j].iter().map(|&z| z / sj).collect())
            } else {
                None
            }
        })
        .collect();
    let u = orthonormalize_with_completion(rows, &mut u_cols);
    let v_sorted: Vec<Vec<Complex<R>>> = order.iter().map(|&j| v[j].clone()).collect();
    let vmat = Matrix::from_columns(n, &v_sorted);
    SvdFactors {
        u,
        s,
        vh: vmat.adjoint(),
    }
}

fn project_out<R: Real>(x: &mut [Complex<R>], basis: &[Vec<Complex<R>>]) {
    for q in basis {
        let h = dot_conj(q, x);
        for (xi, &qi) in x.iter_mut().zip(q) {
            *xi -= qi * h;
        }
    }
}

/// Modified Gram–Schmidt (two passes) over the given columns; missing or
/// degenerate columns are replaced by the standard basis vector with the
/// largest residual against the columns accepted so far.
fn orthonormalize_with_completion<R: Real>(
    rows: usize,
    cols: &mut [Option<Vec<Complex<R>>>],
) -> Matrix<R> {
    let half = R::lit(0.5);
    let mut accepted: Vec<Vec<Complex<R>>> = Vec::with_capacity(cols.len());
    for slot in cols.iter_mut() {
        let mut next = None;
        if let Some(mut x) = slot.take() {
            project_out(&mut x, &accepted);
            project_out(&mut x, &accepted);
            let nrm = norm_sqr(&x).sqrt();
            if nrm > half {
                next = Some(x.into_iter().map(|z| z / nrm).collect::<Vec<_>>());
            }
        }
        let col = match next {
            Some(c) => c,
            None => completion_vector(rows, &accepted),
        };
        accepted.push(col);
    }
    Matrix::from_columns(rows, &accepted)
}

pub(crate) fn completion_vector<R: Real>(rows: usize, accepted: &[Vec<Complex<R>>]) -> Vec<Complex<R>> {
    let mut best: Option<(R, Vec<Complex<R>>)> = None;
    for k in 0..rows {
        let mut e = vec![czero(); rows];
        e[k] = Complex::new(R::one(), R::zero());
        project_out(&mut e, accepted);
        project_out(&mut e, accepted);
        let nrm = norm_sqr(&e).sqrt();
        if best.as_ref().is_none_or(|(b, _)| nrm > *b) {
            best = Some((nrm, e));
        }
    }
    let (nrm, e) = best.expect("completion requested for an empty ambient space");
    e.into_iter().map(|z| z / nrm).collect()
}

/// Count of singular values strictly above `τ(m)`.
pub fn numerical_rank<R: Real>(m: &Matrix<R>, tol: &TolPolicy<R>) -> usize {
    let s = singular_values(m);
    let tau = tol.threshold(s.first().copied().unwrap_or_else(R::zero));
    s.iter().take_while(|&&x| x > tau).count()
}

/// Moore–Penrose pseudoinverse by SVD truncation at `τ(m)`.
pub fn pinv<R: Real>(m: &Matrix<R>, tol: &TolPolicy<R>) -> Matrix<R> {
    let f = svd_unchecked(m);
    let r = f.rank(tol);
    // V_r · diag(1/σ) · U_r*
    Matrix::from_fn(m.cols(), m.rows(), |i, j| {
        (0..r).fold(czero(), |acc, k| {
            acc + f.vh[(k, i)].conj() * f.u[(j, k)].conj() / f.s[k]
        })
    })
}

/// Reduced minimum modulus: the smallest singular value above `τ(m)`.
///
/// The zero matrix has `γ = +∞` (infimum over an empty set).
pub fn gamma<R: Real>(m: &Matrix<R>, tol: &TolPolicy<R>) -> R {
    let s = singular_values(m);
    let tau = tol.threshold(s.first().copied().unwrap_or_else(R::zero));
    s.iter()
        .copied()
        .filter(|&x| x > tau)
        .last()
        .unwrap_or_else(R::infinity)
}

/// Spectral norm `σ_max`; zero for empty or zero matrices.
pub fn operator_norm<R: Real>(m: &Matrix<R>) -> R {
    if m.is_empty() {
        return R::zero();
    }
    singular_values(m).first().copied().unwrap_or_else(R::zero)
}

/// Largest of the four Penrose residuals of `x` as a pseudoinverse of `m`.
pub fn penrose_residual<R: Real>(m: &Matrix<R>, x: &Matrix<R>) -> R {
    let mx = m * x;
    let xm = x * m;
    let r1 = (&(&mx * m) - m).norm();
    let r2 = (&(&xm * x) - x).norm();
    let r3 = (&mx.adjoint() - &mx).norm();
    let r4 = (&xm.adjoint() - &xm).norm();
    r1.max(r2).max(r3).max(r4)
}
