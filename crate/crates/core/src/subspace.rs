//! Closed subspaces of a finite-dimensional Hilbert space, stored as
//! orthonormal bases.
//!
//! Bases are not unique, so two subspaces are compared by mutual inclusion
//! ([`Subspace::same_as`]) and never entrywise.

use num_complex::Complex;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::numerics::{svd_unchecked, TolPolicy};
use crate::scalar::{cone, czero, Real};

/// Outcome of a toleranced test together with its numeric defect.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Check<R: Real = f64> {
    pub holds: bool,
    pub defect: R,
}

impl<R: Real> Check<R> {
    pub fn within(defect: R, limit: R) -> Self {
        Self {
            holds: defect <= limit,
            defect,
        }
    }

    pub(crate) fn from_defect(defect: R, tol: &TolPolicy<R>) -> Self {
        Self::within(defect, tol.eq_rtol)
    }

    /// Both inclusions hold; the defect is the larger of the two.
    pub fn and(self, other: Self) -> Self {
        Self {
            holds: self.holds && other.holds,
            defect: self.defect.max(other.defect),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct Subspace<R: Real = f64> {
    ambient: usize,
    basis: Matrix<R>,
}

impl<R: Real> Subspace<R> {
    /// Orthonormal basis of the column span, of dimension `numerical_rank(vectors)`.
    pub fn from_spanning(vectors: &Matrix<R>, tol: &TolPolicy<R>) -> Self {
        range_of(vectors, tol)
    }

    /// Wraps a basis that is already orthonormal (checked to `1e-10` in double precision).
    pub fn from_orthonormal(basis: Matrix<R>) -> Result<Self> {
        if !basis.is_finite() {
            return Err(Error::invalid("subspace basis has non-finite entries"));
        }
        if basis.cols() > basis.rows() {
            return Err(Error::invalid(format!(
                "{} basis vectors cannot be orthonormal in dimension {}",
                basis.cols(),
                basis.rows()
            )));
        }
        let gram = &basis.adjoint() * &basis;
        let slack = R::lit(1e-10).max(R::epsilon() * R::lit(1e3));
        let off = (&gram - &Matrix::identity(basis.cols())).max_abs();
        if off > slack {
            return Err(Error::invalid(format!(
                "basis columns are not orthonormal (‖B*B − I‖_max = {:e})",
                off.to_f64()
            )));
        }
        Ok(Self {
            ambient: basis.rows(),
            basis,
        })
    }

    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Matrix::zeros(ambient, 0),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Matrix::identity(ambient),
        }
    }

    /// Span of the standard basis vectors at the given (0-based) indices, in that order.
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Result<Self> {
        let mut basis = Matrix::zeros(ambient, indices.len());
        for (j, &i) in indices.iter().enumerate() {
            if i >= ambient {
                return Err(Error::invalid(format!("coordinate {i} out of range for dimension {ambient}")));
            }
            basis[(i, j)] = cone();
        }
        Self::from_orthonormal(basis)
    }

    #[inline]
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    #[inline]
    pub fn basis(&self) -> &Matrix<R> {
        &self.basis
    }

    /// Orthogonal projector `B·B*`.
    pub fn projector(&self) -> Matrix<R> {
        &self.basis * &self.basis.adjoint()
    }

    /// Orthonormal basis of the orthogonal complement.
    ///
    /// Column-pivoted Gram–Schmidt on `I − B·B*`, taking exactly
    /// `ambient − dim` vectors; coordinate subspaces therefore get
    /// coordinate complements in increasing index order.
    pub fn complement(&self) -> Self {
        let n = self.ambient;
        let k = self.dim();
        if k == 0 {
            return Self::full(n);
        }
        if k == n {
            return Self::zero(n);
        }
        let q = self.basis.columns();
        let mut cols: Vec<Vec<Complex<R>>> = (0..n)
            .map(|j| {
                let mut e = vec![czero(); n];
                e[j] = cone();
                for qc in &q {
                    let h = qc[j].conj();
                    for (ei, &qi) in e.iter_mut().zip(qc) {
                        *ei -= qi * h;
                    }
                }
                e
            })
            .collect();
        let mut used = vec![false; n];
        let mut accepted: Vec<Vec<Complex<R>>> = Vec::with_capacity(n - k);
        for _ in 0..(n - k) {
            let mut pivot = None;
            let mut best = R::zero();
            for (j, c) in cols.iter().enumerate() {
                if used[j] {
                    continue;
                }
                let nrm: R = c.iter().map(|z| z.norm_sqr()).sum();
                if pivot.is_none() || nrm > best {
                    best = nrm;
                    pivot = Some(j);
                }
            }
            let p = pivot.expect("complement: ran out of candidate columns");
            used[p] = true;
            let mut v = cols[p].clone();
            for _ in 0..2 {
                for w in q.iter().chain(accepted.iter()) {
                    let h = dot(w, &v);
                    for (vi, &wi) in v.iter_mut().zip(w) {
                        *vi -= wi * h;
                    }
                }
            }
            let nrm = v.iter().map(|z| z.norm_sqr()).sum::<R>().sqrt();
            let v: Vec<Complex<R>> = if nrm > R::lit(1e-3) {
                v.into_iter().map(|z| z / nrm).collect()
            } else {
                let mut all = q.clone();
                all.extend(accepted.iter().cloned());
                crate::numerics::completion_vector(n, &all)
            };
            for (j, c) in cols.iter_mut().enumerate() {
                if used[j] {
                    continue;
                }
                let h = dot(&v, c);
                for (ci, &vi) in c.iter_mut().zip(&v) {
                    *ci -= vi * h;
                }
            }
            accepted.push(v);
        }
        Self {
            ambient: n,
            basis: Matrix::from_columns(n, &accepted),
        }
    }

    /// `inner ⊆ self`, with defect `‖(I − P_self)·basis_inner‖₂`.
    pub fn includes(&self, inner: &Self, tol: &TolPolicy<R>) -> Result<Check<R>> {
        self.check_ambient(inner)?;
        if inner.dim() == 0 {
            return Ok(Check::from_defect(R::zero(), tol));
        }
        let coeffs = &self.basis.adjoint() * &inner.basis;
        let residual = &inner.basis - &(&self.basis * &coeffs);
        Ok(Check::from_defect(residual.norm(), tol))
    }

    /// Mutual inclusion.
    pub fn same_as(&self, other: &Self, tol: &TolPolicy<R>) -> Result<Check<R>> {
        Ok(self.includes(other, tol)?.and(other.includes(self, tol)?))
    }

    /// Distance of a vector from the subspace, relative to the vector's norm.
    pub fn contains_vector(&self, v: &[Complex<R>], tol: &TolPolicy<R>) -> Result<Check<R>> {
        if v.len() != self.ambient {
            return Err(Error::invalid(format!(
                "vector of length {} in ambient dimension {}",
                v.len(),
                self.ambient
            )));
        }
        let coeffs = self.basis.adjoint().mul_vec(v);
        let proj = self.basis.mul_vec(&coeffs);
        let res: R = v.iter().zip(&proj).map(|(a, b)| (a - b).norm_sqr()).sum::<R>().sqrt();
        let nrm: R = v.iter().map(|z| z.norm_sqr()).sum::<R>().sqrt();
        Ok(Check::from_defect(res / nrm.max(R::one()), tol))
    }

    /// `s1 ∩ s2 = (s1⊥ + s2⊥)⊥`.
    pub fn intersect(&self, other: &Self, tol: &TolPolicy<R>) -> Result<Self> {
        self.check_ambient(other)?;
        let perp_sum = self.complement().sum(&other.complement(), tol)?;
        Ok(perp_sum.complement())
    }

    pub fn sum(&self, other: &Self, tol: &TolPolicy<R>) -> Result<Self> {
        self.check_ambient(other)?;
        Ok(Self::from_spanning(&self.basis.hstack(&other.basis), tol))
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::invalid(format!(
                "ambient dimension mismatch: {} vs {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }
}

fn dot<R: Real>(x: &[Complex<R>], y: &[Complex<R>]) -> Complex<R> {
    x.iter().zip(y).fold(czero(), |acc, (&a, &b)| acc + a.conj() * b)
}

/// Column space: left singular vectors above `τ(m)`.
pub fn range_of<R: Real>(m: &Matrix<R>, tol: &TolPolicy<R>) -> Subspace<R> {
    if m.cols() == 0 || m.rows() == 0 {
        return Subspace::zero(m.rows());
    }
    let f = svd_unchecked(m);
    let r = f.rank(tol);
    Subspace {
        ambient: m.rows(),
        basis: f.u.column_range(0, r),
    }
}

/// Null space, as the complement of the row space; `dim = cols − rank`.
pub fn null_of<R: Real>(m: &Matrix<R>, tol: &TolPolicy<R>) -> Subspace<R> {
    range_of(&m.adjoint(), tol).complement()
}

/// `T⁻¹(S) = {x : Tx ∈ S} = N(P_{S⊥}·T)`.
pub fn preimage<R: Real>(t: &Matrix<R>, s: &Subspace<R>, tol: &TolPolicy<R>) -> Result<Subspace<R>> {
    if t.rows() != s.ambient() {
        return Err(Error::invalid(format!(
            "preimage: operator has {} rows but subspace lives in dimension {}",
            t.rows(),
            s.ambient()
        )));
    }
    let q = s.basis();
    let compressed = &q.adjoint() * t;
    let off = t - &(q * &compressed);
    Ok(null_of(&off, tol))
}

// {"ambient": n, "basis": MatrixFile}; the spanning columns are orthonormalized on load.
#[derive(Deserialize)]
#[serde(deny_unknown_fields, bound = "")]
struct SubspaceFile<R: Real> {
    ambient: usize,
    basis: Matrix<R>,
}

impl<'de, R: Real> Deserialize<'de> for Subspace<R> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = SubspaceFile::<R>::deserialize(deserializer)?;
        if file.basis.rows() != file.ambient {
            return Err(D::Error::custom(format!(
                "basis.rows = {} does not match ambient = {}",
                file.basis.rows(),
                file.ambient
            )));
        }
        Ok(Subspace::from_spanning(&file.basis, &TolPolicy::default()))
    }
}
