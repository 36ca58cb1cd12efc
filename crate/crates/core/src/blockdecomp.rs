//! The 2×2 block form of `T: H → K` relative to `H = M ⊕ M⊥`, `K = N ⊕ N⊥`.
//!
//! Blocks are stored in subspace coordinates:
//!
//! ```text
//! A = V_N*·T·U_M    B = V_N*·T·U_M⊥
//! C = V_N⊥*·T·U_M   D = V_N⊥*·T·U_M⊥
//! ```
//!
//! where `U_·`, `V_·` are the orthonormal bases carried in the [`BlockOp`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Real;
use crate::subspace::Subspace;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct BlockOp<R: Real = f64> {
    pub m: Subspace<R>,
    pub mperp: Subspace<R>,
    pub n: Subspace<R>,
    pub nperp: Subspace<R>,
    pub a: Matrix<R>,
    pub b: Matrix<R>,
    pub c: Matrix<R>,
    pub d: Matrix<R>,
}

pub fn decompose<R: Real>(t: &Matrix<R>, m: &Subspace<R>, n: &Subspace<R>) -> Result<BlockOp<R>> {
    if t.cols() != m.ambient() {
        return Err(Error::invalid(format!(
            "T has {} columns but M lives in dimension {}",
            t.cols(),
            m.ambient()
        )));
    }
    if t.rows() != n.ambient() {
        return Err(Error::invalid(format!(
            "T has {} rows but N lives in dimension {}",
            t.rows(),
            n.ambient()
        )));
    }
    if !t.is_finite() {
        return Err(Error::invalid("T has non-finite entries"));
    }
    let mperp = m.complement();
    let nperp = n.complement();
    let tu = t * m.basis();
    let tup = t * mperp.basis();
    let vh = n.basis().adjoint();
    let vph = nperp.basis().adjoint();
    Ok(BlockOp {
        a: &vh * &tu,
        b: &vh * &tup,
        c: &vph * &tu,
        d: &vph * &tup,
        m: m.clone(),
        mperp,
        n: n.clone(),
        nperp,
    })
}

impl<R: Real> BlockOp<R> {
    /// `[V_N V_N⊥]·[[A,B],[C,D]]·[U_M U_M⊥]*`.
    pub fn reassemble(&self) -> Matrix<R> {
        self.embed(&self.a, &self.b, &self.c, &self.d)
    }

    /// Embeds an arbitrary block matrix (same shapes as A, B, C, D) in ambient coordinates.
    pub fn embed(&self, a: &Matrix<R>, b: &Matrix<R>, c: &Matrix<R>, d: &Matrix<R>) -> Matrix<R> {
        let v = self.codomain_frame();
        let u = self.domain_frame();
        &(&v * &Matrix::from_blocks(a, b, c, d)) * &u.adjoint()
    }

    /// `V_N·S·U_M*`, the ambient form of `diag(S, 0)`.
    pub fn embed_top_left(&self, s: &Matrix<R>) -> Matrix<R> {
        &(self.n.basis() * s) * &self.m.basis().adjoint()
    }

    /// `V_N⊥·S·U_M⊥*`, the ambient form of `diag(0, S)`.
    pub fn embed_bottom_right(&self, s: &Matrix<R>) -> Matrix<R> {
        &(self.nperp.basis() * s) * &self.mperp.basis().adjoint()
    }

    /// `[U_M U_M⊥]`, unitary on the domain.
    pub fn domain_frame(&self) -> Matrix<R> {
        self.m.basis().hstack(self.mperp.basis())
    }

    /// `[V_N V_N⊥]`, unitary on the codomain.
    pub fn codomain_frame(&self) -> Matrix<R> {
        self.n.basis().hstack(self.nperp.basis())
    }

    pub fn ambient_dom(&self) -> usize {
        self.m.ambient()
    }

    pub fn ambient_cod(&self) -> usize {
        self.n.ambient()
    }

    /// Block form of `T*` relative to `(N, M)`: `(A*, C*, B*, D*)`.
    pub fn adjoint(&self) -> BlockOp<R> {
        BlockOp {
            m: self.n.clone(),
            mperp: self.nperp.clone(),
            n: self.m.clone(),
            nperp: self.mperp.clone(),
            a: self.a.adjoint(),
            b: self.c.adjoint(),
            c: self.b.adjoint(),
            d: self.d.adjoint(),
        }
    }
}
