//! EP / hypo-EP classification and the block Moore–Penrose inverse.
//!
//! `T` is EP when `R(T) = R(T*)` and hypo-EP when `R(T) ⊆ R(T*)` (closed
//! range is automatic here). For square matrices the two coincide since
//! `rank T = rank T*`; they are kept apart because their defects differ,
//! one-sided versus two-sided.

use serde::{Deserialize, Serialize};

use crate::blockdecomp::{decompose, BlockOp};
use crate::complement::{schur, Route};
use crate::error::{Error, Hypothesis, Result};
use crate::matrix::Matrix;
use crate::numerics::{pinv, TolPolicy};
use crate::scalar::Real;
use crate::subspace::{range_of, Check, Subspace};

fn require_square<R: Real>(t: &Matrix<R>) -> Result<()> {
    if !t.is_square() {
        return Err(Error::invalid(format!("expected a square matrix, got {}×{}", t.rows(), t.cols())));
    }
    Ok(())
}

/// `R(T) = R(T*)`, defect the larger of the two one-sided defects.
pub fn is_ep<R: Real>(t: &Matrix<R>, tol: &TolPolicy<R>) -> Result<Check<R>> {
    require_square(t)?;
    let r = range_of(t, tol);
    let rs = range_of(&t.adjoint(), tol);
    r.same_as(&rs, tol)
}

/// `R(T) ⊆ R(T*)`, defect `‖(I − P_{R(T*)})·P_{R(T)}‖`.
pub fn is_hypo_ep<R: Real>(t: &Matrix<R>, tol: &TolPolicy<R>) -> Result<Check<R>> {
    require_square(t)?;
    range_of(&t.adjoint(), tol).includes(&range_of(t, tol), tol)
}

/// The block formula
///
/// ```text
/// T⁺ = [[ S⁺,        −S⁺BD⁺          ],
///       [ −D⁺CS⁺,    D⁺ + D⁺CS⁺BD⁺   ]]
/// ```
///
/// with `S = A − BD⁺C`, returned in ambient coordinates. Both range
/// hypotheses `R(C*) ⊆ R(S*)` and `R(B) ⊆ R(S)` are checked first.
pub fn block_pinv<R: Real>(blk: &BlockOp<R>, tol: &TolPolicy<R>) -> Result<Matrix<R>> {
    let s = schur(blk, Route::Pinv, tol)?.compressed;
    let rcstar = range_of(&s.adjoint(), tol).includes(&range_of(&blk.c.adjoint(), tol), tol)?;
    if !rcstar.holds {
        return Err(Error::HypothesisFailed {
            which: Hypothesis::RangeCStarInSchurStar,
            defect: rcstar.defect.to_f64(),
        });
    }
    let rb = range_of(&s, tol).includes(&range_of(&blk.b, tol), tol)?;
    if !rb.holds {
        return Err(Error::HypothesisFailed {
            which: Hypothesis::RangeBInSchur,
            defect: rb.defect.to_f64(),
        });
    }

    let sp = pinv(&s, tol);
    let dp = pinv(&blk.d, tol);
    let sp_b_dp = &(&sp * &blk.b) * &dp;
    let dp_c_sp = &(&dp * &blk.c) * &sp;
    let x12 = -&sp_b_dp;
    let x21 = -&dp_c_sp;
    let x22 = &dp + &(&dp_c_sp * &(&blk.b * &dp));
    let blocks = Matrix::from_blocks(&sp, &x12, &x21, &x22);
    Ok(&(&blk.domain_frame() * &blocks) * &blk.codomain_frame().adjoint())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct EpReport<R: Real = f64> {
    pub t_is_ep: Check<R>,
    pub t_is_hypo_ep: Check<R>,
    pub schur_is_hypo_ep: Check<R>,
    pub d_is_hypo_ep: Check<R>,
    /// `R(B) ⊆ R(T/)`.
    pub rb_in_rschur: Check<R>,
    /// `R(C*) ⊆ R((T/)*)`, the hypothesis under which the equivalences are claimed.
    pub rcstar_in_rschurstar: Check<R>,
    /// `[[T/, 0], [C, D]]`.
    pub aug_lower_is_hypo_ep: Check<R>,
    /// `[[T/, B], [0, D]]`.
    pub aug_upper_is_hypo_ep: Check<R>,
    /// `M = N`. Both implications below rely on `R((T/)*) = R(T*) ∩ N`, which
    /// holds only then: for `M ≠ N` the embedded `T/` maps into `N` while its
    /// adjoint maps into `M`, and an invertible `T` already breaks them.
    pub subspaces_coincide: Check<R>,
    /// `t_is_hypo_ep ⇔ (schur ∧ d ∧ rb) ⇔ (aug_lower ∧ aug_upper)`, evaluated regardless of the hypothesis.
    pub chain_agrees: bool,
    /// `T` hypo-EP ⇒ `T/` hypo-EP; vacuous when `M ≠ N`.
    pub unconditional_implication: bool,
    /// The chain agrees whenever the hypothesis holds and `M = N`.
    pub equivalences_consistent: bool,
}

pub fn ep_equivalence_report<R: Real>(
    t: &Matrix<R>,
    m: &Subspace<R>,
    n: &Subspace<R>,
    tol: &TolPolicy<R>,
) -> Result<EpReport<R>> {
    require_square(t)?;
    let blk = decompose(t, m, n)?;
    let s = schur(&blk, Route::Pinv, tol)?;
    let zero_b = Matrix::zeros(blk.b.rows(), blk.b.cols());
    let zero_c = Matrix::zeros(blk.c.rows(), blk.c.cols());
    let aug_lower = blk.embed(&s.compressed, &zero_b, &blk.c, &blk.d);
    let aug_upper = blk.embed(&s.compressed, &blk.b, &zero_c, &blk.d);

    let t_is_hypo_ep = is_hypo_ep(t, tol)?;
    let schur_is_hypo_ep = is_hypo_ep(&s.ambient, tol)?;
    let d_is_hypo_ep = is_hypo_ep(&blk.embed_bottom_right(&blk.d), tol)?;
    let rb_in_rschur = range_of(&s.compressed, tol).includes(&range_of(&blk.b, tol), tol)?;
    let rcstar_in_rschurstar =
        range_of(&s.compressed.adjoint(), tol).includes(&range_of(&blk.c.adjoint(), tol), tol)?;
    let aug_lower_is_hypo_ep = is_hypo_ep(&aug_lower, tol)?;
    let aug_upper_is_hypo_ep = is_hypo_ep(&aug_upper, tol)?;

    let item2 = schur_is_hypo_ep.holds && d_is_hypo_ep.holds && rb_in_rschur.holds;
    let item3 = aug_lower_is_hypo_ep.holds && aug_upper_is_hypo_ep.holds;
    let chain_agrees = t_is_hypo_ep.holds == item2 && item2 == item3;
    let subspaces_coincide = m.same_as(n, tol)?;
    let applies = subspaces_coincide.holds;

    Ok(EpReport {
        t_is_ep: is_ep(t, tol)?,
        unconditional_implication: !applies || !t_is_hypo_ep.holds || schur_is_hypo_ep.holds,
        equivalences_consistent: !applies || !rcstar_in_rschurstar.holds || chain_agrees,
        subspaces_coincide,
        chain_agrees,
        t_is_hypo_ep,
        schur_is_hypo_ep,
        d_is_hypo_ep,
        rb_in_rschur,
        rcstar_in_rschurstar,
        aug_lower_is_hypo_ep,
        aug_upper_is_hypo_ep,
    })
}
