//! Complementability, Douglas reduced solutions and the Schur complement
//! (bilateral shorted operator) of a block operator.
//!
//! `T` is `(M,N)`-complementable iff `R(C) ⊆ R(D)` and `R(B*) ⊆ R(D*)`.
//! The Schur complement is then `A − BZ` for any `Z` with `C = DZ`; four
//! equivalent formulas are available through [`Route`].

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::blockdecomp::{decompose, BlockOp};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::numerics::{gamma, pinv, svd_unchecked, TolPolicy};
use crate::scalar::{cx, Real};
use crate::subspace::{null_of, preimage, range_of, Check, Subspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Complementable,
    NotComplementable,
    /// `R(C) ⊆ R(D)` holds but `N(D) ⊄ N(B)`: `A − BZ` depends on the choice of `Z`.
    IllPosedSchur,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Complementable => "Complementable",
            Verdict::NotComplementable => "NotComplementable",
            Verdict::IllPosedSchur => "IllPosedSchur",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ComplementabilityReport<R: Real = f64> {
    pub rc_in_rd: Check<R>,
    pub rbstar_in_rdstar: Check<R>,
    pub nd_in_nb: Check<R>,
    /// The same inclusions with `|D*|^{1/2}`, `|D|^{1/2}` in place of `D`, `D*`
    /// give the same answer.
    pub weakly_coincides: bool,
    pub verdict: Verdict,
}

impl<R: Real> ComplementabilityReport<R> {
    pub fn is_complementable(&self) -> bool {
        self.verdict == Verdict::Complementable
    }

    fn require(&self) -> Result<()> {
        match self.verdict {
            Verdict::Complementable => Ok(()),
            Verdict::IllPosedSchur => Err(Error::IllPosedSchur {
                defect: self.nd_in_nb.defect.to_f64(),
            }),
            Verdict::NotComplementable => Err(Error::NotComplementable {
                rc_defect: self.rc_in_rd.defect.to_f64(),
                rbstar_defect: self.rbstar_in_rdstar.defect.to_f64(),
            }),
        }
    }
}

pub fn check_complementable<R: Real>(blk: &BlockOp<R>, tol: &TolPolicy<R>) -> Result<ComplementabilityReport<R>> {
    let rd = range_of(&blk.d, tol);
    let rdstar = range_of(&blk.d.adjoint(), tol);
    let rbstar = range_of(&blk.b.adjoint(), tol);
    let rc_in_rd = rd.includes(&range_of(&blk.c, tol), tol)?;
    let rbstar_in_rdstar = rdstar.includes(&rbstar, tol)?;
    let nd_in_nb = rbstar.complement().includes(&rdstar.complement(), tol)?;

    let verdict = if rc_in_rd.holds && rbstar_in_rdstar.holds {
        Verdict::Complementable
    } else if rc_in_rd.holds && !nd_in_nb.holds {
        Verdict::IllPosedSchur
    } else {
        Verdict::NotComplementable
    };

    let (sqrt_d, sqrt_dstar) = abs_sqrt(&blk.d, tol);
    let weak = range_of(&sqrt_dstar, tol).includes(&range_of(&blk.c, tol), tol)?.holds
        && range_of(&sqrt_d, tol).includes(&rbstar, tol)?.holds;

    Ok(ComplementabilityReport {
        rc_in_rd,
        rbstar_in_rdstar,
        nd_in_nb,
        weakly_coincides: weak == (verdict == Verdict::Complementable),
        verdict,
    })
}

/// `(|D|^{1/2}, |D*|^{1/2})` from the truncated SVD of `D`.
fn abs_sqrt<R: Real>(d: &Matrix<R>, tol: &TolPolicy<R>) -> (Matrix<R>, Matrix<R>) {
    let p = polar_parts(d, tol);
    (p.sqrt_abs, p.sqrt_abs_star)
}

struct PolarParts<R: Real> {
    sqrt_abs: Matrix<R>,
    sqrt_abs_star: Matrix<R>,
    /// Partial isometry `U_r·V_r*` with `D = U·|D|`.
    isometry: Matrix<R>,
}

fn polar_parts<R: Real>(d: &Matrix<R>, tol: &TolPolicy<R>) -> PolarParts<R> {
    if d.is_empty() {
        return PolarParts {
            sqrt_abs: Matrix::zeros(d.cols(), d.cols()),
            sqrt_abs_star: Matrix::zeros(d.rows(), d.rows()),
            isometry: Matrix::zeros(d.rows(), d.cols()),
        };
    }
    let f = svd_unchecked(d);
    let r = f.rank(tol);
    let ur = f.u.column_range(0, r);
    let vr = f.vh.adjoint().column_range(0, r);
    let root: Vec<R> = f.s[..r].iter().map(|s| s.sqrt()).collect();
    let root = Matrix::diag_real(&root);
    PolarParts {
        sqrt_abs: &(&vr * &root) * &vr.adjoint(),
        sqrt_abs_star: &(&ur * &root) * &ur.adjoint(),
        isometry: &ur * &vr.adjoint(),
    }
}

/// Reduced solution `Z = D⁺C` of `C = DZ`, the minimal-norm solution with `R(Z) ⊆ N(D)⊥`.
pub fn douglas_solve<R: Real>(d: &Matrix<R>, c: &Matrix<R>, tol: &TolPolicy<R>) -> Result<Matrix<R>> {
    if d.rows() != c.rows() {
        return Err(Error::invalid(format!(
            "douglas_solve: D has {} rows but C has {}",
            d.rows(),
            c.rows()
        )));
    }
    let z = &pinv(d, tol) * c;
    let residual = douglas_residual(d, c, &z);
    if residual > tol.eq_rtol * (R::one() + c.norm()) {
        return Err(Error::RangeInclusionFailed {
            residual: residual.to_f64(),
        });
    }
    Ok(z)
}

/// `‖D·Z − C‖`.
pub fn douglas_residual<R: Real>(d: &Matrix<R>, c: &Matrix<R>, z: &Matrix<R>) -> R {
    (&(d * z) - c).norm()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Route {
    /// `A − BZ`, `Z = D⁺C`.
    Right,
    /// `A − YC`, `Y = BD⁺`.
    Left,
    /// `A − BD⁺C`.
    #[default]
    Pinv,
    /// `A − E*F` from the polar decomposition `D = U|D|`.
    Polar,
}

impl Route {
    pub const ALL: [Route; 4] = [Route::Right, Route::Left, Route::Pinv, Route::Polar];
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Right => "right",
            Route::Left => "left",
            Route::Pinv => "pinv",
            Route::Polar => "polar",
        })
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "right" => Ok(Route::Right),
            "left" => Ok(Route::Left),
            "pinv" => Ok(Route::Pinv),
            "polar" => Ok(Route::Polar),
            other => Err(Error::invalid(format!(
                "unknown route '{other}' (expected right, left, pinv or polar)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SchurResult<R: Real = f64> {
    pub route: Route,
    /// `dim N × dim M`.
    pub compressed: Matrix<R>,
    /// `V_N·compressed·U_M*`.
    pub ambient: Matrix<R>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<Matrix<R>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Matrix<R>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<Matrix<R>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Matrix<R>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_polar: Option<Matrix<R>>,
}

/// Schur complement of a complementable block operator.
pub fn schur<R: Real>(blk: &BlockOp<R>, route: Route, tol: &TolPolicy<R>) -> Result<SchurResult<R>> {
    check_complementable(blk, tol)?.require()?;
    schur_unsafe(blk, route, tol)
}

/// Schur complement without the complementability gate.
///
/// Each route still needs its own Douglas solves to succeed: Right needs
/// `R(C) ⊆ R(D)`, Left needs `R(B*) ⊆ R(D*)`, Polar needs both, Pinv needs none.
pub fn schur_unsafe<R: Real>(blk: &BlockOp<R>, route: Route, tol: &TolPolicy<R>) -> Result<SchurResult<R>> {
    let (a, b, c, d) = (&blk.a, &blk.b, &blk.c, &blk.d);
    let mut out = SchurResult {
        route,
        compressed: Matrix::zeros(a.rows(), a.cols()),
        ambient: Matrix::zeros(0, 0),
        z: None,
        y: None,
        e: None,
        f: None,
        u_polar: None,
    };
    match route {
        Route::Right => {
            let z = douglas_solve(d, c, tol)?;
            out.compressed = a - &(b * &z);
            out.z = Some(z);
        }
        Route::Left => {
            let y = douglas_solve(&d.adjoint(), &b.adjoint(), tol)?.adjoint();
            out.compressed = a - &(&y * c);
            out.y = Some(y);
        }
        Route::Pinv => {
            let dp = pinv(d, tol);
            let z = &dp * c;
            let y = b * &dp;
            out.compressed = a - &(b * &z);
            out.z = Some(z);
            out.y = Some(y);
        }
        Route::Polar => {
            let p = polar_parts(d, tol);
            let f = douglas_solve(&(&p.sqrt_abs_star * &p.isometry), c, tol)?;
            let e = douglas_solve(&p.sqrt_abs, &b.adjoint(), tol)?;
            out.compressed = a - &(&e.adjoint() * &f);
            out.e = Some(e);
            out.f = Some(f);
            out.u_polar = Some(p.isometry);
        }
    }
    out.ambient = blk.embed_top_left(&out.compressed);
    Ok(out)
}

/// `A − BZ` for an arbitrary `Z: M → M⊥` in block coordinates.
pub fn schur_with_z<R: Real>(blk: &BlockOp<R>, z: &Matrix<R>) -> Result<Matrix<R>> {
    if z.shape() != (blk.b.cols(), blk.a.cols()) {
        return Err(Error::invalid(format!(
            "Z must be {}×{}, got {}×{}",
            blk.b.cols(),
            blk.a.cols(),
            z.rows(),
            z.cols()
        )));
    }
    Ok(&blk.a - &(&blk.b * z))
}

/// Two solutions of `C = DZ` whose Schur candidates `A − BZ` differ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct KernelWitness<R: Real = f64> {
    /// The reduced solution `D⁺C`.
    pub z1: Matrix<R>,
    /// `z1 + k·e₁*` with `k ∈ N(D)` maximizing `‖Bk‖`.
    pub z2: Matrix<R>,
    pub schur1: Matrix<R>,
    pub schur2: Matrix<R>,
    /// `‖Bk‖`, the gap between the two candidates.
    pub gap: R,
}

/// Exhibits the non-uniqueness of `A − BZ` when `N(D) ⊄ N(B)`.
///
/// Returns `None` when every kernel direction of `D` is annihilated by `B`
/// (or `M = 0`), i.e. when the Schur complement is well defined.
pub fn kernel_witness<R: Real>(blk: &BlockOp<R>, tol: &TolPolicy<R>) -> Result<Option<KernelWitness<R>>> {
    let z1 = douglas_solve(&blk.d, &blk.c, tol)?;
    let kernel = null_of(&blk.d, tol);
    if kernel.dim() == 0 || blk.a.cols() == 0 {
        return Ok(None);
    }
    let bk = &blk.b * kernel.basis();
    let (best, gap) = (0..bk.cols())
        .map(|j| (j, Matrix::column_vector(&bk.column(j)).fro_norm()))
        .fold((0, R::zero()), |acc, x| if x.1 > acc.1 { x } else { acc });
    if gap <= tol.eq_rtol * (R::one() + blk.b.norm()) {
        return Ok(None);
    }
    let k = kernel.basis().column(best);
    let mut z2 = z1.clone();
    for (i, &ki) in k.iter().enumerate() {
        z2[(i, 0)] += ki;
    }
    Ok(Some(KernelWitness {
        schur1: schur_with_z(blk, &z1)?,
        schur2: schur_with_z(blk, &z2)?,
        z1,
        z2,
        gap,
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", bound = "")]
pub enum Probe<R: Real = f64> {
    /// `{T(x,0) + T(M⊥)} ∩ N = {z}`, `z` in ambient codomain coordinates.
    Point { z: Vec<Complex<R>> },
    /// Some kernel direction of `D` moves the intersection point.
    NotSingleton { variation: R },
    /// `C·x + D·y = 0` has no solution.
    Empty { residual: R },
}

/// Probes the affine intersection `{T(x,0) + T(M⊥)} ∩ N` for `x ∈ M`
/// (ambient domain coordinates). Kernel perturbations are drawn from a
/// ChaCha8 stream seeded with `seed`.
pub fn singleton_probe<R: Real>(
    blk: &BlockOp<R>,
    x: &[Complex<R>],
    k_trials: usize,
    seed: u64,
    tol: &TolPolicy<R>,
) -> Result<Probe<R>> {
    if !blk.m.contains_vector(x, tol)?.holds {
        return Err(Error::invalid("probe vector does not lie in M"));
    }
    let xm = blk.m.basis().adjoint().mul_vec(x);
    let cx_m = blk.c.mul_vec(&xm);
    let rhs: Vec<Complex<R>> = cx_m.iter().map(|v| -v).collect();
    let y = pinv(&blk.d, tol).mul_vec(&rhs);
    let dy = blk.d.mul_vec(&y);
    let residual = vnorm(&dy.iter().zip(&cx_m).map(|(a, b)| a + b).collect::<Vec<_>>());
    if residual > tol.eq_rtol * (R::one() + vnorm(&cx_m)) {
        return Ok(Probe::Empty { residual });
    }

    let kernel = null_of(&blk.d, tol);
    if kernel.dim() > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let limit = tol.eq_rtol * (R::one() + blk.b.norm());
        let mut worst = R::zero();
        for _ in 0..k_trials {
            let g: Vec<Complex<R>> = (0..kernel.dim())
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    cx(R::lit(re), R::lit(im))
                })
                .collect();
            let w = kernel.basis().mul_vec(&g);
            let nw = vnorm(&w);
            if nw == R::zero() {
                continue;
            }
            worst = worst.max(vnorm(&blk.b.mul_vec(&w)) / nw);
        }
        if worst > limit {
            return Ok(Probe::NotSingleton { variation: worst });
        }
    }

    let ax = blk.a.mul_vec(&xm);
    let by = blk.b.mul_vec(&y);
    let zn: Vec<Complex<R>> = ax.iter().zip(&by).map(|(a, b)| a + b).collect();
    Ok(Probe::Point {
        z: blk.n.basis().mul_vec(&zn),
    })
}

fn vnorm<R: Real>(v: &[Complex<R>]) -> R {
    v.iter().map(|z| z.norm_sqr()).sum::<R>().sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct BallBoundReport<R: Real = f64> {
    /// `‖Z‖`, the least `λ` with `C(B_M) ⊆ λ·D(B_{M⊥})`.
    pub lambda_star: R,
    /// `‖C‖/γ(D)`.
    pub thm34_bound_right: R,
    /// `‖Y*‖` with `Y = BD⁺`.
    pub lambda_star_left: R,
    /// `‖B*‖/γ(D*)`.
    pub thm34_bound_left: R,
    pub holds: bool,
}

pub fn ball_bound<R: Real>(blk: &BlockOp<R>, tol: &TolPolicy<R>) -> Result<BallBoundReport<R>> {
    check_complementable(blk, tol)?.require()?;
    let z = douglas_solve(&blk.d, &blk.c, tol)?;
    let ystar = douglas_solve(&blk.d.adjoint(), &blk.b.adjoint(), tol)?;
    let lambda_star = z.norm();
    let lambda_star_left = ystar.norm();
    let thm34_bound_right = ratio(blk.c.norm(), gamma(&blk.d, tol));
    let thm34_bound_left = ratio(blk.b.norm(), gamma(&blk.d.adjoint(), tol));
    let slack = R::one() + R::lit(1e-10).max(R::epsilon() * R::lit(100.0));
    Ok(BallBoundReport {
        holds: lambda_star <= thm34_bound_right * slack && lambda_star_left <= thm34_bound_left * slack,
        lambda_star,
        thm34_bound_right,
        lambda_star_left,
        thm34_bound_left,
    })
}

fn ratio<R: Real>(num: R, den: R) -> R {
    if num == R::zero() {
        R::zero()
    } else {
        num / den
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ComplementingSubspace<R: Real = f64> {
    /// `M = (T⁻¹(N⊥))⊥`.
    pub m: Subspace<R>,
    /// `‖(A − BD⁺C embedded) − P_N·T·P_M‖ / (1 + ‖T‖)`.
    pub schur_check: R,
    /// `(T, M, N)` is complementable exactly when `P_{N⊥}·R(T) ⊆ R(T)`.
    pub verdict: Verdict,
}

/// Builds `M` from `N` so that `T(M⊥) ⊆ N⊥`, making `B = 0`.
pub fn complementing_subspace<R: Real>(
    t: &Matrix<R>,
    n: &Subspace<R>,
    tol: &TolPolicy<R>,
) -> Result<ComplementingSubspace<R>> {
    let m = preimage(t, &n.complement(), tol)?.complement();
    let blk = decompose(t, &m, n)?;
    let verdict = check_complementable(&blk, tol)?.verdict;
    let s = schur_unsafe(&blk, Route::Pinv, tol)?;
    let direct = &(&n.projector() * t) * &m.projector();
    let schur_check = (&s.ambient - &direct).norm() / (R::one() + t.norm());
    Ok(ComplementingSubspace { m, schur_check, verdict })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct StructureReport<R: Real = f64> {
    /// `R(T/) = R(T) ∩ N`.
    pub range_identity: Check<R>,
    /// `N(T/) = M⊥ + N(T)`.
    pub null_identity: Check<R>,
    /// `‖T − P·diag(T/, D)·Q‖ / ‖T‖` with `P = [[I,Y],[0,I]]`, `Q = [[I,0],[Z,I]]`.
    pub factorization_residual: R,
    pub factorization_holds: bool,
    /// `(T/)/ = T/`.
    pub idempotent: Check<R>,
    /// `(T*)/(N,M) = (T/(M,N))*`.
    pub adjoint_duality: Check<R>,
}

impl<R: Real> StructureReport<R> {
    pub fn all_hold(&self) -> bool {
        self.range_identity.holds
            && self.null_identity.holds
            && self.factorization_holds
            && self.idempotent.holds
            && self.adjoint_duality.holds
    }
}

pub fn verify_structure<R: Real>(
    t: &Matrix<R>,
    m: &Subspace<R>,
    n: &Subspace<R>,
    tol: &TolPolicy<R>,
) -> Result<StructureReport<R>> {
    let blk = decompose(t, m, n)?;
    let s = schur(&blk, Route::Pinv, tol)?;
    let s_amb = &s.ambient;
    let scale = R::one() + s.compressed.norm();

    let range_identity = range_of(s_amb, tol).same_as(&range_of(t, tol).intersect(n, tol)?, tol)?;
    let null_identity = null_of(s_amb, tol).same_as(&blk.mperp.sum(&null_of(t, tol), tol)?, tol)?;

    let (y, z) = (s.y.as_ref().expect("pinv route carries Y"), s.z.as_ref().expect("pinv route carries Z"));
    let yd = y * &blk.d;
    let dz = &blk.d * z;
    let top_left = &s.compressed + &(&yd * z);
    let factored = blk.embed(&top_left, &yd, &dz, &blk.d);
    let diff = (t - &factored).norm();
    let tn = t.norm();
    let factorization_residual = if tn > R::zero() { diff / tn } else { diff };
    let factor_limit = R::lit(1e-11).max(R::epsilon() * R::lit(1e3));

    let limit = R::lit(1e-10).max(R::epsilon() * R::lit(1e3));
    let again = schur(&decompose(s_amb, m, n)?, Route::Pinv, tol)?;
    let idempotent = Check::within((&again.ambient - s_amb).norm() / scale, limit);
    let dual = schur(&blk.adjoint(), Route::Pinv, tol)?;
    let adjoint_duality = Check::within((&dual.ambient - &s_amb.adjoint()).norm() / scale, limit);

    Ok(StructureReport {
        range_identity,
        null_identity,
        factorization_residual,
        factorization_holds: factorization_residual <= factor_limit,
        idempotent,
        adjoint_duality,
    })
}
