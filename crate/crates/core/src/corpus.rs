//! Labeled test operators: truncations of the classical ℓ₂ examples, each
//! with its expected verdict and closed-form Schur action, and a seeded
//! generator of engineered complementable operators.
//!
//! Truncation keeps the coordinate formulas for indices `≤ dim` and drops
//! out-of-range terms. Expected actions are compared on `x ∈ M` over the
//! rows before the last `interior_margin` ones.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::blockdecomp::decompose;
use crate::complement::{check_complementable, Verdict};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::numerics::TolPolicy;
use crate::scalar::{cx, czero, Real};
use crate::subspace::Subspace;

pub const DEFAULT_MARGIN: usize = 4;
pub const MIN_DIM: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExampleName {
    EqgmBanded,
    NonclosedPairs,
    Ex5Shift,
    Ex6Band,
    Ex1Diag,
    Ex3Rank,
    Ex4Rank,
    Ex4RankLiteral,
    HypoepSum,
}

impl ExampleName {
    pub const ALL: [ExampleName; 9] = [
        ExampleName::EqgmBanded,
        ExampleName::NonclosedPairs,
        ExampleName::Ex5Shift,
        ExampleName::Ex6Band,
        ExampleName::Ex1Diag,
        ExampleName::Ex3Rank,
        ExampleName::Ex4Rank,
        ExampleName::Ex4RankLiteral,
        ExampleName::HypoepSum,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExampleName::EqgmBanded => "eqgm_banded",
            ExampleName::NonclosedPairs => "nonclosed_pairs",
            ExampleName::Ex5Shift => "ex5_shift",
            ExampleName::Ex6Band => "ex6_band",
            ExampleName::Ex1Diag => "ex1_diag",
            ExampleName::Ex3Rank => "ex3_rank",
            ExampleName::Ex4Rank => "ex4_rank",
            ExampleName::Ex4RankLiteral => "ex4_rank_literal",
            ExampleName::HypoepSum => "hypoep_sum",
        }
    }

    fn needs_even(self) -> bool {
        matches!(
            self,
            ExampleName::EqgmBanded | ExampleName::NonclosedPairs | ExampleName::Ex1Diag | ExampleName::HypoepSum
        )
    }
}

impl fmt::Display for ExampleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExampleName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::UnknownExample(s.to_string()))
    }
}

/// Expected hypo-EP facts of the truncated operator, field for field as in
/// [`EpReport`](crate::epclass::EpReport).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpFacts {
    pub t_is_hypo_ep: bool,
    pub schur_is_hypo_ep: bool,
    pub d_is_hypo_ep: bool,
    pub rb_in_rschur: bool,
    pub rcstar_in_rschurstar: bool,
    pub aug_lower_is_hypo_ep: bool,
    pub aug_upper_is_hypo_ep: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Expected<R: Real = f64> {
    /// Verdict of the truncated matrix.
    pub verdict: Verdict,
    /// Verdict of the ℓ₂ operator when the truncation cannot reproduce it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit_verdict: Option<Verdict>,
    /// Closed-form Schur complement in ambient coordinates (only its action on `M` is compared).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schur_action: Option<Matrix<R>>,
    /// For ill-posed cases: `A − BZ` for the second solution `Z = D⁺C + k·e₁*`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alternate_action: Option<Matrix<R>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ep_facts: Option<EpFacts>,
    pub interior_margin: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct LabeledCase<R: Real = f64> {
    pub name: String,
    pub dim: usize,
    pub t: Matrix<R>,
    pub m: Subspace<R>,
    pub n: Subspace<R>,
    pub expected: Expected<R>,
}

impl<R: Real> LabeledCase<R> {
    /// Largest entry of `(S − E)·U_M` over the interior rows, where `E` is the
    /// expected action. `None` when the case carries no closed form.
    pub fn action_error(&self, schur_ambient: &Matrix<R>) -> Option<R> {
        self.expected.schur_action.as_ref().map(|e| self.interior_error(schur_ambient, e))
    }

    pub fn alternate_error(&self, ambient: &Matrix<R>) -> Option<R> {
        self.expected.alternate_action.as_ref().map(|e| self.interior_error(ambient, e))
    }

    fn interior_error(&self, got: &Matrix<R>, want: &Matrix<R>) -> R {
        let diff = &(got - want) * self.m.basis();
        let rows = diff.rows().saturating_sub(self.expected.interior_margin);
        diff.block(0, 0, rows, diff.cols()).max_abs()
    }
}

fn real_matrix<R: Real>(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Matrix<R> {
    Matrix::from_fn(rows, cols, |i, j| cx(R::lit(f(i, j)), R::zero()))
}

/// `{(i, j, value)}` with out-of-range indices dropped.
fn sparse<R: Real>(rows: usize, cols: usize, entries: &[(usize, usize, f64)]) -> Matrix<R> {
    let mut m = Matrix::zeros(rows, cols);
    for &(i, j, v) in entries {
        if i < rows && j < cols {
            m[(i, j)] += cx(R::lit(v), R::zero());
        }
    }
    m
}

fn coords<R: Real>(ambient: usize, range: impl Iterator<Item = usize>) -> Subspace<R> {
    let idx: Vec<usize> = range.collect();
    Subspace::coordinate(ambient, &idx).expect("coordinate indices in range")
}

/// Builds one of the named examples truncated to `dim` coordinates.
///
/// `ex5_shift` is the one rectangular-block example: with `h = dim/2` it
/// lives on `ℝʰ ⊕ ℝʰ⁺¹ → ℝʰ⁺¹ ⊕ ℝʰ`, so the matrix is `(2h+1)×(2h+1)`.
pub fn make_example<R: Real>(name: ExampleName, dim: usize) -> Result<LabeledCase<R>> {
    if dim < MIN_DIM {
        return Err(Error::invalid(format!("dim {dim} is too small for {name} (minimum {MIN_DIM})")));
    }
    if name.needs_even() && dim % 2 == 1 {
        return Err(Error::invalid(format!("{name} pairs coordinates and needs an even dim, got {dim}")));
    }
    let n = dim;
    let mut expected = Expected {
        verdict: Verdict::Complementable,
        limit_verdict: None,
        schur_action: None,
        alternate_action: None,
        ep_facts: None,
        interior_margin: DEFAULT_MARGIN,
    };
    let (t, m, nn, size) = match name {
        ExampleName::EqgmBanded => {
            // odd row r: x_{r+2} + x_{r+1} − x_r; even row r: x_{r−1}/(r−1) + x_r (1-based)
            let mut e = Vec::new();
            let mut s = Vec::new();
            for r in 1..=n {
                let i = r - 1;
                if r % 2 == 1 {
                    e.extend([(i, i + 2, 1.0), (i, i + 1, 1.0), (i, i, -1.0)]);
                    s.extend([(i, i, -(1.0 + 1.0 / r as f64)), (i, i + 2, 1.0)]);
                } else {
                    e.extend([(i, i - 1, 1.0 / (r - 1) as f64), (i, i, 1.0)]);
                }
            }
            expected.schur_action = Some(sparse(n, n, &s));
            let odd = coords(n, (0..n).step_by(2));
            (sparse(n, n, &e), odd.clone(), odd, n)
        }
        ExampleName::NonclosedPairs => {
            // rows 2k−1 and 2k both read x_{2k−1} + x_{2k}/(2k)
            let mut e = Vec::new();
            for k in 1..=n / 2 {
                let (i, j) = (2 * k - 2, 2 * k - 1);
                for row in [i, j] {
                    e.extend([(row, i, 1.0), (row, j, 1.0 / (2 * k) as f64)]);
                }
            }
            expected.limit_verdict = Some(Verdict::NotComplementable);
            expected.schur_action = Some(Matrix::zeros(n, n));
            let odd = coords(n, (0..n).step_by(2));
            (sparse(n, n, &e), odd.clone(), odd, n)
        }
        ExampleName::Ex5Shift => {
            let h = n / 2;
            let size = 2 * h + 1;
            // domain: x = 0..h (M), y = h..2h+1; codomain: 0..h+1 (N), h+1..2h+1
            let (y0, c0) = (h, h + 1);
            let mut e = Vec::new();
            for k in 1..=h {
                e.push((k, k - 1, 1.0 / k as f64)); // A x = (0, x1, x2/2, …)
                e.push((c0 + k - 1, k - 1, 1.0 / k as f64)); // C x = (x1, x2/2, …)
                e.push((c0 + k - 1, y0 + k, 1.0)); // D y = (y2, y3, …)
            }
            for k in 0..=h {
                e.push((k, y0 + k, 1.0)); // B = I
            }
            expected.verdict = Verdict::IllPosedSchur;
            expected.schur_action = Some(Matrix::zeros(size, size));
            expected.alternate_action = Some(sparse(size, size, &[(0, 0, -1.0)]));
            (sparse(size, size, &e), coords(size, 0..h), coords(size, 0..h + 1), size)
        }
        ExampleName::Ex6Band => {
            let t = real_matrix(n, n, |i, j| if i.abs_diff(j) <= 1 { 1.0 } else { 0.0 });
            let mut s = vec![(1, 2, 1.0)];
            for i in 2..n {
                s.extend([(i, i - 1, 1.0), (i, i, 1.0), (i, i + 1, 1.0)]);
            }
            expected.schur_action = Some(sparse(n, n, &s));
            let perp = coords(n, 1..n);
            (t, perp.clone(), perp, n)
        }
        ExampleName::Ex1Diag => {
            let t = real_matrix(n, n, |i, j| match (i == j, i % 2) {
                (true, 0) => 1.0 / (i + 1) as f64,
                (true, _) => 1.0,
                _ => 0.0,
            });
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let basis = real_matrix(n, n / 2, |i, j| if i / 2 == j { h } else { 0.0 });
            let m = Subspace::from_orthonormal(basis)?;
            // pair k: (1/(2k))·[[1,1],[1,1]], i.e. x ↦ x/k on M
            let mut s = Vec::new();
            for k in 1..=n / 2 {
                let v = 1.0 / (2 * k) as f64;
                let (i, j) = (2 * k - 2, 2 * k - 1);
                s.extend([(i, i, v), (i, j, v), (j, i, v), (j, j, v)]);
            }
            expected.schur_action = Some(sparse(n, n, &s));
            (t, m.clone(), m, n)
        }
        ExampleName::Ex3Rank => {
            let mut e = vec![(0, 0, 1.0), (0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)];
            for r in [2, 3] {
                e.extend([(r, 1, 1.0), (r, 2, 1.0), (r, 3, 1.0)]);
            }
            e.extend((4..n).map(|i| (i, i, 1.0)));
            expected.schur_action = Some(sparse(n, n, &[(0, 0, 1.0)]));
            expected.ep_facts = Some(EpFacts {
                t_is_hypo_ep: false,
                schur_is_hypo_ep: true,
                d_is_hypo_ep: true,
                rb_in_rschur: true,
                rcstar_in_rschurstar: false,
                aug_lower_is_hypo_ep: false,
                aug_upper_is_hypo_ep: true,
            });
            let m = coords(n, 0..2);
            (sparse(n, n, &e), m.clone(), m, n)
        }
        ExampleName::Ex4Rank | ExampleName::Ex4RankLiteral => {
            let mut e = vec![
                (0, 0, 1.0),
                (0, 1, 1.0),
                (0, 2, 1.0),
                (0, 3, 1.0),
                (1, 0, 1.0),
                (1, 2, 1.0),
                (1, 3, 1.0),
            ];
            for r in [2, 3] {
                e.extend([(r, 0, 1.0), (r, 1, 1.0)]);
            }
            if name == ExampleName::Ex4Rank {
                // D rows 3, 4: x3 + x4
                e.extend([(2, 2, 1.0), (2, 3, 1.0), (3, 2, 1.0), (3, 3, 1.0)]);
                expected.ep_facts = Some(EpFacts {
                    t_is_hypo_ep: true,
                    schur_is_hypo_ep: true,
                    d_is_hypo_ep: true,
                    rb_in_rschur: false,
                    rcstar_in_rschurstar: false,
                    aug_lower_is_hypo_ep: false,
                    aug_upper_is_hypo_ep: false,
                });
            } else {
                // D rows 3, 4 read literally: x4 + x4, x3 + x4
                e.extend([(2, 3, 2.0), (3, 2, 1.0), (3, 3, 1.0)]);
            }
            e.extend((4..n).map(|i| (i, i, 1.0)));
            expected.schur_action = Some(sparse(n, n, &[(1, 1, -1.0)]));
            let m = coords(n, 0..2);
            (sparse(n, n, &e), m.clone(), m, n)
        }
        ExampleName::HypoepSum => {
            let h = n / 2;
            let mut e = vec![(0, 0, 1.0)];
            let mut s = vec![(0, 0, 1.0)];
            for i in 1..h {
                e.extend([
                    (i, i - 1, 1.0),                  // A: x_{i}
                    (i, i, i as f64 / (i + 1) as f64), // A: (i/(i+1))·x_{i+1}
                    (i, h + i - 1, 1.0),              // B: y_i
                    (h + i, i - 1, 1.0),              // C: x_i
                    (h + i, h + i - 1, 1.0),          // D: y_i
                ]);
                s.push((i, i, i as f64 / (i + 1) as f64));
            }
            expected.schur_action = Some(sparse(n, n, &s));
            expected.ep_facts = Some(EpFacts {
                t_is_hypo_ep: false,
                schur_is_hypo_ep: true,
                d_is_hypo_ep: false,
                rb_in_rschur: true,
                rcstar_in_rschurstar: true,
                aug_lower_is_hypo_ep: false,
                aug_upper_is_hypo_ep: false,
            });
            let m = coords(n, 0..h);
            (sparse(n, n, &e), m.clone(), m, n)
        }
    };
    Ok(LabeledCase {
        name: name.to_string(),
        dim: size,
        t,
        m,
        n: nn,
        expected,
    })
}

/// Which range hypotheses of the block pseudoinverse formula the generated case satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RandomKind {
    /// Generic `B = Y₀D`, `C = DZ₀`.
    #[default]
    Generic,
    /// `Y₀ = S·W₁`, `Z₀ = W₂·S`: `R(B) ⊆ R(S)` and `R(C*) ⊆ R(S*)`.
    BothHypotheses,
    /// `R(B) ⊆ R(S)` holds, `R(C*) ⊆ R(S*)` fails.
    ViolateRangeCStar,
    /// `R(C*) ⊆ R(S*)` holds, `R(B) ⊆ R(S)` fails.
    ViolateRangeB,
    /// Hermitian `T` (hence EP) with `M = N`.
    Hermitian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomSpec {
    pub dom_dim: usize,
    pub cod_dim: usize,
    pub dim_m: usize,
    pub dim_n: usize,
    pub rank_d: usize,
    /// Rank of the Schur complement; full (`min(dim_n, dim_m)`) when absent.
    pub schur_rank: Option<usize>,
    pub kind: RandomKind,
}

impl RandomSpec {
    pub fn new(dom_dim: usize, cod_dim: usize, dim_m: usize, dim_n: usize, rank_d: usize) -> Self {
        Self {
            dom_dim,
            cod_dim,
            dim_m,
            dim_n,
            rank_d,
            schur_rank: None,
            kind: RandomKind::Generic,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::invalid(msg));
        if self.dim_m > self.dom_dim || self.dim_n > self.cod_dim {
            return bad(format!(
                "subspace dims ({}, {}) exceed ambient dims ({}, {})",
                self.dim_m, self.dim_n, self.dom_dim, self.cod_dim
            ));
        }
        let max_rank = (self.cod_dim - self.dim_n).min(self.dom_dim - self.dim_m);
        if self.rank_d > max_rank {
            return bad(format!("rank_d = {} exceeds min(dim N⊥, dim M⊥) = {max_rank}", self.rank_d));
        }
        let full = self.dim_n.min(self.dim_m);
        let s = self.schur_rank.unwrap_or(full);
        if s > full {
            return bad(format!("schur_rank = {s} exceeds min(dim N, dim M) = {full}"));
        }
        match self.kind {
            RandomKind::Hermitian if self.dom_dim != self.cod_dim || self.dim_m != self.dim_n => {
                bad("the hermitian kind needs dom_dim = cod_dim and dim_m = dim_n".into())
            }
            RandomKind::ViolateRangeCStar if self.rank_d == 0 || s >= self.dim_m => {
                bad("violating R(C*) ⊆ R(S*) needs rank_d ≥ 1 and schur_rank < dim_m".into())
            }
            RandomKind::ViolateRangeB if self.rank_d == 0 || s >= self.dim_n => {
                bad("violating R(B) ⊆ R(S) needs rank_d ≥ 1 and schur_rank < dim_n".into())
            }
            _ => Ok(()),
        }
    }
}

fn gaussian<R: Real>(rng: &mut ChaCha8Rng, rows: usize, cols: usize, scale: f64) -> Matrix<R> {
    let s = scale * std::f64::consts::FRAC_1_SQRT_2;
    Matrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        cx(R::lit(re * s), R::lit(im * s))
    })
}

/// Haar-like random unitary: modified Gram–Schmidt on a complex Gaussian matrix.
pub fn random_unitary<R: Real>(n: usize, rng: &mut ChaCha8Rng) -> Matrix<R> {
    let g = gaussian::<R>(rng, n, n, 1.0);
    let mut cols: Vec<Vec<Complex<R>>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.column(j);
        for _ in 0..2 {
            for q in &cols {
                let h = q.iter().zip(&v).fold(czero(), |acc, (a, b)| acc + a.conj() * b);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= *qi * h;
                }
            }
        }
        let nrm = v.iter().map(|z| z.norm_sqr()).sum::<R>().sqrt();
        cols.push(v.into_iter().map(|z| z / nrm).collect());
    }
    Matrix::from_columns(n, &cols)
}

fn spectrum(rng: &mut ChaCha8Rng, k: usize, signed: bool) -> Vec<f64> {
    (0..k)
        .map(|_| {
            let v = rng.random_range(0.5..=2.0);
            if signed && rng.random_bool(0.5) {
                -v
            } else {
                v
            }
        })
        .collect()
}

/// `U·diag(σ)·V*` with random orthonormal `U` (`rows × k`), `V` (`cols × k`).
fn controlled<R: Real>(rng: &mut ChaCha8Rng, rows: usize, cols: usize, k: usize) -> Matrix<R> {
    let u = random_unitary::<R>(rows, rng).column_range(0, k);
    let v = random_unitary::<R>(cols, rng).column_range(0, k);
    let sig: Vec<R> = spectrum(rng, k, false).into_iter().map(R::lit).collect();
    &(&u * &Matrix::diag_real(&sig)) * &v.adjoint()
}

/// `U·diag(λ)·U*` with real, randomly signed `λ`.
fn controlled_hermitian<R: Real>(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Matrix<R> {
    let u = random_unitary::<R>(n, rng).column_range(0, k);
    let lam: Vec<R> = spectrum(rng, k, true).into_iter().map(R::lit).collect();
    &(&u * &Matrix::diag_real(&lam)) * &u.adjoint()
}

/// Engineered complementable operator with generic structure.
pub fn random_complementable<R: Real>(
    dom_dim: usize,
    cod_dim: usize,
    dim_m: usize,
    dim_n: usize,
    rank_d: usize,
    seed: u64,
) -> Result<LabeledCase<R>> {
    random_case(&RandomSpec::new(dom_dim, cod_dim, dim_m, dim_n, rank_d), seed)
}

/// Engineered complementable operator.
///
/// In block coordinates `D` has rank `rank_d` with singular values in
/// `[0.5, 2]`, `S` has a controlled spectrum, and
/// `B = Y₀D`, `C = DZ₀`, `A = S + Y₀DZ₀`, so the Schur complement is
/// exactly `S`. The blocks are then conjugated by random unitaries whose
/// leading columns span `M` and `N`. The expected action is `V_N·S·U_M*`.
pub fn random_case<R: Real>(spec: &RandomSpec, seed: u64) -> Result<LabeledCase<R>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (p, q) = (spec.dim_n, spec.dim_m);
    let (n2, m2) = (spec.cod_dim - spec.dim_n, spec.dom_dim - spec.dim_m);
    let r = spec.rank_d;
    let s_rank = spec.schur_rank.unwrap_or(p.min(q));
    let scale = |k: usize| 1.0 / (k.max(1) as f64).sqrt();

    let (frame_dom, frame_cod, a, b, c, d, s) = if spec.kind == RandomKind::Hermitian {
        let u = random_unitary::<R>(spec.dom_dim, &mut rng);
        let s = controlled_hermitian::<R>(&mut rng, p, s_rank);
        let d = controlled_hermitian::<R>(&mut rng, n2, r);
        let y0 = gaussian::<R>(&mut rng, p, n2, scale(n2));
        let b = &y0 * &d;
        let c = b.adjoint();
        let a = &s + &(&b * &y0.adjoint());
        (u.clone(), u, a, b, c, d, s)
    } else {
        let u = random_unitary::<R>(spec.dom_dim, &mut rng);
        let v = random_unitary::<R>(spec.cod_dim, &mut rng);
        let s = controlled::<R>(&mut rng, p, q, s_rank);
        let d = controlled::<R>(&mut rng, n2, m2, r);
        let y0 = match spec.kind {
            RandomKind::BothHypotheses | RandomKind::ViolateRangeCStar => &s * &gaussian(&mut rng, q, n2, scale(q)),
            _ => gaussian(&mut rng, p, n2, scale(n2)),
        };
        let z0 = match spec.kind {
            RandomKind::BothHypotheses | RandomKind::ViolateRangeB => &gaussian(&mut rng, m2, p, scale(p)) * &s,
            _ => gaussian(&mut rng, m2, q, scale(q)),
        };
        let b = &y0 * &d;
        let c = &d * &z0;
        let a = &s + &(&b * &z0);
        (u, v, a, b, c, d, s)
    };

    let t = &(&frame_cod * &Matrix::from_blocks(&a, &b, &c, &d)) * &frame_dom.adjoint();
    let m = Subspace::from_orthonormal(frame_dom.column_range(0, q))?;
    let n = Subspace::from_orthonormal(frame_cod.column_range(0, p))?;
    let oracle = &(n.basis() * &s) * &m.basis().adjoint();

    let report = check_complementable(&decompose(&t, &m, &n)?, &TolPolicy::default())?;
    if !report.is_complementable() {
        return Err(Error::invalid(format!(
            "generated case (seed {seed}) failed its complementability check: {:?}",
            report.verdict
        )));
    }
    Ok(LabeledCase {
        name: format!("random_{seed}"),
        dim: spec.dom_dim,
        t,
        m,
        n,
        expected: Expected {
            verdict: Verdict::Complementable,
            limit_verdict: None,
            schur_action: Some(oracle),
            alternate_action: None,
            ep_facts: None,
            interior_margin: 0,
        },
    })
}
