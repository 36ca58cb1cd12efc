//! The randomized property suite behind `shorted verify`.
//!
//! Each case draws an engineered operator from a per-case seed and checks
//! every property that must hold for complementable inputs. Cases are
//! independent, so callers may run them in parallel.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::blockdecomp::{decompose, BlockOp};
use crate::complement::{
    ball_bound, check_complementable, douglas_residual, schur, singleton_probe, verify_structure, Probe, Route,
};
use crate::corpus::{random_case, LabeledCase, RandomKind, RandomSpec};
use crate::epclass::{block_pinv, ep_equivalence_report, is_ep, is_hypo_ep};
use crate::error::{Error, Hypothesis};
use crate::matrix::Matrix;
use crate::numerics::{penrose_residual, pinv, TolPolicy};
use crate::subspace::null_of;

pub const PROBES_PER_CASE: usize = 20;
pub const KERNEL_TRIALS: usize = 50;

/// Limits used by the suite. Route agreement and structure identities are
/// relative to `1 + ‖A‖` and `1 + ‖T/‖` respectively.
pub mod limits {
    pub const ROUTE_AGREEMENT: f64 = 1e-9;
    pub const DOUGLAS_RESIDUAL: f64 = 1e-10;
    pub const SCHUR_ORACLE: f64 = 1e-9;
    pub const SUBSPACE_IDENTITY: f64 = 1e-8;
    pub const FACTORIZATION: f64 = 1e-11;
    pub const IDEMPOTENT: f64 = 1e-10;
    pub const ADJOINT_DUALITY: f64 = 1e-10;
    pub const PROBE: f64 = 1e-9;
    pub const Z_CHOICE: f64 = 1e-11;
    pub const DOUGLAS_MINIMALITY: f64 = 1e-12;
    pub const BLOCK_PINV: f64 = 1e-8;
    pub const PENROSE: f64 = 1e-9;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseOutcome {
    pub index: u64,
    pub seed: u64,
    pub spec: RandomSpec,
    pub checks: Vec<CheckLine>,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CaseOutcome {
    pub fn check(&self, name: &str) -> Option<&CheckLine> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Seed of case `index` in a run started from `base_seed`.
pub fn case_seed(base_seed: u64, index: u64) -> u64 {
    // splitmix64 step
    let mut z = base_seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws dimensions (each ≤ `max_dim`) and a structural kind from `seed`.
pub fn draw_spec(seed: u64, max_dim: usize) -> RandomSpec {
    let max_dim = max_dim.max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED_5EED);
    let roll: f64 = rng.random();
    let mut kind = match roll {
        x if x < 0.35 => RandomKind::Generic,
        x if x < 0.55 => RandomKind::BothHypotheses,
        x if x < 0.75 => RandomKind::Hermitian,
        x if x < 0.875 => RandomKind::ViolateRangeCStar,
        _ => RandomKind::ViolateRangeB,
    };
    let dom = rng.random_range(2..=max_dim);
    let cod = if kind == RandomKind::Hermitian || rng.random_bool(0.3) {
        dom
    } else {
        rng.random_range(2..=max_dim)
    };
    let pick_sub = |rng: &mut ChaCha8Rng, n: usize| match rng.random_range(0..10) {
        0 => 0,
        1 => n,
        _ => rng.random_range(1..n),
    };
    let dim_m = pick_sub(&mut rng, dom);
    let dim_n = if kind == RandomKind::Hermitian { dim_m } else { pick_sub(&mut rng, cod) };
    let max_rank = (cod - dim_n).min(dom - dim_m);
    let rank_d = if max_rank == 0 || rng.random_bool(0.4) {
        max_rank
    } else {
        rng.random_range(0..=max_rank)
    };
    let full = dim_m.min(dim_n);
    let mut schur_rank = if full == 0 || rng.random_bool(0.5) {
        full
    } else {
        rng.random_range(0..=full)
    };
    match kind {
        RandomKind::ViolateRangeCStar | RandomKind::ViolateRangeB => {
            let sub = if kind == RandomKind::ViolateRangeCStar { dim_m } else { dim_n };
            if rank_d == 0 || sub == 0 {
                kind = RandomKind::Generic;
            } else {
                schur_rank = schur_rank.min(sub - 1).min(full);
            }
        }
        _ => {}
    }
    RandomSpec {
        dom_dim: dom,
        cod_dim: cod,
        dim_m,
        dim_n,
        rank_d,
        schur_rank: Some(schur_rank),
        kind,
    }
}

struct Recorder {
    checks: Vec<CheckLine>,
}

impl Recorder {
    fn le(&mut self, name: &str, value: f64, limit: f64) {
        self.checks.push(CheckLine {
            name: name.to_string(),
            value,
            limit,
            passed: value <= limit,
        });
    }

    fn flag(&mut self, name: &str, ok: bool) {
        self.checks.push(CheckLine {
            name: name.to_string(),
            value: if ok { 0.0 } else { 1.0 },
            limit: 0.0,
            passed: ok,
        });
    }
}

/// Runs every property on case `index` of a run seeded with `base_seed`.
pub fn run_case(index: u64, base_seed: u64, max_dim: usize, tol: &TolPolicy) -> CaseOutcome {
    let seed = case_seed(base_seed, index);
    let spec = draw_spec(seed, max_dim);
    let mut rec = Recorder { checks: Vec::new() };
    let error = random_case::<f64>(&spec, seed)
        .and_then(|case| check_case(&case, &spec, seed, tol, &mut rec))
        .err()
        .map(|e| e.to_string());
    let passed = error.is_none() && rec.checks.iter().all(|c| c.passed);
    CaseOutcome {
        index,
        seed,
        spec,
        checks: rec.checks,
        passed,
        error,
    }
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex<f64>> {
    (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex::new(re, im)
        })
        .collect()
}

fn vnorm(v: &[Complex<f64>]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn check_case(
    case: &LabeledCase,
    spec: &RandomSpec,
    seed: u64,
    tol: &TolPolicy,
    rec: &mut Recorder,
) -> crate::Result<()> {
    let t = &case.t;
    let blk = decompose(t, &case.m, &case.n)?;
    let report = check_complementable(&blk, tol)?;
    rec.flag("complementable", report.is_complementable());
    rec.flag("weakly_coincides", report.weakly_coincides);

    let scale_a = 1.0 + blk.a.norm();
    let results: Vec<_> = Route::ALL
        .iter()
        .map(|&r| schur(&blk, r, tol))
        .collect::<crate::Result<_>>()?;
    let mut agreement: f64 = 0.0;
    for i in 0..results.len() {
        for j in i + 1..results.len() {
            agreement = agreement.max((&results[i].compressed - &results[j].compressed).norm() / scale_a);
        }
    }
    rec.le("route_agreement", agreement, limits::ROUTE_AGREEMENT);

    let pinv_route = &results[2];
    let z = pinv_route.z.as_ref().expect("pinv route carries Z");
    let y = pinv_route.y.as_ref().expect("pinv route carries Y");
    let right = douglas_residual(&blk.d, &blk.c, z) / (1.0 + blk.c.norm());
    let left = douglas_residual(&blk.d.adjoint(), &blk.b.adjoint(), &y.adjoint()) / (1.0 + blk.b.norm());
    rec.le("douglas_residual", right.max(left), limits::DOUGLAS_RESIDUAL);

    let s_amb = &pinv_route.ambient;
    let oracle = case.expected.schur_action.as_ref().expect("random cases carry their Schur complement");
    rec.le("schur_oracle", (s_amb - oracle).norm() / scale_a, limits::SCHUR_ORACLE);

    let st = verify_structure(t, &case.m, &case.n, tol)?;
    rec.le("range_identity", st.range_identity.defect, limits::SUBSPACE_IDENTITY);
    rec.le("null_identity", st.null_identity.defect, limits::SUBSPACE_IDENTITY);
    rec.le("factorization", st.factorization_residual, limits::FACTORIZATION);
    rec.le("idempotent", st.idempotent.defect, limits::IDEMPOTENT);
    rec.le("adjoint_duality", st.adjoint_duality.defect, limits::ADJOINT_DUALITY);

    let bb = ball_bound(&blk, tol)?;
    rec.flag("ball_bound", bb.holds);

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xA5A5_A5A5);
    let probe_err = probe_errors(&blk, s_amb, seed, &mut rng, tol)?;
    rec.le("singleton_probe", probe_err, limits::PROBE);

    let (z_choice, minimality) = kernel_checks(&blk, z, &mut rng, tol);
    rec.le("z_choice", z_choice, limits::Z_CHOICE);
    rec.le("douglas_minimality", minimality, limits::DOUGLAS_MINIMALITY);

    block_pinv_checks(&blk, t, spec, tol, rec);

    if t.is_square() {
        let ep = is_ep(t, tol)?;
        let hypo = is_hypo_ep(t, tol)?;
        rec.flag("ep_equals_hypo_ep", ep.holds == hypo.holds);
        let r = ep_equivalence_report(t, &case.m, &case.n, tol)?;
        rec.flag("ep_unconditional", r.unconditional_implication);
        rec.flag("ep_equivalences", r.equivalences_consistent);
        if spec.kind == RandomKind::Hermitian {
            rec.flag("hermitian_is_ep", r.t_is_ep.holds && is_ep(s_amb, tol)?.holds);
        }
    }
    Ok(())
}

/// Largest `‖z − S·x‖ / (1 + ‖T‖)` over random unit `x ∈ M`; `+∞` if any probe is not a point.
fn probe_errors(
    blk: &BlockOp,
    s_amb: &Matrix,
    seed: u64,
    rng: &mut ChaCha8Rng,
    tol: &TolPolicy,
) -> crate::Result<f64> {
    if blk.m.dim() == 0 {
        return Ok(0.0);
    }
    let scale = 1.0 + blk.reassemble().norm();
    let mut worst: f64 = 0.0;
    for k in 0..PROBES_PER_CASE {
        let g = random_vec(rng, blk.m.dim());
        let mut x = blk.m.basis().mul_vec(&g);
        let nx = vnorm(&x);
        x.iter_mut().for_each(|v| *v /= nx);
        match singleton_probe(blk, &x, 5, seed.wrapping_add(k as u64), tol)? {
            Probe::Point { z } => {
                let sx = s_amb.mul_vec(&x);
                let d: Vec<_> = z.iter().zip(&sx).map(|(a, b)| a - b).collect();
                worst = worst.max(vnorm(&d) / scale);
            }
            _ => return Ok(f64::INFINITY),
        }
    }
    Ok(worst)
}

/// `(max ‖B·W‖ / (1 + ‖B‖), max(‖Z‖ − ‖Z + W‖))` over random `W` with columns in `N(D)`.
fn kernel_checks(blk: &BlockOp, z: &Matrix, rng: &mut ChaCha8Rng, tol: &TolPolicy) -> (f64, f64) {
    let kernel = null_of(&blk.d, tol);
    if kernel.dim() == 0 || z.cols() == 0 {
        return (0.0, f64::NEG_INFINITY);
    }
    let zn = z.norm();
    let bn = 1.0 + blk.b.norm();
    let (mut choice, mut minimality) = (0.0f64, f64::NEG_INFINITY);
    for _ in 0..KERNEL_TRIALS {
        let g = Matrix::from_fn(kernel.dim(), z.cols(), |_, _| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex::new(re, im)
        });
        let w = kernel.basis() * &g;
        let w = w.scale(1.0 / w.norm().max(f64::MIN_POSITIVE));
        choice = choice.max((&blk.b * &w).norm() / bn);
        minimality = minimality.max(zn - (z + &w).norm());
    }
    (choice, minimality)
}

fn block_pinv_checks(blk: &BlockOp, t: &Matrix, spec: &RandomSpec, tol: &TolPolicy, rec: &mut Recorder) {
    let expected_failure = match spec.kind {
        RandomKind::ViolateRangeCStar => Some(Hypothesis::RangeCStarInSchurStar),
        RandomKind::ViolateRangeB => Some(Hypothesis::RangeBInSchur),
        _ => None,
    };
    match (block_pinv(blk, tol), expected_failure) {
        (Ok(x), None) => {
            let full = pinv(t, tol);
            let rel = (&x - &full).norm() / full.norm().max(1.0);
            rec.le("block_pinv", rel, limits::BLOCK_PINV);
            rec.le("penrose", penrose_residual(t, &x), limits::PENROSE);
        }
        (Err(Error::HypothesisFailed { which, .. }), Some(want)) => rec.flag("hypothesis_failed", which == want),
        (Err(Error::HypothesisFailed { .. }), None) => {
            let both = spec.kind == RandomKind::BothHypotheses;
            rec.flag("block_pinv_hypotheses", !both);
        }
        (_, Some(_)) => rec.flag("hypothesis_failed", false),
        (Err(_), None) => rec.flag("block_pinv", false),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub name: String,
    pub evaluated: usize,
    pub failed: usize,
    pub worst: f64,
    pub limit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckSummary>,
    pub failures: Vec<CaseOutcome>,
}

impl SuiteSummary {
    /// Aggregates outcomes, which must already be ordered by index.
    pub fn from_outcomes(outcomes: &[CaseOutcome]) -> Self {
        let mut checks: Vec<CheckSummary> = Vec::new();
        for o in outcomes {
            for c in &o.checks {
                let entry = match checks.iter_mut().position(|s| s.name == c.name) {
                    Some(i) => &mut checks[i],
                    None => {
                        checks.push(CheckSummary {
                            name: c.name.clone(),
                            evaluated: 0,
                            failed: 0,
                            worst: f64::NEG_INFINITY,
                            limit: c.limit,
                        });
                        checks.last_mut().expect("just pushed")
                    }
                };
                entry.evaluated += 1;
                entry.failed += usize::from(!c.passed);
                entry.worst = entry.worst.max(c.value);
            }
        }
        // ±∞ has no JSON representation
        for c in &mut checks {
            if !c.worst.is_finite() {
                c.worst = if c.worst > 0.0 { f64::MAX } else { 0.0 };
            }
        }
        let passed = outcomes.iter().filter(|o| o.passed).count();
        Self {
            cases: outcomes.len(),
            passed,
            failed: outcomes.len() - passed,
            checks,
            failures: outcomes.iter().filter(|o| !o.passed).cloned().collect(),
        }
    }
}

/// Sequential driver; the CLI runs [`run_case`] in parallel instead.
pub fn run_suite(cases: u64, base_seed: u64, max_dim: usize, tol: &TolPolicy) -> SuiteSummary {
    let outcomes: Vec<_> = (0..cases).map(|i| run_case(i, base_seed, max_dim, tol)).collect();
    SuiteSummary::from_outcomes(&outcomes)
}
