//! Acceptance gate: one PASS/FAIL line per criterion. The exit status is
//! nonzero on any failure outside `EXPECTED_FAILURES`, and also when an
//! expected failure starts passing.

use std::process::Command;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use shorted::corpus::EpFacts;
use shorted::numerics::{penrose_residual, pinv};
use shorted::suite::{case_seed, draw_spec, run_case, CaseOutcome};
use shorted::{
    ball_bound, block_pinv, check_complementable, decompose, ep_equivalence_report, gamma, make_example, random_case,
    schur, singleton_probe, Complex, Error, ExampleName, Hypothesis, Mat, Probe, RandomKind, Route, Tol, Verdict,
};

const SUITE_SEED: u64 = 20_240;
const SUITE_CASES: u64 = 200;
const MAX_DIM: usize = 40;

/// Criteria that cannot hold on finite matrices. They still print FAIL.
/// 6: the non-closed-range example is NotComplementable only in the
/// infinite-dimensional limit; every truncation has an invertible D.
const EXPECTED_FAILURES: &[u32] = &[6];

#[derive(Default)]
struct Gate {
    passed: usize,
    expected: usize,
    unexpected: usize,
}

impl Gate {
    fn report(&mut self, id: u32, title: &str, result: Result<String, String>) {
        let known = EXPECTED_FAILURES.contains(&id);
        match result {
            Ok(detail) => {
                self.passed += 1;
                self.unexpected += usize::from(known);
                let note = if known { " (listed as an expected failure; update the list)" } else { "" };
                println!("PASS [{id}] {title}: {detail}{note}");
            }
            Err(detail) => {
                if known {
                    self.expected += 1;
                } else {
                    self.unexpected += 1;
                }
                let note = if known { " (expected: unattainable on finite truncations)" } else { "" };
                println!("FAIL [{id}] {title}: {detail}{note}");
            }
        }
    }
}

fn tol() -> Tol {
    Tol::default()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn worst(outcomes: &[CaseOutcome], name: &str, limit: f64) -> Result<f64, String> {
    let mut w: f64 = 0.0;
    let mut seen = 0;
    for o in outcomes {
        if let Some(e) = &o.error {
            return Err(format!("case {} errored: {e}", o.index));
        }
        if let Some(c) = o.check(name) {
            seen += 1;
            if c.value.is_nan() || c.value > limit {
                return Err(format!("case {} (seed {}): {name} = {:e} > {limit:e}", o.index, o.seed, c.value));
            }
            w = w.max(c.value);
        }
    }
    ensure(seen > 0, || format!("{name} never evaluated"))?;
    Ok(w)
}

fn flags(outcomes: &[CaseOutcome], name: &str) -> Result<usize, String> {
    let mut seen = 0;
    for o in outcomes {
        if let Some(c) = o.check(name) {
            seen += 1;
            ensure(c.passed, || format!("case {} (seed {}): {name} failed", o.index, o.seed))?;
        }
    }
    Ok(seen)
}

fn corpus_regressions() -> Result<String, String> {
    let start = Instant::now();
    let mut w: f64 = 0.0;
    for name in [
        ExampleName::EqgmBanded,
        ExampleName::Ex1Diag,
        ExampleName::Ex3Rank,
        ExampleName::Ex4Rank,
        ExampleName::HypoepSum,
    ] {
        for dim in [16, 64] {
            let case = make_example::<f64>(name, dim).map_err(|e| e.to_string())?;
            let blk = decompose(&case.t, &case.m, &case.n).map_err(|e| e.to_string())?;
            for route in Route::ALL {
                let s = schur(&blk, route, &tol()).map_err(|e| format!("{name} at {dim}: {e}"))?;
                let err = case.action_error(&s.ambient).ok_or("no closed form")?;
                ensure(err <= 1e-10, || format!("{name} at {dim}, {route}: {err:e}"))?;
                w = w.max(err);
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!("worst interior error {w:.1e} over 10 cases, {:.2} s", elapsed.as_secs_f64()))
}

fn route_agreement(outcomes: &[CaseOutcome]) -> Result<String, String> {
    let agree = worst(outcomes, "route_agreement", 1e-9)?;
    let douglas = worst(outcomes, "douglas_residual", 1e-10)?;
    Ok(format!("{} cases, routes {agree:.1e}, Douglas residual {douglas:.1e}", outcomes.len()))
}

fn structure(outcomes: &[CaseOutcome]) -> Result<String, String> {
    let r = worst(outcomes, "range_identity", 1e-8)?;
    let n = worst(outcomes, "null_identity", 1e-8)?;
    let f = worst(outcomes, "factorization", 1e-11)?;
    let i = worst(outcomes, "idempotent", 1e-10)?;
    let a = worst(outcomes, "adjoint_duality", 1e-10)?;
    Ok(format!("range {r:.1e}, kernel {n:.1e}, factorization {f:.1e}, idempotent {i:.1e}, duality {a:.1e}"))
}

/// Seeds whose drawn spec, forced to `kind`, yields a valid engineered case.
fn cases_of_kind(kind: RandomKind, count: usize, salt: u64) -> Vec<shorted::LabeledCase> {
    let mut out = Vec::new();
    let mut i = 0;
    while out.len() < count {
        let seed = case_seed(salt, i);
        i += 1;
        let mut spec = draw_spec(seed, MAX_DIM);
        spec.kind = kind;
        if matches!(kind, RandomKind::ViolateRangeCStar | RandomKind::ViolateRangeB) {
            let sub = if kind == RandomKind::ViolateRangeCStar { spec.dim_m } else { spec.dim_n };
            spec.schur_rank = Some(spec.schur_rank.unwrap_or(0).min(sub.saturating_sub(1)));
        }
        if let Ok(case) = random_case::<f64>(&spec, seed) {
            out.push(case);
        }
    }
    out
}

fn block_pseudoinverse() -> Result<String, String> {
    let good = cases_of_kind(RandomKind::BothHypotheses, 100, 41);
    let (mut rel_w, mut pen_w) = (0.0f64, 0.0f64);
    for case in &good {
        let blk = decompose(&case.t, &case.m, &case.n).map_err(|e| e.to_string())?;
        let x = block_pinv(&blk, &tol()).map_err(|e| format!("{}: {e}", case.name))?;
        let full = pinv(&case.t, &tol());
        let rel = (&x - &full).norm() / full.norm().max(1.0);
        let pen = penrose_residual(&case.t, &x);
        ensure(rel <= 1e-8, || format!("{}: relative error {rel:e}", case.name))?;
        ensure(pen <= 1e-9, || format!("{}: Penrose residual {pen:e}", case.name))?;
        rel_w = rel_w.max(rel);
        pen_w = pen_w.max(pen);
    }
    let mut raised = 0;
    for (kind, want) in [
        (RandomKind::ViolateRangeCStar, Hypothesis::RangeCStarInSchurStar),
        (RandomKind::ViolateRangeB, Hypothesis::RangeBInSchur),
    ] {
        for case in cases_of_kind(kind, 50, 43) {
            let blk = decompose(&case.t, &case.m, &case.n).map_err(|e| e.to_string())?;
            match block_pinv(&blk, &tol()) {
                Err(Error::HypothesisFailed { which, .. }) if which == want => raised += 1,
                other => return Err(format!("{}: expected {want} to fail, got {other:?}", case.name)),
            }
        }
    }
    Ok(format!("100 cases, rel {rel_w:.1e}, Penrose {pen_w:.1e}; HypothesisFailed on {raised}/100"))
}

fn ball_bounds(outcomes: &[CaseOutcome]) -> Result<String, String> {
    let n = flags(outcomes, "ball_bound")?;
    let mut corpus = 0;
    for name in ExampleName::ALL {
        let case = make_example::<f64>(name, 32).map_err(|e| e.to_string())?;
        let blk = decompose(&case.t, &case.m, &case.n).map_err(|e| e.to_string())?;
        if check_complementable(&blk, &tol()).map_err(|e| e.to_string())?.is_complementable() {
            let r = ball_bound(&blk, &tol()).map_err(|e| e.to_string())?;
            ensure(r.holds, || format!("{name}: {r:?}"))?;
            corpus += 1;
        }
    }
    let t = Mat::from_real(2, 2, &[1., 2., 3., 6.]);
    let e1 = shorted::Subspace::coordinate(2, &[0]).map_err(|e| e.to_string())?;
    let r = ball_bound(&decompose(&t, &e1, &e1).map_err(|e| e.to_string())?, &tol()).map_err(|e| e.to_string())?;
    ensure((r.lambda_star - 0.5).abs() < 1e-14 && (r.thm34_bound_right - 0.5).abs() < 1e-14, || {
        format!("2×2 equality case: {r:?}")
    })?;
    Ok(format!("{n} random + {corpus} corpus cases; 2×2 case λ* = {} = bound", r.lambda_star))
}

fn e(n: usize, i: usize) -> Vec<Complex<f64>> {
    let mut v = vec![Complex::new(0.0, 0.0); n];
    v[i] = Complex::new(1.0, 0.0);
    v
}

fn singleton(outcomes: &[CaseOutcome]) -> Result<String, String> {
    let w = worst(outcomes, "singleton_probe", 1e-9)?;
    let case = make_example::<f64>(ExampleName::Ex5Shift, 32).map_err(|e| e.to_string())?;
    let blk = decompose(&case.t, &case.m, &case.n).map_err(|e| e.to_string())?;
    let zero = vec![Complex::new(0.0, 0.0); case.t.cols()];
    let p = singleton_probe(&blk, &zero, 20, 1, &tol()).map_err(|e| e.to_string())?;
    ensure(matches!(p, Probe::NotSingleton { .. }), || format!("ex5_shift: {p:?}"))?;

    // in the infinite-dimensional operator R(D) is not closed; every finite truncation has D invertible
    let mut notes = Vec::new();
    for dim in [16, 32, 64] {
        let case = make_example::<f64>(ExampleName::NonclosedPairs, dim).map_err(|e| e.to_string())?;
        let blk = decompose(&case.t, &case.m, &case.n).map_err(|e| e.to_string())?;
        let p = singleton_probe(&blk, &e(dim, 0), 20, 1, &tol()).map_err(|e| e.to_string())?;
        let point_zero = matches!(&p, Probe::Point { z } if z.iter().all(|v| v.norm() < 1e-12));
        ensure(point_zero, || format!("nonclosed_pairs at {dim}: {p:?}"))?;
        let verdict = check_complementable(&blk, &tol()).map_err(|e| e.to_string())?.verdict;
        if verdict != Verdict::NotComplementable {
            notes.push(format!("{dim}: {verdict}, γ(D) = {:.2e}", gamma(&blk.d, &tol())));
        }
    }
    ensure(notes.is_empty(), || {
        format!(
            "probe {w:.1e} and ex5 NotSingleton ok, nonclosed_pairs gives Point(0) but the verdict is not \
             NotComplementable at any truncation ({})",
            notes.join("; ")
        )
    })?;
    Ok(format!("probe error {w:.1e}; ex5 NotSingleton; nonclosed Point(0) with NotComplementable"))
}

fn ep_suite(outcomes: &[CaseOutcome]) -> Result<String, String> {
    let consistent = flags(outcomes, "ep_equivalences")?;
    flags(outcomes, "ep_unconditional")?;
    flags(outcomes, "hermitian_is_ep")?;
    for name in [ExampleName::Ex3Rank, ExampleName::Ex4Rank] {
        let case = make_example::<f64>(name, 32).map_err(|e| e.to_string())?;
        let want = case.expected.ep_facts.ok_or("missing EP facts")?;
        let r = ep_equivalence_report(&case.t, &case.m, &case.n, &tol()).map_err(|e| e.to_string())?;
        let got = EpFacts {
            t_is_hypo_ep: r.t_is_hypo_ep.holds,
            schur_is_hypo_ep: r.schur_is_hypo_ep.holds,
            d_is_hypo_ep: r.d_is_hypo_ep.holds,
            rb_in_rschur: r.rb_in_rschur.holds,
            rcstar_in_rschurstar: r.rcstar_in_rschurstar.holds,
            aug_lower_is_hypo_ep: r.aug_lower_is_hypo_ep.holds,
            aug_upper_is_hypo_ep: r.aug_upper_is_hypo_ep.holds,
        };
        ensure(got == want, || format!("{name}: got {got:?}, expected {want:?}"))?;
        ensure(!r.rcstar_in_rschurstar.holds, || format!("{name}: hypothesis flag unexpectedly true"))?;
    }
    let gammas: Vec<f64> = [16, 32, 64]
        .into_iter()
        .map(|dim| {
            let case = make_example::<f64>(ExampleName::Ex1Diag, dim).map_err(|e| e.to_string())?;
            let blk = decompose(&case.t, &case.m, &case.n).map_err(|e| e.to_string())?;
            let s = schur(&blk, Route::Pinv, &tol()).map_err(|e| e.to_string())?;
            Ok(gamma(&s.compressed, &tol()))
        })
        .collect::<Result<_, String>>()?;
    for w in gammas.windows(2) {
        let ratio = w[1] / w[0];
        ensure((ratio - 0.5).abs() <= 0.1, || format!("ex1 γ ratio {ratio} ({gammas:?})"))?;
    }
    Ok(format!(
        "{consistent} square cases consistent; ex3/ex4 facts reproduced; ex1 γ = {:.4}, {:.4}, {:.4}",
        gammas[0], gammas[1], gammas[2]
    ))
}

fn full_verify() -> Result<String, String> {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_shorted"))
        .args(["verify", "--seeds", "200", "--max-dim", "40", "--seed", "1"])
        .env_remove("SHORTED_TOL_EQ")
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let code = out.status.code();
    ensure(code == Some(0), || format!("exit {code:?}: {}", String::from_utf8_lossy(&out.stderr)))?;
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    Ok(format!("{} cases passed in {:.1} s", v["passed"], elapsed.as_secs_f64()))
}

fn main() {
    let mut gate = Gate::default();
    gate.report(1, "corpus regressions", corpus_regressions());

    let outcomes: Vec<CaseOutcome> =
        (0..SUITE_CASES).into_par_iter().map(|i| run_case(i, SUITE_SEED, MAX_DIM, &tol())).collect();
    gate.report(2, "route agreement", route_agreement(&outcomes));
    gate.report(3, "structure suite", structure(&outcomes));
    gate.report(4, "block pseudoinverse", block_pseudoinverse());
    gate.report(5, "ball and gamma bounds", ball_bounds(&outcomes));
    gate.report(6, "singleton characterization", singleton(&outcomes));
    gate.report(7, "EP suite", ep_suite(&outcomes));
    gate.report(8, "full verify run", full_verify());

    println!(
        "acceptance: {} of 8 criteria passed, {} expected failure(s), {} unexpected",
        gate.passed, gate.expected, gate.unexpected
    );
    if gate.unexpected > 0 {
        std::process::exit(1);
    }
}
