use shorted::corpus::{EpFacts, ExampleName};
use shorted::{
    check_complementable, decompose, ep_equivalence_report, gamma, kernel_witness, make_example,
    random_complementable, schur, singleton_probe, Complex, Probe, Route, Tol, Verdict,
};

fn tol() -> Tol {
    Tol::default()
}

fn e(n: usize, i: usize) -> Vec<Complex<f64>> {
    let mut v = vec![Complex::new(0.0, 0.0); n];
    v[i] = Complex::new(1.0, 0.0);
    v
}

#[test]
fn every_example_matches_its_verdict_and_action() {
    for name in ExampleName::ALL {
        for dim in [16, 64] {
            let case = make_example::<f64>(name, dim).unwrap();
            let blk = decompose(&case.t, &case.m, &case.n).unwrap();
            let report = check_complementable(&blk, &tol()).unwrap();
            assert_eq!(report.verdict, case.expected.verdict, "{name} at {dim}");
            if report.verdict != Verdict::Complementable {
                continue;
            }
            for route in Route::ALL {
                let s = schur(&blk, route, &tol()).unwrap();
                let err = case.action_error(&s.ambient).unwrap();
                assert!(err <= 1e-10, "{name} at {dim}, {route}: {err:e}");
            }
        }
    }
}

#[test]
fn ep_facts_of_examples() {
    for name in [ExampleName::Ex3Rank, ExampleName::Ex4Rank, ExampleName::HypoepSum] {
        for dim in [16, 32, 64] {
            let case = make_example::<f64>(name, dim).unwrap();
            let want = case.expected.ep_facts.unwrap();
            let r = ep_equivalence_report(&case.t, &case.m, &case.n, &tol()).unwrap();
            let got = EpFacts {
                t_is_hypo_ep: r.t_is_hypo_ep.holds,
                schur_is_hypo_ep: r.schur_is_hypo_ep.holds,
                d_is_hypo_ep: r.d_is_hypo_ep.holds,
                rb_in_rschur: r.rb_in_rschur.holds,
                rcstar_in_rschurstar: r.rcstar_in_rschurstar.holds,
                aug_lower_is_hypo_ep: r.aug_lower_is_hypo_ep.holds,
                aug_upper_is_hypo_ep: r.aug_upper_is_hypo_ep.holds,
            };
            assert_eq!(got, want, "{name} at {dim}");
            assert!(r.equivalences_consistent && r.unconditional_implication, "{name} at {dim}");
            assert_eq!(r.t_is_ep.holds, r.t_is_hypo_ep.holds);
        }
    }
}

#[test]
fn ex3_negative_findings() {
    let case = make_example::<f64>(ExampleName::Ex3Rank, 32).unwrap();
    let r = ep_equivalence_report(&case.t, &case.m, &case.n, &tol()).unwrap();
    assert!(!r.t_is_ep.holds && !r.t_is_hypo_ep.holds);
    assert!(r.schur_is_hypo_ep.holds && r.d_is_hypo_ep.holds);
    assert!(!r.rcstar_in_rschurstar.holds);
    assert!(!r.chain_agrees);
}

#[test]
fn ex1_gamma_halves_per_doubling() {
    let gammas: Vec<f64> = [16, 32, 64]
        .iter()
        .map(|&dim| {
            let case = make_example::<f64>(ExampleName::Ex1Diag, dim).unwrap();
            let blk = decompose(&case.t, &case.m, &case.n).unwrap();
            gamma(&schur(&blk, Route::Pinv, &tol()).unwrap().compressed, &tol())
        })
        .collect();
    for (g, dim) in gammas.iter().zip([16.0, 32.0, 64.0]) {
        assert!((g - 2.0 / dim).abs() < 1e-12, "γ = {g} at {dim}");
    }
    for w in gammas.windows(2) {
        let ratio = w[1] / w[0];
        assert!((ratio - 0.5).abs() <= 0.1, "ratio {ratio}");
    }
}

#[test]
fn ex1_literal_formula_matches_from_the_second_pair() {
    // the closed form lists (0, 0, …) for the first pair; the general term 1/(2k) gives x₁ there
    let case = make_example::<f64>(ExampleName::Ex1Diag, 16).unwrap();
    let blk = decompose(&case.t, &case.m, &case.n).unwrap();
    let s = schur(&blk, Route::Pinv, &tol()).unwrap().ambient;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let first = s.mul_vec(&case.m.basis().column(0));
    assert!((first[0].re - h).abs() < 1e-12 && (first[1].re - h).abs() < 1e-12);
    // pair k = 3: ½·(4/6) = 1/3
    assert!((s[(4, 4)].re + s[(4, 5)].re - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn eqgm_probe_at_e1() {
    let case = make_example::<f64>(ExampleName::EqgmBanded, 64).unwrap();
    let blk = decompose(&case.t, &case.m, &case.n).unwrap();
    match singleton_probe(&blk, &e(64, 0), 10, 3, &tol()).unwrap() {
        Probe::Point { z } => {
            assert!((z[0].re + 2.0).abs() < 1e-12);
            assert!(z[1..].iter().all(|v| v.norm() < 1e-12));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn ex5_is_ill_posed_with_two_candidates() {
    let case = make_example::<f64>(ExampleName::Ex5Shift, 32).unwrap();
    let blk = decompose(&case.t, &case.m, &case.n).unwrap();
    let report = check_complementable(&blk, &tol()).unwrap();
    assert_eq!(report.verdict, Verdict::IllPosedSchur);
    assert!(report.rc_in_rd.holds && !report.nd_in_nb.holds);
    assert!(schur(&blk, Route::Right, &tol()).is_err());

    let w = kernel_witness(&blk, &tol()).unwrap().unwrap();
    // Z₁ = (0, x₁, x₂/2, …) and Z₂ = (x₁, x₁, x₂/2, …)
    assert!((w.z1[(1, 0)].re - 1.0).abs() < 1e-12 && w.z1[(0, 0)].norm() < 1e-12);
    assert!((w.z2[(0, 0)].re - 1.0).abs() < 1e-12);
    let amb1 = blk.embed_top_left(&w.schur1);
    let amb2 = blk.embed_top_left(&w.schur2);
    assert!(case.action_error(&amb1).unwrap() < 1e-12);
    assert!(case.alternate_error(&amb2).unwrap() < 1e-12);

    let x = vec![Complex::new(0.0, 0.0); case.t.cols()];
    assert!(matches!(singleton_probe(&blk, &x, 10, 1, &tol()).unwrap(), Probe::NotSingleton { .. }));
}

#[test]
fn nonclosed_pairs_truncation() {
    for dim in [16, 32, 64] {
        let case = make_example::<f64>(ExampleName::NonclosedPairs, dim).unwrap();
        assert_eq!(case.expected.limit_verdict, Some(Verdict::NotComplementable));
        let blk = decompose(&case.t, &case.m, &case.n).unwrap();
        // at every finite size D is invertible, so the truncation is complementable
        assert_eq!(check_complementable(&blk, &tol()).unwrap().verdict, Verdict::Complementable);
        match singleton_probe(&blk, &e(dim, 0), 10, 1, &tol()).unwrap() {
            Probe::Point { z } => assert!(z.iter().all(|v| v.norm() < 1e-12)),
            other => panic!("{other:?}"),
        }
        // γ(D) = 1/dim → 0 and ‖Z‖ = dim: the closed-range failure in the limit
        assert!((gamma(&blk.d, &tol()) - 1.0 / dim as f64).abs() < 1e-12);
        let z = schur(&blk, Route::Right, &tol()).unwrap().z.unwrap();
        assert!((z.norm() - dim as f64).abs() < 1e-9);
    }
}

#[test]
fn ex6_blocks_are_all_nonzero() {
    let case = make_example::<f64>(ExampleName::Ex6Band, 16).unwrap();
    let blk = decompose(&case.t, &case.m, &case.n).unwrap();
    for m in [&blk.a, &blk.b, &blk.c, &blk.d] {
        assert!(m.max_abs() > 0.5);
    }
}

#[test]
fn ex4_literal_has_the_same_schur_complement() {
    let case = make_example::<f64>(ExampleName::Ex4RankLiteral, 32).unwrap();
    let blk = decompose(&case.t, &case.m, &case.n).unwrap();
    let s = schur(&blk, Route::Pinv, &tol()).unwrap();
    assert!(case.action_error(&s.ambient).unwrap() < 1e-12);
}

#[test]
fn random_generator_is_always_complementable() {
    for seed in 0..1000u64 {
        let dom = 3 + (seed % 10) as usize;
        let cod = 3 + ((seed / 10) % 10) as usize;
        let dm = (seed % 3) as usize;
        let dn = ((seed / 3) % 3) as usize;
        let rank = (seed as usize) % ((dom - dm).min(cod - dn) + 1);
        let case = random_complementable::<f64>(dom, cod, dm, dn, rank, seed).unwrap();
        let blk = decompose(&case.t, &case.m, &case.n).unwrap();
        assert!(check_complementable(&blk, &tol()).unwrap().is_complementable(), "seed {seed}");
    }
}

#[test]
fn seed_17_structure() {
    let case = random_complementable::<f64>(12, 12, 5, 5, 4, 17).unwrap();
    let r = shorted::verify_structure(&case.t, &case.m, &case.n, &tol()).unwrap();
    assert!(r.all_hold(), "{r:?}");
}

#[test]
fn cases_serialize() {
    let case = make_example::<f64>(ExampleName::Ex3Rank, 8).unwrap();
    let json = serde_json::to_string(&case).unwrap();
    let back: shorted::LabeledCase = serde_json::from_str(&json).unwrap();
    assert_eq!(back.expected, case.expected);
    assert_eq!(back.t, case.t);
}
