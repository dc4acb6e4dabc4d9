mod common;

use mrp_core::mcsim::{lemma1_check, rho_convergence_check, simulate, Lemma1Setup};
use mrp_core::model::generate_perturbation;
use mrp_core::{Chain, Mrp};

#[test]
fn violation_frequency_stays_below_confidence_level() {
    for seed in 0..4 {
        let m = common::random_mrp(seed, 6, 1, 0.0, 1.0);
        let pt = generate_perturbation(m.chain(), 0.3, false, seed).unwrap();
        let setup = Lemma1Setup::new(&m, &pt).unwrap();
        for s in setup
            .run(0, 5_000, &[0.05, 0.1, 0.25], 1_000, seed * 10_000)
            .unwrap()
        {
            assert!(s.passed, "seed {seed}: {s:?}");
        }
    }
}

#[test]
fn lower_tail_through_negated_reward() {
    let m = common::random_mrp(9, 6, 1, 0.0, 1.0);
    let neg = m
        .with_reward(m.reward().iter().map(|r| -r).collect())
        .unwrap();
    let pt = generate_perturbation(m.chain(), 0.3, false, 1).unwrap();
    let setup = Lemma1Setup::new(&neg, &pt).unwrap();
    for s in setup.run(0, 5_000, &[0.05, 0.25], 1_000, 77).unwrap() {
        assert!(s.passed, "{s:?}");
    }
}

#[test]
fn single_checks_are_reproducible() {
    let m = common::random_mrp(4, 6, 1, 0.0, 1.0);
    let pt = generate_perturbation(m.chain(), 0.2, false, 2).unwrap();
    let a = lemma1_check(&m, &pt, 0, 1000, 0.1, 5).unwrap();
    let b = lemma1_check(&m, &pt, 0, 1000, 0.1, 5).unwrap();
    assert_eq!(a, b);
    assert!(lemma1_check(&m, &pt, 0, 1000, 1.5, 5).is_err());
    let t = simulate(m.chain(), 0, 1000, 5).unwrap();
    assert_eq!(t.visits.iter().sum::<u64>(), 1000);
}

#[test]
fn empirical_reward_converges_on_reducible_perturbation() {
    // the perturbed chain splits into two closed classes
    let p = Chain::new(vec![
        vec![0.5, 0.5, 0.0],
        vec![0.25, 0.5, 0.25],
        vec![0.0, 0.5, 0.5],
    ])
    .unwrap();
    let m = Mrp::new(p, vec![1.0, 0.5, 0.0]).unwrap();
    let pt = Chain::new(vec![
        vec![1.0, 0.0, 0.0],
        vec![0.25, 0.5, 0.25],
        vec![0.0, 0.0, 1.0],
    ])
    .unwrap();
    assert!(!pt.is_unichain());
    for start in 0..3 {
        let c = rho_convergence_check(&m, &pt, start, 3).unwrap();
        assert!(c.within_envelope, "start {start}: {c:?}");
        if start != 1 {
            assert!(c.limit_gap <= 1e-12);
        }
    }
}
