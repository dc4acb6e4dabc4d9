mod common;

use mrp_core::passage::{
    diameter, first_passage_matrix, kemeny, passage_residual, return_time_check,
};
use mrp_core::solve::{stationary, steps_to_recurrence};
use mrp_core::Chain;

#[test]
fn return_times_and_recurrence_hold_on_random_unichains() {
    for seed in 0..1000 {
        let m = common::random_mrp(seed, 10, 3, 0.0, 1.0);
        let c = m.chain();
        let mu = stationary(c).unwrap();
        let tau = first_passage_matrix(c, &mu).unwrap();
        let scale = tau
            .matrix()
            .as_slice()
            .iter()
            .filter(|x| x.is_finite())
            .fold(1.0f64, |a, &x| a.max(x));
        assert!(return_time_check(&tau, &mu) <= 1e-9 * scale, "seed {seed}");
        assert!(passage_residual(c, &tau) <= 1e-9 * scale, "seed {seed}");
        for j in 0..c.n() {
            assert_eq!(tau.is_finite_target(j), mu.get(j) > 0.0);
        }
        if c.structure().transient.is_empty() && c.n() > 1 {
            assert!(diameter(&tau).is_finite());
        } else if c.n() > 1 {
            assert!(diameter(&tau).is_infinite());
        }
    }
}

#[test]
fn kemeny_constant_is_start_independent() {
    for seed in 0..1000 {
        let m = common::random_mrp(seed, 10, 3, 0.0, 1.0);
        let c = m.chain();
        let mu = stationary(c).unwrap();
        let tau = first_passage_matrix(c, &mu).unwrap();
        let k = kemeny(&tau, &mu).unwrap();
        assert!(
            k.max_deviation <= 1e-9 * k.eta.max(1.0),
            "seed {seed}: {}",
            k.max_deviation
        );
        // from a transient start the walk first has to reach the recurrent class
        let h = steps_to_recurrence(c).unwrap();
        for (i, (&x, &hi)) in k.excess().iter().zip(&h).enumerate() {
            assert!(
                (x - hi).abs() <= 1e-8 * k.eta.max(1.0),
                "seed {seed} state {i}: {x} vs {hi}"
            );
        }
        assert!(k.eta_max() >= k.eta - 1e-9);
    }
}

#[test]
fn passage_times_match_simulation() {
    let walks = 100_000;
    for seed in 0..6 {
        let m = common::random_mrp(seed + 40, 5, 1, 0.0, 1.0);
        let c = m.chain();
        let mu = stationary(c).unwrap();
        let tau = first_passage_matrix(c, &mu).unwrap();
        let tracked: Vec<bool> = (0..c.n()).map(|j| mu.get(j) > 0.0).collect();
        let (mean, se) = common::mc_passage(c, &tracked, walks, seed);
        for i in 0..c.n() {
            for j in (0..c.n()).filter(|&j| tracked[j]) {
                let t = tau.get(i, j);
                let err = (mean[i][j] - t).abs();
                // a zero standard error means the passage time is deterministic
                assert!(
                    err <= 3.0 * se[i][j] + 1e-9,
                    "seed {seed} ({i},{j}): {} vs {t} ± {}",
                    mean[i][j],
                    se[i][j]
                );
            }
        }
    }
}

#[test]
fn symmetric_two_state_values() {
    let c = Chain::new(vec![vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
    let mu = stationary(&c).unwrap();
    let tau = first_passage_matrix(&c, &mu).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            assert!((tau.get(i, j) - 2.0).abs() <= 1e-12);
        }
    }
    assert!((kemeny(&tau, &mu).unwrap().eta - 1.0).abs() <= 1e-12);
    assert!((diameter(&tau) - 2.0).abs() <= 1e-12);
}
