mod common;

use mrp_core::model::generate_perturbation;
use mrp_core::solve::{limiting_distribution, stationary, stationary_residual};
use mrp_core::Chain;

#[test]
fn stationary_is_a_fixed_point() {
    for seed in 0..500 {
        let m = common::random_mrp(seed, 12, 3, -1.0, 1.0);
        let mu = stationary(m.chain()).unwrap();
        assert!(
            stationary_residual(m.chain(), mu.as_slice()) <= 1e-10,
            "seed {seed}"
        );
        let s: f64 = mu.as_slice().iter().sum();
        assert!((s - 1.0).abs() <= 1e-10);
        for &t in &m.chain().structure().transient {
            assert_eq!(mu.get(t), 0.0);
        }
    }
}

#[test]
fn limiting_rows_are_stationary_vectors() {
    for seed in 0..300 {
        let m = common::random_mrp(seed, 8, 2, 0.0, 1.0);
        let pt = generate_perturbation(m.chain(), 1.5, true, seed).unwrap();
        let lim = limiting_distribution(&pt).unwrap();
        for s in 0..pt.n() {
            let row = lim.row(s);
            assert!(
                stationary_residual(&pt, row) <= 1e-10,
                "seed {seed} start {s}"
            );
            assert!((row.iter().sum::<f64>() - 1.0).abs() <= 1e-10);
        }
        if pt.is_unichain() {
            let mu = stationary(&pt).unwrap();
            for s in 0..pt.n() {
                for (a, b) in lim.row(s).iter().zip(mu.as_slice()) {
                    assert!((a - b).abs() <= 1e-10);
                }
            }
        }
    }
}

#[test]
fn limiting_matches_cesaro_average() {
    let horizon = 100_000;
    let mut reducible_seen = 0;
    for seed in 0..12 {
        let m = common::random_mrp(seed, 6, 2, 0.0, 1.0);
        let pt = generate_perturbation(m.chain(), 2.0, true, seed + 1000).unwrap();
        reducible_seen += usize::from(!pt.is_unichain());
        let lim = limiting_distribution(&pt).unwrap();
        for s in 0..pt.n() {
            let oracle = common::cesaro_row(pt.transition(), s, horizon);
            for (a, b) in lim.row(s).iter().zip(&oracle) {
                assert!((a - b).abs() <= 1e-3, "seed {seed} start {s}: {a} vs {b}");
            }
        }
    }
    // periodic chain: the Cesàro limit still exists
    let cyc = Chain::new(vec![
        vec![0.0, 1.0, 0.0],
        vec![0.0, 0.0, 1.0],
        vec![1.0, 0.0, 0.0],
    ])
    .unwrap();
    let lim = limiting_distribution(&cyc).unwrap();
    let oracle = common::cesaro_row(cyc.transition(), 0, horizon);
    for (a, b) in lim.row(0).iter().zip(&oracle) {
        assert!((a - b).abs() <= 1e-3);
    }
    assert!(reducible_seen > 0);
    // two closed classes plus a transient state splitting between them
    let red = Chain::new(vec![
        vec![0.5, 0.5, 0.0, 0.0, 0.0],
        vec![0.3, 0.7, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 1.0, 0.0],
        vec![0.0, 0.0, 1.0, 0.0, 0.0],
        vec![0.2, 0.1, 0.3, 0.0, 0.4],
    ])
    .unwrap();
    assert!(!red.is_unichain());
    let lim = limiting_distribution(&red).unwrap();
    for s in 0..red.n() {
        let oracle = common::cesaro_row(red.transition(), s, horizon);
        for (a, b) in lim.row(s).iter().zip(&oracle) {
            assert!((a - b).abs() <= 1e-3, "start {s}: {a} vs {b}");
        }
    }
}
