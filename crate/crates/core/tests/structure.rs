mod common;

use mrp_core::model::{classify_states, generate_perturbation, generate_random_unichain};
use mrp_core::perturb::matrix_inf_norm;
use mrp_core::{Chain, Mat};
use proptest::prelude::*;

/// Sparse random stochastic matrix (reducible in general).
fn arb_chain(max_n: usize) -> impl Strategy<Value = Chain> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(
            proptest::collection::vec((any::<bool>(), 0.05f64..1.0), n),
            n,
        )
        .prop_map(move |rows| {
            let rows: Vec<Vec<f64>> = rows
                .into_iter()
                .enumerate()
                .map(|(i, r)| {
                    let mut w: Vec<f64> =
                        r.iter().map(|&(on, x)| if on { x } else { 0.0 }).collect();
                    if w.iter().all(|&x| x == 0.0) {
                        w[i] = 1.0;
                    }
                    let s: f64 = w.iter().sum();
                    w.iter().map(|x| x / s).collect()
                })
                .collect();
            Chain::new(rows).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn classification_matches_transitive_closure(c in arb_chain(8)) {
        let s = classify_states(&c);
        let (classes, transient) = common::brute_classes(c.transition());
        prop_assert_eq!(&s.recurrent_classes, &classes);
        prop_assert_eq!(&s.transient, &transient);
        prop_assert_eq!(s.is_unichain, classes.len() == 1);
        let mut all: Vec<usize> = s.recurrent_states();
        all.extend(&s.transient);
        all.sort_unstable();
        prop_assert_eq!(all, (0..c.n()).collect::<Vec<_>>());
        if s.is_irreducible {
            prop_assert!(s.is_unichain && s.transient.is_empty());
        }
    }

    #[test]
    fn generated_chains_are_unichain(n in 1usize..=8, t in 0usize..4, density in 0.05f64..=1.0, seed: u64) {
        let t = t.min(n - 1);
        let c: Chain = generate_random_unichain(n, density, t, seed).unwrap();
        let (classes, transient) = common::brute_classes(c.transition());
        prop_assert_eq!(classes.len(), 1);
        prop_assert_eq!(transient.len(), t);
    }

    #[test]
    fn perturbation_norm_is_bounded(seed: u64, magnitude in 0.0f64..=2.0, reducible: bool) {
        let c: Chain = generate_random_unichain(6, 0.5, 0, seed).unwrap();
        let pt = generate_perturbation(&c, magnitude, reducible, seed.wrapping_mul(31)).unwrap();
        let d = matrix_inf_norm(&c.transition().sub(pt.transition()).unwrap());
        prop_assert!(d <= magnitude);
        if !reducible {
            prop_assert!(classify_states(&pt).is_irreducible);
        }
    }

    #[test]
    fn inf_norm_matches_double_loop(c in arb_chain(6), seed: u64) {
        let other: Chain = generate_random_unichain(c.n(), 0.7, 0, seed).unwrap();
        let diff = c.transition().sub(other.transition()).unwrap();
        let mut best = 0.0f64;
        for i in 0..diff.rows() {
            let mut s = 0.0;
            for j in 0..diff.cols() {
                s += diff[(i, j)].abs();
            }
            best = best.max(s);
        }
        prop_assert_eq!(matrix_inf_norm(&diff), best);
    }
}

#[test]
fn generators_are_bit_deterministic() {
    for seed in 0..20 {
        let a: Chain = generate_random_unichain(7, 0.4, 2, seed).unwrap();
        let b: Chain = generate_random_unichain(7, 0.4, 2, seed).unwrap();
        let bits = |m: &Mat| m.as_slice().iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(a.transition()), bits(b.transition()));
        let pa = generate_perturbation(&a, 0.7, true, seed).unwrap();
        let pb = generate_perturbation(&b, 0.7, true, seed).unwrap();
        assert_eq!(bits(pa.transition()), bits(pb.transition()));
    }
}

#[test]
fn f32_generator_and_classification() {
    let c: mrp_core::Chain32 = generate_random_unichain(6, 0.5, 2, 4).unwrap();
    let s = classify_states(&c);
    assert!(s.is_unichain);
    assert_eq!(s.transient.len(), 2);
}
