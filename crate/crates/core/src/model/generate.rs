//! Seeded random chains for tests and randomized verification.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::perturb::matrix_inf_norm;
use crate::{Error, Result, Scalar};

use super::ChainModel;

const MAX_ATTEMPTS: usize = 16;
const MAX_SHRINK: usize = 64;

/// Weight in (0, 1].
fn weight(rng: &mut ChaCha8Rng) -> f64 {
    1.0 - rng.random::<f64>()
}

fn normalize(row: &mut [f64]) {
    let s: f64 = row.iter().sum();
    for x in row.iter_mut() {
        *x /= s;
    }
}

fn to_chain<T: Scalar>(rows: &[Vec<f64>]) -> Result<ChainModel<T>> {
    ChainModel::new(
        rows.iter()
            .map(|r| r.iter().map(|&x| T::lit(x)).collect())
            .collect(),
    )
}

/// Random unichain with exactly `transient_count` transient states.
///
/// Recurrent states are tied together by a random Hamiltonian cycle, so the
/// recurrent block is irreducible for any `density`; each further edge is
/// present with probability `density`. Every transient state gets an edge
/// either into the recurrent class or to a transient state created before
/// it, which makes the recurrent class reachable from everywhere.
pub fn generate_random_unichain<T: Scalar>(
    n: usize,
    density: f64,
    transient_count: usize,
    seed: u64,
) -> Result<ChainModel<T>> {
    if n == 0 {
        return Err(Error::InfeasibleRequest("n must be positive".into()));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::InfeasibleRequest(format!(
            "density {density} not in (0, 1]"
        )));
    }
    if transient_count >= n {
        return Err(Error::InfeasibleRequest(format!(
            "{transient_count} transient states requested for {n} states"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let (transient, recurrent) = order.split_at(transient_count);
        let m = recurrent.len();
        let mut rows = vec![vec![0.0; n]; n];

        for (a, &i) in recurrent.iter().enumerate() {
            let succ = recurrent[(a + 1) % m];
            for &j in recurrent {
                if j == succ || rng.random::<f64>() < density {
                    rows[i][j] = weight(&mut rng);
                }
            }
        }
        for (a, &i) in transient.iter().enumerate() {
            let exits: Vec<usize> = recurrent.iter().chain(&transient[..a]).copied().collect();
            let forced = exits[rng.random_range(0..exits.len())];
            for j in 0..n {
                if j == forced || rng.random::<f64>() < density {
                    rows[i][j] = weight(&mut rng);
                }
            }
        }
        rows.iter_mut().for_each(|r| normalize(r));

        let chain = to_chain::<T>(&rows)?;
        let s = chain.structure();
        if s.is_unichain && s.transient.len() == transient_count {
            return Ok(chain);
        }
    }
    Err(Error::InfeasibleRequest(format!(
        "no unichain with {transient_count} transient states after {MAX_ATTEMPTS} attempts"
    )))
}

/// Random perturbation `P̃` with `‖P − P̃‖∞ ≤ magnitude`.
///
/// Each row is moved towards a random target distribution. With
/// `allow_reducible = false` the targets are strictly positive, so every
/// perturbed row is positive and `P̃` is irreducible. Otherwise some rows are
/// pulled towards a small set of sink states, and in half of the draws each
/// sink whose row fits the budget is made absorbing, which typically splits
/// `P̃` into several recurrent classes.
pub fn generate_perturbation<T: Scalar>(
    chain: &ChainModel<T>,
    magnitude: f64,
    allow_reducible: bool,
    seed: u64,
) -> Result<ChainModel<T>> {
    if !(0.0..=2.0).contains(&magnitude) {
        return Err(Error::InfeasibleRequest(format!(
            "magnitude {magnitude} not in [0, 2]"
        )));
    }
    let irreducible = chain.structure().is_irreducible;
    if magnitude == 0.0 {
        if !allow_reducible && !irreducible {
            return Err(Error::InfeasibleRequest(
                "zero perturbation of a reducible chain cannot be irreducible".into(),
            ));
        }
        return Ok(chain.clone());
    }
    let n = chain.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base: Vec<Vec<f64>> = chain
        .transition()
        .iter_rows()
        .map(|r| r.iter().map(|x| x.as_f64()).collect())
        .collect();

    // two absorbing sinks make two recurrent classes
    let split = allow_reducible && n >= 2 && rng.random::<bool>();
    let sinks: Vec<usize> = {
        let mut s: Vec<usize> = (0..n).collect();
        s.shuffle(&mut rng);
        s.truncate(if split { 2 } else if n > 2 { rng.random_range(1..=2) } else { 1 });
        s
    };
    let mut targets = Vec::with_capacity(n);
    let mut alphas = Vec::with_capacity(n);
    let mut fixed = vec![false; n];
    for (i, p) in base.iter().enumerate() {
        if split && sinks.contains(&i) && 2.0 * (1.0 - p[i]) <= magnitude * (1.0 - 1e-12) {
            targets.push((0..n).map(|j| if j == i { 1.0 } else { 0.0 }).collect());
            alphas.push(1.0);
            fixed[i] = true;
            continue;
        }
        let to_sink = allow_reducible && rng.random::<bool>();
        let q: Vec<f64> = if to_sink {
            let k = sinks[rng.random_range(0..sinks.len())];
            (0..n).map(|j| if j == k { 1.0 } else { 0.0 }).collect()
        } else {
            let mut q: Vec<f64> = (0..n).map(|_| weight(&mut rng)).collect();
            normalize(&mut q);
            q
        };
        let dist: f64 = p.iter().zip(&q).map(|(a, b)| (a - b).abs()).sum();
        let cap = if dist > 0.0 {
            (magnitude / dist).min(1.0)
        } else {
            0.0
        };
        let full = to_sink && rng.random::<bool>();
        alphas.push(if full { cap } else { cap * weight(&mut rng) });
        targets.push(q);
    }

    let bound = T::lit(magnitude);
    let mut shrink = 1.0;
    for _ in 0..MAX_SHRINK {
        let rows: Vec<Vec<f64>> = base
            .iter()
            .zip(&targets)
            .zip(&alphas)
            .zip(&fixed)
            .map(|(((p, q), &a), &fixed)| {
                let a = if fixed { a } else { a * shrink };
                p.iter()
                    .zip(q)
                    .map(|(&x, &y)| (1.0 - a) * x + a * y)
                    .collect()
            })
            .collect();
        let out = to_chain::<T>(&rows)?;
        let ok_norm = matrix_inf_norm(&chain.transition().sub(out.transition())?) <= bound;
        let ok_structure = allow_reducible || out.structure().is_irreducible;
        if ok_norm && ok_structure {
            return Ok(out);
        }
        shrink *= 0.5;
    }
    if allow_reducible || irreducible {
        Ok(chain.clone())
    } else {
        Err(Error::InfeasibleRequest(
            "could not meet the norm bound with an irreducible result".into(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::classify_states;
    use crate::Chain;

    #[test]
    fn dense_generator_gives_irreducible_chain() {
        let c: Chain = generate_random_unichain(5, 1.0, 0, 7).unwrap();
        let s = classify_states(&c);
        assert!(s.is_irreducible);
        assert!(c.transition().as_slice().iter().all(|&p| p > 0.0));
    }

    #[test]
    fn requested_transient_count_is_met() {
        let c: Chain = generate_random_unichain(4, 0.5, 1, 1).unwrap();
        let s = classify_states(&c);
        assert!(s.is_unichain);
        assert_eq!(s.transient.len(), 1);
    }

    #[test]
    fn single_state() {
        let c: Chain = generate_random_unichain(1, 1.0, 0, 0).unwrap();
        assert_eq!(c.transition().to_rows(), vec![vec![1.0]]);
    }

    #[test]
    fn infeasible_requests() {
        assert!(generate_random_unichain::<f64>(3, 0.5, 3, 0).is_err());
        assert!(generate_random_unichain::<f64>(3, 0.0, 0, 0).is_err());
        assert!(generate_random_unichain::<f64>(0, 0.5, 0, 0).is_err());
    }

    #[test]
    fn same_seed_same_chain() {
        let a: Chain = generate_random_unichain(9, 0.4, 2, 99).unwrap();
        let b: Chain = generate_random_unichain(9, 0.4, 2, 99).unwrap();
        assert_eq!(a, b);
        let c: Chain = generate_random_unichain(9, 0.4, 2, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn zero_perturbation_is_identity() {
        let c: Chain = generate_random_unichain(4, 0.7, 0, 3).unwrap();
        assert_eq!(generate_perturbation(&c, 0.0, false, 5).unwrap(), c);
    }

    #[test]
    fn perturbation_respects_magnitude() {
        let c = Chain::new(vec![vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let pt = generate_perturbation(&c, 0.2, false, 3).unwrap();
        let d = matrix_inf_norm(&c.transition().sub(pt.transition()).unwrap());
        assert!(d <= 0.2 && d > 0.0);
        assert!(pt.structure().is_irreducible);
    }

    #[test]
    fn reducible_perturbations_occur() {
        let c: Chain = generate_random_unichain(5, 0.6, 0, 11).unwrap();
        let found = (0..200u64).any(|seed| {
            let pt = generate_perturbation(&c, 2.0, true, seed).unwrap();
            pt.structure().recurrent_classes.len() >= 2
        });
        assert!(found);
    }

    #[test]
    fn irreducible_request_on_unichain_with_transients() {
        let c: Chain = generate_random_unichain(5, 0.5, 2, 4).unwrap();
        assert!(generate_perturbation(&c, 0.0, false, 1).is_err());
        let pt = generate_perturbation(&c, 0.3, false, 1).unwrap();
        assert!(pt.structure().is_irreducible);
    }
}
