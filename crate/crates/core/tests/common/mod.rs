//! Independent oracles and random instances shared by the integration tests.
#![allow(dead_code)]

use mrp_core::mcsim::{rng_for, Simulator};
use mrp_core::model::generate_random_unichain;
use mrp_core::{Chain, Mat, Mrp};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random unichain MRP: `2 ≤ n ≤ max_n` (n = 1 allowed when `max_n == 1`),
/// up to `max_transient` transient states, rewards uniform in `[lo, hi]`.
pub fn random_mrp(seed: u64, max_n: usize, max_transient: usize, lo: f64, hi: f64) -> Mrp {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let n = rng.random_range(1..=max_n);
    let t = rng.random_range(0..=max_transient.min(n - 1));
    let density = rng.random_range(0.2..=1.0);
    let chain: Chain = generate_random_unichain(n, density, t, seed).unwrap();
    let reward = (0..n).map(|_| rng.random_range(lo..=hi)).collect();
    Mrp::new(chain, reward).unwrap()
}

/// Reachability by Floyd–Warshall style transitive closure.
pub fn reachability(p: &Mat) -> Vec<Vec<bool>> {
    let n = p.rows();
    let mut r: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i == j || p[(i, j)] > 0.0).collect())
        .collect();
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                for j in 0..n {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    r
}

/// A state is recurrent iff every state it reaches reaches it back.
/// Returns (recurrent classes sorted by first member, transient states).
pub fn brute_classes(p: &Mat) -> (Vec<Vec<usize>>, Vec<usize>) {
    let n = p.rows();
    let r = reachability(p);
    let recurrent: Vec<bool> = (0..n)
        .map(|i| (0..n).all(|j| !r[i][j] || r[j][i]))
        .collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in (0..n).filter(|&i| recurrent[i]) {
        if classes.iter().any(|c| c.contains(&i)) {
            continue;
        }
        classes.push((0..n).filter(|&j| r[i][j] && r[j][i]).collect());
    }
    let transient = (0..n).filter(|&i| !recurrent[i]).collect();
    (classes, transient)
}

/// `(1/T) Σ_{t=1..T} δₛ Pᵗ`.
pub fn cesaro_row(p: &Mat, start: usize, horizon: usize) -> Vec<f64> {
    let n = p.rows();
    let mut v = vec![0.0; n];
    v[start] = 1.0;
    let mut acc = vec![0.0; n];
    for _ in 0..horizon {
        v = p.vec_mul(&v);
        for (a, x) in acc.iter_mut().zip(&v) {
            *a += x;
        }
    }
    acc.iter().map(|a| a / horizon as f64).collect()
}

/// Monte Carlo mean passage times from every start to every tracked target:
/// (means, standard errors), `trajectories` walks per start.
pub fn mc_passage(
    chain: &Chain,
    tracked: &[bool],
    trajectories: u64,
    seed: u64,
) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let n = chain.n();
    let sim = Simulator::new(chain);
    let mut means = vec![vec![f64::NAN; n]; n];
    let mut ses = vec![vec![f64::NAN; n]; n];
    for i in 0..n {
        let mut rng = rng_for(seed.wrapping_add(i as u64));
        let mut sum = vec![0.0; n];
        let mut sq = vec![0.0; n];
        for _ in 0..trajectories {
            let hits = sim.first_passage(i, tracked, 1_000_000, &mut rng);
            for j in 0..n {
                if let Some(t) = hits[j] {
                    sum[j] += t as f64;
                    sq[j] += (t * t) as f64;
                }
            }
        }
        let k = trajectories as f64;
        for j in (0..n).filter(|&j| tracked[j]) {
            let m = sum[j] / k;
            means[i][j] = m;
            ses[i][j] = ((sq[j] / k - m * m).max(0.0) / k).sqrt();
        }
    }
    (means, ses)
}

/// Recursive include/exclude enumeration of all subsets of `items`,
/// evaluating `maxᵢ sᵢ − minᵢ sᵢ` with `sᵢ = Σ_{j∈A, j≠i} μⱼτᵢⱼ`.
/// Returns the maximum and the first subset (in enumeration order) attaining it.
pub fn brute_subset_max(mu: &[f64], tau: &Mat, items: &[usize]) -> (f64, Vec<usize>) {
    fn eval(mu: &[f64], tau: &Mat, subset: &[usize]) -> f64 {
        let n = mu.len();
        let mut hi = f64::NEG_INFINITY;
        let mut lo = f64::INFINITY;
        for i in 0..n {
            let mut s = 0.0;
            for &j in subset {
                if j != i {
                    s += mu[j] * tau[(i, j)];
                }
            }
            hi = hi.max(s);
            lo = lo.min(s);
        }
        hi - lo
    }
    fn walk(
        mu: &[f64],
        tau: &Mat,
        items: &[usize],
        k: usize,
        cur: &mut Vec<usize>,
        best: &mut (f64, Vec<usize>),
    ) {
        if k == items.len() {
            let v = eval(mu, tau, cur);
            if v > best.0 {
                *best = (v, cur.clone());
            }
            return;
        }
        walk(mu, tau, items, k + 1, cur, best);
        cur.push(items[k]);
        walk(mu, tau, items, k + 1, cur, best);
        cur.pop();
    }
    let mut best = (f64::NEG_INFINITY, Vec::new());
    walk(mu, tau, items, 0, &mut Vec::new(), &mut best);
    best
}

/// `chain` with states `a` and `b` made absorbing: two recurrent classes
/// whenever `a ≠ b`.
pub fn split_chain(chain: &Chain, a: usize, b: usize) -> Chain {
    let mut rows = chain.transition().to_rows();
    for k in [a, b] {
        rows[k] = (0..chain.n()).map(|j| if j == k { 1.0 } else { 0.0 }).collect();
    }
    Chain::new(rows).unwrap()
}
