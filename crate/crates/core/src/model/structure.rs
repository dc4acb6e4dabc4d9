use serde::{Deserialize, Serialize};

use crate::linalg::Matrix;
use crate::Scalar;

use super::ChainModel;

/// Recurrent/transient decomposition of a chain (0-based state indices).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateStructure {
    /// Closed communicating classes, each sorted, ordered by smallest member.
    pub recurrent_classes: Vec<Vec<usize>>,
    pub transient: Vec<usize>,
    pub is_unichain: bool,
    pub is_irreducible: bool,
    /// Every recurrent class is aperiodic.
    pub is_aperiodic: bool,
    /// Period of each recurrent class, parallel to `recurrent_classes`.
    pub periods: Vec<usize>,
}

impl StateStructure {
    /// Period of the single recurrent class of a unichain.
    pub fn period(&self) -> Option<usize> {
        self.is_unichain.then(|| self.periods[0])
    }

    pub fn recurrent_states(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.recurrent_classes.iter().flatten().copied().collect();
        all.sort_unstable();
        all
    }

    pub fn is_transient(&self, i: usize) -> bool {
        self.transient.binary_search(&i).is_ok()
    }

    pub fn class_of(&self, i: usize) -> Option<usize> {
        self.recurrent_classes
            .iter()
            .position(|c| c.binary_search(&i).is_ok())
    }
}

/// Classifies the states of a chain.
pub fn classify_states<T: Scalar>(chain: &ChainModel<T>) -> StateStructure {
    chain.structure().clone()
}

/// Edge `i → j` exists iff `pᵢⱼ > 0`.
pub(crate) fn classify_matrix<T: Scalar>(p: &Matrix<T>) -> StateStructure {
    let n = p.rows();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| p[(i, j)] > T::zero()).collect())
        .collect();
    let comp = tarjan(&adj);
    let ncomp = comp.iter().max().map_or(0, |&c| c + 1);

    let mut closed = vec![true; ncomp];
    for (u, out) in adj.iter().enumerate() {
        if out.iter().any(|&v| comp[v] != comp[u]) {
            closed[comp[u]] = false;
        }
    }
    let mut members = vec![Vec::new(); ncomp];
    for (u, &c) in comp.iter().enumerate() {
        members[c].push(u);
    }
    let mut recurrent_classes = Vec::new();
    let mut transient = Vec::new();
    for (c, m) in members.into_iter().enumerate() {
        if closed[c] {
            recurrent_classes.push(m);
        } else {
            transient.extend(m);
        }
    }
    recurrent_classes.sort_by_key(|c| c[0]);
    transient.sort_unstable();

    let periods: Vec<usize> = recurrent_classes
        .iter()
        .map(|c| class_period(&adj, c, n))
        .collect();
    let is_unichain = recurrent_classes.len() == 1;
    StateStructure {
        is_irreducible: is_unichain && transient.is_empty(),
        is_aperiodic: periods.iter().all(|&d| d == 1),
        is_unichain,
        recurrent_classes,
        transient,
        periods,
    }
}

/// Iterative Tarjan; returns the component id of every vertex.
fn tarjan(adj: &[Vec<usize>]) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut next = 0;
    let mut ncomp = 0;

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        // (vertex, position in its adjacency list)
        let mut call = vec![(root, 0usize)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = adj[v].get(*pos) {
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp[w] = ncomp;
                    if w == v {
                        break;
                    }
                }
                ncomp += 1;
            }
        }
    }
    comp
}

/// gcd of `level(u) + 1 − level(v)` over edges inside the class.
fn class_period(adj: &[Vec<usize>], class: &[usize], n: usize) -> usize {
    let mut in_class = vec![false; n];
    for &s in class {
        in_class[s] = true;
    }
    let mut level = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::from([class[0]]);
    level[class[0]] = 0;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if in_class[v] && level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let mut g = 0usize;
    for &u in class {
        for &v in &adj[u] {
            if in_class[v] {
                let d = (level[u] + 1).abs_diff(level[v]);
                g = gcd(g, d);
            }
        }
    }
    g.max(1)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
