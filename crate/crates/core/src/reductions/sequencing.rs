//! Position-based encodings: Hamilton path and circle, TSP, shortest path.
//!
//! `X_{i,j}` (vertex `i` at position `j`) is variable `i·n + j`.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::cnf::{Cnf, Lit};
use crate::netbuilder::Qubo;
use crate::potts::SpinLabel;
use crate::problem::{directed_adjacency, undirected_adjacency, Witness};

use super::{
    at_least_one, at_most_one, is_true, EncodeOptions, Encoding, ReductionArtifact,
    ReductionError,
};

/// Constraints I–IV (each position holds exactly one vertex, each vertex
/// sits at exactly one position), V (a vertex at position `j < n` has a
/// neighbour at `j + 1`) and, for a circle, VI (the last vertex has a
/// neighbour at the first position).
pub(crate) fn hamilton_cnf(n: usize, adj: &[BTreeSet<usize>], circle: bool) -> Cnf {
    let x = |i: usize, j: usize| i * n + j;
    let mut f = Cnf::new(n * n);
    for j in 0..n {
        at_least_one(&mut f, (0..n).map(|i| x(i, j)));
    }
    for j in 0..n {
        let col: Vec<usize> = (0..n).map(|i| x(i, j)).collect();
        at_most_one(&mut f, &col);
    }
    for i in 0..n {
        at_least_one(&mut f, (0..n).map(|j| x(i, j)));
    }
    for i in 0..n {
        let row: Vec<usize> = (0..n).map(|j| x(i, j)).collect();
        at_most_one(&mut f, &row);
    }
    for (i, nb) in adj.iter().enumerate() {
        for j in 0..n - 1 {
            f.add_clause(
                std::iter::once(Lit::neg(x(i, j))).chain(nb.iter().map(|&k| Lit::pos(x(k, j + 1)))),
            );
        }
        if circle {
            f.add_clause(
                std::iter::once(Lit::neg(x(i, n - 1))).chain(nb.iter().map(|&k| Lit::pos(x(k, 0)))),
            );
        }
    }
    f
}

/// Vertex per position: the lowest True vertex, or `n` if none.
fn order_decoder(n: usize) -> super::Decoder {
    Arc::new(move |l: &[SpinLabel]| {
        Witness::Order(
            (0..n)
                .map(|j| (0..n).find(|&i| is_true(l[i * n + j])).unwrap_or(n))
                .collect(),
        )
    })
}

pub fn encode_hamilton(
    n: usize,
    edges: &[(usize, usize)],
    circle: bool,
    directed: bool,
    opts: &EncodeOptions,
) -> Result<ReductionArtifact, ReductionError> {
    if n < 2 {
        return Err(ReductionError::Unsupported("need at least 2 vertices".into()));
    }
    let adj = if directed {
        directed_adjacency(n, edges)
    } else {
        undirected_adjacency(n, edges)
    };
    let mut enc = Encoding::new("hamilton", n * n, order_decoder(n))
        .with_cnf(hamilton_cnf(n, &adj, circle));
    for (i, nb) in adj.iter().enumerate() {
        if nb.is_empty() {
            enc.warnings
                .push(format!("vertex {i} has no neighbours; no Hamilton sequence exists"));
        }
    }
    enc.assemble(opts)
}

/// Hamilton circle on the complete graph plus `W_uv x_{u,j} x_{v,j+1}` for
/// every ordered pair and cyclic position. Clause weights are scaled to at
/// least `Σ W_uv + 1`.
pub fn encode_tsp(
    weights: &[Vec<f64>],
    opts: &EncodeOptions,
) -> Result<ReductionArtifact, ReductionError> {
    let n = weights.len();
    if n < 3 || weights.iter().any(|r| r.len() != n) {
        return Err(ReductionError::Unsupported("need a square matrix of ≥ 3 cities".into()));
    }
    let adj: Vec<BTreeSet<usize>> = (0..n).map(|i| (0..n).filter(|&j| j != i).collect()).collect();
    let x = |i: usize, j: usize| i * n + j;
    let mut obj = Qubo::new(n * n);
    let mut total = 0.0;
    for u in 0..n {
        for v in 0..n {
            if u == v || weights[u][v] == 0.0 {
                continue;
            }
            total += weights[u][v];
            for j in 0..n {
                obj.add_quad(x(u, j), x(v, (j + 1) % n), weights[u][v]);
            }
        }
    }
    let mut enc = Encoding::new("tsp", n * n, order_decoder(n))
        .with_cnf(hamilton_cnf(n, &adj, true))
        .with_objective(obj);
    enc.scale_floor = total + 1.0;
    enc.assemble(opts)
}

/// `x_{v,i}` (vertex `v` at step `i < K`) is variable `v·K + i`.
/// I: a vertex at step `i ≥ 1` has a neighbour at step `i − 1`;
/// II: `t` appears at some step; III: only `s` may sit at step 0.
pub(crate) fn shortest_path_cnf(n: usize, adj: &[BTreeSet<usize>], s: usize, t: usize, k: usize) -> Cnf {
    let x = |v: usize, i: usize| v * k + i;
    let mut f = Cnf::new(n * k);
    for i in 1..k {
        for (v, nb) in adj.iter().enumerate() {
            f.add_clause(
                std::iter::once(Lit::neg(x(v, i))).chain(nb.iter().map(|&w| Lit::pos(x(w, i - 1)))),
            );
        }
    }
    at_least_one(&mut f, (0..k).map(|i| x(t, i)));
    for v in (0..n).filter(|&v| v != s) {
        f.add_clause([Lit::neg(x(v, 0))]);
    }
    f
}

pub fn encode_shortest_path(
    n: usize,
    edges: &[(usize, usize)],
    s: usize,
    t: usize,
    k: usize,
    opts: &EncodeOptions,
) -> Result<ReductionArtifact, ReductionError> {
    if s >= n || t >= n || k == 0 {
        return Err(ReductionError::Unsupported("bad endpoints or K".into()));
    }
    let adj = undirected_adjacency(n, edges);
    let adj_dec = adj.clone();
    let decoder = Arc::new(move |l: &[SpinLabel]| {
        Witness::Order(backtrack_path(&adj_dec, l, n, k, t))
    });
    Encoding::new("shortest_path", n * k, decoder)
        .with_cnf(shortest_path_cnf(n, &adj, s, t, k))
        .assemble(opts)
}

/// Walks back from the first step holding `t` through True neighbours,
/// then removes loops. Empty if the walk breaks off.
fn backtrack_path(adj: &[BTreeSet<usize>], l: &[SpinLabel], n: usize, k: usize, t: usize) -> Vec<usize> {
    let on = |v: usize, i: usize| is_true(l[v * k + i]);
    let Some(first) = (0..k).find(|&i| on(t, i)) else {
        return Vec::new();
    };
    let mut walk = vec![t];
    let mut cur = t;
    for i in (0..first).rev() {
        match adj[cur].iter().copied().find(|&w| on(w, i)) {
            Some(w) => {
                walk.push(w);
                cur = w;
            }
            None => return Vec::new(),
        }
    }
    walk.reverse();
    let mut path: Vec<usize> = Vec::with_capacity(walk.len());
    for v in walk {
        if let Some(p) = path.iter().position(|&u| u == v) {
            path.truncate(p + 1);
        } else {
            path.push(v);
        }
    }
    debug_assert!(path.iter().all(|&v| v < n));
    path
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_sat(f: &Cnf) -> bool {
        (0..1u64 << f.num_vars).any(|m| {
            let a: Vec<bool> = (0..f.num_vars).map(|j| m >> j & 1 == 1).collect();
            f.is_satisfied_by(&a)
        })
    }

    #[test]
    fn triangle_circle_satisfiable() {
        let adj = undirected_adjacency(3, &[(0, 1), (1, 2), (0, 2)]);
        assert!(brute_sat(&hamilton_cnf(3, &adj, true)));
    }

    #[test]
    fn path_graph_has_no_circle() {
        let adj = undirected_adjacency(3, &[(0, 1), (1, 2)]);
        assert!(!brute_sat(&hamilton_cnf(3, &adj, true)));
        assert!(brute_sat(&hamilton_cnf(3, &adj, false)));
    }

    #[test]
    fn hamilton_counts_n4() {
        let adj = undirected_adjacency(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let f = hamilton_cnf(4, &adj, true);
        assert_eq!(f.num_clauses(), 4 * 4 * 4 + 2 * 4);
        assert_eq!(f.num_vars, 16);
    }

    #[test]
    fn shortest_path_position_bound() {
        let adj = undirected_adjacency(3, &[(0, 1), (1, 2)]);
        assert!(brute_sat(&shortest_path_cnf(3, &adj, 0, 2, 3)));
        assert!(!brute_sat(&shortest_path_cnf(3, &adj, 0, 2, 2)));
        assert!(brute_sat(&shortest_path_cnf(3, &adj, 1, 1, 1)));
    }

    #[test]
    fn decoded_order_from_assignment() {
        let art = encode_hamilton(3, &[(0, 1), (1, 2), (0, 2)], true, false, &EncodeOptions::default())
            .unwrap();
        // 2 at position 0, 0 at 1, 1 at 2
        let mut bits = vec![false; 9];
        bits[2 * 3] = true;
        bits[1] = true;
        bits[3 + 2] = true;
        assert_eq!(art.decode_bits(&bits), Witness::Order(vec![2, 0, 1]));
        assert_eq!(art.decode_bits(&[false; 9]), Witness::Order(vec![3, 3, 3]));
    }

    #[test]
    fn loops_are_cut_from_walks() {
        let adj = undirected_adjacency(3, &[(0, 1), (1, 2)]);
        let k = 4;
        // 0, 1, 0, ... t = 2 never reached
        let mut l = vec![SpinLabel::F; 3 * k];
        for (v, i) in [(0, 0), (1, 1), (0, 2)] {
            l[v * k + i] = SpinLabel::T;
        }
        assert!(backtrack_path(&adj, &l, 3, k, 2).is_empty());
        // 1, 0, 1, 2 reduces to 1, 2
        let mut l = vec![SpinLabel::F; 3 * k];
        for (v, i) in [(1, 0), (0, 1), (1, 2), (2, 3)] {
            l[v * k + i] = SpinLabel::T;
        }
        assert_eq!(backtrack_path(&adj, &l, 3, k, 2), vec![1, 2]);
    }
}
