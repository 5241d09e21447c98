//! Graph problems: clique, node cover, independent set, colouring, clique
//! cover, feedback sets, partitioning and max-cut.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::cnf::{Cnf, Lit};
use crate::netbuilder::{add_blue_restriction, Qubo, Rails};
use crate::potts::{CouplingGraph, SpinLabel};
use crate::problem::{directed_adjacency, undirected_adjacency, Witness};

use super::{
    at_least_one, at_most_one, exactly_one, is_true, EncodeOptions, Encoding,
    ReductionArtifact, ReductionError,
};

pub fn complement_edges(n: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let adj = undirected_adjacency(n, edges);
    let mut out = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if !adj[u].contains(&v) {
                out.push((u, v));
            }
        }
    }
    out
}

/// Colours used by first-fit colouring in vertex order.
pub fn greedy_coloring_bound(n: usize, edges: &[(usize, usize)]) -> usize {
    let adj = undirected_adjacency(n, edges);
    let mut color = vec![usize::MAX; n];
    for v in 0..n {
        let used: BTreeSet<usize> = adj[v].iter().map(|&u| color[u]).collect();
        color[v] = (0..).find(|c| !used.contains(c)).expect("a free colour");
    }
    color.iter().map(|c| c + 1).max().unwrap_or(1)
}

/// `x_{i,j}` (vertex `j` at position `i < k`) is variable `i·n + j`.
/// I: every position holds a vertex; II: no vertex at two positions;
/// III: no position holds two vertices; IV: non-adjacent vertices never
/// share the clique, in both position orders.
pub(crate) fn clique_cnf(n: usize, edges: &[(usize, usize)], k: usize) -> Cnf {
    let x = |i: usize, j: usize| i * n + j;
    let adj = undirected_adjacency(n, edges);
    let mut f = Cnf::new(k * n);
    for i in 0..k {
        at_least_one(&mut f, (0..n).map(|j| x(i, j)));
    }
    for j in 0..n {
        let col: Vec<usize> = (0..k).map(|i| x(i, j)).collect();
        at_most_one(&mut f, &col);
    }
    for i in 0..k {
        let row: Vec<usize> = (0..n).map(|j| x(i, j)).collect();
        at_most_one(&mut f, &row);
    }
    for u in 0..n {
        for v in u + 1..n {
            if adj[u].contains(&v) {
                continue;
            }
            for i in 0..k {
                for i2 in (0..k).filter(|&i2| i2 != i) {
                    f.add_clause([Lit::neg(x(i, u)), Lit::neg(x(i2, v))]);
                }
            }
        }
    }
    f
}

/// Vertices True at any position.
fn occupied_decoder(n: usize, k: usize, vertex_major: bool) -> super::Decoder {
    Arc::new(move |l: &[SpinLabel]| {
        let at = |v: usize, i: usize| {
            if vertex_major {
                l[v * k + i]
            } else {
                l[i * n + v]
            }
        };
        Witness::Subset((0..n).filter(|&v| (0..k).any(|i| is_true(at(v, i)))).collect())
    })
}

pub fn encode_clique(
    n: usize,
    edges: &[(usize, usize)],
    k: usize,
    opts: &EncodeOptions,
) -> Result<ReductionArtifact, ReductionError> {
    if k == 0 {
        return Err(ReductionError::Unsupported("k must be positive".into()));
    }
    Encoding::new("clique", k * n, occupied_decoder(n, k, false))
        .with_cnf(clique_cnf(n, edges, k))
        .assemble(opts)
}

/// `x_{v,i}` (vertex `v` in cover slot `i < k`) is variable `v·k + i`.
/// I: every slot holds a vertex; II: no vertex in two slots; III: no slot
/// holds two vertices; IV: every edge has an endpoint in some slot.
pub(crate) fn node_cover_cnf(n: usize, edges: &[(usize, usize)], k: usize) -> Cnf {
    let x = move |v: usize, i: usize| v * k + i;
    let mut f = Cnf::new(n * k);
    for i in 0..k {
        at_least_one(&mut f, (0..n).map(|v| x(v, i)));
    }
    for v in 0..n {
        let row: Vec<usize> = (0..k).map(|i| x(v, i)).collect();
        at_most_one(&mut f, &row);
    }
    for i in 0..k {
        let col: Vec<usize> = (0..n).map(|v| x(v, i)).collect();
        at_most_one(&mut f, &col);
    }
    for &(u, v) in edges {
        f.add_clause((0..k).flat_map(|i| [Lit::pos(x(u, i)), Lit::pos(x(v, i))]));
    }
    f
}

/// Cover of size at most `k` (slots beyond `|V|` are dropped).
pub fn encode_node_cover(
    n: usize,
    edges: &[(usize, usize)],
    k: usize,
    opts: &EncodeOptions,
) -> Result<ReductionArtifact, ReductionError> {
    let k = k.min(n);
    Encoding::new("node_cover", n * k, occupied_decoder(n, k, true))
        .with_cnf(node_cover_cnf(n, edges, k))
        .assemble(opts)
}

/// An independent set of size `k` is the complement of a cover of size
/// `|V| − k`.
pub fn encode_independent_set(
    n: usize,
    edges: &[(usize, usize)],
    k: usize,
    opts: &EncodeOptions,
) -> Result<ReductionArtifact, ReductionError> {
    if k > n {
        return Err(ReductionError::Infeasible(format!("k = {k} exceeds {n} vertices")));
    }
    let mut art = encode_node_cover(n, edges, n - k, opts)?;
    let cover = art.decoder.clone();
    art.kind = "independent_set";
    art.decoder = Arc::new(move |l: &[SpinLabel]| match cover(l) {
        Witness::Subset(c) => Witness::Subset((0..n).filter(|v| !c.contains(v)).collect()),
        other => other,
    });
    Ok(art)
}

/// `x_{v,i}` (vertex `v` has colour `i < k`) is variable `v·k + i`:
/// exactly one colour per vertex, plus `Σ_{(u,v)∈E} Σ_i x_{u,i} x_{v,i}`
/// as a penalty.
pub fn encode_chromatic(
    n: usize,
    edges: &[(usize, usize)],
    k: usize,
    opts: &EncodeOptions,
) -> Result<ReductionArtifact, ReductionError> {
    if k == 0 {
        return Err(ReductionError::Unsupported("k must be positive".into()));
    }
    let x = move |v: usize, i: usize| v * k + i;
    let mut f = Cnf::new(n * k);
    for v in 0..n {
        let row: Vec<usize> = (0..k).map(|i| x(v, i)).collect();
        exactly_one(&mut f, &row);
    }
    let mut pen = Qubo::new(n * k);
    for &(u, v) in edges {
        for i in 0..k {
            pen.add_quad(x(u, i), x(v, i), 1.0);
        }
    }
    let decoder = Arc::new(move |l: &[SpinLabel]| {
        Witness::Coloring(
            (0..n)
                .map(|v| (0..k).find(|&i| is_true(l[x(v, i)])).unwrap_or(k))
                .collect(),
        )
    });
    let mut enc = Encoding::new("chromatic", n * k, decoder).with_cnf(f);
    if !edges.is_empty() {
        enc = enc.with_penalty(pen);
    }
    enc.assemble(opts)
}

/// One node per vertex with `+1` on every edge, so neighbours prefer
/// different phases. `k = 2` adds Blue restriction, `k = 1` pulls every
/// node to F. Colours: F = 0, T = 1, B = 2.
pub fn encode_chromatic_direct(
    n: usize,
    edges: &[(usize, usize)],
    k: usize,
) -> Result<ReductionArtifact, ReductionError> {
    if !(1..=3).contains(&k) {
        return Err(ReductionError::Unsupported(format!(
            "direct colouring needs 1 ≤ k ≤ 3, got {k}"
        )));
    }
    let mut g = CouplingGraph::new(n);
    let rails = Rails::add_to(&mut g, false)?;
    for &(u, v) in edges {
        g.couple(u, v, 1.0)?;
    }
    let nodes: Vec<usize> = (0..n).collect();
    if k == 1 {
        let w = 2.0 * (edges.len() as f64 + 1.0);
        for &v in &nodes {
            g.couple(v, rails.f, -w)?;
        }
    }
    if k <= 2 {
        add_blue_restriction(&mut g, rails.b, &nodes)?;
    }
    let decoder = Arc::new(|l: &[SpinLabel]| Witness::Coloring(l.iter().map(|x| x.index()).collect()));
    Ok(ReductionArtifact {
        kind: "chromatic",
        graph: g,
        rails,
        var_nodes: nodes,
        cnf: None,
        penalty: None,
        objective: None,
        sat_scale: 1.0,
        decoder,
        init: crate::dynamics::InitStrategy::Random,
        warnings: Vec::new(),
    })
}

/// Colouring of the complement graph with `k` colours; colour classes are
/// the cliques.
pub fn encode_clique_cover(
    n: usize,
    edges: &[(usize, usize)],
    k: usize,
    opts: &EncodeOptions,
) -> Result<ReductionArtifact, ReductionError> {
    let comp = complement_edges(n, edges);
    let mut art = if k <= 3 {
        encode_chromatic_direct(n, &comp, k)?
    } else {
        encode_chromatic(n, &comp, k, opts)?
    };
    art.kind = "clique_cover";
    Ok(art)
}

/// `x_{v,i}` (vertex `v` at height `i < |V|`) is variable `v·|V| + i`.
/// At most one height per vertex; `Σ_{(u,v)∈E} Σ_{i≥j} x_{u,i} x_{v,j}`
/// penalizes arcs that do not climb; `λ Σ_v (1 − Σ_i x_{v,i})` counts the
/// vertices left without a height (the removed set).
pub fn encode_feedback_node_set(
    n: usize,
    edges: &[(usize, usize)],
    lambda: f64,
    opts: &EncodeOptions,
) -> Result<ReductionArtifact, ReductionError> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(ReductionError::Unsupported(format!("lambda {lambda} outside (0, 1)")));
    }
    let x = move |v: usize, i: usize| v * n + i;
    let mut f = Cnf::new(n * n);
    for v in 0..n {
        let row: Vec<usize> = (0..n).map(|i| x(v, i)).collect();
        at_most_one(&mut f, &row);
    }
    let adj = directed_adjacency(n, edges);
    let mut pen = Qubo::new(n * n);
    for (u, out) in adj.iter().enumerate() {
        for &v in out {
            for i in 0..n {
                for j in 0..=i {
                    pen.add_quad(x(u, i), x(v, j), 1.0);
                }
            }
        }
    }
    let mut obj = Qubo::new(n * n);
    obj.constant = lambda * n as f64;
    for j in 0..n * n {
        obj.add_linear(j, -lambda);
    }
    let decoder = Arc::new(move |l: &[SpinLabel]| {
        Witness::Subset(
            (0..n)
                .filter(|&v| !(0..n).any(|i| is_true(l[x(v, i)])))
                .collect(),
        )
    });
    Encoding::new("feedback_node_set", n * n, decoder)
        .with_cnf(f)
        .with_penalty(pen)
        .with_objective(obj)
        .assemble(opts)
}

/// Heights `x_{v,i}` (variable `v·|V| + i`, exactly one per vertex) and
/// arc slots `x_{e,i}` (variable `|V|² + e·|V| + i`). An arc slot may be
/// on only when its tail sits at height `i` and its head higher:
/// penalty `Σ_{e,i} 2x_{e,i} − x_{e,i} x_{u,i} − Σ_{j>i} x_{e,i} x_{v,j}`.
/// Objective `λ Σ_e (1 − Σ_i x_{e,i})`; arcs with no slot on are removed.
/// Together the linear part is `(2 − λ) Σ x_{e,i}`.
pub fn encode_feedback_arc_set(
    n: usize,
    edges: &[(usize, usize)],
    lambda: f64,
    opts: &EncodeOptions,
) -> Result<ReductionArtifact, ReductionError> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(ReductionError::Unsupported(format!("lambda {lambda} outside (0, 1)")));
    }
    let m = edges.len();
    let nv = n * n + m * n;
    let h = |v: usize, i: usize| v * n + i;
    let a = move |e: usize, i: usize| n * n + e * n + i;
    let mut f = Cnf::new(nv);
    for v in 0..n {
        let row: Vec<usize> = (0..n).map(|i| h(v, i)).collect();
        exactly_one(&mut f, &row);
    }
    let mut pen = Qubo::new(nv);
    let mut obj = Qubo::new(nv);
    obj.constant = lambda * m as f64;
    for (e, &(u, v)) in edges.iter().enumerate() {
        for i in 0..n {
            pen.add_linear(a(e, i), 2.0);
            pen.add_quad(a(e, i), h(u, i), -1.0);
            for j in i + 1..n {
                pen.add_quad(a(e, i), h(v, j), -1.0);
            }
            obj.add_linear(a(e, i), -lambda);
        }
    }
    let decoder = Arc::new(move |l: &[SpinLabel]| {
        Witness::Subset(
            (0..m)
                .filter(|&e| !(0..n).any(|i| is_true(l[a(e, i)])))
                .collect(),
        )
    });
    let mut enc = Encoding::new("feedback_arc_set", nv, decoder)
        .with_cnf(f)
        .with_objective(obj);
    if m > 0 {
        enc = enc.with_penalty(pen);
    }
    enc.assemble(opts)
}

/// `J₁ (Σx − n/2)²` as a QUBO, the balance term used by the exhaustive
/// checks (the network realizes it with direct couplings).
pub fn partitioning_penalty(n: usize, j1: f64) -> Qubo {
    let mut q = Qubo::new(n);
    for v in 0..n {
        q.add_linear(v, j1 * (1.0 - n as f64));
        for u in v + 1..n {
            q.add_quad(v, u, 2.0 * j1);
        }
    }
    q.constant = j1 * (n * n) as f64 / 4.0;
    q
}

/// Direct couplings on Blue-restricted nodes: `J₁ = 2|E| + 1` on every
/// pair (balanced halves) and `−1` on every edge (keep neighbours
/// together). Energy is `−|E| + 1.5·cut + J₁ (n²/8 − n/2 + 1.5 d²)` with
/// `d` the imbalance. The min-cut variant drops `J₁` and clamps vertex 0
/// to T and `sink` (default `n − 1`) to F.
pub fn encode_graph_partitioning(
    n: usize,
    edges: &[(usize, usize)],
    min_cut_only: bool,
    sink: Option<usize>,
) -> Result<ReductionArtifact, ReductionError> {
    if n < 2 {
        return Err(ReductionError::Unsupported("need at least 2 vertices".into()));
    }
    if !min_cut_only && n % 2 == 1 {
        return Err(ReductionError::Infeasible(format!("{n} vertices cannot split evenly")));
    }
    let edge_set: BTreeSet<(usize, usize)> = edges
        .iter()
        .map(|&(u, v)| (u.min(v), u.max(v)))
        .collect();
    let mut g = CouplingGraph::new(n);
    let rails = Rails::add_to(&mut g, false)?;
    if !min_cut_only {
        let j1 = 2.0 * edge_set.len() as f64 + 1.0;
        for u in 0..n {
            for v in u + 1..n {
                g.couple(u, v, j1)?;
            }
        }
    }
    for &(u, v) in &edge_set {
        g.couple(u, v, -1.0)?;
    }
    let nodes: Vec<usize> = (0..n).collect();
    add_blue_restriction(&mut g, rails.b, &nodes)?;
    if min_cut_only {
        let sink = sink.unwrap_or(n - 1);
        if sink == 0 || sink >= n {
            return Err(ReductionError::Unsupported(format!("bad sink {sink}")));
        }
        g.clamp_label(0, SpinLabel::T)?;
        g.clamp_label(sink, SpinLabel::F)?;
    }
    let decoder = Arc::new(|l: &[SpinLabel]| Witness::Partition(l.iter().map(|&x| is_true(x)).collect()));
    Ok(ReductionArtifact {
        kind: "graph_partitioning",
        graph: g,
        rails,
        var_nodes: nodes,
        cnf: None,
        penalty: None,
        objective: None,
        sat_scale: 1.0,
        decoder,
        init: crate::dynamics::InitStrategy::Random,
        warnings: Vec::new(),
    })
}

/// `−Σ w (x_u + x_v − 2 x_u x_v)`, minimized at a maximum cut.
pub fn encode_max_cut(
    n: usize,
    edges: &[(usize, usize, i64)],
    opts: &EncodeOptions,
) -> Result<ReductionArtifact, ReductionError> {
    let mut obj = Qubo::new(n);
    for &(u, v, w) in edges {
        let w = w as f64;
        obj.add_linear(u, -w);
        obj.add_linear(v, -w);
        obj.add_quad(u, v, 2.0 * w);
    }
    let decoder = Arc::new(|l: &[SpinLabel]| Witness::Partition(l.iter().map(|&x| is_true(x)).collect()));
    Encoding::new("max_cut", n, decoder)
        .with_objective(obj)
        .assemble(opts)
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
    fn k4_has_4_clique() {
        let k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        assert!(brute_sat(&clique_cnf(4, &k4, 4)));
        let tri = [(0, 1), (1, 2), (0, 2)];
        assert!(!brute_sat(&clique_cnf(4, &tri, 4)));
        assert!(brute_sat(&clique_cnf(4, &tri, 3)));
    }

    #[test]
    fn node_cover_small_cases() {
        let star = [(0, 1), (0, 2), (0, 3)];
        assert!(brute_sat(&node_cover_cnf(4, &star, 1)));
        let tri = [(0, 1), (1, 2), (0, 2)];
        assert!(!brute_sat(&node_cover_cnf(3, &tri, 1)));
        assert!(brute_sat(&node_cover_cnf(3, &tri, 2)));
    }

    #[test]
    fn independent_set_decodes_complement() {
        let c4 = [(0, 1), (1, 2), (2, 3), (3, 0)];
        let art = encode_independent_set(4, &c4, 2, &EncodeOptions::default()).unwrap();
        // cover {1, 3}: slot 0 → 1, slot 1 → 3
        let mut bits = vec![false; 8];
        bits[2] = true;
        bits[3 * 2 + 1] = true;
        assert_eq!(art.decode_bits(&bits), Witness::Subset(vec![0, 2]));
        assert!(matches!(
            encode_independent_set(3, &[], 4, &EncodeOptions::default()),
            Err(ReductionError::Infeasible(_))
        ));
    }

    #[test]
    fn chromatic_block_literals() {
        let art = encode_chromatic(2, &[(0, 1)], 3, &EncodeOptions::default()).unwrap();
        let f = art.cnf.unwrap();
        assert_eq!(f.num_clauses(), 2 * 4);
        assert_eq!(f.total_literals(), 2 * 9);
    }

    #[test]
    fn greedy_bound() {
        let c5 = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)];
        assert_eq!(greedy_coloring_bound(5, &c5), 3);
        assert_eq!(greedy_coloring_bound(3, &[]), 1);
    }

    #[test]
    fn partition_energy_form() {
        use crate::potts::{discrete_energy, PottsState};
        let edges = [(0, 1), (1, 2), (2, 3)];
        let art = encode_graph_partitioning(4, &edges, false, None).unwrap();
        let j1 = 7.0;
        let mut offset = None;
        for m in 0..16u32 {
            let bits: Vec<bool> = (0..4).map(|j| m >> j & 1 == 1).collect();
            let mut s = PottsState::new(vec![SpinLabel::F; art.graph.n_nodes()]);
            for v in 0..4 {
                s.set(v, SpinLabel::from_bool(bits[v]));
            }
            art.graph.apply_clamps(&mut s);
            let e = discrete_energy(&art.graph, &s).unwrap();
            let cut = edges.iter().filter(|&&(u, v)| bits[u] != bits[v]).count() as f64;
            let ones = bits.iter().filter(|&&b| b).count() as f64;
            let d = ones - 2.0;
            let want = -3.0 + 1.5 * cut + j1 * (16.0 / 8.0 - 2.0 + 1.5 * d * d);
            // Blue links add the same constant to every T/F state
            let off = *offset.get_or_insert(e - want);
            assert!((e - want - off).abs() < 1e-9, "{bits:?}: {e} vs {want}");
        }
    }
}
