//! Set systems: packing, covering, exact cover, hitting set and 3DM.

use std::sync::Arc;

use crate::cnf::{Cnf, Lit};
use crate::netbuilder::Qubo;
use crate::potts::SpinLabel;
use crate::problem::Witness;

use super::{
    at_most_one, encode_clique, true_indices, EncodeOptions, Encoding, ReductionArtifact,
    ReductionError,
};

/// Edge `(i, j)` iff sets `i` and `j` are disjoint.
pub fn disjointness_edges(sets: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if !sets[i].iter().any(|e| sets[j].contains(e)) {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// `k` pairwise disjoint sets, as a `k`-clique of the disjointness graph.
pub fn encode_set_packing(
    _universe: usize,
    sets: &[Vec<usize>],
    k: usize,
    opts: &EncodeOptions,
) -> Result<ReductionArtifact, ReductionError> {
    let mut art = encode_clique(sets.len(), &disjointness_edges(sets), k, opts)?;
    art.kind = "set_packing";
    Ok(art)
}

/// Sets containing each element.
fn occurrences(universe: usize, sets: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut idx = vec![Vec::new(); universe];
    for (j, s) in sets.iter().enumerate() {
        for &e in s {
            if !idx[e].contains(&j) {
                idx[e].push(j);
            }
        }
    }
    idx
}

fn subset_decoder() -> super::Decoder {
    Arc::new(|l: &[SpinLabel]| Witness::Subset(true_indices(l)))
}

/// One clause per element over the sets holding it; objective `Σ x_j`.
pub fn encode_set_cover(
    universe: usize,
    sets: &[Vec<usize>],
    opts: &EncodeOptions,
) -> Result<ReductionArtifact, ReductionError> {
    let m = sets.len();
    let mut f = Cnf::new(m);
    for (e, idx) in occurrences(universe, sets).into_iter().enumerate() {
        if idx.is_empty() {
            return Err(ReductionError::Infeasible(format!("element {e} lies in no set")));
        }
        f.add_clause(idx.into_iter().map(Lit::pos));
    }
    let mut obj = Qubo::new(m);
    for j in 0..m {
        obj.add_linear(j, 1.0);
    }
    Encoding::new("set_cover", m, subset_decoder())
        .with_cnf(f)
        .with_objective(obj)
        .assemble(opts)
}

/// Sets `S_e = {i | e ∈ C_i}`: a hitting set of the `C_i` is a cover of
/// `{0..|C|}` by the `S_e`.
pub fn hitting_set_dual(universe: usize, sets: &[Vec<usize>]) -> Vec<Vec<usize>> {
    occurrences(universe, sets)
}

pub fn encode_hitting_set(
    universe: usize,
    sets: &[Vec<usize>],
    opts: &EncodeOptions,
) -> Result<ReductionArtifact, ReductionError> {
    let dual = hitting_set_dual(universe, sets);
    let mut art = encode_set_cover(sets.len(), &dual, opts)?;
    art.kind = "hitting_set";
    Ok(art)
}

/// Per element: at least one and at most one of the sets holding it.
pub(crate) fn exact_cover_cnf(universe: usize, sets: &[Vec<usize>]) -> Cnf {
    let mut f = Cnf::new(sets.len());
    for idx in occurrences(universe, sets) {
        f.add_clause(idx.iter().map(|&j| Lit::pos(j)));
        at_most_one(&mut f, &idx);
    }
    f
}

pub fn encode_exact_cover(
    universe: usize,
    sets: &[Vec<usize>],
    opts: &EncodeOptions,
) -> Result<ReductionArtifact, ReductionError> {
    Encoding::new("exact_cover", sets.len(), subset_decoder())
        .with_cnf(exact_cover_cnf(universe, sets))
        .assemble(opts)
}

/// Set packing of `|T|` triples over three disjoint copies of `T`.
pub fn encode_3dm(
    t: usize,
    triples: &[(usize, usize, usize)],
    opts: &EncodeOptions,
) -> Result<ReductionArtifact, ReductionError> {
    if t == 0 {
        return Err(ReductionError::Unsupported("empty T".into()));
    }
    let sets: Vec<Vec<usize>> = triples
        .iter()
        .map(|&(a, b, c)| vec![a, t + b, 2 * t + c])
        .collect();
    let mut art = encode_set_packing(3 * t, &sets, t, opts)?;
    art.kind = "three_dm";
    Ok(art)
}
