//! Objective fragments on {T, F}-restricted nodes.
//!
//! With `x = 1` for T and `x = 0` for F:
//! - Energy-AND on a pair with weight `w` contributes `w (3 x_i x_j − 1)`.
//! - Weighted-Sum with coefficient `c` contributes `c z`, `z ∈ {−0.5, 1}`.

use std::collections::BTreeMap;

use crate::potts::{CouplingGraph, SpinLabel};

use super::BuildError;

/// Adds one F-clamped auxiliary node per distinct pair, with `+w` on the
/// pair and `−w` on both auxiliary links. Duplicate pairs (in either
/// order) are merged by summing weights. Returns the auxiliary nodes in
/// ascending pair order.
pub fn add_energy_and(
    g: &mut CouplingGraph,
    pairs: &[(usize, usize, f64)],
) -> Result<Vec<(usize, usize, usize)>, BuildError> {
    let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for &(i, j, w) in pairs {
        if i == j {
            return Err(BuildError::Fragment(format!(
                "Energy-AND pair ({i}, {i}) is a linear term"
            )));
        }
        *merged.entry((i.min(j), i.max(j))).or_insert(0.0) += w;
    }
    let mut out = Vec::with_capacity(merged.len());
    for ((i, j), w) in merged {
        let aux = g.add_node();
        g.clamp_label(aux, SpinLabel::F)?;
        g.couple(i, j, w)?;
        g.couple(i, aux, -w)?;
        g.couple(j, aux, -w)?;
        out.push((i, j, aux));
    }
    Ok(out)
}

/// Couples each node to the T-clamped `true_node` with its coefficient.
pub fn add_weighted_sum(
    g: &mut CouplingGraph,
    true_node: usize,
    terms: &[(usize, f64)],
) -> Result<(), BuildError> {
    if g.clamp_of(true_node).map(|c| c.label()) != Some(SpinLabel::T) {
        return Err(BuildError::Fragment(format!(
            "node {true_node} is not a True source"
        )));
    }
    for &(i, c) in terms {
        g.couple(i, true_node, c)?;
    }
    Ok(())
}

/// Blue coupling strong enough that a node never takes B: `100 ×` its
/// largest incoming weight, raised to `2 Σ|w|` if that is larger.
pub fn blue_weight_for(g: &CouplingGraph, node: usize, exclude: usize) -> f64 {
    let incoming = &g.adjacency().incoming[node];
    let mut max = 0.0f64;
    let mut sum = 0.0;
    for &(j, w) in incoming {
        if j != exclude {
            max = max.max(w.abs());
            sum += w.abs();
        }
    }
    if let Some(b) = g.bias_of(node) {
        max = max.max(b.magnitude);
        sum += b.magnitude;
    }
    let w = (100.0 * max).max(2.0 * sum);
    if w == 0.0 {
        1.0
    } else {
        w
    }
}

/// Restricts each node to {T, F} by coupling it to the B-clamped
/// `blue_node`. Call after all other couplings on the nodes are in place.
pub fn add_blue_restriction(
    g: &mut CouplingGraph,
    blue_node: usize,
    nodes: &[usize],
) -> Result<(), BuildError> {
    if g.clamp_of(blue_node).map(|c| c.label()) != Some(SpinLabel::B) {
        return Err(BuildError::Fragment(format!(
            "node {blue_node} is not a Blue source"
        )));
    }
    let weights: Vec<f64> = nodes
        .iter()
        .map(|&i| blue_weight_for(g, i, blue_node))
        .collect();
    for (&i, w) in nodes.iter().zip(weights) {
        g.couple(i, blue_node, w)?;
    }
    Ok(())
}

/// A standalone fragment over nodes `0..n` plus its auxiliary sources.
#[derive(Clone, Debug)]
pub struct Fragment {
    pub graph: CouplingGraph,
    pub n_vars: usize,
    pub sources: Vec<usize>,
}

pub fn build_energy_and(n: usize, pairs: &[(usize, usize, f64)]) -> Result<Fragment, BuildError> {
    let mut g = CouplingGraph::new(n);
    let aux = add_energy_and(&mut g, pairs)?;
    Ok(Fragment {
        graph: g,
        n_vars: n,
        sources: aux.into_iter().map(|(_, _, a)| a).collect(),
    })
}

pub fn build_weighted_sum(n: usize, terms: &[(usize, f64)]) -> Result<Fragment, BuildError> {
    let mut g = CouplingGraph::new(n);
    let t = g.add_node();
    g.clamp_label(t, SpinLabel::T)?;
    add_weighted_sum(&mut g, t, terms)?;
    Ok(Fragment {
        graph: g,
        n_vars: n,
        sources: vec![t],
    })
}

/// `Σ linear_j x_j + Σ_{j<k} quad_jk x_j x_k + constant` over `x ∈ {0,1}^n`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Qubo {
    pub n: usize,
    pub linear: Vec<f64>,
    pub quad: BTreeMap<(usize, usize), f64>,
    pub constant: f64,
}

impl Qubo {
    pub fn new(n: usize) -> Self {
        Qubo {
            n,
            linear: vec![0.0; n],
            quad: BTreeMap::new(),
            constant: 0.0,
        }
    }

    pub fn add_linear(&mut self, j: usize, c: f64) {
        self.linear[j] += c;
    }

    /// Adds `c x_j x_k`; a diagonal term becomes linear since `x² = x`.
    pub fn add_quad(&mut self, j: usize, k: usize, c: f64) {
        if j == k {
            self.linear[j] += c;
        } else {
            *self.quad.entry((j.min(k), j.max(k))).or_insert(0.0) += c;
        }
    }

    /// Registers every pair, so a zero coefficient still yields a
    /// fragment.
    pub fn touch_all_pairs(&mut self) {
        for j in 0..self.n {
            for k in j + 1..self.n {
                self.quad.entry((j, k)).or_insert(0.0);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Qubo, s: f64) {
        for j in 0..self.n {
            self.linear[j] += s * other.linear[j];
        }
        for (&p, &c) in &other.quad {
            *self.quad.entry(p).or_insert(0.0) += s * c;
        }
        self.constant += s * other.constant;
    }

    pub fn evaluate(&self, x: &[bool]) -> f64 {
        let mut e = self.constant;
        for j in 0..self.n {
            if x[j] {
                e += self.linear[j];
            }
        }
        for (&(j, k), &c) in &self.quad {
            if x[j] && x[k] {
                e += c;
            }
        }
        e
    }

    /// Fragment energy minus three times the QUBO value (without the
    /// constant): `−Σ linear − Σ quad`.
    pub fn fragment_offset(&self) -> f64 {
        -self.linear.iter().sum::<f64>() - self.quad.values().sum::<f64>()
    }

    /// Largest per-variable sum of absolute fragment weights
    /// (`2|q_j|` for the linear link, `2|Q|` per pair for pair and aux).
    pub fn max_node_load(&self) -> f64 {
        let mut load: Vec<f64> = self.linear.iter().map(|c| 2.0 * c.abs()).collect();
        for (&(j, k), &c) in &self.quad {
            load[j] += 2.0 * c.abs();
            load[k] += 2.0 * c.abs();
        }
        load.into_iter().fold(0.0, f64::max)
    }

    /// Adds Weighted-Sum terms `2 q_j` and Energy-AND terms `Q_jk` so the
    /// fragment energy equals `3 × (QUBO − constant) + fragment_offset()`.
    pub fn add_to_graph(
        &self,
        g: &mut CouplingGraph,
        nodes: &[usize],
        true_node: usize,
    ) -> Result<(), BuildError> {
        let terms: Vec<(usize, f64)> = (0..self.n)
            .map(|j| (nodes[j], 2.0 * self.linear[j]))
            .collect();
        add_weighted_sum(g, true_node, &terms)?;
        let pairs: Vec<(usize, usize, f64)> = self
            .quad
            .iter()
            .map(|(&(j, k), &c)| (nodes[j], nodes[k], c))
            .collect();
        add_energy_and(g, &pairs)?;
        Ok(())
    }
}
