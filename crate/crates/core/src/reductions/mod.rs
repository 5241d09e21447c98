//! Encoders from catalogued problems to Potts coupling graphs, and
//! decoders from converged labels back to problem witnesses.
//!
//! Most encoders emit a CNF over Boolean decision variables plus an
//! optional QUBO. The CNF becomes a clause network; the QUBO is laid onto
//! the positive literal nodes with Weighted-Sum and Energy-AND fragments.

use std::sync::Arc;

use thiserror::Error;

use crate::cnf::{Cnf, Lit};
use crate::dynamics::InitStrategy;
use crate::netbuilder::sat::{NetworkCounts, BASE_PAIR_FACTOR};
use crate::netbuilder::{
    add_blue_restriction, build_sat_network_scaled, default_clause_weights, BuildError,
    ClauseWeights, Qubo, Rails,
};
use crate::potts::{CouplingGraph, PottsState, SpinLabel};
use crate::problem::{ProblemError, ProblemInstance, Witness};

pub mod counts;
mod graphs;
mod ip;
mod misc;
mod sequencing;
mod sets;

pub use counts::{
    measure_block, measure_cnf, params_of, predict_resources, CountParams, CountReport,
    PrintedCounts, SatCounts,
};
pub use graphs::{
    complement_edges, encode_chromatic, encode_chromatic_direct, encode_clique,
    encode_clique_cover, encode_feedback_arc_set, encode_feedback_node_set,
    encode_graph_partitioning, encode_independent_set, encode_max_cut, encode_node_cover,
    greedy_coloring_bound, partitioning_penalty,
};
pub use ip::{encode_ip01, encode_knapsack, encode_number_partitioning, ip_penalty};
pub use misc::{build_circuit, encode_logic_circuit, encode_maze, encode_sat};
pub use sequencing::{encode_hamilton, encode_shortest_path, encode_tsp};
pub use sets::{
    disjointness_edges, encode_3dm, encode_exact_cover, encode_hitting_set, encode_set_cover,
    encode_set_packing, hitting_set_dual,
};

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    /// The instance is infeasible before any network is built.
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl From<crate::potts::PottsError> for ReductionError {
    fn from(e: crate::potts::PottsError) -> Self {
        ReductionError::Build(BuildError::Potts(e))
    }
}

/// Maps the labels of the decision nodes to a witness.
pub type Decoder = Arc<dyn Fn(&[SpinLabel]) -> Witness + Send + Sync>;

#[derive(Clone, Debug)]
pub struct EncodeOptions {
    pub weights: ClauseWeights,
    pub merge_bias: bool,
}

impl Default for EncodeOptions {
    fn default() -> Self {
        EncodeOptions {
            weights: default_clause_weights(),
            merge_bias: false,
        }
    }
}

#[derive(Clone)]
pub struct ReductionArtifact {
    pub kind: &'static str,
    pub graph: CouplingGraph,
    pub rails: Rails,
    /// Node of each decision variable, in variable order.
    pub var_nodes: Vec<usize>,
    pub cnf: Option<Cnf>,
    /// Hard-constraint part of the QUBO (zero exactly on feasible points).
    pub penalty: Option<Qubo>,
    /// Objective part of the QUBO.
    pub objective: Option<Qubo>,
    /// Multiplier applied to every clause-network weight.
    pub sat_scale: f64,
    pub decoder: Decoder,
    pub init: InitStrategy,
    pub warnings: Vec<String>,
}

impl std::fmt::Debug for ReductionArtifact {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ReductionArtifact")
            .field("kind", &self.kind)
            .field("nodes", &self.graph.n_nodes())
            .field("vars", &self.var_nodes.len())
            .field("clauses", &self.cnf.as_ref().map(|c| c.num_clauses()))
            .finish()
    }
}

impl ReductionArtifact {
    pub fn n_vars(&self) -> usize {
        self.var_nodes.len()
    }

    pub fn labels(&self, s: &PottsState) -> Vec<SpinLabel> {
        self.var_nodes.iter().map(|&i| s.get(i)).collect()
    }

    /// Decision bits (T = 1) read off a state.
    pub fn bits(&self, s: &PottsState) -> Vec<bool> {
        self.var_nodes
            .iter()
            .map(|&i| s.get(i) == SpinLabel::T)
            .collect()
    }

    pub fn decode(&self, s: &PottsState) -> Witness {
        (self.decoder)(&self.labels(s))
    }

    pub fn decode_bits(&self, bits: &[bool]) -> Witness {
        let labels: Vec<SpinLabel> = bits.iter().map(|&b| SpinLabel::from_bool(b)).collect();
        (self.decoder)(&labels)
    }

    pub fn counts(&self) -> NetworkCounts {
        NetworkCounts {
            nodes: self.graph.n_nodes(),
            connections: self.graph.n_connections(),
        }
    }

    /// Penalty plus objective.
    pub fn total_qubo(&self) -> Option<Qubo> {
        combine(self.penalty.as_ref(), self.objective.as_ref(), self.n_vars())
    }

    /// True when `bits` satisfies the CNF and zeroes the penalty.
    pub fn is_feasible_bits(&self, bits: &[bool]) -> bool {
        self.cnf.as_ref().is_none_or(|f| f.is_satisfied_by(bits))
            && self
                .penalty
                .as_ref()
                .is_none_or(|p| p.evaluate(bits).abs() < 1e-9)
    }
}

fn combine(a: Option<&Qubo>, b: Option<&Qubo>, n: usize) -> Option<Qubo> {
    if a.is_none() && b.is_none() {
        return None;
    }
    let mut q = Qubo::new(n);
    for part in [a, b].into_iter().flatten() {
        q.add_scaled(part, 1.0);
    }
    Some(q)
}

/// Clause-network scale: an unsatisfied clause must flip a literal against
/// the largest objective load on any decision node, and the `x`/`x̄` pair
/// coupling must then hold that literal once the clause node releases it.
pub fn sat_scale_for(w: &ClauseWeights, qubo: Option<&Qubo>, floor: f64) -> f64 {
    let pair = BASE_PAIR_FACTOR * w.w_r;
    let load = qubo.map_or(0.0, Qubo::max_node_load);
    floor
        .max(1.0)
        .max(1.25 * load / (w.w_r - pair))
        .max(1.25 * load / pair)
}

/// Decision-variable encoding awaiting assembly.
pub(crate) struct Encoding {
    pub kind: &'static str,
    pub n_vars: usize,
    pub cnf: Option<Cnf>,
    pub penalty: Option<Qubo>,
    pub objective: Option<Qubo>,
    pub decoder: Decoder,
    pub scale_floor: f64,
    pub warnings: Vec<String>,
}

impl Encoding {
    pub fn new(kind: &'static str, n_vars: usize, decoder: Decoder) -> Self {
        Encoding {
            kind,
            n_vars,
            cnf: None,
            penalty: None,
            objective: None,
            decoder,
            scale_floor: 1.0,
            warnings: Vec::new(),
        }
    }

    pub fn with_cnf(mut self, cnf: Cnf) -> Self {
        self.cnf = Some(cnf);
        self
    }

    pub fn with_penalty(mut self, q: Qubo) -> Self {
        self.penalty = Some(q);
        self
    }

    pub fn with_objective(mut self, q: Qubo) -> Self {
        self.objective = Some(q);
        self
    }

    /// Builds the coupling graph. With a CNF the decision variables are the
    /// positive literal nodes of a clause network; otherwise they are bare
    /// nodes followed by unlinked rails. Decision nodes carrying QUBO terms
    /// are Blue-restricted.
    pub fn assemble(self, opts: &EncodeOptions) -> Result<ReductionArtifact, ReductionError> {
        let total = combine(self.penalty.as_ref(), self.objective.as_ref(), self.n_vars);
        let (mut g, rails, var_nodes, scale) = match &self.cnf {
            Some(f) => {
                if let Some(ci) = f.clauses.iter().position(Vec::is_empty) {
                    return Err(ReductionError::Infeasible(format!(
                        "clause {ci} is empty"
                    )));
                }
                let scale = sat_scale_for(&opts.weights, total.as_ref(), self.scale_floor);
                let net = build_sat_network_scaled(f, &opts.weights, opts.merge_bias, scale)?;
                let vars: Vec<usize> = net.vars.iter().map(|&(x, _)| x).collect();
                (net.graph, net.rails, vars, scale)
            }
            None => {
                let mut g = CouplingGraph::new(self.n_vars);
                let rails = Rails::add_to(&mut g, false)?;
                (g, rails, (0..self.n_vars).collect::<Vec<usize>>(), 1.0)
            }
        };
        if let Some(q) = &total {
            q.add_to_graph(&mut g, &var_nodes, rails.t)?;
            add_blue_restriction(&mut g, rails.b, &var_nodes)?;
        }
        Ok(ReductionArtifact {
            kind: self.kind,
            graph: g,
            rails,
            var_nodes,
            cnf: self.cnf,
            penalty: self.penalty,
            objective: self.objective,
            sat_scale: scale,
            decoder: self.decoder,
            init: InitStrategy::Random,
            warnings: self.warnings,
        })
    }
}

pub(crate) fn at_least_one(f: &mut Cnf, vars: impl IntoIterator<Item = usize>) {
    f.add_clause(vars.into_iter().map(Lit::pos));
}

pub(crate) fn at_most_one(f: &mut Cnf, vars: &[usize]) {
    for (a, &i) in vars.iter().enumerate() {
        for &j in &vars[a + 1..] {
            f.add_clause([Lit::neg(i), Lit::neg(j)]);
        }
    }
}

pub(crate) fn exactly_one(f: &mut Cnf, vars: &[usize]) {
    at_least_one(f, vars.iter().copied());
    at_most_one(f, vars);
}

pub(crate) fn is_true(l: SpinLabel) -> bool {
    l == SpinLabel::T
}

/// Indices whose label is T.
pub(crate) fn true_indices(labels: &[SpinLabel]) -> Vec<usize> {
    labels
        .iter()
        .enumerate()
        .filter(|(_, &l)| is_true(l))
        .map(|(i, _)| i)
        .collect()
}

/// Encodes any instance with its default parameters.
pub fn encode(
    inst: &ProblemInstance,
    opts: &EncodeOptions,
) -> Result<ReductionArtifact, ReductionError> {
    inst.validate()?;
    match inst {
        ProblemInstance::Sat { .. } => encode_sat(&inst.cnf().expect("sat instance"), opts),
        ProblemInstance::Ip01 { c, b, a, lambda } => {
            encode_ip01(c, b, a.as_deref(), *lambda, opts)
        }
        ProblemInstance::Hamilton {
            n,
            edges,
            directed,
            circle,
        } => encode_hamilton(*n, edges, *circle, *directed, opts),
        ProblemInstance::Tsp { weights, .. } => encode_tsp(weights, opts),
        ProblemInstance::Clique { n, edges, k } => encode_clique(*n, edges, *k, opts),
        ProblemInstance::SetPacking { universe, sets, k } => {
            encode_set_packing(*universe, sets, *k, opts)
        }
        ProblemInstance::NodeCover { n, edges, k } => encode_node_cover(*n, edges, *k, opts),
        ProblemInstance::SetCover { universe, sets, .. } => {
            encode_set_cover(*universe, sets, opts)
        }
        ProblemInstance::Chromatic { n, edges, k } => {
            let k = k.unwrap_or_else(|| greedy_coloring_bound(*n, edges));
            if k <= 3 {
                encode_chromatic_direct(*n, edges, k)
            } else {
                encode_chromatic(*n, edges, k, opts)
            }
        }
        ProblemInstance::FeedbackNodeSet {
            n, edges, lambda, ..
        } => encode_feedback_node_set(*n, edges, *lambda, opts),
        ProblemInstance::FeedbackArcSet {
            n, edges, lambda, ..
        } => encode_feedback_arc_set(*n, edges, *lambda, opts),
        ProblemInstance::CliqueCover { n, edges, k } => {
            encode_clique_cover(*n, edges, *k, opts)
        }
        ProblemInstance::ExactCover { universe, sets } => {
            encode_exact_cover(*universe, sets, opts)
        }
        ProblemInstance::HittingSet { universe, sets, .. } => {
            encode_hitting_set(*universe, sets, opts)
        }
        ProblemInstance::ThreeDm { t, triples } => encode_3dm(*t, triples, opts),
        ProblemInstance::NumberPartitioning { numbers } => {
            encode_number_partitioning(numbers, opts)
        }
        ProblemInstance::Knapsack { a, b } => encode_knapsack(a, *b, opts),
        ProblemInstance::GraphPartitioning {
            n,
            edges,
            min_cut_only,
        } => encode_graph_partitioning(*n, edges, *min_cut_only, None),
        ProblemInstance::IndependentSet { n, edges, k } => {
            encode_independent_set(*n, edges, *k, opts)
        }
        ProblemInstance::MaxCut { n, edges, .. } => encode_max_cut(*n, edges, opts),
        ProblemInstance::ShortestPath { n, edges, s, t, k } => {
            encode_shortest_path(*n, edges, *s, *t, *k, opts)
        }
        ProblemInstance::Maze(m) => encode_maze(m),
        ProblemInstance::LogicCircuit { inputs, gates } => encode_logic_circuit(*inputs, gates),
    }
}
