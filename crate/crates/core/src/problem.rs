//! Problem instances, witnesses and their JSON forms.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{Cnf, Lit};
use crate::netbuilder::Maze;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("unsupported schema version {0}")]
    Schema(u32),
    #[error("malformed instance document: {0}")]
    Parse(String),
}

fn default_lambda() -> f64 {
    0.5
}

/// One gate of a circuit; `inputs` index circuit inputs first, then the
/// outputs of earlier gates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateSpec {
    pub gate: String,
    pub inputs: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProblemInstance {
    /// Clauses as DIMACS integers.
    Sat {
        num_vars: usize,
        clauses: Vec<Vec<i64>>,
    },
    Ip01 {
        c: Vec<Vec<i64>>,
        b: Vec<i64>,
        #[serde(default)]
        a: Option<Vec<i64>>,
        #[serde(default = "default_lambda")]
        lambda: f64,
    },
    Hamilton {
        n: usize,
        edges: Vec<(usize, usize)>,
        #[serde(default)]
        directed: bool,
        #[serde(default)]
        circle: bool,
    },
    Tsp {
        weights: Vec<Vec<f64>>,
        #[serde(default)]
        bound: Option<f64>,
    },
    Clique {
        n: usize,
        edges: Vec<(usize, usize)>,
        k: usize,
    },
    SetPacking {
        universe: usize,
        sets: Vec<Vec<usize>>,
        k: usize,
    },
    NodeCover {
        n: usize,
        edges: Vec<(usize, usize)>,
        k: usize,
    },
    SetCover {
        universe: usize,
        sets: Vec<Vec<usize>>,
        #[serde(default)]
        k: Option<usize>,
    },
    Chromatic {
        n: usize,
        edges: Vec<(usize, usize)>,
        #[serde(default)]
        k: Option<usize>,
    },
    FeedbackNodeSet {
        n: usize,
        edges: Vec<(usize, usize)>,
        #[serde(default)]
        k: Option<usize>,
        #[serde(default = "default_lambda")]
        lambda: f64,
    },
    FeedbackArcSet {
        n: usize,
        edges: Vec<(usize, usize)>,
        #[serde(default)]
        k: Option<usize>,
        #[serde(default = "default_lambda")]
        lambda: f64,
    },
    CliqueCover {
        n: usize,
        edges: Vec<(usize, usize)>,
        k: usize,
    },
    ExactCover {
        universe: usize,
        sets: Vec<Vec<usize>>,
    },
    HittingSet {
        universe: usize,
        sets: Vec<Vec<usize>>,
        k: usize,
    },
    ThreeDm {
        t: usize,
        triples: Vec<(usize, usize, usize)>,
    },
    NumberPartitioning {
        numbers: Vec<u64>,
    },
    Knapsack {
        a: Vec<i64>,
        b: i64,
    },
    GraphPartitioning {
        n: usize,
        edges: Vec<(usize, usize)>,
        #[serde(default)]
        min_cut_only: bool,
    },
    IndependentSet {
        n: usize,
        edges: Vec<(usize, usize)>,
        k: usize,
    },
    MaxCut {
        n: usize,
        edges: Vec<(usize, usize, i64)>,
        #[serde(default)]
        threshold: Option<i64>,
    },
    ShortestPath {
        n: usize,
        edges: Vec<(usize, usize)>,
        s: usize,
        t: usize,
        k: usize,
    },
    Maze(Maze),
    LogicCircuit {
        inputs: usize,
        gates: Vec<GateSpec>,
    },
}

/// Whether the objective attached to a witness is minimized or maximized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
    /// Pure decision problem.
    None,
}

impl ProblemInstance {
    pub fn kind(&self) -> &'static str {
        match self {
            ProblemInstance::Sat { .. } => "sat",
            ProblemInstance::Ip01 { .. } => "ip01",
            ProblemInstance::Hamilton { .. } => "hamilton",
            ProblemInstance::Tsp { .. } => "tsp",
            ProblemInstance::Clique { .. } => "clique",
            ProblemInstance::SetPacking { .. } => "set_packing",
            ProblemInstance::NodeCover { .. } => "node_cover",
            ProblemInstance::SetCover { .. } => "set_cover",
            ProblemInstance::Chromatic { .. } => "chromatic",
            ProblemInstance::FeedbackNodeSet { .. } => "feedback_node_set",
            ProblemInstance::FeedbackArcSet { .. } => "feedback_arc_set",
            ProblemInstance::CliqueCover { .. } => "clique_cover",
            ProblemInstance::ExactCover { .. } => "exact_cover",
            ProblemInstance::HittingSet { .. } => "hitting_set",
            ProblemInstance::ThreeDm { .. } => "three_dm",
            ProblemInstance::NumberPartitioning { .. } => "number_partitioning",
            ProblemInstance::Knapsack { .. } => "knapsack",
            ProblemInstance::GraphPartitioning { .. } => "graph_partitioning",
            ProblemInstance::IndependentSet { .. } => "independent_set",
            ProblemInstance::MaxCut { .. } => "max_cut",
            ProblemInstance::ShortestPath { .. } => "shortest_path",
            ProblemInstance::Maze(_) => "maze",
            ProblemInstance::LogicCircuit { .. } => "logic_circuit",
        }
    }

    pub fn sense(&self) -> Sense {
        match self {
            ProblemInstance::Ip01 { a: Some(_), .. }
            | ProblemInstance::Tsp { .. }
            | ProblemInstance::SetCover { .. }
            | ProblemInstance::Chromatic { .. }
            | ProblemInstance::FeedbackNodeSet { .. }
            | ProblemInstance::FeedbackArcSet { .. }
            | ProblemInstance::HittingSet { .. }
            | ProblemInstance::GraphPartitioning { .. }
            | ProblemInstance::ShortestPath { .. } => Sense::Minimize,
            ProblemInstance::MaxCut { .. } | ProblemInstance::IndependentSet { .. } => {
                Sense::Maximize
            }
            _ => Sense::None,
        }
    }

    pub fn from_cnf(f: &Cnf) -> Self {
        ProblemInstance::Sat {
            num_vars: f.num_vars,
            clauses: f
                .clauses
                .iter()
                .map(|c| c.iter().map(|l| l.to_dimacs()).collect())
                .collect(),
        }
    }

    /// The formula of a `sat` instance.
    pub fn cnf(&self) -> Option<Cnf> {
        match self {
            ProblemInstance::Sat { num_vars, clauses } => Some(Cnf {
                num_vars: *num_vars,
                clauses: clauses
                    .iter()
                    .map(|c| c.iter().filter_map(|&x| Lit::from_dimacs(x)).collect())
                    .collect(),
            }),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), ProblemError> {
        let bad = |m: String| Err(ProblemError::Invalid(m));
        let check_edges = |n: usize, edges: &[(usize, usize)]| -> Result<(), ProblemError> {
            for &(u, v) in edges {
                if u >= n || v >= n {
                    return Err(ProblemError::Invalid(format!(
                        "edge ({u}, {v}) outside {n} vertices"
                    )));
                }
                if u == v {
                    return Err(ProblemError::Invalid(format!("self-loop on vertex {u}")));
                }
            }
            Ok(())
        };
        let check_sets = |universe: usize, sets: &[Vec<usize>]| -> Result<(), ProblemError> {
            for (i, s) in sets.iter().enumerate() {
                if let Some(e) = s.iter().find(|&&e| e >= universe) {
                    return Err(ProblemError::Invalid(format!(
                        "set {i} holds element {e} outside universe of {universe}"
                    )));
                }
            }
            Ok(())
        };
        match self {
            ProblemInstance::Sat { num_vars, clauses } => {
                for c in clauses {
                    for &x in c {
                        if x == 0 || x.unsigned_abs() as usize > *num_vars {
                            return bad(format!("literal {x} outside {num_vars} variables"));
                        }
                    }
                }
            }
            ProblemInstance::Ip01 { c, b, a, lambda } => {
                if c.len() != b.len() {
                    return bad(format!("C has {} rows, b has {}", c.len(), b.len()));
                }
                let n = c.first().map_or(0, Vec::len);
                if c.iter().any(|r| r.len() != n) {
                    return bad("ragged C".into());
                }
                if let Some(a) = a {
                    if a.len() != n {
                        return bad(format!("a has {} entries for {n} variables", a.len()));
                    }
                    if !(*lambda > 0.0 && *lambda < 1.0) {
                        return bad(format!("lambda {lambda} outside (0, 1)"));
                    }
                }
            }
            ProblemInstance::Hamilton { n, edges, .. } => {
                if *n < 2 {
                    return bad("need at least 2 vertices".into());
                }
                check_edges(*n, edges)?;
            }
            ProblemInstance::Tsp { weights, bound } => {
                let n = weights.len();
                if n < 3 {
                    return bad("need at least 3 cities".into());
                }
                for row in weights {
                    if row.len() != n {
                        return bad("weight matrix is not square".into());
                    }
                    if row.iter().any(|w| !w.is_finite() || *w < 0.0) {
                        return bad("weights must be finite and non-negative".into());
                    }
                }
                if let Some(b) = bound {
                    if !b.is_finite() {
                        return bad("bound must be finite".into());
                    }
                }
            }
            ProblemInstance::Clique { n, edges, .. }
            | ProblemInstance::NodeCover { n, edges, .. }
            | ProblemInstance::Chromatic { n, edges, .. }
            | ProblemInstance::CliqueCover { n, edges, .. }
            | ProblemInstance::GraphPartitioning { n, edges, .. }
            | ProblemInstance::IndependentSet { n, edges, .. } => check_edges(*n, edges)?,
            ProblemInstance::FeedbackNodeSet { n, edges, lambda, .. }
            | ProblemInstance::FeedbackArcSet { n, edges, lambda, .. } => {
                check_edges(*n, edges)?;
                if !(*lambda > 0.0 && *lambda < 1.0) {
                    return bad(format!("lambda {lambda} outside (0, 1)"));
                }
            }
            ProblemInstance::SetPacking { universe, sets, .. }
            | ProblemInstance::SetCover { universe, sets, .. }
            | ProblemInstance::ExactCover { universe, sets }
            | ProblemInstance::HittingSet { universe, sets, .. } => check_sets(*universe, sets)?,
            ProblemInstance::ThreeDm { t, triples } => {
                if triples.iter().any(|&(a, b, c)| a >= *t || b >= *t || c >= *t) {
                    return bad(format!("triple coordinate outside T of size {t}"));
                }
            }
            ProblemInstance::NumberPartitioning { numbers } => {
                if numbers.iter().any(|&s| s == 0) {
                    return bad("numbers must be positive".into());
                }
            }
            ProblemInstance::Knapsack { .. } => {}
            ProblemInstance::MaxCut { n, edges, .. } => {
                let plain: Vec<(usize, usize)> = edges.iter().map(|&(u, v, _)| (u, v)).collect();
                check_edges(*n, &plain)?;
            }
            ProblemInstance::ShortestPath { n, edges, s, t, k } => {
                check_edges(*n, edges)?;
                if s >= n || t >= n {
                    return bad("source or target outside the graph".into());
                }
                if *k == 0 {
                    return bad("K must be positive".into());
                }
            }
            ProblemInstance::Maze(m) => m.validate().map_err(|e| ProblemError::Invalid(e.to_string()))?,
            ProblemInstance::LogicCircuit { inputs, gates } => {
                for (gi, g) in gates.iter().enumerate() {
                    if let Some(&i) = g.inputs.iter().find(|&&i| i >= inputs + gi) {
                        return bad(format!("gate {gi} reads undefined signal {i}"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("instance serializes");
        if let serde_json::Value::Object(m) = &mut v {
            m.insert("schema".into(), SCHEMA_VERSION.into());
        }
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ProblemError> {
        let mut v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| ProblemError::Parse(e.to_string()))?;
        if let serde_json::Value::Object(m) = &mut v {
            if let Some(s) = m.remove("schema") {
                let s = s.as_u64().unwrap_or(0) as u32;
                if s != SCHEMA_VERSION {
                    return Err(ProblemError::Schema(s));
                }
            }
        }
        let inst: ProblemInstance =
            serde_json::from_value(v).map_err(|e| ProblemError::Parse(e.to_string()))?;
        inst.validate()?;
        Ok(inst)
    }
}

/// Candidate solution of a problem instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// Truth value per variable (SAT, IP, knapsack).
    Assignment(Vec<bool>),
    /// Vertices in visiting order (Hamilton, TSP, shortest path, maze).
    Order(Vec<usize>),
    /// Selected indices (vertices, sets, elements, triples or arcs).
    Subset(Vec<usize>),
    /// Colour per vertex.
    Coloring(Vec<usize>),
    /// Side per vertex or number.
    Partition(Vec<bool>),
    /// Gate outputs for every input combination, inputs counted in
    /// binary with input 0 as the low bit.
    TruthTable(Vec<Vec<bool>>),
}

impl Witness {
    pub fn variant(&self) -> &'static str {
        match self {
            Witness::Assignment(_) => "assignment",
            Witness::Order(_) => "order",
            Witness::Subset(_) => "subset",
            Witness::Coloring(_) => "coloring",
            Witness::Partition(_) => "partition",
            Witness::TruthTable(_) => "truth_table",
        }
    }
}

/// Distinct undirected neighbour sets.
pub fn undirected_adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); n];
    for &(u, v) in edges {
        if u != v {
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    adj
}

/// Distinct out-neighbour sets.
pub fn directed_adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); n];
    for &(u, v) in edges {
        if u != v {
            adj[u].insert(v);
        }
    }
    adj
}
