//! End-to-end solving: encode, run the dynamics, decode, check.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{multistart_all, run_once, DynamicsError, Engine, InitStrategy, RunTrace, SweepConfig};
use crate::oracle::{better, check, objective};
use crate::potts::SpinLabel;
use crate::problem::{ProblemInstance, Witness};
use crate::reductions::{
    build_circuit, encode, encode_graph_partitioning, greedy_coloring_bound, EncodeOptions,
    ReductionArtifact, ReductionError,
};

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub engine: Engine,
    pub restarts: usize,
    pub encode: EncodeOptions,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            engine: Engine::Hopfield(SweepConfig::default()),
            restarts: 32,
            encode: EncodeOptions::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Solution {
    pub kind: String,
    pub feasible: bool,
    pub witness: Option<Witness>,
    pub objective: Option<f64>,
    pub energy: Option<f64>,
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub trace: Option<RunTrace>,
}

impl Solution {
    fn none(inst: &ProblemInstance, warnings: Vec<String>) -> Self {
        Solution {
            kind: inst.kind().to_string(),
            feasible: false,
            witness: None,
            objective: None,
            energy: None,
            seed: None,
            warnings,
            trace: None,
        }
    }

    /// Feasible first, then objective, then lower energy.
    fn beats(&self, other: &Solution, inst: &ProblemInstance) -> bool {
        if self.feasible != other.feasible {
            return self.feasible;
        }
        if let (Some(a), Some(b)) = (self.objective, other.objective) {
            if better(inst, a, b) {
                return true;
            }
            if better(inst, b, a) {
                return false;
            }
        }
        match (self.energy, other.energy) {
            (Some(a), Some(b)) => a < b - 1e-9,
            (Some(_), None) => true,
            _ => false,
        }
    }
}

/// Runs every restart on `art` and keeps the best decoded run.
pub fn run_artifact(
    inst: &ProblemInstance,
    art: &ReductionArtifact,
    cfg: &SolveConfig,
) -> Result<Solution, SolveError> {
    let runs = multistart_all(&art.graph, cfg.restarts, &cfg.engine, &art.init)?;
    let mut best: Option<Solution> = None;
    for r in runs {
        let w = art.decode(&r.final_state);
        let feasible = check(inst, &w).unwrap_or(false);
        let sol = Solution {
            kind: inst.kind().to_string(),
            feasible,
            objective: if feasible { objective(inst, &w) } else { None },
            witness: Some(w),
            energy: Some(r.final_energy()),
            seed: Some(r.seed),
            warnings: art.warnings.clone(),
            trace: Some(r),
        };
        if best.as_ref().is_none_or(|b| sol.beats(b, inst)) {
            best = Some(sol);
        }
    }
    Ok(best.expect("at least one restart"))
}

fn encode_and_run(inst: &ProblemInstance, cfg: &SolveConfig) -> Result<Solution, SolveError> {
    match encode(inst, &cfg.encode) {
        Ok(art) => run_artifact(inst, &art, cfg),
        Err(ReductionError::Infeasible(why)) => Ok(Solution::none(inst, vec![why])),
        Err(e) => Err(e.into()),
    }
}

pub fn solve(inst: &ProblemInstance, cfg: &SolveConfig) -> Result<Solution, SolveError> {
    inst.validate().map_err(ReductionError::from)?;
    match inst {
        ProblemInstance::Chromatic { n, edges, k: None } => {
            // smallest k first; the first feasible colouring wins
            let lo = if edges.is_empty() { 1 } else { 2 };
            let hi = greedy_coloring_bound(*n, edges).max(lo);
            let mut last = Solution::none(inst, Vec::new());
            for k in lo..=hi {
                let fixed = ProblemInstance::Chromatic {
                    n: *n,
                    edges: edges.clone(),
                    k: Some(k),
                };
                let mut sol = encode_and_run(&fixed, cfg)?;
                sol.feasible = sol.witness.as_ref().is_some_and(|w| check(inst, w).unwrap_or(false));
                if sol.feasible {
                    return Ok(sol);
                }
                last = sol;
            }
            Ok(last)
        }
        ProblemInstance::GraphPartitioning {
            n,
            edges,
            min_cut_only: true,
        } => {
            let mut best: Option<Solution> = None;
            for sink in 1..*n {
                let art = encode_graph_partitioning(*n, edges, true, Some(sink))?;
                let sol = run_artifact(inst, &art, cfg)?;
                if best.as_ref().is_none_or(|b| sol.beats(b, inst)) {
                    best = Some(sol);
                }
            }
            Ok(best.expect("n >= 2"))
        }
        ProblemInstance::LogicCircuit { inputs, gates } => {
            let c = build_circuit(*inputs, gates)?;
            let mut table = Vec::with_capacity(1 << inputs);
            for row in 0..1usize << inputs {
                let values: Vec<bool> = (0..*inputs).map(|i| row >> i & 1 == 1).collect();
                let out = match &cfg.engine {
                    Engine::Hopfield(_) => c.evaluate(&values).map_err(ReductionError::from)?,
                    Engine::Kuramoto(_) => {
                        let mut g = c.graph.clone();
                        for (&i, &v) in c.inputs.iter().zip(&values) {
                            g.clamp_label(i, SpinLabel::from_bool(v)).map_err(ReductionError::from)?;
                        }
                        let r = run_once(&g, &cfg.engine, &InitStrategy::Uniform(SpinLabel::F), cfg.engine.seed())?;
                        c.gates
                            .iter()
                            .map(|gate| match r.final_state.get(gate.output) {
                                SpinLabel::T => Some(true),
                                SpinLabel::F => Some(false),
                                SpinLabel::B => None,
                            })
                            .collect()
                    }
                };
                match out {
                    Some(o) => table.push(o),
                    None => return Ok(Solution::none(inst, vec![format!("input row {row} settled at Blue")])),
                }
            }
            let w = Witness::TruthTable(table);
            let feasible = check(inst, &w).unwrap_or(false);
            Ok(Solution {
                kind: inst.kind().to_string(),
                feasible,
                witness: Some(w),
                objective: None,
                energy: None,
                seed: Some(cfg.engine.seed()),
                warnings: Vec::new(),
                trace: None,
            })
        }
        _ => encode_and_run(inst, cfg),
    }
}
