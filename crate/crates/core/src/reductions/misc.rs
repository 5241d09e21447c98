//! Direct networks: SAT formulas, mazes and logic circuits.

use std::sync::Arc;

use crate::cnf::Cnf;
use crate::dynamics::InitStrategy;
use crate::netbuilder::{build_maze_network, GateKind, LogicCircuit, Maze, MazeWeights, Rails};
use crate::potts::{PottsState, SpinLabel};
use crate::problem::{GateSpec, Witness};

use super::{is_true, EncodeOptions, Encoding, ReductionArtifact, ReductionError};

pub fn encode_sat(f: &Cnf, opts: &EncodeOptions) -> Result<ReductionArtifact, ReductionError> {
    f.validate().map_err(|e| match e {
        crate::cnf::CnfError::EmptyClause(i) => {
            ReductionError::Infeasible(format!("clause {i} is empty"))
        }
        other => ReductionError::Build(other.into()),
    })?;
    let decoder = Arc::new(|l: &[SpinLabel]| {
        Witness::Assignment(l.iter().map(|&x| is_true(x)).collect())
    });
    Encoding::new("sat", f.num_vars, decoder)
        .with_cnf(f.clone())
        .assemble(opts)
}

/// Cell nodes start True; the decoder walks the True cells from start to
/// end and yields an empty order unless they form exactly one path.
pub fn encode_maze(maze: &Maze) -> Result<ReductionArtifact, ReductionError> {
    let net = build_maze_network(maze, &MazeWeights::default())?;
    let n = maze.n_cells();
    let init = InitStrategy::Given(net.initial_state());
    let graph = net.graph.clone();
    let rails: Rails = net.rails;
    let decoder = Arc::new(move |l: &[SpinLabel]| {
        Witness::Order(net.decode(&PottsState::new(l.to_vec())).unwrap_or_default())
    });
    Ok(ReductionArtifact {
        kind: "maze",
        graph,
        rails,
        var_nodes: (0..n).collect(),
        cnf: None,
        penalty: None,
        objective: None,
        sat_scale: 1.0,
        decoder,
        init,
        warnings: Vec::new(),
    })
}

/// Signals `0..inputs` are the circuit inputs, signal `inputs + g` the
/// output of gate `g`.
pub fn build_circuit(inputs: usize, gates: &[GateSpec]) -> Result<LogicCircuit, ReductionError> {
    let mut c = LogicCircuit::new();
    let mut signals: Vec<usize> = (0..inputs).map(|_| c.add_input()).collect();
    for (gi, g) in gates.iter().enumerate() {
        let kind: GateKind = g.gate.parse()?;
        let ins = g
            .inputs
            .iter()
            .map(|&s| {
                signals.get(s).copied().ok_or_else(|| {
                    ReductionError::Unsupported(format!("gate {gi} reads undefined signal {s}"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        signals.push(c.add_gate(kind, &ins)?);
    }
    Ok(c)
}

/// The circuit network; decision nodes are the gate outputs. Circuits are
/// evaluated per input row rather than by multistart.
pub fn encode_logic_circuit(
    inputs: usize,
    gates: &[GateSpec],
) -> Result<ReductionArtifact, ReductionError> {
    let c = build_circuit(inputs, gates)?;
    let outs: Vec<usize> = c.gates.iter().map(|g| g.output).collect();
    let decoder = Arc::new(|l: &[SpinLabel]| {
        Witness::TruthTable(vec![l.iter().map(|&x| is_true(x)).collect()])
    });
    Ok(ReductionArtifact {
        kind: "logic_circuit",
        rails: Rails {
            t: c.blue,
            f: c.blue,
            b: c.blue,
        },
        graph: c.graph,
        var_nodes: outs,
        cnf: None,
        penalty: None,
        objective: None,
        sat_scale: 1.0,
        decoder,
        init: InitStrategy::Uniform(SpinLabel::F),
        warnings: Vec::new(),
    })
}
