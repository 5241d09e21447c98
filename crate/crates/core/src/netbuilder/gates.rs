//! Logic gates on 2-phase (T/F) oscillators.
//!
//! Inputs drive the output through directed links; a per-gate extra node
//! clamped at T or F sets the threshold. Outputs are Blue-restricted.

use std::fmt;
use std::str::FromStr;

use crate::dynamics::{hopfield_solve, SweepConfig, SweepOrder};
use crate::potts::{Coupling, CouplingGraph, SpinLabel};

use super::{blue_weight_for, BuildError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    And,
    Or,
    Nand,
    Nor,
    Not,
    Buf,
    Xor,
    Xnor,
}

impl GateKind {
    pub fn eval(self, inputs: &[bool]) -> bool {
        let all = inputs.iter().all(|&b| b);
        let any = inputs.iter().any(|&b| b);
        let ones = inputs.iter().filter(|&&b| b).count();
        match self {
            GateKind::And => all,
            GateKind::Or => any,
            GateKind::Nand => !all,
            GateKind::Nor => !any,
            GateKind::Not => !inputs[0],
            GateKind::Buf => inputs[0],
            GateKind::Xor => ones % 2 == 1,
            GateKind::Xnor => ones % 2 == 0,
        }
    }

    /// Input weight and optional `(extra source label, extra weight)`.
    fn design(self, n_inputs: usize) -> Result<(f64, Option<(SpinLabel, f64)>), BuildError> {
        let threshold = n_inputs as f64 - 1.5;
        match self {
            GateKind::And => Ok((-1.0, Some((SpinLabel::T, threshold)))),
            GateKind::Or => Ok((-1.0, Some((SpinLabel::F, threshold)))),
            GateKind::Nand => Ok((1.0, Some((SpinLabel::F, threshold)))),
            GateKind::Nor => Ok((1.0, Some((SpinLabel::T, threshold)))),
            GateKind::Buf => Ok((-1.0, None)),
            GateKind::Not => Ok((1.0, None)),
            GateKind::Xor | GateKind::Xnor => Err(BuildError::UnsupportedGate(format!(
                "{self} is not linearly separable and has no single-output oscillator realization"
            ))),
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GateKind::And => "AND",
            GateKind::Or => "OR",
            GateKind::Nand => "NAND",
            GateKind::Nor => "NOR",
            GateKind::Not => "NOT",
            GateKind::Buf => "BUF",
            GateKind::Xor => "XOR",
            GateKind::Xnor => "XNOR",
        };
        f.write_str(s)
    }
}

impl FromStr for GateKind {
    type Err = BuildError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "AND" => Ok(GateKind::And),
            "OR" => Ok(GateKind::Or),
            "NAND" => Ok(GateKind::Nand),
            "NOR" => Ok(GateKind::Nor),
            "NOT" => Ok(GateKind::Not),
            "BUF" => Ok(GateKind::Buf),
            "XOR" => Ok(GateKind::Xor),
            "XNOR" => Ok(GateKind::Xnor),
            other => Err(BuildError::UnsupportedGate(format!("unknown gate {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Gate {
    pub kind: GateKind,
    pub inputs: Vec<usize>,
    pub output: usize,
    pub extra: Option<usize>,
}

/// A feed-forward circuit of gates sharing one Blue source.
#[derive(Clone, Debug)]
pub struct LogicCircuit {
    pub graph: CouplingGraph,
    pub blue: usize,
    pub inputs: Vec<usize>,
    pub gates: Vec<Gate>,
}

impl Default for LogicCircuit {
    fn default() -> Self {
        Self::new()
    }
}

impl LogicCircuit {
    pub fn new() -> Self {
        let mut graph = CouplingGraph::new(1);
        graph.clamp_label(0, SpinLabel::B).expect("node 0 exists");
        LogicCircuit {
            graph,
            blue: 0,
            inputs: Vec::new(),
            gates: Vec::new(),
        }
    }

    pub fn add_input(&mut self) -> usize {
        let i = self.graph.add_node();
        self.inputs.push(i);
        i
    }

    /// Adds a gate reading `inputs` (circuit inputs or earlier outputs);
    /// returns the output node.
    pub fn add_gate(&mut self, kind: GateKind, inputs: &[usize]) -> Result<usize, BuildError> {
        let arity_ok = match kind {
            GateKind::Not | GateKind::Buf => inputs.len() == 1,
            _ => inputs.len() >= 2,
        };
        let (w_in, extra) = kind.design(inputs.len())?;
        if !arity_ok {
            return Err(BuildError::UnsupportedGate(format!(
                "{kind} with {} inputs",
                inputs.len()
            )));
        }
        let out = self.graph.add_node();
        for &i in inputs {
            if i >= out || i == self.blue {
                return Err(BuildError::UnsupportedGate(format!("gate input {i} not defined")));
            }
            self.graph.add_coupling(Coupling::directed(i, out, w_in))?;
        }
        let extra_node = match extra {
            Some((label, w)) => {
                let e = self.graph.add_node();
                self.graph.clamp_label(e, label)?;
                self.graph.add_coupling(Coupling::directed(e, out, w))?;
                Some(e)
            }
            None => None,
        };
        let wb = blue_weight_for(&self.graph, out, self.blue);
        self.graph
            .add_coupling(Coupling::directed(self.blue, out, wb))?;
        self.gates.push(Gate {
            kind,
            inputs: inputs.to_vec(),
            output: out,
            extra: extra_node,
        });
        Ok(out)
    }

    /// Clamps the inputs, settles in creation order and reads every gate
    /// output (T = true). `None` if an output settles at B.
    pub fn evaluate(&self, values: &[bool]) -> Result<Option<Vec<bool>>, BuildError> {
        if values.len() != self.inputs.len() {
            return Err(BuildError::UnsupportedGate(format!(
                "expected {} input values, got {}",
                self.inputs.len(),
                values.len()
            )));
        }
        let mut g = self.graph.clone();
        for (&i, &v) in self.inputs.iter().zip(values) {
            g.clamp_label(i, SpinLabel::from_bool(v))?;
        }
        let cfg = SweepConfig {
            order: SweepOrder::Fixed,
            max_sweeps: self.gates.len() + 2,
            ..Default::default()
        };
        let tr = hopfield_solve(&g, &g.uniform_state(SpinLabel::F), &cfg)
            .map_err(|e| BuildError::UnsupportedGate(e.to_string()))?;
        let outs: Option<Vec<bool>> = self
            .gates
            .iter()
            .map(|gate| match tr.final_state.get(gate.output) {
                SpinLabel::T => Some(true),
                SpinLabel::F => Some(false),
                SpinLabel::B => None,
            })
            .collect();
        Ok(outs)
    }
}

/// A circuit with `n_inputs` fresh inputs feeding a single gate.
pub fn build_logic_gate(kind: GateKind, n_inputs: usize) -> Result<LogicCircuit, BuildError> {
    let mut c = LogicCircuit::new();
    let ins: Vec<usize> = (0..n_inputs).map(|_| c.add_input()).collect();
    c.add_gate(kind, &ins)?;
    Ok(c)
}
