//! Network construction: SAT clause networks, Energy-AND and Weighted-Sum
//! fragments, Blue restriction, the maze solver and logic gates.

use thiserror::Error;

use crate::cnf::CnfError;
use crate::potts::{CouplingGraph, PottsError, SpinLabel};

pub mod fragments;
pub mod gates;
pub mod maze;
pub mod sat;

pub use fragments::{
    add_blue_restriction, add_energy_and, add_weighted_sum, blue_weight_for, build_energy_and,
    build_weighted_sum, Fragment, Qubo,
};
pub use gates::{build_logic_gate, GateKind, LogicCircuit};
pub use maze::{build_maze_network, Dir, Maze, MazeNetwork, MazeWeights};
pub use sat::{
    build_sat_network, build_sat_network_scaled, default_clause_weights, merge_sources,
    BiasedSource, ClauseWeights, SatNetwork,
};

#[derive(Debug, Error)]
pub enum BuildError {
    #[error(transparent)]
    Potts(#[from] PottsError),
    #[error(transparent)]
    Cnf(#[from] CnfError),
    #[error("clause {0} is empty: formula is unsatisfiable")]
    EmptyClause(usize),
    #[error("clause {0} contains a literal and its negation")]
    Tautology(usize),
    #[error("clause weights rejected: {0}")]
    Weights(String),
    #[error("unsupported gate: {0}")]
    UnsupportedGate(String),
    #[error("invalid maze: {0}")]
    Maze(String),
    #[error("invalid fragment: {0}")]
    Fragment(String),
}

/// The three clamped voltage sources shared by a network.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rails {
    pub t: usize,
    pub f: usize,
    pub b: usize,
}

impl Rails {
    /// Appends three clamped nodes (T, F, B) and, when `linked`, the three
    /// rail-to-rail couplings.
    pub fn add_to(g: &mut CouplingGraph, linked: bool) -> Result<Rails, PottsError> {
        let t = g.add_node();
        let f = g.add_node();
        let b = g.add_node();
        g.clamp_label(t, SpinLabel::T)?;
        g.clamp_label(f, SpinLabel::F)?;
        g.clamp_label(b, SpinLabel::B)?;
        if linked {
            g.couple(t, f, 1.0)?;
            g.couple(t, b, 1.0)?;
            g.couple(f, b, 1.0)?;
        }
        Ok(Rails { t, f, b })
    }

    pub fn of(&self, label: SpinLabel) -> usize {
        match label {
            SpinLabel::T => self.t,
            SpinLabel::F => self.f,
            SpinLabel::B => self.b,
        }
    }
}
