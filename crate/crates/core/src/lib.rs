//! Potts oscillator optimizer.
//!
//! Compiles combinatorial problems to 3-state Potts coupling graphs,
//! minimizes them with discrete Hopfield sweeps or Kuramoto phase dynamics,
//! and decodes and checks the results against brute-force oracles.

pub mod cnf;
pub mod dynamics;
pub mod fixtures;
pub mod netbuilder;
pub mod oracle;
pub mod potts;
pub mod problem;
pub mod reductions;
pub mod solve;

pub use dynamics::{
    hopfield_solve, hopfield_step, kuramoto_solve, multistart, quantize, Engine, InitStrategy,
    OdeConfig, RunTrace, SweepConfig,
};
pub use potts::{
    continuous_energy, discrete_energy, local_field, BiasField, Clamp, Coupling, CouplingGraph,
    PhaseVector, PottsError, PottsState, SpinLabel,
};
