//! 3-state Potts spins, coupling graphs and exact energy evaluation.
//!
//! A node takes one of three labels `F`, `T`, `B`, represented as unit
//! vectors at phases 0, 2π/3 and 4π/3. The pair energy of a coupling with
//! weight `w` is `w * (S_i · S_j)`: positive weights penalize equal labels,
//! negative weights reward them.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const HALF_SQRT3: f64 = 0.866_025_403_784_438_6;
const TAU: f64 = 2.0 * PI;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PottsError {
    #[error("dimension mismatch: graph has {expected} nodes, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("node {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("self-coupling on node {0}")]
    SelfCoupling(usize),
    #[error("node {0} is clamped")]
    ClampedNode(usize),
    #[error("clamped node {node} holds {found}, expected {expected}")]
    ClampViolation {
        node: usize,
        expected: SpinLabel,
        found: SpinLabel,
    },
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("malformed graph document: {0}")]
    Malformed(String),
}

/// One of the three Potts states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SpinLabel {
    F,
    T,
    B,
}

impl SpinLabel {
    pub const ALL: [SpinLabel; 3] = [SpinLabel::F, SpinLabel::T, SpinLabel::B];

    pub fn index(self) -> usize {
        match self {
            SpinLabel::F => 0,
            SpinLabel::T => 1,
            SpinLabel::B => 2,
        }
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i % 3]
    }

    pub fn from_bool(value: bool) -> Self {
        if value {
            SpinLabel::T
        } else {
            SpinLabel::F
        }
    }

    /// Phase of the label in radians.
    pub fn angle(self) -> f64 {
        self.index() as f64 * TAU / 3.0
    }

    /// Unit vector; exact constants rather than `cos`/`sin` of the angle.
    pub fn vector(self) -> [f64; 2] {
        match self {
            SpinLabel::F => [1.0, 0.0],
            SpinLabel::T => [-0.5, HALF_SQRT3],
            SpinLabel::B => [-0.5, -HALF_SQRT3],
        }
    }

    pub fn dot(self, other: SpinLabel) -> f64 {
        if self == other {
            1.0
        } else {
            -0.5
        }
    }

    /// F → T → B → F.
    pub fn rotate(self) -> Self {
        Self::from_index(self.index() + 1)
    }
}

impl fmt::Display for SpinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            SpinLabel::F => "F",
            SpinLabel::T => "T",
            SpinLabel::B => "B",
        };
        f.write_str(c)
    }
}

impl FromStr for SpinLabel {
    type Err = PottsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "F" | "f" => Ok(SpinLabel::F),
            "T" | "t" => Ok(SpinLabel::T),
            "B" | "b" => Ok(SpinLabel::B),
            other => Err(PottsError::Malformed(format!("unknown label {other:?}"))),
        }
    }
}

pub(crate) fn dot2(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

pub(crate) fn unit(angle: f64) -> [f64; 2] {
    [angle.cos(), angle.sin()]
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_phase(theta: f64) -> f64 {
    let w = theta.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// A fixed voltage source: either one of the three labels or an arbitrary
/// fixed phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Clamp {
    Label(SpinLabel),
    Phase(f64),
}

impl Clamp {
    pub fn angle(self) -> f64 {
        match self {
            Clamp::Label(l) => l.angle(),
            Clamp::Phase(a) => wrap_phase(a),
        }
    }

    pub fn vector(self) -> [f64; 2] {
        match self {
            Clamp::Label(l) => l.vector(),
            Clamp::Phase(a) => unit(a),
        }
    }

    /// The label a state must hold at this node. Phase clamps hold the
    /// nearest bin.
    pub fn label(self) -> SpinLabel {
        match self {
            Clamp::Label(l) => l,
            Clamp::Phase(a) => nearest_bin(a, 3),
        }
    }
}

/// External field on a node: a source at `angle` coupled with `magnitude`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiasField {
    pub angle: f64,
    pub magnitude: f64,
}

impl BiasField {
    pub fn from_vector(v: [f64; 2]) -> Self {
        let magnitude = v[0].hypot(v[1]);
        let angle = if magnitude == 0.0 {
            0.0
        } else {
            wrap_phase(v[1].atan2(v[0]))
        };
        BiasField { angle, magnitude }
    }

    pub fn vector(&self) -> [f64; 2] {
        let u = unit(self.angle);
        [self.magnitude * u[0], self.magnitude * u[1]]
    }
}

/// A coupling between two nodes. `forward` is the weight with which `from`
/// acts on `to`, `backward` the weight with which `to` acts on `from`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coupling {
    pub from: usize,
    pub to: usize,
    pub forward: f64,
    pub backward: f64,
}

impl Coupling {
    pub fn symmetric(i: usize, j: usize, w: f64) -> Self {
        Coupling {
            from: i,
            to: j,
            forward: w,
            backward: w,
        }
    }

    /// `from` drives `to`; `to` exerts no field on `from`.
    pub fn directed(from: usize, to: usize, w: f64) -> Self {
        Coupling {
            from,
            to,
            forward: w,
            backward: 0.0,
        }
    }

    pub fn asymmetric(from: usize, to: usize, forward: f64, backward: f64) -> Self {
        Coupling {
            from,
            to,
            forward,
            backward,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.forward == self.backward
    }

    /// Weight of the pair term in the energy: the symmetric part.
    pub fn energy_weight(&self) -> f64 {
        0.5 * (self.forward + self.backward)
    }

    /// Weight with which the other endpoint acts on `node`.
    pub fn weight_on(&self, node: usize) -> f64 {
        if node == self.to {
            self.forward
        } else {
            self.backward
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
struct Link {
    // lo acts on hi
    up: f64,
    // hi acts on lo
    down: f64,
}

/// Incoming-weight lists: `incoming[i]` holds `(j, w)` where `j` acts on `i`
/// with weight `w`.
#[derive(Clone, Debug, Default)]
pub struct Adjacency {
    pub incoming: Vec<Vec<(usize, f64)>>,
}

/// Weighted couplings over `n` nodes, with clamped sources, per-node bias
/// fields and per-node pump strength.
#[derive(Clone, Debug, Default)]
pub struct CouplingGraph {
    n: usize,
    links: BTreeMap<(usize, usize), Link>,
    clamps: BTreeMap<usize, Clamp>,
    bias: BTreeMap<usize, BiasField>,
    pump: Vec<f64>,
    adjacency: OnceLock<Adjacency>,
}

impl CouplingGraph {
    pub fn new(n: usize) -> Self {
        CouplingGraph {
            n,
            pump: vec![0.0; n],
            ..Default::default()
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.n
    }

    fn touch(&mut self) {
        self.adjacency = OnceLock::new();
    }

    pub fn add_node(&mut self) -> usize {
        self.n += 1;
        self.pump.push(0.0);
        self.touch();
        self.n - 1
    }

    pub fn add_nodes(&mut self, count: usize) -> std::ops::Range<usize> {
        let start = self.n;
        for _ in 0..count {
            self.add_node();
        }
        start..self.n
    }

    fn check_node(&self, node: usize) -> Result<(), PottsError> {
        if node >= self.n {
            Err(PottsError::NodeOutOfRange { node, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Inserts a coupling, summing into any existing coupling on the same
    /// unordered pair.
    pub fn add_coupling(&mut self, c: Coupling) -> Result<(), PottsError> {
        self.check_node(c.from)?;
        self.check_node(c.to)?;
        if c.from == c.to {
            return Err(PottsError::SelfCoupling(c.from));
        }
        if !c.forward.is_finite() || !c.backward.is_finite() {
            return Err(PottsError::NonFinite(format!(
                "coupling ({}, {})",
                c.from, c.to
            )));
        }
        let (key, up, down) = if c.from < c.to {
            ((c.from, c.to), c.forward, c.backward)
        } else {
            ((c.to, c.from), c.backward, c.forward)
        };
        let link = self.links.entry(key).or_default();
        link.up += up;
        link.down += down;
        self.touch();
        Ok(())
    }

    pub fn couple(&mut self, i: usize, j: usize, w: f64) -> Result<(), PottsError> {
        self.add_coupling(Coupling::symmetric(i, j, w))
    }

    pub fn coupling(&self, i: usize, j: usize) -> Option<Coupling> {
        let key = (i.min(j), i.max(j));
        self.links.get(&key).map(|l| {
            let c = Coupling::asymmetric(key.0, key.1, l.up, l.down);
            if i <= j {
                c
            } else {
                Coupling::asymmetric(i, j, l.down, l.up)
            }
        })
    }

    /// Couplings in ascending `(lo, hi)` order, oriented `lo → hi`.
    pub fn couplings(&self) -> impl Iterator<Item = Coupling> + '_ {
        self.links
            .iter()
            .map(|(&(i, j), l)| Coupling::asymmetric(i, j, l.up, l.down))
    }

    pub fn n_couplings(&self) -> usize {
        self.links.len()
    }

    /// Couplings plus bias-field links.
    pub fn n_connections(&self) -> usize {
        self.links.len() + self.bias.len()
    }

    pub fn is_symmetric(&self) -> bool {
        self.links.values().all(|l| l.up == l.down)
    }

    pub fn set_clamp(&mut self, node: usize, clamp: Clamp) -> Result<(), PottsError> {
        self.check_node(node)?;
        self.clamps.insert(node, clamp);
        self.touch();
        Ok(())
    }

    pub fn clamp_label(&mut self, node: usize, label: SpinLabel) -> Result<(), PottsError> {
        self.set_clamp(node, Clamp::Label(label))
    }

    pub fn clamp_of(&self, node: usize) -> Option<Clamp> {
        self.clamps.get(&node).copied()
    }

    pub fn is_clamped(&self, node: usize) -> bool {
        self.clamps.contains_key(&node)
    }

    pub fn clamps(&self) -> impl Iterator<Item = (usize, Clamp)> + '_ {
        self.clamps.iter().map(|(&i, &c)| (i, c))
    }

    pub fn free_nodes(&self) -> Vec<usize> {
        (0..self.n).filter(|i| !self.is_clamped(*i)).collect()
    }

    /// Adds a bias field to a node; multiple biases on one node sum as
    /// vectors.
    pub fn add_bias(&mut self, node: usize, field: BiasField) -> Result<(), PottsError> {
        self.check_node(node)?;
        let v = field.vector();
        let merged = match self.bias.get(&node) {
            Some(existing) => {
                let e = existing.vector();
                BiasField::from_vector([e[0] + v[0], e[1] + v[1]])
            }
            None => field,
        };
        self.bias.insert(node, merged);
        self.touch();
        Ok(())
    }

    pub fn bias_of(&self, node: usize) -> Option<BiasField> {
        self.bias.get(&node).copied()
    }

    pub fn biases(&self) -> impl Iterator<Item = (usize, BiasField)> + '_ {
        self.bias.iter().map(|(&i, &b)| (i, b))
    }

    pub fn set_pump(&mut self, node: usize, k: f64) -> Result<(), PottsError> {
        self.check_node(node)?;
        self.pump[node] = k;
        Ok(())
    }

    pub fn pump(&self, node: usize) -> f64 {
        self.pump[node]
    }

    pub fn pumps(&self) -> &[f64] {
        &self.pump
    }

    /// Appends `other` with its node indices shifted by the current node
    /// count; returns the offset.
    pub fn union(&mut self, other: &CouplingGraph) -> usize {
        let offset = self.n;
        self.n += other.n;
        self.pump.extend_from_slice(&other.pump);
        for (&(i, j), l) in &other.links {
            self.links.insert((i + offset, j + offset), *l);
        }
        for (&i, &c) in &other.clamps {
            self.clamps.insert(i + offset, c);
        }
        for (&i, &b) in &other.bias {
            self.bias.insert(i + offset, b);
        }
        self.touch();
        offset
    }

    pub fn adjacency(&self) -> &Adjacency {
        self.adjacency.get_or_init(|| {
            let mut incoming = vec![Vec::new(); self.n];
            for (&(i, j), l) in &self.links {
                if l.up != 0.0 {
                    incoming[j].push((i, l.up));
                }
                if l.down != 0.0 {
                    incoming[i].push((j, l.down));
                }
            }
            Adjacency { incoming }
        })
    }

    /// Largest absolute incoming weight sum over all nodes, bias included.
    pub fn max_node_strength(&self) -> f64 {
        let adj = self.adjacency();
        (0..self.n)
            .map(|i| {
                adj.incoming[i].iter().map(|(_, w)| w.abs()).sum::<f64>()
                    + self.bias.get(&i).map_or(0.0, |b| b.magnitude.abs())
            })
            .fold(0.0, f64::max)
    }

    pub fn max_abs_weight(&self) -> f64 {
        self.links
            .values()
            .map(|l| l.up.abs().max(l.down.abs()))
            .chain(self.bias.values().map(|b| b.magnitude.abs()))
            .fold(0.0, f64::max)
    }

    /// A state with every free node at `label` and every clamp applied.
    pub fn uniform_state(&self, label: SpinLabel) -> PottsState {
        let mut s = PottsState::new(vec![label; self.n]);
        self.apply_clamps(&mut s);
        s
    }

    pub fn apply_clamps(&self, state: &mut PottsState) {
        for (&i, c) in &self.clamps {
            if i < state.len() {
                state.labels[i] = c.label();
            }
        }
    }

    pub fn check_state(&self, state: &PottsState) -> Result<(), PottsError> {
        if state.len() != self.n {
            return Err(PottsError::DimensionMismatch {
                expected: self.n,
                found: state.len(),
            });
        }
        for (&i, c) in &self.clamps {
            if state.labels[i] != c.label() {
                return Err(PottsError::ClampViolation {
                    node: i,
                    expected: c.label(),
                    found: state.labels[i],
                });
            }
        }
        Ok(())
    }

    /// The vector a node presents to its neighbours.
    pub fn node_vector(&self, node: usize, state: &PottsState) -> [f64; 2] {
        match self.clamps.get(&node) {
            Some(c) => c.vector(),
            None => state.labels[node].vector(),
        }
    }

    fn pair_dot(&self, i: usize, j: usize, state: &PottsState) -> f64 {
        match (self.clamps.get(&i), self.clamps.get(&j)) {
            (Some(Clamp::Phase(_)), _) | (_, Some(Clamp::Phase(_))) => {
                dot2(self.node_vector(i, state), self.node_vector(j, state))
            }
            (ci, cj) => {
                let a = ci.map_or(state.labels[i], |c| c.label());
                let b = cj.map_or(state.labels[j], |c| c.label());
                a.dot(b)
            }
        }
    }

    fn node_angle(&self, node: usize, phases: &PhaseVector) -> f64 {
        match self.clamps.get(&node) {
            Some(c) => c.angle(),
            None => phases.phases[node],
        }
    }

    /// Phase embedding of a Potts state, clamps at their exact phase.
    pub fn embed(&self, state: &PottsState) -> PhaseVector {
        let phases = (0..state.len())
            .map(|i| match self.clamps.get(&i) {
                Some(c) => c.angle(),
                None => state.labels[i].angle(),
            })
            .collect();
        PhaseVector { phases }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&GraphDoc::from(self)).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, PottsError> {
        let doc: GraphDoc =
            serde_json::from_str(text).map_err(|e| PottsError::Malformed(e.to_string()))?;
        doc.into_graph()
    }
}

/// Labels of every node.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PottsState {
    labels: Vec<SpinLabel>,
}

impl PottsState {
    pub fn new(labels: Vec<SpinLabel>) -> Self {
        PottsState { labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[SpinLabel] {
        &self.labels
    }

    pub fn get(&self, i: usize) -> SpinLabel {
        self.labels[i]
    }

    pub fn set(&mut self, i: usize, label: SpinLabel) {
        self.labels[i] = label;
    }
}

/// Continuous phase per oscillator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseVector {
    phases: Vec<f64>,
}

impl PhaseVector {
    pub fn new(phases: Vec<f64>) -> Self {
        PhaseVector {
            phases: phases.into_iter().map(wrap_phase).collect(),
        }
    }

    /// Keeps phases as given (no wrapping); used by the integrator.
    pub(crate) fn raw(phases: Vec<f64>) -> Self {
        PhaseVector { phases }
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub(crate) fn phases_mut(&mut self) -> &mut [f64] {
        &mut self.phases
    }
}

/// Nearest of `n` evenly spaced bins; exact half-way ties go to the lower
/// bin index.
pub(crate) fn nearest_bin(theta: f64, n: usize) -> SpinLabel {
    let step = TAU / n as f64;
    let t = wrap_phase(theta);
    let k = (t / step).floor();
    let frac = t - k * step;
    let k = k as usize % n;
    let idx = if frac <= step / 2.0 { k } else { (k + 1) % n };
    if n == 3 {
        SpinLabel::from_index(idx)
    } else {
        // two-phase subnetworks use the F/T pair
        if idx == 0 {
            SpinLabel::F
        } else {
            SpinLabel::T
        }
    }
}

/// `Σ w_ij (S_i·S_j)` over couplings plus bias terms.
pub fn discrete_energy(g: &CouplingGraph, s: &PottsState) -> Result<f64, PottsError> {
    if s.len() != g.n {
        return Err(PottsError::DimensionMismatch {
            expected: g.n,
            found: s.len(),
        });
    }
    let mut e = 0.0;
    for (&(i, j), l) in &g.links {
        let w = 0.5 * (l.up + l.down);
        if w != 0.0 {
            e += w * g.pair_dot(i, j, s);
        }
    }
    for (&i, b) in &g.bias {
        e += dot2(b.vector(), g.node_vector(i, s));
    }
    Ok(e)
}

/// `(N/2) Σ K_ij cos(θ_i − θ_j) + Σ K_p cos(N θ_i)`, bias fields included
/// as couplings to fixed phases.
pub fn continuous_energy(
    g: &CouplingGraph,
    p: &PhaseVector,
    n_pump: u32,
) -> Result<f64, PottsError> {
    if p.len() != g.n {
        return Err(PottsError::DimensionMismatch {
            expected: g.n,
            found: p.len(),
        });
    }
    let half_n = n_pump as f64 / 2.0;
    let mut pair = 0.0;
    for (&(i, j), l) in &g.links {
        let w = 0.5 * (l.up + l.down);
        if w != 0.0 {
            pair += w * (g.node_angle(i, p) - g.node_angle(j, p)).cos();
        }
    }
    for (&i, b) in &g.bias {
        pair += b.magnitude * (g.node_angle(i, p) - b.angle).cos();
    }
    let pump: f64 = (0..g.n)
        .map(|i| g.pump[i] * (n_pump as f64 * g.node_angle(i, p)).cos())
        .sum();
    Ok(half_n * pair + pump)
}

/// `h_i = Σ_j w_{i←j} S_j` plus the node's bias field.
pub fn local_field(g: &CouplingGraph, s: &PottsState, i: usize) -> Result<[f64; 2], PottsError> {
    g.check_node(i)?;
    if s.len() != g.n {
        return Err(PottsError::DimensionMismatch {
            expected: g.n,
            found: s.len(),
        });
    }
    if g.is_clamped(i) {
        return Err(PottsError::ClampedNode(i));
    }
    Ok(field_unchecked(g, s, i))
}

pub(crate) fn field_unchecked(g: &CouplingGraph, s: &PottsState, i: usize) -> [f64; 2] {
    let mut h = g.bias.get(&i).map_or([0.0, 0.0], |b| b.vector());
    for &(j, w) in &g.adjacency().incoming[i] {
        let v = g.node_vector(j, s);
        h[0] += w * v[0];
        h[1] += w * v[1];
    }
    h
}

/// `s·h_i` for each of F, T, B.
pub fn label_costs(g: &CouplingGraph, s: &PottsState, i: usize) -> Result<[f64; 3], PottsError> {
    let h = local_field(g, s, i)?;
    Ok(costs_from_field(h))
}

pub(crate) fn costs_from_field(h: [f64; 2]) -> [f64; 3] {
    [
        dot2(SpinLabel::F.vector(), h),
        dot2(SpinLabel::T.vector(), h),
        dot2(SpinLabel::B.vector(), h),
    ]
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CouplingDoc {
    Asymmetric(usize, usize, f64, bool, f64),
    Flagged(usize, usize, f64, bool),
    Symmetric(usize, usize, f64),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ClampDoc {
    Label(SpinLabel),
    Angle(f64),
}

/// Interchange document: `{n, couplings: [[i, j, w, directed?]], clamps,
/// bias, pump}`. An asymmetric coupling is written `[i, j, w_ij, false,
/// w_ji]`.
#[derive(Serialize, Deserialize)]
struct GraphDoc {
    n: usize,
    couplings: Vec<CouplingDoc>,
    #[serde(default)]
    clamps: BTreeMap<usize, ClampDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    bias: BTreeMap<usize, [f64; 2]>,
    #[serde(default)]
    pump: Vec<f64>,
}

impl From<&CouplingGraph> for GraphDoc {
    fn from(g: &CouplingGraph) -> Self {
        let couplings = g
            .links
            .iter()
            .map(|(&(i, j), l)| {
                if l.up == l.down {
                    CouplingDoc::Symmetric(i, j, l.up)
                } else if l.down == 0.0 {
                    CouplingDoc::Flagged(i, j, l.up, true)
                } else if l.up == 0.0 {
                    CouplingDoc::Flagged(j, i, l.down, true)
                } else {
                    CouplingDoc::Asymmetric(i, j, l.up, false, l.down)
                }
            })
            .collect();
        let clamps = g
            .clamps
            .iter()
            .map(|(&i, c)| {
                let doc = match *c {
                    Clamp::Label(l) => ClampDoc::Label(l),
                    Clamp::Phase(a) => ClampDoc::Angle(a),
                };
                (i, doc)
            })
            .collect();
        let bias = g
            .bias
            .iter()
            .map(|(&i, b)| (i, [b.angle, b.magnitude]))
            .collect();
        GraphDoc {
            n: g.n,
            couplings,
            clamps,
            bias,
            pump: g.pump.clone(),
        }
    }
}

impl GraphDoc {
    fn into_graph(self) -> Result<CouplingGraph, PottsError> {
        let mut g = CouplingGraph::new(self.n);
        for c in self.couplings {
            let coupling = match c {
                CouplingDoc::Symmetric(i, j, w) | CouplingDoc::Flagged(i, j, w, false) => {
                    Coupling::symmetric(i, j, w)
                }
                CouplingDoc::Flagged(i, j, w, true) => Coupling::directed(i, j, w),
                CouplingDoc::Asymmetric(i, j, w, _, back) => Coupling::asymmetric(i, j, w, back),
            };
            g.add_coupling(coupling)?;
        }
        for (i, c) in self.clamps {
            let clamp = match c {
                ClampDoc::Label(l) => Clamp::Label(l),
                ClampDoc::Angle(a) => Clamp::Phase(a),
            };
            g.set_clamp(i, clamp)?;
        }
        for (i, [angle, magnitude]) in self.bias {
            g.add_bias(i, BiasField { angle, magnitude })?;
        }
        if !self.pump.is_empty() {
            if self.pump.len() != self.n {
                return Err(PottsError::Malformed(format!(
                    "pump has {} entries for {} nodes",
                    self.pump.len(),
                    self.n
                )));
            }
            for (i, k) in self.pump.into_iter().enumerate() {
                g.set_pump(i, k)?;
            }
        }
        Ok(g)
    }
}
