//! Base network plus one clause network per clause.
//!
//! Layout: rails T, F, B (clamped), then `x_i`, `x̄_i` per variable, then one
//! node `r` per clause. A literal drives `r` with weight `W_l`; `r` feeds back
//! to the literal with `W_r`. `r` also couples to the rails with `W_T`, `W_F`
//! and a per-length `W_B(k)`, or to a single merged bias field.

use std::collections::BTreeMap;

use crate::cnf::{normalize_clause, Cnf, NormalizeIssue};
use crate::potts::{BiasField, Coupling, CouplingGraph, PottsState, SpinLabel};

use super::{BuildError, Rails};

/// `x`–`x̄` weight as a multiple of `W_r`.
pub const BASE_PAIR_FACTOR: f64 = 0.2;
/// Literal–Blue weight as a multiple of `W_r`.
pub const BASE_BLUE_FACTOR: f64 = 0.4;

const MARGIN: f64 = 1e-9;

/// Merged True/False/Blue sources of one clause node.
pub type BiasedSource = BiasField;

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ClauseWeights {
    pub w_l: f64,
    pub w_r: f64,
    pub w_t: f64,
    pub w_f: f64,
    pub w_b: f64,
}

impl ClauseWeights {
    /// Checked constructor: the simplified inequalities plus the full truth
    /// table for 3-literal clauses.
    pub fn new(w_l: f64, w_r: f64, w_t: f64, w_f: f64, w_b: f64) -> Result<Self, BuildError> {
        let w = Self::unchecked(w_l, w_r, w_t, w_f, w_b);
        if !w.satisfies_simplified() {
            return Err(BuildError::Weights(format!(
                "{w:?} violates W_r > 0, W_l < 0, W_F + 3W_l < W_B < W_F, W_B < W_T + 3W_l"
            )));
        }
        w.certify(3)?;
        Ok(w)
    }

    pub fn unchecked(w_l: f64, w_r: f64, w_t: f64, w_f: f64, w_b: f64) -> Self {
        ClauseWeights {
            w_l,
            w_r,
            w_t,
            w_f,
            w_b,
        }
    }

    pub fn satisfies_simplified(&self) -> bool {
        self.w_r > 0.0
            && self.w_l < 0.0
            && self.w_f + 3.0 * self.w_l < self.w_b
            && self.w_b < self.w_f
            && self.w_b < self.w_t + 3.0 * self.w_l
    }

    /// Blue weight for a clause of length `k`.
    pub fn blue_for_len(&self, k: usize) -> f64 {
        self.w_b + (k as f64 - 3.0) * self.w_l
    }

    /// Costs of `r` choosing F, T, B when `f`, `t`, `b` literals hold each
    /// label.
    pub fn r_costs(&self, k: usize, f: usize, t: usize, b: usize) -> [f64; 3] {
        [
            f as f64 * self.w_l + self.w_f,
            t as f64 * self.w_l + self.w_t,
            b as f64 * self.w_l + self.blue_for_len(k),
        ]
    }

    /// Verifies the clause truth table for length `k` over every split of
    /// the literals among F, T and B: `r` = F strictly iff all literals are
    /// F, otherwise `r` = B strictly.
    pub fn certify(&self, k: usize) -> Result<(), BuildError> {
        if k == 0 {
            return Err(BuildError::Weights("clause length 0".into()));
        }
        for f in 0..=k {
            for t in 0..=k - f {
                let b = k - f - t;
                let c = self.r_costs(k, f, t, b);
                let (want, others) = if f == k { (0, [1, 2]) } else { (2, [0, 1]) };
                if others.iter().any(|&o| c[want] >= c[o] - MARGIN) {
                    return Err(BuildError::Weights(format!(
                        "length {k}: literals (F={f}, T={t}, B={b}) give r costs {c:?}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn scaled(&self, s: f64) -> Self {
        ClauseWeights {
            w_l: self.w_l * s,
            w_r: self.w_r * s,
            w_t: self.w_t * s,
            w_f: self.w_f * s,
            w_b: self.w_b * s,
        }
    }

    pub fn base_pair(&self) -> f64 {
        BASE_PAIR_FACTOR * self.w_r
    }

    pub fn base_blue(&self) -> f64 {
        BASE_BLUE_FACTOR * self.w_r
    }
}

/// `W_l = -1, W_r = 0.5, W_F = 1, W_T = 6, W_B = -1.5`.
pub fn default_clause_weights() -> ClauseWeights {
    ClauseWeights::new(-1.0, 0.5, 6.0, 1.0, -1.5).expect("default weights certify")
}

/// The single source equivalent to the three rails acting on a 3-literal
/// clause node.
pub fn merge_sources(w: &ClauseWeights) -> BiasedSource {
    merge_for(w.w_f, w.w_t, w.w_b)
}

fn merge_for(w_f: f64, w_t: f64, w_b: f64) -> BiasField {
    let (vf, vt, vb) = (
        SpinLabel::F.vector(),
        SpinLabel::T.vector(),
        SpinLabel::B.vector(),
    );
    BiasField::from_vector([
        w_f * vf[0] + w_t * vt[0] + w_b * vb[0],
        w_f * vf[1] + w_t * vt[1] + w_b * vb[1],
    ])
}

/// Node and connection totals of a built network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct NetworkCounts {
    pub nodes: usize,
    pub connections: usize,
}

#[derive(Clone, Debug)]
pub struct SatNetwork {
    pub graph: CouplingGraph,
    pub rails: Rails,
    /// `(x_i, x̄_i)` node per variable.
    pub vars: Vec<(usize, usize)>,
    /// Clause node per (deduplicated) clause, in input order.
    pub clause_nodes: Vec<usize>,
    /// Normalized clauses matching `clause_nodes`.
    pub clauses: Vec<Vec<crate::cnf::Lit>>,
    pub weights: ClauseWeights,
    pub merged: bool,
}

impl SatNetwork {
    pub fn counts(&self) -> NetworkCounts {
        NetworkCounts {
            nodes: self.graph.n_nodes(),
            connections: self.graph.n_connections(),
        }
    }

    pub fn literal_node(&self, lit: crate::cnf::Lit) -> usize {
        let (x, xb) = self.vars[lit.var];
        if lit.positive {
            x
        } else {
            xb
        }
    }

    /// Variable `i` is true iff `x_i` is T.
    pub fn decode(&self, s: &PottsState) -> Vec<bool> {
        self.vars.iter().map(|&(x, _)| s.get(x) == SpinLabel::T).collect()
    }

    pub fn is_complementary(&self, s: &PottsState) -> bool {
        self.vars.iter().all(|&(x, xb)| {
            matches!(
                (s.get(x), s.get(xb)),
                (SpinLabel::T, SpinLabel::F) | (SpinLabel::F, SpinLabel::T)
            )
        })
    }

    /// Places a Boolean assignment on the literal nodes and sets each clause
    /// node to its truth-table value.
    pub fn encode_assignment(&self, assignment: &[bool]) -> PottsState {
        let mut s = self.graph.uniform_state(SpinLabel::F);
        for (i, &(x, xb)) in self.vars.iter().enumerate() {
            s.set(x, SpinLabel::from_bool(assignment[i]));
            s.set(xb, SpinLabel::from_bool(!assignment[i]));
        }
        for (c, &r) in self.clauses.iter().zip(&self.clause_nodes) {
            let sat = c.iter().any(|l| l.eval(assignment));
            s.set(r, if sat { SpinLabel::B } else { SpinLabel::F });
        }
        s
    }
}

pub fn build_sat_network(
    f: &Cnf,
    w: &ClauseWeights,
    merge_bias: bool,
) -> Result<SatNetwork, BuildError> {
    build_sat_network_scaled(f, w, merge_bias, 1.0)
}

/// As [`build_sat_network`] with every SAT weight multiplied by `scale`
/// (rail-to-rail links stay at unit weight).
pub fn build_sat_network_scaled(
    f: &Cnf,
    w: &ClauseWeights,
    merge_bias: bool,
    scale: f64,
) -> Result<SatNetwork, BuildError> {
    if !w.satisfies_simplified() {
        return Err(BuildError::Weights(format!("{w:?} violates the clause inequalities")));
    }
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(BuildError::Weights(format!("scale {scale} must be positive")));
    }
    let mut clauses = Vec::with_capacity(f.clauses.len());
    for (ci, c) in f.clauses.iter().enumerate() {
        for l in c {
            if l.var >= f.num_vars {
                return Err(crate::cnf::CnfError::VarOutOfRange {
                    var: l.var,
                    num_vars: f.num_vars,
                }
                .into());
            }
        }
        match normalize_clause(c) {
            Ok(n) => clauses.push(n),
            Err(NormalizeIssue::Empty) => return Err(BuildError::EmptyClause(ci)),
            Err(NormalizeIssue::Tautology) => return Err(BuildError::Tautology(ci)),
        }
    }
    let mut certified = BTreeMap::new();
    for c in &clauses {
        if let std::collections::btree_map::Entry::Vacant(e) = certified.entry(c.len()) {
            w.certify(c.len())?;
            e.insert(merge_for(w.w_f, w.w_t, w.blue_for_len(c.len())));
        }
    }

    let ws = w.scaled(scale);
    let mut g = CouplingGraph::new(0);
    let rails = Rails::add_to(&mut g, true)?;
    let mut vars = Vec::with_capacity(f.num_vars);
    for _ in 0..f.num_vars {
        let x = g.add_node();
        let xb = g.add_node();
        g.couple(x, xb, ws.base_pair())?;
        g.couple(x, rails.b, ws.base_blue())?;
        g.couple(xb, rails.b, ws.base_blue())?;
        vars.push((x, xb));
    }
    let mut clause_nodes = Vec::with_capacity(clauses.len());
    for c in &clauses {
        let r = g.add_node();
        for l in c {
            let (x, xb) = vars[l.var];
            let node = if l.positive { x } else { xb };
            g.add_coupling(Coupling::asymmetric(node, r, ws.w_l, ws.w_r))?;
        }
        let k = c.len();
        if merge_bias {
            let m = certified[&k];
            g.add_bias(
                r,
                BiasField {
                    angle: m.angle,
                    magnitude: m.magnitude * scale,
                },
            )?;
        } else {
            g.couple(r, rails.t, ws.w_t)?;
            g.couple(r, rails.f, ws.w_f)?;
            g.couple(r, rails.b, ws.blue_for_len(k))?;
        }
        clause_nodes.push(r);
    }
    Ok(SatNetwork {
        graph: g,
        rails,
        vars,
        clause_nodes,
        clauses,
        weights: ws,
        merged: merge_bias,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::Lit;
    use crate::dynamics::{hopfield_solve, hopfield_step, SweepConfig};
    use crate::potts::local_field;

    #[test]
    fn defaults_satisfy_inequalities() {
        let w = default_clause_weights();
        assert!(w.satisfies_simplified());
        assert!(w.w_f + 3.0 * w.w_l < w.w_b && w.w_b < w.w_f);
        assert!(w.w_b < w.w_t + 3.0 * w.w_l);
        for k in 1..=12 {
            w.certify(k).unwrap();
        }
    }

    #[test]
    fn boundary_blue_weight_ties() {
        // W_B = 2W_l + W_F puts one-true-literal inputs on an F/B tie
        let w = ClauseWeights::unchecked(-1.0, 0.5, 6.0, 1.0, -1.0);
        assert!(w.satisfies_simplified());
        assert!(w.certify(3).is_err());
        assert!(ClauseWeights::new(-1.0, 0.5, 6.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn merged_source_magnitudes() {
        let m = merge_sources(&ClauseWeights::unchecked(-1.0, 0.5, 6.0, 1.0, -1.0));
        assert!((m.magnitude - 39f64.sqrt()).abs() < 1e-12);
        let m = merge_sources(&default_clause_weights());
        assert!((m.magnitude - 43.75f64.sqrt()).abs() < 1e-12);
        let m = merge_sources(&ClauseWeights::unchecked(-1.0, 0.5, 1.0, 1.0, 1.0));
        assert!(m.magnitude.abs() < 1e-12);
        assert_eq!(m.angle, 0.0);
    }

    #[test]
    fn small_counts() {
        let w = default_clause_weights();
        let net = build_sat_network(&Cnf::new(1), &w, false).unwrap();
        assert_eq!(net.counts(), NetworkCounts { nodes: 5, connections: 6 });
        let mut f = Cnf::new(3);
        f.add_clause([Lit::pos(0), Lit::neg(1), Lit::pos(2)]);
        let a = build_sat_network(&f, &w, false).unwrap().counts();
        let b = build_sat_network(&f, &w, true).unwrap().counts();
        assert_eq!(a, NetworkCounts { nodes: 10, connections: 18 });
        assert_eq!(b, NetworkCounts { nodes: 10, connections: 16 });
    }

    #[test]
    fn degenerate_clauses_rejected() {
        let w = default_clause_weights();
        let mut f = Cnf::new(2);
        f.add_clause([Lit::pos(0), Lit::neg(0)]);
        assert!(matches!(build_sat_network(&f, &w, false), Err(BuildError::Tautology(0))));
        let mut f = Cnf::new(2);
        f.add_clause([Lit::pos(1)]);
        f.add_clause([]);
        assert!(matches!(build_sat_network(&f, &w, false), Err(BuildError::EmptyClause(1))));
    }

    #[test]
    fn clause_node_follows_truth_table() {
        let mut f = Cnf::new(3);
        f.add_clause([Lit::pos(0), Lit::pos(1), Lit::pos(2)]);
        for merge in [false, true] {
            let net = build_sat_network(&f, &default_clause_weights(), merge).unwrap();
            let r = net.clause_nodes[0];
            for mask in 0..8u32 {
                let a: Vec<bool> = (0..3).map(|i| mask >> i & 1 == 1).collect();
                let mut s = net.encode_assignment(&a);
                for start in SpinLabel::ALL {
                    s.set(r, start);
                    let want = if mask == 0 { SpinLabel::F } else { SpinLabel::B };
                    assert_eq!(hopfield_step(&net.graph, &s, r).unwrap(), want);
                }
            }
        }
    }

    #[test]
    fn merged_and_separate_fields_agree() {
        let mut f = Cnf::new(4);
        f.add_clause([Lit::pos(0), Lit::neg(1)]);
        f.add_clause([Lit::pos(0), Lit::pos(1), Lit::neg(2), Lit::pos(3)]);
        let w = default_clause_weights();
        let a = build_sat_network(&f, &w, false).unwrap();
        let b = build_sat_network(&f, &w, true).unwrap();
        let s = a.encode_assignment(&[false, true, true, false]);
        for &r in &a.clause_nodes {
            let ha = local_field(&a.graph, &s, r).unwrap();
            let hb = local_field(&b.graph, &s, r).unwrap();
            assert!((ha[0] - hb[0]).abs() < 1e-12 && (ha[1] - hb[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn single_clause_from_all_false_gets_satisfied() {
        let mut f = Cnf::new(3);
        f.add_clause([Lit::pos(0), Lit::pos(1), Lit::pos(2)]);
        let net = build_sat_network(&f, &default_clause_weights(), false).unwrap();
        let init = net.encode_assignment(&[false, false, false]);
        let tr = hopfield_solve(&net.graph, &init, &SweepConfig::default()).unwrap();
        assert!(tr.converged);
        assert!(f.is_satisfied_by(&net.decode(&tr.final_state)));
        assert!(net.is_complementary(&tr.final_state));
    }

    #[test]
    fn satisfying_assignments_are_fixed_points() {
        let mut f = Cnf::new(3);
        f.add_clause([Lit::pos(0), Lit::neg(1)]);
        f.add_clause([Lit::pos(1), Lit::pos(2), Lit::neg(0)]);
        f.add_clause([Lit::neg(2)]);
        let net = build_sat_network(&f, &default_clause_weights(), false).unwrap();
        for mask in 0..8u32 {
            let a: Vec<bool> = (0..3).map(|i| mask >> i & 1 == 1).collect();
            let s = net.encode_assignment(&a);
            let fixed = net
                .graph
                .free_nodes()
                .into_iter()
                .all(|i| hopfield_step(&net.graph, &s, i).unwrap() == s.get(i));
            assert_eq!(fixed, f.is_satisfied_by(&a), "{a:?}");
        }
    }
}
