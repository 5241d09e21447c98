//! Closed-form resource counts for the clause encodings.
//!
//! Each encoding is summarized by its clause-length histogram, computed
//! from the problem parameters alone. The mixed k-SAT row reads off the
//! histogram directly; the 3-SAT row applies the auxiliary-variable
//! expansion per clause length. The printed table formulas are evaluated
//! alongside so disagreements can be reported.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::Cnf;
use crate::netbuilder::sat::NetworkCounts;
use crate::problem::{directed_adjacency, undirected_adjacency, ProblemInstance};

use super::greedy_coloring_bound;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CountError {
    #[error("outside the formula's assumptions: {0}")]
    OutOfAssumption(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SatCounts {
    pub vars: usize,
    pub clauses: usize,
    pub l_total: usize,
}

impl SatCounts {
    pub fn l_avg(&self) -> f64 {
        if self.clauses == 0 {
            0.0
        } else {
            self.l_total as f64 / self.clauses as f64
        }
    }
}

/// A table row exactly as printed, evaluated at the parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrintedCounts {
    pub vars: f64,
    pub clauses: f64,
    pub l_avg: f64,
    pub l_total: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CountParams {
    /// `lengths` lists every clause length; all clauses have length 3
    /// when omitted.
    Sat {
        v: usize,
        c: usize,
        #[serde(default)]
        lengths: Option<Vec<usize>>,
    },
    /// `neighbors[i]` is the number of (out-)neighbours of vertex `i`.
    HamiltonPath { neighbors: Vec<usize> },
    HamiltonCircle { neighbors: Vec<usize>, edges: usize },
    Clique { n: usize, edges: usize, k: usize },
    NodeCover { n: usize, edges: usize, k: usize },
    /// One vertex's clause block.
    Chromatic { n: usize, k: usize },
    /// One vertex's clause block.
    FeedbackNodeSet { n: usize },
    /// `sizes[j]` is the number of sets holding element `j`.
    ExactCover { sets: usize, sizes: Vec<usize> },
    Ip01 { n: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub table: String,
    pub mixed: Option<SatCounts>,
    pub three_sat: Option<SatCounts>,
    pub printed_mixed: Option<PrintedCounts>,
    pub printed_three_sat: Option<PrintedCounts>,
    /// Clause network for the whole formula, three sources per clause.
    pub network: NetworkCounts,
    /// Same with merged biased sources.
    pub network_merged: NetworkCounts,
    pub printed_network: Option<(NetworkCounts, NetworkCounts)>,
    /// Rows count one vertex's clause block.
    pub per_block: bool,
    pub notes: Vec<String>,
}

/// Auxiliary variables and clauses produced when one clause of length
/// `len ≥ 1` is expanded to 3-SAT.
pub fn expansion_cost(len: usize) -> (usize, usize) {
    match len {
        0 => (0, 1),
        1 => (2, 4),
        2 => (1, 2),
        3 => (0, 1),
        k => (k - 3, k - 2),
    }
}

type Histogram = Vec<(usize, usize)>;

fn mixed_of(vars: usize, h: &Histogram) -> SatCounts {
    SatCounts {
        vars,
        clauses: h.iter().map(|&(_, c)| c).sum(),
        l_total: h.iter().map(|&(l, c)| l * c).sum(),
    }
}

fn three_sat_of(vars: usize, h: &Histogram) -> SatCounts {
    let aux: usize = h.iter().map(|&(l, c)| expansion_cost(l).0 * c).sum();
    let clauses: usize = h.iter().map(|&(l, c)| expansion_cost(l).1 * c).sum();
    SatCounts {
        vars: vars + aux,
        clauses,
        l_total: 3 * clauses,
    }
}

fn network_of(m: SatCounts) -> (NetworkCounts, NetworkCounts) {
    let nodes = 2 * m.vars + m.clauses + 3;
    let base = 3 * m.vars + m.l_total + 3;
    (
        NetworkCounts {
            nodes,
            connections: base + 3 * m.clauses,
        },
        NetworkCounts {
            nodes,
            connections: base + m.clauses,
        },
    )
}

fn choose2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn printed(vars: f64, clauses: f64, l_avg: f64, l_total: f64) -> PrintedCounts {
    PrintedCounts {
        vars,
        clauses,
        l_avg,
        l_total,
    }
}

struct Derivation {
    table: &'static str,
    vars: usize,
    block: Histogram,
    full: Histogram,
    printed_mixed: Option<PrintedCounts>,
    printed_three: Option<PrintedCounts>,
    per_block: bool,
    notes: Vec<String>,
}

pub fn predict_resources(params: &CountParams) -> Result<CountReport, CountError> {
    let oob = |m: &str| Err(CountError::OutOfAssumption(m.to_string()));
    let d = match params {
        CountParams::Sat { v, c, lengths } => {
            let lens = lengths.clone().unwrap_or_else(|| vec![3; *c]);
            if lens.len() != *c {
                return oob("lengths must list one entry per clause");
            }
            if lens.contains(&0) {
                return oob("empty clauses have no network");
            }
            let mut h: Histogram = Vec::new();
            for l in lens {
                match h.iter_mut().find(|(k, _)| *k == l) {
                    Some(e) => e.1 += 1,
                    None => h.push((l, 1)),
                }
            }
            Derivation {
                table: "sat",
                vars: *v,
                block: h.clone(),
                full: h,
                printed_mixed: None,
                printed_three: None,
                per_block: false,
                notes: Vec::new(),
            }
        }
        CountParams::HamiltonPath { neighbors } | CountParams::HamiltonCircle { neighbors, .. } => {
            let circle = matches!(params, CountParams::HamiltonCircle { .. });
            let n = neighbors.len();
            if n < 2 {
                return oob("Hamilton encodings need n ≥ 2");
            }
            let mut notes = Vec::new();
            if neighbors.contains(&0) {
                notes.push("some vertex has no neighbours (N_i ≥ 1 assumed)".into());
            }
            let mut h: Histogram = vec![(n, 2 * n), (2, n * n * (n - 1))];
            for &ni in neighbors {
                h.push((1 + ni, if circle { n } else { n - 1 }));
            }
            let nf = n as f64;
            let (pm, pt) = if let CountParams::HamiltonCircle { edges, .. } = params {
                let e = *edges as f64;
                (
                    printed(
                        nf.powi(3) + 2.0 * nf,
                        nf * nf,
                        (2.0 * nf * nf + 2.0 * e) / (nf * nf + 2.0),
                        2.0 * nf.powi(3) + 2.0 * e * nf,
                    ),
                    printed(
                        2.0 * nf.powi(3) + nf * nf - 4.0 * nf + 2.0 * e * nf,
                        nf.powi(3) + 2.0 * nf * nf - 6.0 * nf + 2.0 * e * nf,
                        3.0,
                        6.0 * nf.powi(3) + 3.0 * nf * nf - 12.0 * nf + 6.0 * e * nf,
                    ),
                )
            } else {
                // the printed sums run over i = 1..n−1 only
                let s: f64 = neighbors[..n - 1].iter().sum::<usize>() as f64;
                let v3 = 2.0 * nf.powi(3) + nf * nf - 4.0 * nf + nf * s;
                (
                    printed(
                        nf.powi(3) + 2.0 * nf,
                        nf * nf,
                        (2.0 * nf * nf + s) / (nf * nf + 2.0),
                        2.0 * nf.powi(3) + s,
                    ),
                    printed(
                        v3,
                        nf.powi(3) + 2.0 * nf * nf - 6.0 * nf + nf * s,
                        3.0,
                        3.0 * v3,
                    ),
                )
            };
            notes.push(
                "printed mixed #v and #c are exchanged: the encoding has n² variables and \
                 n³ + 2n (circle) or n³ + n (path) clauses"
                    .into(),
            );
            if !circle {
                notes.push(
                    "printed path sums cover i = 1..n−1; the encoding uses every vertex".into(),
                );
            }
            Derivation {
                table: if circle { "hamilton_circle" } else { "hamilton_path" },
                vars: n * n,
                block: h.clone(),
                full: h,
                printed_mixed: Some(pm),
                printed_three: Some(pt),
                per_block: false,
                notes,
            }
        }
        CountParams::Clique { n, edges, k } => {
            if *n <= 3 {
                return oob("the clique formulas assume n > 3");
            }
            if *k == 0 || *edges > choose2(*n) {
                return oob("need k ≥ 1 and |E| ≤ n(n−1)/2");
            }
            let (n, e, k) = (*n, *edges, *k);
            let binary = n * choose2(k) + k * choose2(n) + (choose2(n) - e) * k * (k - 1);
            let h: Histogram = vec![(n, k), (2, binary)];
            let (nf, ef, kf) = (n as f64, e as f64, k as f64);
            let c = (kf * kf + kf) / 4.0 * nf * nf + (3.0 * kf * kf - kf) / 4.0 * nf + kf
                - kf * (kf - 1.0) / 2.0 * ef;
            let lt = (kf * kf + kf) / 2.0 * nf * nf + (kf * kf - kf) / 2.0 * nf
                - kf * (kf - 1.0) * ef;
            let c3 = (kf * kf + kf) / 2.0 * nf * nf + kf * kf * nf - (2.0 + (kf - 1.0) * ef) * kf;
            Derivation {
                table: "clique",
                vars: k * n,
                block: h.clone(),
                full: h,
                printed_mixed: Some(printed(kf * nf, c, c / lt, lt)),
                printed_three: Some(printed(
                    (kf * kf + kf) / 4.0 * nf * nf + (kf * kf + 5.0 * kf) / 4.0 * nf
                        - (3.0 * kf + kf * (kf - 1.0) / 2.0 * ef),
                    c3,
                    3.0,
                    3.0 * c3,
                )),
                per_block: false,
                notes: vec![
                    "non-adjacency clauses are emitted for both position orders".into(),
                ],
            }
        }
        CountParams::NodeCover { n, edges, k } => {
            if *k == 0 || k > n {
                return oob("need 1 ≤ k ≤ |V|");
            }
            let (n, e, k) = (*n, *edges, *k);
            let h: Histogram = vec![(n, k), (2, n * choose2(k) + k * choose2(n)), (2 * k, e)];
            let (nf, ef, kf) = (n as f64, e as f64, k as f64);
            let c = kf + ef + 0.5 * kf * nf * (kf + nf - 2.0);
            let lt = kf * nf + 2.0 * kf * ef + kf * nf * (kf + nf - 2.0);
            let c3 = -2.0 * kf + 2.0 * ef * (kf - 1.0) + kf * nf * (kf + nf - 1.0);
            let mut notes = Vec::new();
            if n < 3 || k < 2 {
                notes.push("printed 3-SAT row assumes |V| ≥ 3 and k ≥ 2".into());
            }
            Derivation {
                table: "node_cover",
                vars: k * n,
                block: h.clone(),
                full: h,
                printed_mixed: Some(printed(kf * nf, c, lt / c, lt)),
                printed_three: Some(printed(
                    -3.0 * kf + ef * (2.0 * kf - 3.0) + 0.5 * kf * nf * (kf + nf + 2.0),
                    c3,
                    3.0,
                    -6.0 * kf + 6.0 * ef * (kf - 1.0) + 3.0 * kf * nf * (kf + nf - 1.0),
                )),
                per_block: false,
                notes,
            }
        }
        CountParams::Chromatic { n, k } => {
            if *k == 0 || *n == 0 {
                return oob("need n ≥ 1 and k ≥ 1");
            }
            let (n, k) = (*n, *k);
            let block: Histogram = vec![(k, 1), (2, choose2(k))];
            let full: Histogram = vec![(k, n), (2, n * choose2(k))];
            let (nf, kf) = (n as f64, k as f64);
            let mut notes = Vec::new();
            if k < 3 {
                notes.push("printed 3-SAT row assumes k ≥ 3".into());
            }
            Derivation {
                table: "chromatic",
                vars: k * n,
                block,
                full,
                printed_mixed: Some(printed(
                    kf * nf,
                    1.0 + 0.5 * kf * (kf - 1.0),
                    kf * kf / (1.0 + 0.5 * kf * (kf - 1.0)),
                    kf * kf,
                )),
                printed_three: Some(printed(
                    kf * nf + 0.5 * kf * (kf + 1.0) - 3.0,
                    kf * kf - 2.0,
                    3.0,
                    3.0 * kf * kf - 6.0,
                )),
                per_block: true,
                notes,
            }
        }
        CountParams::FeedbackNodeSet { n } => {
            if *n < 2 {
                return oob("need |V| ≥ 2");
            }
            let n = *n;
            let nf = n as f64;
            Derivation {
                table: "feedback_node_set",
                vars: n * n,
                block: vec![(2, choose2(n))],
                full: vec![(2, n * choose2(n))],
                printed_mixed: Some(printed(nf * nf, 0.5 * nf * (nf - 1.0), 2.0, nf * (nf - 1.0))),
                printed_three: Some(printed(
                    0.5 * nf * (3.0 * nf - 1.0),
                    nf * (nf - 1.0),
                    3.0,
                    3.0 * nf * (nf - 1.0),
                )),
                per_block: true,
                notes: Vec::new(),
            }
        }
        CountParams::ExactCover { sets, sizes } => {
            if sizes.contains(&0) {
                return oob("every element must lie in some set");
            }
            if sizes.iter().any(|&s| s > *sets) {
                return oob("an element lies in more sets than exist");
            }
            let mut h: Histogram = Vec::new();
            for &s in sizes {
                h.push((s, 1));
                h.push((2, choose2(s)));
            }
            let nf = sizes.len() as f64;
            let half: f64 = sizes.iter().map(|&s| 0.5 * (s * (s + 1)) as f64).sum();
            let sq: f64 = sizes.iter().map(|&s| (s * s) as f64).sum();
            let full: f64 = 2.0 * half;
            Derivation {
                table: "exact_cover",
                vars: *sets,
                block: h.clone(),
                full: h,
                printed_mixed: Some(printed(*sets as f64, half, 2.0 * sq / full, sq)),
                printed_three: Some(printed(half - 3.0 * nf, full - 3.0 * nf, 3.0, 3.0 * full - 9.0 * nf)),
                per_block: false,
                notes: vec!["printed #c counts s(s+1)/2 clauses per element; the encoding \
                             emits one at-least-one clause and s(s−1)/2 exclusions"
                    .into()],
            }
        }
        CountParams::Ip01 { n } => {
            let n = *n;
            let frag = NetworkCounts {
                nodes: n,
                connections: n + 3 * choose2(n),
            };
            return Ok(CountReport {
                table: "ip01".into(),
                mixed: None,
                three_sat: None,
                printed_mixed: None,
                printed_three_sat: None,
                network: frag,
                network_merged: frag,
                printed_network: Some((frag, frag)),
                per_block: false,
                notes: vec!["fragment only: decision nodes and their couplings".into()],
            });
        }
    };
    let full = mixed_of(d.vars, &d.full);
    let (network, network_merged) = network_of(full);
    let printed_network = match params {
        CountParams::Sat { v, c, .. } => Some((
            NetworkCounts {
                nodes: 2 * v + c + 3,
                connections: 3 * v + 6 * c + 3,
            },
            NetworkCounts {
                nodes: 2 * v + c + 3,
                connections: 3 * v + 4 * c + 3,
            },
        )),
        _ => None,
    };
    Ok(CountReport {
        table: d.table.into(),
        mixed: Some(mixed_of(d.vars, &d.block)),
        three_sat: Some(three_sat_of(d.vars, &d.block)),
        printed_mixed: d.printed_mixed,
        printed_three_sat: d.printed_three,
        network,
        network_merged,
        printed_network,
        per_block: d.per_block,
        notes: d.notes,
    })
}

impl CountReport {
    /// Printed entries that differ from the derived counts.
    pub fn discrepancies(&self) -> Vec<String> {
        let mut out = Vec::new();
        let rows = [
            ("mixed", self.mixed, self.printed_mixed),
            ("3-SAT", self.three_sat, self.printed_three_sat),
        ];
        for (name, got, want) in rows {
            let (Some(g), Some(p)) = (got, want) else {
                continue;
            };
            for (field, d, pv) in [
                ("#v", g.vars as f64, p.vars),
                ("#c", g.clauses as f64, p.clauses),
                ("l_avg", g.l_avg(), p.l_avg),
                ("l_total", g.l_total as f64, p.l_total),
            ] {
                if (d - pv).abs() > 1e-9 * d.abs().max(1.0) {
                    out.push(format!("{} {name} {field}: printed {pv}, derived {d}", self.table));
                }
            }
        }
        if let Some((a, b)) = self.printed_network {
            if a != self.network || b != self.network_merged {
                out.push(format!("{} network counts differ from the printed row", self.table));
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("row,source,vars,clauses,l_avg,l_total\n");
        let fmt = |x: f64| format!("{x}");
        for (name, d, p) in [
            ("mixed", self.mixed, self.printed_mixed),
            ("3sat", self.three_sat, self.printed_three_sat),
        ] {
            if let Some(d) = d {
                s.push_str(&format!(
                    "{name},derived,{},{},{},{}\n",
                    d.vars,
                    d.clauses,
                    fmt(d.l_avg()),
                    d.l_total
                ));
            }
            if let Some(p) = p {
                s.push_str(&format!(
                    "{name},printed,{},{},{},{}\n",
                    fmt(p.vars),
                    fmt(p.clauses),
                    fmt(p.l_avg),
                    fmt(p.l_total)
                ));
            }
        }
        s
    }
}

/// Mixed and 3-SAT counts of a whole formula; the 3-SAT row comes from
/// the actual expansion.
pub fn measure_cnf(f: &Cnf) -> (SatCounts, SatCounts) {
    let three = f.to_3sat();
    (
        SatCounts {
            vars: f.num_vars,
            clauses: f.num_clauses(),
            l_total: f.total_literals(),
        },
        SatCounts {
            vars: three.num_vars,
            clauses: three.num_clauses(),
            l_total: three.total_literals(),
        },
    )
}

/// Counts of the clauses whose variables all lie in `block`; variable
/// totals are for the whole formula plus the block's auxiliaries.
pub fn measure_block(f: &Cnf, block: std::ops::Range<usize>) -> (SatCounts, SatCounts) {
    let sub = Cnf {
        num_vars: f.num_vars,
        clauses: f
            .clauses
            .iter()
            .filter(|c| c.iter().all(|l| block.contains(&l.var)))
            .cloned()
            .collect(),
    };
    measure_cnf(&sub)
}

/// Count parameters for instances covered by the tables.
pub fn params_of(inst: &ProblemInstance) -> Option<CountParams> {
    let distinct = |n: usize, edges: &[(usize, usize)]| -> usize {
        undirected_adjacency(n, edges).iter().map(|s| s.len()).sum::<usize>() / 2
    };
    match inst {
        ProblemInstance::Sat { num_vars, clauses } => Some(CountParams::Sat {
            v: *num_vars,
            c: clauses.len(),
            lengths: Some(clauses.iter().map(Vec::len).collect()),
        }),
        ProblemInstance::Hamilton {
            n,
            edges,
            directed,
            circle,
        } => {
            let adj = if *directed {
                directed_adjacency(*n, edges)
            } else {
                undirected_adjacency(*n, edges)
            };
            let neighbors: Vec<usize> = adj.iter().map(|s| s.len()).collect();
            Some(if *circle {
                let e = if *directed {
                    neighbors.iter().sum()
                } else {
                    distinct(*n, edges)
                };
                CountParams::HamiltonCircle { neighbors, edges: e }
            } else {
                CountParams::HamiltonPath { neighbors }
            })
        }
        ProblemInstance::Clique { n, edges, k } => Some(CountParams::Clique {
            n: *n,
            edges: distinct(*n, edges),
            k: *k,
        }),
        ProblemInstance::NodeCover { n, edges, k } => Some(CountParams::NodeCover {
            n: *n,
            edges: edges.len(),
            k: (*k).min(*n),
        }),
        ProblemInstance::Chromatic { n, edges, k } => Some(CountParams::Chromatic {
            n: *n,
            k: k.unwrap_or_else(|| greedy_coloring_bound(*n, edges)),
        }),
        ProblemInstance::FeedbackNodeSet { n, .. } => Some(CountParams::FeedbackNodeSet { n: *n }),
        ProblemInstance::ExactCover { universe, sets } => {
            let mut sizes = vec![0usize; *universe];
            for s in sets {
                let mut seen = s.clone();
                seen.sort_unstable();
                seen.dedup();
                for e in seen {
                    sizes[e] += 1;
                }
            }
            Some(CountParams::ExactCover {
                sets: sets.len(),
                sizes,
            })
        }
        ProblemInstance::Ip01 { c, .. } => Some(CountParams::Ip01 {
            n: c.first().map_or(0, Vec::len),
        }),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sat_network_rows() {
        let r = predict_resources(&CountParams::Sat { v: 110, c: 1400, lengths: None }).unwrap();
        assert_eq!(r.network.connections, 8733);
        assert_eq!(r.network_merged.connections, 5933);
        assert_eq!(r.network.nodes, 2 * 110 + 1400 + 3);
        assert!(r.discrepancies().is_empty());
    }

    #[test]
    fn chromatic_block_k3() {
        let r = predict_resources(&CountParams::Chromatic { n: 5, k: 3 }).unwrap();
        assert_eq!(r.mixed.unwrap().l_total, 9);
        assert_eq!(r.three_sat.unwrap().l_total, 21);
        assert!(r.discrepancies().is_empty());
    }

    #[test]
    fn fns_block() {
        let r = predict_resources(&CountParams::FeedbackNodeSet { n: 3 }).unwrap();
        assert_eq!(r.mixed.unwrap().clauses, 3);
        assert!(r.discrepancies().is_empty());
    }

    #[test]
    fn hamilton_circle_n4_printed_vars() {
        let r = predict_resources(&CountParams::HamiltonCircle {
            neighbors: vec![2; 4],
            edges: 4,
        })
        .unwrap();
        assert_eq!(r.printed_mixed.unwrap().vars, 72.0);
        assert_eq!(r.mixed.unwrap().clauses, 72);
        assert_eq!(r.mixed.unwrap().vars, 16);
    }

    #[test]
    fn exact_cover_printed_clause_count() {
        let r = predict_resources(&CountParams::ExactCover { sets: 3, sizes: vec![2, 2, 2] }).unwrap();
        assert_eq!(r.printed_mixed.unwrap().clauses, 9.0);
        assert_eq!(r.mixed.unwrap().clauses, 6);
        assert_eq!(r.mixed.unwrap().l_total, 12);
    }

    #[test]
    fn clique_needs_n_above_3() {
        assert!(predict_resources(&CountParams::Clique { n: 3, edges: 2, k: 2 }).is_err());
    }

    #[test]
    fn node_cover_printed_rows_match() {
        let r = predict_resources(&CountParams::NodeCover { n: 4, edges: 3, k: 2 }).unwrap();
        assert!(r.discrepancies().is_empty(), "{:?}", r.discrepancies());
    }

    #[test]
    fn expansion_matches_cnf_transform() {
        for len in 1..=8 {
            let mut f = Cnf::new(len);
            f.add_clause((0..len).map(crate::cnf::Lit::pos));
            let t = f.to_3sat();
            assert_eq!((t.num_vars - len, t.num_clauses()), expansion_cost(len));
        }
    }
}
