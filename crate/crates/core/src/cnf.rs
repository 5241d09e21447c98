//! CNF formulas over signed literals, DIMACS I/O and 3-SAT expansion.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CnfError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("clause {0} is empty")]
    EmptyClause(usize),
    #[error("clause {0} contains a literal and its negation")]
    Tautology(usize),
    #[error("variable {var} out of range (formula has {num_vars})")]
    VarOutOfRange { var: usize, num_vars: usize },
}

/// A literal over a 0-based variable index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Lit {
    pub var: usize,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Self {
        Lit { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        Lit {
            var,
            positive: false,
        }
    }

    pub fn negate(self) -> Self {
        Lit {
            var: self.var,
            positive: !self.positive,
        }
    }

    /// From a non-zero DIMACS integer (1-based, sign = polarity).
    pub fn from_dimacs(x: i64) -> Option<Self> {
        if x == 0 {
            return None;
        }
        let var = (x.unsigned_abs() - 1) as usize;
        Some(Lit {
            var,
            positive: x > 0,
        })
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.positive {
            v
        } else {
            -v
        }
    }

    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var] == self.positive
    }
}

/// Sorted, deduplicated literals of a clause, or the reason it is
/// degenerate.
pub fn normalize_clause(lits: &[Lit]) -> Result<Vec<Lit>, NormalizeIssue> {
    let set: BTreeSet<Lit> = lits.iter().copied().collect();
    if set.is_empty() {
        return Err(NormalizeIssue::Empty);
    }
    if set.iter().any(|l| set.contains(&l.negate())) {
        return Err(NormalizeIssue::Tautology);
    }
    Ok(set.into_iter().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalizeIssue {
    Empty,
    Tautology,
}

/// Mixed-length CNF.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<Lit>>,
}

impl Cnf {
    pub fn new(num_vars: usize) -> Self {
        Cnf {
            num_vars,
            clauses: Vec::new(),
        }
    }

    pub fn new_var(&mut self) -> usize {
        self.num_vars += 1;
        self.num_vars - 1
    }

    pub fn add_clause(&mut self, lits: impl IntoIterator<Item = Lit>) {
        self.clauses.push(lits.into_iter().collect());
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn total_literals(&self) -> usize {
        self.clauses.iter().map(Vec::len).sum()
    }

    pub fn avg_clause_len(&self) -> f64 {
        if self.clauses.is_empty() {
            0.0
        } else {
            self.total_literals() as f64 / self.clauses.len() as f64
        }
    }

    pub fn max_clause_len(&self) -> usize {
        self.clauses.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| l.eval(assignment)))
    }

    pub fn unsatisfied_count(&self, assignment: &[bool]) -> usize {
        self.clauses
            .iter()
            .filter(|c| !c.iter().any(|l| l.eval(assignment)))
            .count()
    }

    /// Checks variable ranges, then rejects empty and tautological clauses.
    pub fn validate(&self) -> Result<(), CnfError> {
        for (ci, c) in self.clauses.iter().enumerate() {
            for l in c {
                if l.var >= self.num_vars {
                    return Err(CnfError::VarOutOfRange {
                        var: l.var,
                        num_vars: self.num_vars,
                    });
                }
            }
            match normalize_clause(c) {
                Ok(_) => {}
                Err(NormalizeIssue::Empty) => return Err(CnfError::EmptyClause(ci)),
                Err(NormalizeIssue::Tautology) => return Err(CnfError::Tautology(ci)),
            }
        }
        Ok(())
    }

    /// Drops duplicate literals and duplicate clauses (first occurrence
    /// kept); tautologies are removed.
    pub fn simplified(&self) -> Cnf {
        let mut seen = BTreeSet::new();
        let mut out = Cnf::new(self.num_vars);
        for c in &self.clauses {
            match normalize_clause(c) {
                Ok(n) => {
                    if seen.insert(n.clone()) {
                        out.clauses.push(n);
                    }
                }
                Err(NormalizeIssue::Tautology) => {}
                Err(NormalizeIssue::Empty) => out.clauses.push(Vec::new()),
            }
        }
        out
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                let _ = write!(s, "{} ", l.to_dimacs());
            }
            s.push_str("0\n");
        }
        s
    }

    /// Standard auxiliary-variable expansion to clauses of length exactly 3.
    /// Unit clauses take two fresh variables (4 clauses), binary clauses one
    /// (2 clauses), and a clause of length k > 3 is chained with k − 3 fresh
    /// variables into k − 2 clauses. Original variables keep their indices.
    pub fn to_3sat(&self) -> Cnf {
        let mut out = Cnf::new(self.num_vars);
        for c in &self.clauses {
            match c.len() {
                0 => out.clauses.push(Vec::new()),
                1 => {
                    let (a, b) = (out.new_var(), out.new_var());
                    let l = c[0];
                    for (pa, pb) in [(true, true), (true, false), (false, true), (false, false)] {
                        out.add_clause([
                            l,
                            Lit { var: a, positive: pa },
                            Lit { var: b, positive: pb },
                        ]);
                    }
                }
                2 => {
                    let a = out.new_var();
                    out.add_clause([c[0], c[1], Lit::pos(a)]);
                    out.add_clause([c[0], c[1], Lit::neg(a)]);
                }
                3 => out.clauses.push(c.clone()),
                k => {
                    let mut prev = out.new_var();
                    out.add_clause([c[0], c[1], Lit::pos(prev)]);
                    for &l in &c[2..k - 2] {
                        let next = out.new_var();
                        out.add_clause([Lit::neg(prev), l, Lit::pos(next)]);
                        prev = next;
                    }
                    out.add_clause([Lit::neg(prev), c[k - 2], c[k - 1]]);
                }
            }
        }
        out
    }
}

/// Parses DIMACS CNF. Clauses may span lines; `c` lines are comments and a
/// line starting with `%` ends the clause section.
pub fn parse_dimacs(text: &str) -> Result<Cnf, CnfError> {
    let mut header: Option<(usize, usize)> = None;
    let mut cnf = Cnf::new(0);
    let mut current: Vec<Lit> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(CnfError::Parse {
                    line: line_no,
                    msg: "duplicate problem line".into(),
                });
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(CnfError::Parse {
                    line: line_no,
                    msg: format!("expected `p cnf <vars> <clauses>`, got {line:?}"),
                });
            }
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|_| CnfError::Parse {
                    line: line_no,
                    msg: format!("bad count {s:?}"),
                })
            };
            let (v, c) = (parse(parts[2])?, parse(parts[3])?);
            cnf.num_vars = v;
            header = Some((v, c));
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(CnfError::Parse {
                line: line_no,
                msg: "clause before problem line".into(),
            });
        };
        for tok in line.split_whitespace() {
            let x: i64 = tok.parse().map_err(|_| CnfError::Parse {
                line: line_no,
                msg: format!("bad literal {tok:?}"),
            })?;
            match Lit::from_dimacs(x) {
                None => cnf.clauses.push(std::mem::take(&mut current)),
                Some(l) => {
                    if l.var >= num_vars {
                        return Err(CnfError::Parse {
                            line: line_no,
                            msg: format!("variable {} exceeds declared {num_vars}", l.var + 1),
                        });
                    }
                    current.push(l);
                }
            }
        }
    }
    let Some((_, declared)) = header else {
        return Err(CnfError::Parse {
            line: last_line.max(1),
            msg: "missing `p cnf` problem line".into(),
        });
    };
    if !current.is_empty() {
        cnf.clauses.push(current);
    }
    if cnf.clauses.len() != declared {
        return Err(CnfError::Parse {
            line: last_line.max(1),
            msg: format!(
                "header declares {declared} clauses, found {}",
                cnf.clauses.len()
            ),
        });
    }
    Ok(cnf)
}
