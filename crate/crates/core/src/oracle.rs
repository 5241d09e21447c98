//! Brute-force ground truth and feasibility checkers.
//!
//! Checkers work from the problem definitions only; nothing here touches
//! the encoders.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::netbuilder::{Dir, Maze};
use crate::problem::{GateSpec, ProblemInstance, Sense, Witness};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("search space of {needed} exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("malformed witness: {0}")]
    Malformed(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub states: u128,
    pub permutations: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            states: 1 << 24,
            permutations: 10_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub feasible: bool,
    pub optimum: Option<f64>,
    pub witness: Option<Witness>,
}

impl OracleVerdict {
    fn infeasible() -> Self {
        OracleVerdict {
            feasible: false,
            optimum: None,
            witness: None,
        }
    }

    fn found(w: Witness, optimum: Option<f64>) -> Self {
        OracleVerdict {
            feasible: true,
            optimum,
            witness: Some(w),
        }
    }
}

fn malformed<T>(m: impl Into<String>) -> Result<T, OracleError> {
    Err(OracleError::Malformed(m.into()))
}

fn neighbours(n: usize, edges: &[(usize, usize)]) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); n];
    for &(u, v) in edges {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    adj
}

fn out_neighbours(n: usize, edges: &[(usize, usize)]) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); n];
    for &(u, v) in edges {
        adj[u].insert(v);
    }
    adj
}

/// Kahn's algorithm on the arcs among `keep`.
fn is_acyclic(n: usize, arcs: &[(usize, usize)], keep: &[bool]) -> bool {
    let mut indeg = vec![0usize; n];
    let mut out = vec![Vec::new(); n];
    for &(u, v) in arcs {
        if keep[u] && keep[v] {
            out[u].push(v);
            indeg[v] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| keep[v] && indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(u) = queue.pop_front() {
        seen += 1;
        for &v in &out[u] {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                queue.push_back(v);
            }
        }
    }
    seen == keep.iter().filter(|&&k| k).count()
}

fn distinct_in_range(xs: &[usize], n: usize) -> bool {
    let set: BTreeSet<usize> = xs.iter().copied().collect();
    set.len() == xs.len() && xs.iter().all(|&x| x < n)
}

fn cut_value(edges: &[(usize, usize, i64)], side: &[bool]) -> i64 {
    edges
        .iter()
        .filter(|&&(u, v, _)| side[u] != side[v])
        .map(|&(_, _, w)| w)
        .sum()
}

fn unit_cut(edges: &[(usize, usize)], side: &[bool]) -> usize {
    let set: BTreeSet<(usize, usize)> = edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    set.iter().filter(|&&(u, v)| side[u] != side[v]).count()
}

fn tour_length(weights: &[Vec<f64>], order: &[usize]) -> f64 {
    let n = order.len();
    (0..n).map(|j| weights[order[j]][order[(j + 1) % n]]).sum()
}

/// Open neighbour of a maze cell, from the wall list alone.
fn maze_moves(m: &Maze, cell: usize) -> Vec<usize> {
    let (w, h) = (m.width, m.height);
    let (x, y) = (cell % w, cell / w);
    let blocked = |c: usize, d: Dir| m.walls.contains(&(c, d));
    let mut out = Vec::new();
    let cand = [
        (Dir::N, y > 0, cell.wrapping_sub(w), Dir::S),
        (Dir::E, x + 1 < w, cell + 1, Dir::W),
        (Dir::S, y + 1 < h, cell + w, Dir::N),
        (Dir::W, x > 0, cell.wrapping_sub(1), Dir::E),
    ];
    for (d, inside, nb, back) in cand {
        if inside && !blocked(cell, d) && !blocked(nb, back) {
            out.push(nb);
        }
    }
    out
}

fn bfs_path(n: usize, next: impl Fn(usize) -> Vec<usize>, s: usize, t: usize) -> Option<Vec<usize>> {
    let mut prev = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[s] = true;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        if u == t {
            let mut path = vec![t];
            let mut c = t;
            while c != s {
                c = prev[c];
                path.push(c);
            }
            path.reverse();
            return Some(path);
        }
        for v in next(u) {
            if !seen[v] {
                seen[v] = true;
                prev[v] = u;
                q.push_back(v);
            }
        }
    }
    None
}

fn circuit_table(inputs: usize, gates: &[GateSpec]) -> Result<Vec<Vec<bool>>, OracleError> {
    for (gi, g) in gates.iter().enumerate() {
        if g.inputs.iter().any(|&i| i >= inputs + gi) {
            return malformed(format!("gate {gi} reads an undefined signal"));
        }
    }
    (0..1usize << inputs)
        .map(|row| {
            let mut sig: Vec<bool> = (0..inputs).map(|i| row >> i & 1 == 1).collect();
            for g in gates {
                let ins: Vec<bool> = g.inputs.iter().map(|&i| sig[i]).collect();
                let ones = ins.iter().filter(|&&b| b).count();
                let out = match g.gate.to_ascii_lowercase().as_str() {
                    "and" => ones == ins.len(),
                    "or" => ones > 0,
                    "nand" => ones < ins.len(),
                    "nor" => ones == 0,
                    "not" if ins.len() == 1 => !ins[0],
                    "buf" if ins.len() == 1 => ins[0],
                    "xor" => ones % 2 == 1,
                    "xnor" => ones % 2 == 0,
                    other => return malformed(format!("unknown gate {other}")),
                };
                sig.push(out);
            }
            Ok(sig[inputs..].to_vec())
        })
        .collect()
}

/// Feasibility of `w` for `inst`, from the problem definition.
pub fn check(inst: &ProblemInstance, w: &Witness) -> Result<bool, OracleError> {
    use ProblemInstance as P;
    let shape = |len: usize, want: usize| -> Result<(), OracleError> {
        if len == want {
            Ok(())
        } else {
            malformed(format!("witness has {len} entries, expected {want}"))
        }
    };
    match (inst, w) {
        (P::Sat { num_vars, clauses }, Witness::Assignment(a)) => {
            shape(a.len(), *num_vars)?;
            Ok(clauses.iter().all(|c| {
                c.iter()
                    .any(|&l| a[l.unsigned_abs() as usize - 1] == (l > 0))
            }))
        }
        (P::Ip01 { c, b, .. }, Witness::Assignment(x)) => {
            shape(x.len(), c.first().map_or(0, Vec::len))?;
            Ok(c.iter().zip(b).all(|(row, &bi)| {
                row.iter().zip(x).filter(|(_, &xj)| xj).map(|(&cj, _)| cj).sum::<i64>() == bi
            }))
        }
        (
            P::Hamilton {
                n,
                edges,
                directed,
                circle,
            },
            Witness::Order(o),
        ) => {
            shape(o.len(), *n)?;
            if !distinct_in_range(o, *n) {
                return Ok(false);
            }
            let adj = if *directed {
                out_neighbours(*n, edges)
            } else {
                neighbours(*n, edges)
            };
            let steps = if *circle { *n } else { n - 1 };
            Ok((0..steps).all(|j| adj[o[j]].contains(&o[(j + 1) % n])))
        }
        (P::Tsp { weights, bound }, Witness::Order(o)) => {
            let n = weights.len();
            shape(o.len(), n)?;
            if !distinct_in_range(o, n) {
                return Ok(false);
            }
            Ok(bound.is_none_or(|b| tour_length(weights, o) <= b + 1e-9))
        }
        (P::Clique { n, edges, k }, Witness::Subset(s)) => {
            let adj = neighbours(*n, edges);
            Ok(distinct_in_range(s, *n)
                && s.len() >= *k
                && s.iter().all(|&u| s.iter().all(|&v| u == v || adj[u].contains(&v))))
        }
        (P::SetPacking { sets, k, .. }, Witness::Subset(s)) => {
            if !distinct_in_range(s, sets.len()) || s.len() < *k {
                return Ok(false);
            }
            let mut used = BTreeSet::new();
            Ok(s.iter().flat_map(|&i| &sets[i]).all(|e| used.insert(*e)))
        }
        (P::NodeCover { n, edges, k }, Witness::Subset(s)) => Ok(distinct_in_range(s, *n)
            && s.len() <= *k
            && edges.iter().all(|(u, v)| s.contains(u) || s.contains(v))),
        (P::SetCover { universe, sets, k }, Witness::Subset(s)) => {
            if !distinct_in_range(s, sets.len()) || k.is_some_and(|k| s.len() > k) {
                return Ok(false);
            }
            let covered: BTreeSet<usize> = s.iter().flat_map(|&i| sets[i].iter().copied()).collect();
            Ok(covered.len() == *universe)
        }
        (P::Chromatic { n, edges, k }, Witness::Coloring(c)) => {
            shape(c.len(), *n)?;
            let used: BTreeSet<usize> = c.iter().copied().collect();
            Ok(edges.iter().all(|&(u, v)| c[u] != c[v]) && k.is_none_or(|k| used.len() <= k))
        }
        (P::FeedbackNodeSet { n, edges, k, .. }, Witness::Subset(s)) => {
            if !distinct_in_range(s, *n) || k.is_some_and(|k| s.len() > k) {
                return Ok(false);
            }
            let keep: Vec<bool> = (0..*n).map(|v| !s.contains(&v)).collect();
            Ok(is_acyclic(*n, edges, &keep))
        }
        (P::FeedbackArcSet { n, edges, k, .. }, Witness::Subset(s)) => {
            if !distinct_in_range(s, edges.len()) || k.is_some_and(|k| s.len() > k) {
                return Ok(false);
            }
            let arcs: Vec<(usize, usize)> = edges
                .iter()
                .enumerate()
                .filter(|(i, _)| !s.contains(i))
                .map(|(_, &e)| e)
                .collect();
            Ok(is_acyclic(*n, &arcs, &vec![true; *n]))
        }
        (P::CliqueCover { n, edges, k }, Witness::Coloring(c)) => {
            shape(c.len(), *n)?;
            let adj = neighbours(*n, edges);
            let groups: BTreeSet<usize> = c.iter().copied().collect();
            let cliques = (0..*n).all(|u| (0..*n).all(|v| u == v || c[u] != c[v] || adj[u].contains(&v)));
            Ok(cliques && groups.len() <= *k)
        }
        (P::ExactCover { universe, sets }, Witness::Subset(s)) => {
            if !distinct_in_range(s, sets.len()) {
                return Ok(false);
            }
            let mut count = vec![0usize; *universe];
            for &i in s {
                for &e in &sets[i] {
                    count[e] += 1;
                }
            }
            Ok(count.iter().all(|&c| c == 1))
        }
        (P::HittingSet { universe, sets, k }, Witness::Subset(h)) => Ok(distinct_in_range(h, *universe)
            && h.len() <= *k
            && sets.iter().all(|c| c.iter().any(|e| h.contains(e)))),
        (P::ThreeDm { t, triples }, Witness::Subset(s)) => {
            if !distinct_in_range(s, triples.len()) || s.len() != *t {
                return Ok(false);
            }
            let (mut a, mut b, mut c) = (BTreeSet::new(), BTreeSet::new(), BTreeSet::new());
            Ok(s.iter().all(|&i| {
                let (x, y, z) = triples[i];
                a.insert(x) & b.insert(y) & c.insert(z)
            }))
        }
        (P::NumberPartitioning { numbers }, Witness::Partition(p)) => {
            shape(p.len(), numbers.len())?;
            let (mut l, mut r) = (0u64, 0u64);
            for (&s, &side) in numbers.iter().zip(p) {
                if side {
                    l += s;
                } else {
                    r += s;
                }
            }
            Ok(l == r)
        }
        (P::Knapsack { a, b }, Witness::Assignment(x)) => {
            shape(x.len(), a.len())?;
            Ok(a.iter().zip(x).filter(|(_, &xj)| xj).map(|(&aj, _)| aj).sum::<i64>() == *b)
        }
        (P::GraphPartitioning { n, min_cut_only, .. }, Witness::Partition(p)) => {
            shape(p.len(), *n)?;
            let ones = p.iter().filter(|&&x| x).count();
            Ok(if *min_cut_only {
                ones > 0 && ones < *n
            } else {
                2 * ones == *n
            })
        }
        (P::IndependentSet { n, edges, k }, Witness::Subset(s)) => Ok(distinct_in_range(s, *n)
            && s.len() >= *k
            && edges.iter().all(|(u, v)| !(s.contains(u) && s.contains(v)))),
        (P::MaxCut { n, edges, threshold }, Witness::Partition(p)) => {
            shape(p.len(), *n)?;
            Ok(threshold.is_none_or(|w| cut_value(edges, p) >= w))
        }
        (P::ShortestPath { n, edges, s, t, k }, Witness::Order(o)) => {
            let adj = neighbours(*n, edges);
            Ok(!o.is_empty()
                && distinct_in_range(o, *n)
                && o[0] == *s
                && o[o.len() - 1] == *t
                && o.len() <= *k
                && o.windows(2).all(|p| adj[p[0]].contains(&p[1])))
        }
        (P::Maze(m), Witness::Order(o)) => Ok(!o.is_empty()
            && distinct_in_range(o, m.n_cells())
            && o[0] == m.start
            && o[o.len() - 1] == m.end
            && o.windows(2).all(|p| maze_moves(m, p[0]).contains(&p[1]))),
        (P::LogicCircuit { inputs, gates }, Witness::TruthTable(t)) => {
            let want = circuit_table(*inputs, gates)?;
            shape(t.len(), want.len())?;
            Ok(*t == want)
        }
        (inst, w) => malformed(format!(
            "a {} witness does not fit a {} instance",
            w.variant(),
            inst.kind()
        )),
    }
}

/// Objective value of a witness for optimization problems.
pub fn objective(inst: &ProblemInstance, w: &Witness) -> Option<f64> {
    use ProblemInstance as P;
    match (inst, w) {
        (P::Ip01 { a: Some(a), .. }, Witness::Assignment(x)) if x.len() == a.len() => Some(
            a.iter().zip(x).filter(|(_, &b)| b).map(|(&v, _)| v as f64).sum(),
        ),
        (P::Tsp { weights, .. }, Witness::Order(o)) if distinct_in_range(o, weights.len()) && o.len() == weights.len() => {
            Some(tour_length(weights, o))
        }
        (P::SetCover { .. }, Witness::Subset(s))
        | (P::FeedbackNodeSet { .. }, Witness::Subset(s))
        | (P::FeedbackArcSet { .. }, Witness::Subset(s))
        | (P::HittingSet { .. }, Witness::Subset(s))
        | (P::IndependentSet { .. }, Witness::Subset(s)) => Some(s.len() as f64),
        (P::Chromatic { .. }, Witness::Coloring(c)) => {
            Some(c.iter().collect::<BTreeSet<_>>().len() as f64)
        }
        (P::GraphPartitioning { n, edges, .. }, Witness::Partition(p)) if p.len() == *n => {
            Some(unit_cut(edges, p) as f64)
        }
        (P::MaxCut { n, edges, .. }, Witness::Partition(p)) if p.len() == *n => {
            Some(cut_value(edges, p) as f64)
        }
        (P::ShortestPath { .. }, Witness::Order(o)) if !o.is_empty() => Some((o.len() - 1) as f64),
        _ => None,
    }
}

/// `a` improves on `b` under the instance's sense.
pub fn better(inst: &ProblemInstance, a: f64, b: f64) -> bool {
    match inst.sense() {
        Sense::Minimize => a < b - 1e-9,
        Sense::Maximize => a > b + 1e-9,
        Sense::None => false,
    }
}

fn guard(needed: u128, budget: u128) -> Result<(), OracleError> {
    if needed > budget {
        Err(OracleError::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}

fn pow2(n: usize) -> u128 {
    if n >= 127 {
        u128::MAX
    } else {
        1u128 << n
    }
}

fn bits(m: u64, n: usize) -> Vec<bool> {
    (0..n).map(|j| m >> j & 1 == 1).collect()
}

fn members(m: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&j| m >> j & 1 == 1).collect()
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).try_fold(1u128, |a, b| a.checked_mul(b)).unwrap_or(u128::MAX)
}

/// Advances to the next lexicographic permutation; false after the last.
fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Best mask by objective (first found on ties) among feasible masks.
fn best_mask(
    n: usize,
    budget: &Budget,
    mut eval: impl FnMut(u64) -> Option<f64>,
    maximize: bool,
) -> Result<Option<(u64, f64)>, OracleError> {
    guard(pow2(n), budget.states)?;
    let mut best: Option<(u64, f64)> = None;
    for m in 0..(1u64 << n) {
        if let Some(v) = eval(m) {
            let take = match best {
                None => true,
                Some((_, b)) => {
                    if maximize {
                        v > b + 1e-9
                    } else {
                        v < b - 1e-9
                    }
                }
            };
            if take {
                best = Some((m, v));
            }
        }
    }
    Ok(best)
}

/// Smallest colouring by exhaustive backtracking; `None` if more than
/// `limit` colours are needed.
fn color_search(
    adj: &[BTreeSet<usize>],
    limit: usize,
    budget: &Budget,
) -> Result<Option<Vec<usize>>, OracleError> {
    let n = adj.len();
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    let mut nodes = 0u128;
    for k in 1..=limit.min(n) {
        let mut color = vec![usize::MAX; n];
        if assign(0, k, adj, &mut color, &mut nodes, budget)? {
            return Ok(Some(color));
        }
    }
    Ok(None)
}

fn assign(
    v: usize,
    k: usize,
    adj: &[BTreeSet<usize>],
    color: &mut [usize],
    nodes: &mut u128,
    budget: &Budget,
) -> Result<bool, OracleError> {
    if v == adj.len() {
        return Ok(true);
    }
    *nodes += 1;
    guard(*nodes, budget.states)?;
    // colours up to one past the largest used, to skip symmetric branches
    let top = color[..v].iter().map(|&c| c + 1).max().unwrap_or(0);
    for c in 0..k.min(top + 1) {
        if adj[v].iter().all(|&u| color[u] != c) {
            color[v] = c;
            if assign(v + 1, k, adj, color, nodes, budget)? {
                return Ok(true);
            }
            color[v] = usize::MAX;
        }
    }
    Ok(false)
}

/// Exhaustive solution of `inst`; refuses instances beyond `budget`.
pub fn brute_force(inst: &ProblemInstance, budget: &Budget) -> Result<OracleVerdict, OracleError> {
    use ProblemInstance as P;
    let subset_verdict = |found: Option<(u64, f64)>, n: usize, with_opt: bool| match found {
        Some((m, v)) => OracleVerdict::found(Witness::Subset(members(m, n)), with_opt.then_some(v)),
        None => OracleVerdict::infeasible(),
    };
    let v = match inst {
        P::Sat { num_vars, .. } => {
            let n = *num_vars;
            let f = best_mask(n, budget, |m| check(inst, &Witness::Assignment(bits(m, n))).ok()?.then_some(0.0), false)?;
            match f {
                Some((m, _)) => OracleVerdict::found(Witness::Assignment(bits(m, n)), None),
                None => OracleVerdict::infeasible(),
            }
        }
        P::Ip01 { c, a, .. } => {
            let n = c.first().map_or(0, Vec::len);
            let f = best_mask(
                n,
                budget,
                |m| {
                    let w = Witness::Assignment(bits(m, n));
                    check(inst, &w).ok()?.then(|| objective(inst, &w).unwrap_or(0.0))
                },
                false,
            )?;
            match f {
                Some((m, v)) => OracleVerdict::found(Witness::Assignment(bits(m, n)), a.as_ref().map(|_| v)),
                None => OracleVerdict::infeasible(),
            }
        }
        P::Knapsack { a, .. } => {
            let n = a.len();
            match best_mask(n, budget, |m| check(inst, &Witness::Assignment(bits(m, n))).ok()?.then_some(0.0), false)? {
                Some((m, _)) => OracleVerdict::found(Witness::Assignment(bits(m, n)), None),
                None => OracleVerdict::infeasible(),
            }
        }
        P::NumberPartitioning { numbers } => {
            let n = numbers.len();
            match best_mask(n, budget, |m| check(inst, &Witness::Partition(bits(m, n))).ok()?.then_some(0.0), false)? {
                Some((m, _)) => OracleVerdict::found(Witness::Partition(bits(m, n)), None),
                None => OracleVerdict::infeasible(),
            }
        }
        P::Hamilton { n, circle, .. } => {
            let n = *n;
            // a circle can start anywhere, so vertex 0 is fixed first
            let free = if *circle { n - 1 } else { n };
            guard(factorial(free), budget.permutations)?;
            let mut p: Vec<usize> = (0..n).collect();
            let mut found = None;
            loop {
                if check(inst, &Witness::Order(p.clone()))? {
                    found = Some(p.clone());
                    break;
                }
                let more = if *circle {
                    next_permutation(&mut p[1..])
                } else {
                    next_permutation(&mut p)
                };
                if !more {
                    break;
                }
            }
            match found {
                Some(o) => OracleVerdict::found(Witness::Order(o), None),
                None => OracleVerdict::infeasible(),
            }
        }
        P::Tsp { weights, bound } => {
            let n = weights.len();
            guard(factorial(n - 1), budget.permutations)?;
            let mut p: Vec<usize> = (0..n).collect();
            let mut best: Option<(Vec<usize>, f64)> = None;
            loop {
                let len = tour_length(weights, &p);
                if best.as_ref().is_none_or(|(_, b)| len < b - 1e-9) {
                    best = Some((p.clone(), len));
                }
                if !next_permutation(&mut p[1..]) {
                    break;
                }
            }
            let (o, len) = best.expect("n ≥ 3");
            if bound.is_some_and(|b| len > b + 1e-9) {
                OracleVerdict {
                    feasible: false,
                    optimum: Some(len),
                    witness: None,
                }
            } else {
                OracleVerdict::found(Witness::Order(o), Some(len))
            }
        }
        P::Clique { n, .. } | P::NodeCover { n, .. } => {
            let n = *n;
            let f = best_mask(n, budget, |m| check(inst, &Witness::Subset(members(m, n))).ok()?.then_some(0.0), false)?;
            subset_verdict(f, n, false)
        }
        P::IndependentSet { n, edges, k } => {
            let n = *n;
            let adj = neighbours(n, edges);
            let f = best_mask(
                n,
                budget,
                |m| {
                    let s = members(m, n);
                    s.iter().all(|&u| s.iter().all(|v| !adj[u].contains(v))).then_some(s.len() as f64)
                },
                true,
            )?;
            match f {
                Some((m, v)) if v as usize >= *k => {
                    OracleVerdict::found(Witness::Subset(members(m, n)), Some(v))
                }
                Some((_, v)) => OracleVerdict {
                    feasible: false,
                    optimum: Some(v),
                    witness: None,
                },
                None => OracleVerdict::infeasible(),
            }
        }
        P::SetPacking { sets, .. } | P::ExactCover { sets, .. } => {
            let m = sets.len();
            let f = best_mask(m, budget, |x| check(inst, &Witness::Subset(members(x, m))).ok()?.then_some(0.0), false)?;
            subset_verdict(f, m, false)
        }
        P::ThreeDm { triples, .. } => {
            let m = triples.len();
            let f = best_mask(m, budget, |x| check(inst, &Witness::Subset(members(x, m))).ok()?.then_some(0.0), false)?;
            subset_verdict(f, m, false)
        }
        P::SetCover { universe, sets, k } => {
            let m = sets.len();
            let relaxed = P::SetCover {
                universe: *universe,
                sets: sets.clone(),
                k: None,
            };
            let f = best_mask(
                m,
                budget,
                |x| {
                    let s = members(x, m);
                    check(&relaxed, &Witness::Subset(s.clone())).ok()?.then_some(s.len() as f64)
                },
                false,
            )?;
            bounded(f, m, k.map(|k| k as f64))
        }
        P::HittingSet { universe, sets, k } => {
            let u = *universe;
            let f = best_mask(
                u,
                budget,
                |x| {
                    let h = members(x, u);
                    sets.iter().all(|c| c.iter().any(|e| h.contains(e))).then_some(h.len() as f64)
                },
                false,
            )?;
            bounded(f, u, Some(*k as f64))
        }
        P::FeedbackNodeSet { n, edges, k, .. } => {
            let n = *n;
            let f = best_mask(
                n,
                budget,
                |x| {
                    let keep: Vec<bool> = (0..n).map(|v| x >> v & 1 == 0).collect();
                    is_acyclic(n, edges, &keep).then_some(x.count_ones() as f64)
                },
                false,
            )?;
            bounded(f, n, k.map(|k| k as f64))
        }
        P::FeedbackArcSet { n, edges, k, .. } => {
            let m = edges.len();
            let f = best_mask(
                m,
                budget,
                |x| {
                    let arcs: Vec<(usize, usize)> = (0..m).filter(|&e| x >> e & 1 == 0).map(|e| edges[e]).collect();
                    is_acyclic(*n, &arcs, &vec![true; *n]).then_some(x.count_ones() as f64)
                },
                false,
            )?;
            bounded(f, m, k.map(|k| k as f64))
        }
        P::Chromatic { n, edges, k } => {
            let adj = neighbours(*n, edges);
            let c = color_search(&adj, *n, budget)?.expect("n colours always suffice");
            let chi = c.iter().collect::<BTreeSet<_>>().len().max(usize::from(*n > 0));
            if k.is_some_and(|k| chi > k) {
                OracleVerdict {
                    feasible: false,
                    optimum: Some(chi as f64),
                    witness: None,
                }
            } else {
                OracleVerdict::found(Witness::Coloring(c), Some(chi as f64))
            }
        }
        P::CliqueCover { n, edges, k } => {
            // colour the complement: non-adjacent vertices need different groups
            let adj = neighbours(*n, edges);
            let comp: Vec<BTreeSet<usize>> = (0..*n)
                .map(|u| (0..*n).filter(|&v| v != u && !adj[u].contains(&v)).collect())
                .collect();
            match color_search(&comp, *k, budget)? {
                Some(c) => OracleVerdict::found(Witness::Coloring(c), None),
                None => OracleVerdict::infeasible(),
            }
        }
        P::GraphPartitioning { n, edges, min_cut_only } => {
            let n = *n;
            let f = best_mask(
                n,
                budget,
                |x| {
                    let p = bits(x, n);
                    let ones = x.count_ones() as usize;
                    let ok = if *min_cut_only { ones > 0 && ones < n } else { 2 * ones == n };
                    ok.then(|| unit_cut(edges, &p) as f64)
                },
                false,
            )?;
            match f {
                Some((x, v)) => OracleVerdict::found(Witness::Partition(bits(x, n)), Some(v)),
                None => OracleVerdict::infeasible(),
            }
        }
        P::MaxCut { n, edges, threshold } => {
            let n = *n;
            let (x, v) = best_mask(n, budget, |x| Some(cut_value(edges, &bits(x, n)) as f64), true)?
                .expect("some partition");
            if threshold.is_some_and(|w| v < w as f64) {
                OracleVerdict {
                    feasible: false,
                    optimum: Some(v),
                    witness: None,
                }
            } else {
                OracleVerdict::found(Witness::Partition(bits(x, n)), Some(v))
            }
        }
        P::ShortestPath { n, edges, s, t, k } => {
            let adj = neighbours(*n, edges);
            match bfs_path(*n, |u| adj[u].iter().copied().collect(), *s, *t) {
                Some(p) if p.len() <= *k => {
                    let len = (p.len() - 1) as f64;
                    OracleVerdict::found(Witness::Order(p), Some(len))
                }
                Some(p) => OracleVerdict {
                    feasible: false,
                    optimum: Some((p.len() - 1) as f64),
                    witness: None,
                },
                None => OracleVerdict::infeasible(),
            }
        }
        P::Maze(m) => match bfs_path(m.n_cells(), |c| maze_moves(m, c), m.start, m.end) {
            Some(p) => OracleVerdict::found(Witness::Order(p), None),
            None => OracleVerdict::infeasible(),
        },
        P::LogicCircuit { inputs, gates } => {
            guard(pow2(*inputs), budget.states)?;
            OracleVerdict::found(Witness::TruthTable(circuit_table(*inputs, gates)?), None)
        }
    };
    Ok(v)
}

/// Minimum-size subset verdict, feasible when the minimum is within `k`.
fn bounded(found: Option<(u64, f64)>, n: usize, k: Option<f64>) -> OracleVerdict {
    match found {
        Some((x, v)) if k.is_none_or(|k| v <= k) => {
            OracleVerdict::found(Witness::Subset(members(x, n)), Some(v))
        }
        Some((_, v)) => OracleVerdict {
            feasible: false,
            optimum: Some(v),
            witness: None,
        },
        None => OracleVerdict::infeasible(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bf(inst: &ProblemInstance) -> OracleVerdict {
        let v = brute_force(inst, &Budget::default()).unwrap();
        if let Some(w) = &v.witness {
            assert!(check(inst, w).unwrap(), "oracle witness fails its checker");
        }
        assert_eq!(v.feasible, v.witness.is_some());
        v
    }

    #[test]
    fn sat_two_literals() {
        let inst = ProblemInstance::Sat {
            num_vars: 2,
            clauses: vec![vec![1, -2]],
        };
        let v = bf(&inst);
        assert!(v.feasible);
        // first satisfying mask: all false
        assert!(check(&inst, &Witness::Assignment(vec![true, false])).unwrap());
    }

    #[test]
    fn hamilton_circle_revisit_rejected() {
        let inst = ProblemInstance::Hamilton {
            n: 3,
            edges: vec![(0, 1), (1, 2), (0, 2)],
            directed: false,
            circle: true,
        };
        assert!(!check(&inst, &Witness::Order(vec![0, 1, 1])).unwrap());
        assert!(check(&inst, &Witness::Order(vec![0, 2, 1])).unwrap());
        let path = ProblemInstance::Hamilton {
            n: 3,
            edges: vec![(0, 1), (1, 2)],
            directed: false,
            circle: true,
        };
        assert!(!bf(&path).feasible);
    }

    #[test]
    fn tsp_optimum() {
        let w = vec![vec![0.0, 1.0, 3.0], vec![1.0, 0.0, 2.0], vec![3.0, 2.0, 0.0]];
        let v = bf(&ProblemInstance::Tsp { weights: w, bound: None });
        assert_eq!(v.optimum, Some(6.0));
    }

    #[test]
    fn clique_k5() {
        let mut e = Vec::new();
        for u in 0..5 {
            for v in u + 1..5 {
                e.push((u, v));
            }
        }
        assert!(bf(&ProblemInstance::Clique { n: 5, edges: e, k: 5 }).feasible);
    }

    #[test]
    fn exact_cover_overlap_rejected() {
        let inst = ProblemInstance::ExactCover {
            universe: 3,
            sets: vec![vec![0, 1], vec![2], vec![0, 2]],
        };
        assert!(!check(&inst, &Witness::Subset(vec![0, 2])).unwrap());
        let v = bf(&inst);
        assert_eq!(v.witness, Some(Witness::Subset(vec![0, 1])));
    }

    #[test]
    fn chromatic_c5() {
        let c5 = vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)];
        assert_eq!(bf(&ProblemInstance::Chromatic { n: 5, edges: c5, k: None }).optimum, Some(3.0));
        assert_eq!(bf(&ProblemInstance::Chromatic { n: 4, edges: vec![], k: None }).optimum, Some(1.0));
    }

    #[test]
    fn feedback_sets() {
        let two = vec![(0, 1), (1, 0)];
        let fns = ProblemInstance::FeedbackNodeSet { n: 2, edges: two.clone(), k: None, lambda: 0.5 };
        assert_eq!(bf(&fns).optimum, Some(1.0));
        let fas = ProblemInstance::FeedbackArcSet { n: 2, edges: two, k: None, lambda: 0.5 };
        assert_eq!(bf(&fas).optimum, Some(1.0));
        let dag = ProblemInstance::FeedbackArcSet { n: 3, edges: vec![(0, 1), (1, 2), (0, 2)], k: None, lambda: 0.5 };
        assert_eq!(bf(&dag).optimum, Some(0.0));
    }

    #[test]
    fn clique_cover_c5() {
        let c5 = vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)];
        assert!(!bf(&ProblemInstance::CliqueCover { n: 5, edges: c5.clone(), k: 2 }).feasible);
        assert!(bf(&ProblemInstance::CliqueCover { n: 5, edges: c5, k: 3 }).feasible);
    }

    #[test]
    fn max_cut_values() {
        let tri = vec![(0, 1, 1), (1, 2, 1), (0, 2, 1)];
        assert_eq!(bf(&ProblemInstance::MaxCut { n: 3, edges: tri, threshold: None }).optimum, Some(2.0));
    }

    #[test]
    fn shortest_path_bound() {
        let mk = |k| ProblemInstance::ShortestPath { n: 3, edges: vec![(0, 1), (1, 2)], s: 0, t: 2, k };
        assert!(bf(&mk(3)).feasible);
        assert!(!bf(&mk(2)).feasible);
    }

    #[test]
    fn maze_bfs_path_checks() {
        let m = Maze {
            width: 3,
            height: 3,
            walls: vec![(3, Dir::E), (6, Dir::E), (1, Dir::S), (4, Dir::S)],
            start: 6,
            end: 8,
        };
        let v = bf(&ProblemInstance::Maze(m.clone()));
        assert_eq!(v.witness, Some(Witness::Order(vec![6, 3, 0, 1, 2, 5, 8])));
        assert!(!check(&ProblemInstance::Maze(m), &Witness::Order(vec![6, 7, 8])).unwrap());
    }

    #[test]
    fn mismatched_witness_is_malformed() {
        let inst = ProblemInstance::Knapsack { a: vec![1], b: 1 };
        assert!(matches!(check(&inst, &Witness::Order(vec![0])), Err(OracleError::Malformed(_))));
        assert!(matches!(check(&inst, &Witness::Assignment(vec![])), Err(OracleError::Malformed(_))));
    }

    #[test]
    fn budget_refusal() {
        let inst = ProblemInstance::Sat { num_vars: 30, clauses: vec![] };
        assert!(matches!(
            brute_force(&inst, &Budget::default()),
            Err(OracleError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn partition_and_knapsack() {
        let v = bf(&ProblemInstance::NumberPartitioning { numbers: vec![1, 2, 3] });
        assert!(v.feasible);
        assert!(!bf(&ProblemInstance::Knapsack { a: vec![2, 3, 5], b: 11 }).feasible);
        assert!(bf(&ProblemInstance::Knapsack { a: vec![2, 3, 5], b: 0 }).feasible);
    }

    #[test]
    fn three_dm_and_hitting_set() {
        let ok = ProblemInstance::ThreeDm { t: 2, triples: vec![(0, 0, 0), (1, 1, 1)] };
        assert!(bf(&ok).feasible);
        let bad = ProblemInstance::ThreeDm { t: 2, triples: vec![(0, 0, 0), (1, 0, 1)] };
        assert!(!bf(&bad).feasible);
        let hs = ProblemInstance::HittingSet { universe: 3, sets: vec![vec![0, 1], vec![1, 2]], k: 1 };
        assert_eq!(bf(&hs).witness, Some(Witness::Subset(vec![1])));
        let none = ProblemInstance::HittingSet { universe: 3, sets: vec![vec![0, 1]], k: 0 };
        assert!(!bf(&none).feasible);
    }

    #[test]
    fn circuit_semantics() {
        let inst = ProblemInstance::LogicCircuit {
            inputs: 2,
            gates: vec![GateSpec { gate: "XOR".into(), inputs: vec![0, 1] }],
        };
        let v = bf(&inst);
        assert_eq!(
            v.witness,
            Some(Witness::TruthTable(vec![vec![false], vec![true], vec![true], vec![false]]))
        );
    }
}
