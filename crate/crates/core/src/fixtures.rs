//! Small labelled instances for every problem kind.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::netbuilder::{Dir, Maze};
use crate::oracle::{brute_force, Budget, OracleError};
use crate::problem::{GateSpec, ProblemInstance, SCHEMA_VERSION};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    #[serde(default = "schema")]
    pub schema: u32,
    pub name: String,
    pub expect_feasible: bool,
    pub instance: ProblemInstance,
}

fn schema() -> u32 {
    SCHEMA_VERSION
}

fn gnp(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut e = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                e.push((u, v));
            }
        }
    }
    e
}

fn cycle(n: usize) -> Vec<(usize, usize)> {
    (0..n).map(|i| (i, (i + 1) % n)).collect()
}

fn complete(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

fn random_3sat(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    (0..m)
        .map(|_| {
            let mut vars: Vec<i64> = Vec::new();
            while vars.len() < 3 {
                let v = rng.random_range(1..=n as i64);
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
            vars.into_iter()
                .map(|v| if rng.random_bool(0.5) { v } else { -v })
                .collect()
        })
        .collect()
}

fn random_sets(universe: usize, m: usize, size: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    (0..m)
        .map(|_| {
            let mut s: Vec<usize> = Vec::new();
            let want = rng.random_range(1..=size);
            while s.len() < want {
                let e = rng.random_range(0..universe);
                if !s.contains(&e) {
                    s.push(e);
                }
            }
            s.sort_unstable();
            s
        })
        .collect()
}

fn gate(g: &str, inputs: &[usize]) -> GateSpec {
    GateSpec {
        gate: g.into(),
        inputs: inputs.to_vec(),
    }
}

/// Comb maze: full columns of walls with one gap alternating top/bottom,
/// a single path snaking from the top-left to the far corner.
pub fn serpentine_maze(width: usize, height: usize) -> Maze {
    let mut walls = Vec::new();
    for x in 0..width.saturating_sub(1) {
        let gap = if x % 2 == 0 { height - 1 } else { 0 };
        for y in 0..height {
            if y != gap {
                walls.push((y * width + x, Dir::E));
            }
        }
    }
    let end = if (width - 1) % 2 == 0 {
        (height - 1) * width + width - 1
    } else {
        width - 1
    };
    Maze {
        width,
        height,
        walls,
        start: 0,
        end,
    }
}

/// Perfect maze by seeded depth-first carving: exactly one path between
/// any two cells.
pub fn carved_maze(width: usize, height: usize, seed: u64) -> Maze {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = width * height;
    let mut open = std::collections::BTreeSet::new();
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(&c) = stack.last() {
        let (x, y) = (c % width, c / width);
        let mut nbs = Vec::new();
        if y > 0 && !seen[c - width] {
            nbs.push((c - width, c - width, Dir::S));
        }
        if x + 1 < width && !seen[c + 1] {
            nbs.push((c + 1, c, Dir::E));
        }
        if y + 1 < height && !seen[c + width] {
            nbs.push((c + width, c, Dir::S));
        }
        if x > 0 && !seen[c - 1] {
            nbs.push((c - 1, c - 1, Dir::E));
        }
        if nbs.is_empty() {
            stack.pop();
            continue;
        }
        let (next, cell, d) = nbs[rng.random_range(0..nbs.len())];
        open.insert((cell, d));
        seen[next] = true;
        stack.push(next);
    }
    let mut walls = Vec::new();
    for c in 0..n {
        if c % width + 1 < width && !open.contains(&(c, Dir::E)) {
            walls.push((c, Dir::E));
        }
        if c / width + 1 < height && !open.contains(&(c, Dir::S)) {
            walls.push((c, Dir::S));
        }
    }
    Maze {
        width,
        height,
        walls,
        start: 0,
        end: n - 1,
    }
}

/// Unlabelled corpus instances, deterministic.
fn instances() -> Vec<(String, ProblemInstance)> {
    use ProblemInstance as P;
    let mut rng = ChaCha8Rng::seed_from_u64(0x0C0FFEE);
    let mut out: Vec<(String, ProblemInstance)> = Vec::new();
    let mut push = |name: &str, inst: ProblemInstance| out.push((name.to_string(), inst));

    for i in 0..4 {
        let n = 8 + 2 * i;
        push(&format!("sat_random_{i}"), P::Sat { num_vars: n, clauses: random_3sat(n, 4 * n, &mut rng) });
    }
    push("sat_mixed", P::Sat { num_vars: 4, clauses: vec![vec![1], vec![-1, 2], vec![-2, 3, 4], vec![-3, -4]] });
    push("sat_contradiction", P::Sat { num_vars: 2, clauses: vec![vec![1], vec![-1, 2], vec![-2]] });
    let all8: Vec<Vec<i64>> = (0..8)
        .map(|m| (1..=3).map(|v| if m >> (v - 1) & 1 == 1 { v } else { -v }).collect())
        .collect();
    push("sat_all_sign_patterns", P::Sat { num_vars: 3, clauses: all8 });

    push("ip01_chain", P::Ip01 { c: vec![vec![1, 1, 0], vec![0, 1, 1]], b: vec![1, 1], a: None, lambda: 0.5 });
    push("ip01_opt", P::Ip01 { c: vec![vec![1, 1, 1, 0], vec![0, 0, 1, 1]], b: vec![1, 1], a: Some(vec![3, 1, 4, 2]), lambda: 0.5 });
    push("ip01_weighted_row", P::Ip01 { c: vec![vec![2, 1, 1, 3]], b: vec![4], a: Some(vec![1, 2, 2, 1]), lambda: 0.5 });
    push("ip01_infeasible", P::Ip01 { c: vec![vec![1, 1]], b: vec![3], a: None, lambda: 0.5 });
    push("ip01_negative", P::Ip01 { c: vec![vec![1, -1, 1], vec![1, 1, 0]], b: vec![0, 1], a: None, lambda: 0.5 });

    push("hamilton_c4_circle", P::Hamilton { n: 4, edges: cycle(4), directed: false, circle: true });
    push("hamilton_k4_circle", P::Hamilton { n: 4, edges: complete(4), directed: false, circle: true });
    push("hamilton_p4_path", P::Hamilton { n: 4, edges: vec![(0, 1), (1, 2), (2, 3)], directed: false, circle: false });
    push("hamilton_p4_circle", P::Hamilton { n: 4, edges: vec![(0, 1), (1, 2), (2, 3)], directed: false, circle: true });
    push("hamilton_star_path", P::Hamilton { n: 4, edges: vec![(0, 1), (0, 2), (0, 3)], directed: false, circle: false });
    push("hamilton_directed_c4", P::Hamilton { n: 4, edges: cycle(4), directed: true, circle: true });

    for i in 0..4 {
        let n = if i == 0 { 3 } else { 4 };
        let mut w = vec![vec![0.0; n]; n];
        for u in 0..n {
            for v in u + 1..n {
                let x = rng.random_range(1..10) as f64;
                w[u][v] = x;
                w[v][u] = x;
            }
        }
        push(&format!("tsp_random_{i}"), P::Tsp { weights: w, bound: None });
    }
    let square = vec![
        vec![0.0, 1.0, 2.0, 1.0],
        vec![1.0, 0.0, 1.0, 2.0],
        vec![2.0, 1.0, 0.0, 1.0],
        vec![1.0, 2.0, 1.0, 0.0],
    ];
    push("tsp_square_bound", P::Tsp { weights: square.clone(), bound: Some(4.0) });
    push("tsp_square_tight", P::Tsp { weights: square, bound: Some(3.5) });

    for i in 0..3 {
        push(&format!("clique_random_{i}"), P::Clique { n: 5, edges: gnp(5, 0.6, &mut rng), k: 3 });
    }
    push("clique_k4", P::Clique { n: 4, edges: complete(4), k: 4 });
    push("clique_c5_k3", P::Clique { n: 5, edges: cycle(5), k: 3 });
    push("clique_edgeless", P::Clique { n: 4, edges: vec![], k: 2 });

    push("set_packing_pairs", P::SetPacking { universe: 6, sets: vec![vec![0, 1], vec![2, 3], vec![4, 5], vec![1, 2]], k: 3 });
    push("set_packing_overlap", P::SetPacking { universe: 4, sets: vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]], k: 3 });
    for i in 0..3 {
        push(&format!("set_packing_random_{i}"), P::SetPacking { universe: 7, sets: random_sets(7, 6, 3, &mut rng), k: 2 });
    }

    push("node_cover_c5_3", P::NodeCover { n: 5, edges: cycle(5), k: 3 });
    push("node_cover_c5_2", P::NodeCover { n: 5, edges: cycle(5), k: 2 });
    push("node_cover_star", P::NodeCover { n: 5, edges: vec![(0, 1), (0, 2), (0, 3), (0, 4)], k: 1 });
    push("node_cover_k4", P::NodeCover { n: 4, edges: complete(4), k: 3 });
    push("node_cover_random", P::NodeCover { n: 5, edges: gnp(5, 0.5, &mut rng), k: 2 });

    push("set_cover_basic", P::SetCover { universe: 5, sets: vec![vec![0, 1, 2], vec![2, 3], vec![3, 4], vec![0, 4]], k: None });
    push("set_cover_bounded", P::SetCover { universe: 4, sets: vec![vec![0, 1], vec![2, 3], vec![1, 2]], k: Some(2) });
    push("set_cover_too_tight", P::SetCover { universe: 4, sets: vec![vec![0, 1], vec![2], vec![3], vec![1, 2]], k: Some(2) });
    push("set_cover_uncovered", P::SetCover { universe: 3, sets: vec![vec![0], vec![1]], k: None });
    for i in 0..2 {
        push(&format!("set_cover_random_{i}"), P::SetCover { universe: 6, sets: random_sets(6, 6, 3, &mut rng), k: None });
    }

    push("chromatic_c5", P::Chromatic { n: 5, edges: cycle(5), k: None });
    push("chromatic_k4", P::Chromatic { n: 4, edges: complete(4), k: None });
    push("chromatic_c6", P::Chromatic { n: 6, edges: cycle(6), k: None });
    push("chromatic_triangle_2", P::Chromatic { n: 3, edges: complete(3), k: Some(2) });
    push("chromatic_edgeless", P::Chromatic { n: 4, edges: vec![], k: None });
    push("chromatic_wheel_k4", P::Chromatic { n: 5, edges: vec![(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (2, 3), (3, 4), (4, 1)], k: Some(4) });

    let dicycle = |n: usize| -> Vec<(usize, usize)> { (0..n).map(|i| (i, (i + 1) % n)).collect() };
    push("fns_cycle4", P::FeedbackNodeSet { n: 4, edges: dicycle(4), k: None, lambda: 0.5 });
    push("fns_two_cycles", P::FeedbackNodeSet { n: 4, edges: vec![(0, 1), (1, 0), (2, 3), (3, 2)], k: None, lambda: 0.5 });
    push("fns_dag", P::FeedbackNodeSet { n: 4, edges: vec![(0, 1), (1, 2), (0, 3), (3, 2)], k: None, lambda: 0.5 });
    push("fns_shared", P::FeedbackNodeSet { n: 3, edges: vec![(0, 1), (1, 0), (1, 2), (2, 1)], k: Some(1), lambda: 0.5 });
    push("fns_cycle_k0", P::FeedbackNodeSet { n: 3, edges: dicycle(3), k: Some(0), lambda: 0.5 });

    push("fas_triangle", P::FeedbackArcSet { n: 3, edges: dicycle(3), k: None, lambda: 0.5 });
    push("fas_dag", P::FeedbackArcSet { n: 3, edges: vec![(0, 1), (1, 2), (0, 2)], k: None, lambda: 0.5 });
    push("fas_two_cycle", P::FeedbackArcSet { n: 2, edges: vec![(0, 1), (1, 0)], k: None, lambda: 0.5 });
    push("fas_triangle_k0", P::FeedbackArcSet { n: 3, edges: dicycle(3), k: Some(0), lambda: 0.5 });
    push("fas_path", P::FeedbackArcSet { n: 3, edges: vec![(0, 1), (1, 2)], k: Some(0), lambda: 0.5 });

    push("clique_cover_two_triangles", P::CliqueCover { n: 6, edges: vec![(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)], k: 2 });
    push("clique_cover_c5_2", P::CliqueCover { n: 5, edges: cycle(5), k: 2 });
    push("clique_cover_c5_3", P::CliqueCover { n: 5, edges: cycle(5), k: 3 });
    push("clique_cover_k4", P::CliqueCover { n: 4, edges: complete(4), k: 1 });
    push("clique_cover_matching", P::CliqueCover { n: 4, edges: vec![(0, 1), (2, 3)], k: 2 });

    push("exact_cover_basic", P::ExactCover { universe: 4, sets: vec![vec![0, 1], vec![2, 3], vec![1, 2], vec![0]] });
    push("exact_cover_none", P::ExactCover { universe: 3, sets: vec![vec![0, 1], vec![1, 2]] });
    push("exact_cover_singletons", P::ExactCover { universe: 3, sets: vec![vec![0], vec![1], vec![2], vec![0, 1, 2]] });
    for i in 0..2 {
        push(&format!("exact_cover_random_{i}"), P::ExactCover { universe: 6, sets: random_sets(6, 7, 3, &mut rng) });
    }

    push("hitting_set_shared", P::HittingSet { universe: 4, sets: vec![vec![0, 1], vec![1, 2], vec![1, 3]], k: 1 });
    push("hitting_set_disjoint", P::HittingSet { universe: 4, sets: vec![vec![0, 1], vec![2, 3]], k: 1 });
    push("hitting_set_two", P::HittingSet { universe: 4, sets: vec![vec![0, 1], vec![2, 3]], k: 2 });
    for i in 0..2 {
        push(&format!("hitting_set_random_{i}"), P::HittingSet { universe: 6, sets: random_sets(6, 5, 3, &mut rng), k: 2 });
    }

    push("three_dm_identity", P::ThreeDm { t: 2, triples: vec![(0, 0, 0), (1, 1, 1), (0, 1, 0)] });
    push("three_dm_blocked", P::ThreeDm { t: 2, triples: vec![(0, 0, 0), (1, 0, 1), (0, 1, 1)] });
    push("three_dm_cyclic", P::ThreeDm { t: 3, triples: vec![(0, 1, 2), (1, 2, 0), (2, 0, 1), (0, 0, 0)] });
    push("three_dm_short", P::ThreeDm { t: 3, triples: vec![(0, 0, 0), (1, 1, 1)] });
    push("three_dm_choice", P::ThreeDm { t: 2, triples: vec![(0, 0, 1), (1, 1, 0), (0, 1, 0), (1, 0, 1)] });

    push("partition_123", P::NumberPartitioning { numbers: vec![1, 2, 3] });
    push("partition_odd", P::NumberPartitioning { numbers: vec![1, 2, 4] });
    push("partition_even_none", P::NumberPartitioning { numbers: vec![2, 10, 4] });
    push("partition_five", P::NumberPartitioning { numbers: vec![3, 1, 1, 2, 2, 1] });
    push("partition_pairs", P::NumberPartitioning { numbers: vec![4, 5, 6, 7] });

    push("knapsack_exact", P::Knapsack { a: vec![2, 3, 5, 7], b: 10 });
    push("knapsack_zero", P::Knapsack { a: vec![2, 3], b: 0 });
    push("knapsack_none", P::Knapsack { a: vec![2, 4, 6], b: 5 });
    push("knapsack_all", P::Knapsack { a: vec![1, 2, 3], b: 6 });
    push("knapsack_five", P::Knapsack { a: vec![3, 5, 8, 9, 4], b: 16 });

    push("partitioning_two_triangles", P::GraphPartitioning { n: 6, edges: vec![(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)], min_cut_only: false });
    push("partitioning_c4", P::GraphPartitioning { n: 4, edges: cycle(4), min_cut_only: false });
    push("partitioning_odd", P::GraphPartitioning { n: 3, edges: complete(3), min_cut_only: false });
    push("min_cut_barbell", P::GraphPartitioning { n: 6, edges: vec![(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)], min_cut_only: true });
    push("min_cut_path", P::GraphPartitioning { n: 4, edges: vec![(0, 1), (1, 2), (2, 3)], min_cut_only: true });

    push("independent_c5_2", P::IndependentSet { n: 5, edges: cycle(5), k: 2 });
    push("independent_c5_3", P::IndependentSet { n: 5, edges: cycle(5), k: 3 });
    push("independent_star", P::IndependentSet { n: 5, edges: vec![(0, 1), (0, 2), (0, 3), (0, 4)], k: 4 });
    push("independent_k4", P::IndependentSet { n: 4, edges: complete(4), k: 1 });
    push("independent_random", P::IndependentSet { n: 5, edges: gnp(5, 0.4, &mut rng), k: 2 });

    push("max_cut_triangle", P::MaxCut { n: 3, edges: vec![(0, 1, 1), (1, 2, 1), (0, 2, 1)], threshold: Some(2) });
    push("max_cut_triangle_3", P::MaxCut { n: 3, edges: vec![(0, 1, 1), (1, 2, 1), (0, 2, 1)], threshold: Some(3) });
    push("max_cut_weighted", P::MaxCut { n: 4, edges: vec![(0, 1, 3), (1, 2, 1), (2, 3, 2), (3, 0, 1), (0, 2, 2)], threshold: None });
    for i in 0..2 {
        let edges = gnp(6, 0.5, &mut rng).into_iter().map(|(u, v)| (u, v, rng.random_range(1..5))).collect();
        push(&format!("max_cut_random_{i}"), P::MaxCut { n: 6, edges, threshold: None });
    }

    push("shortest_path_line", P::ShortestPath { n: 4, edges: vec![(0, 1), (1, 2), (2, 3)], s: 0, t: 3, k: 4 });
    push("shortest_path_too_short", P::ShortestPath { n: 4, edges: vec![(0, 1), (1, 2), (2, 3)], s: 0, t: 3, k: 3 });
    push("shortest_path_shortcut", P::ShortestPath { n: 5, edges: vec![(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)], s: 0, t: 4, k: 4 });
    push("shortest_path_disconnected", P::ShortestPath { n: 4, edges: vec![(0, 1), (2, 3)], s: 0, t: 3, k: 4 });
    push("shortest_path_grid", P::ShortestPath { n: 5, edges: vec![(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)], s: 0, t: 4, k: 4 });

    push("maze_serpentine_3x3", P::Maze(serpentine_maze(3, 3)));
    push("maze_serpentine_4x4", P::Maze(serpentine_maze(4, 4)));
    push("maze_carved_4x4", P::Maze(carved_maze(4, 4, 1)));
    push("maze_carved_4x5", P::Maze(carved_maze(4, 5, 2)));
    push("maze_open_2x3", P::Maze(Maze { width: 3, height: 2, walls: vec![(0, Dir::E), (4, Dir::E)], start: 0, end: 5 }));
    push("maze_sealed", P::Maze(Maze { width: 3, height: 1, walls: vec![(0, Dir::E)], start: 0, end: 2 }));

    push("gates_and", P::LogicCircuit { inputs: 2, gates: vec![gate("AND", &[0, 1])] });
    push("gates_or3", P::LogicCircuit { inputs: 3, gates: vec![gate("OR", &[0, 1, 2])] });
    push("gates_nand_not", P::LogicCircuit { inputs: 2, gates: vec![gate("NAND", &[0, 1]), gate("NOT", &[2])] });
    push("gates_nor_buf", P::LogicCircuit { inputs: 2, gates: vec![gate("NOR", &[0, 1]), gate("BUF", &[2])] });
    push("gates_half_mux", P::LogicCircuit {
        inputs: 3,
        gates: vec![gate("NOT", &[2]), gate("AND", &[0, 3]), gate("AND", &[1, 2]), gate("OR", &[4, 5])],
    });
    out
}

/// The shipped corpus, each instance labelled by the brute-force oracle.
pub fn corpus() -> Result<Vec<Fixture>, OracleError> {
    instances()
        .into_iter()
        .map(|(name, instance)| {
            let v = brute_force(&instance, &Budget::default())?;
            Ok(Fixture {
                schema: SCHEMA_VERSION,
                name,
                expect_feasible: v.feasible,
                instance,
            })
        })
        .collect()
}

pub fn write_dir(dir: &Path, fixtures: &[Fixture]) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for f in fixtures {
        let text = serde_json::to_string_pretty(f).map_err(std::io::Error::other)?;
        std::fs::write(dir.join(format!("{}.json", f.name)), text + "\n")?;
    }
    Ok(())
}

/// Every `*.json` fixture in `dir`, sorted by file name.
pub fn load_dir(dir: &Path) -> Result<Vec<Fixture>, String> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            let f: Fixture = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", p.display()))?;
            if f.schema != SCHEMA_VERSION {
                return Err(format!("{}: unsupported schema {}", p.display(), f.schema));
            }
            f.instance.validate().map_err(|e| format!("{}: {e}", p.display()))?;
            Ok(f)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::check;
    use crate::problem::Witness;
    use std::collections::BTreeMap;

    #[test]
    fn five_per_kind() {
        let c = corpus().unwrap();
        let mut per: BTreeMap<&str, usize> = BTreeMap::new();
        for f in &c {
            *per.entry(f.instance.kind()).or_default() += 1;
        }
        assert_eq!(per.len(), 23, "{per:?}");
        assert!(per.values().all(|&n| n >= 5), "{per:?}");
    }

    #[test]
    fn mazes_have_unique_bfs_paths() {
        let m = serpentine_maze(3, 3);
        let v = brute_force(&ProblemInstance::Maze(m.clone()), &Budget::default()).unwrap();
        assert_eq!(v.witness, Some(Witness::Order(vec![0, 3, 6, 7, 4, 1, 2, 5, 8])));
        let c = carved_maze(6, 6, 3);
        let inst = ProblemInstance::Maze(c);
        let w = brute_force(&inst, &Budget::default()).unwrap().witness.unwrap();
        assert!(check(&inst, &w).unwrap());
    }
}
