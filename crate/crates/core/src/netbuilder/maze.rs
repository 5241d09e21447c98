//! Maze solver: one node per cell, all initialized True. Cells with fewer
//! than two True neighbours drop to False until only the path is left.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::potts::{CouplingGraph, PottsState, SpinLabel};

use super::{add_blue_restriction, BuildError, Rails};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dir {
    N,
    E,
    S,
    W,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::N, Dir::E, Dir::S, Dir::W];

    pub fn opposite(self) -> Dir {
        match self {
            Dir::N => Dir::S,
            Dir::S => Dir::N,
            Dir::E => Dir::W,
            Dir::W => Dir::E,
        }
    }
}

/// Rectangular maze; cells are numbered row-major from the top-left.
/// Walls are listed per cell side; the outer border is always walled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Maze {
    pub width: usize,
    pub height: usize,
    pub walls: Vec<(usize, Dir)>,
    pub start: usize,
    pub end: usize,
}

impl Maze {
    pub fn n_cells(&self) -> usize {
        self.width * self.height
    }

    fn step(&self, cell: usize, d: Dir) -> Option<usize> {
        let (x, y) = (cell % self.width, cell / self.width);
        match d {
            Dir::N if y > 0 => Some(cell - self.width),
            Dir::S if y + 1 < self.height => Some(cell + self.width),
            Dir::W if x > 0 => Some(cell - 1),
            Dir::E if x + 1 < self.width => Some(cell + 1),
            _ => None,
        }
    }

    fn wall_set(&self) -> BTreeSet<(usize, Dir)> {
        let mut set = BTreeSet::new();
        for &(c, d) in &self.walls {
            set.insert((c, d));
            if let Some(n) = self.step(c, d) {
                set.insert((n, d.opposite()));
            }
        }
        set
    }

    /// The cell reached by moving `d` from `cell`, if no wall is in the way.
    pub fn open(&self, cell: usize, d: Dir) -> Option<usize> {
        let n = self.step(cell, d)?;
        if self.wall_set().contains(&(cell, d)) {
            None
        } else {
            Some(n)
        }
    }

    /// Open neighbours of every cell, in N, E, S, W order.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let walls = self.wall_set();
        (0..self.n_cells())
            .map(|c| {
                Dir::ALL
                    .iter()
                    .filter(|&&d| !walls.contains(&(c, d)))
                    .filter_map(|&d| self.step(c, d))
                    .collect()
            })
            .collect()
    }

    pub fn validate(&self) -> Result<(), BuildError> {
        if self.width == 0 || self.height == 0 {
            return Err(BuildError::Maze("empty grid".into()));
        }
        let n = self.n_cells();
        if self.start >= n || self.end >= n {
            return Err(BuildError::Maze("start or end outside the grid".into()));
        }
        if self.start == self.end {
            return Err(BuildError::Maze("start equals end".into()));
        }
        if let Some(&(c, _)) = self.walls.iter().find(|(c, _)| *c >= n) {
            return Err(BuildError::Maze(format!("wall on cell {c} outside the grid")));
        }
        Ok(())
    }
}

/// Neighbour weight `W_N` and True-source weight `W_T`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MazeWeights {
    pub w_n: f64,
    pub w_t: f64,
}

impl Default for MazeWeights {
    fn default() -> Self {
        MazeWeights {
            w_n: -1.0,
            w_t: -1.5,
        }
    }
}

impl MazeWeights {
    /// The four truth-table rows: a cell with `t` True neighbours out of 4
    /// stays True iff `t ≥ 2`.
    pub fn truth_table_holds(&self) -> bool {
        let (n, t) = (self.w_n, self.w_t);
        t + 4.0 * n < 0.0 && t + 3.0 * n < n && t + 2.0 * n < 2.0 * n && 3.0 * n < t + n
    }
}

#[derive(Clone, Debug)]
pub struct MazeNetwork {
    pub graph: CouplingGraph,
    pub rails: Rails,
    pub maze: Maze,
}

/// Cell `c` is node `c`; rails follow the cells. Each open side couples
/// to the neighbour cell with `W_N`, each walled side to the F rail.
pub fn build_maze_network(maze: &Maze, w: &MazeWeights) -> Result<MazeNetwork, BuildError> {
    maze.validate()?;
    if !w.truth_table_holds() {
        return Err(BuildError::Weights(format!(
            "maze weights {w:?} violate 2W_N < W_T < 0"
        )));
    }
    let n = maze.n_cells();
    let mut g = CouplingGraph::new(n);
    let rails = Rails::add_to(&mut g, false)?;
    let walls = maze.wall_set();
    for c in 0..n {
        for d in Dir::ALL {
            match maze.step(c, d) {
                Some(nb) if !walls.contains(&(c, d)) => {
                    if c < nb {
                        g.couple(c, nb, w.w_n)?;
                    }
                }
                _ => g.couple(c, rails.f, w.w_n)?,
            }
        }
        g.couple(c, rails.t, w.w_t)?;
    }
    let cells: Vec<usize> = (0..n).collect();
    add_blue_restriction(&mut g, rails.b, &cells)?;
    g.clamp_label(maze.start, SpinLabel::T)?;
    g.clamp_label(maze.end, SpinLabel::T)?;
    Ok(MazeNetwork {
        graph: g,
        rails,
        maze: maze.clone(),
    })
}

impl MazeNetwork {
    /// Every cell True.
    pub fn initial_state(&self) -> PottsState {
        self.graph.uniform_state(SpinLabel::T)
    }

    pub fn true_cells(&self, s: &PottsState) -> BTreeSet<usize> {
        (0..self.maze.n_cells())
            .filter(|&c| s.get(c) == SpinLabel::T)
            .collect()
    }

    /// Walks True cells from start to end. `None` unless the True set is
    /// exactly one simple path.
    pub fn decode(&self, s: &PottsState) -> Option<Vec<usize>> {
        let on = self.true_cells(s);
        let adj = self.maze.adjacency();
        let mut path = vec![self.maze.start];
        let mut prev = usize::MAX;
        let mut cur = self.maze.start;
        while cur != self.maze.end {
            let next: Vec<usize> = adj[cur]
                .iter()
                .copied()
                .filter(|n| *n != prev && on.contains(n))
                .collect();
            if next.len() != 1 {
                return None;
            }
            prev = cur;
            cur = next[0];
            if path.contains(&cur) {
                return None;
            }
            path.push(cur);
        }
        if path.len() == on.len() {
            Some(path)
        } else {
            None
        }
    }
}
