//! Exact minimum feedback-vertex-set solver for tiny instances.
//!
//! Iterative deepening over the target set size, starting at the cycle-rank
//! lower bound; each level runs a branch-and-bound that finds a shortest
//! cycle in the surviving graph and branches on which of its vertices joins
//! the removal set. Vertices of degree <= 1 are peeled away first since no
//! cycle can use them. Intended for graphs of a few dozen vertices; the
//! dimension-4 graph (24 vertices, answer 10) is the design target.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::decycle::lower_bound_general;
use crate::error::Error;
use crate::graph::{BubbleSortStarGraph, VertexId};

/// Largest instance `exact_fvs` accepts without an explicit cap override.
pub const DEFAULT_VERTEX_CAP: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExactOutcome {
    /// Search completed; `optimal_set` is a minimum feedback vertex set.
    Optimal {
        optimum: usize,
        optimal_set: Vec<VertexId>,
    },
    /// No feedback vertex set within the size budget; larger sets were not
    /// tried. Not an error: the caller bounded the search.
    BudgetExhausted { budget: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactResult {
    pub vertices: usize,
    pub edges: u64,
    pub outcome: ExactOutcome,
    /// Search-tree nodes visited across all deepening levels.
    pub nodes_explored: u64,
    #[serde(serialize_with = "duration_seconds")]
    pub elapsed: Duration,
}

fn duration_seconds<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl ExactResult {
    pub fn optimum(&self) -> Option<usize> {
        match &self.outcome {
            ExactOutcome::Optimal { optimum, .. } => Some(*optimum),
            ExactOutcome::BudgetExhausted { .. } => None,
        }
    }

    pub fn optimal_set(&self) -> Option<&[VertexId]> {
        match &self.outcome {
            ExactOutcome::Optimal { optimal_set, .. } => Some(optimal_set),
            ExactOutcome::BudgetExhausted { .. } => None,
        }
    }
}

/// Minimum decycling set of `BS_n`, for graphs within [`DEFAULT_VERTEX_CAP`].
/// `budget`, when given, caps the set size considered.
pub fn exact_fvs(g: &BubbleSortStarGraph, budget: Option<usize>) -> Result<ExactResult, Error> {
    exact_fvs_with_cap(g, budget, DEFAULT_VERTEX_CAP)
}

/// [`exact_fvs`] with an explicit instance-size cap.
pub fn exact_fvs_with_cap(
    g: &BubbleSortStarGraph,
    budget: Option<usize>,
    vertex_cap: usize,
) -> Result<ExactResult, Error> {
    if g.vertex_count() > vertex_cap {
        return Err(Error::SolverCapExceeded {
            vertices: g.vertex_count(),
            cap: vertex_cap,
        });
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    solve(g.vertex_count(), &edges, budget)
}

/// Minimum feedback vertex set of an arbitrary undirected simple graph given
/// as an edge list. Parallel edges are collapsed; self-loops are rejected
/// (a vertex with a self-loop could never be kept).
pub fn exact_fvs_generic(
    vertices: usize,
    edges: &[(usize, usize)],
    budget: Option<usize>,
) -> Result<ExactResult, Error> {
    for &(a, b) in edges {
        if a == b {
            return Err(Error::SelfLoop { v: a });
        }
        for v in [a, b] {
            if v >= vertices {
                return Err(Error::VertexOutOfRange { v, count: vertices });
            }
        }
    }
    solve(vertices, edges, budget)
}

struct Search {
    adj: Vec<Vec<u32>>,
    alive: Vec<bool>,
    /// Vertices assumed absent from the solution on the current path.
    excluded: Vec<bool>,
    removal: Vec<u32>,
    nodes: u64,
}

fn solve(
    vertices: usize,
    edges: &[(usize, usize)],
    budget: Option<usize>,
) -> Result<ExactResult, Error> {
    let started = Instant::now();
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); vertices];
    let mut edge_count = 0u64;
    for &(a, b) in edges {
        if adj[a].contains(&(b as u32)) {
            continue; // collapse parallel edges
        }
        adj[a].push(b as u32);
        adj[b].push(a as u32);
        edge_count += 1;
    }
    let max_deg = adj.iter().map(Vec::len).max().unwrap_or(0) as u64;
    let start = if max_deg < 2 {
        0 // no vertex lies on a cycle
    } else {
        lower_bound_general(vertices as u64, edge_count, max_deg)? as usize
    };
    let limit = budget.unwrap_or(vertices).min(vertices);

    let mut search = Search {
        adj,
        alive: vec![true; vertices],
        excluded: vec![false; vertices],
        removal: Vec::new(),
        nodes: 0,
    };
    for target in start..=limit {
        if search.try_size(target) {
            let mut optimal_set: Vec<VertexId> =
                search.removal.iter().map(|&v| v as VertexId).collect();
            optimal_set.sort_unstable();
            return Ok(ExactResult {
                vertices,
                edges: edge_count,
                outcome: ExactOutcome::Optimal {
                    optimum: optimal_set.len(),
                    optimal_set,
                },
                nodes_explored: search.nodes,
                elapsed: started.elapsed(),
            });
        }
        debug_assert!(search.removal.is_empty());
    }
    Ok(ExactResult {
        vertices,
        edges: edge_count,
        outcome: ExactOutcome::BudgetExhausted { budget: limit },
        nodes_explored: search.nodes,
        elapsed: started.elapsed(),
    })
}

impl Search {
    fn degree(&self, v: usize) -> usize {
        self.adj[v]
            .iter()
            .filter(|&&w| self.alive[w as usize])
            .count()
    }

    /// Temporarily drops every alive vertex of degree <= 1, cascading.
    /// Returns the dropped vertices so the caller can revive them.
    fn peel_leaves(&mut self) -> Vec<u32> {
        let mut peeled = Vec::new();
        let mut queue: VecDeque<u32> = (0..self.alive.len() as u32)
            .filter(|&v| self.alive[v as usize] && self.degree(v as usize) <= 1)
            .collect();
        while let Some(v) = queue.pop_front() {
            if !self.alive[v as usize] {
                continue;
            }
            self.alive[v as usize] = false;
            peeled.push(v);
            for &w in &self.adj[v as usize] {
                if self.alive[w as usize] && self.degree(w as usize) <= 1 {
                    queue.push_back(w);
                }
            }
        }
        peeled
    }

    /// Shortest cycle in the alive subgraph, or None if it is a forest.
    /// BFS from every vertex; the first non-tree edge seen closes a shortest
    /// cycle through the root. Ties resolve toward lower vertex ids because
    /// roots are scanned in order.
    fn shortest_cycle(&self) -> Option<Vec<u32>> {
        let n = self.alive.len();
        let mut best: Option<Vec<u32>> = None;
        let mut dist = vec![u32::MAX; n];
        let mut parent = vec![u32::MAX; n];
        for root in 0..n {
            if !self.alive[root] {
                continue;
            }
            dist.fill(u32::MAX);
            parent.fill(u32::MAX);
            dist[root] = 0;
            let mut queue = VecDeque::new();
            queue.push_back(root as u32);
            let mut found: Option<(u32, u32)> = None;
            'bfs: while let Some(x) = queue.pop_front() {
                for &y in &self.adj[x as usize] {
                    if !self.alive[y as usize] || y == parent[x as usize] {
                        continue;
                    }
                    if dist[y as usize] == u32::MAX {
                        dist[y as usize] = dist[x as usize] + 1;
                        parent[y as usize] = x;
                        queue.push_back(y);
                    } else {
                        // Non-tree edge: a cycle through x, y, and their
                        // common ancestor.
                        found = Some((x, y));
                        break 'bfs;
                    }
                }
            }
            if let Some((x, y)) = found {
                let cycle = self.reconstruct_cycle(&parent, x, y);
                if best.as_ref().is_none_or(|b| cycle.len() < b.len()) {
                    best = Some(cycle);
                }
                // A 4-cycle (or triangle) is short enough; further roots can
                // only shave one more branch off.
                if best.as_ref().is_some_and(|b| b.len() <= 4) {
                    break;
                }
            }
        }
        best
    }

    fn reconstruct_cycle(&self, parent: &[u32], x: u32, y: u32) -> Vec<u32> {
        let ancestors = |mut v: u32| {
            let mut path = vec![v];
            while parent[v as usize] != u32::MAX {
                v = parent[v as usize];
                path.push(v);
            }
            path
        };
        let px = ancestors(x);
        let py = ancestors(y);
        // Trim the shared tail above the lowest common ancestor.
        let mut ix = px.len();
        let mut iy = py.len();
        while ix > 0 && iy > 0 && px[ix - 1] == py[iy - 1] {
            ix -= 1;
            iy -= 1;
        }
        // px[ix] == py[iy] == LCA (both indices are in range because the
        // paths share at least the root).
        let mut cycle: Vec<u32> = px[..=ix].to_vec();
        cycle.extend(py[..iy].iter().rev());
        cycle
    }

    fn alive_counts(&self) -> (u64, u64, u64) {
        let mut v = 0u64;
        let mut deg_sum = 0u64;
        let mut max_deg = 0u64;
        for x in 0..self.alive.len() {
            if self.alive[x] {
                v += 1;
                let d = self.degree(x) as u64;
                deg_sum += d;
                max_deg = max_deg.max(d);
            }
        }
        (v, deg_sum / 2, max_deg)
    }

    fn try_size(&mut self, remaining: usize) -> bool {
        self.nodes += 1;
        let peeled = self.peel_leaves();
        let result = match self.shortest_cycle() {
            None => true,
            Some(cycle) => {
                if remaining == 0 || self.bound_exceeds(remaining) {
                    false
                } else {
                    self.branch(&cycle, remaining)
                }
            }
        };
        if !result {
            for v in peeled {
                self.alive[v as usize] = true;
            }
        } else {
            // Keep peeled vertices dead; they are irrelevant to the found
            // solution and the caller only reads `removal`. Revive them
            // anyway so repeated calls see a clean state.
            for v in peeled {
                self.alive[v as usize] = true;
            }
        }
        result
    }

    /// True when the cycle-rank bound already proves `remaining` removals
    /// cannot suffice for the alive subgraph.
    fn bound_exceeds(&self, remaining: usize) -> bool {
        let (v, e, max_deg) = self.alive_counts();
        if max_deg < 2 || e <= v {
            return false;
        }
        let needed = (e - v).div_ceil(max_deg - 1);
        needed > remaining as u64
    }

    fn branch(&mut self, cycle: &[u32], remaining: usize) -> bool {
        let mut marked = Vec::new();
        let mut solved = false;
        for &c in cycle {
            if self.excluded[c as usize] {
                continue;
            }
            self.alive[c as usize] = false;
            self.removal.push(c);
            if self.try_size(remaining - 1) {
                solved = true;
                self.alive[c as usize] = true;
                break;
            }
            self.removal.pop();
            self.alive[c as usize] = true;
            // Later branches assume this vertex stays in the graph.
            self.excluded[c as usize] = true;
            marked.push(c);
        }
        for m in marked {
            self.excluded[m as usize] = false;
        }
        solved
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decycle::verify_acyclic;
    use crate::graph::{BubbleSortStarGraph, BuildOptions};

    fn cycle_edges(n: usize) -> Vec<(usize, usize)> {
        (0..n).map(|i| (i, (i + 1) % n)).collect()
    }

    fn complete_edges(n: usize) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                edges.push((a, b));
            }
        }
        edges
    }

    #[test]
    fn solves_bs3() {
        let g = BubbleSortStarGraph::build(3, BuildOptions::cached()).unwrap();
        let result = exact_fvs(&g, None).unwrap();
        assert_eq!(result.optimum(), Some(2));
        assert_eq!(result.edges, 9);
        assert!(result.nodes_explored > 0);
        let set = result.optimal_set().unwrap();
        assert!(verify_acyclic(&g, set).unwrap().acyclic);
        // Minimality: removing any single chosen vertex leaves a cycle.
        for i in 0..set.len() {
            let mut smaller = set.to_vec();
            smaller.remove(i);
            assert!(!verify_acyclic(&g, &smaller).unwrap().acyclic);
        }
    }

    #[test]
    fn solves_bs4() {
        let g = BubbleSortStarGraph::build(4, BuildOptions::cached()).unwrap();
        let result = exact_fvs(&g, None).unwrap();
        assert_eq!(result.optimum(), Some(10));
        let set = result.optimal_set().unwrap();
        assert_eq!(set.len(), 10);
        assert!(verify_acyclic(&g, set).unwrap().acyclic);
    }

    #[test]
    fn refuses_instances_over_the_cap() {
        let g = BubbleSortStarGraph::build(5, BuildOptions::cached()).unwrap();
        assert!(matches!(
            exact_fvs(&g, None),
            Err(Error::SolverCapExceeded {
                vertices: 120,
                cap: 24
            })
        ));
        // Raising the cap is possible in principle; 30 still refuses 120.
        assert!(exact_fvs_with_cap(&g, None, 30).is_err());
    }

    #[test]
    fn synthetic_graphs() {
        type Case = (&'static str, usize, Vec<(usize, usize)>, usize);
        let cases: Vec<Case> = vec![
            ("six-cycle", 6, cycle_edges(6), 1),
            ("k4", 4, complete_edges(4), 2),
            ("k5", 5, complete_edges(5), 3),
            (
                "k33",
                6,
                vec![
                    (0, 3),
                    (0, 4),
                    (0, 5),
                    (1, 3),
                    (1, 4),
                    (1, 5),
                    (2, 3),
                    (2, 4),
                    (2, 5),
                ],
                2,
            ),
            ("path", 5, vec![(0, 1), (1, 2), (2, 3), (3, 4)], 0),
            ("star", 6, vec![(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)], 0),
            (
                "two-triangles",
                6,
                vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)],
                2,
            ),
            (
                "petersen",
                10,
                vec![
                    (0, 1),
                    (1, 2),
                    (2, 3),
                    (3, 4),
                    (4, 0),
                    (5, 7),
                    (7, 9),
                    (9, 6),
                    (6, 8),
                    (8, 5),
                    (0, 5),
                    (1, 6),
                    (2, 7),
                    (3, 8),
                    (4, 9),
                ],
                3,
            ),
        ];
        for (name, vertices, edges, expect) in cases {
            let result = exact_fvs_generic(vertices, &edges, None).unwrap();
            assert_eq!(result.optimum(), Some(expect), "{name}");
            let set = result.optimal_set().unwrap();
            assert_eq!(set.len(), expect, "{name}");
            assert!(is_forest_after(vertices, &edges, set), "{name} not acyclic");
        }
    }

    /// Independent forest oracle: count edges per component.
    fn is_forest_after(vertices: usize, edges: &[(usize, usize)], removed: &[usize]) -> bool {
        let mut comp: Vec<usize> = (0..vertices).collect();
        fn find(comp: &mut [usize], mut x: usize) -> usize {
            while comp[x] != x {
                comp[x] = comp[comp[x]];
                x = comp[x];
            }
            x
        }
        for &(a, b) in edges {
            if removed.contains(&a) || removed.contains(&b) {
                continue;
            }
            let ra = find(&mut comp, a);
            let rb = find(&mut comp, b);
            if ra == rb {
                return false;
            }
            comp[ra] = rb;
        }
        true
    }

    #[test]
    fn parallel_edges_collapse_and_self_loops_reject() {
        let result = exact_fvs_generic(3, &[(0, 1), (1, 0), (1, 2)], None).unwrap();
        assert_eq!(result.edges, 2);
        assert_eq!(result.optimum(), Some(0));
        assert!(matches!(
            exact_fvs_generic(3, &[(0, 0)], None),
            Err(Error::SelfLoop { v: 0 })
        ));
        assert!(matches!(
            exact_fvs_generic(3, &[(0, 7)], None),
            Err(Error::VertexOutOfRange { v: 7, count: 3 })
        ));
    }

    #[test]
    fn budget_exhaustion_is_an_outcome() {
        let result = exact_fvs_generic(6, &cycle_edges(6), Some(0)).unwrap();
        assert_eq!(result.outcome, ExactOutcome::BudgetExhausted { budget: 0 });
        assert_eq!(result.optimum(), None);
        // A sufficient budget succeeds.
        let result = exact_fvs_generic(6, &cycle_edges(6), Some(1)).unwrap();
        assert_eq!(result.optimum(), Some(1));
    }

    #[test]
    fn forest_inputs_need_nothing() {
        let result = exact_fvs_generic(1, &[], None).unwrap();
        assert_eq!(result.optimum(), Some(0));
        assert_eq!(result.nodes_explored, 1);
    }
}
