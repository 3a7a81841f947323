//! Graphs, rooted trees and their subdivisions.

mod coloured;
mod paths;
mod subdivision;
mod tree;

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

pub use coloured::{Colour, ColouredSubdivision, Provenance};
pub use paths::{count_directed_paths, enumerate_simple_paths, is_simple_path, SimplePaths};
pub use subdivision::{k_subdivision, one_subdivision, subdivide, SubdividedGraph};
pub use tree::{complete_dary_tree, random_binary_tree, RootedTree};

pub type VertexId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} is out of range for a graph on {vertex_count} vertices")]
    VertexOutOfRange { vertex: VertexId, vertex_count: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(VertexId, VertexId),
    #[error("expected {expected} subdivision counts, got {got}")]
    CountMismatch { expected: usize, got: usize },
    #[error("graph is not bipartite: odd cycle through vertex {0}")]
    NotBipartite(VertexId),
    #[error("two-colouring is not proper on edge {0}-{1}")]
    ImproperColouring(VertexId, VertexId),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("invalid subdivision: {0}")]
    InvalidSubdivision(String),
    #[error("colouring has {got} entries for {expected} vertices")]
    ColouringLength { expected: usize, got: usize },
    #[error("vertex {vertex} has colour {colour}, which is not in the palette")]
    ColourOutsidePalette { vertex: VertexId, colour: Colour },
}

/// Side of a proper two-colouring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Black,
    White,
}

impl Side {
    pub fn opposite(self) -> Self {
        match self {
            Side::Black => Side::White,
            Side::White => Side::Black,
        }
    }
}

/// A simple undirected graph on vertices `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseGraph {
    vertex_count: usize,
    edges: Vec<(VertexId, VertexId)>,
}

impl BaseGraph {
    pub fn new(vertex_count: usize, edges: Vec<(VertexId, VertexId)>) -> Result<Self, GraphError> {
        let mut seen = BTreeSet::new();
        for &(u, v) in &edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(GraphError::VertexOutOfRange { vertex: w, vertex_count });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
        }
        Ok(Self { vertex_count, edges })
    }

    /// Builds a graph from an edge list whose vertex set is `0..=max id`.
    pub fn from_edges(edges: Vec<(VertexId, VertexId)>) -> Result<Self, GraphError> {
        let vertex_count = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        Self::new(vertex_count, edges)
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self { vertex_count: n, edges }
    }

    /// The path on `n` vertices, `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let edges = (1..n).map(|v| (v - 1, v)).collect();
        Self { vertex_count: n, edges }
    }

    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        if n > 0 {
            edges.push((n - 1, 0));
        }
        Self::new(n, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Neighbour lists in ascending order.
    pub fn adjacency(&self) -> Vec<Vec<VertexId>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj.iter_mut().for_each(|n| n.sort_unstable());
        adj
    }

    /// A proper two-colouring; each component's lowest vertex is black.
    pub fn two_colouring(&self) -> Result<Vec<Side>, GraphError> {
        let adj = self.adjacency();
        let mut side: Vec<Option<Side>> = vec![None; self.vertex_count];
        for start in 0..self.vertex_count {
            if side[start].is_some() {
                continue;
            }
            side[start] = Some(Side::Black);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let s = side[u].expect("queued vertices are coloured");
                for &v in &adj[u] {
                    match side[v] {
                        None => {
                            side[v] = Some(s.opposite());
                            queue.push_back(v);
                        }
                        Some(t) if t == s => return Err(GraphError::NotBipartite(v)),
                        Some(_) => {}
                    }
                }
            }
        }
        Ok(side.into_iter().map(|s| s.expect("every vertex visited")).collect())
    }

    pub fn check_two_colouring(&self, sides: &[Side]) -> Result<(), GraphError> {
        if sides.len() != self.vertex_count {
            return Err(GraphError::ColouringLength { expected: self.vertex_count, got: sides.len() });
        }
        match self.edges.iter().find(|&&(u, v)| sides[u] == sides[v]) {
            Some(&(u, v)) => Err(GraphError::ImproperColouring(u, v)),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(BaseGraph::new(2, vec![(0, 0)]), Err(GraphError::SelfLoop(0)));
        assert_eq!(BaseGraph::new(2, vec![(0, 1), (1, 0)]), Err(GraphError::DuplicateEdge(1, 0)));
        assert_eq!(
            BaseGraph::new(2, vec![(0, 2)]),
            Err(GraphError::VertexOutOfRange { vertex: 2, vertex_count: 2 })
        );
    }

    #[test]
    fn two_colouring() {
        let p = BaseGraph::path(4);
        let sides = p.two_colouring().unwrap();
        assert_eq!(sides, vec![Side::Black, Side::White, Side::Black, Side::White]);
        assert!(p.check_two_colouring(&sides).is_ok());
        assert!(matches!(BaseGraph::complete(3).two_colouring(), Err(GraphError::NotBipartite(_))));
        assert!(BaseGraph::cycle(6).unwrap().two_colouring().is_ok());
        assert_eq!(
            p.check_two_colouring(&[Side::Black; 4]),
            Err(GraphError::ImproperColouring(0, 1))
        );
    }

    #[test]
    fn complete_graph_edges() {
        assert_eq!(BaseGraph::complete(4).edge_count(), 6);
        assert_eq!(BaseGraph::complete(1).edge_count(), 0);
        assert_eq!(BaseGraph::from_edges(vec![(0, 3)]).unwrap().vertex_count(), 4);
    }
}
