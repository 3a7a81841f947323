use super::{BaseGraph, GraphError, Side, VertexId};

/// A subdivision of a base graph.
///
/// Original vertices keep their base ids `0..n`; every other vertex is a
/// division vertex lying on exactly one base edge. `division_paths[e]` lists
/// the division vertices of edge `e = (u, v)` in order from `u` to `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubdividedGraph {
    base: BaseGraph,
    division_paths: Vec<Vec<VertexId>>,
    vertex_count: usize,
    adjacency: Vec<Vec<VertexId>>,
    location: Vec<Option<(usize, usize)>>,
}

impl SubdividedGraph {
    /// Assembles a subdivision from explicit division paths. Every id in
    /// `n..vertex_count` must occur in exactly one path.
    pub fn from_parts(base: BaseGraph, division_paths: Vec<Vec<VertexId>>) -> Result<Self, GraphError> {
        if division_paths.len() != base.edge_count() {
            return Err(GraphError::CountMismatch { expected: base.edge_count(), got: division_paths.len() });
        }
        let n = base.vertex_count();
        let vertex_count = n + division_paths.iter().map(Vec::len).sum::<usize>();
        let mut location = vec![None; vertex_count];
        for (e, path) in division_paths.iter().enumerate() {
            for (pos, &v) in path.iter().enumerate() {
                if v < n || v >= vertex_count {
                    return Err(GraphError::InvalidSubdivision(format!(
                        "division vertex {v} of edge {e} must lie in {n}..{vertex_count}"
                    )));
                }
                if location[v].is_some() {
                    return Err(GraphError::InvalidSubdivision(format!("division vertex {v} used twice")));
                }
                location[v] = Some((e, pos));
            }
        }
        let mut adjacency = vec![Vec::new(); vertex_count];
        for (e, &(u, v)) in base.edges().iter().enumerate() {
            let full: Vec<VertexId> =
                std::iter::once(u).chain(division_paths[e].iter().copied()).chain(std::iter::once(v)).collect();
            for pair in full.windows(2) {
                adjacency[pair[0]].push(pair[1]);
                adjacency[pair[1]].push(pair[0]);
            }
        }
        adjacency.iter_mut().for_each(|a| a.sort_unstable());
        Ok(Self { base, division_paths, vertex_count, adjacency, location })
    }

    pub fn base(&self) -> &BaseGraph {
        &self.base
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn original_count(&self) -> usize {
        self.base.vertex_count()
    }

    pub fn is_original(&self, v: VertexId) -> bool {
        v < self.base.vertex_count()
    }

    pub fn division_paths(&self) -> &[Vec<VertexId>] {
        &self.division_paths
    }

    pub fn division_path(&self, edge: usize) -> &[VertexId] {
        &self.division_paths[edge]
    }

    /// Edge index and position along its division path, for division vertices.
    pub fn location(&self, v: VertexId) -> Option<(usize, usize)> {
        self.location[v]
    }

    /// The whole path replacing `edge`, endpoints included.
    pub fn edge_path(&self, edge: usize) -> Vec<VertexId> {
        let (u, v) = self.base.edges()[edge];
        std::iter::once(u).chain(self.division_paths[edge].iter().copied()).chain(std::iter::once(v)).collect()
    }

    pub fn neighbours(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v]
    }

    pub fn adjacency(&self) -> &[Vec<VertexId>] {
        &self.adjacency
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn division_counts(&self) -> Vec<usize> {
        self.division_paths.iter().map(Vec::len).collect()
    }

    pub fn max_division_count(&self) -> usize {
        self.division_paths.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Recovers the base graph by walking every division chain from its
    /// original endpoints; edges come out in base-edge order.
    pub fn contract(&self) -> Result<BaseGraph, GraphError> {
        let n = self.original_count();
        let mut edges = Vec::new();
        for e in 0..self.base.edge_count() {
            let (u, _) = self.base.edges()[e];
            let mut prev = u;
            let mut cur = match self.division_paths[e].first() {
                Some(&d) => d,
                None => self.base.edges()[e].1,
            };
            while cur >= n {
                if self.adjacency[cur].len() != 2 {
                    return Err(GraphError::InvalidSubdivision(format!("division vertex {cur} has degree != 2")));
                }
                let next = if self.adjacency[cur][0] == prev { self.adjacency[cur][1] } else { self.adjacency[cur][0] };
                prev = cur;
                cur = next;
            }
            edges.push((u, cur));
        }
        BaseGraph::new(n, edges)
    }

    /// Forgets the original/division distinction.
    pub fn to_base_graph(&self) -> BaseGraph {
        let mut edges = Vec::with_capacity(self.edge_count());
        for e in 0..self.base.edge_count() {
            for pair in self.edge_path(e).windows(2) {
                edges.push((pair[0], pair[1]));
            }
        }
        BaseGraph::new(self.vertex_count, edges).expect("subdivision of a simple graph is simple")
    }
}

/// Subdivides edge `e` exactly `counts[e]` times. Division vertices are
/// numbered after the originals, grouped by edge in edge order.
pub fn subdivide(base: &BaseGraph, counts: &[usize]) -> Result<SubdividedGraph, GraphError> {
    if counts.len() != base.edge_count() {
        return Err(GraphError::CountMismatch { expected: base.edge_count(), got: counts.len() });
    }
    let mut next = base.vertex_count();
    let paths = counts
        .iter()
        .map(|&k| {
            let path: Vec<VertexId> = (next..next + k).collect();
            next += k;
            path
        })
        .collect();
    SubdividedGraph::from_parts(base.clone(), paths)
}

pub fn k_subdivision(base: &BaseGraph, k: usize) -> SubdividedGraph {
    subdivide(base, &vec![k; base.edge_count()]).expect("one count per edge")
}

/// The 1-subdivision flattened to a plain graph, with originals black and
/// midpoints white. Edge `j = (u, v)` of `base` becomes edges `2j = (u, m_j)`
/// and `2j + 1 = (m_j, v)` where `m_j = n + j`.
pub fn one_subdivision(base: &BaseGraph) -> (BaseGraph, Vec<Side>) {
    let flat = k_subdivision(base, 1).to_base_graph();
    let sides = (0..flat.vertex_count())
        .map(|v| if v < base.vertex_count() { Side::Black } else { Side::White })
        .collect();
    (flat, sides)
}
