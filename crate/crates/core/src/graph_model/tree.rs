use rand::Rng;

use super::{BaseGraph, GraphError, VertexId};

/// A rooted tree with ordered children.
///
/// Tree edges are indexed by their child: the edge list of [`Self::to_base_graph`]
/// holds `(parent(c), c)` for every non-root `c` in increasing id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    root: VertexId,
    parent: Vec<Option<VertexId>>,
    children: Vec<Vec<VertexId>>,
    depth: Vec<usize>,
    child_edge: Vec<Option<usize>>,
}

impl RootedTree {
    /// Builds a tree from ordered child lists.
    pub fn from_children(root: VertexId, children: Vec<Vec<VertexId>>) -> Result<Self, GraphError> {
        let n = children.len();
        if root >= n {
            return Err(GraphError::InvalidTree(format!("root {root} out of range for {n} vertices")));
        }
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut stack = vec![root];
        let mut visited = 1;
        while let Some(u) = stack.pop() {
            for &c in &children[u] {
                if c >= n {
                    return Err(GraphError::InvalidTree(format!("child {c} out of range")));
                }
                if seen[c] {
                    return Err(GraphError::InvalidTree(format!("vertex {c} reached twice")));
                }
                seen[c] = true;
                visited += 1;
                parent[c] = Some(u);
                depth[c] = depth[u] + 1;
                stack.push(c);
            }
        }
        if visited != n {
            return Err(GraphError::InvalidTree(format!("{} vertices unreachable from the root", n - visited)));
        }
        let mut child_edge = vec![None; n];
        let mut next = 0;
        for (v, slot) in child_edge.iter_mut().enumerate() {
            if v != root {
                *slot = Some(next);
                next += 1;
            }
        }
        Ok(Self { root, parent, children, depth, child_edge })
    }

    /// Builds a tree from a parent map; children are ordered by id.
    pub fn from_parents(parent: &[Option<VertexId>]) -> Result<Self, GraphError> {
        let n = parent.len();
        let roots: Vec<_> = (0..n).filter(|&v| parent[v].is_none()).collect();
        let &[root] = roots.as_slice() else {
            return Err(GraphError::InvalidTree(format!("expected one root, found {}", roots.len())));
        };
        let mut children = vec![Vec::new(); n];
        for (v, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n {
                    return Err(GraphError::InvalidTree(format!("parent {p} out of range")));
                }
                children[p].push(v);
            }
        }
        Self::from_children(root, children)
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v]
    }

    pub fn children(&self, v: VertexId) -> &[VertexId] {
        &self.children[v]
    }

    pub fn depth(&self, v: VertexId) -> usize {
        self.depth[v]
    }

    pub fn height(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.children[v].is_empty()
    }

    pub fn max_children(&self) -> usize {
        self.children.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Index of the edge from `v` to its parent.
    pub fn parent_edge(&self, v: VertexId) -> Option<usize> {
        self.child_edge[v]
    }

    /// Vertices from `v` up to the root, inclusive.
    pub fn root_path(&self, v: VertexId) -> Vec<VertexId> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            path.push(p);
            cur = p;
        }
        path
    }

    /// Vertices in breadth-first order from the root, children in order.
    pub fn bfs_order(&self) -> Vec<VertexId> {
        let mut order = Vec::with_capacity(self.len());
        order.push(self.root);
        let mut i = 0;
        while i < order.len() {
            order.extend_from_slice(&self.children[order[i]]);
            i += 1;
        }
        order
    }

    pub fn leaves(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.len()).filter(|&v| self.is_leaf(v))
    }

    pub fn to_base_graph(&self) -> BaseGraph {
        let edges = (0..self.len())
            .filter_map(|c| self.parent[c].map(|p| (p, c)))
            .collect();
        BaseGraph::new(self.len(), edges).expect("tree edges form a simple graph")
    }
}

/// The complete `d`-ary tree of height `h`, vertices numbered breadth-first.
pub fn complete_dary_tree(d: usize, h: usize) -> RootedTree {
    let mut children: Vec<Vec<VertexId>> = vec![Vec::new()];
    let mut level = vec![0];
    for _ in 0..h {
        let mut next = Vec::with_capacity(level.len() * d);
        for &v in &level {
            for _ in 0..d {
                let c = children.len();
                children.push(Vec::new());
                children[v].push(c);
                next.push(c);
            }
        }
        level = next;
    }
    RootedTree::from_children(0, children).expect("complete tree is well formed")
}

/// A random binary tree of height between 1 and `max_height`: the root gets one
/// or two children and every other vertex above `max_height` gets 0, 1 or 2.
pub fn random_binary_tree<R: Rng + ?Sized>(max_height: usize, rng: &mut R) -> RootedTree {
    let mut children: Vec<Vec<VertexId>> = vec![Vec::new()];
    let mut frontier = vec![(0, 0)];
    while let Some((v, depth)) = frontier.pop() {
        if depth == max_height {
            continue;
        }
        let count = if v == 0 { rng.gen_range(1..=2) } else { rng.gen_range(0..=2) };
        for _ in 0..count {
            let c = children.len();
            children.push(Vec::new());
            children[v].push(c);
            frontier.push((c, depth + 1));
        }
    }
    RootedTree::from_children(0, children).expect("generated tree is well formed")
}
