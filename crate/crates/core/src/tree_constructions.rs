//! Anagram-free colourings of subdivided trees.
//!
//! Colour ids:
//!
//! | construction | colours |
//! |--------------|---------|
//! | binary, 8 colours | label `l` in {1, 2} and word symbol `w` in {1..4} give `4(l - 1) + w` |
//! | d-ary, 10 colours | red `w`, green `4 + w`, black (even depth) 9, white 10 |
//! | banded | band `i` shifts the d-ary colours by `10i` |

use std::collections::BTreeSet;

use thiserror::Error;

use crate::bounds::{band_count, BoundsError};
use crate::graph_model::{
    complete_dary_tree, subdivide, BaseGraph, Colour, ColouredSubdivision, GraphError, Provenance, RootedTree,
    SubdividedGraph, VertexId,
};
use crate::words::keranen_word;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error("vertex {vertex} has {children} children, more than {limit}")]
    TooManyChildren { vertex: VertexId, children: usize, limit: usize },
    #[error("arity must be at least 2, got {0}")]
    ArityTooSmall(usize),
    #[error("tree of height {got} does not fit in height {limit}")]
    TooTall { got: usize, limit: usize },
    #[error("division count overflows at depth {0}")]
    Overflow(usize),
    #[error("new colour {0} already used by the base colouring")]
    PaletteCollision(Colour),
    #[error("subdivision is not over the given base graph")]
    BaseMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexLabel {
    One,
    Two,
    Black,
    White,
    Red,
    Green,
}

/// A coloured tree subdivision with the labels that define its colouring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelledTreeSubdivision {
    pub tree: RootedTree,
    pub coloured: ColouredSubdivision,
    pub labels: Vec<VertexLabel>,
    /// Label of each tree edge, indexed like the edges of `tree.to_base_graph()`.
    pub edge_labels: Vec<usize>,
}

fn single_vertex(colour: Colour, label: VertexLabel, construction: &str) -> LabelledTreeSubdivision {
    let tree = RootedTree::from_children(0, vec![Vec::new()]).expect("single vertex");
    let graph = subdivide(&tree.to_base_graph(), &[]).expect("no edges");
    let coloured = ColouredSubdivision::new(graph, vec![colour], BTreeSet::from([colour]), Provenance::new(construction).with("height", 0))
        .expect("colour in palette");
    LabelledTreeSubdivision { tree, coloured, labels: vec![label], edge_labels: Vec::new() }
}

fn pow_checked(base: u64, exp: usize, depth: usize) -> Result<u64, TreeError> {
    u32::try_from(exp).ok().and_then(|e| base.checked_pow(e)).ok_or(TreeError::Overflow(depth))
}

fn to_count(x: u64, depth: usize) -> Result<usize, TreeError> {
    usize::try_from(x).map_err(|_| TreeError::Overflow(depth))
}

/// 8-colouring of a subdivided binary tree of height `h >= 1`. An edge whose
/// parent has depth `x` gets `3^(h-x-1) - 1` division vertices.
pub fn build_binary_tree_8(t: &RootedTree) -> Result<LabelledTreeSubdivision, TreeError> {
    if let Some(v) = (0..t.len()).find(|&v| t.children(v).len() > 2) {
        return Err(TreeError::TooManyChildren { vertex: v, children: t.children(v).len(), limit: 2 });
    }
    let h = t.height();
    if h == 0 {
        return Ok(single_vertex(1, VertexLabel::One, "binary-tree"));
    }
    let base = t.to_base_graph();
    let mut edge_labels = vec![1; base.edge_count()];
    let mut counts = vec![0; base.edge_count()];
    for v in 0..t.len() {
        let children = t.children(v);
        for (i, &c) in children.iter().enumerate() {
            let e = t.parent_edge(c).expect("child has a parent edge");
            if children.len() == 2 {
                edge_labels[e] = i + 1;
            }
            counts[e] = to_count(pow_checked(3, h - t.depth(v) - 1, t.depth(v))? - 1, t.depth(v))?;
        }
    }
    let graph = subdivide(&base, &counts)?;
    let mut labels = vec![VertexLabel::One; graph.vertex_count()];
    // per vertex: number of label-1 and label-2 vertices on its root path
    let mut index = vec![0usize; graph.vertex_count()];
    let mut tally = vec![[0usize; 2]; t.len()];
    tally[t.root()] = [1, 0];
    index[t.root()] = 1;
    let as_label = |l: usize| if l == 1 { VertexLabel::One } else { VertexLabel::Two };
    for v in t.bfs_order() {
        for &c in t.children(v) {
            let e = t.parent_edge(c).expect("child has a parent edge");
            let l = edge_labels[e];
            let mut running = tally[v];
            for &d in graph.division_path(e) {
                running[l - 1] += 1;
                labels[d] = as_label(l);
                index[d] = running[l - 1];
            }
            running[l - 1] += 1;
            labels[c] = as_label(l);
            index[c] = running[l - 1];
            tally[c] = running;
        }
    }
    let word = keranen_word(index.iter().copied().max().unwrap_or(0));
    let colours = (0..graph.vertex_count())
        .map(|v| {
            let offset = if labels[v] == VertexLabel::One { 0 } else { 4 };
            offset + word.symbols()[index[v] - 1] + 1
        })
        .collect();
    let provenance = Provenance::new("binary-tree").with("height", h).with("vertices", t.len());
    let coloured = ColouredSubdivision::new(graph, colours, (1..=8).collect(), provenance)?;
    Ok(LabelledTreeSubdivision { tree: t.clone(), coloured, labels, edge_labels })
}

/// 10-colouring of a subdivision of the complete `d`-ary tree of height `h`.
/// The edge to the `y`-th child of a depth-`z` vertex gets
/// `2y(d+1)^(h-z-1)` division vertices, red on the parent half and green on
/// the child half.
pub fn build_dary_tree_10(d: usize, h: usize) -> Result<LabelledTreeSubdivision, TreeError> {
    if d < 2 {
        return Err(TreeError::ArityTooSmall(d));
    }
    if h == 0 {
        return Ok(single_vertex(9, VertexLabel::Black, "dary"));
    }
    let t = complete_dary_tree(d, h);
    let base = t.to_base_graph();
    let mut edge_labels = vec![0; base.edge_count()];
    let mut counts = vec![0; base.edge_count()];
    for v in 0..t.len() {
        let z = t.depth(v);
        for (i, &c) in t.children(v).iter().enumerate() {
            let e = t.parent_edge(c).expect("child has a parent edge");
            edge_labels[e] = i + 1;
            let scale = pow_checked(d as u64 + 1, h - z - 1, z)?;
            let count = scale.checked_mul(2 * (i as u64 + 1)).ok_or(TreeError::Overflow(z))?;
            counts[e] = to_count(count, z)?;
        }
    }
    let graph = subdivide(&base, &counts)?;
    let mut labels = vec![VertexLabel::Black; graph.vertex_count()];
    let mut index = vec![0usize; graph.vertex_count()];
    // red-depth and green-depth of each original vertex
    let mut depths = vec![[0usize; 2]; t.len()];
    for v in t.bfs_order() {
        labels[v] = if t.depth(v) % 2 == 0 { VertexLabel::Black } else { VertexLabel::White };
        for &c in t.children(v) {
            let e = t.parent_edge(c).expect("child has a parent edge");
            let path = graph.division_path(e);
            let half = path.len() / 2;
            let [red, green] = depths[v];
            for (j, &x) in path.iter().enumerate() {
                if j < half {
                    labels[x] = VertexLabel::Red;
                    index[x] = red + j + 1;
                } else {
                    labels[x] = VertexLabel::Green;
                    index[x] = green + j - half + 1;
                }
            }
            depths[c] = [red + half, green + half];
        }
    }
    let word = keranen_word(index.iter().copied().max().unwrap_or(0));
    let colours = (0..graph.vertex_count())
        .map(|v| match labels[v] {
            VertexLabel::Black => 9,
            VertexLabel::White => 10,
            VertexLabel::Red => word.symbols()[index[v] - 1] + 1,
            _ => word.symbols()[index[v] - 1] + 5,
        })
        .collect();
    let provenance = Provenance::new("dary").with("d", d).with("height", h);
    let coloured = ColouredSubdivision::new(graph, colours, (1..=10).collect(), provenance)?;
    Ok(LabelledTreeSubdivision { tree: t, coloured, labels, edge_labels })
}

/// Pairs each vertex of `t` reachable from `from` through edges accepted by
/// `keep` with its image in `onto`, matching the `i`-th child to the `i`-th
/// child. Pairs come out in breadth-first order.
fn embed(
    t: &RootedTree,
    from: VertexId,
    keep: impl Fn(VertexId) -> bool,
    onto: &RootedTree,
) -> Result<Vec<(VertexId, VertexId)>, TreeError> {
    let mut pairs = vec![(from, onto.root())];
    let mut i = 0;
    while i < pairs.len() {
        let (v, image) = pairs[i];
        let children: Vec<VertexId> = t.children(v).iter().copied().filter(|&c| keep(c)).collect();
        let targets = onto.children(image);
        if children.len() > targets.len() {
            return Err(TreeError::TooManyChildren { vertex: v, children: children.len(), limit: targets.len() });
        }
        pairs.extend(children.into_iter().zip(targets.iter().copied()));
        i += 1;
    }
    Ok(pairs)
}

/// Restricts a coloured subdivision of a tree to the copy of `t` embedded
/// from the root with children matched in order.
pub fn prune_to_subtree(full: &LabelledTreeSubdivision, t: &RootedTree) -> Result<LabelledTreeSubdivision, TreeError> {
    if t.height() > full.tree.height() {
        return Err(TreeError::TooTall { got: t.height(), limit: full.tree.height() });
    }
    let pairs = embed(t, t.root(), |_| true, &full.tree)?;
    let mut image = vec![0; t.len()];
    for &(v, w) in &pairs {
        image[v] = w;
    }
    let base = t.to_base_graph();
    let source = full.coloured.graph();
    let full_edge = |c: VertexId| full.tree.parent_edge(image[c]).expect("non-root image");
    let mut counts = vec![0; base.edge_count()];
    let mut edge_labels = vec![0; base.edge_count()];
    for c in (0..t.len()).filter(|&c| c != t.root()) {
        let e = t.parent_edge(c).expect("non-root");
        counts[e] = source.division_path(full_edge(c)).len();
        edge_labels[e] = full.edge_labels[full_edge(c)];
    }
    let graph = subdivide(&base, &counts)?;
    let mut colours = vec![0; graph.vertex_count()];
    let mut labels = vec![VertexLabel::Black; graph.vertex_count()];
    for v in 0..t.len() {
        colours[v] = full.coloured.colour(image[v]);
        labels[v] = full.labels[image[v]];
        if v != t.root() {
            let from = source.division_path(full_edge(v));
            for (&x, &y) in graph.division_path(t.parent_edge(v).expect("non-root")).iter().zip(from) {
                colours[x] = full.coloured.colour(y);
                labels[x] = full.labels[y];
            }
        }
    }
    let mut provenance = full.coloured.provenance().clone();
    provenance.construction = format!("{}-pruned", provenance.construction);
    let provenance = provenance.with("vertices", t.len());
    let coloured = ColouredSubdivision::new(graph, colours, full.coloured.palette().clone(), provenance)?;
    Ok(LabelledTreeSubdivision { tree: t.clone(), coloured, labels, edge_labels })
}

/// 10-colouring of a subdivision of any tree, taken from the complete tree
/// of the same height with arity `max(2, max children)`.
pub fn build_dary_subtree_10(t: &RootedTree) -> Result<LabelledTreeSubdivision, TreeError> {
    let full = build_dary_tree_10(t.max_children().max(2), t.height())?;
    prune_to_subtree(&full, t)
}

/// Layout of the depth bands used by [`build_dary_banded`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bands {
    pub count: usize,
    pub size: usize,
}

impl Bands {
    pub fn new(d: usize, height: usize, k: usize) -> Result<Self, TreeError> {
        let count = band_count(d, height, k)?;
        Ok(Self { count, size: height.div_ceil(count) })
    }

    /// Band of a vertex at `depth`. Edges at depths `i * size - 1` are cut,
    /// for `i` in `0..count` (`i = 0` cuts nothing).
    pub fn of_depth(&self, depth: usize) -> usize {
        (depth / self.size).min(self.count - 1)
    }
}

/// Subdivision of the complete `d`-ary tree of height `h` with at most `k`
/// division vertices per edge: the tree is cut into depth bands, each band
/// component is coloured by the 10-colour construction on its own block of
/// ten colours, and the cut edges stay unsubdivided.
pub fn build_dary_banded(d: usize, h: usize, k: usize) -> Result<ColouredSubdivision, TreeError> {
    if d < 2 {
        return Err(TreeError::ArityTooSmall(d));
    }
    let bands = Bands::new(d, h, k)?;
    let t = complete_dary_tree(d, h);
    let base = t.to_base_graph();
    let mut counts = vec![0; base.edge_count()];
    let mut colours_of: Vec<Option<(Colour, Vec<Colour>)>> = vec![None; t.len()];
    let mut by_height: Vec<Option<LabelledTreeSubdivision>> = vec![None; h + 1];
    for root in (0..t.len()).filter(|&v| v == t.root() || bands.of_depth(t.depth(v)) != bands.of_depth(t.depth(v) - 1)) {
        let band = bands.of_depth(t.depth(root));
        let comp_height = if band + 1 == bands.count { h } else { (band + 1) * bands.size - 1 }.min(h) - t.depth(root);
        if by_height[comp_height].is_none() {
            by_height[comp_height] = Some(build_dary_tree_10(d, comp_height)?);
        }
        let comp = by_height[comp_height].as_ref().expect("just built");
        let shift = 10 * band as Colour;
        for (v, w) in embed(&t, root, |c| bands.of_depth(t.depth(c)) == band, &comp.tree)? {
            let division = match comp.tree.parent_edge(w) {
                Some(e) if v != root => comp.coloured.path_colours(comp.coloured.graph().division_path(e)),
                _ => Vec::new(),
            };
            if v != root {
                counts[t.parent_edge(v).expect("non-root")] = division.len();
            }
            let shifted = division.into_iter().map(|c| c + shift).collect();
            colours_of[v] = Some((comp.coloured.colour(w) + shift, shifted));
        }
    }
    let graph = subdivide(&base, &counts)?;
    let mut colours = vec![0; graph.vertex_count()];
    for (v, entry) in colours_of.into_iter().enumerate() {
        let (own, division) = entry.expect("every vertex lies in a band component");
        colours[v] = own;
        if let Some(e) = t.parent_edge(v) {
            for (&x, c) in graph.division_path(e).iter().zip(division) {
                colours[x] = c;
            }
        }
    }
    let palette = (1..=10 * bands.count as Colour).collect();
    let provenance = Provenance::new("dary-banded").with("d", d).with("height", h).with("k", k).with("bands", bands.count);
    Ok(ColouredSubdivision::new(graph, colours, palette, provenance)?)
}

/// Keeps the base colouring on the original vertices and colours every
/// division path with a prefix of the 4-symbol anagram-free word on four new
/// colours (by default the four after the largest base colour).
pub fn extend_plus_4(
    base: &BaseGraph,
    base_colours: &[Colour],
    s: &SubdividedGraph,
    new_colours: Option<[Colour; 4]>,
) -> Result<ColouredSubdivision, TreeError> {
    if s.base() != base {
        return Err(TreeError::BaseMismatch);
    }
    if base_colours.len() != base.vertex_count() {
        return Err(GraphError::ColouringLength { expected: base.vertex_count(), got: base_colours.len() }.into());
    }
    let used: BTreeSet<Colour> = base_colours.iter().copied().collect();
    let fresh = match new_colours {
        Some(fresh) => {
            if let Some(&c) = fresh.iter().find(|c| used.contains(c)) {
                return Err(TreeError::PaletteCollision(c));
            }
            fresh
        }
        None => {
            let top = used.last().copied().unwrap_or(0);
            [top + 1, top + 2, top + 3, top + 4]
        }
    };
    let word = keranen_word(s.max_division_count());
    let mut colours = base_colours.to_vec();
    colours.resize(s.vertex_count(), 0);
    for path in s.division_paths() {
        for (&v, &sym) in path.iter().zip(word.symbols()) {
            colours[v] = fresh[sym as usize];
        }
    }
    let mut palette = used;
    if s.vertex_count() > s.original_count() {
        palette.extend(fresh);
    }
    let provenance = Provenance::new("plus-4").with("max_division", s.max_division_count());
    Ok(ColouredSubdivision::new(s.clone(), colours, palette, provenance)?)
}
