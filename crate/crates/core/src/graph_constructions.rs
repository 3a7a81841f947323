//! Sequence subdivisions of arbitrary graphs and their discriminating
//! colourings.
//!
//! A t-sequence subdivision of a properly two-coloured graph ranks its edges
//! by (white endpoint label, black endpoint label) and gives the edge of
//! rank `i` exactly `3 * t_i` division vertices, split into thirds `X`, `Y`,
//! `Z` counted from the white end.
//!
//! Colour ids used by the constructions:
//!
//! | construction | division colours | white | black |
//! |--------------|------------------|-------|-------|
//! | 14 colours   | `X`: 1-4, `Y`: 5-8, `Z`: 9-12 | 13 | 14 |
//! | 8 colours    | 1-3 shared, 4/5/6 for the fourth symbol in `X`/`Y`/`Z` | 7 | 8 |
//! | merged, `k` groups | group `i` uses `12i + 1 ..= 12i + 12` | `12k + 1` | `12k + 2` |

use std::collections::BTreeSet;

use num_rational::Ratio;
use thiserror::Error;

use crate::graph_model::{one_subdivision, subdivide, BaseGraph, Colour, ColouredSubdivision, GraphError, Provenance, Side, SubdividedGraph, VertexId};
use crate::words::keranen_word;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("sequence has {got} terms but {needed} edges need one each")]
    SequenceTooShort { needed: usize, got: usize },
    #[error("sequence terms must be positive (term {0} is zero)")]
    NonPositiveTerm(usize),
    #[error("sequence term {0} overflows 64 bits")]
    Overflow(usize),
    #[error("the base graph needs at least one edge")]
    NoEdges,
    #[error("group count {k} must lie in 1..={edges}")]
    GroupCount { k: usize, edges: usize },
}

/// One of the three consecutive parts of a division path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Third {
    X,
    Y,
    Z,
}

impl Third {
    pub const ALL: [Third; 3] = [Third::X, Third::Y, Third::Z];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// A finite prefix `t_1, t_2, ...` of positive integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TSequence(Vec<u64>);

impl TSequence {
    pub fn new(values: Vec<u64>) -> Result<Self, ConstructionError> {
        if let Some(i) = values.iter().position(|&t| t == 0) {
            return Err(ConstructionError::NonPositiveTerm(i + 1));
        }
        Ok(Self(values))
    }

    /// The 1-based term `t_i`.
    pub fn term(&self, i: usize) -> u64 {
        self.0[i - 1]
    }

    pub fn values(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `t_i = 2^(i-1)` for `i = 1..=m`.
pub fn thm6_sequence(m: usize) -> Result<TSequence, ConstructionError> {
    let values = (0..m)
        .map(|i| u32::try_from(i).ok().and_then(|i| 1u64.checked_shl(i)).filter(|_| i < 64).ok_or(ConstructionError::Overflow(i + 1)))
        .collect::<Result<_, _>>()?;
    TSequence::new(values)
}

/// `t_1 = 8` and `t_n = 15 + floor(25/3 * (t_1 + ... + t_(n-1)))`, exactly.
pub fn thm7_sequence(m: usize) -> Result<TSequence, ConstructionError> {
    let mut values: Vec<u64> = Vec::with_capacity(m);
    let mut sum = 0u64;
    for n in 1..=m {
        let t = if n == 1 {
            8
        } else {
            sum.checked_mul(25).map(|x| x / 3).and_then(|x| x.checked_add(15)).ok_or(ConstructionError::Overflow(n))?
        };
        sum = sum.checked_add(t).ok_or(ConstructionError::Overflow(n))?;
        values.push(t);
    }
    TSequence::new(values)
}

/// `t_n / 15 - 5/9 * (t_1 + ... + t_(n-1))`, exactly. A positive value means
/// an upper density of 5/9 over earlier edges stays below a lower density
/// of 1/15 on edge `n`.
pub fn density_slack(t: &TSequence, n: usize) -> Ratio<i128> {
    let before: i128 = t.values()[..n - 1].iter().map(|&x| i128::from(x)).sum();
    Ratio::new(i128::from(t.term(n)), 15) - Ratio::new(5, 9) * Ratio::from_integer(before)
}

/// Vertex and edge labellings of a t-sequence subdivision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceSubdivisionLabels {
    pub sides: Vec<Side>,
    /// 1-based bijection onto `1..=n`; every white label exceeds every black one.
    pub vertex_label: Vec<usize>,
    /// 1-based rank of each base edge, ordered by white then black endpoint label.
    pub edge_rank: Vec<usize>,
    /// Per third and base edge, its vertices ordered from the white end.
    thirds: [Vec<Vec<VertexId>>; 3],
}

impl SequenceSubdivisionLabels {
    pub fn third(&self, which: Third, edge: usize) -> &[VertexId] {
        &self.thirds[which.index()][edge]
    }

    pub fn white_end(&self, g: &BaseGraph, edge: usize) -> VertexId {
        let (u, v) = g.edges()[edge];
        if self.sides[u] == Side::White {
            u
        } else {
            v
        }
    }

    pub fn black_end(&self, g: &BaseGraph, edge: usize) -> VertexId {
        let (u, v) = g.edges()[edge];
        if self.sides[u] == Side::White {
            v
        } else {
            u
        }
    }

    /// Division vertices of `edge` ordered from the white end.
    pub fn from_white(&self, edge: usize) -> Vec<VertexId> {
        Third::ALL.iter().flat_map(|&q| self.third(q, edge).iter().copied()).collect()
    }
}

/// Builds the t-sequence subdivision of a properly two-coloured graph.
/// Blacks get labels `1..=#black` in id order, whites the labels above.
pub fn build_sequence_subdivision(
    g: &BaseGraph,
    sides: &[Side],
    t: &TSequence,
) -> Result<(SubdividedGraph, SequenceSubdivisionLabels), ConstructionError> {
    g.check_two_colouring(sides)?;
    if t.len() < g.edge_count() {
        return Err(ConstructionError::SequenceTooShort { needed: g.edge_count(), got: t.len() });
    }
    let mut vertex_label = vec![0; g.vertex_count()];
    let mut next = 1;
    for wanted in [Side::Black, Side::White] {
        for v in (0..g.vertex_count()).filter(|&v| sides[v] == wanted) {
            vertex_label[v] = next;
            next += 1;
        }
    }
    let endpoint_labels = |e: usize| {
        let (u, v) = g.edges()[e];
        let (w, b) = if sides[u] == Side::White { (u, v) } else { (v, u) };
        (vertex_label[w], vertex_label[b])
    };
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.sort_by_key(|&e| endpoint_labels(e));
    let mut edge_rank = vec![0; g.edge_count()];
    for (rank, &e) in order.iter().enumerate() {
        edge_rank[e] = rank + 1;
    }
    let counts: Vec<usize> = edge_rank.iter().map(|&r| 3 * t.term(r) as usize).collect();
    let s = subdivide(g, &counts)?;
    let mut thirds: [Vec<Vec<VertexId>>; 3] = Default::default();
    for (e, &(u, _)) in g.edges().iter().enumerate() {
        let mut path = s.division_path(e).to_vec();
        if sides[u] != Side::White {
            path.reverse();
        }
        let len = t.term(edge_rank[e]) as usize;
        for (q, chunk) in path.chunks(len).enumerate() {
            thirds[q].push(chunk.to_vec());
        }
    }
    Ok((s, SequenceSubdivisionLabels { sides: sides.to_vec(), vertex_label, edge_rank, thirds }))
}

/// A coloured t-sequence subdivision with its labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceColouring {
    pub coloured: ColouredSubdivision,
    pub labels: SequenceSubdivisionLabels,
    pub t: TSequence,
}

fn original_colours(s: &SubdividedGraph, sides: &[Side], white: Colour, black: Colour) -> Vec<Colour> {
    let mut colours = vec![0; s.vertex_count()];
    for (v, &side) in sides.iter().enumerate() {
        colours[v] = if side == Side::White { white } else { black };
    }
    colours
}

/// Colours every third with its own anagram-free word on four colours:
/// `X` uses `first..first+4`, `Y` the next four, `Z` the four after.
pub fn colour_by_blocks(
    g: &BaseGraph,
    sides: &[Side],
    t: &TSequence,
    first: Colour,
    white: Colour,
    black: Colour,
) -> Result<SequenceColouring, ConstructionError> {
    let (s, labels) = build_sequence_subdivision(g, sides, t)?;
    let mut colours = original_colours(&s, sides, white, black);
    let longest = t.values().iter().take(g.edge_count()).copied().max().unwrap_or(0) as usize;
    let word = keranen_word(longest);
    for e in 0..g.edge_count() {
        for q in Third::ALL {
            let offset = first + 4 * q.index() as Colour;
            for (&v, &sym) in labels.third(q, e).iter().zip(word.symbols()) {
                colours[v] = offset + sym;
            }
        }
    }
    let mut palette: BTreeSet<Colour> = (first..first + 12).collect();
    palette.extend([white, black]);
    let coloured = ColouredSubdivision::new(s, colours, palette, Provenance::new("blocks"))?;
    Ok(SequenceColouring { coloured, labels, t: t.clone() })
}

/// Colours each whole division path with one anagram-free word, keeping
/// symbols 1-3 and marking the fourth symbol by the third it falls in.
pub fn colour_by_density(g: &BaseGraph, sides: &[Side], t: &TSequence) -> Result<SequenceColouring, ConstructionError> {
    let (s, labels) = build_sequence_subdivision(g, sides, t)?;
    let mut colours = original_colours(&s, sides, 7, 8);
    let longest = 3 * t.values().iter().take(g.edge_count()).copied().max().unwrap_or(0) as usize;
    let word = keranen_word(longest);
    for e in 0..g.edge_count() {
        let mut symbols = word.symbols().iter();
        for q in Third::ALL {
            for &v in labels.third(q, e) {
                let sym = *symbols.next().expect("word covers the division path");
                colours[v] = if sym < 3 { sym + 1 } else { 4 + q.index() as Colour };
            }
        }
    }
    let palette = (1..=8).collect();
    let coloured = ColouredSubdivision::new(s, colours, palette, Provenance::new("density"))?;
    Ok(SequenceColouring { coloured, labels, t: t.clone() })
}

fn one_subdivision_with_edges(g_prime: &BaseGraph) -> Result<(BaseGraph, Vec<Side>), ConstructionError> {
    if g_prime.edge_count() == 0 {
        return Err(ConstructionError::NoEdges);
    }
    Ok(one_subdivision(g_prime))
}

/// 14-colouring of a t-sequence subdivision of the 1-subdivision of
/// `g_prime`, with `t_i = 2^(i-1)`.
pub fn colour_14(g_prime: &BaseGraph) -> Result<SequenceColouring, ConstructionError> {
    let (g, sides) = one_subdivision_with_edges(g_prime)?;
    let t = thm6_sequence(g.edge_count())?;
    let mut out = colour_by_blocks(&g, &sides, &t, 1, 13, 14)?;
    out.coloured.set_provenance(
        Provenance::new("graph14").with("vertices", g_prime.vertex_count()).with("edges", g_prime.edge_count()),
    );
    Ok(out)
}

/// 8-colouring of a t-sequence subdivision of the 1-subdivision of
/// `g_prime`, with `t_1 = 8`, `t_n = 15 + floor(25/3 * sum)`.
pub fn colour_8(g_prime: &BaseGraph) -> Result<SequenceColouring, ConstructionError> {
    let (g, sides) = one_subdivision_with_edges(g_prime)?;
    let t = thm7_sequence(g.edge_count())?;
    let mut out = colour_by_density(&g, &sides, &t)?;
    out.coloured.set_provenance(
        Provenance::new("graph8").with("vertices", g_prime.vertex_count()).with("edges", g_prime.edge_count()),
    );
    Ok(out)
}

/// Splits `m` edges, in order, into `k` consecutive groups whose sizes differ
/// by at most one; larger groups come first.
pub fn equitable_groups(m: usize, k: usize) -> Vec<std::ops::Range<usize>> {
    let (base, extra) = (m / k, m % k);
    let mut start = 0;
    (0..k)
        .map(|i| {
            let len = base + usize::from(i < extra);
            let range = start..start + len;
            start += len;
            range
        })
        .collect()
}

/// Partitions the edges of `g` into `k` groups, applies the 14-colour
/// construction to each, and merges the results over the shared
/// 1-subdivision of `g`. Originals and midpoints share two colours across
/// groups; each group gets twelve fresh division colours.
pub fn colour_merged(g: &BaseGraph, k: usize) -> Result<ColouredSubdivision, ConstructionError> {
    let m = g.edge_count();
    if k == 0 || k > m {
        return Err(ConstructionError::GroupCount { k, edges: m });
    }
    let (flat, sides) = one_subdivision(g);
    let k_colours = k as Colour;
    let (white, black) = (12 * k_colours + 1, 12 * k_colours + 2);
    let mut counts = vec![0; flat.edge_count()];
    let mut edge_colours: Vec<Vec<Colour>> = vec![Vec::new(); flat.edge_count()];
    for (i, group) in equitable_groups(m, k).into_iter().enumerate() {
        let flat_edges: Vec<usize> = group.flat_map(|j| [2 * j, 2 * j + 1]).collect();
        let mut local_of: Vec<Option<usize>> = vec![None; flat.vertex_count()];
        let mut touched: Vec<VertexId> = flat_edges.iter().flat_map(|&e| [flat.edges()[e].0, flat.edges()[e].1]).collect();
        touched.sort_unstable();
        touched.dedup();
        for (local, &v) in touched.iter().enumerate() {
            local_of[v] = Some(local);
        }
        let local = |v: VertexId| local_of[v].expect("touched vertex");
        let sub = BaseGraph::new(
            touched.len(),
            flat_edges.iter().map(|&e| (local(flat.edges()[e].0), local(flat.edges()[e].1))).collect(),
        )?;
        let sub_sides: Vec<Side> = touched.iter().map(|&v| sides[v]).collect();
        let t = thm6_sequence(sub.edge_count())?;
        let part = colour_by_blocks(&sub, &sub_sides, &t, 12 * i as Colour + 1, white, black)?;
        let s = part.coloured.graph();
        for (le, &e) in flat_edges.iter().enumerate() {
            counts[e] = s.division_path(le).len();
            edge_colours[e] = part.coloured.path_colours(s.division_path(le));
        }
    }
    let s = subdivide(&flat, &counts)?;
    let mut colours = original_colours(&s, &sides, white, black);
    for (e, cols) in edge_colours.iter().enumerate() {
        for (&v, &c) in s.division_path(e).iter().zip(cols) {
            colours[v] = c;
        }
    }
    let palette = (1..=12 * k_colours + 2).collect();
    let provenance =
        Provenance::new("graph-merged").with("vertices", g.vertex_count()).with("edges", m).with("k", k);
    Ok(ColouredSubdivision::new(s, colours, palette, provenance)?)
}
