use std::collections::{BTreeMap, BTreeSet};

use super::{BaseGraph, GraphError, SubdividedGraph, VertexId};

pub type Colour = u32;

/// Which construction produced a colouring, and with what parameters.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Provenance {
    pub construction: String,
    pub params: BTreeMap<String, i64>,
}

impl Provenance {
    pub fn new(construction: impl Into<String>) -> Self {
        Self { construction: construction.into(), params: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: impl TryInto<i64>) -> Self {
        let value = value.try_into().unwrap_or(i64::MAX);
        self.params.insert(key.to_owned(), value);
        self
    }
}

/// A subdivision together with a total vertex colouring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColouredSubdivision {
    graph: SubdividedGraph,
    colour: Vec<Colour>,
    palette: BTreeSet<Colour>,
    provenance: Provenance,
}

impl ColouredSubdivision {
    pub fn new(
        graph: SubdividedGraph,
        colour: Vec<Colour>,
        palette: BTreeSet<Colour>,
        provenance: Provenance,
    ) -> Result<Self, GraphError> {
        if colour.len() != graph.vertex_count() {
            return Err(GraphError::ColouringLength { expected: graph.vertex_count(), got: colour.len() });
        }
        if let Some((vertex, &c)) = colour.iter().enumerate().find(|(_, c)| !palette.contains(c)) {
            return Err(GraphError::ColourOutsidePalette { vertex, colour: c });
        }
        Ok(Self { graph, colour, palette, provenance })
    }

    /// Palette is exactly the set of colours used.
    pub fn with_used_palette(graph: SubdividedGraph, colour: Vec<Colour>, provenance: Provenance) -> Result<Self, GraphError> {
        let palette = colour.iter().copied().collect();
        Self::new(graph, colour, palette, provenance)
    }

    /// A coloured plain graph, seen as its own 0-subdivision.
    pub fn from_base(base: &BaseGraph, colour: Vec<Colour>) -> Result<Self, GraphError> {
        let graph = SubdividedGraph::from_parts(base.clone(), vec![Vec::new(); base.edge_count()])?;
        Self::with_used_palette(graph, colour, Provenance::new("plain"))
    }

    pub fn graph(&self) -> &SubdividedGraph {
        &self.graph
    }

    pub fn colours(&self) -> &[Colour] {
        &self.colour
    }

    pub fn colour(&self, v: VertexId) -> Colour {
        self.colour[v]
    }

    pub fn palette(&self) -> &BTreeSet<Colour> {
        &self.palette
    }

    /// Number of distinct colours actually used.
    pub fn colours_used(&self) -> usize {
        self.colour.iter().collect::<BTreeSet<_>>().len()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn set_provenance(&mut self, provenance: Provenance) {
        self.provenance = provenance;
    }

    pub fn path_colours(&self, path: &[VertexId]) -> Vec<Colour> {
        path.iter().map(|&v| self.colour[v]).collect()
    }
}
