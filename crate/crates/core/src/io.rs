//! JSON interchange and DOT export for coloured subdivisions.
//!
//! The JSON form lists vertices in id order (originals first), base edges
//! with their division paths from `u` to `v`, the palette and the
//! provenance. Serialization is canonical: parsing a serialized document and
//! serializing again reproduces the same bytes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph_model::{BaseGraph, Colour, ColouredSubdivision, GraphError, Provenance, SubdividedGraph, VertexId};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("{field}: {message}")]
    Schema { field: String, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn schema(field: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::Schema { field: field.into(), message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Original,
    Division,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexDoc {
    id: VertexId,
    kind: Kind,
    colour: Option<Colour>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    u: VertexId,
    v: VertexId,
    division: Vec<VertexId>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProvenanceDoc {
    construction: String,
    params: BTreeMap<String, i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    vertices: Vec<VertexDoc>,
    base_edges: Vec<EdgeDoc>,
    palette: Vec<Colour>,
    provenance: ProvenanceDoc,
}

/// Pretty-printed canonical JSON, newline-terminated.
pub fn to_json(c: &ColouredSubdivision) -> String {
    let g = c.graph();
    let doc = Document {
        vertices: (0..g.vertex_count())
            .map(|v| VertexDoc {
                id: v,
                kind: if g.is_original(v) { Kind::Original } else { Kind::Division },
                colour: Some(c.colour(v)),
            })
            .collect(),
        base_edges: g
            .base()
            .edges()
            .iter()
            .enumerate()
            .map(|(e, &(u, v))| EdgeDoc { u, v, division: g.division_path(e).to_vec() })
            .collect(),
        palette: c.palette().iter().copied().collect(),
        provenance: ProvenanceDoc {
            construction: c.provenance().construction.clone(),
            params: c.provenance().params.clone(),
        },
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("document serializes");
    out.push('\n');
    out
}

pub fn from_json(text: &str) -> Result<ColouredSubdivision, IoError> {
    let doc: Document = serde_json::from_str(text)
        .map_err(|e| IoError::Json { line: e.line(), column: e.column(), message: e.to_string() })?;
    let mut originals = 0;
    let mut colours = Vec::with_capacity(doc.vertices.len());
    for (i, vertex) in doc.vertices.iter().enumerate() {
        if vertex.id != i {
            return Err(schema(format!("vertices[{i}].id"), format!("expected id {i}, found {}", vertex.id)));
        }
        match vertex.kind {
            Kind::Original if originals < i => {
                return Err(schema(format!("vertices[{i}].kind"), "original vertices must precede division vertices"))
            }
            Kind::Original => originals += 1,
            Kind::Division => {}
        }
        let colour = vertex.colour.ok_or_else(|| schema(format!("vertices[{i}].colour"), format!("vertex {i} has no colour")))?;
        colours.push(colour);
    }
    let mut edges = Vec::with_capacity(doc.base_edges.len());
    let mut paths = Vec::with_capacity(doc.base_edges.len());
    for (e, edge) in doc.base_edges.into_iter().enumerate() {
        for (name, end) in [("u", edge.u), ("v", edge.v)] {
            if end >= originals {
                return Err(schema(format!("base_edges[{e}].{name}"), format!("{end} is not an original vertex")));
            }
        }
        if let Some(&d) = edge.division.iter().find(|&&d| d < originals || d >= doc.vertices.len()) {
            return Err(schema(format!("base_edges[{e}].division"), format!("{d} is not a division vertex")));
        }
        edges.push((edge.u, edge.v));
        paths.push(edge.division);
    }
    let base = BaseGraph::new(originals, edges)?;
    let graph = SubdividedGraph::from_parts(base, paths)?;
    if graph.vertex_count() != doc.vertices.len() {
        return Err(schema("vertices", format!("{} listed but base edges account for {}", doc.vertices.len(), graph.vertex_count())));
    }
    let palette: BTreeSet<Colour> = doc.palette.iter().copied().collect();
    if palette.len() != doc.palette.len() || !doc.palette.windows(2).all(|w| w[0] < w[1]) {
        return Err(schema("palette", "must be strictly increasing"));
    }
    let provenance = Provenance { construction: doc.provenance.construction, params: doc.provenance.params };
    Ok(ColouredSubdivision::new(graph, colours, palette, provenance)?)
}

const FILLS: [&str; 14] = [
    "#e6194b", "#3cb44b", "#ffe119", "#4363d8", "#f58231", "#911eb4", "#46f0f0", "#f032e6", "#bcf60c", "#fabebe",
    "#008080", "#e6beff", "#9a6324", "#aaffc3",
];

fn fill(c: &ColouredSubdivision, colour: Colour) -> &'static str {
    let rank = c.palette().range(..colour).count();
    FILLS[rank % FILLS.len()]
}

/// Graphviz rendering: originals as labelled boxes, division vertices as
/// points, filled by colour.
pub fn to_dot(c: &ColouredSubdivision) -> String {
    let g = c.graph();
    let mut out = String::from("graph subdivision {\n  node [style=filled];\n");
    for v in 0..g.vertex_count() {
        let colour = c.colour(v);
        let _ = if g.is_original(v) {
            writeln!(out, "  {v} [shape=box, label=\"{v}:{colour}\", fillcolor=\"{}\"];", fill(c, colour))
        } else {
            writeln!(out, "  {v} [shape=point, width=0.15, tooltip=\"{colour}\", fillcolor=\"{}\"];", fill(c, colour))
        };
    }
    for e in 0..g.base().edge_count() {
        for pair in g.edge_path(e).windows(2) {
            let _ = writeln!(out, "  {} -- {};", pair[0], pair[1]);
        }
    }
    out.push_str("}\n");
    out
}
