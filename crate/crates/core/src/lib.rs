//! Anagram-free colourings of graph subdivisions.

pub mod bounds;
pub mod graph_constructions;
pub mod graph_model;
pub mod io;
pub mod tree_constructions;
pub mod verifier;
pub mod words;
