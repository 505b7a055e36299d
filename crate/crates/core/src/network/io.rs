//! Network text format and DOT export.
//!
//! ```text
//! taxa a b c d
//! edge a x
//! edge b x
//! edge x y
//! edge c y
//! edge d y
//! ```
//!
//! The `taxa` header fixes the linear order and must precede the edges.
//! Vertices named after a taxon are its leaf; `#` starts a comment.

use super::{Level1Network, Violation};
use crate::taxa::{TaxonError, TaxonSet};
use std::collections::HashMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkParseError {
    #[error("missing `taxa` header")]
    MissingHeader,
    #[error("`taxa` header given twice")]
    DuplicateHeader,
    #[error("expected `edge U V`")]
    MalformedEdge,
    #[error("unknown directive {0:?}")]
    UnknownDirective(String),
    #[error(transparent)]
    Taxon(#[from] TaxonError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkFileError {
    #[error("line {line}: {kind}")]
    Parse { line: usize, kind: NetworkParseError },
    #[error("invalid network: {0}")]
    Invalid(#[from] Violation),
}

pub fn parse_network(text: &str) -> Result<Level1Network, NetworkFileError> {
    let mut taxa: Option<TaxonSet> = None;
    let mut names: Vec<String> = Vec::new();
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let err = |kind| NetworkFileError::Parse { line: i + 1, kind };
        let content = raw.split('#').next().unwrap_or("").trim();
        let mut words = content.split_whitespace();
        let Some(directive) = words.next() else {
            continue;
        };
        match directive {
            "taxa" => {
                if taxa.is_some() {
                    return Err(err(NetworkParseError::DuplicateHeader));
                }
                let set = TaxonSet::from_names(words).map_err(|e| err(e.into()))?;
                for name in set.names() {
                    ids.insert(name.clone(), names.len());
                    names.push(name.clone());
                }
                taxa = Some(set);
            }
            "edge" => {
                if taxa.is_none() {
                    return Err(err(NetworkParseError::MissingHeader));
                }
                let (Some(u), Some(v), None) = (words.next(), words.next(), words.next()) else {
                    return Err(err(NetworkParseError::MalformedEdge));
                };
                let mut id = |name: &str| {
                    *ids.entry(name.to_string()).or_insert_with(|| {
                        names.push(name.to_string());
                        names.len() - 1
                    })
                };
                edges.push((id(u), id(v)));
            }
            other => return Err(err(NetworkParseError::UnknownDirective(other.to_string()))),
        }
    }
    let taxa = taxa.ok_or(NetworkFileError::Parse {
        line: text.lines().count().max(1),
        kind: NetworkParseError::MissingHeader,
    })?;
    Ok(Level1Network::from_edges(taxa, names, &edges)?)
}

pub fn write_network(g: &Level1Network) -> String {
    let mut out = String::from("taxa");
    for name in g.taxa().names() {
        out.push(' ');
        out.push_str(name);
    }
    out.push('\n');
    for (u, v) in g.edges() {
        let _ = writeln!(out, "edge {} {}", g.vertex_name(u), g.vertex_name(v));
    }
    out
}

fn dot_id(name: &str) -> String {
    format!("\"{}\"", name.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz description; leaves are drawn as plain labels.
pub fn write_dot(g: &Level1Network) -> String {
    let mut out = String::from("graph network {\n  node [shape=point];\n");
    for t in g.taxa().iter() {
        let name = g.taxa().name(t);
        let _ = writeln!(out, "  {} [shape=plaintext, label={}];", dot_id(name), dot_id(name));
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  {} -- {};", dot_id(g.vertex_name(u)), dot_id(g.vertex_name(v)));
    }
    out.push_str("}\n");
    out
}
