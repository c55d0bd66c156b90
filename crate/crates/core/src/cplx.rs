//! The `.cplx` text format.
//!
//! ```text
//! # two triangles sharing an edge
//! 1 2 3
//! 2 3 4
//! ```
//!
//! One facet per line, vertices separated by whitespace. Lines starting
//! with `#` are comments, and a `#` token starts a comment running to the
//! end of the line. A facet line `{}` is the empty face, so a file holding
//! only `{}` is the complex `{∅}` while a file with no facet lines is the
//! void complex.
//!
//! Vertices are either all non-negative integers, used as ids directly, or
//! labels. Labels get ids `0, 1, …` in the order of a `#! vertices:` line
//! if there is one, and in sorted order otherwise. A `%%relative` line
//! splits the file into a complex (above) and a subcomplex (below) that
//! share one vertex numbering.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::complex::{Face, RelativeComplex, SimplicialComplex, Vertex};

const RELATIVE: &str = "%%relative";
const PRAGMA: &str = "#! vertices:";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

/// Contents of a `.cplx` file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cplx {
    Complex(SimplicialComplex),
    Relative(RelativeComplex),
}

struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn valid_label(s: &str) -> bool {
    s.chars()
        .all(|c| c.is_alphanumeric() || matches!(c, '_' | '#' | '.' | '\''))
}

pub fn parse_cplx(input: &str) -> Result<Cplx, ParseError> {
    let mut pragma: Option<Vec<String>> = None;
    let mut sections: Vec<Vec<Vec<Token>>> = vec![Vec::new()];
    let mut separator_line = 0;

    for (n, raw) in input.lines().enumerate() {
        let line = n + 1;
        let trimmed = raw.trim();
        if let Some(rest) = trimmed.strip_prefix(PRAGMA) {
            if pragma.is_some() {
                return Err(ParseError::new(line, 1, "second vertex pragma"));
            }
            let names: Vec<String> = rest.split_whitespace().map(str::to_owned).collect();
            let mut seen = BTreeSet::new();
            for name in &names {
                if !seen.insert(name) {
                    return Err(ParseError::new(
                        line,
                        column_of(raw, name),
                        format!("vertex {name} listed twice in the pragma"),
                    ));
                }
            }
            pragma = Some(names);
            continue;
        }
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if trimmed == RELATIVE {
            if sections.len() == 2 {
                return Err(ParseError::new(line, 1, "second %%relative separator"));
            }
            sections.push(Vec::new());
            separator_line = line;
            continue;
        }
        if trimmed == "{}" {
            sections.last_mut().unwrap().push(Vec::new());
            continue;
        }
        let mut tokens = Vec::new();
        let mut offset = 0;
        for piece in raw.split_inclusive(char::is_whitespace) {
            let text = piece.trim_end();
            let column = raw[..offset].chars().count() + 1;
            offset += piece.len();
            if text.is_empty() {
                continue;
            }
            if text.starts_with('#') {
                break;
            }
            if !valid_label(text) {
                return Err(ParseError::new(
                    line,
                    column,
                    format!("invalid vertex token {text:?}"),
                ));
            }
            tokens.push(Token { text, line, column });
        }
        sections.last_mut().unwrap().push(tokens);
    }

    let numeric = pragma.is_none()
        && sections
            .iter()
            .flatten()
            .flatten()
            .all(|t| t.text.bytes().all(|b| b.is_ascii_digit()));

    let mut ids: BTreeMap<String, Vertex> = BTreeMap::new();
    let mut labels: BTreeMap<Vertex, String> = BTreeMap::new();
    if !numeric {
        let mut order: Vec<String> = pragma.unwrap_or_default();
        let listed: BTreeSet<String> = order.iter().cloned().collect();
        let rest: BTreeSet<String> = sections
            .iter()
            .flatten()
            .flatten()
            .map(|t| t.text.to_owned())
            .filter(|t| !listed.contains(t))
            .collect();
        order.extend(rest);
        for (i, name) in order.into_iter().enumerate() {
            ids.insert(name.clone(), i as Vertex);
            labels.insert(i as Vertex, name);
        }
    }

    let mut complexes = Vec::new();
    for section in &sections {
        let mut facets = Vec::new();
        for tokens in section {
            let mut seen: BTreeSet<Vertex> = BTreeSet::new();
            for t in tokens {
                let v = if numeric {
                    t.text.parse::<Vertex>().map_err(|_| {
                        ParseError::new(
                            t.line,
                            t.column,
                            format!("vertex id {} is too large", t.text),
                        )
                    })?
                } else {
                    ids[t.text]
                };
                if !seen.insert(v) {
                    return Err(ParseError::new(
                        t.line,
                        t.column,
                        format!("vertex {} repeated in facet", t.text),
                    ));
                }
            }
            facets.push(Face::new(seen));
        }
        complexes.push(SimplicialComplex::from_facets(facets).with_labels(labels.clone()));
    }

    if complexes.len() == 1 {
        return Ok(Cplx::Complex(complexes.pop().unwrap()));
    }
    let sub = complexes.pop().unwrap();
    let total = complexes.pop().unwrap();
    RelativeComplex::new(total, sub)
        .map(Cplx::Relative)
        .map_err(|e| ParseError::new(separator_line, 1, e.to_string()))
}

fn column_of(raw: &str, token: &str) -> usize {
    raw.find(token).map_or(1, |i| raw[..i].chars().count() + 1)
}

/// Writes a complex so that [`parse_cplx`] reads it back unchanged. Labels
/// are written (with a vertex pragma) when every vertex id `0..n` has one.
pub fn write_cplx(c: &SimplicialComplex) -> String {
    let mut out = String::new();
    let names = label_names(c);
    if let Some(names) = &names {
        let _ = writeln!(out, "{PRAGMA} {}", names.join(" "));
    }
    write_facets(&mut out, c, names.as_deref());
    out
}

pub fn write_relative_cplx(r: &RelativeComplex) -> String {
    let mut out = String::new();
    let merged = SimplicialComplex::from_facets(r.total().facets()).with_labels(
        r.total()
            .labels()
            .iter()
            .chain(r.sub().labels())
            .map(|(k, v)| (*k, v.clone()))
            .collect(),
    );
    let names = label_names(&merged);
    if let Some(names) = &names {
        let _ = writeln!(out, "{PRAGMA} {}", names.join(" "));
    }
    write_facets(&mut out, r.total(), names.as_deref());
    let _ = writeln!(out, "{RELATIVE}");
    write_facets(&mut out, r.sub(), names.as_deref());
    out
}

fn label_names(c: &SimplicialComplex) -> Option<Vec<String>> {
    let labels = c.labels();
    if labels.is_empty() {
        return None;
    }
    let n = labels.len() as Vertex;
    let dense = labels.keys().copied().eq(0..n) && c.vertices().iter().all(|&v| v < n);
    let clean = labels.values().all(|l| {
        !l.is_empty()
            && valid_label(l)
            && !l.starts_with('#')
            && !l.bytes().all(|b| b.is_ascii_digit())
    });
    (dense && clean).then(|| labels.values().cloned().collect())
}

fn write_facets(out: &mut String, c: &SimplicialComplex, names: Option<&[String]>) {
    for facet in c.facets() {
        if facet.is_empty() {
            out.push_str("{}\n");
            continue;
        }
        let tokens: Vec<String> = facet
            .vertices()
            .iter()
            .map(|&v| match names {
                Some(n) => n[v as usize].clone(),
                None => v.to_string(),
            })
            .collect();
        out.push_str(&tokens.join(" "));
        out.push('\n');
    }
}
